"""Column cuts, local-search graph cuts, axis slices, projection cuts."""

import itertools

import numpy as np
import pytest

from tangleclust.core import graph_cut_cost, make_cut
from tangleclust.cutgen import (
    Graph,
    PointCloud,
    _kl_pass,
    axis_slices,
    column_cuts,
    kl_cuts,
    kl_refine,
    random_projection_cuts,
)
from tangleclust.errors import (
    BadParamsError,
    DegenerateCutWarning,
    TooFewNodesError,
)
from tangleclust.models import gen_gmm


def triangle_pair_graph():
    """Two unit triangles {0,1,2} and {3,4,5} joined by edge (2,3)."""
    edges = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
             (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 1.0)]
    return Graph(n=6, edges=tuple(edges))


class TestColumnCuts:
    def test_identity_matrix(self):
        pool = column_cuts(np.eye(2, dtype=int))
        assert len(pool) == 2
        for cut in pool:
            assert cut.size_a == 1 and cut.members[0]

    def test_duplicate_columns_kept(self):
        matrix = np.array([[1, 1], [0, 0], [1, 1]])
        pool = column_cuts(matrix)
        assert len(pool) == 2
        assert [c.id for c in pool] == [0, 1]

    def test_constant_column_skipped_with_warning(self):
        matrix = np.array([[1, 1, 0], [0, 1, 1]])
        with pytest.warns(DegenerateCutWarning):
            pool = column_cuts(matrix)
        assert [c.id for c in pool] == [0, 2]

    def test_one_cut_per_question(self, rng):
        matrix = (rng.random((50, 40)) < 0.5).astype(int)
        assert len(column_cuts(matrix)) == 40

    def test_rejects_non_binary(self):
        with pytest.raises(BadParamsError):
            column_cuts(np.array([[0, 2], [1, 0]]))


class TestKlCuts:
    def test_edgeless_returns_balanced_start(self):
        graph = Graph(n=8, edges=())
        pool = kl_cuts(graph, count=3, iterations=2, seed=1)
        for cut in pool:
            assert cut.size_a in (4,)  # |A| = n // 2, possibly complemented

    def test_two_triangles_all_balanced_starts(self):
        # every balanced start converges to the component cut in <= 2 passes
        graph = triangle_pair_graph()
        w = graph.adjacency()
        component = make_cut([1, 1, 1, 0, 0, 0])
        for left in itertools.combinations(range(6), 3):
            side = np.zeros(6, dtype=bool)
            side[list(left)] = True
            refined = kl_refine(w, side, iterations=2)
            assert np.array_equal(make_cut(refined).members, component.members)

    def test_committed_pass_reduces_cost_by_gain_sum(self, rng):
        for _ in range(10):
            n = 12
            w = rng.random((n, n)) * (rng.random((n, n)) < 0.4)
            w = np.triu(w, 1)
            w = w + w.T
            side = np.zeros(n, dtype=bool)
            side[rng.permutation(n)[: n // 2]] = True
            swaps, gains = _kl_pass(w, side)
            prefix = np.cumsum(gains)
            k = int(np.argmax(prefix))
            if prefix[k] <= 0:
                continue
            before = graph_cut_cost(make_cut(side), w)
            after_side = side.copy()
            for a_node, b_node in swaps[: k + 1]:
                after_side[a_node] = False
                after_side[b_node] = True
            after = graph_cut_cost(make_cut(after_side), w)
            assert before - after == pytest.approx(prefix[k], rel=1e-9)
            assert before - after >= 0

    def test_repeated_convergent_restarts_kept(self):
        # restarts that find the same cut stay in the pool as repeat votes
        graph = triangle_pair_graph()
        pool = kl_cuts(graph, count=10, iterations=2, seed=3)
        assert len(pool) == 10
        assert [c.id for c in pool] == list(range(10))
        component = make_cut([1, 1, 1, 0, 0, 0])
        assert all(np.array_equal(c.members, component.members) for c in pool)

    def test_determinism(self):
        graph = triangle_pair_graph()
        a = kl_cuts(graph, count=5, iterations=2, seed=7)
        b = kl_cuts(graph, count=5, iterations=2, seed=7)
        assert len(a) == len(b)
        for x, y in zip(a, b):
            assert np.array_equal(x.members, y.members)

    def test_too_few_nodes(self):
        with pytest.raises(TooFewNodesError):
            kl_cuts(Graph(n=1, edges=()), count=1)


class TestAxisSlices:
    def test_step_trace(self):
        pts = np.arange(10, dtype=float)[:, None]
        pool = axis_slices(pts, a=3)
        assert sorted(c.size_a for c in pool) == [1, 3, 5, 7, 9]

    def test_large_agreement_single_cut(self):
        pts = np.arange(6, dtype=float)[:, None]
        pool = axis_slices(pts, a=10)
        assert len(pool) == 1
        assert pool.cuts[0].size_a in (1, 5)  # canonical side may flip

    def test_nested_with_fixed_step(self, rng):
        pts = rng.random((23, 1))
        a = 4
        pool = axis_slices(pts, a)
        below = []
        for cut in pool.cuts:
            meta = cut.meta
            members = cut.members if meta.below_side_a else ~cut.members
            below.append(members)
        for prev, nxt in zip(below, below[1:]):
            assert (prev & ~nxt).sum() == 0  # nested
            assert (nxt & ~prev).sum() == a - 1

    def test_metadata_thresholds(self, rng):
        pts = rng.permutation(np.linspace(0.0, 5.0, 12))[:, None]
        for cut in axis_slices(pts, a=3).cuts:
            meta = cut.meta
            below = cut.members if meta.below_side_a else ~cut.members
            col = pts[:, meta.axis]
            assert (col[below] < meta.threshold).all()
            assert (col[~below] > meta.threshold).all()

    def test_multi_axis_counts_and_metadata(self, rng):
        pts = rng.random((15, 3))
        pool = axis_slices(pts, a=4)
        per_axis = {0: 0, 1: 0, 2: 0}
        for cut in pool:
            per_axis[cut.meta.axis] += 1
        single = axis_slices(pts[:, :1], a=4)
        assert per_axis[0] == len(single)
        assert len(pool) == sum(per_axis.values())

    def test_constant_axis_skipped(self):
        pts = np.stack([np.arange(8.0), np.zeros(8)], axis=1)
        with pytest.warns(DegenerateCutWarning):
            pool = axis_slices(pts, a=3)
        assert all(c.meta.axis == 0 for c in pool)

    def test_rejects_small_agreement(self):
        with pytest.raises(BadParamsError):
            axis_slices(np.arange(5.0)[:, None], a=1)


class TestRandomProjectionCuts:
    def test_separated_blobs_split_between(self, rng):
        pts = np.concatenate([rng.normal(-50, 0.5, 40), rng.normal(50, 0.5, 40)])
        pool = random_projection_cuts(pts[:, None], count=12, seed=2)
        expected = make_cut(np.arange(80) < 40)
        assert len(pool) == 12
        for cut in pool:
            assert np.array_equal(cut.members, expected.members)

    def test_identical_points_no_crash(self):
        with pytest.warns(DegenerateCutWarning):
            cloud = PointCloud(np.zeros((6, 2)))
        pool = random_projection_cuts(cloud, count=3, seed=0)
        for cut in pool:
            assert 0 < cut.size_a < 6

    def test_determinism(self, rng):
        pts = rng.random((30, 2))
        a = random_projection_cuts(pts, count=8, seed=5)
        b = random_projection_cuts(pts, count=8, seed=5)
        assert len(a) == len(b)
        for x, y in zip(a, b):
            assert np.array_equal(x.members, y.members)

    def test_four_gaussians_pairs_separated(self):
        # every ground-truth pair of clusters is split by some cut in
        # at least 9 of 10 seeds
        centers = np.array([[-4.0, -4.0], [4.0, -4.0], [-4.0, 4.0], [4.0, 4.0]])
        hits = 0
        for seed in range(10):
            inst = gen_gmm(centers, sigma=1.0, n=400, seed=seed)
            pool = random_projection_cuts(inst.points, count=40, seed=seed)
            separated = set()
            for cut in pool:
                majority = [cut.members[inst.labels == g].mean() > 0.5
                            for g in range(4)]
                for i in range(4):
                    for j in range(i + 1, 4):
                        if majority[i] != majority[j]:
                            separated.add((i, j))
            hits += separated == {(i, j) for i in range(4) for j in range(i + 1, 4)}
        assert hits >= 9
