"""Initial cut pools for the three data regimes: columns, graphs, points."""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import Bipartition, CutPool, ObjectUniverse, make_cut
from .errors import BadParamsError, DegenerateCutWarning, TooFewNodesError
from .util import derive_rng


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on nodes 0..n-1, no self-loops."""

    n: int
    edges: tuple  # (u, v, w) triples

    def __post_init__(self):
        for u, v, w in self.edges:
            if u == v:
                raise BadParamsError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise BadParamsError(f"edge ({u},{v}) out of range for n={self.n}")
            if w < 0:
                raise BadParamsError("edge weights must be >= 0")
        object.__setattr__(self, "edges", tuple(self.edges))

    def adjacency(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        for u, v, weight in self.edges:
            w[u, v] = weight
            w[v, u] = weight
        return w


@dataclass(frozen=True)
class PointCloud:
    """Real-valued points, one row per object."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        if not np.isfinite(coords).all():
            raise BadParamsError("point coordinates must be finite")
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)
        # pairwise-distinct points are assumed downstream but not required
        if len(np.unique(coords, axis=0)) < coords.shape[0]:
            warnings.warn("point cloud contains duplicate points", DegenerateCutWarning)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]


@dataclass(frozen=True)
class AxisCutMeta:
    """Axis-parallel cut annotation: cut separates at ``threshold`` on ``axis``.

    ``below_side_a`` records whether the canonical stored side is the
    below-threshold half-space (canonicalization may flip it).
    """

    axis: int
    threshold: float
    below_side_a: bool


def _as_coords(points) -> np.ndarray:
    if isinstance(points, PointCloud):
        return points.coords
    coords = np.asarray(points, dtype=np.float64)
    return coords[:, None] if coords.ndim == 1 else coords


def column_cuts(matrix) -> CutPool:
    """One cut per column of a binary matrix (rows are objects).

    Constant columns carry no bipartition and are skipped with a warning.
    Duplicated columns are kept; ids are the column indices.
    """
    x = np.asarray(matrix)
    if not np.isin(x, (0, 1)).all():
        raise BadParamsError("matrix entries must be 0/1")
    n, m = x.shape
    cuts = []
    for j in range(m):
        col = x[:, j] == 1
        if col.all() or not col.any():
            warnings.warn(f"column {j} is constant; skipped", DegenerateCutWarning)
            continue
        cuts.append(make_cut(col, id=j))
    return CutPool(universe=ObjectUniverse(n), cuts=tuple(cuts))


def _kl_pass(w: np.ndarray, side: np.ndarray):
    """One greedy pass of pair swaps; returns (swaps, gains)."""
    n = side.size
    work = side.copy()
    locked = np.zeros(n, dtype=bool)
    swaps, gains = [], []
    steps = int(min(work.sum(), n - work.sum()))
    for _ in range(steps):
        sigma = np.where(work, 1.0, -1.0)
        d = -(w @ sigma) * sigma  # external minus internal degree
        a_idx = np.flatnonzero(work & ~locked)
        b_idx = np.flatnonzero(~work & ~locked)
        if a_idx.size == 0 or b_idx.size == 0:
            break
        g = d[a_idx][:, None] + d[b_idx][None, :] - 2.0 * w[np.ix_(a_idx, b_idx)]
        flat = int(np.argmax(g))
        ai, bi = divmod(flat, b_idx.size)
        a_node, b_node = int(a_idx[ai]), int(b_idx[bi])
        gains.append(float(g[ai, bi]))
        swaps.append((a_node, b_node))
        work[a_node] = False
        work[b_node] = True
        locked[a_node] = True
        locked[b_node] = True
    return swaps, gains


def kl_refine(w: np.ndarray, side: np.ndarray, iterations: int) -> np.ndarray:
    """Local search for a cheap cut at fixed side sizes.

    Each pass greedily swaps unswapped pairs by gain
    g(a, b) = D_a + D_b - 2 w(a, b) and commits the gain-sum-maximizing
    prefix when it is positive, else stops early.
    """
    side = side.copy()
    for _ in range(iterations):
        swaps, gains = _kl_pass(w, side)
        if not gains:
            break
        prefix = np.cumsum(gains)
        k = int(np.argmax(prefix))
        if prefix[k] <= 0:
            break
        for a_node, b_node in swaps[: k + 1]:
            side[a_node] = False
            side[b_node] = True
    return side


def kl_cuts(graph: Graph, count: int, iterations: int = 2, seed: int = 0) -> CutPool:
    """Cuts from randomly restarted local search on a graph.

    Each restart refines a random balanced partition (|A| = n // 2) for at
    most ``iterations`` passes.  Restarts that converge to the same cut are
    kept: repeated cuts act as confidence votes downstream, lengthening the
    branches they support past the prune depth.
    """
    if count < 1 or iterations < 1:
        raise BadParamsError("count and iterations must be >= 1")
    if graph.n < 2:
        raise TooFewNodesError("need at least 2 nodes to cut")
    w = graph.adjacency()
    n = graph.n
    cuts = []
    for idx in range(count):
        rng = derive_rng(seed, "kl", idx)
        side = np.zeros(n, dtype=bool)
        side[rng.permutation(n)[: n // 2]] = True
        side = kl_refine(w, side, iterations)
        cuts.append(make_cut(side, id=idx))
    return CutPool(universe=ObjectUniverse(n), cuts=tuple(cuts))


def axis_slices(points, a: int) -> CutPool:
    """Axis-parallel slicing cuts stepping a-1 points at a time.

    Per axis the first cut isolates one point in sorted order, then each
    further threshold advances by a-1 points until the complement would
    shrink to a-1 or fewer.  Coordinate ties are broken by object index.
    Constant axes are skipped with a warning.
    """
    if a < 2:
        raise BadParamsError("agreement step must be >= 2")
    coords = _as_coords(points)
    n, d = coords.shape
    if n < 2:
        raise BadParamsError("need at least 2 points")
    cuts = []
    cid = 0
    for axis in range(d):
        col = coords[:, axis]
        if col.min() == col.max():
            warnings.warn(f"axis {axis} is constant; skipped", DegenerateCutWarning)
            continue
        order = np.argsort(col, kind="stable")
        size = 1
        sizes = [1]
        while n - size > a - 1:
            size += a - 1
            sizes.append(size)
        for size in sizes:
            members = np.zeros(n, dtype=bool)
            members[order[:size]] = True
            threshold = 0.5 * (col[order[size - 1]] + col[order[size]])
            meta = AxisCutMeta(axis=axis, threshold=float(threshold),
                               below_side_a=bool(members[0]))
            cuts.append(make_cut(members, id=cid, meta=meta))
            cid += 1
    return CutPool(universe=ObjectUniverse(n), cuts=tuple(cuts))


def exhaustive_cuts(n: int, limit: int = 16) -> CutPool:
    """Every bipartition of an n-object universe (2^(n-1) - 1 cuts).

    Only feasible for small n; used for exhaustive small-instance studies
    where a theorem's all-cuts setting is required.
    """
    if n < 2:
        raise BadParamsError("need at least 2 objects")
    if n > limit:
        raise BadParamsError(f"n={n} exceeds the exhaustive limit {limit}")
    cuts = []
    # canonical representatives: subsets containing object 0, except the full set
    for code in range(2 ** (n - 1) - 1):
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
        mask[1:] = (code >> np.arange(n - 1)) & 1
        cuts.append(make_cut(mask, id=code))
    return CutPool(universe=ObjectUniverse(n), cuts=tuple(cuts))


def _two_means_split(values: np.ndarray) -> int:
    """Exact 1-D 2-means: split index minimizing within-group variance."""
    n = values.size
    prefix = np.cumsum(values)
    prefix2 = np.cumsum(values ** 2)
    sizes = np.arange(1, n, dtype=np.float64)
    left_sum = prefix[:-1]
    left_sq = prefix2[:-1]
    sse_left = left_sq - left_sum ** 2 / sizes
    right_sum = prefix[-1] - left_sum
    right_sq = prefix2[-1] - left_sq
    sse_right = right_sq - right_sum ** 2 / (n - sizes)
    return int(np.argmin(sse_left + sse_right)) + 1


def random_projection_cuts(points, count: int, seed: int = 0) -> CutPool:
    """Cuts from 2-means splits of random one-dimensional projections.

    Directions are uniform on the sphere; the projected order breaks ties
    by object index.  Repeated cuts from different draws are kept, like in
    :func:`kl_cuts`.
    """
    if count < 1:
        raise BadParamsError("count must be >= 1")
    coords = _as_coords(points)
    n, d = coords.shape
    if n < 2:
        raise BadParamsError("need at least 2 points")
    cuts = []
    for idx in range(count):
        rng = derive_rng(seed, "proj", idx)
        direction = rng.standard_normal(d)
        norm = np.linalg.norm(direction)
        if norm == 0.0:
            direction = np.eye(d)[0]
            norm = 1.0
        proj = coords @ (direction / norm)
        order = np.argsort(proj, kind="stable")
        split = _two_means_split(proj[order])
        members = np.zeros(n, dtype=bool)
        members[order[:split]] = True
        cuts.append(make_cut(members, id=idx))
    return CutPool(universe=ObjectUniverse(n), cuts=tuple(cuts))
