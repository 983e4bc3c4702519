"""Shared fixtures and independent-oracle helpers."""

from itertools import combinations_with_replacement

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tangleclust.core import CutPool, ObjectUniverse, make_cut
from tangleclust.search import TangleNode, TangleSearchTree, OrientedSide
from tangleclust import bitset

settings.register_profile(
    "suite", max_examples=50, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def full_triple_check(sides, a):
    """Independent consistency oracle: every triple (with repetition) >= a."""
    sides = [np.asarray(s, dtype=bool) for s in sides]
    for x, y, z in combinations_with_replacement(sides, 3):
        if np.count_nonzero(x & y & z) < a:
            return False
    return True


def random_pool(rng, n, m) -> CutPool:
    """Uncosted pool of m random non-constant cuts over n objects."""
    cuts = []
    for i in range(m):
        while True:
            mask = rng.random(n) < rng.uniform(0.2, 0.8)
            if mask.any() and not mask.all():
                break
        cuts.append(make_cut(mask, id=i))
    return CutPool(universe=ObjectUniverse(n), cuts=tuple(cuts))


def manual_tree(pool: CutPool, paths) -> TangleSearchTree:
    """Build a search tree holding exactly the given orientation paths.

    ``paths`` are direction tuples (True = canonical side) in pool order;
    shared prefixes share nodes, children are ordered side-A first, ids are
    BFS like the real builder's.
    """
    sides = {}
    for depth, cut in enumerate(pool.cuts):
        comp = ~cut.members
        sides[depth] = {
            True: OrientedSide(cut.id, True, cut.members, cut.packed),
            False: OrientedSide(cut.id, False, comp, bitset.pack(comp)),
        }
    root = TangleNode(id=0, parent=None, level=0, oriented=None, core=())
    by_prefix = {(): root}
    for path in paths:
        node = root
        for depth, direction in enumerate(path):
            key = tuple(path[: depth + 1])
            child = by_prefix.get(key)
            if child is None:
                child = TangleNode(id=-1, parent=node, level=depth + 1,
                                   oriented=sides[depth][direction], core=())
                node.children.append(child)
                by_prefix[key] = child
            node = child

    def reorder(node):
        node.children.sort(key=lambda c: not c.oriented.side_a)
        for child in node.children:
            reorder(child)

    reorder(root)
    nodes = []
    queue = [root]
    while queue:
        node = queue.pop(0)
        node.id = len(nodes)
        nodes.append(node)
        queue.extend(node.children)
    processed = max((len(p) for p in paths), default=0)
    return TangleSearchTree(pool=pool, agreement=1, root=root, nodes=nodes,
                            num_cuts_processed=processed)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
