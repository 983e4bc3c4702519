"""Tangle search tree: all consistent orientations of a cost-sorted cut prefix.

An orientation of a set of cuts is consistent when every triple of chosen
sides (drawn with repetition) intersects in at least ``a`` objects.  The
tree is built breadth-first over the cut sequence; a node at level i
orients cuts 1..i, and its "core" (the inclusion-minimal oriented sides on
the root path) suffices for all consistency checks: shrinking a side can
only shrink intersections, so |A' n B n C| >= a for A' subset of A implies
the same for A.
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from . import bitset
from .core import CutPool
from .errors import TooLargeError
from .util import SCHEMA_VERSION, parallel_map

BRUTE_FORCE_LIMIT = 16


@dataclass(frozen=True)
class OrientedSide:
    """One oriented cut: which side of cut ``cut_id`` the tangle points to."""

    cut_id: int
    side_a: bool
    members: np.ndarray
    packed: np.ndarray

    @property
    def direction(self) -> str:
        return "A" if self.side_a else "complement"


@dataclass
class TangleNode:
    """A node of the tangle search tree (one tangle of the processed prefix)."""

    id: int
    parent: "TangleNode | None"
    level: int
    oriented: OrientedSide | None
    core: tuple
    maximal: bool = False
    children: list = field(default_factory=list)

    def path(self) -> list:
        """Oriented sides from the root down to this node."""
        sides = []
        node = self
        while node.oriented is not None:
            sides.append(node.oriented)
            node = node.parent
        sides.reverse()
        return sides


def consistent(core, candidate, a: int) -> bool:
    """Check Eq.-style triple consistency of ``candidate`` against a core.

    ``core`` is a collection of boolean membership vectors assumed already
    consistent; returns True iff every triple from core + candidate that
    contains the candidate (repetition allowed) intersects in >= ``a``
    objects.  Repetition makes the singleton and pair conditions implicit.
    """
    packed_core = tuple(bitset.pack(c) for c in core)
    return _consistent_packed(packed_core, bitset.pack(candidate), a)


def _consistent_packed(core: tuple, cand: np.ndarray, a: int) -> bool:
    if bitset.count(cand) < a:
        return False
    pair = []
    for b in core:
        cb = cand & b
        if bitset.count(cb) < a:
            return False
        pair.append(cb)
    for i in range(len(core)):
        for j in range(i + 1, len(core)):
            if bitset.count_and2(pair[i], core[j]) < a:
                return False
    return True


def extend_tangle(node: TangleNode, side: OrientedSide, a: int) -> TangleNode | None:
    """Try to orient the next cut for ``node``; None signals inconsistency.

    On success the child's core is the parent core with inclusion-minimality
    restored: unchanged if some core set is contained in ``side``, otherwise
    strict supersets of ``side`` are replaced by it.
    """
    for c in node.core:
        if bitset.is_subset(c, side.packed):
            # side contains a core set: consistency is implied, core unchanged
            return TangleNode(id=-1, parent=node, level=node.level + 1,
                              oriented=side, core=node.core)
    if not _consistent_packed(node.core, side.packed, a):
        return None
    new_core = tuple(c for c in node.core if not bitset.is_subset(side.packed, c))
    new_core = new_core + (side.packed,)
    return TangleNode(id=-1, parent=node, level=node.level + 1,
                      oriented=side, core=new_core)


@dataclass
class TangleSearchTree:
    """Search tree over a cut pool; root-to-node paths enumerate all tangles."""

    pool: CutPool
    agreement: int
    root: TangleNode
    nodes: list                 # BFS order, nodes[0] is the root
    num_cuts_processed: int

    def nodes_at_level(self, level: int) -> list:
        return [n for n in self.nodes if n.level == level]

    def leaves(self) -> list:
        return [n for n in self.nodes if not n.children]

    def max_level(self) -> int:
        return max(n.level for n in self.nodes)

    def orientation_tuple(self, node: TangleNode) -> tuple:
        """Directions (True = canonical side) along the path, in pool order."""
        return tuple(side.side_a for side in node.path())

    def full_orientations(self) -> frozenset:
        """All tangles that orient every processed cut."""
        full = self.nodes_at_level(self.num_cuts_processed)
        return frozenset(self.orientation_tuple(n) for n in full)

    def to_json_dict(self) -> dict:
        nodes = []
        for n in self.nodes:
            nodes.append({
                "id": n.id,
                "parent_id": None if n.parent is None else n.parent.id,
                "level": n.level,
                "cut_id": None if n.oriented is None else n.oriented.cut_id,
                "direction": None if n.oriented is None else n.oriented.direction,
                "maximal": n.maximal,
            })
        return {
            "schema_version": SCHEMA_VERSION,
            "agreement": self.agreement,
            "num_objects": self.pool.n,
            "num_cuts_processed": self.num_cuts_processed,
            "cut_ids": [c.id for c in self.pool.cuts],
            "cut_costs": [c.cost for c in self.pool.cuts],
            "nodes": nodes,
        }


def _cut_sides(cut):
    comp = ~cut.members
    return (
        OrientedSide(cut.id, True, cut.members, cut.packed),
        OrientedSide(cut.id, False, comp, bitset.pack(comp)),
    )


def build_tree(pool: CutPool, a: int, max_psi=None, threads=None) -> TangleSearchTree:
    """Build the tangle search tree for a pool in its stored (sorted) order.

    Cuts with cost above ``max_psi`` are ignored.  Nodes that cannot be
    extended by some processed cut are flagged maximal; once no node of a
    level extends, later cuts cannot be oriented either and the build stops.
    Output is deterministic for a fixed (pool, a) and any thread count.
    """
    if a < 1:
        raise ValueError("agreement parameter must be >= 1")
    cuts = list(pool.cuts)
    if max_psi is not None:
        cuts = [c for c in cuts if c.cost is not None and c.cost <= max_psi]

    root = TangleNode(id=0, parent=None, level=0, oriented=None, core=())
    nodes = [root]
    frontier = [root]
    processed = 0
    for cut in cuts:
        side_a, side_c = _cut_sides(cut)

        def try_extend(parent):
            out = []
            for side in (side_a, side_c):
                child = extend_tangle(parent, side, a)
                if child is not None:
                    out.append(child)
            return out

        results = parallel_map(try_extend, frontier, threads=threads)
        processed += 1
        next_frontier = []
        for parent, children in zip(frontier, results):
            if not children:
                parent.maximal = True
                continue
            for child in children:
                child.id = len(nodes)
                parent.children.append(child)
                nodes.append(child)
                next_frontier.append(child)
        if not next_frontier:
            # no tangle orients this cut, so no longer prefix has one either
            break
        frontier = next_frontier
    return TangleSearchTree(pool=pool, agreement=a, root=root, nodes=nodes,
                            num_cuts_processed=processed)


def brute_force_tangles(pool: CutPool, a: int, limit: int = BRUTE_FORCE_LIMIT) -> frozenset:
    """Testing oracle: check Eq.-style consistency of every orientation.

    Enumerates all 2^m orientations of the pool and keeps those whose side
    triples (with repetition) all intersect in >= ``a`` objects.  Returns a
    set of direction tuples (True = canonical side) in pool order.
    Exponential; refuses pools larger than ``limit``.
    """
    m = len(pool.cuts)
    if m > limit:
        raise TooLargeError(f"{m} cuts exceeds brute-force limit {limit}")
    if m == 0:
        return frozenset({()})

    packed = []
    for cut in pool.cuts:
        packed.append((bitset.pack(~cut.members), cut.packed))  # index by bool

    combos = np.ones((2 ** m, m), dtype=bool)
    ints = np.arange(2 ** m)
    for i in range(m):
        combos[:, i] = (ints >> i) & 1

    ok = np.ones(2 ** m, dtype=bool)
    for i, j, k in combinations_with_replacement(range(m), 3):
        table = np.empty((2, 2, 2), dtype=np.int64)
        for bi in (0, 1):
            for bj in (0, 1):
                for bk in (0, 1):
                    table[bi, bj, bk] = bitset.count_and3(
                        packed[i][bi], packed[j][bj], packed[k][bk]
                    )
        sizes = table[combos[:, i].astype(np.int8),
                      combos[:, j].astype(np.int8),
                      combos[:, k].astype(np.int8)]
        ok &= sizes >= a
        if not ok.any():
            return frozenset()
    return frozenset(tuple(bool(b) for b in row) for row in combos[ok])
