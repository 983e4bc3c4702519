"""Object universe, bipartitions as bit-vectors, and cost functions.

A cut is stored once, in canonical form: the side containing object 0 is
``members``.  All cost functions are symmetric in the two sides, so the
canonical representative carries the full information of the unordered
pair {A, A^c}.
"""

from dataclasses import dataclass, field

import numpy as np

from . import bitset
from .errors import (
    EmptySideError,
    LengthMismatchError,
    UniverseMismatchError,
)
from .util import parallel_map


@dataclass(frozen=True)
class ObjectUniverse:
    """The indexed object set {0, ..., n-1}."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise EmptySideError("universe needs at least one object")


@dataclass(frozen=True)
class Bipartition:
    """One cut of the object set.

    ``members`` is the canonical side (the one containing object 0) as a
    boolean vector; the complement is implicit.  ``cost`` is attached by
    :func:`cost_pool` and stays ``None`` until then.
    """

    id: int
    members: np.ndarray
    cost: float | None = None
    meta: object = None
    packed: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = np.asarray(self.members, dtype=bool)
        members.flags.writeable = False
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "packed", bitset.pack(members))

    @property
    def n(self) -> int:
        return self.members.size

    @property
    def size_a(self) -> int:
        return int(self.members.sum())

    def complement(self) -> np.ndarray:
        return ~self.members

    def with_cost(self, cost: float) -> "Bipartition":
        return Bipartition(id=self.id, members=self.members, cost=float(cost), meta=self.meta)


def make_cut(membership, id: int = 0, meta=None) -> Bipartition:
    """Build a canonical bipartition from a 0/1 membership vector.

    The stored side is the one containing object 0, so a membership vector
    and its complement produce the same cut.  Raises ``EmptySideError`` for
    constant vectors.
    """
    mask = np.asarray(membership, dtype=bool)
    if mask.ndim != 1:
        raise LengthMismatchError("membership must be a flat vector")
    if mask.all() or not mask.any():
        raise EmptySideError("both sides of a cut must be non-empty")
    if not mask[0]:
        mask = ~mask
    return Bipartition(id=id, members=mask, meta=meta)


@dataclass(frozen=True)
class CutPool:
    """A sequence of bipartitions over a fixed universe.

    Uncosted pools keep generation order; :func:`cost_pool` returns a pool
    sorted by (cost, id), which is the canonical processing order.
    """

    universe: ObjectUniverse
    cuts: tuple

    def __post_init__(self):
        n = self.universe.n
        for cut in self.cuts:
            if cut.n != n:
                raise UniverseMismatchError(
                    f"cut {cut.id} has {cut.n} objects, universe has {n}"
                )
        object.__setattr__(self, "cuts", tuple(self.cuts))

    def __len__(self) -> int:
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    @property
    def n(self) -> int:
        return self.universe.n

    def costs(self) -> list:
        return [c.cost for c in self.cuts]


def cost_pool(pool: CutPool, cost_fn, threads=None) -> CutPool:
    """Evaluate ``cost_fn`` on every cut and return the (cost, id)-sorted pool.

    Per-cut evaluation is independent and may run on a thread pool; the
    result order is canonical either way.
    """
    costs = parallel_map(cost_fn, pool.cuts, threads=threads)
    for c in costs:
        if not np.isfinite(c):
            raise ValueError("cut costs must be finite")
    costed = [cut.with_cost(c) for cut, c in zip(pool.cuts, costs)]
    costed.sort(key=lambda c: (c.cost, c.id))
    return CutPool(universe=pool.universe, cuts=tuple(costed))


def hamming_agreement(u, v) -> int:
    """Number of coordinates on which two binary vectors agree."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise LengthMismatchError(f"length {u.shape} vs {v.shape}")
    return int(np.count_nonzero(u == v))


def mean_similarity_cost(cut: Bipartition, sim) -> float:
    """Mean of ``sim(i, j)`` over all cross pairs of the cut.

    ``sim`` is a symmetric callback on object indices.  Exact O(|A|*|A^c|)
    evaluation; use :func:`hamming_mean_cost` for binary matrices at scale.
    """
    a_idx = np.flatnonzero(cut.members)
    b_idx = np.flatnonzero(~cut.members)
    total = 0.0
    for i in a_idx:
        for j in b_idx:
            total += sim(int(i), int(j))
    return total / (len(a_idx) * len(b_idx))


def hamming_mean_cost(cut: Bipartition, matrix) -> float:
    """Mean Hamming agreement over cross pairs of a binary matrix.

    Equals ``mean_similarity_cost`` with the agreement kernel: the cross-pair
    sum decomposes per column into (ones in A)*(ones in A^c) plus the
    zero-zero counterpart, which avoids materializing pairs.
    """
    x = np.asarray(matrix)
    if x.shape[0] != cut.n:
        raise UniverseMismatchError("matrix rows and cut length differ")
    x = x.astype(np.float64)
    ca = x[cut.members].sum(axis=0)
    cb = x[~cut.members].sum(axis=0)
    na = cut.size_a
    nb = cut.n - na
    agree = ca @ cb + (na - ca) @ (nb - cb)
    return float(agree) / (na * nb)


def graph_cut_cost(cut: Bipartition, adjacency) -> float:
    """Total weight of edges crossing the cut.

    ``adjacency`` is a symmetric n x n weight matrix with zero diagonal.
    """
    w = np.asarray(adjacency, dtype=np.float64)
    if w.shape != (cut.n, cut.n):
        raise UniverseMismatchError("adjacency shape does not match cut")
    a = cut.members.astype(np.float64)
    b = 1.0 - a
    return float(a @ (w @ b))


def exp_distance_cost(cut: Bipartition, points, block: int = 1024) -> float:
    """Sum of exp(-||v - u||) over all cross pairs of a point cloud.

    Exact pair enumeration, evaluated in row blocks to bound memory.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] != cut.n:
        raise UniverseMismatchError("point count does not match cut")
    a = pts[cut.members]
    b = pts[~cut.members]
    if a.shape[0] > b.shape[0]:  # block over the smaller side
        a, b = b, a
    bb = (b * b).sum(axis=1)
    total = 0.0
    for start in range(0, a.shape[0], block):
        chunk = a[start : start + block]
        aa = (chunk * chunk).sum(axis=1)
        d2 = aa[:, None] + bb[None, :] - 2.0 * (chunk @ b.T)
        np.maximum(d2, 0.0, out=d2)
        total += float(np.exp(-np.sqrt(d2)).sum())
    return total


def normalize_cost(raw: float, cut: Bipartition) -> float:
    """Balance-normalize a raw cost by the number of cross pairs."""
    na = cut.size_a
    return float(raw) / (na * (cut.n - na))
