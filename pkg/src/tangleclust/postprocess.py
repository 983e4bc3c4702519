"""Turn a tangle search tree into a soft dendrogram and clusterings.

The pipeline is: prune short leaf branches (they are artifacts of cost
gaps in the cut sample), condense the tree to its root, splitting nodes
and leaves, compute per-split membership probabilities from the cuts that
distinguish the two subtrees, and aggregate those along root paths into
per-object, per-tangle probabilities.
"""

import warnings

import numpy as np

from .errors import (
    BadParamsError,
    InvalidSelectionError,
    MissingAxisMetadataError,
    NoDistinguishingCutsError,
)
from .search import TangleNode, TangleSearchTree
from .util import SCHEMA_VERSION


def uniform_weight(cost) -> float:
    """Default cut weighting: every distinguishing cut counts the same."""
    return 1.0


def exp_weight(lam: float, cost_min: float):
    """Non-increasing weighting h(c) = exp(-lam * (c - cost_min))."""
    if lam < 0:
        raise BadParamsError("lambda must be >= 0")

    def h(cost):
        return float(np.exp(-lam * (cost - cost_min)))

    return h


def prune_tree(tree: TangleSearchTree, depth: int) -> TangleSearchTree:
    """Remove leaf branches of length <= ``depth``.

    Branch length is counted from a leaf up to its closest ancestor that is
    a splitting node or the root.  Removal rounds are applied simultaneously
    and repeated until stable, so the result is order-independent and
    pruning twice at the same depth changes nothing.
    """
    if depth < 0:
        raise BadParamsError("prune depth must be >= 0")
    if depth == 0:
        return tree

    alive = {id(n) for n in tree.nodes}

    def alive_children(node):
        return [c for c in node.children if id(c) in alive]

    while True:
        doomed = set()
        for node in tree.nodes:
            if id(node) not in alive or node is tree.root:
                continue
            if alive_children(node):
                continue
            # climb through single-child ancestors to the nearest split/root
            chain = [node]
            cursor = node
            while True:
                parent = cursor.parent
                if parent is tree.root or len(alive_children(parent)) >= 2:
                    break
                chain.append(parent)
                cursor = parent
            if len(chain) <= depth:
                doomed.update(id(c) for c in chain)
        if not doomed:
            break
        alive -= doomed

    return _rebuild(tree, alive)


def _rebuild(tree: TangleSearchTree, alive) -> TangleSearchTree:
    """Copy the surviving nodes into a fresh tree with BFS ids."""
    copies = {}
    nodes = []
    for node in tree.nodes:  # tree.nodes is BFS-ordered
        if id(node) not in alive:
            continue
        parent_copy = None if node.parent is None else copies[id(node.parent)]
        copy = TangleNode(id=len(nodes), parent=parent_copy, level=node.level,
                          oriented=node.oriented, core=node.core,
                          maximal=node.maximal)
        if parent_copy is not None:
            parent_copy.children.append(copy)
        copies[id(node)] = copy
        nodes.append(copy)
    return TangleSearchTree(pool=tree.pool, agreement=tree.agreement,
                            root=copies[id(tree.root)], nodes=nodes,
                            num_cuts_processed=tree.num_cuts_processed)


class CondensedNode:
    """Node of the condensed tree; ``orig`` is the underlying tangle."""

    def __init__(self, id, kind, orig, parent, tree):
        self.id = id
        self.kind = kind  # root | splitting | leaf
        self.orig = orig
        self.parent = parent
        self.tree = tree  # the (pruned) search tree
        self.children = []  # [side-A branch, complement branch] at a split
        self.p = None
        self.p_right = None
        self.distinguishing = None  # pool positions
        self.distinguishing_right = None  # unanimous right-subtree directions

    @property
    def is_split(self) -> bool:
        return len(self.children) == 2

    def splitting_position(self):
        """Pool position of the cut its children orient."""
        return self.orig.level


class CondensedTree:
    """Root + splitting tangles + maximal tangles, with path contraction."""

    def __init__(self, tree: TangleSearchTree):
        self.tree = tree
        self.nodes = []
        self.root = self._build(tree.root, None, "root")

    def _build(self, orig, parent, kind):
        if kind != "root":
            kind = "splitting" if len(orig.children) == 2 else "leaf"
        node = CondensedNode(id=len(self.nodes), kind=kind, orig=orig,
                             parent=parent, tree=self.tree)
        self.nodes.append(node)
        for child in orig.children:  # side-A branch first at a split
            target = child
            while len(target.children) == 1:  # contract the path
                target = target.children[0]
            node.children.append(self._build(target, node, "inner"))
        return node

    def leaves(self) -> list:
        return [n for n in self.nodes if not n.children]

    def splits(self) -> list:
        return [n for n in self.nodes if n.is_split]

    @property
    def n(self) -> int:
        return self.tree.pool.n


def condense(tree: TangleSearchTree) -> CondensedTree:
    """Contract all paths of a (pruned) tree between root, splits and leaves."""
    return CondensedTree(tree)


def _leaves_below(cnode: CondensedNode) -> list:
    if not cnode.children:
        return [cnode]
    out = []
    for child in cnode.children:
        out.extend(_leaves_below(child))
    return out


def _distinguishing(split: CondensedNode):
    """Pool positions oriented unanimously and oppositely by the subtrees."""
    tree = split.tree
    right_leaves = _leaves_below(split.children[0])
    left_leaves = _leaves_below(split.children[1])
    right_dirs = [tree.orientation_tuple(leaf.orig) for leaf in right_leaves]
    left_dirs = [tree.orientation_tuple(leaf.orig) for leaf in left_leaves]
    depth = min(len(t) for t in right_dirs + left_dirs)
    positions, rdirs = [], []
    for pos in range(depth):
        r = {t[pos] for t in right_dirs}
        l = {t[pos] for t in left_dirs}
        if len(r) == 1 and len(l) == 1 and r != l:
            positions.append(pos)
            rdirs.append(next(iter(r)))
    return positions, rdirs


def distinguishing_cuts(split: CondensedNode) -> set:
    """Ids of the cuts that distinguish the two subtrees of a split."""
    positions, _ = _distinguishing(split)
    pool = split.tree.pool
    return {pool.cuts[pos].id for pos in positions}


def _right_probability(split: CondensedNode, positions, rdirs, h) -> np.ndarray:
    pool = split.tree.pool
    weights = np.array([h(pool.cuts[pos].cost) for pos in positions], dtype=np.float64)
    if (weights < 0).any():
        raise BadParamsError("weighting function produced a negative weight")
    denom = weights.sum()
    if denom <= 0:
        raise BadParamsError("weighting function vanishes on all distinguishing cuts")
    acc = np.zeros(pool.n)
    for w, pos, rdir in zip(weights, positions, rdirs):
        members = pool.cuts[pos].members
        acc += w * (members if rdir else ~members)
    return acc / denom


def branch_probabilities(split: CondensedNode, h=None) -> np.ndarray:
    """Per-object probability of the side-A (right) subtree of a split.

    Weighted vote of the distinguishing cuts: the probability is the
    h-weighted fraction of them that put the object on the right subtree's
    side.  Raises ``NoDistinguishingCutsError`` on an empty set.
    """
    if not split.is_split:
        raise BadParamsError("node has fewer than two children")
    positions, rdirs = _distinguishing(split)
    if not positions:
        raise NoDistinguishingCutsError(f"split node {split.id} has no distinguishing cuts")
    return _right_probability(split, positions, rdirs, h or uniform_weight)


def attach_probabilities(ct: CondensedTree, h=None) -> CondensedTree:
    """Compute p_right at every split and propagate p_t down from the root."""
    h = h or uniform_weight
    for split in ct.splits():
        positions, rdirs = _distinguishing(split)
        if not positions:
            # defensive: the splitting cut itself always distinguishes
            warnings.warn(f"split node {split.id} has no distinguishing cuts; "
                          "falling back to the splitting cut")
            positions, rdirs = [split.splitting_position()], [True]
        split.distinguishing = tuple(positions)
        split.distinguishing_right = tuple(rdirs)
        split.p_right = _right_probability(split, positions, rdirs, h)
    ct.root.p = np.ones(ct.n)
    for node in ct.nodes:  # parents precede children
        if node.is_split:
            node.children[0].p = node.p * node.p_right
            node.children[1].p = node.p * (1.0 - node.p_right)
        elif len(node.children) == 1:
            node.children[0].p = node.p.copy()
    return ct


def soft_assignments(ct: CondensedTree, selection=None) -> np.ndarray:
    """Probability matrix (objects x selected nodes, node-id order).

    The selection must cover every root-leaf path exactly once; the default
    is the set of all leaves.  Rows sum to 1.
    """
    if ct.root.p is None:
        attach_probabilities(ct)
    nodes = ct.leaves() if selection is None else list(selection)
    nodes = sorted(nodes, key=lambda n: n.id)
    chosen = {n.id for n in nodes}
    if len(chosen) != len(nodes):
        raise InvalidSelectionError("duplicate nodes in selection")
    for leaf in ct.leaves():
        covered = 0
        node = leaf
        while node is not None:
            covered += node.id in chosen
            node = node.parent
        if covered != 1:
            raise InvalidSelectionError(
                f"selection covers a root-leaf path {covered} times")
    return np.stack([n.p for n in nodes], axis=1)


def hard_assignments(soft: np.ndarray) -> np.ndarray:
    """Most-likely column per row; ties go to the lowest column index."""
    soft = np.asarray(soft)
    if soft.ndim != 2 or soft.shape[1] == 0:
        raise BadParamsError("soft matrix must be 2-D and non-empty")
    return np.argmax(soft, axis=1)


def core_intervals(leaf: TangleNode, pool, num_axes=None) -> list:
    """Tightest per-axis interval implied by a tangle over axis cuts.

    Keeps only the most restrictive bound per direction and axis;
    unbounded sides are +-inf.  Every oriented cut must carry axis
    metadata.
    """
    cuts_by_id = {c.id: c for c in pool.cuts}
    metas = [c.meta for c in pool.cuts if c.meta is not None]
    if num_axes is None:
        if not metas:
            raise MissingAxisMetadataError("pool carries no axis metadata")
        num_axes = max(m.axis for m in metas) + 1
    lower = np.full(num_axes, -np.inf)
    upper = np.full(num_axes, np.inf)
    for side in leaf.path():
        meta = cuts_by_id[side.cut_id].meta
        if meta is None:
            raise MissingAxisMetadataError(f"cut {side.cut_id} has no axis metadata")
        points_below = side.side_a == meta.below_side_a
        if points_below:
            upper[meta.axis] = min(upper[meta.axis], meta.threshold)
        else:
            lower[meta.axis] = max(lower[meta.axis], meta.threshold)
    return [(float(lo), float(hi)) for lo, hi in zip(lower, upper)]


def condensed_to_json_dict(ct: CondensedTree) -> dict:
    """Documented JSON form of the condensed tree with probabilities."""
    if ct.root.p is None:
        attach_probabilities(ct)
    pool = ct.tree.pool
    nodes = []
    for node in ct.nodes:
        entry = {
            "id": node.id,
            "kind": node.kind,
            "parent_id": None if node.parent is None else node.parent.id,
            "children": [c.id for c in node.children],
            "level": node.orig.level,
            "p": [float(x) for x in node.p],
        }
        if node.is_split:
            pos = node.splitting_position()
            entry["splitting_cut_id"] = pool.cuts[pos].id
            entry["height"] = pool.cuts[pos].cost
            entry["distinguishing_cut_ids"] = sorted(
                pool.cuts[p].id for p in node.distinguishing)
        nodes.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "num_objects": ct.n,
        "agreement": ct.tree.agreement,
        "nodes": nodes,
    }


def dendrogram_plot_data(ct: CondensedTree) -> dict:
    """Split heights and per-node probabilities for external plotting."""
    if ct.root.p is None:
        attach_probabilities(ct)
    pool = ct.tree.pool
    splits = []
    for node in ct.splits():
        pos = node.splitting_position()
        splits.append({
            "node_id": node.id,
            "height": pool.cuts[pos].cost,
            "right_child_id": node.children[0].id,
            "left_child_id": node.children[1].id,
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "splits": splits,
        "leaves": [n.id for n in ct.leaves()],
        "probabilities": {str(n.id): [float(x) for x in n.p] for n in ct.nodes},
    }
