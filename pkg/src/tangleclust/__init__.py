"""Clustering by consistent orientations of cuts, with a soft dendrogram output."""

from .core import (
    Bipartition,
    CutPool,
    ObjectUniverse,
    cost_pool,
    exp_distance_cost,
    graph_cut_cost,
    hamming_agreement,
    hamming_mean_cost,
    make_cut,
    mean_similarity_cost,
    normalize_cost,
)
from .cutgen import (
    AxisCutMeta,
    Graph,
    PointCloud,
    axis_slices,
    column_cuts,
    exhaustive_cuts,
    kl_cuts,
    random_projection_cuts,
)
from .evaluation import nmi, run_experiment, run_pipeline, run_sweep, spearman_rho
from .models import (
    check_nondegeneracy,
    expected_sbm_cut_cost,
    gen_gmm,
    gen_mindsets,
    gen_sbm,
    thm1_bounds,
    thm2_psi_range,
    thm_gauss_agreement_range,
)
from .postprocess import (
    CondensedTree,
    attach_probabilities,
    branch_probabilities,
    condense,
    core_intervals,
    distinguishing_cuts,
    hard_assignments,
    prune_tree,
    soft_assignments,
)
from .search import TangleSearchTree, brute_force_tangles, build_tree, consistent, extend_tangle

__version__ = "0.1.0"
