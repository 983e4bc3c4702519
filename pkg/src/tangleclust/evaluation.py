"""Clustering quality metrics and experiment orchestration."""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .core import (
    CutPool,
    cost_pool,
    exp_distance_cost,
    graph_cut_cost,
    hamming_mean_cost,
    normalize_cost,
)
from .cutgen import axis_slices, column_cuts, kl_cuts, random_projection_cuts
from .errors import BadParamsError, LengthMismatchError
from .models import gen_gmm, gen_mindsets, gen_sbm
from .postprocess import (
    attach_probabilities,
    condense,
    exp_weight,
    hard_assignments,
    prune_tree,
    soft_assignments,
    uniform_weight,
)
from .search import build_tree
from .util import SCHEMA_VERSION


def nmi(labels_a, labels_b) -> float:
    """Normalized mutual information between two labelings.

    Normalizer is the arithmetic mean of the label entropies; by convention
    the score is 0 when either labeling is constant.
    """
    a = np.asarray(labels_a).ravel()
    b = np.asarray(labels_b).ravel()
    if a.size != b.size:
        raise LengthMismatchError(f"length {a.size} vs {b.size}")
    n = a.size
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1))
    np.add.at(table, (ai, bi), 1.0)
    pij = table / n
    pi = pij.sum(axis=1)
    pj = pij.sum(axis=0)
    h_a = -np.sum(pi[pi > 0] * np.log(pi[pi > 0]))
    h_b = -np.sum(pj[pj > 0] * np.log(pj[pj > 0]))
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    if ((table > 0).sum(axis=0) == 1).all() and ((table > 0).sum(axis=1) == 1).all():
        return 1.0  # identical partitions up to relabeling
    mask = pij > 0
    mi = np.sum(pij[mask] * np.log(pij[mask] / np.outer(pi, pj)[mask]))
    return float(np.clip(mi / (0.5 * (h_a + h_b)), 0.0, 1.0))


def spearman_rho(x, y) -> float:
    """Spearman rank correlation (average ranks for ties)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size:
        raise LengthMismatchError(f"length {x.size} vs {y.size}")
    if x.size < 2:
        raise LengthMismatchError("need at least 2 observations")
    return float(stats.spearmanr(x, y).statistic)


def _resolve_weighting(spec, pool: CutPool):
    """Accept None (uniform), a callable, "exp", or {"kind": ..., "lam": ...}."""
    if spec is None or spec == "uniform":
        return uniform_weight
    if callable(spec):
        return spec
    if spec == "exp":
        spec = {"kind": "exp"}
    if isinstance(spec, dict):
        if spec.get("kind", "uniform") == "uniform":
            return uniform_weight
        if spec["kind"] == "exp":
            costs = [c.cost for c in pool.cuts]
            return exp_weight(spec.get("lam", 1.0), min(costs))
    raise BadParamsError(f"unknown weighting {spec!r}")


@dataclass
class PipelineResult:
    pool: CutPool
    tree: object
    pruned: object
    condensed: object
    soft: np.ndarray
    labels: np.ndarray
    times: dict

    @property
    def tangle_count(self) -> int:
        return self.soft.shape[1]


def run_pipeline(pool: CutPool, cost_fn, a: int, prune_depth: int = 1,
                 weighting=None, max_psi=None, threads=None) -> PipelineResult:
    """Cost the cuts, search, prune, condense, and read off clusterings."""
    times = {}
    t0 = time.perf_counter()
    costed = cost_pool(pool, cost_fn, threads=threads)
    times["costing"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    tree = build_tree(costed, a, max_psi=max_psi, threads=threads)
    times["tree"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pruned = prune_tree(tree, prune_depth)
    ct = condense(pruned)
    attach_probabilities(ct, _resolve_weighting(weighting, costed))
    soft = soft_assignments(ct)
    labels = hard_assignments(soft)
    times["postprocess"] = time.perf_counter() - t0

    return PipelineResult(pool=costed, tree=tree, pruned=pruned, condensed=ct,
                          soft=soft, labels=labels, times=times)


@dataclass
class SeedRow:
    seed: int
    nmi: float
    tangle_count: int
    times: dict

    def as_dict(self) -> dict:
        return {"seed": self.seed, "nmi": self.nmi,
                "tangle_count": self.tangle_count, "times": self.times}


@dataclass
class ExperimentReport:
    config: dict
    rows: list = field(default_factory=list)

    def aggregates(self) -> dict:
        scores = np.array([r.nmi for r in self.rows])
        counts = np.array([r.tangle_count for r in self.rows])
        values, freq = np.unique(counts, return_counts=True)
        stage_means = {}
        for stage in self.rows[0].times:
            stage_means[stage] = float(np.mean([r.times[stage] for r in self.rows]))
        return {
            "nmi_mean": float(scores.mean()),
            "nmi_std": float(scores.std()),
            "tangle_count_mode": int(values[np.argmax(freq)]),
            "tangle_count_mean": float(counts.mean()),
            "time_mean": stage_means,
        }

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "rows": [r.as_dict() for r in self.rows],
            "aggregates": self.aggregates(),
        }


def default_agreement(scenario: str, params: dict) -> int:
    """A third of the smallest expected cluster, the usual rough lower bound."""
    if scenario == "questionnaire":
        smallest = params["n"] // params["k"]
    elif scenario == "sbm":
        smallest = params["n"] // params["blocks"]
    elif scenario == "gmm":
        smallest = params["n"] // len(params["centers"])
    else:
        raise BadParamsError(f"unknown scenario {scenario!r}")
    return max(1, smallest // 3)


def _questionnaire_stage(params, seed):
    inst = gen_mindsets(n=params["n"], m=params["m"], k=params["k"],
                        p=params["noise"], seed=seed)
    pool = column_cuts(inst.answers)
    cost_fn = lambda cut: hamming_mean_cost(cut, inst.answers)
    return pool, cost_fn, inst.labels


def _sbm_stage(params, seed):
    inst = gen_sbm(n=params["n"], blocks=params["blocks"], p=params["p"],
                   q=params["q"], seed=seed,
                   expected_mode=params.get("expected_mode", False))
    pool = kl_cuts(inst.graph, count=params.get("num_cuts", 20),
                   iterations=params.get("kl_iterations", 2), seed=seed)
    w = inst.graph.adjacency()
    if params.get("normalize", True):
        cost_fn = lambda cut: normalize_cost(graph_cut_cost(cut, w), cut)
    else:
        cost_fn = lambda cut: graph_cut_cost(cut, w)
    return pool, cost_fn, inst.labels


def _gmm_stage(params, seed, agreement):
    inst = gen_gmm(centers=params["centers"], sigma=params.get("sigma", 1.0),
                   n=params["n"], seed=seed)
    method = params.get("cut_method", "axis")
    if method == "axis":
        pool = axis_slices(inst.points, agreement)
    elif method == "projection":
        pool = random_projection_cuts(inst.points, params.get("num_cuts", 40), seed=seed)
    else:
        raise BadParamsError(f"unknown cut method {method!r}")
    coords = inst.points.coords
    cost_fn = lambda cut: exp_distance_cost(cut, coords)
    return pool, cost_fn, inst.labels


def run_experiment(config: dict) -> ExperimentReport:
    """Full pipeline per seed for one parameter point of a scenario."""
    scenario = config["scenario"]
    params = config["params"]
    seeds = config.get("seeds", list(range(10)))
    if isinstance(seeds, dict):
        seeds = list(range(seeds.get("base", 0), seeds.get("base", 0) + seeds["count"]))
    agreement = config.get("agreement") or default_agreement(scenario, params)
    report = ExperimentReport(config={**config, "agreement": agreement, "seeds": seeds})
    for seed in seeds:
        t0 = time.perf_counter()
        if scenario == "questionnaire":
            pool, cost_fn, truth = _questionnaire_stage(params, seed)
        elif scenario == "sbm":
            pool, cost_fn, truth = _sbm_stage(params, seed)
        elif scenario == "gmm":
            pool, cost_fn, truth = _gmm_stage(params, seed, agreement)
        else:
            raise BadParamsError(f"unknown scenario {scenario!r}")
        cutgen_time = time.perf_counter() - t0
        result = run_pipeline(pool, cost_fn, agreement,
                              prune_depth=config.get("prune_depth", 1),
                              weighting=config.get("weighting"),
                              max_psi=config.get("psi_cap"),
                              threads=config.get("threads"))
        times = {"cutgen": cutgen_time, **result.times}
        report.rows.append(SeedRow(seed=seed, nmi=nmi(result.labels, truth),
                                   tangle_count=result.tangle_count, times=times))
    return report


def run_sweep(config: dict) -> list:
    """Run one experiment per swept parameter value; no sweep means one point.

    Returns (x_value, ExperimentReport) pairs; x is None for a single point.
    """
    sweep = config.get("sweep")
    if not sweep:
        return [(None, run_experiment(config))]
    out = []
    for value in sweep["values"]:
        point = {k: v for k, v in config.items() if k != "sweep"}
        point["params"] = {**config["params"], sweep["param"]: value}
        out.append((value, run_experiment(point)))
    return out
