"""Command-line interface: ingestion, pipeline runs, artifact export.

Exit codes: 0 success, 1 usage error, 2 data/parameter error.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import evaluation, io, models, report
from .core import (
    cost_pool,
    exp_distance_cost,
    graph_cut_cost,
    hamming_mean_cost,
    normalize_cost,
)
from .cutgen import axis_slices, column_cuts, kl_cuts, random_projection_cuts
from .errors import TangleError
from .evaluation import run_pipeline, run_sweep
from .postprocess import condensed_to_json_dict, dendrogram_plot_data
from .search import brute_force_tangles, build_tree
from .util import dump_json, write_csv

FORMATS = ("binary-matrix", "edge-list", "points")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tangleclust",
                     description="Clustering by consistent orientations of cuts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", parents=[], help="run the full pipeline on a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--format", required=True, choices=FORMATS)
    p.add_argument("--agreement", required=True, type=int)
    p.add_argument("--cut-method",
                   choices=("columns", "kl", "axis", "projection"),
                   help="default: columns / kl / axis by format")
    p.add_argument("--num-cuts", type=int, default=20,
                   help="restart count for kl/projection cuts")
    p.add_argument("--kl-iterations", type=int, default=2)
    p.add_argument("--normalize-cost", dest="normalize", action="store_true",
                   default=None, help="divide costs by |A|*|A^c|")
    p.add_argument("--raw-cost", dest="normalize", action="store_false")
    p.add_argument("--prune", type=int, default=1)
    p.add_argument("--psi-cap", type=float, default=None)
    p.add_argument("--weighting", choices=("uniform", "exp"), default="uniform")
    p.add_argument("--weight-lambda", type=float, default=1.0,
                   help="decay rate for the exp weighting")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count())
    p.add_argument("--output-dir", required=True)

    p = sub.add_parser("generate", help="write synthetic instances to files")
    gsub = p.add_subparsers(dest="model", required=True)
    g = gsub.add_parser("mindsets")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--noise", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output-dir", required=True)
    g = gsub.add_parser("sbm")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--blocks", type=int, default=2)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--q", type=float, required=True)
    g.add_argument("--expected", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output-dir", required=True)
    g = gsub.add_parser("gmm")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--centers", default="-3,-3;3,-3;-3,3;3,3",
                   help="semicolon-separated centers, comma-separated "
                        "coordinates (use --centers=... for negatives)")
    g.add_argument("--sigma", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output-dir", required=True)

    p = sub.add_parser("bounds", help="evaluate recovery-guarantee bounds")
    bsub = p.add_subparsers(dest="theorem", required=True)
    b = bsub.add_parser("thm1")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--a", type=int, required=True)
    b.add_argument("--output")
    b = bsub.add_parser("thm2")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--q", type=float, required=True)
    b.add_argument("--a", type=int, required=True)
    b.add_argument("--output")
    b = bsub.add_parser("gauss")
    b.add_argument("--mu", required=True, help="comma-separated center")
    b.add_argument("--nu", required=True, help="comma-separated center")
    b.add_argument("--sigma", type=float, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--output")

    p = sub.add_parser("oracle", help="brute-force tangle check on small inputs")
    p.add_argument("--input", required=True)
    p.add_argument("--format", required=True, choices=FORMATS)
    p.add_argument("--agreement", required=True, type=int)
    p.add_argument("--cut-method", choices=("columns", "kl", "axis", "projection"))
    p.add_argument("--num-cuts", type=int, default=8)
    p.add_argument("--kl-iterations", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=16)
    p.add_argument("--output")

    p = sub.add_parser("bench", help="run a configured experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", required=True)

    return parser


def _load_data(args):
    """Read the input file and build the (uncosted) pool and cost function."""
    fmt = args.format
    method = args.cut_method
    if fmt == "binary-matrix":
        matrix = io.read_binary_matrix(args.input)
        method = method or "columns"
        if method != "columns":
            raise TangleError(f"cut method {method} not applicable to binary matrices")
        pool = column_cuts(matrix)
        cost_fn = lambda cut: hamming_mean_cost(cut, matrix)
        normalize_default = False  # mean agreement is already pair-normalized
    elif fmt == "edge-list":
        graph = io.read_edge_list(args.input)
        method = method or "kl"
        if method != "kl":
            raise TangleError(f"cut method {method} not applicable to graphs")
        pool = kl_cuts(graph, count=args.num_cuts,
                       iterations=args.kl_iterations, seed=args.seed)
        w = graph.adjacency()
        cost_fn = lambda cut: graph_cut_cost(cut, w)
        normalize_default = True
    else:
        points = io.read_points(args.input)
        method = method or "axis"
        if method == "axis":
            pool = axis_slices(points, args.agreement)
        elif method == "projection":
            pool = random_projection_cuts(points, count=args.num_cuts, seed=args.seed)
        else:
            raise TangleError(f"cut method {method} not applicable to points")
        cost_fn = lambda cut: exp_distance_cost(cut, points)
        normalize_default = False
    normalize = getattr(args, "normalize", None)
    if normalize is None:
        normalize = normalize_default
    if normalize:
        raw = cost_fn
        cost_fn = lambda cut: normalize_cost(raw(cut), cut)
    return pool, cost_fn


def _config_dict(args, keys) -> dict:
    return {k: getattr(args, k.replace("-", "_")) for k in keys}


def _cmd_cluster(args) -> int:
    cfg = _config_dict(args, ["input", "format", "agreement", "cut_method",
                              "num_cuts", "kl_iterations", "normalize", "prune",
                              "psi_cap", "weighting", "weight_lambda", "seed",
                              "threads"])
    cfg["command"] = "cluster"
    pool, cost_fn = _load_data(args)
    weighting = {"kind": args.weighting, "lam": args.weight_lambda}
    result = run_pipeline(pool, cost_fn, args.agreement, prune_depth=args.prune,
                          weighting=weighting, max_psi=args.psi_cap,
                          threads=args.threads)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    comment = json.dumps(cfg, sort_keys=True)

    write_csv(outdir / "labels.csv", [(int(x),) for x in result.labels],
              config_comment=comment)
    leaf_ids = [n.id for n in result.condensed.leaves()]
    write_csv(outdir / "soft.csv", result.soft, header=leaf_ids,
              config_comment=comment)
    tree_doc = result.tree.to_json_dict()
    tree_doc["config"] = cfg
    dump_json(tree_doc, outdir / "tree.json")
    cond_doc = condensed_to_json_dict(result.condensed)
    cond_doc["config"] = cfg
    dump_json(cond_doc, outdir / "condensed.json")
    dendro = dendrogram_plot_data(result.condensed)
    dendro["config"] = cfg
    dump_json(dendro, outdir / "dendrogram.json")
    dump_json(cfg, outdir / "run_config.json")
    print(f"{result.tangle_count} tangles over {len(result.pool)} cuts "
          f"-> {outdir}")
    return 0


def _cmd_generate(args) -> int:
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.model == "mindsets":
        inst = models.gen_mindsets(args.n, args.m, args.k, args.noise, seed=args.seed)
        io.write_binary_matrix(inst.answers, outdir / "answers.csv")
        io.write_labels(inst.labels, outdir / "labels.csv")
        io.write_binary_matrix(inst.mindsets, outdir / "mindsets.csv")
    elif args.model == "sbm":
        inst = models.gen_sbm(args.n, args.blocks, args.p, args.q, seed=args.seed,
                              expected_mode=args.expected)
        io.write_edge_list(inst.graph, outdir / "graph.edges")
        io.write_labels(inst.labels, outdir / "labels.csv")
    else:
        centers = [[float(x) for x in c.split(",")]
                   for c in args.centers.split(";")]
        inst = models.gen_gmm(centers, args.sigma, args.n, seed=args.seed)
        io.write_points(inst.points.coords, outdir / "points.csv")
        io.write_labels(inst.labels, outdir / "labels.csv")
        io.write_points(inst.centers, outdir / "centers.csv")
    print(f"wrote {args.model} instance to {outdir}")
    return 0


def _cmd_bounds(args) -> int:
    if args.theorem == "thm1":
        out = models.thm1_bounds(args.n, args.m, args.k, args.p, args.a).as_dict()
    elif args.theorem == "thm2":
        out = models.thm2_psi_range(args.n, args.p, args.q, args.a).as_dict()
    else:
        mu = [float(x) for x in args.mu.split(",")]
        nu = [float(x) for x in args.nu.split(",")]
        out = models.thm_gauss_agreement_range(mu, nu, args.sigma, args.n).as_dict()
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_oracle(args) -> int:
    pool, cost_fn = _load_data(args)
    costed = cost_pool(pool, cost_fn)
    orientations = brute_force_tangles(costed, args.agreement, limit=args.limit)
    tree = build_tree(costed, args.agreement)
    out = {
        "num_cuts": len(costed),
        "agreement": args.agreement,
        "brute_force_tangles": len(orientations),
        "tree_full_depth_tangles": len(tree.full_orientations()),
        "match": orientations == tree.full_orientations(),
    }
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_bench(args) -> int:
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise TangleError(f"cannot read config {args.config}: {exc}") from exc
    results = run_sweep(config)
    paths = report.write_report(results, config, Path(args.output_dir))
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {
        "cluster": _cmd_cluster,
        "generate": _cmd_generate,
        "bounds": _cmd_bounds,
        "oracle": _cmd_oracle,
        "bench": _cmd_bench,
    }[args.command]
    try:
        return handler(args)
    except TangleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
