"""Experiment report artifacts: JSON, plot-data CSV, and rendered figures."""

import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .util import dump_json, write_csv


def sweep_rows(results) -> list:
    """Flatten (x, report) pairs into plot-data rows."""
    rows = []
    for x, report in results:
        agg = report.aggregates()
        rows.append({
            "x": float("nan") if x is None else x,
            "mean": agg["nmi_mean"],
            "std": agg["nmi_std"],
            "tangle_count": agg["tangle_count_mode"],
        })
    return rows


def write_report(results, config, outdir) -> dict:
    """Persist report.json, plot_data.csv and report.png; returns file paths."""
    outdir.mkdir(parents=True, exist_ok=True)
    comment = json.dumps(config, sort_keys=True)
    report_path = outdir / "report.json"
    dump_json({
        "config": config,
        "points": [{"x": x, "report": rep.as_dict()} for x, rep in results],
    }, report_path)
    rows = sweep_rows(results)
    csv_path = outdir / "plot_data.csv"
    write_csv(csv_path, [(r["x"], r["mean"], r["std"], r["tangle_count"]) for r in rows],
              header=("x", "mean", "std", "tangle_count"), config_comment=comment)
    fig_path = outdir / "report.png"
    render_sweep_figure(rows, fig_path,
                        xlabel=config.get("sweep", {}).get("param", "run"),
                        title=config.get("scenario", "experiment"))
    return {"report": report_path, "plot_data": csv_path, "figure": fig_path}


def render_sweep_figure(rows, path, xlabel="x", title="experiment") -> None:
    """Mean NMI with error bars plus discovered-tangle-count bars."""
    xs = [r["x"] for r in rows]
    if any(x != x for x in xs):  # single point without a swept value
        xs = list(range(len(rows)))
    means = [r["mean"] for r in rows]
    stds = [r["std"] for r in rows]
    counts = [r["tangle_count"] for r in rows]

    fig, ax = plt.subplots(figsize=(6, 4))
    span = (max(xs) - min(xs)) or 1.0
    ax2 = ax.twinx()
    ax2.bar(xs, counts, width=0.03 * span, color="lightgray", zorder=1,
            label="tangles")
    ax2.set_ylabel("number of tangles")
    ax2.set_ylim(0, max(counts) + 1)
    ax.errorbar(xs, means, yerr=stds, fmt="o-", color="tab:green", capsize=3,
                zorder=2, label="nmi")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("nmi")
    ax.set_ylim(-0.02, 1.05)
    ax.set_title(title)
    ax.set_zorder(ax2.get_zorder() + 1)
    ax.patch.set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
