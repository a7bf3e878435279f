"""Aggregate result rows into summary tables and box plots."""
from __future__ import annotations

import csv
import math
from statistics import fmean
from collections import defaultdict
from pathlib import Path

import numpy as np

from .pipeline import ResultRow

STATS = ("mean", "median", "q1", "q3")


def describe(values) -> dict[str, float]:
    a = np.asarray(values, dtype=np.float64)
    if a.size == 0:
        return {k: math.nan for k in STATS}
    q1, med, q3 = np.percentile(a, [25, 50, 75])
    return {"mean": fmean(a.tolist()), "median": float(med), "q1": float(q1), "q3": float(q3)}


def group(rows, key) -> dict:
    out = defaultdict(list)
    for r in rows:
        out[key(r)].append(r)
    return dict(sorted(out.items()))


def summary_by_size(rows: list[ResultRow]) -> list[dict]:
    """Distribution of reductions per (variant, qubits, gates)."""
    table = []
    for (variant, n, g), rs in group(rows, lambda r: (r.variant, r.qubits, r.gates)).items():
        entry = {"variant": variant, "qubits": n, "gates": g, "rows": len(rs)}
        for metric in ("gate_red_pct", "depth_red_pct"):
            for stat, v in describe([getattr(r, metric) for r in rs]).items():
                entry[f"{metric}_{stat}"] = v
        entry["density_mse_mean"] = fmean([r.density_mse for r in rs])
        table.append(entry)
    return table


def summary_by_gates(rows: list[ResultRow]) -> list[dict]:
    """Mean reduction and MSE per (variant, gates), pooled over qubit counts."""
    return [
        {
            "variant": variant,
            "gates": g,
            "rows": len(rs),
            "gate_red_pct_mean": fmean([r.gate_red_pct for r in rs]),
            "depth_red_pct_mean": fmean([r.depth_red_pct for r in rs]),
            "density_mse_mean": fmean([r.density_mse for r in rs]),
        }
        for (variant, g), rs in group(rows, lambda r: (r.variant, r.gates)).items()
    ]


def summary_by_variant(rows: list[ResultRow]) -> list[dict]:
    """One row per variant: grand means over every candidate row."""
    return [
        {
            "variant": variant,
            "rows": len(rs),
            "gate_red_pct_mean": fmean([r.gate_red_pct for r in rs]),
            "depth_red_pct_mean": fmean([r.depth_red_pct for r in rs]),
            "density_mse_mean": fmean([r.density_mse for r in rs]),
        }
        for variant, rs in group(rows, lambda r: r.variant).items()
    ]


def summary_selected(rows: list[ResultRow], mse_tol: float) -> list[dict]:
    """Per (variant, qubits, gates): how often a candidate within ``mse_tol``
    does not grow the transpiled gate count, and the mean best reduction."""
    table = []
    for (variant, n, g), rs in group(rows, lambda r: (r.variant, r.qubits, r.gates)).items():
        best = []
        for _, cands in group(rs, lambda r: (r.run, r.circuit)).items():
            ok = [r for r in cands if r.density_mse <= mse_tol and r.gate_red_pct >= 0]
            best.append(max((r.gate_red_pct, r.depth_red_pct) for r in ok) if ok else None)
        hits = [b for b in best if b is not None]
        table.append({
            "variant": variant,
            "qubits": n,
            "gates": g,
            "circuits": len(best),
            "found_fraction": len(hits) / len(best),
            "best_gate_red_pct_mean": fmean([b[0] for b in hits]) if hits else math.nan,
            "best_depth_red_pct_mean": fmean([b[1] for b in hits]) if hits else math.nan,
        })
    return table


def write_table(path: Path, table: list[dict]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        if not table:
            return path
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(table[0]))
        for entry in table:
            w.writerow([repr(v) if isinstance(v, float) else v for v in entry.values()])
    return path


def box_plot(rows: list[ResultRow], metric: str, path: Path, title: str) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_variant = group(rows, lambda r: r.variant)
    fig, axes = plt.subplots(1, max(len(by_variant), 1), figsize=(5 * max(len(by_variant), 1), 4), squeeze=False)
    for ax, (variant, rs) in zip(axes[0], by_variant.items()):
        sizes = group(rs, lambda r: (r.qubits, r.gates))
        ax.boxplot([[getattr(r, metric) for r in v] for v in sizes.values()])
        ax.set_xticks(range(1, len(sizes) + 1))
        ax.set_xticklabels([f"{n}q/{g}g" for n, g in sizes], rotation=45)
        ax.set_title(variant)
        ax.set_ylabel(title)
        ax.axhline(0.0, color="grey", lw=0.5)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=80, metadata={"Software": None})
    plt.close(fig)
    return path


def write_report(rows: list[ResultRow], out_dir: Path, mse_tol: float = 0.01) -> list[Path]:
    out_dir = Path(out_dir)
    paths = [
        write_table(out_dir / "summary_by_size.csv", summary_by_size(rows)),
        write_table(out_dir / "summary_by_gates.csv", summary_by_gates(rows)),
        write_table(out_dir / "summary_by_variant.csv", summary_by_variant(rows)),
        write_table(out_dir / "summary_selected.csv", summary_selected(rows, mse_tol)),
    ]
    if rows:
        paths.append(box_plot(rows, "gate_red_pct", out_dir / "gate_reduction.png", "gate reduction (%)"))
        paths.append(box_plot(rows, "depth_red_pct", out_dir / "depth_reduction.png", "depth reduction (%)"))
    return paths
