"""Figure rendering for the report paths.

All functions save PNG files next to the delimited output and return the
saved paths. Rendering is headless (Agg); callers opt out via the CLI
``--no-figures`` flag.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .asymptotics import NormalityReport
from .estimators import HurstEstimate, Method
from .simharness import SimulationReport

__all__ = [
    "save_spectrum_figure",
    "save_acf_figure",
    "save_estimate_histograms",
    "save_boxplot_figure",
    "render_simulation_figures",
]

_METHOD_ORDER = (Method.TRADITIONAL, Method.SOLTANI, Method.MEDL, Method.MEDLA)


def _finish(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def save_spectrum_figure(estimates: list[HurstEstimate], path) -> Path:
    """Level statistics with their fitted regression lines, one panel per
    method (the log bases differ, so the axes are not shared)."""
    ncols = min(2, len(estimates))
    nrows = math.ceil(len(estimates) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.5 * ncols, 4.0 * nrows), squeeze=False)
    for ax in axes.flat[len(estimates):]:
        ax.set_visible(False)
    for ax, est in zip(axes.flat, estimates):
        js = np.array([p.j for p in est.points])
        ys = np.array([p.y for p in est.points])
        ax.plot(js, ys, "o", label="level statistic")
        grid = np.linspace(js.min() - 0.3, js.max() + 0.3, 2)
        ax.plot(grid, est.intercept + est.slope * grid, "-",
                label=f"fit: H = {est.hurst:.4f}")
        ax.set_xlabel("level j")
        ax.set_ylabel(est.points[0].statistic_kind)
        ax.set_title(est.method.value)
        ax.legend()
    fig.tight_layout()
    return _finish(fig, Path(path))


def save_acf_figure(lags, values, path, label: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    markerline, stemlines, baseline = ax.stem(lags, values)
    plt.setp(markerline, markersize=3.5)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("lag")
    ax.set_ylabel("autocorrelation")
    if label:
        ax.set_title(label)
    return _finish(fig, Path(path))


def save_estimate_histograms(
    estimates: np.ndarray, report: NormalityReport, path, label: str = ""
) -> Path:
    """Histogram plus Q-Q panel of an estimate batch against its normal law."""
    fig, (ax_h, ax_q) = plt.subplots(1, 2, figsize=(10.5, 4.0))
    ax_h.hist(estimates, bins=25, density=True, alpha=0.75)
    grid = np.linspace(min(estimates), max(estimates), 200)
    sd = math.sqrt(report.variance)
    pdf = np.exp(-0.5 * ((grid - report.mean) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))
    ax_h.plot(grid, pdf, "-", linewidth=1.5)
    ax_h.set_xlabel("estimated H")
    ax_h.set_ylabel("density")
    ax_q.plot(report.qq[:, 0], report.qq[:, 1], "o", markersize=3)
    lo = min(report.qq.min(), report.qq.min())
    hi = max(report.qq.max(), report.qq.max())
    ax_q.plot([lo, hi], [lo, hi], "-", color="black", linewidth=0.8)
    ax_q.set_xlabel("theoretical quantile")
    ax_q.set_ylabel("empirical quantile")
    if label:
        fig.suptitle(label)
    fig.tight_layout()
    return _finish(fig, Path(path))


def save_boxplot_figure(report: SimulationReport, path) -> Path:
    """One boxplot panel per H, methods side by side."""
    hursts = report.config.hursts
    fig, axes = plt.subplots(1, len(hursts), figsize=(4.2 * len(hursts), 4.2), squeeze=False)
    for ax, h in zip(axes.flat, hursts):
        methods = [m for m in _METHOD_ORDER if m in report.estimates[h]]
        ax.boxplot(
            [report.estimates[h][m] for m in methods],
            tick_labels=[m.value for m in methods],
        )
        ax.axhline(h, color="black", linewidth=0.8, linestyle="--")
        ax.set_title(f"H = {h}")
        ax.tick_params(axis="x", rotation=30)
    axes.flat[0].set_ylabel("estimated H")
    fig.tight_layout()
    return _finish(fig, Path(path))


def render_simulation_figures(report: SimulationReport, figdir) -> list[Path]:
    """Boxplots plus histogram/Q-Q panels for the median methods."""
    from .asymptotics import TheoreticalLaw, normality_diagnostics

    figdir = Path(figdir)
    saved = [save_boxplot_figure(report, figdir / "hurst_boxplots.png")]
    for h, cells in report.estimates.items():
        for method in (Method.MEDL, Method.MEDLA):
            values = cells.get(method)
            if values is None or values.size < 30:
                continue
            law = TheoreticalLaw(
                method=method.value,
                variance=float(np.var(values, ddof=1)),
                n_samples=report.config.n,
                level_count=report.config.levels.m,
                mean=float(np.mean(values)),
            )
            diag = normality_diagnostics(values, law)
            name = f"hist_qq_{method.value}_h{str(h).replace('.', '')}.png"
            saved.append(
                save_estimate_histograms(
                    values, diag, figdir / name, label=f"{method.value}, H = {h}"
                )
            )
    return saved
