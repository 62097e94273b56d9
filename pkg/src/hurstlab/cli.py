"""Command-line interface.

Subcommands: synth, transform, acf, estimate, theory, simulate. Commands
exit 0 on success and print a single machine-parsable line
``error:<category>: <detail>`` to stderr on failure. Report-producing
commands render companion figures next to the delimited output unless
``--no-figures`` is given.
"""

from __future__ import annotations

import functools
import shlex
import sys
from pathlib import Path

import click

from . import __version__
from .asymptotics import (
    A_CONST,
    PHI_INV_3_4,
    Q_CONST,
    hurst_sampling_law,
    medl_median_variance,
    medl_population_median,
    medla_median_variance,
    medla_population_median,
)
from .estimators import LevelRange, Method, estimate_hurst
from .exceptions import HurstLabError, InvalidParameterError
from .filters import available_filters
from .sigio import (
    build_manifest,
    content_digest,
    estimate_to_dict,
    read_signal,
    write_acf,
    write_json,
    write_report,
    write_signal,
)
from .simharness import ExperimentConfig, run_experiment
from .synthesis import FgnSpec, fgn_to_fbm, generate_fgn
from .transform import dwt, level_acf, level_convention, ndwt, signal_j

_SEED = click.IntRange(0, 2**64 - 1)
_WAVELETS = click.Choice(available_filters())


def _cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HurstLabError as exc:
            click.echo(f"error:{exc.category}: {exc}", err=True)
            sys.exit(1)
        except OSError as exc:
            click.echo(f"error:io-error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _command_string(name: str, params: dict) -> str:
    parts = ["hurstlab", name]
    for key, value in params.items():
        if value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            parts.append(flag)
        else:
            parts.extend([flag, str(value)])
    return shlex.join(parts)


def _parse_level_token(token: str, J: int) -> int:
    token = token.strip()
    if token.lower().startswith("jm"):
        return J - int(token[2:])
    try:
        return int(token)
    except ValueError:
        raise InvalidParameterError(f"cannot parse level {token!r}") from None


def _figdir_for(out: str, figdir: str | None) -> Path:
    if figdir:
        return Path(figdir)
    out_path = Path(out)
    return out_path.parent / (out_path.stem + "_figs")


def _echo(quiet: bool, message: str) -> None:
    if not quiet:
        click.echo(message)


@click.group()
@click.version_option(version=__version__, prog_name="hurstlab")
def main():
    """Hurst exponent estimation from non-decimated wavelet spectra."""


@main.command()
@click.option("--hurst", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
              required=True, help="Hurst exponent of the generated path.")
@click.option("--n", type=click.IntRange(2), required=True, help="Number of samples.")
@click.option("--sigma", type=click.FloatRange(0.0, min_open=True), default=1.0,
              show_default=True, help="Std dev of a unit-lag increment.")
@click.option("--seed", type=_SEED, default=0, show_default=True)
@click.option("--kind", type=click.Choice(["fgn", "fbm"]), default="fbm", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "bin"]), default="text",
              show_default=True)
@click.option("--quiet", is_flag=True)
@_cli_errors
def synth(hurst, n, sigma, seed, kind, out, fmt, quiet):
    """Generate an exact fGn or fBm path."""
    spec = FgnSpec(hurst=hurst, length=n, sigma=sigma, seed=seed)
    signal = generate_fgn(spec)
    if kind == "fbm":
        signal = fgn_to_fbm(signal)
    write_signal(signal, out, format=fmt)
    _echo(quiet, f"wrote {n} {kind} samples (H={hurst}, seed={seed}) to {out}")


@main.command()
@click.option("--in", "in_path", type=click.Path(dir_okay=False), required=True)
@click.option("--wavelet", type=_WAVELETS, default="haar", show_default=True)
@click.option("--depth", type=click.IntRange(1), required=True)
@click.option("--mode", type=click.Choice(["ndwt", "dwt"]), default="ndwt", show_default=True)
@click.option("--column", default=None, help="CSV column to ingest.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--quiet", is_flag=True)
@_cli_errors
def transform(in_path, wavelet, depth, mode, column, out, quiet):
    """Decompose a signal; levels in the JSON are keyed by level j = J - scale."""
    signal = read_signal(in_path, column=column)
    decomp = (ndwt if mode == "ndwt" else dwt)(signal, wavelet, depth)
    manifest = build_manifest(
        _command_string("transform", dict(zip(
            ("in", "wavelet", "depth", "mode", "column", "out"),
            (in_path, wavelet, depth, mode, column, out)))),
        {"wavelet": wavelet, "depth": depth, "mode": mode, "n": decomp.n},
        inputs={in_path: content_digest(in_path)},
    )
    write_report(decomp, out, format="json", manifest=manifest)
    _echo(quiet, f"{mode} depth {depth} of {decomp.n} samples -> {out}")


@main.command()
@click.option("--in", "in_path", type=click.Path(dir_okay=False), required=True)
@click.option("--level", required=True,
              help="Detail level j to inspect (absolute like 7, or Jm4).")
@click.option("--max-lag", type=click.IntRange(1), default=50, show_default=True)
@click.option("--wavelet", type=_WAVELETS, default="haar", show_default=True)
@click.option("--mode", type=click.Choice(["ndwt", "dwt"]), default="ndwt", show_default=True)
@click.option("--depth", type=click.IntRange(1), default=None,
              help="Transform depth [default: deep enough to reach --level].")
@click.option("--column", default=None, help="CSV column to ingest.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--figdir", type=click.Path(file_okay=False), default=None)
@click.option("--no-figures", is_flag=True)
@click.option("--quiet", is_flag=True)
@_cli_errors
def acf(in_path, level, max_lag, wavelet, mode, depth, column, out, figdir, no_figures, quiet):
    """Sample autocorrelation of one detail level, as lag,acf CSV."""
    signal = read_signal(in_path, column=column)
    J = signal_j(len(signal))
    j = _parse_level_token(level, J)
    if depth is None:
        depth = J - j
    decomp = (ndwt if mode == "ndwt" else dwt)(signal, wavelet, depth)
    values = level_acf(decomp.detail_level(j), max_lag)
    manifest = build_manifest(
        _command_string("acf", dict(zip(
            ("in", "level", "max-lag", "wavelet", "mode", "depth", "out"),
            (in_path, level, max_lag, wavelet, mode, depth, out)))),
        {"level": j, "max_lag": max_lag, "wavelet": wavelet, "mode": mode, "depth": depth},
        inputs={in_path: content_digest(in_path)},
    )
    write_acf(range(max_lag + 1), values, out, manifest=manifest)
    if not no_figures:
        from .plots import save_acf_figure

        fig = save_acf_figure(range(max_lag + 1), values,
                              _figdir_for(out, figdir) / "acf.png",
                              label=f"{mode} level {j} ({wavelet})")
        _echo(quiet, f"figure -> {fig}")
    _echo(quiet, f"acf of {mode} level {j} (lag 1: {values[1]:+.3f}) -> {out}")


@main.command()
@click.option("--in", "in_path", type=click.Path(dir_okay=False), required=True)
@click.option("--method", default="all", show_default=True,
              help="One of traditional|soltani|medl|medla, or all.")
@click.option("--wavelet", type=_WAVELETS, default="haar", show_default=True)
@click.option("--depth", type=click.IntRange(1), default=None,
              help="Transform depth [default: deep enough for --levels].")
@click.option("--levels", default="Jm7:Jm2", show_default=True,
              help="Regression levels, absolute (4:9) or J-relative (Jm7:Jm2).")
@click.option("--seed", type=_SEED, default=0, show_default=True,
              help="Pair-resampling seed (medla).")
@click.option("--column", default=None, help="CSV column to ingest.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--figdir", type=click.Path(file_okay=False), default=None)
@click.option("--no-figures", is_flag=True)
@click.option("--quiet", is_flag=True)
@_cli_errors
def estimate(in_path, method, wavelet, depth, levels, seed, column, out, figdir,
             no_figures, quiet):
    """Estimate the Hurst exponent of a signal from its wavelet spectrum."""
    signal = read_signal(in_path, column=column)
    J = signal_j(len(signal))
    level_range = LevelRange.parse(levels, J)
    if depth is None:
        depth = J - level_range.j_lo
    decomp = ndwt(signal, wavelet, depth)
    methods = list(Method) if method == "all" else [Method.parse(method)]
    estimates = [estimate_hurst(decomp, m, level_range, seed=seed) for m in methods]

    manifest = build_manifest(
        _command_string("estimate", dict(zip(
            ("in", "method", "wavelet", "depth", "levels", "seed", "out"),
            (in_path, method, wavelet, depth, levels, seed, out)))),
        {"method": method, "wavelet": wavelet, "depth": depth,
         "levels": f"{level_range.j_lo}:{level_range.j_hi}", "seed": seed},
        inputs={in_path: content_digest(in_path)},
    )
    convention = level_convention(decomp.n, depth)
    if len(estimates) == 1:
        doc = {"schema": "hurstlab/estimate@1", "level_convention": convention,
               **estimate_to_dict(estimates[0]), "manifest": manifest}
    else:
        doc = {"schema": "hurstlab/estimates@1", "level_convention": convention,
               "estimates": [estimate_to_dict(e) for e in estimates],
               "manifest": manifest}
    write_json(doc, out)

    if not no_figures:
        from .plots import save_spectrum_figure

        fig = save_spectrum_figure(estimates, _figdir_for(out, figdir) / "spectrum.png")
        _echo(quiet, f"figure -> {fig}")
    for est in estimates:
        _echo(quiet, f"{est.method.value}: H = {est.hurst:.4f} (slope {est.slope:+.4f})")


@main.command()
@click.option("--method", type=click.Choice(["medl", "medla"]), required=True)
@click.option("--n", "n_samples", type=click.IntRange(1), required=True,
              help="Sample size per level (N).")
@click.option("--m", "level_count", type=click.IntRange(3), required=True,
              help="Number of levels in the spectrum (m).")
@click.option("--hurst", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
              default=None)
@click.option("--sigma2", type=click.FloatRange(0.0, min_open=True), default=1.0,
              show_default=True)
@click.option("--level", type=int, default=None, help="Level j for the population median.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write JSON here instead of stdout.")
@click.option("--quiet", is_flag=True)
@_cli_errors
def theory(method, n_samples, level_count, hurst, sigma2, level, out, quiet):
    """Closed-form medians, median variances, and estimator sampling laws."""
    law = hurst_sampling_law(method, n_samples, level_count, hurst=hurst)
    median_variance = (medl_median_variance if method == "medl" else medla_median_variance)(
        n_samples
    )
    doc = {
        "schema": "hurstlab/theory@1",
        "method": method,
        "n_samples": n_samples,
        "level_count": level_count,
        "median_variance": median_variance,
        "law": {"mean": law.mean, "variance": law.variance},
        "constants": {"phi_inv_3_4": PHI_INV_3_4, "Q": Q_CONST, "A": A_CONST},
    }
    if hurst is not None and level is not None:
        pop = (medl_population_median if method == "medl" else medla_population_median)(
            hurst, sigma2, level
        )
        doc["population_median"] = {"level": level, "sigma2": sigma2, "value": pop}
    if method == "medla":
        medl_law = hurst_sampling_law("medl", n_samples, level_count)
        doc["medl_variance_same_design"] = medl_law.variance
        doc["variance_ratio_medl_to_medla"] = medl_law.variance / law.variance
        doc["note"] = (
            "the medla law uses the 1/ln(2)^4 constant and is smaller than the "
            "medl law by the fixed factor above; the two laws do not coincide"
        )
    if out:
        doc["manifest"] = build_manifest(
            _command_string("theory", dict(zip(
                ("method", "n", "m", "hurst", "sigma2", "level", "out"),
                (method, n_samples, level_count, hurst, sigma2, level, out)))),
            {"method": method, "n": n_samples, "m": level_count},
        )
        write_json(doc, out)
        _echo(quiet, f"theory values -> {out}")
    else:
        import json

        click.echo(json.dumps(doc, indent=2))


@main.command()
@click.option("--hurst", "hursts", default="0.3,0.5,0.7", show_default=True,
              help="Comma-separated true Hurst exponents.")
@click.option("--n", type=click.IntRange(8), default=2048, show_default=True)
@click.option("--reps", type=click.IntRange(2), default=300, show_default=True)
@click.option("--wavelet", type=_WAVELETS, default="haar", show_default=True)
@click.option("--depth", type=click.IntRange(1), default=10, show_default=True)
@click.option("--levels", default="Jm7:Jm2", show_default=True)
@click.option("--methods", default="all", show_default=True,
              help="Comma-separated subset of the four methods, or all.")
@click.option("--seed", type=_SEED, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Full JSON report.")
@click.option("--table", type=click.Path(dir_okay=False), default=None,
              help="Summary table CSV (rows mean/variance/bias_squared/mse).")
@click.option("--figdir", type=click.Path(file_okay=False), default=None)
@click.option("--no-figures", is_flag=True)
@click.option("--quiet", is_flag=True)
@_cli_errors
def simulate(hursts, n, reps, wavelet, depth, levels, methods, seed, out, table,
             figdir, no_figures, quiet):
    """Monte Carlo comparison of the four estimators on exact fBm paths."""
    hurst_list = tuple(float(tok) for tok in hursts.split(",") if tok.strip())
    method_list = (
        tuple(Method) if methods == "all"
        else tuple(Method.parse(tok) for tok in methods.split(",") if tok.strip())
    )
    J = signal_j(n)
    level_range = LevelRange.parse(levels, J)
    config = ExperimentConfig(
        hursts=hurst_list, n=n, reps=reps, levels=level_range, wavelet=wavelet,
        depth=depth, methods=method_list, base_seed=seed,
    )
    report = run_experiment(config)

    manifest = build_manifest(
        _command_string("simulate", dict(zip(
            ("hurst", "n", "reps", "wavelet", "depth", "levels", "methods", "seed",
             "out", "table"),
            (hursts, n, reps, wavelet, depth, levels, methods, seed, out, table)))),
        {"hursts": list(hurst_list), "n": n, "reps": reps, "wavelet": wavelet,
         "depth": depth, "levels": f"{level_range.j_lo}:{level_range.j_hi}",
         "methods": [m.value for m in method_list], "base_seed": seed},
    )
    write_report(report, out, format="json", manifest=manifest)
    if table:
        write_report(report, table, format="csv", manifest=manifest)
    if not no_figures:
        from .plots import render_simulation_figures

        saved = render_simulation_figures(report, _figdir_for(out, figdir))
        _echo(quiet, f"{len(saved)} figures -> {saved[0].parent}")

    for h in hurst_list:
        for m in method_list:
            cell = report.summaries[h][m]
            _echo(quiet, f"H={h} {m.value:12s} mean={cell.mean:.4f} "
                         f"var={cell.variance:.2e} mse={cell.mse:.2e}")
    _echo(quiet, f"report -> {out} ({report.wall_clock_seconds:.1f}s, "
                 f"{report.threads} worker(s))")


if __name__ == "__main__":
    main()
