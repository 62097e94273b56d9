"""Signal ingestion, report serialization, and run manifests.

File writes are atomic (temp file + rename). JSON payloads are schema
versioned and embed their manifest; CSV tables get a sidecar
``<path>.manifest.json``. Output files never contain absolute paths:
input files are referenced by the path string the caller supplied plus a
64-bit content digest.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .estimators import HurstEstimate, Method
from .asymptotics import NormalityReport
from .exceptions import SignalIOError
from .simharness import SimulationReport, compare_methods
from .synthesis import Signal
from .transform import DwtDecomposition, NdwtDecomposition, level_convention

__all__ = [
    "read_signal",
    "write_signal",
    "write_report",
    "write_json",
    "content_digest",
    "build_manifest",
    "estimate_to_dict",
    "simulation_report_to_dict",
]

_TABLE_COLUMNS = (Method.TRADITIONAL, Method.SOLTANI, Method.MEDL, Method.MEDLA)
_TABLE_ROWS = (
    ("mean", "mean"),
    ("variance", "variance"),
    ("bias_squared", "bias_squared"),
    ("mse", "mse"),
)


# ---------------------------------------------------------------- ingestion

def _detect_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix == ".bin":
        return "bin"
    if suffix == ".csv":
        return "csv"
    return "text"


def _non_finite(value: float, row: int) -> SignalIOError:
    return SignalIOError(
        f"non-finite sample {value!r} at row {row}", category="non-finite-sample"
    )


def _read_text(path: Path) -> np.ndarray:
    samples = []
    with path.open("r", encoding="utf-8") as fh:
        for row, line in enumerate(fh, start=1):
            token = line.strip()
            if not token:
                continue
            try:
                value = float(token)
            except ValueError:
                raise SignalIOError(
                    f"cannot parse {token!r} at row {row}", category="parse-error"
                ) from None
            if not np.isfinite(value):
                raise _non_finite(value, row)
            samples.append(value)
    return np.asarray(samples, dtype=np.float64)


def _read_csv(path: Path, column: str | None) -> np.ndarray:
    with path.open("r", encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if any(cell.strip() for cell in r)]
    if not rows:
        return np.empty(0)

    def numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    header = rows[0]
    has_header = not all(numeric(c) for c in header if c.strip())
    data_start = 1 if has_header else 0
    if not rows[data_start:]:
        return np.empty(0)

    if column is not None:
        if not has_header:
            raise SignalIOError(
                f"column {column!r} requested but the file has no header",
                category="parse-error",
            )
        try:
            col = [h.strip() for h in header].index(column)
        except ValueError:
            raise SignalIOError(
                f"no column named {column!r} in header {header}", category="parse-error"
            ) from None
    else:
        first = rows[data_start]
        col = next((i for i, cell in enumerate(first) if numeric(cell)), None)
        if col is None:
            raise SignalIOError(
                f"no numeric column found at row {data_start + 1}", category="parse-error"
            )

    samples = []
    for row_no, row in enumerate(rows[data_start:], start=data_start + 1):
        try:
            value = float(row[col])
        except (ValueError, IndexError):
            raise SignalIOError(
                f"cannot parse column {col + 1} at row {row_no}", category="parse-error"
            ) from None
        if not np.isfinite(value):
            raise _non_finite(value, row_no)
        samples.append(value)
    return np.asarray(samples, dtype=np.float64)


def _read_bin(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    if len(raw) % 8 != 0:
        raise SignalIOError(
            f"binary file length {len(raw)} is not a multiple of 8", category="parse-error"
        )
    samples = np.frombuffer(raw, dtype="<f8").astype(np.float64)
    bad = np.flatnonzero(~np.isfinite(samples))
    if bad.size:
        raise _non_finite(float(samples[bad[0]]), int(bad[0]) + 1)
    return samples


def read_signal(path, format: str = "auto", column: str | None = None) -> Signal:
    """Read a signal from text (one value per line), CSV, or little-endian
    float64 binary. Row indices in errors are 1-based."""
    p = Path(path)
    if not p.exists():
        raise SignalIOError(f"no such file: {path}", category="not-found")
    if not p.is_file():
        raise SignalIOError(f"not a regular file: {path}")
    fmt = _detect_format(p) if format == "auto" else format
    if fmt == "text":
        samples = _read_text(p)
    elif fmt == "csv":
        samples = _read_csv(p, column)
    elif fmt == "bin":
        samples = _read_bin(p)
    else:
        raise SignalIOError(f"unknown format {format!r}", category="unsupported-format-for-payload")
    if samples.size == 0:
        raise SignalIOError(f"no samples in {path}", category="empty-file")
    return Signal(samples, origin=str(path))


# ---------------------------------------------------------------- writing

def _atomic_write_bytes(path: Path, payload: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_signal(signal: Signal, path, format: str = "text") -> None:
    p = Path(path)
    if format == "text":
        body = "\n".join(repr(float(v)) for v in signal.samples) + "\n"
        _atomic_write_bytes(p, body.encode("utf-8"))
    elif format == "bin":
        _atomic_write_bytes(p, signal.samples.astype("<f8").tobytes())
    else:
        raise SignalIOError(
            f"unsupported signal format {format!r}", category="unsupported-format-for-payload"
        )


def content_digest(path) -> str:
    """64-bit content hash of a file, hex encoded."""
    h = hashlib.blake2b(digest_size=8)
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(command: str, config: dict, inputs: dict[str, str] | None = None) -> dict:
    """Provenance block: the command as issued, resolved config, version,
    timestamp, and input digests. Input keys are the paths as supplied."""
    from . import __version__

    return {
        "command": command,
        "config": config,
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "inputs": dict(inputs or {}),
    }


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Method):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(_jsonable(k)): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_json(payload: dict, path) -> None:
    body = json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"
    _atomic_write_bytes(Path(path), body.encode("utf-8"))


def _write_csv_rows(path: Path, rows, manifest: dict | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    _atomic_write_bytes(path, buf.getvalue().encode("utf-8"))
    if manifest is not None:
        write_json({"manifest": manifest}, path.with_name(path.name + ".manifest.json"))


# ------------------------------------------------------------- converters

def estimate_to_dict(estimate: HurstEstimate) -> dict:
    return {
        "method": estimate.method.value,
        "hurst": estimate.hurst,
        "slope": estimate.slope,
        "intercept": estimate.intercept,
        "theoretical_variance": estimate.theoretical_variance,
        "seed": estimate.seed,
        "points": [
            {"j": p.j, "y": p.y, "n_j": p.n_j, "statistic_kind": p.statistic_kind}
            for p in estimate.points
        ],
    }


def simulation_report_to_dict(report: SimulationReport) -> dict:
    config = report.config
    ranking = {}
    if len(config.methods) >= 2:
        ranking = {str(h): rows for h, rows in compare_methods(report).items()}
    return {
        "config": {
            "hursts": list(config.hursts),
            "n": config.n,
            "reps": config.reps,
            "wavelet": config.wavelet,
            "depth": config.depth,
            "levels": f"{config.levels.j_lo}:{config.levels.j_hi}",
            "methods": [m.value for m in config.methods],
            "base_seed": config.base_seed,
            "sigma": config.sigma,
        },
        "results": {
            str(h): {
                m.value: {
                    "mean": s.mean,
                    "variance": s.variance,
                    "bias_squared": s.bias_squared,
                    "mse": s.mse,
                    "estimates": report.estimates[h][m].tolist(),
                }
                for m, s in cells.items()
            }
            for h, cells in report.summaries.items()
        },
        "ranking": ranking,
        "failures": {
            str(h): [{"replicate": r, "category": c} for r, c in fails]
            for h, fails in report.failures.items()
        },
        "wall_clock_seconds": report.wall_clock_seconds,
        "threads": report.threads,
    }


def _decomposition_to_dict(decomp) -> dict:
    mode = "ndwt" if isinstance(decomp, NdwtDecomposition) else "dwt"
    return {
        "mode": mode,
        "wavelet": decomp.filter.name,
        "n": decomp.n,
        "depth": decomp.depth,
        "J": decomp.J,
        "level_convention": level_convention(decomp.n, decomp.depth),
        "levels": {str(decomp.J - s): seq.tolist() for s, seq in decomp.details.items()},
        "coarse": decomp.coarse.tolist(),
    }


def _simulation_table_rows(report: SimulationReport):
    columns = [m for m in _TABLE_COLUMNS if m in report.config.methods]
    yield ["hurst", "statistic"] + [m.value for m in columns]
    for h in report.config.hursts:
        for label, attr in _TABLE_ROWS:
            row = [repr(h), label]
            for m in columns:
                row.append(repr(getattr(report.summaries[h][m], attr)))
            yield row


# ------------------------------------------------------------- dispatcher

def write_report(payload, path, format: str = "json", manifest: dict | None = None) -> None:
    """Persist an estimate, simulation report, decomposition, normality
    report, or ACF curve. CSV emission is plot-ready; JSON embeds schema,
    level conventions, and the manifest."""
    p = Path(path)

    if isinstance(payload, HurstEstimate):
        if format == "json":
            doc = {"schema": "hurstlab/estimate@1", **estimate_to_dict(payload)}
            if manifest is not None:
                doc["manifest"] = manifest
            write_json(doc, p)
        elif format == "csv":
            rows = [["j", "y"]] + [[pt.j, repr(pt.y)] for pt in payload.points]
            _write_csv_rows(p, rows, manifest)
        else:
            raise SignalIOError(
                f"unsupported format {format!r} for an estimate",
                category="unsupported-format-for-payload",
            )
        return

    if isinstance(payload, SimulationReport):
        if format == "json":
            doc = {"schema": "hurstlab/simulation@1", **simulation_report_to_dict(payload)}
            doc["level_convention"] = level_convention(payload.config.n, payload.config.depth)
            if manifest is not None:
                doc["manifest"] = manifest
            write_json(doc, p)
        elif format == "csv":
            _write_csv_rows(p, _simulation_table_rows(payload), manifest)
        else:
            raise SignalIOError(
                f"unsupported format {format!r} for a simulation report",
                category="unsupported-format-for-payload",
            )
        return

    if isinstance(payload, (NdwtDecomposition, DwtDecomposition)):
        if format != "json":
            raise SignalIOError(
                "decompositions are JSON-only", category="unsupported-format-for-payload"
            )
        doc = {"schema": "hurstlab/decomposition@1", **_decomposition_to_dict(payload)}
        if manifest is not None:
            doc["manifest"] = manifest
        write_json(doc, p)
        return

    if isinstance(payload, NormalityReport):
        if format == "json":
            doc = {
                "schema": "hurstlab/normality@1",
                "count": payload.count,
                "mean": payload.mean,
                "variance": payload.variance,
                "skewness": payload.skewness,
                "excess_kurtosis": payload.excess_kurtosis,
                "ks_distance": payload.ks_distance,
                "qq": payload.qq.tolist(),
            }
            if manifest is not None:
                doc["manifest"] = manifest
            write_json(doc, p)
        elif format == "csv":
            rows = [["theoretical", "empirical"]] + [
                [repr(a), repr(b)] for a, b in payload.qq
            ]
            _write_csv_rows(p, rows, manifest)
        else:
            raise SignalIOError(
                f"unsupported format {format!r} for a normality report",
                category="unsupported-format-for-payload",
            )
        return

    raise SignalIOError(
        f"do not know how to serialize {type(payload).__name__}",
        category="unsupported-format-for-payload",
    )


def write_acf(lags, values, path, manifest: dict | None = None) -> None:
    """Plot-ready lag,acf CSV."""
    rows = [["lag", "acf"]] + [[int(l), repr(float(v))] for l, v in zip(lags, values)]
    _write_csv_rows(Path(path), rows, manifest)
