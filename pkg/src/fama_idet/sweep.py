"""Parameter sweeps over scenario configs with MC and analytic methods.

Configs are flat ``key = value`` text with typed suffixes (dB, mW, W);
sweeps replace one SystemConfig field per cell.  MC substreams are keyed
by (seed, cell index) so results do not depend on the worker count.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import analytic
from .analytic import KernelContext, QuadratureConvergenceError
from .channel import SystemConfig
from .montecarlo import Method, Metric, simulate_outage_counts
from .specfun import SeriesConvergenceError

_INT_FIELDS = {"n_users", "n_ports"}
_CONFIG_FIELDS = {f.name for f in dataclasses.fields(SystemConfig)}

CSV_COLUMNS = ["axis", "metric", "method", "value", "ci", "trials", "seconds", "error"]


class ConfigError(ValueError):
    """Config-file parse or validation error with line diagnostics."""


def _convert(token: str) -> float:
    """Number with an optional typed suffix: dB -> linear, mW -> watts,
    W -> wavelengths (identity)."""
    t = token.strip()
    for suffix, conv in (("dB", lambda x: 10.0 ** (x / 10.0)),
                         ("mW", lambda x: x * 1e-3),
                         ("W", lambda x: x)):
        if t.endswith(suffix):
            head = t[: -len(suffix)].strip()
            if head:
                return conv(float(head))
    return float(t)


def parse_config(text: str) -> dict:
    """Flat key=value text -> {key: (raw token, parsed value)}."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if not key or not raw:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key == "sweep.values":
                value = [_convert(v) for v in raw.split(",") if v.strip()]
            elif key == "sweep.metrics":
                value = [_parse_metric(v, lineno) for v in raw.split(",") if v.strip()]
            elif key in ("sweep.axis",):
                value = raw
            elif key in ("trials", "seed") or key in _INT_FIELDS:
                value = int(raw)
            elif key in _CONFIG_FIELDS:
                value = _convert(raw)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except (ValueError, KeyError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: field {key!r}: {exc}") from exc
        out[key] = (raw, value)
    return out


def _parse_metric(token: str, lineno: int):
    name, _, method = token.strip().partition(":")
    try:
        return Metric(name.strip().upper()), Method((method or "MC").strip().upper())
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: bad metric spec {token!r}") from exc


@dataclass
class SweepSpec:
    """One sweep: a base scenario, the swept field, and what to evaluate."""

    base: SystemConfig
    axis: str
    values: list
    metrics: list          # (Metric, Method) pairs
    trials: int = 100_000
    seed: int = 0
    output_path: str | None = None
    format: str = "csv"
    raw_items: dict = field(default_factory=dict)  # config echo for metadata
    timing: bool = False

    def __post_init__(self):
        if self.axis and self.axis not in _CONFIG_FIELDS:
            raise ConfigError(f"sweep.axis {self.axis!r} is not a scenario field")
        if self.axis and not self.values:
            raise ConfigError("sweep.values must be nonempty")
        if not self.metrics:
            raise ConfigError("sweep.metrics must be nonempty")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        # constructing each cell validates values against the field invariants
        for v in self.values:
            self.cell_config(v)

    def cell_config(self, value) -> SystemConfig:
        if not self.axis:
            return self.base
        if self.axis in _INT_FIELDS:
            if float(value) != int(value):
                raise ConfigError(f"{self.axis} value {value} is not an integer")
            value = int(value)
        try:
            return dataclasses.replace(self.base, **{self.axis: value})
        except ValueError as exc:
            raise ConfigError(f"{self.axis} value {value}: {exc}") from exc


def spec_from_config(
    text: str,
    trials: int | None = None,
    seed: int | None = None,
    fmt: str | None = None,
    out: str | None = None,
    require_axis: bool = True,
    timing: bool = False,
) -> SweepSpec:
    """Build a SweepSpec from config text plus CLI overrides."""
    items = parse_config(text)
    cfg_kwargs = {k: v for k, (_, v) in items.items() if k in _CONFIG_FIELDS}
    try:
        base = SystemConfig(**cfg_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    axis = items.get("sweep.axis", ("", ""))[1]
    if require_axis and not axis:
        raise ConfigError("sweep.axis is required for this command")
    default_metrics = [(m, meth) for m in Metric for meth in (Method.MC, Method.EXACT)]
    return SweepSpec(
        base=base,
        axis=axis,
        values=items.get("sweep.values", ("", []))[1],
        metrics=items.get("sweep.metrics", ("", default_metrics))[1],
        trials=trials if trials is not None else items.get("trials", ("", 100_000))[1],
        seed=seed if seed is not None else items.get("seed", ("", 0))[1],
        output_path=out,
        format=fmt or "csv",
        raw_items={k: raw for k, (raw, _) in items.items()},
        timing=timing,
    )


_EXACT_RAYLEIGH = {
    Metric.WDT_SINR: analytic.wdt_sinr_exact,
    Metric.WET_SINR: analytic.wet_sinr_exact,
    Metric.WDT_EHP: analytic.wdt_ehp_exact,
    Metric.WET_EHP: analytic.wet_ehp_exact,
    Metric.IDET_SPECIAL: analytic.idet_special_exact,
}


def _exact_value(ctx: KernelContext, metric: Metric) -> float:
    if ctx.rician_k > 0.0:
        if metric is Metric.WDT_SINR:
            return analytic.rician_wdt_sinr_exact(ctx)
        if metric is Metric.WET_EHP:
            return analytic.rician_wet_ehp_exact(ctx)
        raise ValueError(f"no exact Rician expression for {metric.value}")
    if metric is Metric.IDET_GENERAL:
        return analytic.idet_general(
            analytic.wdt_sinr_exact(ctx),
            analytic.wet_ehp_exact(ctx),
            analytic.idet_special_exact(ctx),
        )
    return _EXACT_RAYLEIGH[metric](ctx)


def _closed_form_value(ctx: KernelContext, metric: Metric) -> float:
    if ctx.rician_k > 0.0:
        raise ValueError(f"no closed form for {metric.value} with rician_k > 0")
    if metric is Metric.WDT_SINR:
        return analytic.wdt_sinr_approx(ctx).theorem
    if metric is Metric.WET_SINR:
        return analytic.wet_sinr_approx(ctx)
    if metric is Metric.WDT_EHP:
        return analytic.wdt_ehp_approx(ctx)
    if metric is Metric.WET_EHP:
        return analytic.wet_ehp_approx(ctx)
    if metric is Metric.IDET_SPECIAL:
        return analytic.idet_special_approx(ctx).value
    wdt = analytic.wdt_sinr_approx(ctx).theorem
    wet = analytic.wet_ehp_approx(ctx)
    special = analytic.idet_special_approx(ctx).value
    return min(1.0, max(0.0, wdt + wet - special))


def _error_kind(exc: Exception) -> str:
    if isinstance(exc, (QuadratureConvergenceError, SeriesConvergenceError)):
        return "convergence"
    if isinstance(exc, ValueError):
        return "unsupported"
    return type(exc).__name__


def _evaluate_cell(spec: SweepSpec, idx: int, value) -> list[dict]:
    """All rows for one axis value; MC metrics share one simulation pass."""
    cfg = spec.cell_config(value)
    axis_label = f"{value:.12g}" if spec.axis else ""
    rows = []
    mc_metrics = [m for m, meth in spec.metrics if meth is Method.MC]
    if mc_metrics:
        t0 = time.perf_counter()
        try:
            counts = simulate_outage_counts(cfg, spec.trials, spec.seed, cell=idx)["counts"]
        except Exception as exc:  # keep the sweep running, record in-row
            counts, mc_err = None, exc
        else:
            mc_err = None
        mc_seconds = time.perf_counter() - t0
        for m in mc_metrics:
            if mc_err is not None:
                rows.append(_row(axis_label, m, Method.MC, math.nan, None,
                                 spec.trials, None, _error_kind(mc_err)))
                continue
            p = counts[m] / spec.trials
            ci = 1.96 * math.sqrt(max(p * (1.0 - p), 0.0) / spec.trials)
            rows.append(_row(axis_label, m, Method.MC, p, ci, spec.trials,
                             mc_seconds if spec.timing else None, ""))
    for m, meth in spec.metrics:
        if meth is Method.MC:
            continue
        t0 = time.perf_counter()
        try:
            ctx = KernelContext.from_config(cfg)
            v = _exact_value(ctx, m) if meth is Method.EXACT else _closed_form_value(ctx, m)
            err = ""
        except Exception as exc:
            v, err = math.nan, _error_kind(exc)
        seconds = time.perf_counter() - t0
        rows.append(_row(axis_label, m, meth, v, None, None,
                         seconds if spec.timing else None, err))
    return rows


def _row(axis, metric, method, value, ci, trials, seconds, error):
    return {
        "axis": axis,
        "metric": metric.value,
        "method": method.value,
        "value": "NaN" if math.isnan(value) else f"{value:.12g}",
        "ci": "" if ci is None else f"{ci:.12g}",
        "trials": "" if trials is None else str(trials),
        "seconds": "" if seconds is None else f"{seconds:.3f}",
        "error": error,
    }


@dataclass
class SweepResult:
    """Tidy rows (one per cell/metric/method) plus the metadata echo."""

    rows: list
    metadata: dict

    @property
    def failed(self) -> bool:
        return any(r["error"] for r in self.rows)


def _metadata(spec: SweepSpec) -> dict:
    meta = {"config": dict(sorted(spec.raw_items.items())),
            "run.trials": spec.trials, "run.seed": spec.seed}
    if spec.base.rician_k > 0.0 or spec.axis == "rician_k":
        # mean received power is held independent of kappa
        meta["rician_power_normalization"] = "2/(2+kappa)"
    return meta


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every cell (optionally in parallel) and emit the file."""
    cells = list(enumerate(spec.values)) if spec.axis else [(0, None)]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evaluate_cell, spec, i, v) for i, v in cells]
            per_cell = [f.result() for f in futures]
    else:
        per_cell = [_evaluate_cell(spec, i, v) for i, v in cells]
    rows = [r for cell_rows in per_cell for r in cell_rows]
    result = SweepResult(rows, _metadata(spec))
    if spec.output_path:
        write_result(result, spec.output_path, spec.format)
    return result


def render(result: SweepResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            {"metadata": result.metadata, "rows": result.rows},
            indent=2, sort_keys=True,
        ) + "\n"
    buf = io.StringIO()
    for key, val in sorted(result.metadata.items()):
        if key == "config":
            for k, v in val.items():
                buf.write(f"# {k} = {v}\n")
        else:
            buf.write(f"# {key} = {val}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(result.rows)
    return buf.getvalue()


def write_result(result: SweepResult, path: str, fmt: str) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    text = render(result, fmt)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class CompareLine:
    axis: str
    metric: str
    mc: float
    exact: float
    ci_half_width: float
    passed: bool


def compare(spec: SweepSpec, workers: int = 1) -> list[CompareLine]:
    """Cross-validate |MC - EXACT| against 3x the MC CI half-width."""
    metric_set = {}
    for m, meth in spec.metrics:
        metric_set.setdefault(m, set()).add(meth)
    paired = [m for m, s in metric_set.items() if Method.MC in s and Method.EXACT in s]
    if not paired:
        raise ConfigError("compare needs at least one metric with both MC and EXACT")
    result = run_sweep(dataclasses.replace(spec, output_path=None), workers=workers)
    by_key = {(r["axis"], r["metric"], r["method"]): r for r in result.rows}
    report = []
    for value in (spec.values if spec.axis else [None]):
        axis_label = f"{value:.12g}" if spec.axis else ""
        for m in paired:
            mc = by_key[(axis_label, m.value, "MC")]
            ex = by_key[(axis_label, m.value, "EXACT")]
            if mc["error"] or ex["error"]:
                report.append(CompareLine(axis_label, m.value, math.nan, math.nan,
                                          math.nan, False))
                continue
            mc_v, ex_v = float(mc["value"]), float(ex["value"])
            ci = float(mc["ci"]) if mc["ci"] else 0.0
            report.append(CompareLine(
                axis_label, m.value, mc_v, ex_v, ci,
                abs(mc_v - ex_v) <= 3.0 * ci,
            ))
    return report
