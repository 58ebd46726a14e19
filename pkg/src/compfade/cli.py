"""Command-line surface: evaluate curves, reproduce the figure parameter
sets, draw samples, and run the validation suite.

Exit status discipline: 0 on success, 1 when a validation or strict-mode
check fails, 2 on usage or parameter errors.  Output is machine readable
(CSV with ``x,value`` rows plus ``#atom,`` trailer rows, or JSON carrying
the full curve table with metadata); no color codes are emitted, so
``NO_COLOR`` is honored trivially.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, composite, figures, mc, models, validation
from .composite import CompositeModel, SeriesConfig
from .errors import DomainError, NonConvergenceError
from .numerics import integrate_semi_infinite
from .models import (
    AkmParams,
    AmParams,
    ExtremeParams,
    GammaShadowParams,
    ScaledEnvelope,
)

MODEL_CHOICES = (
    "akm",
    "am",
    "extreme",
    "akm-gamma",
    "am-gamma",
    "extreme-gamma",
    "gamma-shadow",
    "kmu-gamma",
    "kmu-extreme-gamma",
)

_PARAM_FLAGS = ("alpha", "kappa", "mu", "m", "b", "omega", "rhat")


class UsageError(Exception):
    """Parameter or configuration problem; maps to exit status 2."""


class ValidationFailure(Exception):
    """A requested check failed; maps to exit status 1."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compfade",
        description="Composite multipath/shadowing fading distributions: "
        "curve evaluation, sampling, and cross-validation.",
    )
    parser.add_argument("--version", action="version", version=f"compfade {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--model", choices=MODEL_CHOICES, help="distribution family")
        for flag in _PARAM_FLAGS:
            p.add_argument(f"--{flag}", type=float, help=f"model parameter {flag}")
        p.add_argument("--config", help="JSON file whose keys mirror the flags; flags win")

    def add_eval_flags(p):
        p.add_argument("--grid", help="evaluation grid as min:max:points (default 0.01:4:200)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--series-n", type=int, help="series term cap (default 40)")
        p.add_argument("--series-rel-tol", type=float, help="series stopping tolerance")
        p.add_argument(
            "--use-gross", action="store_true", default=None,
            help="use the degree-n polynomial Bessel weights",
        )
        p.add_argument(
            "--oracle", action="store_true", default=None,
            help="force the mixture-quadrature route for composites",
        )

    p_pdf = sub.add_parser("pdf", help="evaluate a density on a grid")
    add_model_flags(p_pdf)
    add_eval_flags(p_pdf)

    p_cdf = sub.add_parser("cdf", help="evaluate a distribution function on a grid")
    add_model_flags(p_cdf)
    add_eval_flags(p_cdf)

    p_mom = sub.add_parser("moments", help="closed-form vs quadrature moments")
    add_model_flags(p_mom)
    p_mom.add_argument("--orders", help="comma-separated moment orders (default 0,1,2,3,4)")
    p_mom.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p_mom.add_argument("--out", help="output path (default stdout)")
    p_mom.add_argument("--strict", action="store_true", default=None,
                       help="exit 1 when any relative difference exceeds 1e-6")

    p_fig = sub.add_parser("figure", help="emit a standard figure's curve family")
    p_fig.add_argument("figure_id", type=int, choices=figures.FIGURE_IDS)
    p_fig.add_argument("--out-dir", default=".", help="directory for the curve files")
    p_fig.add_argument("--format", choices=("csv", "json"), help="output format (default json)")
    p_fig.add_argument("--grid", help="grid as min:max:points (default 0.01:4:200)")
    p_fig.add_argument("--series-n", type=int, help="series term cap (default 160)")

    p_samp = sub.add_parser("sample", help="draw reproducible samples and run gof")
    add_model_flags(p_samp)
    p_samp.add_argument("--count", type=int, help="number of samples (default 100000)")
    p_samp.add_argument("--seed", type=int, help="random seed (default 1)")
    p_samp.add_argument("--series-n", type=int, help="series term cap for the gof density")
    p_samp.add_argument("--series-rel-tol", type=float, help="series stopping tolerance")
    p_samp.add_argument("--out", help="sample file, one value per line (default samples.txt)")
    p_samp.add_argument("--report", help="gof report path (default stdout)")
    p_samp.add_argument("--strict", action="store_true", default=None,
                        help="exit 1 when the gof check fails")

    p_val = sub.add_parser("validate", help="run the validation suite")
    p_val.add_argument("--level", choices=("quick", "full"), default="quick")
    p_val.add_argument("--report", help="JSON report path (default stdout)")

    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    merged = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {config_path}: {exc}")
        if not isinstance(loaded, dict):
            raise UsageError("config file must contain a JSON object")
        merged.update({k.replace("-", "_"): v for k, v in loaded.items()})
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            merged[key] = value  # explicit flag wins over the config file
    return merged


def _get_param(cfg: dict, name: str) -> float:
    value = cfg.get(name)
    if value is None:
        raise UsageError(f"missing required parameter --{name}")
    return float(value)


def _build_model(cfg: dict):
    name = cfg.get("model")
    if name is None:
        raise UsageError("missing required flag --model")
    if name == "kmu-gamma":
        if cfg.get("alpha") not in (None, 2.0):
            raise UsageError("kmu-gamma fixes alpha = 2; drop --alpha or pass 2")
        cfg = dict(cfg, alpha=2.0)
        name = "akm-gamma"
    elif name == "kmu-extreme-gamma":
        if cfg.get("alpha") not in (None, 2.0):
            raise UsageError("kmu-extreme-gamma fixes alpha = 2; drop --alpha or pass 2")
        cfg = dict(cfg, alpha=2.0)
        name = "extreme-gamma"

    try:
        if name == "akm":
            return AkmParams(_get_param(cfg, "alpha"), _get_param(cfg, "kappa"), _get_param(cfg, "mu"))
        if name == "am":
            return AmParams(_get_param(cfg, "alpha"), _get_param(cfg, "mu"))
        if name == "extreme":
            return ExtremeParams(_get_param(cfg, "alpha"), _get_param(cfg, "m"))
        if name == "gamma-shadow":
            return GammaShadowParams(_get_param(cfg, "b"), _get_param(cfg, "omega"))
        shadow = GammaShadowParams(_get_param(cfg, "b"), _get_param(cfg, "omega"))
        if name == "akm-gamma":
            mp = AkmParams(_get_param(cfg, "alpha"), _get_param(cfg, "kappa"), _get_param(cfg, "mu"))
        elif name == "am-gamma":
            mp = AmParams(_get_param(cfg, "alpha"), _get_param(cfg, "mu"))
        elif name == "extreme-gamma":
            mp = ExtremeParams(_get_param(cfg, "alpha"), _get_param(cfg, "m"))
        else:
            raise UsageError(f"unknown model {name!r}")
        return CompositeModel(mp, shadow)
    except DomainError as exc:
        raise UsageError(str(exc))


def _parse_grid(cfg: dict) -> np.ndarray:
    spec = cfg.get("grid") or "0.01:4:200"
    try:
        lo_s, hi_s, n_s = str(spec).split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise UsageError(f"grid must be min:max:points, got {spec!r}")
    if not (lo < hi and n >= 2):
        raise UsageError("grid requires min < max and points >= 2")
    return np.linspace(lo, hi, n)


def _series_config(cfg: dict) -> SeriesConfig:
    return SeriesConfig(
        max_terms=int(cfg.get("series_n") or 40),
        rel_tol=float(cfg.get("series_rel_tol") or 1e-8),
        use_gross=bool(cfg.get("use_gross") or False),
    )


def _rhat(cfg: dict) -> ScaledEnvelope:
    return ScaledEnvelope(float(cfg.get("rhat") or 1.0))


def _density_for(model, cfg: dict, series_cfg: SeriesConfig, oracle: bool) -> models.Density:
    if isinstance(model, CompositeModel):
        return composite.composite_density(model, series_cfg, oracle=oracle)
    if isinstance(model, AkmParams):
        s = _rhat(cfg)
        return models.Density(continuous=lambda r: models.akm_pdf_envelope(model, s, r))
    if isinstance(model, AmParams):
        s = _rhat(cfg)
        return models.Density(continuous=lambda r: models.am_pdf(model, s, r))
    if isinstance(model, ExtremeParams):
        return models.extreme_density(model)
    if isinstance(model, GammaShadowParams):
        return models.Density(continuous=lambda y: models.gamma_shadow_pdf(model, y))
    raise UsageError(f"cannot build a density for {model!r}")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _curve_payload(model_desc, xs, values, atoms, metadata) -> dict:
    return {
        "model": json.loads(model_desc),
        "abscissae": [float(x) for x in xs],
        "values": [float(v) for v in values],
        "atoms": [[float(a), float(m)] for a, m in atoms],
        "metadata": metadata,
    }


def _emit_curve(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        _write_text(out, json.dumps(payload, indent=2) + "\n")
        return
    lines = ["x,value"]
    for x, v in zip(payload["abscissae"], payload["values"]):
        lines.append(f"{_fmt(x)},{_fmt(v)}")
    for loc, mass in payload["atoms"]:
        lines.append(f"#atom,{_fmt(loc)},{_fmt(mass)}")
    for key, value in sorted(payload["metadata"].items()):
        if isinstance(value, (int, float, str)):
            lines.append(f"#meta,{key},{value}")
    _write_text(out, "\n".join(lines) + "\n")


def _base_metadata(series_cfg: SeriesConfig, oracle: bool) -> dict:
    return {
        "tool_version": __version__,
        "series_max_terms": series_cfg.max_terms,
        "series_rel_tol": series_cfg.rel_tol,
        "use_gross": series_cfg.use_gross,
        "route": "mixture-oracle" if oracle else "series-or-exact",
    }


def cmd_pdf(cfg: dict) -> int:
    model = _build_model(cfg)
    xs = _parse_grid(cfg)
    series_cfg = _series_config(cfg)
    oracle = bool(cfg.get("oracle"))
    density = _density_for(model, cfg, series_cfg, oracle)
    values = [density.continuous(float(x)) for x in xs]
    metadata = _base_metadata(series_cfg, oracle)
    payload = _curve_payload(mc.model_descriptor(model), xs, values, density.atoms, metadata)
    _emit_curve(payload, cfg.get("format") or "csv", cfg.get("out"))
    return 0


def cmd_cdf(cfg: dict) -> int:
    model = _build_model(cfg)
    xs = _parse_grid(cfg)
    series_cfg = _series_config(cfg)
    oracle = bool(cfg.get("oracle"))
    values = _cdf_values(model, cfg, series_cfg, oracle, xs)
    metadata = _base_metadata(series_cfg, oracle)
    payload = _curve_payload(mc.model_descriptor(model), xs, values, (), metadata)
    _emit_curve(payload, cfg.get("format") or "csv", cfg.get("out"))
    return 0


def _cdf_values(model, cfg, series_cfg, oracle, xs) -> list:
    if isinstance(model, AkmParams):
        rhat = _rhat(cfg).rhat
        return [models.akm_cdf(model, float(x) / rhat) for x in xs]
    if isinstance(model, AmParams):
        s = _rhat(cfg)
        return [models.am_cdf(model, s, float(x)) for x in xs]
    if isinstance(model, ExtremeParams):
        return [models.extreme_cdf(model, float(x)) for x in xs]
    if isinstance(model, GammaShadowParams):
        return [models.gamma_shadow_cdf(model, float(x)) for x in xs]
    # Composite: cumulative quadrature of the density.
    density = composite.composite_density(model, series_cfg, oracle=oracle)
    values = []
    total = density.atom_mass
    prev = 0.0
    for x in xs:
        x = float(x)
        seg = integrate_semi_infinite(
            lambda w: density.continuous(prev + (x - prev) * w / (1.0 + w))
            * (x - prev)
            / (1.0 + w) ** 2,
            rel_tol=1e-8,
            abs_tol=1e-12,
            budget=200_000,
            scale=1.0,
        ).value
        total += seg
        prev = x
        values.append(min(total, 1.0))
    return values


def cmd_moments(cfg: dict) -> int:
    model = _build_model(cfg)
    if not isinstance(model, AkmParams):
        raise UsageError("moments requires the plain akm model")
    orders_spec = cfg.get("orders") or "0,1,2,3,4"
    try:
        orders = [float(tok) for tok in str(orders_spec).split(",")]
    except ValueError:
        raise UsageError(f"cannot parse --orders {orders_spec!r}")
    rows = []
    worst = 0.0
    for order in orders:
        closed = models.akm_moment(model, order)
        quad = validation._moment_quadrature(model, order)
        rel = abs(closed - quad) / max(abs(quad), 1e-300)
        worst = max(worst, rel)
        rows.append((order, closed, quad, rel))
    fmt = cfg.get("format") or "csv"
    if fmt == "json":
        payload = {
            "model": json.loads(mc.model_descriptor(model)),
            "rows": [
                {"order": o, "closed_form": c, "quadrature": q, "rel_diff": r}
                for o, c, q, r in rows
            ],
        }
        _write_text(cfg.get("out"), json.dumps(payload, indent=2) + "\n")
    else:
        lines = ["l,closed_form,quadrature,rel_diff"]
        for o, c, q, r in rows:
            lines.append(f"{_fmt(o)},{_fmt(c)},{_fmt(q)},{_fmt(r)}")
        _write_text(cfg.get("out"), "\n".join(lines) + "\n")
    if cfg.get("strict") and worst > 1e-6:
        raise ValidationFailure(f"moment mismatch {worst:.3e} exceeds 1e-6")
    return 0


def cmd_figure(cfg: dict) -> int:
    figure_id = int(cfg["figure_id"])
    out_dir = Path(cfg.get("out_dir") or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    fmt = cfg.get("format") or "json"
    xs = _parse_grid(cfg)
    series_cfg = SeriesConfig(max_terms=int(cfg.get("series_n") or 160), rel_tol=1e-9)
    paths = []
    for curve in figures.figure_curves(figure_id):
        model = curve["model"]
        density = composite.composite_density(model, series_cfg)
        values = [density.continuous(float(x)) for x in xs]
        shadow = model.shadow
        mass = models.density_total_mass(
            density, rel_tol=1e-7, budget=400_000, scale=shadow.b * shadow.omega
        )
        metadata = _base_metadata(series_cfg, oracle=False)
        metadata.update(
            {
                "figure": figure_id,
                "fixed_parameters": curve["fixed"],
                "swept_parameter": curve["swept"],
                "sweep_defaults": {
                    "alpha": list(figures.ALPHA_SWEEP),
                    "mu": list(figures.MU_SWEEP),
                },
                "total_mass": mass,
            }
        )
        payload = _curve_payload(mc.model_descriptor(model), xs, values, density.atoms, metadata)
        key, value = next(iter(curve["swept"].items()))
        path = out_dir / f"figure{figure_id}_{key}_{value:g}.{fmt}"
        _emit_curve(payload, fmt, str(path))
        paths.append(str(path))
    sys.stdout.write("\n".join(paths) + "\n")
    return 0


def cmd_sample(cfg: dict) -> int:
    model = _build_model(cfg)
    count = int(cfg.get("count") or 100_000)
    seed = int(cfg.get("seed") or 1)
    if count < 1:
        raise UsageError("count must be positive")
    series_cfg = _series_config(cfg)

    if isinstance(model, CompositeModel):
        batch = mc.sample_composite(model, count, seed)
    elif isinstance(model, AkmParams):
        batch = mc.sample_akm(model, count, seed)
    elif isinstance(model, AmParams):
        batch = mc.sample_am(model, count, seed)
    elif isinstance(model, ExtremeParams):
        batch = mc.sample_extreme(model, count, seed)
    else:
        batch = mc.sample_gamma_shadow(model, count, seed)

    out = cfg.get("out") or "samples.txt"
    _write_text(out, "\n".join(_fmt(v) for v in batch.values) + "\n")

    density = _density_for(model, cfg, series_cfg, oracle=False)
    grid_points = 1200 if isinstance(model, CompositeModel) else 2000
    report = mc.gof_compare(batch, density, grid_points=grid_points)
    critical = mc.ks_critical_value(0.001, max(report.sample_size, 1))
    gof_ok = math.isnan(report.ks_statistic) or report.ks_statistic <= critical
    payload = {
        "model": json.loads(batch.model_descriptor),
        "seed": seed,
        "count": count,
        "sample_file": out,
        "ks_statistic": report.ks_statistic,
        "ks_critical_0_001": critical,
        "atom_frequency_observed": report.atom_frequency_observed,
        "atom_mass_expected": report.atom_mass_expected,
        "passed": bool(gof_ok),
    }
    _write_text(cfg.get("report"), json.dumps(payload, indent=2) + "\n")
    if cfg.get("strict") and not gof_ok:
        raise ValidationFailure(f"gof failed: ks={report.ks_statistic:.4g} > {critical:.4g}")
    return 0


def cmd_validate(cfg: dict) -> int:
    report = validation.run_validation(cfg.get("level") or "quick")
    _write_text(cfg.get("report"), json.dumps(report, indent=2) + "\n")
    if not report["passed"]:
        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        raise ValidationFailure("failed checks: " + ", ".join(failed))
    return 0


_COMMANDS = {
    "pdf": cmd_pdf,
    "cdf": cmd_cdf,
    "moments": cmd_moments,
    "figure": cmd_figure,
    "sample": cmd_sample,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _merge_config(args)
    command = _COMMANDS[args.command]
    try:
        return command(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 1
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
