"""Command-line surface: configured experiments and one-shot utility subcommands.

An experiment config is a JSON file (strict: unknown keys are rejected, the
seed is mandatory).  ``run`` executes the full pipeline -- sample, estimate,
bound, calibrate -- and writes estimate.csv, bound.json, calibration.json and
a combined plot-ready CSV into an output directory named by the config hash.
The exit code carries the verdict: 0 dominated, 2 violated, 1 error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import struct
import sys
from pathlib import Path

import numpy as np

from . import bounds, calibrate, montecarlo as mc, orlicz
from .distributions import (
    DistributionSpec,
    ResourceLimitError,
    TensorSpec,
    rng_for,
    sample,
)
from .specnorms import (
    AL12_MAX_DIM,
    al12_norm_coupled,
    al12_norm_decoupled,
    norm_bundle,
    operator_norm,
)

MATRIX_STREAM_BASE = 1000
OUTPUT_ROOT_ENV = "SUBWEIBULL_OUTPUT_ROOT"

EXPERIMENT_KINDS = (
    "hanson-wright",
    "uniform-hw",
    "euclid-norm",
    "product-tail",
    "max-product-tail",
    "tensor",
    "tensor-pi",
    "tensor-lsi",
    "convex-lsv",
    "series-norm",
    "classical-convex",
    "diag-comparison",
)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrix I/O and ensembles

_BIN_HEADER = struct.Struct("<Q")


def save_matrix(path, m) -> None:
    m = np.ascontiguousarray(np.asarray(m, dtype=np.float64))
    p = Path(path)
    if p.suffix == ".bin":
        if m.shape[0] != m.shape[1]:
            raise ValueError("binary matrix format holds square matrices only")
        with open(p, "wb") as fh:
            fh.write(_BIN_HEADER.pack(m.shape[0]))
            fh.write(m.astype("<f8").tobytes(order="C"))
    else:
        np.savetxt(p, m)


def load_matrix(path) -> np.ndarray:
    p = Path(path)
    if p.suffix == ".bin":
        raw = p.read_bytes()
        (n,) = _BIN_HEADER.unpack_from(raw, 0)
        body = np.frombuffer(raw, dtype="<f8", offset=_BIN_HEADER.size)
        if body.size != n * n:
            raise ConfigError(f"binary matrix file {path}: expected {n * n} floats, found {body.size}")
        return body.reshape(int(n), int(n)).astype(np.float64)
    try:
        return np.atleast_2d(np.loadtxt(p))
    except ValueError:
        return np.atleast_2d(np.loadtxt(p, delimiter=","))


def generate_matrix(ensemble: str, n: int, seed: int, index: int = 0, density: float = 0.1) -> np.ndarray:
    rng = rng_for(seed, MATRIX_STREAM_BASE + index)
    if ensemble == "goe":
        g = rng.standard_normal((n, n))
        return (g + g.T) / math.sqrt(2.0)
    if ensemble == "diag":
        return np.diag(rng.standard_normal(n))
    if ensemble == "sparse-sign":
        if not (0.0 < density <= 1.0):
            raise ConfigError("sparse-sign density must lie in (0, 1]")
        entries = rng.choice([-1.0, 0.0, 1.0], p=[density / 2, 1 - density, density / 2], size=(n, n))
        upper = np.triu(entries)
        return upper + upper.T - np.diag(np.diag(upper))
    raise ConfigError(f"unknown matrix ensemble {ensemble!r}")


# ---------------------------------------------------------------------------
# config handling

_TOP_KEYS = {
    "schema", "experiment", "alpha", "n", "d", "m", "N", "seed", "conf_level",
    "t_grid", "distribution", "matrix", "bound", "calibration", "workers",
}
_GRID_KEYS = {"min", "max", "points", "scale"}
_MATRIX_KEYS = {"ensemble", "path", "count", "density"}
_BOUND_KEYS = {"C", "c", "C_range", "sigma"}
_CAL_KEYS = {"enabled", "search"}
_EXP_KEYS = {"kind"}


def _reject_unknown(d: dict, allowed: set, where: str) -> None:
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) {sorted(extra)} in {where}")


def validate_config(cfg: dict) -> dict:
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(cfg, _TOP_KEYS, "config")
    if cfg.get("schema", 1) != 1:
        raise ConfigError(f"unsupported config schema {cfg.get('schema')}")
    if "experiment" not in cfg or not isinstance(cfg["experiment"], dict):
        raise ConfigError("config needs an 'experiment' object")
    _reject_unknown(cfg["experiment"], _EXP_KEYS, "experiment")
    kind = cfg["experiment"].get("kind")
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}; choose from {EXPERIMENT_KINDS}")
    if "seed" not in cfg:
        raise ConfigError("seed is mandatory (no wall-clock default)")
    for key, typ in (("seed", int), ("N", int), ("n", int)):
        if key in cfg and not isinstance(cfg[key], int):
            raise ConfigError(f"{key} must be an integer")
    if kind != "diag-comparison":
        for key in ("N", "n", "t_grid", "distribution", "alpha"):
            if key not in cfg:
                raise ConfigError(f"config key {key!r} is required for kind {kind!r}")
    else:
        for key in ("N", "n", "distribution"):
            if key not in cfg:
                raise ConfigError(f"config key {key!r} is required for kind {kind!r}")
    if "t_grid" in cfg:
        _reject_unknown(cfg["t_grid"], _GRID_KEYS, "t_grid")
        g = cfg["t_grid"]
        for key in ("min", "max", "points"):
            if key not in g:
                raise ConfigError(f"t_grid needs {key!r}")
        if g.get("scale", "log") not in ("log", "linear"):
            raise ConfigError("t_grid scale must be 'log' or 'linear'")
    if "matrix" in cfg:
        _reject_unknown(cfg["matrix"], _MATRIX_KEYS, "matrix")
        if ("ensemble" in cfg["matrix"]) == ("path" in cfg["matrix"]):
            raise ConfigError("matrix source needs exactly one of 'ensemble' or 'path'")
    if "bound" in cfg:
        _reject_unknown(cfg["bound"], _BOUND_KEYS, "bound")
    if "calibration" in cfg:
        _reject_unknown(cfg["calibration"], _CAL_KEYS, "calibration")
    DistributionSpec.from_dict(cfg["distribution"]) if "distribution" in cfg else None
    if "alpha" in cfg and not (0.0 < float(cfg["alpha"]) <= 2.0):
        raise ConfigError("alpha must lie in (0, 2]")
    return cfg


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path}: parse error at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return validate_config(cfg)


def config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def build_t_grid(cfg: dict) -> np.ndarray:
    g = cfg["t_grid"]
    lo, hi, points = float(g["min"]), float(g["max"]), int(g["points"])
    if not (0 <= lo < hi) or points < 2:
        raise ConfigError("t_grid needs 0 <= min < max and points >= 2")
    if g.get("scale", "log") == "log":
        if lo <= 0:
            raise ConfigError("log-scale grids need min > 0")
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


# ---------------------------------------------------------------------------
# experiment assembly


def coordinate_orlicz_norm(spec: DistributionSpec, alpha: float, seed: int) -> float:
    """Orlicz norm of the coordinate law: analytic when available, deterministic
    quadrature for the gaussian, otherwise a seeded empirical estimate."""
    analytic = orlicz.orlicz_norm_analytic(spec, alpha)
    if analytic is not None:
        return analytic.value
    if spec.family == "standard-gaussian":
        return orlicz.gaussian_orlicz_norm_quadrature(alpha).value
    draws = sample(spec, 200_000, (seed, 999))
    return orlicz.orlicz_norm_empirical(draws, alpha, tol=1e-6).value


def _matrices(cfg: dict, count: int, symmetrize: bool = True) -> list[np.ndarray]:
    m = cfg.get("matrix", {"ensemble": "goe"})
    if "path" in m:
        raw = load_matrix(m["path"])
        if symmetrize and raw.shape[0] == raw.shape[1]:
            return [0.5 * (raw + raw.T)]
        return [raw]
    n = int(cfg["n"])
    density = float(m.get("density", 0.1))
    return [generate_matrix(m["ensemble"], n, int(cfg["seed"]), index=i, density=density) for i in range(count)]


def assemble(cfg: dict):
    """Build (distribution, statistic, knobbed family or fixed curve) from a config.

    Returns a dict with keys: spec, stat, curve_or_family, calibratable (bool),
    and extras recorded into the report.
    """
    kind = cfg["experiment"]["kind"]
    spec = DistributionSpec.from_dict(cfg["distribution"])
    alpha = float(cfg["alpha"]) if "alpha" in cfg else 2.0
    n = int(cfg["n"])
    d = int(cfg.get("d", 1))
    seed = int(cfg["seed"])
    overrides = cfg.get("bound", {})
    c_range = float(overrides.get("C_range", 1.0))
    extras: dict = {"kind": kind, "alpha": alpha}

    if kind in ("product-tail", "max-product-tail", "tensor", "tensor-pi", "tensor-lsi"):
        if spec.variance() <= 0:
            raise ConfigError(f"kind {kind!r} needs positive-variance coordinates")
        k_eff = coordinate_orlicz_norm(spec, alpha, seed) / spec.std()
        extras["K"] = k_eff
        if kind == "product-tail":
            stat = mc.StatisticSpec.product_of_norms(d, n)
            fam = bounds.knobbed_family("product-tail", n=n, d=d, K=k_eff, alpha=alpha)
        elif kind == "max-product-tail":
            stat = mc.StatisticSpec.max_product(d, n)
            fam = bounds.knobbed_family("max-product-tail", n=n, d=d, K=k_eff, alpha=alpha)
        elif kind == "tensor":
            stat = mc.StatisticSpec.tensor_lipschitz(TensorSpec(n, d, spec))
            fam = bounds.knobbed_family("tensor", n=n, d=d, K=k_eff, alpha=alpha, C_range=c_range)
        else:
            if spec.family != "standard-gaussian":
                raise ConfigError(f"kind {kind!r} requires standard-gaussian coordinates (sigma = 1)")
            sigma = float(overrides.get("sigma", 1.0))
            stat = mc.StatisticSpec.tensor_lipschitz(TensorSpec(n, d, spec))
            fam = bounds.knobbed_family(
                "tensor-pi" if kind == "tensor-pi" else "tensor-lsi",
                n=n, d=d, sigma=sigma, C_range=c_range,
            )
        return {"spec": spec, "stat": stat, "family": fam, "calibratable": True, "extras": extras}

    k_coord = coordinate_orlicz_norm(spec, alpha, seed)
    extras["K"] = k_coord

    if kind == "hanson-wright":
        a = _matrices(cfg, 1)[0]
        nb = norm_bundle(a)
        variances = np.full(n, spec.variance())
        stat = mc.StatisticSpec.quadratic_form(a, variances)
        fam = bounds.knobbed_family("hanson-wright", K=k_coord, hs=nb.hs, op=nb.op, alpha=alpha)
        extras.update({"hs": nb.hs, "op": nb.op})
        return {"spec": spec, "stat": stat, "family": fam, "calibratable": True, "extras": extras}

    if kind == "uniform-hw":
        count = int(cfg.get("matrix", {}).get("count", 5))
        mats = _matrices(cfg, count)
        variances = np.full(n, spec.variance())
        stat = mc.StatisticSpec.sup_quadratic_forms(mats, variances)
        k_star = bounds.max_orlicz_bound(n, k_coord, alpha)
        e_sup, e_sup_se = mc.estimate_sup_norm(mats, spec, n, 100_000, seed)
        sup_op = max(operator_norm(m) for m in mats)
        fam = bounds.knobbed_family(
            "uniform-hw", K_star=k_star, E_sup_AX=e_sup, sup_op=sup_op, alpha=alpha
        )
        extras.update({"K_star": k_star, "E_sup_AX": e_sup, "E_sup_AX_se": e_sup_se, "sup_op": sup_op})
        return {"spec": spec, "stat": stat, "family": fam, "calibratable": True, "extras": extras}

    if kind == "euclid-norm":
        if "matrix" in cfg:
            b = _matrices(cfg, 1, symmetrize=False)[0]
            op = operator_norm(b)
            stat = mc.StatisticSpec.euclid_deviation(b, scale=k_coord**2 * op)
        else:
            stat = mc.StatisticSpec.norm_deviation(n, scale=k_coord**2)
        fam = bounds.knobbed_family("euclid-norm", alpha=alpha)
        return {"spec": spec, "stat": stat, "family": fam, "calibratable": True, "extras": extras}

    if kind == "convex-lsv":
        m_rows = int(cfg.get("m", n))
        stat = mc.StatisticSpec.largest_singular_value(m_rows, n)
        k_star = bounds.max_orlicz_bound(m_rows * n, k_coord, alpha)
        fam = bounds.knobbed_family("convex-orlicz", K_star=k_star, alpha=alpha)
        extras["K_star"] = k_star
        return {"spec": spec, "stat": stat, "family": fam, "calibratable": True, "extras": extras}

    if kind == "series-norm":
        w = _matrices(cfg, 1, symmetrize=False)[0]
        lipschitz = float(np.sqrt((w**2).sum(axis=0)).max())
        stat = mc.StatisticSpec.random_series_norm(w)
        k_star = lipschitz * bounds.max_orlicz_bound(w.shape[0], k_coord, alpha)
        fam = bounds.knobbed_family("convex-orlicz", K_star=k_star, alpha=alpha)
        extras.update({"lipschitz": lipschitz, "K_star": k_star})
        return {"spec": spec, "stat": stat, "family": fam, "calibratable": True, "extras": extras}

    if kind == "classical-convex":
        if spec.family not in ("rademacher", "uniform"):
            raise ConfigError("classical-convex needs bounded coordinates (rademacher or uniform)")
        half = 1.0 if spec.family == "rademacher" else spec.half_width
        w = np.full((n, 1), 1.0 / math.sqrt(n))
        stat = mc.StatisticSpec.random_series_norm(w, center=0.0)
        curve = bounds.make_curve("classical-convex", a=-half, b=half)
        return {"spec": spec, "stat": stat, "curve": curve, "calibratable": False, "extras": extras}

    raise ConfigError(f"kind {kind!r} is not an estimate/bound experiment")


# ---------------------------------------------------------------------------
# pipeline


def output_dir(cfg: dict, root=None) -> Path:
    base = root or os.environ.get(OUTPUT_ROOT_ENV) or "subweibull-out"
    return Path(base) / f"{cfg['experiment']['kind']}-{config_hash(cfg)}"


def run(cfg: dict, root=None, estimate_only: bool = False) -> int:
    """Execute a config end to end; returns the process exit code.

    With ``estimate_only`` the pipeline stops after writing the estimate files
    and exits 0 on success (the ``simulate`` subcommand).
    """
    cfg = validate_config(cfg)
    kind = cfg["experiment"]["kind"]
    out = output_dir(cfg, root)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(cfg, sort_keys=True, indent=1) + "\n")

    if kind == "diag-comparison":
        count = int(cfg.get("matrix", {}).get("count", 5))
        mats = _matrices(cfg, count)
        spec = DistributionSpec.from_dict(cfg["distribution"])
        rep = mc.diag_comparison_check(mats, spec, int(cfg["n"]), int(cfg["N"]), int(cfg["seed"]))
        payload = {
            "schema": 1, "kind": kind, "passed": rep.passed,
            "diag_mean": rep.diag_mean, "diag_se": rep.diag_se,
            "full_mean": rep.full_mean, "full_se": rep.full_se,
        }
        (out / "calibration.json").write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")
        print(f"[subweibull] diag comparison: {'pass' if rep.passed else 'FAIL'} -> {out}")
        return 0 if rep.passed else 2

    parts = assemble(cfg)
    spec, stat = parts["spec"], parts["stat"]
    grid = build_t_grid(cfg)
    workers = int(cfg.get("workers", 1))
    try:
        estimate = mc.empirical_tail(
            spec, stat, grid, int(cfg["N"]), int(cfg["seed"]),
            conf_level=float(cfg.get("conf_level", 0.95)), workers=workers,
        )
    except ResourceLimitError as e:
        print(f"[subweibull] resource error: {e}", file=sys.stderr)
        return 1
    estimate.write_csv(out / "estimate.csv")
    (out / "estimate.json").write_text(
        json.dumps(estimate.to_json_dict(), sort_keys=True, indent=1) + "\n"
    )
    if estimate_only:
        print(f"[subweibull] {kind}: estimate written -> {out}")
        return 0

    cal_cfg = cfg.get("calibration", {})
    enabled = bool(cal_cfg.get("enabled", True)) and parts["calibratable"]
    if enabled:
        fam = parts["family"]
        search = tuple(cal_cfg.get("search", [1e-3, 1e3]))
        result = calibrate.min_dominating_constant(estimate, fam, search)
        curve = fam.build(result.knob) if result.knob is not None else fam.build(search[1])
        verdict = result.status
        payload = result.to_json_dict()
    else:
        if parts["calibratable"]:
            fam = parts["family"]
            constant = float(cfg.get("bound", {}).get(fam.constant_name, 1.0))
            curve = fam.build_at_constant(constant)
        else:
            curve = parts["curve"]
        report = calibrate.domination_report(estimate, curve)
        verdict = "dominated" if report.dominated else "violated-at"
        payload = report.to_json_dict()

    payload["extras"] = parts["extras"]
    (out / "bound.json").write_text(json.dumps(curve.to_dict(), sort_keys=True, indent=1) + "\n")
    (out / "calibration.json").write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")

    vals, mask = curve.evaluate_grid(grid)
    lines = ["t,p_hat,ci_high,bound"]
    for i, t in enumerate(grid):
        bound_txt = repr(float(vals[i])) if mask[i] else "nan"
        lines.append(f"{float(t)!r},{float(estimate.p_hat[i])!r},{float(estimate.ci_high[i])!r},{bound_txt}")
    (out / "combined.csv").write_text("\n".join(lines) + "\n")

    print(f"[subweibull] {kind}: {verdict} -> {out}")
    return 0 if verdict == "dominated" else 2


# ---------------------------------------------------------------------------
# subcommands


def _dist_from_args(args) -> DistributionSpec:
    d = {"family": args.family}
    if args.family == "uniform":
        d["half_width"] = args.half_width
    if args.family == "symmetric-weibull":
        if args.shape is None:
            raise ConfigError("symmetric-weibull needs --shape")
        d["shape"] = args.shape
    return DistributionSpec.from_dict(d)


def _cmd_sample(args) -> int:
    spec = _dist_from_args(args)
    values = sample(spec, args.count, (args.seed, args.stream))
    text = "\n".join(repr(float(v)) for v in values) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_orlicz(args) -> int:
    alpha = args.alpha
    if args.input:
        values = np.loadtxt(args.input).ravel()
        result = orlicz.orlicz_norm_empirical(values, alpha, tol=args.tol)
    else:
        spec = _dist_from_args(args)
        analytic = orlicz.orlicz_norm_analytic(spec, alpha)
        if analytic is not None and args.count == 0:
            result = analytic
        elif args.count == 0:
            print("no closed form for this family; pass --count to estimate", file=sys.stderr)
            return 1
        else:
            values = sample(spec, args.count, (args.seed, args.stream))
            result = orlicz.orlicz_norm_empirical(values, alpha, tol=args.tol)
    print(json.dumps({"value": result.value, "method": result.method, "alpha": alpha}, sort_keys=True))
    return 0


def _cmd_norms(args) -> int:
    m = load_matrix(args.matrix)
    if m.shape[0] == m.shape[1] and not np.array_equal(m, m.T):
        m = 0.5 * (m + m.T)
    nb = norm_bundle(m)
    payload = {
        "n": m.shape[0], "hs": nb.hs, "op": nb.op, "row_max": nb.row_max,
        "diag_hs": nb.diag_hs, "max_abs_diag": nb.max_abs_diag,
    }
    if args.al12_p is not None:
        if max(m.shape) > AL12_MAX_DIM:
            print(f"AL12 norms need n <= {AL12_MAX_DIM}", file=sys.stderr)
            return 1
        payload["al12_coupled"] = al12_norm_coupled(m, args.al12_p, args.al12_alpha)
        payload["al12_decoupled"] = al12_norm_decoupled(m, args.al12_p, args.al12_alpha)
        payload["al12_p"] = args.al12_p
        payload["al12_alpha"] = args.al12_alpha
    print(json.dumps(payload, sort_keys=True, indent=1))
    return 0


def _cmd_bound(args) -> int:
    constants = {}
    for item in args.constant:
        key, _, value = item.partition("=")
        if not value:
            raise ConfigError(f"bad constant {item!r}; expected name=value")
        constants[key] = json.loads(value)
    curve = bounds.make_curve(args.family, **constants)
    ts = np.array(args.t) if args.t else np.geomspace(args.t_min, args.t_max, args.points)
    vals, mask = curve.evaluate_grid(ts)
    print("t,bound")
    for t, v, ok in zip(ts, vals, mask):
        print(f"{float(t)!r},{repr(float(v)) if ok else 'out-of-range'}")
    return 0


def _apply_overrides(cfg: dict, args) -> dict:
    for key in ("seed", "n", "d", "N", "alpha", "workers", "conf_level"):
        flag = getattr(args, key if key != "N" else "draws", None)
        if flag is not None:
            cfg[key] = flag
    for item in args.set or []:
        path, _, value = item.partition("=")
        if not value:
            raise ConfigError(f"bad --set {item!r}; expected dotted.path=json-value")
        node = cfg
        keys = path.split(".")
        for k in keys[:-1]:
            node = node.setdefault(k, {})
        node[keys[-1]] = json.loads(value)
    return cfg


def _cmd_run(args, estimate_only: bool = False, force_calibration: bool = False) -> int:
    cfg = load_config(args.config)
    cfg = _apply_overrides(cfg, args)
    if force_calibration:
        cfg.setdefault("calibration", {})["enabled"] = True
    cfg = validate_config(cfg)
    return run(cfg, root=args.out, estimate_only=estimate_only)


def _cmd_report(args) -> int:
    est = json.loads(Path(args.estimate).read_text())
    curve = bounds.TailBoundCurve.from_dict(json.loads(Path(args.bound).read_text()))
    estimate = mc.TailEstimate(
        t_grid=np.array(est["t_grid"]), counts=np.array(est["counts"], dtype=np.int64),
        N=est["N"], p_hat=np.array(est["p_hat"]), ci_low=np.array(est["ci_low"]),
        ci_high=np.array(est["ci_high"]), conf_level=est["conf_level"], seed=est["seed"],
        center=est["center"], center_se=est["center_se"], scale=est["scale"],
        two_sided=est["two_sided"], statistic=est["statistic"],
    )
    report = calibrate.domination_report(estimate, curve)
    print(json.dumps(report.to_json_dict(), sort_keys=True, indent=1))
    return 0 if report.dominated else 2


def _add_dist_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default="standard-gaussian",
                   choices=["constant", "rademacher", "uniform", "standard-gaussian", "symmetric-weibull"])
    p.add_argument("--shape", type=float, default=None, help="symmetric-weibull tail exponent")
    p.add_argument("--half-width", type=float, default=1.0, dest="half_width")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stream", type=int, default=0)


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("config", help="experiment config (JSON)")
    p.add_argument("--out", default=None, help=f"output root (default ${OUTPUT_ROOT_ENV} or ./subweibull-out)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("-N", "--draws", type=int, default=None, help="override N")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--conf-level", type=float, default=None, dest="conf_level")
    p.add_argument("--set", action="append", default=[], help="override any config key: dotted.path=json-value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subweibull", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full pipeline: estimate, bound, calibrate, report files")
    _add_config_args(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("simulate", help="estimate only (no calibration)")
    _add_config_args(p)
    p.set_defaults(func=lambda a: _cmd_run(a, estimate_only=True))

    p = sub.add_parser("calibrate", help="estimate plus constant calibration")
    _add_config_args(p)
    p.set_defaults(func=lambda a: _cmd_run(a, force_calibration=True))

    p = sub.add_parser("report", help="domination report from saved estimate/bound JSON")
    p.add_argument("--estimate", required=True)
    p.add_argument("--bound", required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("sample", help="draw from a coordinate law")
    _add_dist_args(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("orlicz", help="Orlicz norm of a sample file or a spec")
    _add_dist_args(p)
    p.add_argument("--input", default=None, help="file of sample values, one per line")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--count", type=int, default=0, help="draws for an empirical estimate")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_orlicz)

    p = sub.add_parser("norms", help="norm bundle (and chaos norms) of a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--al12-p", type=float, default=None, dest="al12_p")
    p.add_argument("--al12-alpha", type=float, default=2.0, dest="al12_alpha")
    p.set_defaults(func=_cmd_norms)

    p = sub.add_parser("bound", help="print a bound curve table")
    p.add_argument("--family", required=True, choices=sorted(bounds._DEFAULT_TWO_SIDED))
    p.add_argument("--constant", action="append", default=[], help="name=value (repeatable)")
    p.add_argument("--t", type=float, action="append", default=None)
    p.add_argument("--t-min", type=float, default=0.1, dest="t_min")
    p.add_argument("--t-max", type=float, default=10.0, dest="t_max")
    p.add_argument("--points", type=int, default=10)
    p.set_defaults(func=_cmd_bound)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as e:
        print(f"[subweibull] error: {e}", file=sys.stderr)
        return 1
    except ResourceLimitError as e:
        print(f"[subweibull] resource error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
