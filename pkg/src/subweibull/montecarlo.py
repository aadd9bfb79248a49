"""Statistic kernels and a deterministic parallel harness for empirical tail estimation.

The harness turns (coordinate law, statistic, threshold grid) into a TailEstimate
with exact binomial confidence bands.  Work is split into chunks of 4096 draws;
chunk i always uses the generator addressed by (seed, stream, i) and partial
results merge in chunk order, so any number of workers produces byte-identical
output.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats as sps

from . import distributions as dist
from .distributions import CHUNK_SIZE, DistributionSpec, TensorSpec, rng_for

STREAM_MAIN = 0
STREAM_PILOT = 1

KINDS = (
    "quadratic-form",
    "sup-quadratic-forms",
    "euclid-deviation",
    "norm-deviation",
    "largest-singular-value",
    "random-series-norm",
    "tensor-lipschitz",
    "product-of-norms",
    "max-product",
)

_ONE_SIDED_KINDS = {"sup-quadratic-forms", "product-of-norms", "max-product"}


@dataclass(frozen=True, eq=False)
class StatisticSpec:
    """A scalar functional of a random draw, with its centering and sidedness.

    ``scale`` divides the centered deviation before thresholds are applied, so
    threshold grids can live in normalized units (for example t K^2 ||B||_op).
    """

    kind: str
    params: dict = field(default_factory=dict)
    centering: str = "estimated"  # "analytic" | "estimated"
    center: Optional[float] = None
    scale: float = 1.0
    two_sided: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown statistic kind {self.kind!r}")
        if self.centering not in ("analytic", "estimated"):
            raise ValueError("centering must be 'analytic' or 'estimated'")
        if self.centering == "analytic" and self.center is None:
            raise ValueError("analytic centering needs a center value")
        if not (self.scale > 0):
            raise ValueError("scale must be positive")

    # -- constructors, one per kind -----------------------------------------

    @classmethod
    def quadratic_form(cls, a, variances, scale: float = 1.0) -> "StatisticSpec":
        m = np.asarray(a, dtype=np.float64)
        var = np.asarray(variances, dtype=np.float64)
        if m.shape[0] != m.shape[1] or var.shape != (m.shape[0],):
            raise ValueError("dimension mismatch")
        center = float(np.diag(m) @ var)
        return cls("quadratic-form", {"a": m, "n": m.shape[0]}, "analytic", center, scale, True)

    @classmethod
    def sup_quadratic_forms(cls, mats, variances, scale: float = 1.0) -> "StatisticSpec":
        ms = [np.asarray(m, dtype=np.float64) for m in mats]
        var = np.asarray(variances, dtype=np.float64)
        n = ms[0].shape[0]
        for m in ms:
            if m.shape != (n, n) or not np.array_equal(m, m.T):
                raise ValueError("family members must be symmetric with equal dimension")
        centers = np.array([float(np.diag(m) @ var) for m in ms])
        return cls(
            "sup-quadratic-forms",
            {"mats": ms, "inner_centers": centers, "n": n},
            "estimated", None, scale, False,
        )

    @classmethod
    def euclid_deviation(cls, b, scale: float = 1.0) -> "StatisticSpec":
        m = np.asarray(b, dtype=np.float64)
        hs = float(np.linalg.norm(m))
        return cls("euclid-deviation", {"b": m, "n": m.shape[1]}, "analytic", hs, scale, True)

    @classmethod
    def norm_deviation(cls, n: int, scale: float = 1.0) -> "StatisticSpec":
        return cls("norm-deviation", {"n": n}, "analytic", math.sqrt(n), scale, True)

    @classmethod
    def largest_singular_value(cls, m: int, n: int, scale: float = 1.0) -> "StatisticSpec":
        return cls("largest-singular-value", {"m": m, "n": n}, "estimated", None, scale, True)

    @classmethod
    def random_series_norm(cls, coefficients, center: Optional[float] = None, scale: float = 1.0) -> "StatisticSpec":
        w = np.asarray(coefficients, dtype=np.float64)
        if w.ndim != 2:
            raise ValueError("coefficients must be (n_coords, n_forms)")
        centering = "estimated" if center is None else "analytic"
        return cls("random-series-norm", {"w": w, "n": w.shape[0]}, centering, center, scale, True)

    @classmethod
    def tensor_lipschitz(cls, tensor: TensorSpec, tag: str = "euclid-norm", scale: float = 1.0) -> "StatisticSpec":
        if tag != "euclid-norm":
            raise ValueError(f"unsupported tensor function tag {tag!r}")
        if tensor.n_entries() > tensor.entry_budget:
            # the Euclidean norm factorizes over coordinate vectors, but the
            # statistic is defined on the materialized tensor, so the same
            # memory budget applies
            raise dist.ResourceLimitError(
                f"tensor with n^d = {tensor.n_entries()} entries exceeds budget {tensor.entry_budget}"
            )
        return cls("tensor-lipschitz", {"tensor": tensor, "tag": tag}, "estimated", None, scale, True)

    @classmethod
    def product_of_norms(cls, d: int, n: int, scale: float = 1.0) -> "StatisticSpec":
        return cls("product-of-norms", {"d": d, "n": n}, "analytic", float(n) ** (d / 2.0), scale, False)

    @classmethod
    def max_product(cls, d: int, n: int, scale: float = 1.0) -> "StatisticSpec":
        return cls("max-product", {"d": d, "n": n}, "analytic", 1.0, scale, False)

    # -- draw/evaluate machinery ---------------------------------------------

    def draw_shape(self) -> tuple:
        k, p = self.kind, self.params
        if k in ("quadratic-form", "sup-quadratic-forms", "euclid-deviation", "norm-deviation", "random-series-norm"):
            return ("vector", p["n"])
        if k == "largest-singular-value":
            return ("matrix", (p["m"], p["n"]))
        if k == "tensor-lipschitz":
            t = p["tensor"]
            return ("coords", (t.d, t.n), True)
        # product-of-norms / max-product draw unit-variance coordinate blocks too
        return ("coords", (p["d"], p["n"]), True)

    def descriptor(self) -> dict:
        d = {
            "kind": self.kind,
            "centering": self.centering,
            "scale": self.scale,
            "two_sided": self.two_sided,
        }
        shape = self.draw_shape()
        d["draw"] = {"layout": shape[0], "shape": shape[1]}
        return d


def _draw_batch(spec: DistributionSpec, stat: StatisticSpec, rng: np.random.Generator, n_draws: int) -> np.ndarray:
    layout = stat.draw_shape()
    if layout[0] == "vector":
        n = layout[1]
        return dist.draw(spec, rng, n_draws * n).reshape(n_draws, n)
    if layout[0] == "matrix":
        m, n = layout[1]
        return dist.draw(spec, rng, n_draws * m * n).reshape(n_draws, m, n)
    d, n = layout[1]
    block = dist.draw(spec, rng, n_draws * d * n).reshape(n_draws, d, n)
    return block / spec.std()  # tensor coordinates are unit-variance by contract


def evaluate_batch(stat: StatisticSpec, draws: np.ndarray) -> np.ndarray:
    """Vectorized statistic values for a batch of draws (first axis)."""
    k, p = stat.kind, stat.params
    if k == "quadratic-form":
        a = p["a"]
        return ((draws @ a) * draws).sum(axis=1)
    if k == "sup-quadratic-forms":
        vals = [((draws @ m) * draws).sum(axis=1) - c for m, c in zip(p["mats"], p["inner_centers"])]
        return np.max(np.stack(vals, axis=0), axis=0)
    if k == "euclid-deviation":
        return np.linalg.norm(draws @ p["b"].T, axis=1)
    if k == "norm-deviation":
        return np.linalg.norm(draws, axis=1)
    if k == "largest-singular-value":
        return np.linalg.svd(draws, compute_uv=False)[:, 0]
    if k == "random-series-norm":
        return (draws @ p["w"]).max(axis=1)
    if k == "tensor-lipschitz":
        return np.prod(np.linalg.norm(draws, axis=2), axis=1)
    if k == "product-of-norms":
        return np.prod(np.linalg.norm(draws, axis=2), axis=1)
    if k == "max-product":
        n = p["n"]
        norms = np.linalg.norm(draws, axis=2)
        cum = np.cumprod(norms, axis=1)
        powers = np.float64(n) ** (np.arange(1, p["d"] + 1) / 2.0)
        return (cum / powers).max(axis=1)
    raise ValueError(f"unknown statistic kind {k!r}")


def evaluate_statistic(stat: StatisticSpec, draw: np.ndarray) -> float:
    """Scalar functional value of a single draw.

    The draw must match the statistic's layout (vector, matrix, or the stack of
    unit-variance coordinate vectors for tensor statistics).  The value of
    sup-quadratic-forms includes the per-matrix analytic centering.
    """
    arr = np.asarray(draw, dtype=np.float64)
    layout = stat.draw_shape()
    expected = (layout[1],) if layout[0] == "vector" else tuple(layout[1])
    if arr.shape != expected:
        raise ValueError(f"draw shape {arr.shape} does not match statistic shape {expected}")
    return float(evaluate_batch(stat, arr[None, ...])[0])


# ---------------------------------------------------------------------------
# exact binomial confidence intervals


def binomial_ci(count: int, n: int, conf_level: float, two_sided: bool = True) -> tuple[float, float]:
    """Exact (Clopper-Pearson) binomial interval for count successes out of n."""
    if not (0 <= count <= n) or n < 1:
        raise ValueError("need 0 <= count <= n, n >= 1")
    if not (0.0 < conf_level < 1.0):
        raise ValueError("conf_level must lie in (0, 1)")
    tail = (1.0 - conf_level) / 2.0 if two_sided else (1.0 - conf_level)
    lo = 0.0 if count == 0 else float(sps.beta.ppf(tail, count, n - count + 1))
    if not two_sided:
        lo = 0.0
    hi = 1.0 if count == n else float(sps.beta.ppf(1.0 - tail, count + 1, n - count))
    return lo, hi


# ---------------------------------------------------------------------------
# tail estimates


@dataclass(frozen=True, eq=False)
class TailEstimate:
    """Exceedance counts over a threshold grid with exact binomial confidence bands."""

    t_grid: np.ndarray
    counts: np.ndarray
    N: int
    p_hat: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    conf_level: float
    seed: int
    center: float
    center_se: float
    scale: float
    two_sided: bool
    statistic: dict

    def to_csv_text(self) -> str:
        lines = ["t,N,count,p_hat,ci_low,ci_high"]
        for i, t in enumerate(self.t_grid):
            lines.append(
                f"{float(t)!r},{self.N},{int(self.counts[i])},"
                f"{float(self.p_hat[i])!r},{float(self.ci_low[i])!r},{float(self.ci_high[i])!r}"
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_csv_text())

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "t_grid": [float(t) for t in self.t_grid],
            "counts": [int(c) for c in self.counts],
            "N": self.N,
            "p_hat": [float(v) for v in self.p_hat],
            "ci_low": [float(v) for v in self.ci_low],
            "ci_high": [float(v) for v in self.ci_high],
            "conf_level": self.conf_level,
            "seed": self.seed,
            "center": self.center,
            "center_se": self.center_se,
            "scale": self.scale,
            "two_sided": self.two_sided,
            "statistic": self.statistic,
        }

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True, indent=1)
            fh.write("\n")


def _chunk_counts(
    spec: DistributionSpec, stat: StatisticSpec, seed: int, stream: int,
    chunk_index: int, n_draws: int, center: float, grid: np.ndarray,
) -> np.ndarray:
    rng = rng_for(seed, stream, chunk_index)
    draws = _draw_batch(spec, stat, rng, CHUNK_SIZE)[:n_draws]
    values = evaluate_batch(stat, draws)
    dev = values - center
    if stat.two_sided:
        dev = np.abs(dev)
    dev = dev / stat.scale
    return (dev[:, None] >= grid[None, :]).sum(axis=0)


def empirical_tail(
    spec: DistributionSpec,
    stat: StatisticSpec,
    t_grid,
    N: int,
    seed: int,
    conf_level: float = 0.95,
    workers: int = 1,
    pilot_n: Optional[int] = None,
) -> TailEstimate:
    """Estimate P(deviation >= t) over a grid, deterministically for any worker count.

    Exceedance is |S - center| >= t for two-sided statistics and S - center >= t
    otherwise, with the deviation divided by the statistic's scale.  Estimated
    centers come from an independent pilot stream; the pilot SE is recorded so
    downstream checks can widen thresholds.
    """
    grid = np.asarray(t_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) < 0):
        raise ValueError("t_grid must be a nonempty ascending 1-d grid")
    if N < 1:
        raise ValueError("N must be >= 1")
    if not (0.0 < conf_level < 1.0):
        raise ValueError("conf_level must lie in (0, 1)")

    if stat.centering == "analytic":
        center, center_se = float(stat.center), 0.0
    else:
        n_pilot = pilot_n if pilot_n is not None else max(10**5, 10 * grid.size)
        center, center_se = center_estimate(spec, stat, n_pilot, seed, workers=workers)

    n_chunks = (N + CHUNK_SIZE - 1) // CHUNK_SIZE
    sizes = [min(CHUNK_SIZE, N - i * CHUNK_SIZE) for i in range(n_chunks)]

    def work(i: int) -> np.ndarray:
        return _chunk_counts(spec, stat, seed, STREAM_MAIN, i, sizes[i], center, grid)

    if workers <= 1:
        parts = [work(i) for i in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(n_chunks)))
    counts = np.zeros(grid.size, dtype=np.int64)
    for part in parts:  # fixed merge order
        counts += part

    p_hat = counts / float(N)
    ci = [binomial_ci(int(c), N, conf_level, two_sided=True) for c in counts]
    ci_low = np.array([lo for lo, _ in ci])
    ci_high = np.array([hi for _, hi in ci])
    return TailEstimate(
        t_grid=grid, counts=counts, N=N, p_hat=p_hat, ci_low=ci_low, ci_high=ci_high,
        conf_level=conf_level, seed=int(seed), center=center, center_se=center_se,
        scale=stat.scale, two_sided=stat.two_sided, statistic=stat.descriptor(),
    )


def center_estimate(
    spec: DistributionSpec, stat: StatisticSpec, n_pilot: int, seed: int, workers: int = 1
) -> tuple[float, float]:
    """Pilot-run mean and standard error of the statistic, on a dedicated stream."""
    if n_pilot < 2:
        raise ValueError("need n_pilot >= 2")
    n_chunks = (n_pilot + CHUNK_SIZE - 1) // CHUNK_SIZE
    sizes = [min(CHUNK_SIZE, n_pilot - i * CHUNK_SIZE) for i in range(n_chunks)]

    def work(i: int) -> tuple[float, float]:
        rng = rng_for(seed, STREAM_PILOT, i)
        draws = _draw_batch(spec, stat, rng, CHUNK_SIZE)[:sizes[i]]
        values = evaluate_batch(stat, draws)
        return float(values.sum()), float((values**2).sum())

    if workers <= 1:
        parts = [work(i) for i in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(n_chunks)))
    total = 0.0
    total_sq = 0.0
    for s, s2 in parts:  # fixed merge order
        total += s
        total_sq += s2
    mean = total / n_pilot
    var = max(total_sq / n_pilot - mean**2, 0.0) * n_pilot / (n_pilot - 1)
    return mean, math.sqrt(var / n_pilot)


# ---------------------------------------------------------------------------
# matrix-family expectations


def _sup_norm_means(mats, spec: DistributionSpec, n: int, N: int, seed: int, stream: int, diag: bool):
    """Mean and SE of sup_A ||A X||_2 (or of sup_A ||Diag(A) X||_2)."""
    ms = [np.asarray(m, dtype=np.float64) for m in mats]
    if diag:
        ms = [np.diag(np.diag(m)) for m in ms]
    n_chunks = (N + CHUNK_SIZE - 1) // CHUNK_SIZE
    total = 0.0
    total_sq = 0.0
    for i in range(n_chunks):
        size = min(CHUNK_SIZE, N - i * CHUNK_SIZE)
        rng = rng_for(seed, stream, i)
        x = dist.draw(spec, rng, CHUNK_SIZE * n).reshape(CHUNK_SIZE, n)[:size]
        sup = np.max(np.stack([np.linalg.norm(x @ m.T, axis=1) for m in ms]), axis=0)
        total += float(sup.sum())
        total_sq += float((sup**2).sum())
    mean = total / N
    var = max(total_sq / N - mean**2, 0.0) * N / max(N - 1, 1)
    return mean, math.sqrt(var / N)


def estimate_sup_norm(mats, spec: DistributionSpec, n: int, N: int, seed: int) -> tuple[float, float]:
    """Pilot estimate of E sup_A ||A X||_2 over a finite matrix family."""
    return _sup_norm_means(mats, spec, n, N, seed, STREAM_PILOT, diag=False)


@dataclass(frozen=True)
class DiagComparisonReport:
    diag_mean: float
    diag_se: float
    full_mean: float
    full_se: float
    passed: bool


def diag_comparison_check(mats, spec: DistributionSpec, n: int, N: int, seed: int) -> DiagComparisonReport:
    """Empirical check that E sup ||Diag(A) X|| <= E sup ||A X|| over a matrix family.

    Passes when the left side is below the right plus twice the summed SEs.
    """
    left, left_se = _sup_norm_means(mats, spec, n, N, seed, STREAM_MAIN, diag=True)
    right, right_se = _sup_norm_means(mats, spec, n, N, seed, STREAM_MAIN, diag=False)
    return DiagComparisonReport(
        diag_mean=left, diag_se=left_se, full_mean=right, full_se=right_se,
        passed=left <= right + 2.0 * (left_se + right_se),
    )
