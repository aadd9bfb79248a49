"""Deterministic, seedable samplers for mean-zero scalar laws and simple random tensors.

Every sampler is a pure function of ``(seed, stream_index)``: draws are produced
in fixed-size chunks of 4096, each chunk from its own counter-derived generator,
so output is bit-identical regardless of how many workers consume the chunks and
the first N draws never change when more are requested.

Scalar families (all symmetric about 0):

* ``constant``             -- the constant 0
* ``rademacher``           -- uniform on {-1, +1}
* ``uniform``              -- uniform on a symmetric interval [-b, b]
* ``standard-gaussian``    -- N(0, 1)
* ``symmetric-weibull``    -- sign * (-log U)^(1/shape); tail P(|w| >= t) = exp(-t^shape), exactly
* ``truncated``            -- a base family with values above a level zeroed out
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np
from scipy import special

CHUNK_SIZE = 4096

FAMILIES = (
    "constant",
    "rademacher",
    "uniform",
    "standard-gaussian",
    "symmetric-weibull",
    "truncated",
)


class ResourceLimitError(RuntimeError):
    """Requested object exceeds the configured memory budget."""


@dataclass(frozen=True)
class DistributionSpec:
    """A mean-zero scalar sampling law (family plus family-specific parameters)."""

    family: str
    half_width: Optional[float] = None  # uniform: interval is [-half_width, half_width]
    shape: Optional[float] = None       # symmetric-weibull tail exponent, in (0, 2]
    base: Optional["DistributionSpec"] = None  # truncated: underlying law
    level: Optional[float] = None       # truncated: cutoff M > 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "uniform":
            if self.half_width is None or not (self.half_width > 0):
                raise ValueError("uniform family needs half_width > 0 (interval [-b, b])")
        if self.family == "symmetric-weibull":
            if self.shape is None or not (0 < self.shape <= 2):
                raise ValueError("symmetric-weibull shape must lie in (0, 2]")
        if self.family == "truncated":
            if self.base is None or self.base.family == "truncated":
                raise ValueError("truncated family needs a non-truncated base law")
            if self.level is None or not (self.level > 0) or not math.isfinite(self.level):
                raise ValueError("truncation level must be a finite positive real")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls) -> "DistributionSpec":
        return cls("constant")

    @classmethod
    def rademacher(cls) -> "DistributionSpec":
        return cls("rademacher")

    @classmethod
    def uniform(cls, a: float, b: float) -> "DistributionSpec":
        # mean zero is an invariant of every family, so the interval must be symmetric
        if not (a < b):
            raise ValueError("uniform interval needs a < b")
        if not math.isclose(a, -b, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("uniform interval must be symmetric about 0 (a = -b)")
        return cls("uniform", half_width=b)

    @classmethod
    def gaussian(cls) -> "DistributionSpec":
        return cls("standard-gaussian")

    @classmethod
    def weibull(cls, shape: float) -> "DistributionSpec":
        return cls("symmetric-weibull", shape=shape)

    @classmethod
    def truncated(cls, base: "DistributionSpec", level: float) -> "DistributionSpec":
        return cls("truncated", base=base, level=level)

    # -- moments -----------------------------------------------------------

    def variance(self) -> float:
        if self.family == "constant":
            return 0.0
        if self.family == "rademacher":
            return 1.0
        if self.family == "uniform":
            return self.half_width**2 / 3.0
        if self.family == "standard-gaussian":
            return 1.0
        if self.family == "symmetric-weibull":
            return float(special.gamma(1.0 + 2.0 / self.shape))
        # truncated: E X^2 1{|X| <= M} of the base law
        base, m = self.base, self.level
        if base.family == "constant":
            return 0.0
        if base.family == "rademacher":
            return 1.0 if m >= 1.0 else 0.0
        if base.family == "uniform":
            b = base.half_width
            return b**2 / 3.0 if m >= b else m**3 / (3.0 * b)
        if base.family == "standard-gaussian":
            return float(special.erf(m / math.sqrt(2)) - 2.0 * m * math.exp(-m * m / 2.0) / math.sqrt(2 * math.pi))
        # symmetric-weibull base: |w|^shape ~ Exp(1)
        a0 = base.shape
        return float(special.gamma(1.0 + 2.0 / a0) * special.gammainc(1.0 + 2.0 / a0, m**a0))

    def std(self) -> float:
        return math.sqrt(self.variance())

    # -- serialization (CLI config format) ---------------------------------

    def to_dict(self) -> dict:
        d = {"family": self.family}
        if self.family == "uniform":
            d["half_width"] = self.half_width
        elif self.family == "symmetric-weibull":
            d["shape"] = self.shape
        elif self.family == "truncated":
            d["base"] = self.base.to_dict()
            d["level"] = self.level
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        if not isinstance(d, dict) or "family" not in d:
            raise ValueError("distribution spec must be a mapping with a 'family' key")
        family = d["family"]
        allowed = {
            "constant": set(),
            "rademacher": set(),
            "uniform": {"half_width"},
            "standard-gaussian": set(),
            "symmetric-weibull": {"shape"},
            "truncated": {"base", "level"},
        }
        if family not in allowed:
            raise ValueError(f"unknown family {family!r}")
        extra = set(d) - allowed[family] - {"family"}
        if extra:
            raise ValueError(f"unknown keys {sorted(extra)} in distribution spec")
        if family == "truncated":
            return cls(family, base=cls.from_dict(d["base"]), level=float(d["level"]))
        kwargs = {k: float(v) for k, v in d.items() if k != "family"}
        return cls(family, **kwargs)


@dataclass(frozen=True)
class TensorSpec:
    """A rank-1 random tensor: outer product of d independent n-vectors.

    Coordinates are iid copies of ``coord`` rescaled to unit variance.
    """

    n: int
    d: int
    coord: DistributionSpec
    entry_budget: int = 2**22

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        if self.coord.variance() <= 0.0:
            raise ValueError("tensor coordinates must have positive variance")

    def n_entries(self) -> int:
        return self.n**self.d


# ---------------------------------------------------------------------------
# stream discipline


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Generator for a logical stream addressed by (seed, path...).

    Distinct paths yield statistically independent, reproducible streams.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path)))


def draw(spec: DistributionSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` values from one generator (no chunking).

    Symmetric families draw magnitudes first and signs second from the same
    stream, so the sign coin is independent of the magnitude.
    """
    if size < 0:
        raise ValueError("size must be >= 0")
    if spec.family == "constant":
        return np.zeros(size)
    if spec.family == "rademacher":
        return rng.integers(0, 2, size).astype(np.float64) * 2.0 - 1.0
    if spec.family == "uniform":
        b = spec.half_width
        return rng.uniform(-b, b, size)
    if spec.family == "standard-gaussian":
        return rng.standard_normal(size)
    if spec.family == "symmetric-weibull":
        u = rng.random(size)                      # U in [0, 1); 1-U in (0, 1]
        mag = (-np.log1p(-u)) ** (1.0 / spec.shape)
        sign = rng.integers(0, 2, size).astype(np.float64) * 2.0 - 1.0
        return sign * mag
    # truncated
    x = draw(spec.base, rng, size)
    return np.where(np.abs(x) <= spec.level, x, 0.0)


def sample(spec: DistributionSpec, count: int, stream: tuple[int, int]) -> np.ndarray:
    """Draw ``count`` values from the stream ``(seed, stream_index)``.

    Chunked at CHUNK_SIZE: the first N values are identical for every
    count >= N, and identical across runs and worker layouts.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    seed, stream_index = stream
    out = np.empty(count)
    for chunk in range(0, count, CHUNK_SIZE):
        size = min(CHUNK_SIZE, count - chunk)
        rng = rng_for(seed, stream_index, chunk // CHUNK_SIZE)
        out[chunk:chunk + size] = draw(spec, rng, CHUNK_SIZE)[:size]
    return out


# ---------------------------------------------------------------------------
# tensors and truncation


def sample_tensor(spec: TensorSpec, stream: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """One rank-1 tensor draw: (flat array of n^d entries, the d coordinate vectors).

    Entry at multi-index (i_1, ..., i_d) equals the product of coordinate draws,
    laid out row-major with i_d fastest.
    """
    if spec.n_entries() > spec.entry_budget:
        raise ResourceLimitError(
            f"tensor with n^d = {spec.n_entries()} entries exceeds budget {spec.entry_budget}"
        )
    seed, stream_index = stream
    rng = rng_for(seed, stream_index, 0)
    coords = draw(spec.coord, rng, spec.d * spec.n).reshape(spec.d, spec.n)
    coords /= spec.coord.std()
    flat = reduce(np.kron, coords)
    return flat, coords


def truncate(vector: np.ndarray, level: float) -> tuple[np.ndarray, np.ndarray]:
    """Split x into (y, z) with y = x 1{|x| <= level}, z = x 1{|x| > level}; y + z = x exactly."""
    if not (level > 0):
        raise ValueError("truncation level must be positive")
    x = np.asarray(vector, dtype=np.float64)
    keep = np.abs(x) <= level
    y = np.where(keep, x, 0.0)
    z = x - y
    return y, z


@dataclass(frozen=True)
class TruncationLevelEstimate:
    value: float
    standard_error: float
    repetitions: int


def truncation_level(
    spec: DistributionSpec, n: int, stream: tuple[int, int], repetitions: int
) -> TruncationLevelEstimate:
    """Monte Carlo estimate of 8 * E max_i |X_i| over vectors of n iid coordinates."""
    if repetitions < 1:
        raise ValueError("need repetitions >= 1")
    values = sample(spec, repetitions * n, stream).reshape(repetitions, n)
    maxima = np.abs(values).max(axis=1)
    value = 8.0 * float(maxima.mean())
    se = 8.0 * float(maxima.std(ddof=1)) / math.sqrt(repetitions) if repetitions > 1 else 0.0
    return TruncationLevelEstimate(value=value, standard_error=se, repetitions=repetitions)
