"""Orlicz quasi-norms of order alpha in (0, 2], L^p norms, and moment-equivalence constants.

The Orlicz norm used throughout is

    ||X||_a = inf{ t > 0 : E exp((|X|/t)^a) <= 2 },

a genuine norm for a >= 1 and a quasi-norm for a < 1 (the triangle inequality
holds with factor 2^(1/a)).  The empirical version replaces the expectation by
the sample mean and solves for t by bisection on the monotone functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, optimize, special

from .distributions import DistributionSpec

_MAX_ITERATIONS = 200
_EXP_OVERFLOW = 700.0  # exp argument beyond which float64 overflows


class BisectionDefectError(RuntimeError):
    """Bracketing or bisection failed to terminate; indicates a defect, not bad data."""


@dataclass(frozen=True)
class AlphaParam:
    """Validated tail-order parameter alpha in (0, 2].

    Carries the splitting constants of the elementary inequality
    c_split (x^a + y^a) <= (x + y)^a <= C_split (x^a + y^a) for x, y >= 0.
    """

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")

    @property
    def c_split(self) -> float:
        return min(2.0 ** (self.alpha - 1.0), 1.0)

    @property
    def C_split(self) -> float:
        return max(2.0 ** (self.alpha - 1.0), 1.0)


def _as_alpha(alpha) -> AlphaParam:
    return alpha if isinstance(alpha, AlphaParam) else AlphaParam(float(alpha))


@dataclass(frozen=True)
class OrliczValue:
    value: float
    alpha: AlphaParam
    method: str  # "empirical-bisection" | "analytic-closed-form" | "analytic-quadrature"
    tolerance: float


def _clean_samples(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise ValueError("samples must be nonempty")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples contain non-finite values")
    return np.abs(x.ravel())


def psi_functional(samples, alpha, t: float) -> float:
    """Sample mean of exp((|x|/t)^alpha); strictly decreasing in t when some |x| > 0.

    Overflowing means are computed in log-sum-exp form; a mean beyond float64
    range is reported as +inf (which downstream code treats as "> 2").
    """
    a = _as_alpha(alpha).alpha
    if not (t > 0):
        raise ValueError("t must be positive")
    x = _clean_samples(samples)
    e = (x / t) ** a
    m = float(e.max())
    if m <= _EXP_OVERFLOW:
        return float(np.exp(e).mean())
    log_mean = float(special.logsumexp(e)) - math.log(e.size)
    return math.exp(log_mean) if log_mean <= _EXP_OVERFLOW else math.inf


def orlicz_norm_empirical(samples, alpha, tol: float = 1e-9) -> OrliczValue:
    """Empirical Orlicz norm: the infimum t with psi_functional <= 2, by bisection.

    The initial bracket [max|x|/64, 64 max|x|] is expanded geometrically until
    it straddles the root; the returned value is the feasible (psi <= 2) end of
    the final bracket and lies within ``tol`` relative error of the infimum.
    """
    a = _as_alpha(alpha)
    if not (tol > 0):
        raise ValueError("tol must be positive")
    x = _clean_samples(samples)
    mx = float(x.max())
    if mx == 0.0:
        return OrliczValue(0.0, a, "empirical-bisection", tol)

    lo, hi = mx / 64.0, 64.0 * mx
    for _ in range(_MAX_ITERATIONS):
        if psi_functional(x, a, lo) >= 2.0:
            break
        lo /= 2.0
    else:
        raise BisectionDefectError("could not bracket from below")
    for _ in range(_MAX_ITERATIONS):
        if psi_functional(x, a, hi) <= 2.0:
            break
        hi *= 2.0
    else:
        raise BisectionDefectError("could not bracket from above")

    for _ in range(_MAX_ITERATIONS):
        if hi - lo <= tol * lo:
            break
        mid = 0.5 * (lo + hi)
        if psi_functional(x, a, mid) >= 2.0:
            lo = mid
        else:
            hi = mid
    else:
        raise BisectionDefectError("bisection failed to converge")
    return OrliczValue(hi, a, "empirical-bisection", tol)


def orlicz_norm_analytic(spec: DistributionSpec, alpha) -> Optional[OrliczValue]:
    """Exact closed-form Orlicz norm for the families that have one, else None.

    None ("unavailable") is returned for laws with a finite norm but no simple
    closed form (e.g. the gaussian at alpha < 2) rather than any silent
    approximation, and for a Weibull shape different from alpha.
    """
    a = _as_alpha(alpha)
    if spec.family == "constant":
        return OrliczValue(0.0, a, "analytic-closed-form", 0.0)
    if spec.family == "rademacher":
        return OrliczValue((1.0 / math.log(2.0)) ** (1.0 / a.alpha), a, "analytic-closed-form", 0.0)
    if spec.family == "symmetric-weibull":
        if math.isclose(spec.shape, a.alpha, rel_tol=1e-12):
            # E exp((|w|/s)^a) = 1/(1 - s^-a) for s > 1, equal to 2 at s = 2^(1/a)
            return OrliczValue(2.0 ** (1.0 / a.alpha), a, "analytic-closed-form", 0.0)
        return None
    if spec.family == "standard-gaussian":
        if math.isclose(a.alpha, 2.0, rel_tol=1e-12):
            # E exp(X^2/t^2) = (1 - 2/t^2)^(-1/2) = 2  =>  t = sqrt(8/3)
            return OrliczValue(math.sqrt(8.0 / 3.0), a, "analytic-closed-form", 0.0)
        return None
    return None


def gaussian_orlicz_norm_quadrature(alpha, xtol: float = 1e-10) -> OrliczValue:
    """Orlicz norm of the standard gaussian by deterministic quadrature + root finding.

    For alpha = 2 the closed form sqrt(8/3) is returned directly.  For alpha < 2
    the defining integral converges for every t > 0 and the root of
    E exp((|X|/t)^alpha) = 2 is found with Brent's method.  This is an exact
    (non-Monte-Carlo) evaluation, reported with its own method tag.
    """
    a = _as_alpha(alpha)
    if math.isclose(a.alpha, 2.0, rel_tol=1e-12):
        return OrliczValue(math.sqrt(8.0 / 3.0), a, "analytic-closed-form", 0.0)

    def psi(t: float) -> float:
        def integrand(x):
            expo = -0.5 * x * x + (x / t) ** a.alpha
            return math.sqrt(2.0 / math.pi) * np.exp(np.minimum(expo, _EXP_OVERFLOW))

        val, _ = integrate.quad(integrand, 0.0, np.inf, limit=300)
        return val

    lo, hi = 1.0, 1.0
    for _ in range(_MAX_ITERATIONS):
        if psi(lo) >= 2.0:
            break
        lo /= 2.0
    for _ in range(_MAX_ITERATIONS):
        if psi(hi) <= 2.0:
            break
        hi *= 2.0
    root = optimize.brentq(lambda t: psi(t) - 2.0, lo, hi, xtol=xtol)
    return OrliczValue(float(root), a, "analytic-quadrature", xtol)


def lp_norm(samples, p: float) -> float:
    """(mean |x|^p)^(1/p) for p >= 1."""
    if not (p >= 1.0):
        raise ValueError("p must be >= 1")
    x = _clean_samples(samples)
    return float(np.mean(x**p) ** (1.0 / p))


class EquivalenceConstants:
    """The constant chain K1..K5 linking tail decay, L^p growth, and exponential moments.

    Given K1 in the tail bound P(|X| >= t) <= 2 exp(-t^a/K1^a):

        K2 = 3 a^(-(a+1)/a) K1      (L^p growth:  ||X||_p <= K2 p^(1/a))
        K3 = (2 a e)^(1/a) K2       (exponential moment up to 1/K3)
        K4 = K3 / (log 2)^(1/a)     (Orlicz norm bound)
        K5 = 2 e K2                 (mgf bound; defined only for a >= 1)
    """

    def __init__(self, alpha, K1: float):
        if not (K1 > 0):
            raise ValueError("K1 must be positive")
        a = _as_alpha(alpha)
        self.alpha = a
        self.K1 = float(K1)
        self.K2 = 3.0 * a.alpha ** (-(a.alpha + 1.0) / a.alpha) * self.K1
        self.K3 = (2.0 * a.alpha * math.e) ** (1.0 / a.alpha) * self.K2
        self.K4 = self.K3 / math.log(2.0) ** (1.0 / a.alpha)
        self._k5 = 2.0 * math.e * self.K2 if a.alpha >= 1.0 else None

    @property
    def K5(self) -> float:
        if self._k5 is None:
            raise ValueError("K5 is defined only for alpha >= 1")
        return self._k5


def equivalence_constants(alpha, K1: float) -> EquivalenceConstants:
    return EquivalenceConstants(alpha, K1)


def mgf_upper_bound(lam: float, K5: float, alpha) -> float:
    """Moment-generating-function bound at rate K5 for centered variables, alpha in [1, 2].

    exp(K5^2 lam^2) on |lam| <= 1/K5; the large-|lam| branch
    exp(K5^(a/(a-1)) |lam|^(a/(a-1))) exists only for alpha > 1, so for
    alpha = 1 only the small-|lam| branch is exposed.
    """
    a = _as_alpha(alpha).alpha
    if a < 1.0:
        raise ValueError("mgf bound is defined only for alpha >= 1")
    if not (K5 > 0):
        raise ValueError("K5 must be positive")
    if abs(lam) <= 1.0 / K5:
        return math.exp(K5**2 * lam**2)
    if a == 1.0:
        raise ValueError("for alpha = 1 the bound is available only on |lam| <= 1/K5")
    q = a / (a - 1.0)
    return math.exp((K5 * abs(lam)) ** q)


def quasi_triangle_factor(alpha) -> float:
    """Factor 2^(1/alpha) in ||X+Y|| <= 2^(1/alpha) (||X|| + ||Y||)."""
    return 2.0 ** (1.0 / _as_alpha(alpha).alpha)
