"""Every tail and moment bound of the theory as an explicit, clamped, validity-checked function.

All absolute constants the theory leaves unspecified ("there exists C") are
explicit parameters defaulting to 1; the calibrate module determines working
values empirically.  Probabilities are clamped to [0, 1]; evaluating a curve
outside its stated validity interval raises OutOfRangeError rather than
extrapolating.

Curve families (the string ids used in serialized TailBoundCurve objects):

    hanson-wright       P(|X^T A X - E| >= t) <= 2 exp(-(1/C) min(t^2/(K^4 hs^2), (t/(K^2 op))^(a/2)))
    classical-convex    2 exp(-t^2 / (2 (b-a)^2)), two-sided, bounded coordinates
    separately-convex   exp(-t^2 / (2 (b-a)^2)), upper tail only
    convex-orlicz       2 exp(-c t^a / Kstar^a)
    uniform-hw          2 exp(-(C/Kstar^a) min(t^a/E_sup^a, t^(a/2)/sup_op^(a/2))), upper tail
    euclid-norm         2 exp(-c t^a) for the normalized Euclidean-norm deviation
    product-tail        2 exp(-c (t/(K^2 d^(1/2) n^((d-1)/2)))^a), valid t in [0, 2 n^(d/2)]
    max-product-tail    2 exp(-c (n^(1/2) u / (K^2 d^(1/2)))^a), valid u in [0, 2]
    tensor              rank-1 tensor convex concentration, two alpha regimes, finite validity
    tensor-sharp        same with caller-supplied per-factor max-Orlicz norms
    tensor-pi           2 exp(-c t / (d^(1/2) n^((d-1)/2) sigma)), valid t in [0, C_range n^(d/2) sigma]
    tensor-lsi          2 exp(-c t^2 / (d n^(d-1) sigma^2)), same validity
    max-tail            2 exp(-c_split t^a) for max_i |X_i| >= shift + t at unit Orlicz norm
    subgaussian-to-alpha  2 exp(-log(2) (t/gamma)^a), dominates exp(-(t/gamma)^2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .orlicz import AlphaParam


class OutOfRangeError(ValueError):
    """Curve evaluated outside its stated validity interval."""


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def _alpha_value(alpha) -> float:
    return alpha.alpha if isinstance(alpha, AlphaParam) else float(alpha)


def _min_finite(*branches: float) -> float:
    """Smallest finite branch; +inf entries are treated as absent."""
    finite = [b for b in branches if math.isfinite(b)]
    return min(finite) if finite else math.inf


# ---------------------------------------------------------------------------
# scalar bound evaluators


def hw_tail_bound(t: float, K: float, hs: float, op: float, alpha, C: float = 1.0) -> float:
    """Quadratic-form tail bound mixing an hs-controlled and an op-controlled regime."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if K <= 0 or C <= 0 or hs < 0 or op < 0:
        raise ValueError("K, C must be positive; hs, op nonnegative")
    a = _alpha_value(alpha)
    if hs == 0.0 and op == 0.0:
        return 1.0 if t == 0.0 else 0.0
    b1 = t**2 / (K**4 * hs**2) if hs > 0 else math.inf
    b2 = (t / (K**2 * op)) ** (a / 2.0) if op > 0 else math.inf
    return _clamp(2.0 * math.exp(-_min_finite(b1, b2) / C))


def hw_moment_bound(p: float, K: float, hs: float, op: float, alpha, C: float = 1.0) -> float:
    """L^p bound C K^2 (p^(1/2) hs + p^(2/alpha) op) for the centered quadratic form."""
    if not (p >= 2.0):
        raise ValueError("p must be >= 2")
    a = _alpha_value(alpha)
    return C * K**2 * (p**0.5 * hs + p ** (2.0 / a) * op)


def convex_concentration_bound(t: float, mode: str, **params) -> float:
    """Concentration for (separately) convex 1-Lipschitz functions.

    mode "bounded-classical":        two-sided, coordinates in [a, b]
    mode "separately-convex-bounded": upper tail only, no prefactor 2
    mode "convex-orlicz":            two-sided, rate c t^alpha / K_star^alpha
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if mode in ("bounded-classical", "separately-convex-bounded"):
        a, b = params["a"], params["b"]
        if not (a < b):
            raise ValueError("need a < b")
        expo = t**2 / (2.0 * (b - a) ** 2)
        pref = 2.0 if mode == "bounded-classical" else 1.0
        return _clamp(pref * math.exp(-expo))
    if mode == "convex-orlicz":
        k_star, al, c = params["K_star"], _alpha_value(params["alpha"]), params.get("c", 1.0)
        if k_star <= 0 or c <= 0:
            raise ValueError("K_star and c must be positive")
        return _clamp(2.0 * math.exp(-c * t**al / k_star**al))
    raise ValueError(f"unknown mode {mode!r}")


def uniform_hw_bound(t: float, K_star: float, E_sup_AX: float, sup_op: float, alpha, C: float = 1.0) -> float:
    """Upper tail of the supremum of centered quadratic forms over a matrix family."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if K_star <= 0 or C <= 0 or E_sup_AX < 0 or sup_op < 0:
        raise ValueError("invalid constants")
    a = _alpha_value(alpha)
    b1 = (t / E_sup_AX) ** a if E_sup_AX > 0 else math.inf
    b2 = (t / sup_op) ** (a / 2.0) if sup_op > 0 else math.inf
    branch = _min_finite(b1, b2)
    if not math.isfinite(branch):
        return 1.0 if t == 0.0 else 0.0
    return _clamp(2.0 * math.exp(-(C / K_star**a) * branch))


def _tensor_log_n(n: int) -> tuple[float, bool]:
    # log 1 = 0 would kill denominators; floor at log 2 and flag it
    if n >= 2:
        return math.log(n), False
    return math.log(2.0), True


def tensor_denominator(n: int, d: int, K: float, alpha) -> float:
    a = _alpha_value(alpha)
    log_n, _ = _tensor_log_n(n)
    d_power = d**0.5 if a >= 1.0 else d ** (1.0 / a)
    return d_power * n ** ((d - 1) / 2.0) * log_n ** (1.0 / a) * K


def tensor_validity_max(n: int, d: int, K: float, alpha, C_range: float = 1.0) -> float:
    a = _alpha_value(alpha)
    log_n, _ = _tensor_log_n(n)
    extra = 1.0 if a >= 1.0 else d ** (1.0 / a - 0.5)
    return C_range * n ** (d / 2.0) * log_n ** (1.0 / a) * extra / K


def tensor_bound(t: float, n: int, d: int, K: float, alpha, c: float = 1.0, C_range: float = 1.0) -> float:
    """Convex-Lipschitz concentration for a rank-1 random tensor, valid on a finite t-range."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if K <= 0 or c <= 0 or C_range <= 0 or n < 1 or d < 1:
        raise ValueError("invalid parameters")
    a = _alpha_value(alpha)
    if t > tensor_validity_max(n, d, K, alpha, C_range):
        raise OutOfRangeError(f"t = {t} beyond tensor bound validity")
    return _clamp(2.0 * math.exp(-c * (t / tensor_denominator(n, d, K, alpha)) ** a))


def tensor_bound_sharp(
    t: float, n: int, d: int, K: float, factor_norms, alpha, c: float = 1.0, C_range: float = 1.0
) -> float:
    """Sharper tensor bound with caller-supplied Orlicz norms of the per-factor maxima.

    For alpha in [1, 2] the factor norms combine in quadrature, for alpha < 1
    through the alpha-sum; they replace the generic d / log n powers.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    a = _alpha_value(alpha)
    norms = np.asarray(factor_norms, dtype=np.float64)
    if norms.shape != (d,) or np.any(norms <= 0):
        raise ValueError("need d positive per-factor norms")
    if a >= 1.0:
        m = float(np.sqrt((norms**2).sum()))
    else:
        m = float((norms**a).sum() ** (1.0 / a))
    t_max = C_range * n ** (d / 2.0) * m / (K**2 * d**0.5)
    if t > t_max:
        raise OutOfRangeError(f"t = {t} beyond sharp tensor bound validity")
    return _clamp(2.0 * math.exp(-c * (t / (n ** ((d - 1) / 2.0) * m)) ** a))


def tensor_functional_bound(
    t: float, n: int, d: int, sigma: float, which: str, c: float = 1.0, C_range: float = 1.0
) -> float:
    """Lipschitz concentration for rank-1 tensors under a spectral-gap or log-Sobolev constant."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if sigma <= 0 or c <= 0 or C_range <= 0:
        raise ValueError("invalid parameters")
    if t > C_range * n ** (d / 2.0) * sigma:
        raise OutOfRangeError(f"t = {t} beyond validity")
    if which == "poincare":
        return _clamp(2.0 * math.exp(-c * t / (d**0.5 * n ** ((d - 1) / 2.0) * sigma)))
    if which == "lsi":
        return _clamp(2.0 * math.exp(-c * t**2 / (d * n ** (d - 1.0) * sigma**2)))
    raise ValueError(f"unknown functional inequality {which!r}")


def euclidean_norm_bound(t: float, alpha, c: float = 1.0) -> float:
    """Tail of the normalized deviation |(||BX|| - ||B||_HS)| / (K^2 ||B||_op)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if c <= 0:
        raise ValueError("c must be positive")
    a = _alpha_value(alpha)
    return _clamp(2.0 * math.exp(-c * t**a))


def product_tail_bound(t: float, n: int, d: int, K: float, alpha, c: float = 1.0) -> float:
    """Upper tail of prod ||X_i|| above n^(d/2) + t, valid for t in [0, 2 n^(d/2)]."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t > 2.0 * n ** (d / 2.0):
        raise OutOfRangeError(f"t = {t} beyond 2 n^(d/2)")
    a = _alpha_value(alpha)
    return _clamp(2.0 * math.exp(-c * (t / (K**2 * d**0.5 * n ** ((d - 1) / 2.0))) ** a))


def max_product_tail_bound(u: float, n: int, d: int, K: float, alpha, c: float = 1.0) -> float:
    """Upper tail of max_k n^(-k/2) prod_{i<=k} ||X_i|| above 1 + u, valid for u in [0, 2]."""
    if u < 0:
        raise ValueError("u must be >= 0")
    if u > 2.0:
        raise OutOfRangeError("u beyond 2")
    a = _alpha_value(alpha)
    return _clamp(2.0 * math.exp(-c * (n**0.5 * u / (K**2 * d**0.5)) ** a))


_SQRT2_RATIO = (math.sqrt(2.0) + 1.0) / (math.sqrt(2.0) - 1.0)


def max_orlicz_bound(n: int, K: float, alpha) -> float:
    """Fully explicit Orlicz-norm bound for max_i |X_i| over n coordinates with norms <= K."""
    if n < 1 or K <= 0:
        raise ValueError("need n >= 1 and K > 0")
    a = _alpha_value(alpha)
    C = max(2.0 ** (1.0 / a - 1.0), 2.0 ** (1.0 - 1.0 / a))
    branch_log = math.log(n) ** (1.0 / a) * (2.0 / math.log(2.0)) ** (1.0 / a) if n > 1 else 0.0
    return C * K * max(_SQRT2_RATIO ** (1.0 / a), branch_log)


def max_tail_shift(n: int, alpha) -> float:
    """Shift (c_split^-1 log n)^(1/alpha) beyond which the maximum has a clean tail."""
    if n < 1:
        raise ValueError("need n >= 1")
    ap = alpha if isinstance(alpha, AlphaParam) else AlphaParam(float(alpha))
    return (math.log(n) / ap.c_split) ** (1.0 / ap.alpha)


def max_tail_bound(t: float, n: int, alpha) -> float:
    """P(max_i |X_i| >= shift + t) <= 2 exp(-c_split t^alpha) at unit Orlicz normalization."""
    if t < 0:
        raise ValueError("t must be >= 0")
    ap = alpha if isinstance(alpha, AlphaParam) else AlphaParam(float(alpha))
    return _clamp(2.0 * math.exp(-ap.c_split * t**ap.alpha))


def shifted_tail_to_orlicz(c_shift: float, alpha) -> float:
    """Orlicz norm of a nonnegative variable with P(Y >= c_shift + t) <= 2 exp(-t^alpha)."""
    if c_shift < 0:
        raise ValueError("c_shift must be >= 0")
    ap = alpha if isinstance(alpha, AlphaParam) else AlphaParam(float(alpha))
    a = ap.alpha
    return ap.C_split ** (1.0 / a) * max(_SQRT2_RATIO ** (1.0 / a), c_shift * (2.0 / math.log(2.0)) ** (1.0 / a))


def compose_max_orlicz(n: int, K: float, alpha) -> float:
    """Chain max_tail_bound through shifted_tail_to_orlicz; equals max_orlicz_bound exactly.

    The max is rescaled by c_split^(1/alpha) so its shifted tail has unit rate,
    fed through the shifted-tail lemma, and scaled back.
    """
    ap = alpha if isinstance(alpha, AlphaParam) else AlphaParam(float(alpha))
    a = ap.alpha
    rescaled_shift = ap.c_split ** (1.0 / a) * max_tail_shift(n, ap)
    return K * ap.c_split ** (-1.0 / a) * shifted_tail_to_orlicz(rescaled_shift, ap)


def prefactor_adjust(c1: float, c2: float, c: float) -> float:
    """Rate making c1 exp(-c r) <= c2 exp(-rate r) wherever the left side is <= 1."""
    if not (c1 > c2 > 1.0):
        raise ValueError("need c1 > c2 > 1")
    if not (c > 0):
        raise ValueError("need c > 0")
    return math.log(c2) / math.log(c1) * c


def subgaussian_rate_to_alpha() -> float:
    """Rate c in 2 exp(-c s^alpha) >= exp(-s^2) for all s >= 0, any alpha in (0, 2).

    From exp(-s^2) <= exp(1 - s^alpha) = e exp(-s^alpha) and the prefactor
    adjustment e -> 2, which scales the unit rate by log 2.
    """
    return prefactor_adjust(math.e, 2.0, 1.0)  # = log 2


# ---------------------------------------------------------------------------
# curve objects


@dataclass(frozen=True)
class TailBoundCurve:
    """A t -> probability bound with family id, named constants, validity and sidedness."""

    family: str
    constants: dict
    validity: tuple[float, float]  # inclusive interval, hi may be inf
    two_sided: bool
    _evaluator: Optional[Callable[[float], float]] = field(default=None, repr=False, compare=False)

    def in_validity(self, t: float) -> bool:
        lo, hi = self.validity
        return lo <= t <= hi

    def evaluate(self, t: float) -> float:
        if not self.in_validity(t):
            raise OutOfRangeError(f"t = {t} outside validity {self.validity} of {self.family}")
        ev = self._evaluator if self._evaluator is not None else _family_evaluator(self.family, self.constants)
        return ev(t)

    def evaluate_grid(self, ts) -> tuple[np.ndarray, np.ndarray]:
        """Values and validity mask over a grid; out-of-validity slots are NaN."""
        ts = np.asarray(ts, dtype=np.float64)
        mask = np.array([self.in_validity(float(t)) for t in ts])
        vals = np.full(ts.shape, np.nan)
        for i, t in enumerate(ts):
            if mask[i]:
                vals[i] = self.evaluate(float(t))
        return vals, mask

    def to_dict(self) -> dict:
        lo, hi = self.validity
        return {
            "schema": 1,
            "family": self.family,
            "constants": dict(self.constants),
            "validity": [lo, None if math.isinf(hi) else hi],
            "two_sided": self.two_sided,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TailBoundCurve":
        if d.get("schema", 1) != 1:
            raise ValueError(f"unsupported bound curve schema {d.get('schema')}")
        lo, hi = d["validity"]
        return make_curve(
            d["family"],
            two_sided=d.get("two_sided"),
            validity=(lo, math.inf if hi is None else hi),
            **d["constants"],
        )


def _family_evaluator(family: str, k: dict) -> Callable[[float], float]:
    if family == "hanson-wright":
        return lambda t: hw_tail_bound(t, k["K"], k["hs"], k["op"], k["alpha"], k["C"])
    if family == "classical-convex":
        return lambda t: convex_concentration_bound(t, "bounded-classical", a=k["a"], b=k["b"])
    if family == "separately-convex":
        return lambda t: convex_concentration_bound(t, "separately-convex-bounded", a=k["a"], b=k["b"])
    if family == "convex-orlicz":
        return lambda t: convex_concentration_bound(t, "convex-orlicz", K_star=k["K_star"], alpha=k["alpha"], c=k["c"])
    if family == "uniform-hw":
        return lambda t: uniform_hw_bound(t, k["K_star"], k["E_sup_AX"], k["sup_op"], k["alpha"], k["C"])
    if family == "euclid-norm":
        return lambda t: euclidean_norm_bound(t, k["alpha"], k["c"])
    if family == "product-tail":
        return lambda t: product_tail_bound(t, k["n"], k["d"], k["K"], k["alpha"], k["c"])
    if family == "max-product-tail":
        return lambda t: max_product_tail_bound(t, k["n"], k["d"], k["K"], k["alpha"], k["c"])
    if family == "tensor":
        return lambda t: tensor_bound(t, k["n"], k["d"], k["K"], k["alpha"], k["c"], k["C_range"])
    if family == "tensor-sharp":
        return lambda t: tensor_bound_sharp(
            t, k["n"], k["d"], k["K"], k["factor_norms"], k["alpha"], k["c"], k["C_range"]
        )
    if family == "tensor-pi":
        return lambda t: tensor_functional_bound(t, k["n"], k["d"], k["sigma"], "poincare", k["c"], k["C_range"])
    if family == "tensor-lsi":
        return lambda t: tensor_functional_bound(t, k["n"], k["d"], k["sigma"], "lsi", k["c"], k["C_range"])
    if family == "max-tail":
        return lambda t: max_tail_bound(t, k["n"], k["alpha"])
    if family == "subgaussian-to-alpha":
        return lambda t: _clamp(2.0 * math.exp(-k["c"] * (t / k["gamma"]) ** k["alpha"]))
    raise ValueError(f"unknown bound family {family!r}")


_DEFAULT_TWO_SIDED = {
    "hanson-wright": True,
    "classical-convex": True,
    "separately-convex": False,
    "convex-orlicz": True,
    "uniform-hw": False,
    "euclid-norm": True,
    "product-tail": False,
    "max-product-tail": False,
    "tensor": True,
    "tensor-sharp": True,
    "tensor-pi": True,
    "tensor-lsi": True,
    "max-tail": False,
    "subgaussian-to-alpha": False,
}


_C_FAMILIES = ("hanson-wright", "uniform-hw")
_c_FAMILIES = (
    "convex-orlicz", "euclid-norm", "product-tail", "max-product-tail",
    "tensor", "tensor-sharp", "tensor-pi", "tensor-lsi",
)


def make_curve(family: str, two_sided: Optional[bool] = None, validity: Optional[tuple] = None, **constants) -> TailBoundCurve:
    """Build a TailBoundCurve for a family, filling default constants and validity."""
    k = dict(constants)
    if family in _C_FAMILIES:
        k.setdefault("C", 1.0)
    elif family == "subgaussian-to-alpha":
        if not (0.0 < k["alpha"] < 2.0):
            raise ValueError("the subgaussian-to-alpha transform needs alpha in (0, 2)")
        k.setdefault("c", subgaussian_rate_to_alpha())
    elif family in _c_FAMILIES:
        k.setdefault("c", 1.0)
    if family in ("tensor", "tensor-sharp", "tensor-pi", "tensor-lsi"):
        k.setdefault("C_range", 1.0)

    if validity is None:
        if family == "product-tail":
            validity = (0.0, 2.0 * k["n"] ** (k["d"] / 2.0))
        elif family == "max-product-tail":
            validity = (0.0, 2.0)
        elif family == "tensor":
            validity = (0.0, tensor_validity_max(k["n"], k["d"], k["K"], k["alpha"], k["C_range"]))
        elif family == "tensor-sharp":
            a = _alpha_value(k["alpha"])
            norms = np.asarray(k["factor_norms"], dtype=np.float64)
            m = float(np.sqrt((norms**2).sum())) if a >= 1.0 else float((norms**a).sum() ** (1.0 / a))
            validity = (0.0, k["C_range"] * k["n"] ** (k["d"] / 2.0) * m / (k["K"] ** 2 * k["d"] ** 0.5))
        elif family in ("tensor-pi", "tensor-lsi"):
            validity = (0.0, k["C_range"] * k["n"] ** (k["d"] / 2.0) * k["sigma"])
        else:
            validity = (0.0, math.inf)
    if family == "tensor":
        k["log_floored"] = _tensor_log_n(k["n"])[1]

    ts = _DEFAULT_TWO_SIDED[family] if two_sided is None else bool(two_sided)
    ev = _family_evaluator(family, k)
    ev(float(validity[0]))  # validates constants eagerly
    return TailBoundCurve(family=family, constants=k, validity=tuple(validity), two_sided=ts, _evaluator=ev)


def subgaussian_to_alpha(gamma: float, alpha) -> TailBoundCurve:
    """Curve 2 exp(-log(2) (t/gamma)^alpha) dominating exp(-(t/gamma)^2) for all t >= 0."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return make_curve("subgaussian-to-alpha", gamma=float(gamma), alpha=_alpha_value(alpha))


# ---------------------------------------------------------------------------
# calibration adapters


@dataclass(frozen=True)
class KnobbedFamily:
    """A bound family with one searchable constant, normalized so a larger knob is weaker."""

    family: str
    constant_name: str  # which slot the knob maps to ("C" or "c")
    build: Callable[[float], TailBoundCurve]
    report: Callable[[float], float]         # knob -> constant in family parameterization
    from_constant: Callable[[float], float]  # constant -> knob

    def build_at_constant(self, constant: float) -> TailBoundCurve:
        return self.build(self.from_constant(constant))


def knobbed_family(family: str, two_sided: Optional[bool] = None, **fixed) -> KnobbedFamily:
    """Calibration adapter: for exp(-rate/C) families the knob is C itself; for
    exp(-c rate) families (and the rate-multiplying C of uniform-hw) the knob is
    the inverse constant, so increasing the knob always weakens."""
    if family in ("hanson-wright",):
        return KnobbedFamily(
            family, "C",
            build=lambda k: make_curve(family, two_sided=two_sided, **fixed, C=k),
            report=lambda k: k,
            from_constant=lambda c: c,
        )
    if family == "uniform-hw":
        return KnobbedFamily(
            family, "C",
            build=lambda k: make_curve(family, two_sided=two_sided, **fixed, C=1.0 / k),
            report=lambda k: 1.0 / k,
            from_constant=lambda c: 1.0 / c,
        )
    if family in (
        "convex-orlicz", "euclid-norm", "product-tail", "max-product-tail",
        "tensor", "tensor-sharp", "tensor-pi", "tensor-lsi",
    ):
        return KnobbedFamily(
            family, "c",
            build=lambda k: make_curve(family, two_sided=two_sided, **fixed, c=1.0 / k),
            report=lambda k: 1.0 / k,
            from_constant=lambda c: 1.0 / c,
        )
    raise ValueError(f"family {family!r} has no searchable constant")
