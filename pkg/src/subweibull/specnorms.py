"""Matrix functionals and the two chaos norms driving the quadratic-form moment bounds.

The chaos norms are suprema of linear/bilinear forms over constraint sets built
from the two-regime budget N(u) = min(u^2, |u|^alpha), alpha in (1, 2]:

    coupled(A, p)   = 2 sup{ sum a_ij x_ij : sum_i N_row(||x_i.||_2) <= p }
    decoupled(A, p) =   sup{ sum a_ij x_i y_j : sum N(x_i) <= p, sum N(y_j) <= p }

Exact values are nonconvex programs; this module returns certified lower bounds
(feasible maximizers) that tests sandwich between a brute-force grid oracle and
the analytic upper bounds 2 sqrt(p) ||A||_HS + 2p ||A||_m and 4 p^(2/alpha) ||A||_op.

The workhorse is the separable problem max c.u subject to sum N(u_i) <= p, u >= 0,
solved by splitting coordinates at |u_i| = 1 into a small-budget regime (N = u^2)
and a large-budget regime (N = u^alpha): for each split size the subproblem is
concave and solved exactly by dual bisection; a projected-ascent polish with
random restarts runs on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

AL12_MAX_DIM = 64  # oracle-scale operation; larger inputs are rejected

_POWER_TOL = 1e-10
_POWER_MAX_STEPS = 100_000
_POWER_RESTARTS = 3
_DENSE_FALLBACK_MAX_N = 512
_LOG_CAP = 600.0


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """A symmetric matrix; non-symmetric input is symmetrized to (A + A^T)/2 with a flag."""

    entries: np.ndarray
    symmetrized: bool = False

    @classmethod
    def from_array(cls, a, symmetrize: bool = True) -> "SymMatrix":
        m = np.asarray(a, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("expected a square matrix")
        if np.array_equal(m, m.T):
            return cls(m.copy(), symmetrized=False)
        if not symmetrize:
            raise ValueError("matrix is not symmetric")
        return cls(0.5 * (m + m.T), symmetrized=True)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class NormBundle:
    hs: float            # Hilbert-Schmidt (Frobenius) norm
    op: float            # operator norm = max |eigenvalue| for symmetric input
    row_max: float       # maximal row Euclidean norm, always <= op
    diag_hs: float       # Euclidean norm of the diagonal
    max_abs_diag: float  # largest |a_ii|


def _as_entries(a) -> np.ndarray:
    if isinstance(a, SymMatrix):
        return a.entries
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    return m


def operator_norm(a, tol: float = _POWER_TOL, max_steps: int = _POWER_MAX_STEPS) -> float:
    """Operator (spectral) norm by power iteration.

    For symmetric input this is the largest |eigenvalue|, found by iterating
    A twice per step (which handles +/-lambda pairs); general input is routed
    through A^T A so the Rayleigh quotient stays nonnegative.  Three
    deterministic random restarts; on non-convergence falls back to a dense
    solve for n <= 512 and raises beyond that.
    """
    m = _as_entries(a)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    symmetric = m.shape[0] == m.shape[1] and np.array_equal(m, m.T)
    if symmetric:
        def apply_twice(v):
            return m @ (m @ v)
    else:
        def apply_twice(v):
            return m.T @ (m @ v)
    n = m.shape[1]
    best = 0.0
    converged = False
    for restart in range(_POWER_RESTARTS):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=0xA11CE, spawn_key=(restart,)))
        v = rng.standard_normal(n)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v /= nv
        est = 0.0
        for _ in range(max_steps):
            z = apply_twice(v)
            nz = np.linalg.norm(z)
            if nz == 0.0:
                est = 0.0
                converged = True
                break
            new = math.sqrt(max(float(v @ z), 0.0))  # Rayleigh quotient of A^2 (or A^T A)
            v = z / nz
            if abs(new - est) <= tol * max(1.0, new):
                est = new
                converged = True
                break
            est = new
        best = max(best, est)
    if converged:
        return best
    if max(m.shape) <= _DENSE_FALLBACK_MAX_N:
        if symmetric:
            return float(np.max(np.abs(np.linalg.eigvalsh(m))))
        return float(np.linalg.svd(m, compute_uv=False)[0])
    raise RuntimeError(f"power iteration did not converge for n = {max(m.shape)} > {_DENSE_FALLBACK_MAX_N}")


def norm_bundle(a) -> NormBundle:
    m = _as_entries(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    diag = np.diag(m)
    return NormBundle(
        hs=float(np.linalg.norm(m)),
        op=operator_norm(m),
        row_max=float(np.sqrt((m**2).sum(axis=1)).max()),
        diag_hs=float(np.linalg.norm(diag)),
        max_abs_diag=float(np.max(np.abs(diag))) if m.shape[0] else 0.0,
    )


def quadratic_form_centered(a, x, variances) -> float:
    """x^T A x - sum_i a_ii var_i."""
    m = _as_entries(a)
    xv = np.asarray(x, dtype=np.float64)
    var = np.asarray(variances, dtype=np.float64)
    if m.shape[0] != m.shape[1] or xv.shape != (m.shape[0],) or var.shape != (m.shape[0],):
        raise ValueError("dimension mismatch")
    return float(xv @ m @ xv - np.diag(m) @ var)


# ---------------------------------------------------------------------------
# budget machinery for the chaos norms


def budget_scalar(u, alpha: float) -> np.ndarray:
    """Two-regime budget N(u) = min(u^2, |u|^alpha) elementwise."""
    v = np.abs(np.asarray(u, dtype=np.float64))
    return np.minimum(v**2, v**alpha)


def budget_inverse(b, alpha: float) -> np.ndarray:
    """Inverse of the budget on u >= 0: sqrt(b) for b <= 1, b^(1/alpha) for b >= 1."""
    bb = np.asarray(b, dtype=np.float64)
    return np.where(bb <= 1.0, np.sqrt(np.maximum(bb, 0.0)), bb ** (1.0 / alpha))


def _check_al12_args(p: float, alpha: float) -> None:
    if not (p >= 2.0):
        raise ValueError("p must be >= 2")
    if not (1.0 < alpha <= 2.0):
        raise ValueError("alpha must lie in (1, 2]")


def _alloc_for_split(c: np.ndarray, p: float, alpha: float, k: int):
    """Exact allocation with the top-k coordinates in the large regime.

    Maximizes sum_{i<k} c_i b_i^(1/alpha) + sum_{i>=k} c_i sqrt(b_i) over
    sum b_i <= p with b_i >= 1 on the large block and b_i in [0, 1] on the
    small block.  c must be sorted descending and strictly positive.  The
    subproblem is concave; the unique budget profile comes from bisecting the
    dual variable.  Returns (value, b) or (-inf, None) when infeasible.
    """
    m = c.size
    if k > p:  # each large coordinate needs budget >= 1
        return -math.inf, None
    large, small = c[:k], c[k:]
    q = alpha / (alpha - 1.0)

    if k == 0 and m <= p:
        b = np.ones(m)
        return float(small.sum()), b

    log_large = np.log(large) if k else np.empty(0)

    def alloc(lam: float):
        if k:
            with np.errstate(over="ignore"):
                bl = np.exp(np.minimum(q * (log_large - math.log(alpha * lam)), _LOG_CAP))
            bl = np.maximum(bl, 1.0)
        else:
            bl = np.empty(0)
        bs = np.minimum((small / (2.0 * lam)) ** 2, 1.0)
        return bl, bs

    lam_lo = lam_hi = float(c[0])  # scale-aware start: all caps active near lam ~ c_max
    for _ in range(200):
        bl, bs = alloc(lam_lo)
        if bl.sum() + bs.sum() >= p:
            break
        lam_lo /= 4.0
    for _ in range(200):
        bl, bs = alloc(lam_hi)
        if bl.sum() + bs.sum() <= p:
            break
        lam_hi *= 4.0
    for _ in range(60):
        mid = math.sqrt(lam_lo * lam_hi)
        bl, bs = alloc(mid)
        if bl.sum() + bs.sum() > p:
            lam_lo = mid
        else:
            lam_hi = mid
    bl, bs = alloc(lam_hi)
    b = np.concatenate([bl, bs])
    value = float((large * bl ** (1.0 / alpha)).sum() + (small * np.sqrt(bs)).sum())
    return value, b


def max_linear_on_budget(c, p: float, alpha: float, restarts: int = 10, seed: int = 7) -> tuple[float, np.ndarray]:
    """Maximize c.u over {u >= 0 : sum min(u_i^2, u_i^alpha) <= p}.

    Combines the exact split enumeration (every prefix of coordinates sorted by
    weight can be the large-regime set) with a projected-ascent polish from
    ``restarts`` random directions.  Returns (value, maximizer); the maximizer
    is feasible, so the value is a certified lower bound of the supremum.
    """
    _check_al12_args(p, alpha)
    cv = np.abs(np.asarray(c, dtype=np.float64)).ravel()
    if cv.size == 0 or float(cv.max()) == 0.0:
        return 0.0, np.zeros(cv.size)

    order = np.argsort(-cv)
    cs = cv[order]
    m_pos = int(np.count_nonzero(cs))
    best_val, best_b = -math.inf, None
    for k in range(0, m_pos + 1):
        val, b = _alloc_for_split(cs[:m_pos], p, alpha, k)
        if val > best_val:
            best_val, best_b = val, b

    u_sorted = np.zeros(cs.size)
    u_sorted[:m_pos] = budget_inverse(best_b, alpha)
    u = np.zeros(cv.size)
    u[order] = u_sorted
    value = float(cv @ u)

    # projected-ascent polish with random restarts (restarts=0 skips it)
    if restarts > 0:
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0,)))
        starts = [cv.copy()]
        for _ in range(restarts):
            starts.append(np.abs(rng.standard_normal(cv.size)))
        cnorm = float(np.linalg.norm(cv))
        for start in starts:
            cand = _project_radial(start, p, alpha)
            if cand is None:
                continue
            val = float(cv @ cand)
            step = 0.3
            for _ in range(40):
                trial = _project_radial(cand + step * float(np.linalg.norm(cand)) / cnorm * cv, p, alpha)
                if trial is None:
                    break
                tval = float(cv @ trial)
                if tval > val:
                    cand, val = trial, tval
                else:
                    step *= 0.5
                    if step < 1e-6:
                        break
            if val > value:
                value, u = val, cand
    return value, u


def _project_radial(u: np.ndarray, p: float, alpha: float, budget=None) -> np.ndarray | None:
    """Scale u >= 0 onto the boundary of the budget set (budget is monotone along rays)."""
    if budget is None:
        def budget(v):
            return float(budget_scalar(v, alpha).sum())
    nu = np.abs(u)
    if float(nu.max(initial=0.0)) == 0.0:
        return None
    s_lo, s_hi = 1.0, 1.0
    for _ in range(200):
        if budget(s_lo * nu) <= p:
            break
        s_lo /= 2.0
    for _ in range(200):
        if budget(s_hi * nu) >= p:
            break
        s_hi *= 2.0
    for _ in range(48):
        mid = math.sqrt(s_lo * s_hi)
        if budget(mid * nu) <= p:
            s_lo = mid
        else:
            s_hi = mid
    return s_lo * nu


def al12_norm_coupled(a, p: float, alpha: float, restarts: int = 10) -> float:
    """Lower-bound value of the coupled chaos norm 2 sup{sum a_ij x_ij : row budget <= p}.

    For any fixed row norms the best row directions align with the rows of A,
    so the program reduces to the separable problem over the vector of row
    Euclidean norms.
    """
    m = _as_entries(a)
    _check_al12_args(p, alpha)
    if max(m.shape) > AL12_MAX_DIM:
        raise ValueError(f"chaos norms are oracle-scale; max dimension {AL12_MAX_DIM}")
    rows = np.sqrt((m**2).sum(axis=1))
    value, _ = max_linear_on_budget(rows, p, alpha, restarts=restarts)
    return 2.0 * value


def al12_norm_decoupled(a, p: float, alpha: float, restarts: int = 10, seed: int = 11) -> float:
    """Lower-bound value of the decoupled chaos norm sup{x^T A y : both budgets <= p}.

    Alternating maximization: for fixed y the optimal x solves the separable
    problem with weights |A y| (signs folded into x), and symmetrically for y.
    """
    m = _as_entries(a)
    _check_al12_args(p, alpha)
    if max(m.shape) > AL12_MAX_DIM:
        raise ValueError(f"chaos norms are oracle-scale; max dimension {AL12_MAX_DIM}")
    if float(np.abs(m).max(initial=0.0)) == 0.0:
        return 0.0

    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))
    # deterministic signed starts (top right-singular directions and coordinate
    # vectors), then signed random ones; sign patterns matter because the
    # alternating map can stall in a sign orbit
    _, _, vt = np.linalg.svd(m)
    y_starts = [vt[0]]
    if vt.shape[0] > 1:
        y_starts.append(vt[1])
    y_starts.extend(np.eye(m.shape[1])[: min(m.shape[1], 8)])
    y_starts.extend(rng.standard_normal(m.shape[1]) for _ in range(restarts))

    def alternate(y_signed: np.ndarray) -> float:
        val = 0.0
        for _ in range(40):
            cx = m @ y_signed
            vx, ux = max_linear_on_budget(np.abs(cx), p, alpha, restarts=0)
            x = np.sign(cx) * ux
            cy = m.T @ x
            vy, uy = max_linear_on_budget(np.abs(cy), p, alpha, restarts=0)
            y_signed = np.where(cy < 0.0, -uy, uy)
            if vy <= val + 1e-12 * (1.0 + abs(val)):
                return max(val, vy)
            val = vy
        return val

    best = 0.0
    for y0 in y_starts:
        mag = _project_radial(np.abs(y0), p, alpha)
        if mag is None:
            continue
        signs = np.where(y0 < 0.0, -1.0, 1.0)
        best = max(best, alternate(signs * mag))
    return best


def al12_norm_coupled_raw(a, p: float, alpha: float, restarts: int = 10, seed: int = 13) -> float:
    """Coupled chaos norm optimized directly in the full matrix variable.

    Works on the raw constraint set {X : sum_i min(||X_i.||^2, ||X_i.||^alpha) <= p}
    using only raw-space moves: radial projection, per-row rotation toward the
    matching row of A (budget-preserving, never decreases the objective), and
    pairwise budget exchange between rows.  Exists to cross-check the radial
    reparameterization of the coupled norm numerically.
    """
    m = _as_entries(a)
    _check_al12_args(p, alpha)
    if max(m.shape) > AL12_MAX_DIM:
        raise ValueError(f"chaos norms are oracle-scale; max dimension {AL12_MAX_DIM}")
    if float(np.abs(m).max(initial=0.0)) == 0.0:
        return 0.0

    a_rows = np.sqrt((m**2).sum(axis=1))
    n_rows = m.shape[0]
    theta_grid = np.linspace(0.0, 1.0, 65)

    def align(x: np.ndarray) -> np.ndarray:
        rn = np.sqrt((x**2).sum(axis=1))
        safe = np.where(a_rows == 0.0, 1.0, a_rows)
        return np.where((a_rows > 0.0)[:, None], m / safe[:, None] * rn[:, None], 0.0)

    def exchange(x: np.ndarray) -> np.ndarray:
        # redistribute budget between row pairs; rows stay aligned with A
        r = np.sqrt((x**2).sum(axis=1))
        for _ in range(8):
            improved = False
            for i in range(n_rows):
                for j in range(i + 1, n_rows):
                    total = float(budget_scalar(r[i], alpha) + budget_scalar(r[j], alpha))
                    if total == 0.0:
                        continue
                    ri = budget_inverse(theta_grid * total, alpha)
                    rj = budget_inverse((1.0 - theta_grid) * total, alpha)
                    vals = a_rows[i] * ri + a_rows[j] * rj
                    k = int(np.argmax(vals))
                    cur = a_rows[i] * r[i] + a_rows[j] * r[j]
                    if vals[k] > cur + 1e-12 * (1.0 + cur):
                        r[i], r[j] = float(ri[k]), float(rj[k])
                        improved = True
            if not improved:
                break
        safe = np.where(a_rows == 0.0, 1.0, a_rows)
        return np.where((a_rows > 0.0)[:, None], m / safe[:, None] * r[:, None], 0.0)

    def project(x: np.ndarray) -> np.ndarray | None:
        flat = x.ravel()
        signs = np.sign(flat)

        def row_budget(v: np.ndarray) -> float:
            xx = (signs * v).reshape(m.shape)
            rr = np.sqrt((xx**2).sum(axis=1))
            return float(np.minimum(rr**2, rr**alpha).sum())

        out = _project_radial(np.abs(flat), p, alpha, budget=row_budget)
        if out is None:
            return None
        return (signs * out).reshape(x.shape)

    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(2,)))
    gnorm = float(np.linalg.norm(m))
    best = 0.0
    starts = [m.copy()] + [rng.standard_normal(m.shape) for _ in range(restarts)]
    for x0 in starts:
        x = project(x0)
        if x is None:
            continue
        val = float((m * x).sum())
        step = 0.5
        for _ in range(40):
            trial = project(x + step * float(np.linalg.norm(x)) / gnorm * m)
            if trial is None:
                break
            for cand in (trial, align(trial), exchange(align(trial))):
                cand = project(cand)  # alignment can free budget from zero rows
                if cand is None:
                    continue
                cval = float((m * cand).sum())
                if cval > val:
                    x, val = cand, cval
            step *= 0.8
            if step < 1e-6:
                break
        best = max(best, val)
    return 2.0 * best


def al12_coupled_upper(a, p: float) -> float:
    """Analytic upper bound 2 sqrt(p) ||A||_HS + 2p ||A||_m for the coupled norm."""
    m = _as_entries(a)
    row_max = float(np.sqrt((m**2).sum(axis=1)).max())
    return 2.0 * math.sqrt(p) * float(np.linalg.norm(m)) + 2.0 * p * row_max


def al12_decoupled_upper(a, p: float, alpha: float) -> float:
    """Analytic upper bound 4 p^(2/alpha) ||A||_op for the decoupled norm."""
    _check_al12_args(p, alpha)
    return 4.0 * p ** (2.0 / alpha) * operator_norm(_as_entries(a))
