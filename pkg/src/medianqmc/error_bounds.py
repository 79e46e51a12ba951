"""Probabilistic worst-case error bounds for median QMC rules.

Each ``eps_*`` function returns the epsilon such that a single random point
set from the chosen family has worst-case error at most epsilon with
probability at least 1 - delta.  :func:`amplify` turns delta into the failure
probability of the median of r draws.

Infima over the concavity parameter lambda (and the auxiliary tau) are found
by a grid search followed by golden-section refinement.  Everything is
evaluated in log space because the intermediate sums overflow easily for
small lambda.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .digital_net import InstanceTooLarge
from .gf_poly import check_base

GRID_STEP = 1e-3
SERIES_GRID_STEP = 1e-2
ENDPOINT_SHRINK = 1e-6
GOLDEN_TOL = 1e-8
SERIES_REL_TOL = 1e-16
SERIES_MAX_TERMS = 10**6
EXPLICIT_MAX_DIM = 20

C_ALPHA_READING = "max(2/(2 sin(pi/b))^alpha, max_{1<=tau<alpha} 1/(2 sin(pi/b))^tau)"


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightModel:
    """Weights gamma_u for subsets u of {1, ..., s}; gamma of the empty set is 1.

    Use :meth:`product` for gamma_u = prod_{j in u} gamma_j, or
    :meth:`explicit` for a mapping from subsets to weights (missing subsets
    have weight 0).
    """

    kind: str
    gammas: tuple = ()
    table: Mapping = field(default_factory=dict)

    @classmethod
    def product(cls, gammas) -> WeightModel:
        g = tuple(float(x) for x in gammas)
        if any(not 0.0 <= x <= 1.0 for x in g):
            raise ValueError("product weights must lie in [0, 1]")
        return cls("product", g)

    @classmethod
    def explicit(cls, table: Mapping) -> WeightModel:
        clean = {}
        for u, gam in table.items():
            u = frozenset(int(j) for j in u)
            if not u:
                continue
            if not 0.0 <= gam <= 1.0:
                raise ValueError("weights must lie in [0, 1]")
            clean[u] = float(gam)
        return cls("explicit", (), clean)

    @classmethod
    def explicit_from_product(cls, gammas, s: int) -> WeightModel:
        table = {}
        for r in range(1, s + 1):
            for u in itertools.combinations(range(1, s + 1), r):
                table[frozenset(u)] = math.prod(gammas[j - 1] for j in u)
        return cls.explicit(table)

    def gamma(self, u) -> float:
        u = frozenset(u)
        if not u:
            return 1.0
        if self.kind == "product":
            return math.prod(self.gammas[j - 1] for j in u)
        return self.table.get(u, 0.0)

    def product_weights(self, s: int) -> np.ndarray:
        if len(self.gammas) < s:
            raise ValueError(f"need at least {s} product weights, got {len(self.gammas)}")
        return np.asarray(self.gammas[:s], dtype=np.float64)

    def subsets(self, s: int):
        """(sorted tuple u, gamma_u) for every non-empty u within 1..s with gamma_u > 0."""
        if s > EXPLICIT_MAX_DIM:
            raise InstanceTooLarge(
                f"explicit weights are limited to s <= {EXPLICIT_MAX_DIM} (2^s subsets)"
            )
        for u, gam in self.table.items():
            if gam > 0 and max(u) <= s:
                yield tuple(sorted(u)), gam


@dataclass(frozen=True)
class SmoothWeightSeq:
    """Non-increasing positive sequence u_1 >= u_2 >= ... of the infinitely smooth space."""

    u: tuple
    base: int = 2

    def __post_init__(self):
        u = tuple(float(x) for x in self.u)
        if not u or any(x <= 0 for x in u):
            raise ValueError("u_j must be positive")
        if any(a < c for a, c in zip(u, u[1:])):
            raise ValueError("u_j must be non-increasing")
        object.__setattr__(self, "u", u)

    @classmethod
    def from_shifts(cls, a, base: int = 2) -> SmoothWeightSeq:
        """The sequence whose derived shifts a_j are the given values."""
        k = constants(base)
        return cls(tuple(k.m_b / k.C_b * base ** (-float(x)) for x in a), base)

    @property
    def a(self) -> np.ndarray:
        """a_j = -log_b(C_b u_j / m_b)."""
        k = constants(self.base)
        u = np.asarray(self.u)
        return -np.log(k.C_b * u / k.m_b) / math.log(self.base)


# ---------------------------------------------------------------------------
# constants


def A_alpha(b: int, alpha: int, lam):
    """A_{alpha,lambda}, the value of sum_{k>=1} b^(-lambda mu_alpha(k)); finite for lambda > 1/alpha."""
    lam = np.asarray(lam, dtype=np.float64)
    # divergent lambdas may divide by zero; they are masked to inf below
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = [(b - 1) / (b ** (lam * i) - 1) for i in range(1, alpha + 1)]
        total = np.zeros_like(lam)
        prod = np.ones_like(lam)
        for tau in range(1, alpha):
            prod = prod * ratios[tau - 1]
            total = total + prod
        prod = prod * ratios[alpha - 1]
        lead = (b ** (lam * alpha) - 1) / (b ** (lam * alpha) - b)
        out = total + lead * prod
    out = np.where(lam * alpha > 1, out, np.inf)
    return float(out) if out.ndim == 0 else out


def log_A_inf(b: int, lam: float):
    """log A_{inf,lambda} together with a flag telling whether the term cap was hit."""
    if lam <= 0:
        return math.inf, True
    # stop once (b-1) b^(-lambda l) drops below the relative tolerance
    needed = math.ceil(math.log((b - 1) / SERIES_REL_TOL) / (lam * math.log(b)))
    capped = needed > SERIES_MAX_TERMS
    ell = np.arange(1, min(needed, SERIES_MAX_TERMS) + 1, dtype=np.float64)
    total = float(np.log1p((b - 1) * np.exp(-lam * ell * math.log(b))).sum())
    if capped:
        return math.inf, True
    return _log_expm1(total), False


def A_inf(b: int, lam: float) -> float:
    """A_{inf,lambda} = prod_{l>=1} (1 + (b-1) b^(-lambda l)) - 1."""
    val, _ = log_A_inf(b, lam)
    return math.exp(val) if val < 709 else math.inf


@dataclass(frozen=True)
class BoundConstants:
    """Base-dependent constants shared by the bound theorems."""

    base: int
    m_b: float
    M_b: float
    C_b: float
    alpha: int | None = None
    C_alpha: float | None = None
    c_alpha_reading: str = C_ALPHA_READING

    def A_alpha(self, lam):
        if self.alpha is None:
            raise ValueError("constants were built without alpha")
        return A_alpha(self.base, self.alpha, lam)

    def A_inf(self, lam):
        return A_inf(self.base, lam)


def c_alpha(b: int, alpha: int) -> float:
    """C_alpha, reading the inner max as a two-argument max."""
    sb = 2 * math.sin(math.pi / b)
    first = (1 + 1 / b + 1 / (b * (b + 1))) ** (alpha - 2)
    second = 3 + 2 / b + (2 * b + 1) / (b - 1)
    inner = max(1 / sb**tau for tau in range(1, alpha))
    return first * second * max(2 / sb**alpha, inner)


def constants(b: int, alpha: int | None = None) -> BoundConstants:
    check_base(b)
    m_b = 2 * math.sin(math.pi / b)
    M_b = 2.0 if b % 2 == 0 else 2 * math.sin((b + 1) * math.pi / (2 * b))
    C_b = 2.0 if b == 2 else M_b + b * m_b / (b - M_b)
    if alpha is not None and alpha < 2:
        raise ValueError("alpha must be at least 2")
    return BoundConstants(b, m_b, M_b, C_b, alpha, None if alpha is None else c_alpha(b, alpha))


# ---------------------------------------------------------------------------
# numerics helpers


def _log_expm1(x):
    """log(exp(x) - 1) for x > 0 without overflow."""
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = np.where(x > 30, x + np.log1p(-np.exp(-np.minimum(x, 700))), np.log(np.expm1(np.minimum(x, 30))))
    return float(out) if out.ndim == 0 else out


def _safe_exp(x):
    with np.errstate(over="ignore"):
        return np.exp(x)


def _golden(fun, lo: float, hi: float, tol: float = GOLDEN_TOL):
    invphi = (math.sqrt(5) - 1) / 2
    a, c = lo, hi
    x1 = c - invphi * (c - a)
    x2 = a + invphi * (c - a)
    f1, f2 = fun(x1), fun(x2)
    while c - a > tol:
        if f1 <= f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - invphi * (c - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (c - a)
            f2 = fun(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _grid(lo: float, hi: float, step: float, hi_closed: bool) -> np.ndarray:
    a = lo + ENDPOINT_SHRINK
    c = hi if hi_closed else hi - ENDPOINT_SHRINK
    if c <= a:
        return np.array([0.5 * (lo + hi)])
    n = max(1, int(math.floor((c - a) / step)))
    return np.append(a + step * np.arange(n), c)


def _argmin_finite(vals: np.ndarray) -> int:
    vals = np.where(np.isnan(vals), np.inf, vals)
    return int(np.argmin(vals))


def _minimize_1d(log_obj, lo, hi, hi_closed, step=GRID_STEP):
    """Minimise a vectorised log-objective on (lo, hi) or (lo, hi]; return (log value, argmin)."""
    grid = _grid(lo, hi, step, hi_closed)
    vals = log_obj(grid)
    i = _argmin_finite(vals)
    if not np.isfinite(vals[i]):
        return math.inf, float(grid[i])
    left = grid[max(i - 1, 0)]
    right = grid[min(i + 1, len(grid) - 1)]
    if right > left:
        x, fx = _golden(lambda t: float(log_obj(np.array([t]))[0]), left, right)
        if fx <= vals[i]:
            return fx, x
    return float(vals[i]), float(grid[i])


def _minimize_nested(log_obj, lam_lo, lam_hi, lam_closed, tau_hi_fn, step):
    """Infimum over lambda in (lam_lo, lam_hi] and tau in (0, tau_hi_fn(lambda))."""

    def inner(lam, tau_step):
        top = tau_hi_fn(lam)
        if top <= 2 * ENDPOINT_SHRINK:
            return math.inf, float("nan")
        return _minimize_1d(lambda t: log_obj(np.full_like(t, lam), t), 0.0, top, False, tau_step)

    lam_grid = _grid(lam_lo, lam_hi, step, lam_closed)
    results = [inner(lam, step) for lam in lam_grid]
    vals = np.array([r[0] for r in results])
    i = _argmin_finite(vals)
    if not np.isfinite(vals[i]):
        return math.inf, float(lam_grid[i]), results[i][1]
    left = lam_grid[max(i - 1, 0)]
    right = lam_grid[min(i + 1, len(lam_grid) - 1)]
    best = (vals[i], lam_grid[i], results[i][1])
    if right > left:
        lam, val = _golden(lambda lam: inner(lam, step)[0], left, right)
        if val <= best[0]:
            best = (val, lam, inner(lam, step)[1])
    return float(best[0]), float(best[1]), float(best[2])


def _jlog(s: int, b: int) -> np.ndarray:
    j = np.arange(1, s + 1, dtype=np.float64)
    return j * np.log(j + b) / math.log(b)


# ---------------------------------------------------------------------------
# median amplification


def amplify(delta: float, r: int) -> float:
    """Failure probability binom(r, (r+1)/2) delta^((r+1)/2) of the median of r draws."""
    if r < 1 or r % 2 == 0:
        raise ValueError("r must be an odd positive integer")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    h = (r + 1) // 2
    return math.comb(r, h) * delta**h


def amplify_loose(delta: float, r: int) -> float:
    """The simpler upper bound (4 delta)^((r+1)/2) / 4."""
    if r < 1 or r % 2 == 0:
        raise ValueError("r must be an odd positive integer")
    return (4 * delta) ** ((r + 1) // 2) / 4


def _check_delta(delta):
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")


def _check_family(family):
    if family not in ("net", "plr"):
        raise ValueError(f"family must be 'net' or 'plr', got {family!r}")


# ---------------------------------------------------------------------------
# first-order Sobolev space


def _sob1_bracket_sum(m, s, weights, family, b):
    beta = float(b) ** -m
    one_minus = lambda k: -math.expm1(k * math.log1p(-beta))  # 1 - (1 - beta)^k
    if family == "net":
        X = m * b * (b + 1) / 3 * _jlog(s, b)
    else:
        growth = m * (b * b - 1) / (3 * b)

    if weights.kind == "product":
        g = weights.product_weights(s)
        log_p1 = float(np.log1p(g).sum())
        p1 = math.exp(log_p1)
        # prod(1+g) - prod(1+g(1-beta)), computed without cancellation
        q = math.exp(float(np.log1p(g * (1 - beta)).sum()))
        diff = q * math.expm1(float(np.log1p(g * beta / (1 + g * (1 - beta))).sum()))
        size_sum = p1 * float((g / (1 + g)).sum())  # sum_u gamma_u |u|
        if family == "net":
            r = math.exp(float(np.log1p(g * (1 + X)).sum()))
            return diff - beta * (p1 - 1) + beta * size_sum + beta * (r - 1)
        r = math.exp(float(np.log1p(g * (1 + growth)).sum()))
        return diff + beta * size_sum + (r - p1) / (b**m - 1)

    total = 0.0
    for u, gam in weights.subsets(s):
        k = len(u)
        if family == "net":
            inner = one_minus(k) - beta + k * beta + beta * math.prod(1 + X[j - 1] for j in u)
        else:
            inner = one_minus(k) + k * beta + math.expm1(k * math.log1p(growth)) / (b**m - 1)
        total += gam * inner
    return total


def eps_sob1(m: int, s: int, delta: float, weights: WeightModel, family: str = "net", b: int = 2) -> float:
    """Bound for the weighted first-order Sobolev space.

    The net family assumes square non-singular base matrices whose projections
    obey the Niederreiter t-value bound.
    """
    _check_delta(delta)
    _check_family(family)
    check_base(b)
    return _sob1_bracket_sum(m, s, weights, family, b) / delta


# ---------------------------------------------------------------------------
# order-alpha Sobolev space


def _log_subset_sum(weights, s, per_dim_log):
    """log sum_{u != {}} prod_{j in u} exp(per_dim_log[..., j]); per_dim_log has shape (..., s)."""
    if weights.kind == "product":
        S = np.logaddexp(0.0, per_dim_log).sum(axis=-1)
        return _log_expm1(S)
    terms = [per_dim_log[..., [j - 1 for j in u]].sum(axis=-1) for u, _ in weights.subsets(s)]
    if not terms:
        return np.full(per_dim_log.shape[:-1], -np.inf)
    return np.logaddexp.reduce(np.stack(terms), axis=0)


def _alpha_net_logobj(m, s, alpha, delta, weights, b):
    Ca = c_alpha(b, alpha)
    lj = np.log(_jlog(s, b))
    g = _log_gammas(weights, s)

    def log_obj(lam):
        lam = np.asarray(lam, dtype=np.float64)[..., None]
        logA = np.log(A_alpha(b, alpha, lam))
        per = lam * g + math.log(b * b / (b - 1)) + lam * math.log(Ca) + logA + lj
        logK = _log_subset_sum(weights, s, per)
        return (logK - math.log(delta) - m * math.log(b)) / lam[..., 0]

    return log_obj


def _alpha_plr_logobj(m, s, alpha, delta, weights, b):
    Ca = c_alpha(b, alpha)
    g = _log_gammas(weights, s)
    lb = math.log(b)

    def log_obj(lam, tau):
        lam = np.asarray(lam, dtype=np.float64)
        tau = np.asarray(tau, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            logA = np.log(A_alpha(b, alpha, lam - tau))
            per = lam[..., None] * g + lam[..., None] * math.log(Ca) + logA[..., None]
            logK = _log_subset_sum(weights, s, per)
            pre = math.log(3) - math.log(b**m - 1) - math.log(delta) - np.log(tau) - 1 - math.log(lb)
            out = (pre + logK) / lam
        return np.where((tau > 0) & (lam - tau > 1 / alpha), out, np.inf)

    return log_obj


def _log_gammas(weights, s):
    """Per-dimension log gamma_j for product weights; zeros for explicit (applied per subset)."""
    if weights.kind == "product":
        with np.errstate(divide="ignore"):
            return np.log(weights.product_weights(s))
    return np.zeros(s)


def eps_sob_alpha(
    m: int,
    s: int,
    alpha: int,
    delta: float,
    weights: WeightModel,
    family: str = "net",
    b: int = 2,
    lam: float | None = None,
    tau: float | None = None,
    q=None,
) -> float:
    """Bound for the weighted Sobolev space of order alpha.

    The integrability index q never enters the bound and is accepted only for
    signature symmetry.  Pass ``lam`` (and ``tau`` for the plr family) to
    evaluate the objective at a fixed point instead of taking the infimum.
    """
    return _sob_alpha_search(m, s, alpha, delta, weights, family, b, lam, tau)[0]


def _sob_alpha_search(m, s, alpha, delta, weights, family, b, lam=None, tau=None, step=GRID_STEP):
    _check_delta(delta)
    _check_family(family)
    check_base(b)
    if alpha < 2:
        raise ValueError("alpha must be at least 2")
    if weights.kind == "explicit":
        return _sob_alpha_explicit(m, s, alpha, delta, weights, family, b, lam, tau, step)
    if family == "net":
        log_obj = _alpha_net_logobj(m, s, alpha, delta, weights, b)
        if lam is not None:
            return float(_safe_exp(log_obj(np.array([lam]))[0])), lam, None
        val, arg = _minimize_1d(log_obj, 1 / alpha, 1.0, True, step)
        return float(_safe_exp(val)), arg, None
    log_obj = _alpha_plr_logobj(m, s, alpha, delta, weights, b)
    if lam is not None:
        if tau is None:
            val, t = _minimize_1d(lambda t: log_obj(np.full_like(t, lam), t), 0.0, lam - 1 / alpha, False, step)
            return float(_safe_exp(val)), lam, t
        return float(_safe_exp(log_obj(np.array(lam), np.array(tau)))), lam, tau
    val, lam_best, tau_best = _minimize_nested(
        log_obj, 1 / alpha, 1.0, True, lambda l: l - 1 / alpha, step
    )
    return float(_safe_exp(val)), lam_best, tau_best


def _sob_alpha_explicit(m, s, alpha, delta, weights, family, b, lam, tau, step):
    # explicit weights: gamma_u^lambda enters per subset, so sum subsets directly
    Ca = c_alpha(b, alpha)
    subsets = list(weights.subsets(s))
    jl = _jlog(s, b)
    sizes = np.array([len(u) for u, _ in subsets], dtype=np.float64)
    loggam = np.log(np.array([gm for _, gm in subsets]))
    logprod = np.array([float(np.log(jl[[j - 1 for j in u]]).sum()) for u, _ in subsets])
    lb = math.log(b)

    def net_obj(lv):
        lv = np.asarray(lv, dtype=np.float64)[..., None]
        logA = np.log(A_alpha(b, alpha, lv))
        terms = lv * loggam + sizes * (math.log(b * b / (b - 1)) + lv * math.log(Ca) + logA) + logprod
        logK = np.logaddexp.reduce(terms, axis=-1)
        return (logK - math.log(delta) - m * lb) / lv[..., 0]

    def plr_obj(lv, tv):
        lv = np.asarray(lv, dtype=np.float64)
        tv = np.asarray(tv, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            logA = np.log(A_alpha(b, alpha, lv - tv))[..., None]
            terms = lv[..., None] * loggam + sizes * (lv[..., None] * math.log(Ca) + logA)
            logK = np.logaddexp.reduce(terms, axis=-1)
            pre = math.log(3) - math.log(b**m - 1) - math.log(delta) - np.log(tv) - 1 - math.log(lb)
            out = (pre + logK) / lv
        return np.where((tv > 0) & (lv - tv > 1 / alpha), out, np.inf)

    if not subsets:
        return 0.0, lam, tau
    if family == "net":
        if lam is not None:
            return float(_safe_exp(net_obj(np.array([lam]))[0])), lam, None
        val, arg = _minimize_1d(net_obj, 1 / alpha, 1.0, True, step)
        return float(_safe_exp(val)), arg, None
    if lam is not None and tau is not None:
        return float(_safe_exp(plr_obj(np.array(lam), np.array(tau)))), lam, tau
    val, lb_, tb_ = _minimize_nested(plr_obj, 1 / alpha, 1.0, True, lambda l: l - 1 / alpha, step)
    return float(_safe_exp(val)), lb_, tb_


# ---------------------------------------------------------------------------
# infinitely smooth space


def phi(x, lam: float, b: int):
    """The concave map b^(-(-log_b x)^lambda) below 1/b, linear above (b >= 3)."""
    if b < 3:
        raise NotImplementedError("the concave map is only provided for b >= 3")
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        low = b ** -((-np.log(x) / math.log(b)) ** lam)
    out = np.where(x <= 1 / b, low, lam * (x - 1 / b) + 1 / b)
    out = np.where(x == 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def phi_inv_log(log_y: float, lam: float, b: int) -> float:
    """phi^{-1}(exp(log_y)) for b >= 3, stable for tiny or huge arguments."""
    if b < 3:
        raise NotImplementedError("the concave map is only provided for b >= 3")
    lb = math.log(b)
    if log_y == -math.inf:
        return 0.0
    if log_y <= -lb:
        return math.exp(-lb * (-log_y / lb) ** (1 / lam))
    if log_y > 700:
        return math.inf
    return (math.exp(log_y) - 1 / b) / lam + 1 / b


def phi_inv(y: float, lam: float, b: int) -> float:
    return 0.0 if y == 0 else phi_inv_log(math.log(y), lam, b)


def log_series(log_term, rel_tol=SERIES_REL_TOL, max_terms=SERIES_MAX_TERMS, chunk=4096):
    """log sum_{i>=1} exp(log_term(i)) with the truncation rule of this module.

    Summation stops once the terms are decreasing and the latest one is below
    ``rel_tol`` times the running sum.  Returns (log sum, capped flag).
    """
    total = -math.inf
    start = 1
    log_tol = math.log(rel_tol)
    while start <= max_terms:
        i = np.arange(start, min(start + chunk, max_terms + 1), dtype=np.float64)
        lt = log_term(i)
        total = float(np.logaddexp(total, np.logaddexp.reduce(lt)))
        if len(lt) > 1 and lt[-1] < lt[-2] and lt[-1] < total + log_tol:
            return total, False
        start += chunk
        chunk = min(chunk * 2, 1 << 18)
    return total, True


@functools.lru_cache(maxsize=1 << 16)
def log_C_unweighted(s: int, b: int, lam: float, tau: float):
    """log C_{s,lambda,tau} and the cap flag."""
    lb = math.log(b)
    return log_series(lambda i: 2 * np.sqrt(s * (b - 1) * (i + 1)) - (i**lam - i**tau) * lb)


def A_aq(a: float, q: float, b: int) -> float:
    return 1 + (b - 1) * (1 + math.gamma(1 / q) / (q * a ** (1 / q)))


@functools.lru_cache(maxsize=1 << 16)
def log_C_weighted(a: float, q: float, b: int, lam: float, tau: float):
    """log C_{a,q,lambda,tau} and the cap flag."""
    lb = math.log(b)
    Aq = A_aq(a, q, b)
    ex = (q + 1) / (2 * q + 1)
    return log_series(lambda i: Aq * (i + 1) ** ex - (i**lam - i**tau) * lb)


def _inf_net_logobj(m, s, delta, a, b):
    lj = np.log(_jlog(s, b))
    lb = math.log(b)

    def log_obj(lams):
        out = np.empty(len(lams))
        for idx, lam in enumerate(np.asarray(lams, dtype=np.float64)):
            logA, capped = log_A_inf(b, lam)
            if capped or not np.isfinite(logA):
                out[idx] = np.inf
                continue
            per = math.log(b / (b - 1)) + logA - lam * a * lb + lj
            logK = _log_expm1(np.logaddexp(0.0, per).sum())
            out[idx] = (logK - math.log(delta) - m * lb) / lam
        return out

    return log_obj


def _inf_plr_logy(m, s, delta, b, regime, a, q):
    lb = math.log(b)
    pre = math.log(3) - math.log(b**m - 1) - math.log(delta)

    def log_y(lam, tau):
        if regime == "unweighted":
            logC, capped = log_C_unweighted(s, b, float(lam), float(tau))
        else:
            logC, capped = log_C_weighted(float(a), float(q), b, float(lam), float(tau))
        if capped:
            return math.inf
        return pre + logC - (math.log(tau) + 1 + math.log(lb)) / tau

    return log_y


def eps_inf(
    m: int,
    s: int,
    delta: float,
    u_seq: SmoothWeightSeq,
    family: str = "net",
    regime: str = "unweighted",
    a: float | None = None,
    q: float | None = None,
    b: int | None = None,
    lam: float | None = None,
    tau: float | None = None,
) -> float:
    """Bound for the weighted space of infinitely smooth functions.

    For ``family="plr"`` only b >= 3 is supported, with ``regime`` either
    ``"unweighted"`` (all a_j equal to a >= 0) or ``"weighted"`` (a_j >= a (j-1)^q).
    """
    return _inf_search(m, s, delta, u_seq, family, regime, a, q, b, lam, tau)[0]


def _inf_search(m, s, delta, u_seq, family, regime="unweighted", a=None, q=None, b=None,
                lam=None, tau=None, step=None):
    _check_delta(delta)
    _check_family(family)
    b = u_seq.base if b is None else b
    check_base(b)
    if b != u_seq.base:
        raise ValueError("u_seq was built for a different base")
    if len(u_seq.u) < s:
        raise ValueError(f"need at least {s} smoothness weights")
    shifts = u_seq.a[:s]
    if family == "net":
        log_obj = _inf_net_logobj(m, s, delta, shifts, b)
        if lam is not None:
            return float(_safe_exp(log_obj(np.array([lam]))[0])), lam, None
        val, arg = _minimize_1d(log_obj, 0.0, 1.0, True, step or GRID_STEP)
        return float(_safe_exp(val)), arg, None

    if b < 3:
        raise NotImplementedError("the polynomial lattice bound is stated for b >= 3 only")
    tol = 1e-12
    if shifts[0] < -tol:
        raise ValueError("the polynomial lattice bound needs a_1 >= 0 (u_1 <= m_b / C_b)")
    if regime == "unweighted":
        a_common = float(shifts[0]) if a is None else a
        if np.any(np.abs(shifts - a_common) > 1e-9) or a_common < -tol:
            raise ValueError("unweighted regime needs a_1 = a_2 = ... = a >= 0")
        lam_lo, lam_hi = 0.5, 1.0
    elif regime == "weighted":
        if a is None or q is None or a <= 0 or q <= 0:
            raise ValueError("weighted regime needs a > 0 and q > 0")
        j = np.arange(1, s + 1)
        if np.any(shifts < a * (j - 1.0) ** q - 1e-9):
            raise ValueError("weighted regime needs a_j >= a (j-1)^q")
        lam_lo, lam_hi = (q + 1) / (2 * q + 1), 1.0
    else:
        raise ValueError(f"unknown regime {regime!r}")

    log_y = _inf_plr_logy(m, s, delta, b, regime, a, q)
    tau_cap = 1 / math.log(b)
    # Series terms grow with tau and shrink with lambda, so a capped (divergent)
    # cell also caps every cell with smaller lambda and larger tau.
    capped_cells = []

    def dominated(l, t):
        return any(l <= cl and t >= ct for cl, ct in capped_cells)

    def log_eps(lam_v, tau_v):
        lam_v = np.atleast_1d(lam_v)
        tau_v = np.atleast_1d(tau_v)
        out = np.empty(lam_v.shape)
        for idx, (l, t) in enumerate(zip(lam_v, tau_v)):
            if not (lam_lo < l < lam_hi and 0 < t < min(l, tau_cap)):
                out[idx] = np.inf
                continue
            if dominated(l, t):
                out[idx] = np.inf
                continue
            ly = log_y(l, t)
            if ly == math.inf:
                capped_cells.append((l, t))
            x = phi_inv_log(ly, l, b)
            out[idx] = math.log(x) if x > 0 else -np.inf
        return out

    if lam is not None and tau is not None:
        return float(_safe_exp(log_eps(lam, tau)[0])), lam, tau
    val, lam_best, tau_best = _minimize_nested(
        log_eps, lam_lo, lam_hi, False, lambda l: min(l, tau_cap), step or SERIES_GRID_STEP
    )
    return float(_safe_exp(val)), lam_best, tau_best


# ---------------------------------------------------------------------------
# reporting


@dataclass
class BoundResult:
    theorem: str
    family: str
    value: float
    lam: float | None
    tau: float | None
    constants: dict
    params: dict

    @property
    def vacuous(self) -> bool:
        return self.value > 1


def bound_report(theorem: str, family: str, **kw) -> BoundResult:
    """Evaluate one theorem's bound and collect the constants that went into it."""
    b = kw.get("b", 2)
    if theorem == "sob1":
        val = eps_sob1(kw["m"], kw["s"], kw["delta"], kw["weights"], family, b)
        lam = tau = None
        k = constants(b)
        consts = {"m_b": k.m_b}
    elif theorem == "sob-alpha":
        alpha = kw["alpha"]
        val, lam, tau = _sob_alpha_search(
            kw["m"], kw["s"], alpha, kw["delta"], kw["weights"], family, b
        )
        k = constants(b, alpha)
        consts = {"C_alpha": k.C_alpha, "C_alpha_reading": k.c_alpha_reading}
        if lam is not None:
            consts["A_alpha_lambda"] = A_alpha(b, alpha, lam if family == "net" else lam - tau)
    elif theorem == "inf":
        val, lam, tau = _inf_search(
            kw["m"], kw["s"], kw["delta"], kw["u_seq"], family,
            kw.get("regime", "unweighted"), kw.get("a"), kw.get("q"), b,
        )
        k = constants(b)
        consts = {"m_b": k.m_b, "M_b": k.M_b, "C_b": k.C_b}
        if family == "net":
            consts["A_inf_lambda"] = A_inf(b, lam)
        elif kw.get("regime") == "weighted":
            consts["A_aq"] = A_aq(kw["a"], kw["q"], b)
    else:
        raise ValueError(f"unknown theorem {theorem!r}")
    params = {k_: v for k_, v in kw.items() if k_ not in ("weights", "u_seq")}
    return BoundResult(theorem, family, val, lam, tau, consts, params)
