"""Degenerate gamma function and distribution: numerics for the moment layer.

Floating point is confined to this module.  Every check compares a float
produced by quadrature or sampling against an exact rational target computed
by the exact layer, converted at the last moment.

Integrands containing powers of the deformed exponential are integrated after
the change of variables u = (1/lam)*log(1 + lam*x), which maps them to
exponentially damped integrands on [0, inf); the generic truncation fallback
stays available through :class:`QuadratureSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate, stats

from .exactcore import ExactScalar, binomial, factorial
from .sequences import (
    derange_deg,
    derange_deg_order,
    falling_deg,
    stirling1_classical,
)

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-9
# acceptance thresholds sit one order looser than the solver tolerances
DEFAULT_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    max_subdivisions: int = 200
    tail_cutoff_strategy: str = "substitution"  # or "truncation"

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.tail_cutoff_strategy not in ("substitution", "truncation"):
            raise ValueError(f"unknown strategy {self.tail_cutoff_strategy!r}")


class QuadratureError(RuntimeError):
    """Raised when the integrator does not converge; carries the partial value."""

    def __init__(self, message: str, partial_estimate: float):
        super().__init__(f"{message} (partial estimate {partial_estimate!r})")
        self.partial_estimate = partial_estimate


@dataclass(frozen=True)
class DegGammaParams:
    """Parameters of the degenerate gamma distribution.

    Requires 0 < lam < 1, beta > 0 and 0 < alpha < 1/lam (the density is not
    normalizable otherwise).
    """

    alpha: float
    beta: float
    lam: float

    def __post_init__(self):
        if not 0 < self.lam < 1:
            raise ValueError(f"lam must lie in (0, 1), got {self.lam}")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 0 < self.alpha < 1 / self.lam:
            raise ValueError(
                f"alpha must lie in (0, 1/lam) = (0, {1 / self.lam}), got {self.alpha}"
            )


@dataclass
class MomentCheckResult:
    numeric_value: float
    exact_target: Fraction
    abs_error: float
    rel_error: float
    passed: bool
    inconclusive: bool = False
    detail: str | None = None


def _compare(numeric: float, target: Fraction, tol: float, **extra) -> MomentCheckResult:
    tf = float(target)
    abs_err = abs(numeric - tf)
    rel_err = abs_err / abs(tf) if tf != 0 else abs_err
    passed = (rel_err <= tol) if tf != 0 else (abs_err <= tol)
    return MomentCheckResult(numeric, target, abs_err, rel_err, passed, **extra)


# ---------------------------------------------------------------------------
# quadrature engine


def improper_quadrature(f: Callable[[float], float], spec: QuadratureSpec | None = None) -> float:
    """Integrate f over [0, inf) to the requested tolerances.

    "substitution" delegates the infinite interval to QUADPACK's internal
    variable transform; "truncation" integrates [0, T] for an adaptively
    doubled cutoff T (suited to polynomially damped tails).
    """
    spec = spec or QuadratureSpec()
    if spec.tail_cutoff_strategy == "substitution":
        upper = np.inf
    else:
        upper = 64.0
        while abs(f(upper)) * upper > spec.abs_tol * 1e-2:
            upper *= 2
            if upper > 2**60:
                raise QuadratureError("no usable truncation cutoff", 0.0)
        upper *= 4
    value, err, info, *rest = integrate.quad(
        f,
        0.0,
        upper,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=True,
    )
    if rest:  # QUADPACK appended a warning message: not converged
        raise QuadratureError(rest[0], value)
    if not math.isfinite(value):
        raise QuadratureError("integral evaluated to a non-finite value", value)
    return value


def _exp_damped(g: Callable[[float], float], lam: float) -> Callable[[float], float]:
    """Transform integrand g(x) on [0, inf) by x = (e^(lam*u) - 1)/lam.

    Returns the u-space integrand g(x(u)) * dx/du, exponentially damped
    whenever g carries a power of the deformed exponential.  Far in the tail
    the damped value underflows to zero while intermediate powers of x(u)
    overflow; those evaluations are clamped to zero (valid on the convergent
    windows enforced by the callers).
    """

    def integrand(u: float) -> float:
        if lam * u > 700.0:
            return 0.0
        jac = math.exp(lam * u)
        x = math.expm1(lam * u) / lam
        try:
            return g(x) * jac
        except OverflowError:
            return 0.0

    return integrand


# ---------------------------------------------------------------------------
# degenerate gamma function


def deg_gamma_fn_exact(k: int, lam: ExactScalar) -> Fraction:
    """Closed-form value at a positive integer: (k-1)! / (1*(1-lam)*...*(1-k*lam)).

    Valid for lam in (0, 1/k)."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    lam = Fraction(lam)
    if not 0 < lam < Fraction(1, k):
        raise ValueError(f"lam must lie in (0, 1/{k}), got {lam}")
    return Fraction(factorial(k - 1)) / falling_deg(1, k + 1, lam)


def deg_gamma_fn(k: int, lam: ExactScalar) -> float:
    """Float image of the exact closed-form value."""
    return float(deg_gamma_fn_exact(k, lam))


def deg_gamma_fn_quadrature(s: float, lam: float, spec: QuadratureSpec | None = None) -> float:
    """Integral definition: integral of t^(s-1) (1+lam*t)^(-1/lam) dt over [0, inf).

    Converges for 0 < s < 1/lam."""
    if not 0 < lam < 1:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    if not 0 < s < 1 / lam:
        raise ValueError(f"s must lie in (0, 1/lam), got {s}")

    def g(x: float) -> float:
        return x ** (s - 1) * (1 + lam * x) ** (-1 / lam) if x > 0 else 0.0

    return improper_quadrature(_exp_damped(g, lam), spec)


def deg_gamma_pdf(params: DegGammaParams, x: float) -> float:
    """Density of the degenerate gamma distribution; zero for x < 0."""
    if x < 0:
        return 0.0
    a, b, lam = params.alpha, params.beta, params.lam
    if float(a).is_integer():
        k = int(a)
        prod = 1.0
        for i in range(k + 1):
            prod *= 1 - i * lam  # positive throughout since lam < 1/alpha
        norm = math.gamma(k) / prod
    else:
        norm = deg_gamma_fn_quadrature(a, lam)
    bx = b * x
    power = 1.0 if a == 1 else bx ** (a - 1)
    return b * power * (1 + lam * bx) ** (-1 / lam) / norm


# ---------------------------------------------------------------------------
# moment checks


def theorem11_check(
    n: int,
    lam: ExactScalar,
    spec: QuadratureSpec | None = None,
    tol: float = DEFAULT_CHECK_TOL,
) -> MomentCheckResult:
    """Moment identity for the unit-parameter degenerate gamma variable.

    Numeric side: E[(1+lam*X)^(-1) * ((1/lam) log(1+lam*X))^n] by quadrature.
    Exact side: (1-lam) * sum_l binom(n,l) d_l (1)_{n-l} which must also equal
    (1-lam) * n! exactly; all three are required to agree.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    lam = Fraction(lam)
    if not Fraction(0) < lam < Fraction(1, 2):
        raise ValueError(f"lam must lie in (0, 1/2), got {lam}")
    target = Fraction(0)
    for l in range(n + 1):
        target += binomial(n, l) * derange_deg(l, lam, 0) * falling_deg(1, n - l, lam)
    target *= 1 - lam
    consistency = (1 - lam) * factorial(n)
    if target != consistency:
        raise AssertionError(
            f"exact layer inconsistency at n={n}, lam={lam}: {target} != {consistency}"
        )
    lamf = float(lam)

    def g(x: float) -> float:
        logpart = math.log1p(lamf * x) / lamf
        dens = (1 - lamf) * (1 + lamf * x) ** (-1 / lamf)
        return logpart**n / (1 + lamf * x) * dens

    numeric = improper_quadrature(_exp_damped(g, lamf), spec)
    return _compare(numeric, target, tol)


def moment_ratio_expectation(m: int, lam: float, spec: QuadratureSpec | None = None) -> float:
    """E[X^m / (1 + lam*X)] for the unit-parameter family, by quadrature.

    Finite only for m < 1/lam (the integrand tail decays like x^(m-1/lam-1)).
    """
    if not 0 < lam < 1:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    if m >= 1 / lam:
        raise ValueError(f"E[X^{m}/(1+lam X)] diverges for m >= 1/lam = {1 / lam}")

    def g(x: float) -> float:
        dens = (1 - lam) * (1 + lam * x) ** (-1 / lam)
        return x**m / (1 + lam * x) * dens

    return improper_quadrature(_exp_damped(g, lam), spec)


def stirling_log_expansion_check(
    n: int,
    m_cap: int,
    lam: ExactScalar,
    spec: QuadratureSpec | None = None,
    tol: float = 1e-6,
) -> MomentCheckResult:
    """Finite-truncation check of the log-power expansion of the moment above.

    Partial sums of (n!/lam^n) * sum_m s(m,n) lam^m/m! E[X^m/(1+lam X)] are
    compared against the exact target (1-lam)*n!.  The series is asymptotic:
    individual expectations diverge for m >= 1/lam, so terms are restricted to
    that window and their decay is monitored.  If the terms stop decaying (or
    the window is exhausted) before the tolerance is met, the result is
    flagged inconclusive rather than passed.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    lam = Fraction(lam)
    if not Fraction(0) < lam < Fraction(1, 2):
        raise ValueError(f"lam must lie in (0, 1/2), got {lam}")
    if m_cap < n:
        raise ValueError(f"m_cap must be >= n, got {m_cap} < {n}")
    lamf = float(lam)
    target = (1 - lam) * factorial(n)
    tf = float(target)
    # largest m with a convergent expectation: m < 1/lam
    m_limit = min(m_cap, math.ceil(1 / lamf) - 1)
    partial = 0.0
    best_err = math.inf
    best_partial = 0.0
    m_used = None
    prev_abs = math.inf
    growing = 0
    truncated_by_window = m_limit < m_cap
    for m in range(n, m_limit + 1):
        coef = Fraction(factorial(n)) / lam**n * stirling1_classical(m, n) * lam**m / factorial(m)
        term = float(coef) * moment_ratio_expectation(m, lamf, spec)
        partial += term
        err = abs(partial - tf)
        if err < best_err:
            best_err = err
            best_partial = partial
            m_used = m
        tol_met = (err / abs(tf) <= tol) if tf != 0 else (err <= tol)
        if tol_met:
            return _compare(partial, target, tol, detail=f"converged at m={m}")
        if abs(term) > prev_abs:
            growing += 1
            if growing >= 2:
                break
        else:
            growing = 0
        prev_abs = abs(term)
    if growing >= 2:
        detail = f"terms stopped decaying before tolerance; best truncation at m={m_used}"
        inconclusive = True
    elif truncated_by_window:
        detail = (
            f"convergent window m < 1/lam exhausted at m={m_limit} "
            f"before tolerance; best truncation at m={m_used}"
        )
        inconclusive = True
    else:
        detail = f"tolerance not reached by m_cap={m_cap}"
        inconclusive = False
    result = _compare(best_partial, target, tol, inconclusive=inconclusive, detail=detail)
    result.passed = False
    return result


# ---------------------------------------------------------------------------
# sampling (unit-parameter family only)


def deg_gamma11_cdf(lam: float, x):
    """Exact CDF of the unit-parameter family: 1 - (1+lam*x)^((lam-1)/lam)."""
    if not 0 < lam < 1:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    x = np.asarray(x, dtype=float)
    out = -np.expm1((lam - 1) / lam * np.log1p(lam * np.maximum(x, 0.0)))
    return out if out.ndim else float(out)


def deg_gamma11_ppf(lam: float, u):
    """Inverse CDF of the unit-parameter family: ((1-u)^(lam/(lam-1)) - 1)/lam.

    Maps u = 0 to 0; accepts scalars or arrays with u in [0, 1)."""
    if not 0 < lam < 1:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    u = np.asarray(u, dtype=float)
    out = np.expm1(lam / (lam - 1) * np.log1p(-u)) / lam
    return out if out.ndim else float(out)


def sample_deg_gamma11(lam: float, rng_seed: int, count: int) -> np.ndarray:
    """Inverse-CDF sampler: X = ((1-U)^(lam/(lam-1)) - 1)/lam, U uniform(0,1)."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    rng = np.random.default_rng(rng_seed)
    return deg_gamma11_ppf(lam, rng.random(count))


def sampler_ks_check(lam: float, count: int, rng_seed: int, level: float = 0.01):
    """Kolmogorov-Smirnov statistic of the sampler against the exact CDF.

    Returns (statistic, critical_value, passed) at the given level, using the
    exact finite-sample two-sided KS distribution for the critical value.
    """
    samples = sample_deg_gamma11(lam, rng_seed, count)
    result = stats.kstest(samples, lambda x: deg_gamma11_cdf(lam, x))
    critical = stats.kstwo.ppf(1 - level, count)
    return result.statistic, float(critical), bool(result.statistic < critical)


# ---------------------------------------------------------------------------
# exponential / Erlang moment bridges


def erlang_moment(l: int, r: int) -> int:
    """Raw moment of the sum of r independent unit exponentials: (l+r-1)!/(r-1)!."""
    if l < 0 or r < 1:
        raise ValueError("need l >= 0 and r >= 1")
    return factorial(l + r - 1) // factorial(r - 1)


def erlang_moment_quadrature(l: int, r: int, spec: QuadratureSpec | None = None) -> float:
    """Quadrature oracle for the Erlang moment: integral of x^(l+r-1) e^(-x)/(r-1)!."""
    if l < 0 or r < 1:
        raise ValueError("need l >= 0 and r >= 1")
    norm = factorial(r - 1)

    def f(x: float) -> float:
        return x ** (l + r - 1) * math.exp(-x) / norm

    return improper_quadrature(f, spec)


def erlang_bridge_check(
    n: int, r: int, lam: ExactScalar, x: ExactScalar
) -> tuple[Fraction, Fraction, bool]:
    """Exact identity between the order-r derangement values and Erlang moments:

    lhs: explicit order-r sum; rhs: sum_l binom(n,l) * (l+r-1)!/(r-1)! *
    falling(x-1, n-l).  Both sides exact rationals.
    """
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    lam = Fraction(lam)
    x = Fraction(x)
    lhs = derange_deg_order(n, r, lam, x)
    rhs = Fraction(0)
    for l in range(n + 1):
        rhs += binomial(n, l) * erlang_moment(l, r) * falling_deg(x - 1, n - l, lam)
    return lhs, rhs, lhs == rhs
