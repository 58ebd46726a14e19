"""Composite multipath/shadowing densities.

Two independent evaluation routes are provided for every composite family:

* ``mixture_pdf`` integrates the conditional multipath density against the
  gamma shadow density.  It is the ground-truth oracle.
* The series evaluators expand the Bessel factor of the conditional density
  and push the shadow average through term by term, which leaves one
  shadow-kernel integral per term:

      K(p, A) = int_0^inf u^(p-1) exp(-A/u) exp(-u^(1/alpha)/omega) du

  The kernel is computed by validated quadrature (after the substitution
  v = u^(1/alpha) and peak normalization in log space, so it never overflows
  even for deep series terms).

The zero-LOS composite needs no series at all: a single kernel evaluation is
exact.  Extreme composites keep the deep-fade atom exp(-2m) at zero, which
the shadow average cannot touch.

Evaluations are pure given immutable model objects; kernel memoization is
confined to an explicit per-batch cache, so concurrent curve evaluations on
one model match serial execution.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DivergentIntegralError, DomainError
from .models import (
    KAPPA_ZERO_THRESHOLD,
    AkmParams,
    AmParams,
    Density,
    ExtremeParams,
    GammaShadowParams,
    ScaledEnvelope,
    akm_pdf_normalized,
    am_pdf,
    extreme_pdf,
    gamma_shadow_pdf,
)
from .numerics import integrate_semi_infinite, sum_adaptive

__all__ = [
    "CompositeModel",
    "SeriesConfig",
    "KernelArgs",
    "MultipathParams",
    "shadow_kernel_integral",
    "shadow_kernel_integral_ln",
    "mixture_pdf",
    "mixture_density",
    "akm_gamma_pdf_series",
    "am_gamma_pdf",
    "extreme_gamma_pdf",
    "extreme_gamma_density",
    "composite_pdf",
    "composite_density",
]

logger = logging.getLogger(__name__)

MultipathParams = Union[AkmParams, AmParams, ExtremeParams]


@dataclass(frozen=True)
class CompositeModel:
    """One multipath model whose rms scale is replaced by a gamma shadow."""

    multipath: MultipathParams
    shadow: GammaShadowParams

    def __post_init__(self):
        if not isinstance(self.multipath, (AkmParams, AmParams, ExtremeParams)):
            raise DomainError(f"unsupported multipath model: {self.multipath!r}")
        if not isinstance(self.shadow, GammaShadowParams):
            raise DomainError(f"shadow must be GammaShadowParams, got {self.shadow!r}")


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation settings for the Bessel-series composite evaluators.

    With ``use_gross`` false the term weights are the ascending-series ones
    and the sum stops adaptively; with it true the degree-n polynomial
    surrogate weights are used and all n+1 terms are summed (the weights
    depend on n, which rules out incremental stopping).
    """

    max_terms: int = 40
    rel_tol: float = 1e-8
    use_gross: bool = False

    def __post_init__(self):
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if not self.rel_tol > 0.0:
            raise DomainError("rel_tol must be positive")


@dataclass(frozen=True)
class KernelArgs:
    """Arguments of the shadow-kernel integral.

    ``p`` is the power exponent of u, ``a`` the inner-exponential scale
    (mu*(1+kappa)*x^alpha or 2m*r^alpha in the composite series), and
    (alpha, omega) come from the model.
    """

    p: float
    a: float
    alpha: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.p)):
            raise DomainError(f"p must be finite, got {self.p!r}")
        if not (math.isfinite(self.a) and self.a >= 0.0):
            raise DomainError(f"a must be finite and >= 0, got {self.a!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise DomainError(f"alpha must be finite and > 0, got {self.alpha!r}")
        if not (math.isfinite(self.omega) and self.omega > 0.0):
            raise DomainError(f"omega must be finite and > 0, got {self.omega!r}")


_KERNEL_REL_TOL = 1e-10
_KERNEL_BUDGET = 60_000


def _kernel_peak(q: float, a: float, alpha: float, omega: float) -> float:
    # Stationary point of h(v) = q ln v - a v^(-alpha) - v/omega, i.e. the
    # unique positive root of v^(alpha+1)/omega - q v^alpha - alpha*a = 0.
    def g(v):
        return v ** (alpha + 1.0) / omega - q * v**alpha - alpha * a

    hi = max(omega, (alpha * a * omega) ** (1.0 / (alpha + 1.0)))
    if q > 0.0:
        hi = max(hi, 2.0 * q * omega)
    while g(hi) <= 0.0:
        hi *= 2.0
    lo = hi
    while g(lo) >= 0.0:
        lo *= 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= 1e-9 * hi:
            break
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def shadow_kernel_integral_ln(
    p: float,
    a: float,
    alpha: float,
    omega: float,
    rel_tol: float = _KERNEL_REL_TOL,
    budget: int = _KERNEL_BUDGET,
) -> float:
    """Natural log of the shadow-kernel integral.

    Substituting v = u^(1/alpha) gives alpha * int v^(alpha*p-1)
    exp(-a v^(-alpha) - v/omega) dv; the exponent is shifted by its maximum
    before quadrature so the integrand stays in [0, 1].
    """
    args = KernelArgs(p, a, alpha, omega)
    p, a, alpha, omega = args.p, args.a, args.alpha, args.omega
    ap = alpha * p
    if a == 0.0:
        if p <= 0.0:
            raise DivergentIntegralError(
                f"kernel integral diverges for a = 0 and p = {p!r} <= 0"
            )
        if ap <= 1.0:
            # Power substitution s = (v/omega)^(alpha*p) regularizes the
            # origin; the integrand exp(-s^(1/(alpha*p))) is then bounded.
            inv = 1.0 / ap
            res = integrate_semi_infinite(
                lambda s: np.exp(-(s**inv)),
                rel_tol=rel_tol,
                abs_tol=1e-280,
                budget=budget,
                scale=1.0,
                vectorized=True,
            )
            return math.log(alpha / ap) + ap * math.log(omega) + math.log(res.value)
        vstar = (ap - 1.0) * omega
        k0 = (ap - 1.0) * math.log(vstar) - vstar / omega

        def integrand(v):
            return np.exp((ap - 1.0) * np.log(v) - v / omega - k0)

        res = integrate_semi_infinite(
            integrand,
            rel_tol=rel_tol,
            abs_tol=1e-280,
            budget=budget,
            scale=vstar,
            initial_panels=4,
            vectorized=True,
        )
        return math.log(alpha) + k0 + math.log(res.value)

    q = ap - 1.0
    vstar = _kernel_peak(q, a, alpha, omega)
    k0 = q * math.log(vstar) - a * vstar ** (-alpha) - vstar / omega

    def integrand(v):
        return np.exp(q * np.log(v) - a * v ** (-alpha) - v / omega - k0)

    res = integrate_semi_infinite(
        integrand,
        rel_tol=rel_tol,
        abs_tol=1e-280,
        budget=budget,
        scale=vstar,
        initial_panels=4,
        vectorized=True,
    )
    return math.log(alpha) + k0 + math.log(res.value)


def shadow_kernel_integral(
    k: KernelArgs,
    rel_tol: float = _KERNEL_REL_TOL,
    budget: int = _KERNEL_BUDGET,
) -> float:
    """Shadow-kernel integral int_0^inf u^(p-1) e^(-a/u) e^(-u^(1/alpha)/omega) du."""
    ln_value = shadow_kernel_integral_ln(
        k.p, k.a, k.alpha, k.omega, rel_tol=rel_tol, budget=budget
    )
    if ln_value > 709.0:
        return math.inf
    return math.exp(ln_value)


def _kernel_ln_cached(cache: Optional[dict], p, a, alpha, omega) -> float:
    if cache is None:
        return shadow_kernel_integral_ln(p, a, alpha, omega)
    key = (p, a, alpha, omega)
    value = cache.get(key)
    if value is None:
        value = shadow_kernel_integral_ln(p, a, alpha, omega)
        cache[key] = value
    return value


def _conditional_pdf(multipath: MultipathParams, x: float, y: float) -> float:
    # Multipath density with rms scale y.
    if isinstance(multipath, AkmParams):
        return akm_pdf_normalized(multipath, x / y) / y
    if isinstance(multipath, AmParams):
        return am_pdf(multipath, ScaledEnvelope(y), x)
    return extreme_pdf(multipath, x / y) / y


def _leading_exponent(multipath: MultipathParams) -> float:
    # Power of x that controls the conditional density near the origin.
    if isinstance(multipath, AkmParams):
        return multipath.alpha * multipath.mu - 1.0
    if isinstance(multipath, AmParams):
        return multipath.alpha * multipath.mu - 1.0
    return multipath.alpha - 1.0


def mixture_pdf(
    m: CompositeModel,
    x: float,
    rel_tol: float = 1e-9,
    budget: int = 200_000,
) -> float:
    """Continuous composite density at x by direct shadow averaging.

    This is the ground-truth oracle for the series evaluators.  For extreme
    multipath the mode-independent atom exp(-2m) is not part of this value;
    ``mixture_density`` carries it.
    """
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"x must be finite and >= 0, got {x!r}")
    mp, sh = m.multipath, m.shadow
    if x == 0.0:
        if _leading_exponent(mp) > 0.0:
            return 0.0
        raise DomainError("composite density is singular at x = 0 for these parameters")

    def integrand(y: float) -> float:
        return _conditional_pdf(mp, x, y) * gamma_shadow_pdf(sh, y)

    scale = max(x, sh.b * sh.omega)
    res = integrate_semi_infinite(
        integrand, rel_tol=rel_tol, abs_tol=1e-280, budget=budget, scale=scale
    )
    return res.value


def mixture_density(m: CompositeModel, rel_tol: float = 1e-9, budget: int = 200_000) -> Density:
    """Full composite distribution on the oracle route (atoms included)."""
    atoms = ()
    if isinstance(m.multipath, ExtremeParams):
        atoms = ((0.0, m.multipath.atom_mass),)
    return Density(
        continuous=lambda x: mixture_pdf(m, x, rel_tol=rel_tol, budget=budget),
        atoms=atoms,
    )


def _gross_ln_weight(n: int, l: int) -> float:
    # Weight of the degree-n polynomial surrogate relative to the
    # ascending-series term; tends to 1 as n grows.
    return math.lgamma(n + l) - math.lgamma(n - l + 1.0) + (1.0 - 2.0 * l) * math.log(n)


def akm_gamma_pdf_series(
    m: CompositeModel,
    x: float,
    cfg: SeriesConfig = SeriesConfig(),
    cache: Optional[dict] = None,
) -> float:
    """Series form of the LOS composite density.

    Term l couples the coefficient x^(alpha*(mu+l)-1) mu^(mu+2l) kappa^l
    (1+kappa)^(mu+l) / (l! Gamma(mu+l) Gamma(b) omega^b e^(mu*kappa)) with
    the shadow kernel at p = b/alpha - mu - l, A = mu*(1+kappa)*x^alpha.
    Vanishing LOS power routes to the exact zero-LOS form.
    """
    mp = m.multipath
    if not isinstance(mp, AkmParams):
        raise DomainError("akm_gamma_pdf_series requires the LOS multipath model")
    sh = m.shadow
    if mp.kappa < KAPPA_ZERO_THRESHOLD:
        logger.debug("kappa=%g below threshold; using the exact zero-LOS composite", mp.kappa)
        reduced = CompositeModel(AmParams(mp.alpha, mp.mu), sh)
        return am_gamma_pdf(reduced, x)
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"x must be finite and >= 0, got {x!r}")
    if x == 0.0:
        if mp.alpha * mp.mu - 1.0 > 0.0:
            return 0.0
        raise DomainError("composite density is singular at x = 0 for these parameters")

    alpha, kappa, mu = mp.alpha, mp.kappa, mp.mu
    b, omega = sh.b, sh.omega
    ln_x = math.log(x)
    ln_mu = math.log(mu)
    ln_kappa = math.log(kappa)
    ln_1k = math.log1p(kappa)
    ln_shadow_norm = math.lgamma(b) + b * math.log(omega)
    inner = mu * (1.0 + kappa) * x**alpha

    def term(l: int) -> float:
        ln_coeff = (
            (alpha * (mu + l) - 1.0) * ln_x
            + (mu + 2.0 * l) * ln_mu
            + l * ln_kappa
            + (mu + l) * ln_1k
            - math.lgamma(l + 1.0)
            - math.lgamma(mu + l)
            - ln_shadow_norm
            - mu * kappa
        )
        if cfg.use_gross:
            ln_coeff += _gross_ln_weight(cfg.max_terms, l)
        ln_kernel = _kernel_ln_cached(cache, b / alpha - mu - l, inner, alpha, omega)
        return math.exp(ln_coeff + ln_kernel)

    if cfg.use_gross:
        return sum(term(l) for l in range(cfg.max_terms + 1))
    return sum_adaptive(term, rel_tol=cfg.rel_tol, max_terms=cfg.max_terms).value


def am_gamma_pdf(m: CompositeModel, r: float, cache: Optional[dict] = None) -> float:
    """Exact single-kernel form of the zero-LOS composite density.

    No series truncation is involved: the shadow average of the conditional
    density reduces to one kernel evaluation at p = b/alpha - mu,
    A = mu * r^alpha.
    """
    mp = m.multipath
    if not isinstance(mp, AmParams):
        raise DomainError("am_gamma_pdf requires the zero-LOS multipath model")
    sh = m.shadow
    if not (math.isfinite(r) and r >= 0.0):
        raise DomainError(f"r must be finite and >= 0, got {r!r}")
    if r == 0.0:
        if mp.alpha * mp.mu - 1.0 > 0.0:
            return 0.0
        raise DomainError("composite density is singular at r = 0 for these parameters")
    alpha, mu = mp.alpha, mp.mu
    b, omega = sh.b, sh.omega
    ln_coeff = (
        mu * math.log(mu)
        + (alpha * mu - 1.0) * math.log(r)
        - math.lgamma(mu)
        - math.lgamma(b)
        - b * math.log(omega)
    )
    ln_kernel = _kernel_ln_cached(cache, b / alpha - mu, mu * r**alpha, alpha, omega)
    return math.exp(ln_coeff + ln_kernel)


def extreme_gamma_pdf(
    m: CompositeModel,
    r: float,
    cfg: SeriesConfig = SeriesConfig(),
    cache: Optional[dict] = None,
) -> float:
    """Series form of the severe-fading composite density (continuous part).

    Term l couples (2m)^(2+2l) r^(alpha*(1+l)-1) e^(-2m) / (l! (l+1)!
    Gamma(b) omega^b) with the shadow kernel at p = b/alpha - 1 - l,
    A = 2m * r^alpha.  The deep-fade atom exp(-2m) rides along unchanged;
    ``extreme_gamma_density`` carries it.
    """
    mp = m.multipath
    if not isinstance(mp, ExtremeParams):
        raise DomainError("extreme_gamma_pdf requires the extreme multipath model")
    sh = m.shadow
    if not (math.isfinite(r) and r >= 0.0):
        raise DomainError(f"r must be finite and >= 0, got {r!r}")
    if r == 0.0:
        if mp.alpha > 1.0 and sh.b > 1.0:
            return 0.0
        raise DomainError("composite density is singular at r = 0 for these parameters")
    alpha, mm = mp.alpha, mp.m
    b, omega = sh.b, sh.omega
    ln_r = math.log(r)
    ln_2m = math.log(2.0 * mm)
    ln_shadow_norm = math.lgamma(b) + b * math.log(omega)
    inner = 2.0 * mm * r**alpha

    def term(l: int) -> float:
        ln_coeff = (
            (2.0 + 2.0 * l) * ln_2m
            + (alpha * (1.0 + l) - 1.0) * ln_r
            - 2.0 * mm
            - math.lgamma(l + 1.0)
            - math.lgamma(l + 2.0)
            - ln_shadow_norm
        )
        if cfg.use_gross:
            ln_coeff += _gross_ln_weight(cfg.max_terms, l)
        ln_kernel = _kernel_ln_cached(cache, b / alpha - 1.0 - l, inner, alpha, omega)
        return math.exp(ln_coeff + ln_kernel)

    if cfg.use_gross:
        return sum(term(l) for l in range(cfg.max_terms + 1))
    return sum_adaptive(term, rel_tol=cfg.rel_tol, max_terms=cfg.max_terms).value


def extreme_gamma_density(m: CompositeModel, cfg: SeriesConfig = SeriesConfig()) -> Density:
    """Full severe-fading composite distribution on the series route."""
    if not isinstance(m.multipath, ExtremeParams):
        raise DomainError("extreme_gamma_density requires the extreme multipath model")
    cache: dict = {}
    return Density(
        continuous=lambda r: extreme_gamma_pdf(m, r, cfg, cache=cache),
        atoms=((0.0, m.multipath.atom_mass),),
    )


def composite_pdf(
    m: CompositeModel,
    x: float,
    cfg: SeriesConfig = SeriesConfig(),
    *,
    oracle: bool = False,
    cache: Optional[dict] = None,
) -> float:
    """Continuous composite density at x, series/exact route by default.

    ``oracle=True`` forces the mixture-quadrature route instead.
    """
    if oracle:
        return mixture_pdf(m, x)
    if isinstance(m.multipath, AkmParams):
        return akm_gamma_pdf_series(m, x, cfg, cache=cache)
    if isinstance(m.multipath, AmParams):
        return am_gamma_pdf(m, x, cache=cache)
    return extreme_gamma_pdf(m, x, cfg, cache=cache)


def composite_density(
    m: CompositeModel,
    cfg: SeriesConfig = SeriesConfig(),
    *,
    oracle: bool = False,
) -> Density:
    """Full composite distribution with a fresh per-batch kernel cache."""
    if oracle:
        return mixture_density(m)
    atoms = ()
    if isinstance(m.multipath, ExtremeParams):
        atoms = ((0.0, m.multipath.atom_mass),)
    cache: dict = {}
    return Density(
        continuous=lambda x: composite_pdf(m, x, cfg, cache=cache),
        atoms=atoms,
    )
