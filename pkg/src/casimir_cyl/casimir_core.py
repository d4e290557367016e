r"""Matsubara summation and quadrature engine for the cylinder-plate force.

All integrands live in the dimensionless system (v, zeta, tau) with
tau = 4 pi k_B T a / (hbar c) and zeta_l = tau l; SI units enter only through
the prefactors at the result boundary.  The cylinder force per the
proximity-force approximation is

.. math::
   F(a,T) = -\frac{k_B T L}{4\sqrt{\pi}\,a^2}\sqrt{\frac{R}{2a}}
   \,{\sum_l}'\int_{\tau l}^\infty dv\, v^{3/2}
   \left[\mathrm{Li}_{1/2}(r_\mathrm{TM}^2 e^{-v})
       + \mathrm{Li}_{1/2}(r_\mathrm{TE}^2 e^{-v})\right],

its gradient carries ``v**2.5`` against ``Li_{-1/2}``, and the parallel-plate
pressure kernel is the geometric sum ``v**2 / (exp(mu) - 1)``.  The l = 0
term (half weight) routes through the zero-frequency reflection behavior of
the material model -- mandatory for Drude, whose permittivity diverges at
zero frequency.  T = 0 replaces the primed sum by a continuous integral,
evaluated as a nested double quadrature.

The Matsubara terms are independent; when ``workers > 1`` they are computed
in a thread pool but always reduced in ascending-l order, so results are
bit-identical to the serial path.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import (BOLTZMANN_J_PER_K, HBAR_C_EV_NM, HBAR_C_J_M, HBAR_J_S,
                        SPEED_OF_LIGHT_M_S, SQRT_PI)
from .dielectric import (Dielectric, IdealMetal, PermittivityModel,
                         ZeroFreqBehavior, ZeroFreqDielectric,
                         ZeroFreqDrudeLike, ZeroFreqIdeal, ZeroFreqMixed,
                         ZeroFreqPlasmaLike, eps_imag_axis,
                         zero_frequency_character)
from .quadrature import ConvergenceError, QuadratureSpec, adaptive_quad
from .reflection import log_r2_pair, zero_frequency_mu_terms
from .specfun import ZETA_3, polylog, polylog_exp_neg

__all__ = [
    "Geometry", "ThermalState", "ForceResult", "PFAValidityWarning",
    "plate_pressure", "cylinder_force", "cylinder_force_gradient",
    "zero_temperature_force", "zero_temperature_gradient",
    "high_temperature_force", "high_temperature_gradient",
    "thermal_correction", "ideal_metal_force_t0", "ideal_metal_gradient_t0",
    "matsubara_reduce", "zero_temperature_reduce",
]

# PFA error model 0.3*a/R assumes a << R
PFA_WARN_RATIO = 0.05


class PFAValidityWarning(UserWarning):
    """Separation is no longer small against the cylinder radius."""


@dataclass(frozen=True)
class Geometry:
    """Cylinder-plate configuration: separation a, radius R, length L (meters)."""

    a: float
    R: float
    L: float

    def __post_init__(self) -> None:
        if self.a <= 0.0 or self.R <= 0.0 or self.L <= 0.0:
            raise ValueError("a, R and L must all be positive")

    @property
    def pfa_warning(self) -> bool:
        """True when a/R exceeds 0.05 and the PFA error model degrades."""
        # tolerance keeps an exact-boundary ratio from warning on float noise
        return self.a / self.R > PFA_WARN_RATIO * (1.0 + 1e-12)


def _tau(temperature: float, a: float) -> float:
    return 4.0 * math.pi * BOLTZMANN_J_PER_K * temperature * a / (
        HBAR_J_S * SPEED_OF_LIGHT_M_S)


@dataclass(frozen=True)
class ThermalState:
    """Temperature paired with the derived dimensionless Matsubara scale tau."""

    temperature: float
    tau: float

    def __post_init__(self) -> None:
        if self.temperature < 0.0:
            raise ValueError("temperature must be nonnegative")
        if (self.tau == 0.0) != (self.temperature == 0.0):
            raise ValueError("tau vanishes exactly when T does")

    @classmethod
    def at(cls, temperature: float, geometry: Geometry) -> "ThermalState":
        """Build the state for a geometry, deriving tau = 4 pi k_B T a/(hbar c)."""
        return cls(temperature=temperature, tau=_tau(temperature, geometry.a))


@dataclass(frozen=True)
class ForceResult:
    """Signed result in SI units with convergence diagnostics.

    ``value`` is the total force (N, negative = attraction) or gradient
    (N/m, positive); ``per_length`` is value/L.  ``l_used`` is the last
    Matsubara index added (0 for the continuous T = 0 integral) and
    ``truncation_estimate`` is the magnitude of the last few terms relative
    to the sum, a same-order estimate of the neglected tail.
    """

    value: float
    per_length: float
    l_used: int
    truncation_estimate: float


def _check_thermal(geometry: Geometry, thermal: ThermalState) -> None:
    expected = _tau(thermal.temperature, geometry.a)
    if abs(thermal.tau - expected) > 1e-12 * max(expected, 1e-300):
        raise ValueError(
            "ThermalState.tau is inconsistent with this geometry; "
            "build it with ThermalState.at(T, geometry)")


def _warn_pfa(geometry: Geometry) -> None:
    if geometry.pfa_warning:
        warnings.warn(
            f"a/R = {geometry.a / geometry.R:.3g} exceeds {PFA_WARN_RATIO}; "
            "the proximity-force approximation degrades",
            PFAValidityWarning, stacklevel=3)


def _eps_lookup(model: PermittivityModel) -> Callable:
    """Permittivity on the imaginary axis as a function of xi (eV), vectorized.

    The ideal metal is the infinite-permittivity limit and the static
    dielectric responds with eps0 at every frequency; both bypass
    eps_imag_axis, which rejects them.
    """
    if isinstance(model, IdealMetal):
        return lambda xi: np.broadcast_to(np.inf, np.shape(xi))
    if isinstance(model, Dielectric):
        return lambda xi, e0=model.eps0: np.broadcast_to(float(e0), np.shape(xi))
    return lambda xi: eps_imag_axis(model, xi)


# ---------------------------------------------------------------------------
# integrand kernels
# ---------------------------------------------------------------------------

def _li_sum_integrand(v, zeta, eps, v_power: float, li_order: float):
    """v**p * sum over polarizations of Li_s(r^2 e^-v), via stable exponents."""
    v = np.asarray(v, dtype=float)
    ln_rtm2, ln_rte2 = log_r2_pair(v, zeta, eps)
    return v**v_power * (polylog_exp_neg(li_order, v - ln_rtm2)
                         + polylog_exp_neg(li_order, v - ln_rte2))


def _li_sum_zero_freq(v, behavior: ZeroFreqBehavior, v_power: float, li_order: float):
    v = np.asarray(v, dtype=float)
    mus = zero_frequency_mu_terms(behavior, v)
    total = polylog_exp_neg(li_order, mus[0])
    for mu in mus[1:]:
        total = total + polylog_exp_neg(li_order, mu)
    return v**v_power * total


def _pressure_integrand(v, zeta, eps):
    v = np.asarray(v, dtype=float)
    ln_rtm2, ln_rte2 = log_r2_pair(v, zeta, eps)
    return v**2 * (1.0 / np.expm1(v - ln_rtm2) + 1.0 / np.expm1(v - ln_rte2))


def _pressure_zero_freq(v, behavior: ZeroFreqBehavior):
    v = np.asarray(v, dtype=float)
    mus = zero_frequency_mu_terms(behavior, v)
    total = 1.0 / np.expm1(mus[0])
    for mu in mus[1:]:
        total = total + 1.0 / np.expm1(mu)
    return v**2 * total


# ---------------------------------------------------------------------------
# reduction drivers
# ---------------------------------------------------------------------------

def matsubara_reduce(term_integral: Callable[[int, float], float],
                     zero_integral: Callable[[], float],
                     tau: float, quad: QuadratureSpec,
                     workers: int = 1) -> tuple[float, int, float]:
    """Primed Matsubara sum: 0.5 * I(0) + sum_{l>=1} I(tau l).

    ``term_integral(l, zeta_l)`` returns the l-th v-integral.  Truncates once
    the term magnitude stays below ``rel_tol`` of the partial sum for
    ``consecutive_below`` successive l; terms are always accumulated in
    ascending l so worker count never changes the result.

    Returns
    -------
    (sum, l_used, truncation_estimate)
    """
    total = 0.5 * zero_integral()
    recent: list[float] = []
    below = 0
    l = 0

    def accumulate(term: float) -> bool:
        nonlocal total, below
        total += term
        recent.append(abs(term))
        if len(recent) > quad.consecutive_below:
            recent.pop(0)
        if abs(term) < quad.rel_tol * abs(total):
            below += 1
        else:
            below = 0
        return below >= quad.consecutive_below

    if workers <= 1:
        done = False
        while not done:
            l += 1
            if l > quad.max_terms:
                raise ConvergenceError(
                    f"Matsubara sum not converged after {quad.max_terms} terms")
            done = accumulate(term_integral(l, tau * l))
    else:
        chunk = max(4, 2 * workers)
        done = False
        with ThreadPoolExecutor(max_workers=workers) as pool:
            while not done:
                if l + 1 > quad.max_terms:
                    raise ConvergenceError(
                        f"Matsubara sum not converged after {quad.max_terms} terms")
                batch = range(l + 1, min(l + chunk, quad.max_terms) + 1)
                futures = [pool.submit(term_integral, j, tau * j) for j in batch]
                for j, fut in zip(batch, futures):
                    l = j
                    if accumulate(fut.result()):
                        done = True
                        break
    trunc = sum(recent) / abs(total) if total != 0.0 else 0.0
    return total, l, trunc


def zero_temperature_reduce(kernel, quad: QuadratureSpec,
                            span_scale: float = 1.0) -> tuple[float, float]:
    """Continuous double integral J = int_0^inf dzeta int_zeta^inf dv K(v, zeta).

    Rewritten over the unit strip as int_0^1 dt int_0^inf dv v K(v, t v); the
    inner integral is smoothed by v = w**2 so the v**(1/2)-type endpoint
    behavior of the metallic kernels costs no panels.  ``span_scale``
    stretches the integration window for kernels with slower exponential
    decay than exp(-v).

    Returns (J, relative error estimate).
    """
    span = quad.v_span() * span_scale
    w_hi = math.sqrt(span)

    def inner(t: float) -> float:
        def f(w: np.ndarray) -> np.ndarray:
            v = w * w
            return 2.0 * w * v * kernel(v, t * v)
        val, _ = adaptive_quad(f, 0.0, w_hi, rel_tol=quad.rel_tol * 0.1,
                               initial_panels=6)
        return val

    def outer(ts: np.ndarray) -> np.ndarray:
        return np.array([inner(float(t)) for t in np.atleast_1d(ts)])

    value, err = adaptive_quad(outer, 0.0, 1.0, rel_tol=quad.rel_tol,
                               initial_panels=4)
    rel = abs(err / value) if value != 0.0 else 0.0
    return value, rel


def _zero_freq_int(behavior: ZeroFreqBehavior, integrand, quad: QuadratureSpec) -> float:
    """l = 0 v-integral with the v = w**2 substitution."""
    span = quad.v_span()

    def f(w: np.ndarray) -> np.ndarray:
        v = w * w
        return 2.0 * w * integrand(v, behavior)

    val, _ = adaptive_quad(f, 0.0, math.sqrt(span), rel_tol=quad.rel_tol * 0.1)
    return val


def _finite_l_int(integrand, zeta: float, eps: float, quad: QuadratureSpec) -> float:
    span = quad.v_span()
    val, _ = adaptive_quad(lambda v: integrand(v, zeta, eps),
                           zeta, zeta + span, rel_tol=quad.rel_tol * 0.1,
                           initial_panels=4)
    return val


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def _cylinder_sum(geometry: Geometry, thermal: ThermalState,
                  model: PermittivityModel, quad: QuadratureSpec,
                  v_power: float, li_order: float,
                  workers: int) -> tuple[float, int, float]:
    a_nm = geometry.a * 1e9
    omega_c_ev = HBAR_C_EV_NM / (2.0 * a_nm)
    eps_fn = _eps_lookup(model)
    behavior = zero_frequency_character(model, geometry.a)

    def term(l: int, zeta: float) -> float:
        eps = eps_fn(zeta * omega_c_ev)
        return _finite_l_int(
            lambda v, z, e: _li_sum_integrand(v, z, e, v_power, li_order),
            zeta, eps, quad)

    def zero() -> float:
        return _zero_freq_int(
            behavior,
            lambda v, b: _li_sum_zero_freq(v, b, v_power, li_order), quad)

    return matsubara_reduce(term, zero, thermal.tau, quad, workers)


def cylinder_force(geometry: Geometry, thermal: ThermalState,
                   model: PermittivityModel,
                   quad: QuadratureSpec | None = None,
                   workers: int = 1) -> ForceResult:
    """Casimir force (N, negative) on the cylinder at temperature T.

    Dispatches to :func:`zero_temperature_force` when T = 0; otherwise runs
    the primed Matsubara sum of polylogarithm v-integrals.  Temperatures so
    low that the sum cannot truncate within ``quad.max_terms`` raise
    ConvergenceError; the T = 0 limit should be requested exactly.
    """
    quad = quad or QuadratureSpec()
    _check_thermal(geometry, thermal)
    if thermal.temperature == 0.0:
        return zero_temperature_force(geometry, model, quad)
    _warn_pfa(geometry)
    total, l_used, trunc = _cylinder_sum(geometry, thermal, model, quad,
                                         1.5, 0.5, workers)
    a, R, L = geometry.a, geometry.R, geometry.L
    pref = -(BOLTZMANN_J_PER_K * thermal.temperature * L
             / (4.0 * SQRT_PI * a**2)) * math.sqrt(R / (2.0 * a))
    value = pref * total
    return ForceResult(value, value / L, l_used, trunc)


def cylinder_force_gradient(geometry: Geometry, thermal: ThermalState,
                            model: PermittivityModel,
                            quad: QuadratureSpec | None = None,
                            workers: int = 1) -> ForceResult:
    """Force gradient dF/da (N/m, positive) at temperature T."""
    quad = quad or QuadratureSpec()
    _check_thermal(geometry, thermal)
    if thermal.temperature == 0.0:
        return zero_temperature_gradient(geometry, model, quad)
    _warn_pfa(geometry)
    total, l_used, trunc = _cylinder_sum(geometry, thermal, model, quad,
                                         2.5, -0.5, workers)
    a, R, L = geometry.a, geometry.R, geometry.L
    pref = (BOLTZMANN_J_PER_K * thermal.temperature * L
            / (4.0 * SQRT_PI * a**3)) * math.sqrt(R / (2.0 * a))
    value = pref * total
    return ForceResult(value, value / L, l_used, trunc)


def _zero_temperature_sum(geometry: Geometry, model: PermittivityModel,
                          quad: QuadratureSpec,
                          v_power: float, li_order: float) -> tuple[float, float]:
    a_nm = geometry.a * 1e9
    omega_c_ev = HBAR_C_EV_NM / (2.0 * a_nm)
    eps_fn = _eps_lookup(model)

    def kernel(v, zeta):
        eps = eps_fn(zeta * omega_c_ev)
        return _li_sum_integrand(v, zeta, eps, v_power, li_order)

    return zero_temperature_reduce(kernel, quad)


def zero_temperature_force(geometry: Geometry, model: PermittivityModel,
                           quad: QuadratureSpec | None = None) -> ForceResult:
    """T = 0 force from the continuous-frequency double integral."""
    quad = quad or QuadratureSpec()
    _warn_pfa(geometry)
    total, rel = _zero_temperature_sum(geometry, model, quad, 1.5, 0.5)
    a, R, L = geometry.a, geometry.R, geometry.L
    pref = -(HBAR_C_J_M * L / (16.0 * math.pi**1.5 * a**3)) * math.sqrt(R / (2.0 * a))
    value = pref * total
    return ForceResult(value, value / L, 0, rel)


def zero_temperature_gradient(geometry: Geometry, model: PermittivityModel,
                              quad: QuadratureSpec | None = None) -> ForceResult:
    """T = 0 force gradient from the continuous-frequency double integral."""
    quad = quad or QuadratureSpec()
    _warn_pfa(geometry)
    total, rel = _zero_temperature_sum(geometry, model, quad, 2.5, -0.5)
    a, R, L = geometry.a, geometry.R, geometry.L
    pref = (HBAR_C_J_M * L / (16.0 * math.pi**1.5 * a**4)) * math.sqrt(R / (2.0 * a))
    value = pref * total
    return ForceResult(value, value / L, 0, rel)


def plate_pressure(a: float, temperature: float, model: PermittivityModel,
                   quad: QuadratureSpec | None = None) -> float:
    """Parallel-plate Casimir pressure (Pa, negative = attractive).

    The per-strip kernel behind the PFA integrals; kept public both as the
    physical pressure and as an oracle surface (ideal metal at T = 0 must
    recover -pi^2 hbar c/(240 a^4)).
    """
    if a <= 0.0:
        raise ValueError("separation must be positive")
    if temperature < 0.0:
        raise ValueError("temperature must be nonnegative")
    quad = quad or QuadratureSpec()
    a_nm = a * 1e9
    omega_c_ev = HBAR_C_EV_NM / (2.0 * a_nm)
    eps_fn = _eps_lookup(model)
    behavior = zero_frequency_character(model, a)

    if temperature == 0.0:
        def kernel(v, zeta):
            return _pressure_integrand(v, zeta, eps_fn(zeta * omega_c_ev))
        total, _ = zero_temperature_reduce(kernel, quad)
        return -(HBAR_C_J_M / (32.0 * math.pi**2 * a**4)) * total

    def term(l: int, zeta: float) -> float:
        return _finite_l_int(_pressure_integrand, zeta, eps_fn(zeta * omega_c_ev), quad)

    def zero() -> float:
        return _zero_freq_int(behavior, _pressure_zero_freq, quad)

    tau = _tau(temperature, a)
    total, _, _ = matsubara_reduce(term, zero, tau, quad)
    return -(BOLTZMANN_J_PER_K * temperature / (8.0 * math.pi * a**3)) * total


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def ideal_metal_force_t0(geometry: Geometry) -> float:
    """Ideal-metal T = 0 force: -pi^3 hbar c L/(384 a^3) sqrt(R/2a)."""
    a, R, L = geometry.a, geometry.R, geometry.L
    return -math.pi**3 * HBAR_C_J_M * L / (384.0 * a**3) * math.sqrt(R / (2.0 * a))


def ideal_metal_gradient_t0(geometry: Geometry) -> float:
    """Ideal-metal T = 0 gradient: 7 pi^3 hbar c L/(768 a^4) sqrt(R/2a)."""
    a, R, L = geometry.a, geometry.R, geometry.L
    return 7.0 * math.pi**3 * HBAR_C_J_M * L / (768.0 * a**4) * math.sqrt(R / (2.0 * a))


def _skin_depth_ratio(behavior: ZeroFreqPlasmaLike) -> float:
    # alpha = delta_0/(2a)  ->  delta_0/a = 2 alpha
    return 2.0 * behavior.alpha


def high_temperature_force(geometry: Geometry, temperature: float,
                           behavior: ZeroFreqBehavior) -> float:
    """Closed-form high-temperature (zero-frequency) force asymptote (N).

    Ideal metal, Drude-like (exactly half the ideal value), plasma with the
    skin-depth expansion through second order, static dielectric through
    Li_3(r0^2), and the metal-dielectric cross case through Li_3(r0).
    """
    a, R, L = geometry.a, geometry.R, geometry.L
    base = -(3.0 * ZETA_3 * BOLTZMANN_J_PER_K * temperature * L
             / (16.0 * a**2)) * math.sqrt(R / (2.0 * a))
    if isinstance(behavior, ZeroFreqIdeal):
        return base
    if isinstance(behavior, ZeroFreqDrudeLike):
        return 0.5 * base
    if isinstance(behavior, ZeroFreqPlasmaLike):
        x = _skin_depth_ratio(behavior)
        if x >= 0.5:
            raise ValueError(
                f"skin-depth expansion invalid: delta_0/a = {x} >= 0.5")
        return base * (1.0 - 2.5 * x + 8.75 * x**2)
    if isinstance(behavior, ZeroFreqDielectric):
        return 0.5 * base * polylog(3.0, behavior.r0**2) / ZETA_3
    if isinstance(behavior, ZeroFreqMixed):
        return 0.5 * base * polylog(3.0, behavior.r0) / ZETA_3
    raise TypeError(f"unknown behavior {type(behavior).__name__}")


def high_temperature_gradient(geometry: Geometry, temperature: float,
                              behavior: ZeroFreqBehavior) -> float:
    """Closed-form high-temperature gradient asymptote (N/m)."""
    a, R, L = geometry.a, geometry.R, geometry.L
    base = (15.0 * ZETA_3 * BOLTZMANN_J_PER_K * temperature * L
            / (32.0 * a**3)) * math.sqrt(R / (2.0 * a))
    if isinstance(behavior, ZeroFreqIdeal):
        return base
    if isinstance(behavior, ZeroFreqDrudeLike):
        return 0.5 * base
    if isinstance(behavior, ZeroFreqPlasmaLike):
        x = _skin_depth_ratio(behavior)
        if x >= 0.5:
            raise ValueError(
                f"skin-depth expansion invalid: delta_0/a = {x} >= 0.5")
        return base * (1.0 - 3.5 * x + 15.75 * x**2)
    if isinstance(behavior, ZeroFreqDielectric):
        return 0.5 * base * polylog(3.0, behavior.r0**2) / ZETA_3
    if isinstance(behavior, ZeroFreqMixed):
        return 0.5 * base * polylog(3.0, behavior.r0) / ZETA_3
    raise TypeError(f"unknown behavior {type(behavior).__name__}")


def thermal_correction(geometry: Geometry, model: PermittivityModel,
                       quad: QuadratureSpec | None = None,
                       which: str = "force",
                       temperature: float = 300.0,
                       workers: int = 1) -> float:
    """Relative thermal correction [X(a,T) - X(a,0)] / X(a,T).

    ``which`` selects the force or its gradient; the reference temperature
    defaults to 300 K.  Negative for the Drude approach at short separations,
    positive for the plasma approach.
    """
    if which not in ("force", "gradient"):
        raise ValueError("which must be 'force' or 'gradient'")
    if temperature == 0.0:
        return 0.0
    quad = quad or QuadratureSpec()
    thermal = ThermalState.at(temperature, geometry)
    if which == "force":
        x_t = cylinder_force(geometry, thermal, model, quad, workers).value
        x_0 = zero_temperature_force(geometry, model, quad).value
    else:
        x_t = cylinder_force_gradient(geometry, thermal, model, quad, workers).value
        x_0 = zero_temperature_gradient(geometry, model, quad).value
    return (x_t - x_0) / x_t
