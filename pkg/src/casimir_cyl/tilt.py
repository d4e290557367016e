r"""Nonparallelism corrections: cylinder axis tilted by a small angle.

Averaging the strip separations over the cylinder length multiplies each
n-th Matsubara summand by ``sinh(A n v)/(A n v)`` with the tilt parameter
``A = theta L/(2a)``.  Factoring the hyperbolic sine,

.. math::
   e^{-nv}\,\frac{\sinh(A n v)}{A n v}
     = \frac{e^{-nv(1-A)} - e^{-nv(1+A)}}{2 A n v},

restores a polylogarithm structure: the n-sum of the force kernel collapses
to ``[Li_{3/2}(r^2 e^{-v(1-A)}) - Li_{3/2}(r^2 e^{-v(1+A)})]/(2Av)`` (order
1/2 for the gradient), evaluated with the same stable exponents as the
parallel case.  The multiplicative ideal-metal factor

.. math::
   \kappa(A) = \frac{1}{5A}\left[(1-A)^{-5/2} - (1+A)^{-5/2}\right]

is exact at T = 0 for perfect reflectors; the nonmultiplicative ratio
``kappa_nm = F(a,T,theta)/F(a,T)`` quantifies how far real materials at
finite temperature depart from it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .casimir_core import (ForceResult, Geometry, ThermalState, _check_thermal,
                           _eps_lookup, _warn_pfa, cylinder_force,
                           cylinder_force_gradient, matsubara_reduce,
                           zero_temperature_reduce)
from .constants import (BOLTZMANN_J_PER_K, HBAR_C_EV_NM, HBAR_C_J_M, SQRT_PI)
from .dielectric import PermittivityModel, zero_frequency_character
from .quadrature import QuadratureSpec, adaptive_quad
from .reflection import log_r2_pair, zero_frequency_mu_terms
from .specfun import polylog_exp_neg

__all__ = ["TiltParams", "kappa", "kappa_nm", "tilted_force",
           "tilted_gradient", "multiplicative_force"]


@dataclass(frozen=True)
class TiltParams:
    """Tilt angle theta (rad) with the derived parameter a_theta = theta L/(2a).

    The formulas diverge as a_theta -> 1, where the cylinder end would touch
    the plate; construction rejects a_theta >= 1.
    """

    theta: float
    a_theta: float

    def __post_init__(self) -> None:
        if self.theta < 0.0 or self.a_theta < 0.0:
            raise ValueError("tilt angle must be nonnegative")
        if self.a_theta >= 1.0:
            raise ValueError(
                f"a_theta = {self.a_theta} >= 1: cylinder end reaches the plate")

    @classmethod
    def from_angle(cls, theta: float, geometry: Geometry) -> "TiltParams":
        return cls(theta=theta, a_theta=theta * geometry.L / (2.0 * geometry.a))

    @classmethod
    def from_a_theta(cls, a_theta: float, geometry: Geometry) -> "TiltParams":
        return cls(theta=2.0 * geometry.a * a_theta / geometry.L, a_theta=a_theta)


# Taylor coefficients of kappa about A = 0 (even powers):
# kappa = 1 + (21/8) A^2 + (9009/1920) A^4 + O(A^6)
_KAPPA_A2 = 21.0 / 8.0
_KAPPA_A4 = 9009.0 / 1920.0
_KAPPA_SERIES_CUT = 1e-3


def kappa(a_theta: float) -> float:
    """Multiplicative tilt factor (1/(5A)) [(1-A)^{-5/2} - (1+A)^{-5/2}].

    Equals 1 at A = 0 (evaluated by Taylor series below A = 1e-3 to avoid
    the 0/0) and grows without bound as A -> 1.
    """
    if not 0.0 <= a_theta < 1.0:
        raise ValueError(f"a_theta must lie in [0, 1), got {a_theta}")
    if a_theta < _KAPPA_SERIES_CUT:
        a2 = a_theta * a_theta
        return 1.0 + a2 * (_KAPPA_A2 + a2 * _KAPPA_A4)
    return ((1.0 - a_theta)**-2.5 - (1.0 + a_theta)**-2.5) / (5.0 * a_theta)


def _tilt_integrand(v, zeta, eps, a_theta: float, v_power: float, li_order: float):
    """(v**p / 2A) * sum_pol [Li_s(e^{-mu-}) - Li_s(e^{-mu+})].

    mu(-/+) = v (1 -/+ A) + m0 with m0 = -ln r^2; v_power already includes
    the 1/v from the factorization (3/2 -> 1/2 for the force kernel).
    """
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    for m0 in _m0_terms(v, zeta, eps):
        out += (polylog_exp_neg(li_order, v * (1.0 - a_theta) + m0)
                - polylog_exp_neg(li_order, v * (1.0 + a_theta) + m0))
    return v**v_power / (2.0 * a_theta) * out


def _m0_terms(v, zeta, eps):
    ln_rtm2, ln_rte2 = log_r2_pair(v, zeta, eps)
    return [-ln_rtm2, -ln_rte2]


def _tilt_zero_freq(v, behavior, a_theta: float, v_power: float, li_order: float):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    for mu in zero_frequency_mu_terms(behavior, v):
        m0 = mu - v
        out += (polylog_exp_neg(li_order, v * (1.0 - a_theta) + m0)
                - polylog_exp_neg(li_order, v * (1.0 + a_theta) + m0))
    return v**v_power / (2.0 * a_theta) * out


def _tilted_sum(geometry: Geometry, thermal: ThermalState,
                model: PermittivityModel, tilt: TiltParams,
                quad: QuadratureSpec, v_power: float, li_order: float,
                workers: int) -> tuple[float, int, float]:
    A = tilt.a_theta
    a_nm = geometry.a * 1e9
    omega_c_ev = HBAR_C_EV_NM / (2.0 * a_nm)
    eps_fn = _eps_lookup(model)
    behavior = zero_frequency_character(model, geometry.a)
    span = quad.v_span() / (1.0 - A)  # tail now decays like exp(-v(1-A))

    def term(l: int, zeta: float) -> float:
        eps = eps_fn(zeta * omega_c_ev)
        val, _ = adaptive_quad(
            lambda v: _tilt_integrand(v, zeta, eps, A, v_power, li_order),
            zeta, zeta + span, rel_tol=quad.rel_tol * 0.1, initial_panels=4)
        return val

    def zero() -> float:
        val, _ = adaptive_quad(
            lambda w: 2.0 * w * _tilt_zero_freq(w * w, behavior, A, v_power, li_order),
            0.0, math.sqrt(span), rel_tol=quad.rel_tol * 0.1)
        return val

    return matsubara_reduce(term, zero, thermal.tau, quad, workers)


def _tilted_zero_temperature(geometry: Geometry, model: PermittivityModel,
                             tilt: TiltParams, quad: QuadratureSpec,
                             v_power: float, li_order: float) -> tuple[float, float]:
    A = tilt.a_theta
    a_nm = geometry.a * 1e9
    omega_c_ev = HBAR_C_EV_NM / (2.0 * a_nm)
    eps_fn = _eps_lookup(model)

    def kernel(v, zeta):
        eps = eps_fn(zeta * omega_c_ev)
        return _tilt_integrand(v, zeta, eps, A, v_power, li_order)

    # window widened for the slower exp(-v(1-A)) decay
    return zero_temperature_reduce(kernel, quad, span_scale=1.0 / (1.0 - A))


def tilted_force(geometry: Geometry, thermal: ThermalState,
                 model: PermittivityModel, tilt: TiltParams,
                 quad: QuadratureSpec | None = None,
                 workers: int = 1) -> ForceResult:
    """Casimir force with the cylinder tilted by tilt.theta (N, negative).

    theta = 0 reduces identically to :func:`cylinder_force`; the separation
    in the geometry is the mean minimum separation.
    """
    quad = quad or QuadratureSpec()
    if tilt.a_theta == 0.0:
        return cylinder_force(geometry, thermal, model, quad, workers)
    _check_thermal(geometry, thermal)
    _warn_pfa(geometry)
    a, R, L = geometry.a, geometry.R, geometry.L
    if thermal.temperature == 0.0:
        total, rel = _tilted_zero_temperature(geometry, model, tilt, quad, 0.5, 1.5)
        pref = -(HBAR_C_J_M * L / (16.0 * math.pi**1.5 * a**3)) * math.sqrt(R / (2.0 * a))
        value = pref * total
        return ForceResult(value, value / L, 0, rel)
    total, l_used, trunc = _tilted_sum(geometry, thermal, model, tilt, quad,
                                       0.5, 1.5, workers)
    pref = -(BOLTZMANN_J_PER_K * thermal.temperature * L
             / (4.0 * SQRT_PI * a**2)) * math.sqrt(R / (2.0 * a))
    value = pref * total
    return ForceResult(value, value / L, l_used, trunc)


def tilted_gradient(geometry: Geometry, thermal: ThermalState,
                    model: PermittivityModel, tilt: TiltParams,
                    quad: QuadratureSpec | None = None,
                    workers: int = 1) -> ForceResult:
    """Force gradient with tilt (N/m, positive); v**2.5 sqrt(n) kernel.

    Consistent with differentiating :func:`tilted_force` at fixed physical
    angle, i.e. through the separation dependence of a_theta.
    """
    quad = quad or QuadratureSpec()
    if tilt.a_theta == 0.0:
        return cylinder_force_gradient(geometry, thermal, model, quad, workers)
    _check_thermal(geometry, thermal)
    _warn_pfa(geometry)
    a, R, L = geometry.a, geometry.R, geometry.L
    if thermal.temperature == 0.0:
        total, rel = _tilted_zero_temperature(geometry, model, tilt, quad, 1.5, 0.5)
        pref = (HBAR_C_J_M * L / (16.0 * math.pi**1.5 * a**4)) * math.sqrt(R / (2.0 * a))
        value = pref * total
        return ForceResult(value, value / L, 0, rel)
    total, l_used, trunc = _tilted_sum(geometry, thermal, model, tilt, quad,
                                       1.5, 0.5, workers)
    pref = (BOLTZMANN_J_PER_K * thermal.temperature * L
            / (4.0 * SQRT_PI * a**3)) * math.sqrt(R / (2.0 * a))
    value = pref * total
    return ForceResult(value, value / L, l_used, trunc)


def kappa_nm(geometry: Geometry, thermal: ThermalState,
             model: PermittivityModel, tilt: TiltParams,
             quad: QuadratureSpec | None = None,
             workers: int = 1) -> float:
    """Nonmultiplicative tilt ratio tilted_force/cylinder_force (same quad)."""
    quad = quad or QuadratureSpec()
    tilted = tilted_force(geometry, thermal, model, tilt, quad, workers).value
    plain = cylinder_force(geometry, thermal, model, quad, workers).value
    return tilted / plain


def multiplicative_force(geometry: Geometry, thermal: ThermalState,
                         model: PermittivityModel, tilt: TiltParams,
                         quad: QuadratureSpec | None = None,
                         workers: int = 1) -> ForceResult:
    """Approximate tilted force kappa(a_theta) * F(a,T).

    Exact for ideal metals at T = 0; elsewhere it ignores the correlation
    between material dispersion and the tilt geometry that
    :func:`tilted_force` retains.
    """
    base = cylinder_force(geometry, thermal, model, quad, workers)
    k = kappa(tilt.a_theta)
    return ForceResult(k * base.value, k * base.per_length,
                       base.l_used, base.truncation_estimate)
