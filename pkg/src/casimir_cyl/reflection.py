r"""TM/TE reflection coefficients in the dimensionless variables (v, zeta).

With :math:`s = \sqrt{v^2 + (\varepsilon-1)\zeta^2}`,

.. math::
   r_\mathrm{TM} = \frac{\varepsilon v - s}{\varepsilon v + s}, \qquad
   r_\mathrm{TE} = \frac{v - s}{v + s},

where v = 2 q a >= zeta = xi/omega_c and eps = eps(i xi).  The engine never
needs the coefficients themselves but the exponents ``mu = v - ln r**2`` of
the polylogarithm arguments; those are formed cancellation-free in
:func:`log_r2_pair` (Drude permittivities reach ~1e6 at the first Matsubara
frequency of micrometer separations, where the naive difference
``eps*v - s`` would shed digits).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dielectric import (ZeroFreqBehavior, ZeroFreqDielectric, ZeroFreqDrudeLike,
                         ZeroFreqIdeal, ZeroFreqMixed, ZeroFreqPlasmaLike)

__all__ = ["DimensionlessPoint", "ReflectionPair", "fresnel",
           "zero_frequency_pair", "log_r2_pair", "zero_frequency_mu_terms"]


@dataclass(frozen=True)
class DimensionlessPoint:
    """Integration point: v = 2 q a and the scaled Matsubara frequency zeta."""

    v: float
    zeta: float

    def __post_init__(self) -> None:
        if not (self.v >= self.zeta >= 0.0):
            raise ValueError(f"need v >= zeta >= 0, got v={self.v}, zeta={self.zeta}")


@dataclass(frozen=True)
class ReflectionPair:
    """TM and TE amplitudes; for eps >= 1 these satisfy 1 >= r_tm >= 0 >= r_te >= -1."""

    r_tm: float
    r_te: float

    def __post_init__(self) -> None:
        if not (abs(self.r_tm) <= 1.0 and abs(self.r_te) <= 1.0):
            raise ValueError("reflection coefficients must lie in [-1, 1]")


def fresnel(point: DimensionlessPoint, eps_l: float) -> ReflectionPair:
    """Reflection pair at a dimensionless point for permittivity eps_l >= 1."""
    if eps_l < 1.0:
        raise ValueError(f"permittivity below 1 not supported, got {eps_l}")
    v, zeta = point.v, point.zeta
    # factor s = v*sqrt(1 + (eps-1) zeta^2/v^2): no overflow for eps ~ 1e6
    s = v * math.sqrt(1.0 + (eps_l - 1.0) * (zeta / v) ** 2) if v > 0 else 0.0
    if v == 0.0:
        return ReflectionPair(0.0, 0.0)
    r_tm = (eps_l * v - s) / (eps_l * v + s)
    r_te = -(eps_l - 1.0) * zeta**2 / (v + s) ** 2  # = (v-s)/(v+s), stable form
    return ReflectionPair(r_tm, r_te)


def zero_frequency_pair(behavior: ZeroFreqBehavior, v: float) -> ReflectionPair:
    """Zero-frequency reflection pair for dimensionless v > 0.

    Ideal metal: (1, -1).  Drude-like: (1, 0).  Static dielectric: (r0, 0).
    Plasma-like keeps a TE amplitude ``-(alpha v - sqrt(alpha^2 v^2 + 1))^2``
    running from -1 at v = 0 to 0 as alpha*v grows.
    """
    if v <= 0.0:
        raise ValueError("v must be positive")
    if isinstance(behavior, ZeroFreqIdeal):
        return ReflectionPair(1.0, -1.0)
    if isinstance(behavior, (ZeroFreqDrudeLike,)):
        return ReflectionPair(1.0, 0.0)
    if isinstance(behavior, (ZeroFreqDielectric, ZeroFreqMixed)):
        return ReflectionPair(behavior.r0, 0.0)
    if isinstance(behavior, ZeroFreqPlasmaLike):
        av = behavior.alpha * v
        r_te = -(math.sqrt(av * av + 1.0) - av) ** 2
        return ReflectionPair(1.0, r_te)
    raise TypeError(f"unknown zero-frequency behavior {type(behavior).__name__}")


# ---------------------------------------------------------------------------
# stable exponent forms used by the integration kernels
# ---------------------------------------------------------------------------

def log_r2_pair(v, zeta, eps):
    """Return (ln r_TM^2, ln r_TE^2) for broadcastable ndarray arguments.

    Uses log1p of the exact complements 1 - r = 2s/(eps v + s) and
    1 - |r_TE| = 2v/(v + s); eps may be +inf (ideal metal limit, ln r^2 = 0).
    """
    v = np.asarray(v, dtype=float)
    eps = np.asarray(eps, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    shape = np.broadcast_shapes(v.shape, eps.shape, zeta.shape)
    if np.all(np.isinf(eps)):
        zero = np.zeros(shape)
        return zero, zero.copy()
    s = np.sqrt(v * v + (eps - 1.0) * zeta * zeta)
    ln_rtm2 = 2.0 * np.log1p(-2.0 * s / (eps * v + s))
    ln_rte2 = 2.0 * np.log1p(-2.0 * v / (v + s))
    return ln_rtm2, ln_rte2


def zero_frequency_mu_terms(behavior: ZeroFreqBehavior, v: np.ndarray) -> list[np.ndarray]:
    """Exponents mu = v - ln r^2 of the surviving zero-frequency channels.

    One array per polarization that contributes to the l = 0 term; the plasma
    TE exponent uses the identity ln(sqrt(1+x^2) - x) = -asinh(x) to stay
    exact for alpha*v anywhere from 0 to overflow.  ``ZeroFreqMixed`` encodes
    the metal-dielectric cross term whose series runs over r0^n, i.e. a
    single channel with mu = v - ln r0.
    """
    v = np.asarray(v, dtype=float)
    if isinstance(behavior, ZeroFreqIdeal):
        return [v, v.copy()]
    if isinstance(behavior, ZeroFreqDrudeLike):
        return [v]
    if isinstance(behavior, ZeroFreqPlasmaLike):
        return [v, v + 4.0 * np.arcsinh(behavior.alpha * v)]
    if isinstance(behavior, ZeroFreqDielectric):
        return [v - 2.0 * math.log(behavior.r0)]
    if isinstance(behavior, ZeroFreqMixed):
        return [v - math.log(behavior.r0)]
    raise TypeError(f"unknown zero-frequency behavior {type(behavior).__name__}")
