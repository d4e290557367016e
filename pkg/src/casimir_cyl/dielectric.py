r"""Dielectric permittivity along the imaginary frequency axis.

Five material descriptions are supported, expressed as a tagged union of
frozen dataclasses (``PermittivityModel``):

* ``IdealMetal`` -- perfect reflector, no finite-frequency response,
* ``Drude(omega_p, gamma)`` -- :math:`\varepsilon(i\xi) = 1 +
  \omega_p^2/(\xi(\xi+\gamma))`, dissipative low-frequency continuation,
* ``PlasmaOscillators(omega_p, oscillators)`` -- dissipationless
  :math:`1 + \omega_p^2/\xi^2` plus optional core-electron oscillators
  :math:`g_j/(\omega_j^2 + \xi^2 + \gamma_j\xi)`,
* ``Dielectric(eps0)`` -- static permittivity (no dispersion in scope),
* ``Tabulated(table, tail)`` -- Im eps from measured optical data, carried to
  the imaginary axis through the dispersion integral

  .. math::
     \varepsilon(i\xi) = 1 + \frac{2}{\pi}\int_0^\infty
        \frac{\omega\,\mathrm{Im}\,\varepsilon(\omega)}{\omega^2+\xi^2}
        \,d\omega,

  with the Drude ``tail`` form below the table range (the practically
  important end), log-log interpolation inside it, and zero above it.

All energies are in eV.  Models are immutable; the tabulated model caches its
quadrature nodes at construction and is read-only afterwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .constants import HBAR_C_EV_NM

__all__ = [
    "Drude", "Oscillator", "PlasmaOscillators", "Dielectric", "IdealMetal",
    "OpticalTable", "OpticalTableError", "Tabulated", "PermittivityModel",
    "ZeroFreqIdeal", "ZeroFreqDrudeLike", "ZeroFreqPlasmaLike",
    "ZeroFreqDielectric", "ZeroFreqMixed", "ZeroFreqBehavior",
    "eps_imag_axis", "kk_transform", "zero_frequency_character",
    "load_optical_table", "gold_drude",
]


@dataclass(frozen=True)
class Drude:
    """Drude metal: plasma frequency and relaxation parameter in eV."""

    omega_p: float
    gamma: float

    def __post_init__(self) -> None:
        if self.omega_p <= 0.0 or self.gamma <= 0.0:
            raise ValueError("Drude parameters omega_p and gamma must be positive")


def gold_drude() -> Drude:
    """Default Au parameters: omega_p = 9.0 eV, gamma = 0.035 eV."""
    return Drude(omega_p=9.0, gamma=0.035)


@dataclass(frozen=True)
class Oscillator:
    """One core-electron oscillator: strength g (eV^2), resonance, width (eV)."""

    g: float
    omega: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.omega <= 0.0:
            raise ValueError("oscillator resonance energies must be nonzero")
        if self.gamma < 0.0:
            raise ValueError("oscillator widths must be nonnegative")


@dataclass(frozen=True)
class PlasmaOscillators:
    """Dissipationless plasma response plus optional oscillator terms.

    An empty oscillator list is the simple plasma model, which is the shipped
    default for the plasma approach; fitted oscillator parameters may be
    supplied through the configuration file.
    """

    omega_p: float
    oscillators: tuple[Oscillator, ...] = ()

    def __post_init__(self) -> None:
        if self.omega_p <= 0.0:
            raise ValueError("plasma frequency must be positive")
        object.__setattr__(self, "oscillators", tuple(self.oscillators))


@dataclass(frozen=True)
class Dielectric:
    """Static dielectric with permittivity eps0 > 1 at zero frequency."""

    eps0: float

    def __post_init__(self) -> None:
        if self.eps0 <= 1.0:
            raise ValueError("static permittivity must exceed 1")

    @property
    def r0(self) -> float:
        """Zero-frequency TM reflection (eps0 - 1)/(eps0 + 1)."""
        return (self.eps0 - 1.0) / (self.eps0 + 1.0)


@dataclass(frozen=True)
class IdealMetal:
    """Perfectly reflecting boundary: r_TM^2 = r_TE^2 = 1 at all frequencies."""


class OpticalTableError(ValueError):
    """Malformed optical-data input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


# sub-segment width (in ln omega) for the cached dispersion-integral nodes;
# 8-point Gauss-Legendre on segments this narrow is converged to ~1e-14
_LN_STEP = 0.02
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)
_GL4_NODES, _GL4_WEIGHTS = np.polynomial.legendre.leggauss(4)


class OpticalTable:
    """Ordered (photon energy, Im eps) samples with cached quadrature nodes.

    Parameters
    ----------
    omega : sequence of float
        Photon energies in eV, strictly ascending, at least two entries.
    im_eps : sequence of float
        Corresponding Im eps values, all positive.
    """

    def __init__(self, omega: Sequence[float], im_eps: Sequence[float]):
        w = np.asarray(omega, dtype=float)
        g = np.asarray(im_eps, dtype=float)
        if w.ndim != 1 or w.shape != g.shape or w.size < 2:
            raise OpticalTableError("need two same-length columns with at least 2 rows")
        if np.any(w <= 0.0):
            raise OpticalTableError("photon energies must be positive")
        if np.any(np.diff(w) <= 0.0):
            raise OpticalTableError("photon energies must be strictly ascending")
        if np.any(g <= 0.0):
            raise OpticalTableError("Im eps values must be positive")
        self.omega = w
        self.im_eps = g
        self.omega_min = float(w[0])
        self.omega_max = float(w[-1])
        self._build_nodes()

    def _build_nodes(self) -> None:
        # log-log power law on each table segment, split into narrow
        # sub-segments; nodes/weights frozen here, read-only afterwards
        ln_w = np.log(self.omega)
        ln_g = np.log(self.im_eps)
        fine: list[np.ndarray] = []
        coarse: list[np.ndarray] = []
        for i in range(self.omega.size - 1):
            width = ln_w[i + 1] - ln_w[i]
            slope = (ln_g[i + 1] - ln_g[i]) / width
            nsub = max(1, int(math.ceil(width / _LN_STEP)))
            edges = np.linspace(ln_w[i], ln_w[i + 1], nsub + 1)
            centers = 0.5 * (edges[:-1] + edges[1:])
            halves = 0.5 * np.diff(edges)
            for pts, wts, sink in ((_GL_NODES, _GL_WEIGHTS, fine),
                                   (_GL4_NODES, _GL4_WEIGHTS, coarse)):
                ln_pts = (centers[:, None] + halves[:, None] * pts[None, :]).ravel()
                w_pts = (halves[:, None] * wts[None, :]).ravel()
                om = np.exp(ln_pts)
                gval = np.exp(ln_g[i] + slope * (ln_pts - ln_w[i]))
                # premultiplied weight: w * omega * ImEps(omega) (log-space Jacobian)
                sink.append(np.stack([om, w_pts * om * om * gval]))
        full = np.concatenate(fine, axis=1)
        half = np.concatenate(coarse, axis=1)
        self._om, self._wt = full[0], full[1]
        self._om4, self._wt4 = half[0], half[1]

    def dispersion_integral(self, xi) -> np.ndarray:
        """In-range part of (2/pi) * integral omega ImEps / (omega^2 + xi^2)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        val = (2.0 / math.pi) * np.sum(
            self._wt[None, :] / (self._om[None, :]**2 + xi[:, None]**2), axis=1)
        return val

    def dispersion_integral_coarse(self, xi) -> np.ndarray:
        """Half-order companion of :meth:`dispersion_integral` (error probe)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        return (2.0 / math.pi) * np.sum(
            self._wt4[None, :] / (self._om4[None, :]**2 + xi[:, None]**2), axis=1)


@dataclass(frozen=True)
class Tabulated:
    """Optical-data model: table plus Drude parameters for the low-omega tail."""

    table: OpticalTable
    tail: Drude


PermittivityModel = Union[IdealMetal, Drude, PlasmaOscillators, Dielectric, Tabulated]


# ---------------------------------------------------------------------------
# zero-frequency behavior tags
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroFreqIdeal:
    """r_TM^2 = r_TE^2 = 1."""
    r_tm: float = 1.0
    r_te: float = -1.0


@dataclass(frozen=True)
class ZeroFreqDrudeLike:
    """r_TM = 1, r_TE = 0 (any dissipative low-frequency continuation)."""
    r_tm: float = 1.0
    r_te: float = 0.0


@dataclass(frozen=True)
class ZeroFreqPlasmaLike:
    """TE reflection survives at zero frequency, controlled by alpha = delta_0/(2a)."""
    alpha: float


@dataclass(frozen=True)
class ZeroFreqDielectric:
    """r_TM = r0 = (eps0 - 1)/(eps0 + 1), r_TE = 0."""
    r0: float


@dataclass(frozen=True)
class ZeroFreqMixed:
    """Metal facing a static dielectric: the high-T sum runs over r0^n, not r0^(2n)."""
    r0: float


ZeroFreqBehavior = Union[ZeroFreqIdeal, ZeroFreqDrudeLike, ZeroFreqPlasmaLike,
                         ZeroFreqDielectric, ZeroFreqMixed]


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def eps_imag_axis(model: PermittivityModel, xi):
    """Permittivity eps(i xi) for xi > 0 in eV; scalar or ndarray.

    ``IdealMetal`` and ``Dielectric`` have no finite-frequency response in
    scope and are rejected; the force engine handles them through their
    reflection-coefficient limits instead.
    """
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi <= 0.0):
        raise ValueError("xi must be positive")
    if isinstance(model, Drude):
        out = 1.0 + model.omega_p**2 / (xi * (xi + model.gamma))
    elif isinstance(model, PlasmaOscillators):
        out = 1.0 + model.omega_p**2 / xi**2
        for osc in model.oscillators:
            out = out + osc.g / (osc.omega**2 + xi**2 + osc.gamma * xi)
    elif isinstance(model, Tabulated):
        out = kk_transform(model.table, model.tail, xi)
        out = np.atleast_1d(out)
    else:
        raise ValueError(
            f"{type(model).__name__} has no finite-frequency permittivity in scope")
    return float(out[0]) if scalar else out


def _drude_tail_integral(tail: Drude, omega_hi: float, xi: np.ndarray) -> np.ndarray:
    """(2/pi) * int_0^omega_hi  omega ImEpsDrude / (omega^2 + xi^2) domega, closed form.

    ImEpsDrude(omega) = omega_p^2 gamma / (omega (omega^2 + gamma^2)).
    """
    wp2g = tail.omega_p**2 * tail.gamma
    g = tail.gamma
    out = np.empty_like(xi)
    near = np.abs(xi - g) < 1e-8 * g
    x = xi[~near]
    out[~near] = wp2g / (x**2 - g**2) * (
        math.atan(omega_hi / g) / g - np.arctan(omega_hi / x) / x)
    if np.any(near):
        # confluent xi == gamma limit: int domega/(omega^2+g^2)^2
        out[near] = wp2g * (omega_hi / (2 * g**2 * (omega_hi**2 + g**2))
                            + math.atan(omega_hi / g) / (2 * g**3))
    return (2.0 / math.pi) * out


def kk_transform(table: OpticalTable, tail: Drude, xi):
    """Dispersion integral carrying tabulated Im eps to the imaginary axis.

    Below ``table.omega_min`` the Drude ``tail`` form is integrated in closed
    form; inside the table range the cached log-log interpolation nodes are
    summed; above ``table.omega_max`` the data are taken as zero (only the
    low-frequency extrapolation matters in practice).  Relative quadrature
    error is verified against a half-order rule and kept below 1e-8.
    """
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi <= 0.0):
        raise ValueError("xi must be positive")
    low = _drude_tail_integral(tail, table.omega_min, xi)
    mid = table.dispersion_integral(xi)
    result = 1.0 + low + mid
    probe = 1.0 + low + table.dispersion_integral_coarse(xi)
    if np.any(np.abs(result - probe) > 1e-8 * np.abs(result)):
        raise OpticalTableError("dispersion integral failed its accuracy check")
    return float(result[0]) if scalar else result


def zero_frequency_character(model: PermittivityModel, a: float) -> ZeroFreqBehavior:
    """Classify the zero-frequency reflection behavior for separation a (m).

    Drude and tabulated models lose the TE channel entirely; the plasma model
    keeps it with strength set by alpha = delta_0/(2a), delta_0 = c/omega_p.
    """
    if a <= 0.0:
        raise ValueError("separation must be positive")
    if isinstance(model, IdealMetal):
        return ZeroFreqIdeal()
    if isinstance(model, (Drude, Tabulated)):
        return ZeroFreqDrudeLike()
    if isinstance(model, PlasmaOscillators):
        delta0_m = HBAR_C_EV_NM / model.omega_p * 1e-9  # skin depth c/omega_p
        return ZeroFreqPlasmaLike(alpha=delta0_m / (2.0 * a))
    if isinstance(model, Dielectric):
        return ZeroFreqDielectric(r0=model.r0)
    raise TypeError(f"unknown permittivity model {type(model).__name__}")


def load_optical_table(path) -> OpticalTable:
    """Read optical data from a text file.

    Each non-comment line is either ``omega_eV  im_eps`` or
    ``omega_eV  n  k`` (three columns; Im eps = 2 n k is formed on ingestion).
    Lines starting with ``#`` are ignored.  Rows must be ascending in omega.

    Raises
    ------
    OpticalTableError
        With the 1-based line number of the first malformed row.
    """
    omegas: list[float] = []
    ims: list[float] = []
    ncols: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise OpticalTableError(
                    f"expected 2 or 3 columns, found {len(parts)}", lineno)
            if ncols is None:
                ncols = len(parts)
            elif len(parts) != ncols:
                raise OpticalTableError(
                    f"inconsistent column count ({len(parts)} vs {ncols})", lineno)
            try:
                values = [float(p) for p in parts]
            except ValueError:
                raise OpticalTableError(f"non-numeric field in {parts!r}", lineno)
            omega = values[0]
            im = values[1] if ncols == 2 else 2.0 * values[1] * values[2]
            if omega <= 0.0:
                raise OpticalTableError("photon energy must be positive", lineno)
            if omegas and omega <= omegas[-1]:
                raise OpticalTableError("photon energies must be ascending", lineno)
            if im <= 0.0:
                raise OpticalTableError("Im eps must be positive", lineno)
            omegas.append(omega)
            ims.append(im)
    if len(omegas) < 2:
        raise OpticalTableError("need at least 2 data rows")
    return OpticalTable(omegas, ims)
