"""Acceptance criteria, one test per criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion; the printed PASS lines carry the measured values.
"""
import math
import warnings

import numpy as np
import pytest

from casimir_cyl import (Geometry, IdealMetal, PlasmaOscillators,
                         QuadratureSpec, ThermalState, TiltParams,
                         ZeroFreqDrudeLike, ZeroFreqIdeal, cylinder_force,
                         cylinder_force_gradient, fresnel, gold_drude,
                         high_temperature_force, high_temperature_gradient,
                         ideal_metal_force_t0, ideal_metal_gradient_t0, kappa,
                         kappa_nm, thermal_correction, tilted_force,
                         total_pfa_error, zero_frequency_character,
                         zero_frequency_pair, zero_temperature_force,
                         zero_temperature_gradient)
from casimir_cyl.casimir_core import PFAValidityWarning, _li_sum_zero_freq, _zero_freq_int
from casimir_cyl.constants import SQRT_PI
from casimir_cyl.dielectric import ZeroFreqDielectric
from casimir_cyl.edge import (EDGE_FORCE_COEFF, EDGE_GRADIENT_COEFF,
                              PFA_FORCE_COEFF, PFA_GRADIENT_COEFF, EdgeParams,
                              EdgeValidityWarning, edge_corrected_force,
                              overhang_force)
from casimir_cyl.reflection import DimensionlessPoint
from casimir_cyl.specfun import ZETA_3
from casimir_cyl.tilt import multiplicative_force
from conftest import geometry_at

AU = gold_drude()
PLASMA = PlasmaOscillators(omega_p=9.0)


def announce(n: int, text: str) -> None:
    print(f"\nACCEPTANCE {n} PASS: {text}")


def test_criterion_01_closed_form_oracle():
    """Ideal metal T = 0 numeric vs closed forms, 1e-8 relative."""
    worst = 0.0
    for a_nm in (100.0, 300.0, 1000.0):
        geom = geometry_at(a_nm)
        f = zero_temperature_force(geom, IdealMetal()).value
        g = zero_temperature_gradient(geom, IdealMetal()).value
        dev_f = abs(f / ideal_metal_force_t0(geom) - 1.0)
        dev_g = abs(g / ideal_metal_gradient_t0(geom) - 1.0)
        worst = max(worst, dev_f, dev_g)
        assert dev_f < 1e-8, (a_nm, dev_f)
        assert dev_g < 1e-8, (a_nm, dev_g)
    announce(1, f"T=0 ideal-metal force/gradient match closed forms "
                f"(worst relative deviation {worst:.2e} < 1e-8)")


def test_criterion_02_high_temperature_convergence():
    """tau > 30: numeric results reach the zero-frequency asymptotes."""
    geom = Geometry(a=20e-6, R=100e-6, L=100e-6)
    th = ThermalState.at(300.0, geom)
    assert th.tau > 30.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PFAValidityWarning)
        f_ideal = cylinder_force(geom, th, IdealMetal()).value
        g_ideal = cylinder_force_gradient(geom, th, IdealMetal()).value
        f_drude = cylinder_force(geom, th, AU).value
        g_drude = cylinder_force_gradient(geom, th, AU).value
    dev = [
        abs(f_ideal / high_temperature_force(geom, 300.0, ZeroFreqIdeal()) - 1.0),
        abs(g_ideal / high_temperature_gradient(geom, 300.0, ZeroFreqIdeal()) - 1.0),
        abs(f_drude / high_temperature_force(geom, 300.0, ZeroFreqDrudeLike()) - 1.0),
        abs(g_drude / high_temperature_gradient(geom, 300.0, ZeroFreqDrudeLike()) - 1.0),
    ]
    assert max(dev) < 1e-2, dev
    ratio_f = f_drude / f_ideal
    ratio_g = g_drude / g_ideal
    assert abs(ratio_f - 0.5) < 1e-3
    assert abs(ratio_g - 0.5) < 1e-3
    announce(2, f"tau = {th.tau:.1f}: asymptote deviations {max(dev):.2e} < 1%, "
                f"Drude/ideal = {ratio_f:.6f} (= 1/2 within 1e-3)")


def test_criterion_03_plasma_asymptote_slope():
    """Zero-frequency plasma term residual scales as (delta_0/a)^3."""
    quad = QuadratureSpec(rel_tol=1e-12)
    ideal_integral = 2.0 * (3.0 * SQRT_PI * ZETA_3 / 4.0)
    logs_x, logs_y = [], []
    for a_um in (1.0, 1.6, 2.5, 4.0, 5.0):
        geom = geometry_at(1000.0 * a_um)
        beh = zero_frequency_character(PLASMA, geom.a)
        i0 = _zero_freq_int(
            beh, lambda v, b: _li_sum_zero_freq(v, b, 1.5, 0.5), quad)
        bracket_num = i0 / ideal_integral
        x = 2.0 * beh.alpha  # delta_0/a
        bracket_asym = 1.0 - 2.5 * x + 8.75 * x * x
        residual = abs(bracket_num - bracket_asym)
        logs_x.append(math.log(x))
        logs_y.append(math.log(residual))
    slope, intercept = (float(c) for c in np.polyfit(logs_x, logs_y, 1))
    assert abs(slope - 3.0) < 0.3, slope
    # cubic-coefficient record: residual ~ C (delta_0/a)^3
    announce(3, f"residual log-log slope {slope:.3f} within 3 +- 0.3 "
                f"(fitted cubic coefficient C = {math.exp(intercept):.1f})")


TABLE1_KAPPA = {0.01: 1.00026, 0.05: 1.0066, 0.1: 1.0267, 0.5: 2.1176}


def test_criterion_04_kappa_bottom_row():
    """Closed-form kappa reproduces the reference row to 4 decimals."""
    for a_theta, want in TABLE1_KAPPA.items():
        assert kappa(a_theta) == pytest.approx(want, abs=5e-5), a_theta
    announce(4, "kappa(A) = {1.00026, 1.0066, 1.0267, 2.1176} to 4 decimals")


TABLE1_KAPPA_NM = {
    100.0: (1.00020, 1.0051, 1.0207, 1.7888),
    150.0: (1.00021, 1.0053, 1.0215, 1.8230),
    200.0: (1.00022, 1.0055, 1.0221, 1.8526),
    300.0: (1.00023, 1.0057, 1.0231, 1.8997),
    400.0: (1.00023, 1.0058, 1.0237, 1.9335),
    500.0: (1.00024, 1.0060, 1.0242, 1.9585),
}
TABLE1_A_THETA = (0.01, 0.05, 0.1, 0.5)


def test_criterion_05_kappa_nm_grid():
    """Nonmultiplicative grid vs reference; fallback invariants otherwise.

    The reference rows correspond to optical-data permittivities whose fit
    parameters are not part of this package's defaults; pure Drude
    reproduces the A <= 0.1 block within +-0.001 but drifts up to ~0.05 at
    A = 0.5, so the stated fallback (bracketing + monotonicity +
    multiplicative exactness) applies there.
    """
    quad = QuadratureSpec(rel_tol=1e-9)
    grid = {}
    for a_nm, refs in TABLE1_KAPPA_NM.items():
        geom = geometry_at(a_nm)
        th = ThermalState.at(300.0, geom)
        for a_theta, ref in zip(TABLE1_A_THETA, refs):
            tilt = TiltParams.from_a_theta(a_theta, geom)
            grid[(a_nm, a_theta)] = kappa_nm(geom, th, AU, tilt, quad)

    deviations = {key: abs(grid[key] - TABLE1_KAPPA_NM[key[0]][
        TABLE1_A_THETA.index(key[1])]) for key in grid}
    tol = {0.01: 1e-3, 0.05: 1e-3, 0.1: 1e-3, 0.5: 2e-2}
    failures = {k: d for k, d in deviations.items() if d > tol[k[1]]}

    # the A <= 0.1 block must match the reference outright
    small_a = {k: d for k, d in deviations.items() if k[1] <= 0.1}
    assert max(small_a.values()) <= 1e-3, small_a

    if not failures:
        announce(5, "all 24 kappa_nm grid values within tolerance of the "
                    "reference table")
        return

    # fallback: bracketing, monotonicity, and ideal-metal multiplicative
    # exactness (the ratio's residual model dependence is the known unknown)
    for (a_nm, a_theta), val in grid.items():
        assert 1.0 <= val <= kappa(a_theta) + 1e-9, (a_nm, a_theta, val)
    for a_theta in TABLE1_A_THETA:
        col = [grid[(a, a_theta)] for a in TABLE1_KAPPA_NM]
        assert all(x < y for x, y in zip(col, col[1:])), a_theta
    for a_nm in TABLE1_KAPPA_NM:
        row = [grid[(a_nm, t)] for t in TABLE1_A_THETA]
        assert all(x < y for x, y in zip(row, row[1:])), a_nm
    geom = geometry_at(100.0)
    th0 = ThermalState.at(0.0, geom)
    for a_theta in (0.1, 0.5):
        tilt = TiltParams.from_a_theta(a_theta, geom)
        exact = tilted_force(geom, th0, IdealMetal(), tilt).value
        want = kappa(a_theta) * ideal_metal_force_t0(geom)
        assert exact == pytest.approx(want, rel=1e-8)
    worst = max(failures.values())
    announce(5, f"A <= 0.1 grid within +-0.001; A = 0.5 column deviates up to "
                f"{worst:.3f} with pure Drude -> fallback invariants "
                f"(bracketing, monotonicity, ideal-metal exactness) all hold")


def _delta(geom, model, which, rel_tol):
    return 100.0 * thermal_correction(geom, model, QuadratureSpec(rel_tol),
                                      which=which)


def _extremum(model, which, a_lo_um, a_hi_um, steps, rel_tol=1e-6):
    """Grid scan plus parabolic refinement of |delta_T| (percent, um)."""
    grid = np.linspace(a_lo_um, a_hi_um, steps)
    vals = np.array([abs(_delta(geometry_at(1000.0 * a), model, which, rel_tol))
                     for a in grid])
    i = int(np.argmax(vals))
    i = min(max(i, 1), len(grid) - 2)
    x0, x1, x2 = grid[i - 1:i + 2]
    y0, y1, y2 = vals[i - 1:i + 2]
    denom = (y0 - 2.0 * y1 + y2)
    vertex = x1 if denom == 0 else x1 + 0.5 * (y0 - y2) / denom * (x1 - x0)
    peak = abs(_delta(geometry_at(1000.0 * vertex), model, which, rel_tol))
    return peak, vertex


def test_criterion_06_drude_thermal_corrections():
    """Drude delta_T at reference separations and both extrema."""
    refs = {150.0: -1.8, 200.0: -2.7, 300.0: -4.6, 500.0: -8.6, 750.0: -13.9}
    got = {}
    for a_nm, want in refs.items():
        got[a_nm] = _delta(geometry_at(a_nm), AU, "force", 1e-7)
        assert abs(got[a_nm] - want) <= 1.0, (a_nm, got[a_nm])
    peak_f, at_f = _extremum(AU, "force", 2.0, 3.2, 7)
    assert abs(peak_f - 41.6) <= 2.0, peak_f
    assert abs(at_f - 2.55) <= 0.3, at_f
    peak_g, at_g = _extremum(AU, "gradient", 3.0, 4.4, 8)
    assert abs(peak_g - 52.0) <= 2.0, peak_g
    assert abs(at_g - 3.6) <= 0.3, at_g
    announce(6, "Drude delta_T(1) = "
                + ", ".join(f"{got[a]:+.2f}%@{a:.0f}nm" for a in refs)
                + f"; extrema {peak_f:.1f}%@{at_f:.2f}um (force), "
                  f"{peak_g:.1f}%@{at_g:.2f}um (gradient)")


def test_criterion_07_plasma_micrometer_corrections():
    """Simple-plasma delta_T at the micrometer reference separations."""
    refs = {1000.0: (0.9, 0.3), 2000.0: (7.2, 0.7), 5000.0: (46.0, 3.0)}
    got = {}
    for a_nm, (want, tol) in refs.items():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PFAValidityWarning)
            got[a_nm] = _delta(geometry_at(a_nm), PLASMA, "force", 1e-7)
        assert abs(got[a_nm] - want) <= tol, (a_nm, got[a_nm])
    announce(7, "plasma delta_T(1) = "
                + ", ".join(f"{got[a]:+.2f}%@{a/1000:.0f}um" for a in refs)
                + " within stated tolerances")


def test_criterion_07_plasma_short_separation():
    """Short-separation plasma force corrections vs the reference list.

    KNOWN RED (see the decisions ledger): with the simple plasma model this
    engine gets {0.0046, 0.0087, 0.0242, 0.1024, 0.3504}% against the quoted
    {0.016, 0.024, 0.044, 0.13, 0.38}% -- a factor 3.5 at 150 nm.  The value
    here is correct for the stated model: an independent QUADPACK-based
    recomposition agrees to 5 digits, adding interband oscillators moves the
    result the wrong way, and the companion GRADIENT corrections reproduce
    the quoted {0.0014, 0.0023, 0.0046, 0.012, 0.029}% at all five points
    within their printed rounding.  Force and gradient share one
    permittivity, so no material model can satisfy both columns; the quoted
    short-separation force values are inconsistent with their own gradient
    row.  The criterion is asserted as stated rather than loosened.
    """
    short_refs = {150.0: 0.016, 200.0: 0.024, 300.0: 0.044, 500.0: 0.13,
                  750.0: 0.38}
    got = {a: _delta(geometry_at(a), PLASMA, "force", 1e-8)
           for a in short_refs}
    failures = {a: (got[a], want) for a, want in short_refs.items()
                if not (want / 2.0 <= got[a] <= want * 2.0)}
    assert not failures, (
        "short-separation plasma delta_T(1) outside factor 2 of the quoted "
        f"values: {failures}; gradient corrections at the same points DO "
        "match the quoted list, so this is a defect of the quoted force "
        "values, not of the engine (analysis in the decisions ledger)")
    announce(7, "plasma short-separation corrections within factor 2")


def test_criterion_07_supporting_gradient_column():
    """Supporting evidence: the gradient corrections DO match the reference.

    Same permittivity, same engine, same separations as the red force check
    above; the quoted gradient column is reproduced within its printed
    rounding, pinning the inconsistency to the quoted force values.
    """
    refs = {150.0: 0.0014, 200.0: 0.0023, 300.0: 0.0046, 500.0: 0.012,
            750.0: 0.029}
    got = {}
    for a_nm, want in refs.items():
        got[a_nm] = _delta(geometry_at(a_nm), PLASMA, "gradient", 1e-8)
        assert got[a_nm] == pytest.approx(want, abs=0.1 * want + 5e-5), \
            (a_nm, got[a_nm])
    announce(7, "plasma delta_T(2) short-separation column reproduced: "
                + ", ".join(f"{got[a]:.4f}%@{a:.0f}nm" for a in refs))


def test_criterion_08_edge_error_budget():
    """Total PFA+edge errors and the four coefficients."""
    assert abs(EDGE_FORCE_COEFF - 0.610) <= 1e-3
    assert abs(EDGE_GRADIENT_COEFF - 0.436) <= 1e-3
    assert abs(PFA_FORCE_COEFF - 0.2886) <= 1e-4
    assert abs(PFA_GRADIENT_COEFF - 0.2062) <= 1e-4
    printed = {(100.0, "force"): 0.07, (500.0, "force"): 0.37,
               (100.0, "gradient"): 0.05, (500.0, "gradient"): 0.26}
    got = {}
    for (a_nm, which), want in printed.items():
        got[(a_nm, which)] = 100.0 * total_pfa_error(geometry_at(a_nm), which)
        # within rounding of the last printed digit (one ulp of 0.01%)
        assert abs(got[(a_nm, which)] - want) <= 0.01, (a_nm, which)
    announce(8, "error budget "
                + ", ".join(f"{v:.3f}%~{printed[k]}% ({k[1]}@{k[0]:.0f}nm)"
                            for k, v in got.items()))


def test_criterion_09_overhang_bounds():
    """Partial-overhang extra terms stay below the quoted bounds."""
    bounds = {(25.0, 100.0): 1e-4, (25.0, 500.0): 0.05,
              (50.0, 100.0): 5e-7, (50.0, 500.0): 1.5e-4}
    got = {}
    for (L1_um, a_nm), bound in bounds.items():
        geom = geometry_at(a_nm)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EdgeValidityWarning)
            extra = abs(overhang_force(geom, EdgeParams(L1=L1_um * 1e-6,
                                                        R=geom.R))
                        / edge_corrected_force(geom) - 1.0)
        got[(L1_um, a_nm)] = 100.0 * extra
        assert got[(L1_um, a_nm)] <= bound, (L1_um, a_nm, got[(L1_um, a_nm)])
    announce(9, "overhang extras " + ", ".join(
        f"{v:.2e}%<= {bounds[k]:g}% (L1={k[0]:.0f}um,a={k[1]:.0f}nm)"
        for k, v in got.items()))


def test_criterion_10_property_suite():
    """Always-on properties across the module boundaries."""
    quad = QuadratureSpec(rel_tol=1e-8)
    # attraction sign, monotone decay, model hierarchy
    prev = None
    for a_nm in (100.0, 500.0, 2000.0, 5000.0):
        geom = geometry_at(a_nm)
        th = ThermalState.at(300.0, geom)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PFAValidityWarning)
            f_ideal = cylinder_force(geom, th, IdealMetal(), quad).value
            f_plasma = cylinder_force(geom, th, PLASMA, quad).value
            f_drude = cylinder_force(geom, th, AU, quad).value
        for f in (f_ideal, f_plasma, f_drude):
            assert f < 0.0
        assert abs(f_ideal) >= abs(f_plasma) >= abs(f_drude)
        if prev is not None:
            assert abs(f_drude) < prev
        prev = abs(f_drude)

    # polylog regime overlap
    from casimir_cyl.specfun import _expansion_noninteger, _series
    xs = np.linspace(math.exp(-0.6), math.exp(-0.4), 15)
    for s in (-0.5, 0.5):
        assert np.allclose(_series(s, xs), _expansion_noninteger(s, -np.log(xs)),
                           rtol=1e-10)

    # fresnel vs zero-frequency path
    pair_a = fresnel(DimensionlessPoint(v=1.3, zeta=0.0), 3.0)
    pair_b = zero_frequency_pair(ZeroFreqDielectric(r0=0.5), 1.3)
    assert pair_a.r_tm == pytest.approx(pair_b.r_tm, abs=1e-14)
    assert pair_a.r_te == pytest.approx(pair_b.r_te, abs=1e-14)

    # tilt reductions and multiplicative exactness
    geom = geometry_at(300.0)
    th = ThermalState.at(300.0, geom)
    tilt0 = TiltParams.from_a_theta(0.0, geom)
    assert tilted_force(geom, th, AU, tilt0, quad).value == \
        cylinder_force(geom, th, AU, quad).value
    th0 = ThermalState.at(0.0, geom)
    tilt = TiltParams.from_a_theta(0.5, geom)
    exact = tilted_force(geom, th0, IdealMetal(), tilt, quad).value
    mult = multiplicative_force(geom, th0, IdealMetal(), tilt, quad).value
    assert exact == pytest.approx(mult, rel=1e-7)

    # finite-difference gradient consistency at 1e-5 relative
    a = 400e-9
    h = a * 1e-4
    tight = QuadratureSpec(rel_tol=1e-10)

    def force_at(sep):
        g = Geometry(a=sep, R=100e-6, L=100e-6)
        return cylinder_force(g, ThermalState.at(300.0, g), AU, tight).value

    geom4 = Geometry(a=a, R=100e-6, L=100e-6)
    grad = cylinder_force_gradient(geom4, ThermalState.at(300.0, geom4), AU,
                                   tight).value
    fd = (force_at(a + h) - force_at(a - h)) / (2.0 * h)
    assert grad == pytest.approx(fd, rel=1e-5)

    # deterministic parallel-vs-serial reduction
    serial = cylinder_force(geom, th, AU, quad, workers=1).value
    parallel = cylinder_force(geom, th, AU, quad, workers=4).value
    assert serial == parallel
    announce(10, "attraction, decay, hierarchy, overlap, path consistency, "
                 "tilt reductions, FD gradient, deterministic reduction")
