import numpy as np
import pytest

from qrotor.exceptions import InvalidInputError
from qrotor.raman import (
    Lineshape,
    NoShift,
    PhysicalShift,
    QuadraticShift,
    calibrate_quadratic_scale,
    fit_lineshape,
    fit_model,
    lineshape_from_rabi,
    lineshape_peak,
    transition_probability,
)
from qrotor.units import LI6

OMEGA_R = 3.142
TAU = np.pi / OMEGA_R
GRID = np.linspace(-8 * OMEGA_R, 8 * OMEGA_R, 801)


def test_single_ring_reduces_to_single_qr():
    ls = lineshape_from_rabi(OMEGA_R, TAU, 0, QuadraticShift(1.0), GRID)
    assert np.allclose(ls.probability, transition_probability(GRID, OMEGA_R, TAU),
                       rtol=1e-14)


def test_zero_shift_model_reduces_to_single_qr():
    ls = lineshape_from_rabi(OMEGA_R, TAU, 80, NoShift(), GRID)
    assert np.allclose(ls.probability, transition_probability(GRID, OMEGA_R, TAU),
                       rtol=1e-14)


def test_ensemble_is_mean_of_rings():
    s = 1.0e-3
    ls = lineshape_from_rabi(OMEGA_R, TAU, 10, QuadraticShift(s), GRID)
    j = np.arange(-10, 11)
    manual = np.mean(
        [transition_probability(GRID + s * jj**2, OMEGA_R, TAU) for jj in j], axis=0
    )
    assert np.allclose(ls.probability, manual, rtol=1e-13)
    assert np.all(ls.probability >= 0.0)
    assert np.all(ls.probability <= 1.0)


def test_skew_matches_shift_sign():
    # positive quadratic shifts push ring resonances to negative detuning:
    # the left flank of the ensemble peak carries the extra weight
    s = 1.0e-3
    d_max, _ = lineshape_peak(OMEGA_R, TAU, 80, QuadraticShift(s))
    assert d_max < 0.0
    j = np.arange(-80, 81)
    shifts = s * j**2

    def p(d):
        return float(np.mean(transition_probability(d + shifts, OMEGA_R, TAU)))

    off = 1.5 * OMEGA_R
    assert p(d_max - off) > p(d_max + off)


def test_broadening_monotone_in_scale():
    widths = []
    for s in (4e-4, 7e-4, 1.0e-3, 1.3e-3):
        ls = lineshape_from_rabi(OMEGA_R, TAU, 80, QuadraticShift(s),
                                 np.linspace(-8 * OMEGA_R, 8 * OMEGA_R, 1601))
        widths.append(fit_lineshape(ls).Omega_R_eff)
    assert all(b >= a for a, b in zip(widths, widths[1:]))


def test_self_fit_recovers_exact_parameters():
    ls = lineshape_from_rabi(OMEGA_R, TAU, 0, NoShift(), GRID)
    fit = fit_lineshape(ls)
    assert fit.amplitude_A == pytest.approx(1.0, abs=1e-6)
    assert fit.delta_0 == pytest.approx(0.0, abs=1e-6 * OMEGA_R)
    assert fit.Omega_R_eff == pytest.approx(OMEGA_R, rel=1e-6)
    assert fit.rms_residual < 1e-8


def test_fit_requires_wide_grid():
    narrow = np.linspace(-2 * OMEGA_R, 2 * OMEGA_R, 401)
    ls = lineshape_from_rabi(OMEGA_R, TAU, 0, NoShift(), narrow)
    with pytest.raises(InvalidInputError):
        fit_lineshape(ls)


def test_fit_model_peaks_at_amplitude():
    # pi-pulse convention: the trial profile's own resonance value equals A
    assert fit_model(0.5, 0.7, 0.5, 1.3 * OMEGA_R) == pytest.approx(0.7, abs=1e-12)


def test_calibration_reaches_moderate_targets():
    target = -0.30 * OMEGA_R
    cal = calibrate_quadratic_scale(OMEGA_R, TAU, 80, target)
    assert cal.on_target
    assert cal.delta_max == pytest.approx(target, rel=1e-6)
    d_check, _ = lineshape_peak(OMEGA_R, TAU, 80, QuadraticShift(cal.scale_s))
    assert d_check == pytest.approx(target, rel=1e-6)


def test_calibration_saturates_at_family_extremum():
    # the peak location cannot be pushed past about -0.532 Omega_R; the
    # -0.5374 reference target lands on the closest-approach branch
    cal = calibrate_quadratic_scale(OMEGA_R, TAU, 80, -0.5374 * OMEGA_R)
    assert not cal.on_target
    assert cal.delta_max / OMEGA_R == pytest.approx(-0.5319, abs=2e-3)


def test_shift_models_need_geometry_only_when_physical(fig_beam):
    j = np.arange(-5, 6)
    quad = QuadraticShift(1e-3).shifts(j)
    assert quad[0] == quad[-1] == 1e-3 * 25

    phys = PhysicalShift().shifts(j, fig_beam, LI6, 25)
    assert phys[len(j) // 2] == 0.0  # ring 0 defines the reference
    # rings sit at z = (j + 1/2) lambda/2 for z0 = lambda/4, so to leading
    # order shift_j ~ (j + 1/2)^2 - 1/4: the j=5 to j=1 ratio is 15
    eta = 2 * fig_beam.phase_z0 / fig_beam.wavelength
    expected = ((5 + eta) ** 2 - eta**2) / ((1 + eta) ** 2 - eta**2)
    assert phys[-1] / phys[len(j) // 2 + 1] == pytest.approx(expected, rel=1e-3)


def test_broadened_fit_center_differs_from_peak():
    # the broadened curve is asymmetric: the least-squares center d0 sits
    # measurably deeper than the true maximum
    s = 1.05e-3
    d_max, _ = lineshape_peak(OMEGA_R, TAU, 80, QuadraticShift(s))
    ls = lineshape_from_rabi(OMEGA_R, TAU, 80, QuadraticShift(s),
                             np.linspace(-8 * OMEGA_R, 8 * OMEGA_R, 1601))
    fit = fit_lineshape(ls)
    assert abs(fit.delta_0 - d_max) > 0.05 * OMEGA_R
    assert fit.delta_0 < d_max < 0.0


def test_ensemble_wrapper_enforces_matching_and_derives_rabi(fig_beam):
    from test_raman import make_raman
    from qrotor.raman import effective_coupling, ensemble_lineshape

    cfg = make_raman()  # w_e = w0 sqrt(l/L): matched to the trap ring
    grid = np.linspace(-8 * 3.142, 8 * 3.142, 201)
    ls = ensemble_lineshape(fig_beam, LI6, cfg, 5, NoShift(), grid)
    omega_r = effective_coupling(cfg, LI6).Omega_R
    direct = lineshape_from_rabi(omega_r, cfg.pulse_duration_tau, 5, NoShift(), grid)
    assert np.allclose(ls.probability, direct.probability, rtol=1e-14)
    assert ls.Omega_R == pytest.approx(omega_r, rel=1e-14)

    import dataclasses

    mismatched = dataclasses.replace(cfg, kick_waist_w_e=cfg.kick_waist_w_e * 1.01)
    with pytest.raises(InvalidInputError):
        ensemble_lineshape(fig_beam, LI6, mismatched, 5, NoShift(), grid)


def test_lineshape_grid_validation():
    with pytest.raises(InvalidInputError):
        Lineshape(delta_grid=np.array([1.0, 0.5]), probability=np.array([0.1, 0.2]),
                  Omega_R=1.0, j_max=0, tau=1.0)
    with pytest.raises(InvalidInputError):
        Lineshape(delta_grid=np.array([0.0, 1.0]), probability=np.array([0.1, 1.7]),
                  Omega_R=1.0, j_max=0, tau=1.0)
