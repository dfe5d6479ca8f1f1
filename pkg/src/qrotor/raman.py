"""Stimulated-Raman couplings, Rabi dynamics, and ensemble lineshapes.

A pair of radio-frequency magnetic pulses (pump/Stokes) plus a far-detuned
optical kick pulse carrying orbital angular momentum L drives the rotor
transition m_ell = 0 -> +/- 2L.  The effective two-photon coupling factorises
into a magnetic part V_b, an optical part V_e, and the hyperfine detuning:

    V_b = g^2 mu_B^2 B_p B_s / (3 hbar Delta_hf)
    V_e = (4 alpha(w_e) / (pi L!)) * P_e L^L e^-L / (w_e^2 c)
    V   = V_e V_b / (hbar Delta_hf),      Omega_R = 2 sqrt(2) V / hbar

In the rotating-wave 3-level picture {|0>, |+2L>, |-2L>} the transfer
probability into the symmetric final state is the generalized Rabi formula

    P0(delta, Omega_R) = Omega_R^2/(Omega_R^2 + delta^2)
                         * sin^2( (tau/2) sqrt(Omega_R^2 + delta^2) ).

Rings at different heights z_j have slightly different radii, hence slightly
different rotor constants: the stack's average transfer peak is shifted and
broadened.  Several shift models are provided; the quadratic-in-j model with a
calibrated scale is the reproducible stand-in for the unspecified divergence
parameters of the trap beam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq, least_squares, minimize_scalar

from .exceptions import FitError, InvalidInputError
from .optics import BeamConfig
from .units import HBAR, C_LIGHT, MU_B, AtomSpecies

# Operational reading of "much greater than" for the detuning hierarchy.
VALIDITY_RATIO = 10.0


@dataclass(frozen=True)
class RamanConfig:
    """Pump/Stokes/kick-pulse drive parameters.

    Magnetic field amplitudes in tesla, frequencies and detunings in rad/s,
    kick power in watts, kick waist in metres, scalar polarizability at the
    kick frequency in SI (C m^2 / V), pulse duration in seconds.
    """

    B_p0: float
    B_s0: float
    omega_p: float
    omega_s: float
    Delta_hf: float
    kick_power_P_e: float
    kick_waist_w_e: float
    kick_oam_L: int
    Delta_e: float
    polarizability_at_omega_e: float
    pulse_duration_tau: float

    def __post_init__(self):
        if self.kick_oam_L < 1:
            raise InvalidInputError("kick_oam_L must be a positive integer")
        if self.kick_waist_w_e <= 0:
            raise InvalidInputError("kick_waist_w_e must be positive")
        if self.Delta_hf == 0 or self.Delta_e == 0:
            raise InvalidInputError("detunings must be nonzero")
        if self.pulse_duration_tau < 0:
            raise InvalidInputError("pulse_duration_tau must be non-negative")

    @property
    def omega_ps(self) -> float:
        return self.omega_p - self.omega_s

    def check_matching(self, beam: BeamConfig, rtol: float = 1e-6) -> None:
        """Enforce the radius-matching condition w_e sqrt(L/2) = w0 sqrt(l/2)."""
        r_kick = self.kick_waist_w_e * np.sqrt(self.kick_oam_L / 2.0)
        r_trap = beam.waist_w0 * np.sqrt(abs(beam.oam_l) / 2.0)
        if abs(r_kick - r_trap) > rtol * r_trap:
            raise InvalidInputError(
                "kick/trap radius matching violated: "
                f"w_e sqrt(L/2) = {r_kick:.6e} vs w0 sqrt(l/2) = {r_trap:.6e}"
            )

    def validity_warnings(self, omega_2L0: float | None = None) -> tuple[str, ...]:
        """Hierarchy checks |Delta_e| >> |Delta_hf| >> omega_2L0 (ratio >= 10)."""
        notes = []
        if abs(self.Delta_e) < VALIDITY_RATIO * abs(self.Delta_hf):
            notes.append(
                f"|Delta_e|/|Delta_hf| = {abs(self.Delta_e / self.Delta_hf):.3g} < {VALIDITY_RATIO:g}"
            )
        if omega_2L0 is not None and abs(self.Delta_hf) < VALIDITY_RATIO * abs(omega_2L0):
            notes.append(
                f"|Delta_hf|/omega_2L0 = {abs(self.Delta_hf / omega_2L0):.3g} < {VALIDITY_RATIO:g}"
            )
        return tuple(notes)


@dataclass(frozen=True)
class CouplingResult:
    """Effective Raman coupling chain; ``warnings`` carries validity notes."""

    V: float          # J
    V_b: float        # J
    V_e: float        # J
    Omega_R: float    # rad/s
    warnings: tuple[str, ...] = ()


def kick_peak_factor(L: int) -> float:
    """L^L e^-L / L!  evaluated in log space (stable for large L)."""
    return math.exp(L * math.log(L) - L - math.lgamma(L + 1))


def effective_coupling(
    cfg: RamanConfig, species: AtomSpecies, omega_2L0: float | None = None
) -> CouplingResult:
    """Two-photon coupling V, its factors, and the Rabi frequency 2 sqrt(2) V / hbar.

    Violated detuning hierarchies are reported in ``warnings`` rather than
    raised: a marginal hierarchy degrades the model quietly, it does not make
    the numbers meaningless.
    """
    g = species.g_factor
    v_b = (
        g**2 * MU_B**2 * cfg.B_p0 * cfg.B_s0 / (3.0 * HBAR * cfg.Delta_hf)
    )
    v_e = (
        4.0
        * cfg.polarizability_at_omega_e
        / math.pi
        * kick_peak_factor(cfg.kick_oam_L)
        * cfg.kick_power_P_e
        / (cfg.kick_waist_w_e**2 * C_LIGHT)
    )
    v = v_e * v_b / (HBAR * cfg.Delta_hf)
    omega_r = 2.0 * math.sqrt(2.0) * v / HBAR
    return CouplingResult(
        V=v, V_b=v_b, V_e=v_e, Omega_R=omega_r,
        warnings=cfg.validity_warnings(omega_2L0),
    )


def rwa_hamiltonian(delta: float, omega_r: float) -> np.ndarray:
    """3-level rotating-wave Hamiltonian over hbar on {|0>, |+2L>, |-2L>}.

    Off-diagonals Omega_R sqrt(2)/4 couple |0> to each kicked state; the
    kicked states sit at -delta.  Units: rad/s (energy / hbar).
    """
    c = omega_r * np.sqrt(2.0) / 4.0
    return np.array(
        [[0.0, c, c], [c, -delta, 0.0], [c, 0.0, -delta]], dtype=complex
    )


def transition_probability(delta, omega_r: float, tau: float):
    """Closed-form transfer probability into (|+2L> + |-2L>)/sqrt(2).

    P0 = Omega_R^2/(Omega_R^2 + delta^2) sin^2((tau/2) sqrt(Omega_R^2 + delta^2));
    peaks at 1 on resonance when tau = pi / Omega_R.
    """
    if omega_r < 0:
        raise InvalidInputError("omega_r must be non-negative")
    delta = np.asarray(delta, dtype=float)
    g2 = omega_r**2 + delta**2
    safe = np.where(g2 > 0.0, g2, 1.0)
    out = (omega_r**2 / safe) * np.sin(0.5 * tau * np.sqrt(g2)) ** 2
    return np.where(g2 > 0.0, out, 0.0)


_STATE_0 = np.array([1.0, 0.0, 0.0], dtype=complex)
_STATE_F = np.array([0.0, 1.0, 1.0], dtype=complex) / np.sqrt(2.0)


def evolve_rwa(delta: float, omega_r: float, tau: float) -> float:
    """Matrix-exponential evolution of |0> under the RWA Hamiltonian.

    Independent dynamics oracle: agrees with ``transition_probability`` to
    better than 1e-10 absolute everywhere.
    """
    u = expm(-1j * rwa_hamiltonian(delta, omega_r) * tau)
    return float(np.abs(np.vdot(_STATE_F, u @ _STATE_0)) ** 2)


def peak_fwhm(omega_r: float, tau: float | None = None) -> float:
    """Full width at half maximum of the resonance peak (root-found).

    At the pi-pulse duration the width is 1.597 Omega_R.
    """
    if omega_r <= 0:
        raise InvalidInputError("omega_r must be positive")
    if tau is None:
        tau = np.pi / omega_r
    top = float(transition_probability(0.0, omega_r, tau))
    f = lambda d: float(transition_probability(d, omega_r, tau)) - top / 2.0
    half = brentq(f, 1e-9 * omega_r, 1.2 * omega_r, xtol=1e-14 * omega_r)
    return 2.0 * half


# --------------------------------------------------------------------------
# ring-to-ring resonance shifts and the stack-averaged lineshape


@dataclass(frozen=True)
class NoShift:
    """All rings resonate together; the stack average reduces to P0."""

    def shifts(self, j, beam=None, species=None, L=None):
        return np.zeros_like(np.asarray(j, dtype=float))


@dataclass(frozen=True)
class QuadraticShift:
    """delta_j = delta + s j^2 with a free non-negative scale.

    The leading ring-radius variation grows quadratically along the stack,
    so all physically motivated shift profiles reduce to this form; the scale
    absorbs the (unpublished) effective divergence length.
    """

    scale_s: float

    def __post_init__(self):
        if self.scale_s < 0:
            raise InvalidInputError("scale_s must be non-negative")

    def shifts(self, j, beam=None, species=None, L=None):
        return self.scale_s * np.asarray(j, dtype=float) ** 2


@dataclass(frozen=True)
class PhysicalShift:
    """delta_j = delta + 4 L^2 (omega0(r_l at ring 0) - omega0(r_l at ring j)).

    Uses the beam's divergence length (``z_eff`` when set) to evaluate the
    ring radii; omega0(r) = hbar / (2 M r^2).
    """

    def shifts(self, j, beam: BeamConfig, species: AtomSpecies, L: int):
        if beam is None or species is None or L is None:
            raise InvalidInputError(
                "geometric shift models need beam, species, and kick OAM context"
            )
        j = np.asarray(j, dtype=float)
        r0 = beam.ring_radius(beam.ring_z(0))
        rj = beam.ring_radius(beam.ring_z(j))
        w0_rot = HBAR / (2.0 * species.mass * r0**2)
        wj_rot = HBAR / (2.0 * species.mass * rj**2)
        return 4.0 * L**2 * (w0_rot - wj_rot)


@dataclass(frozen=True)
class QuarticShift:
    """Divergence shift weighted by an extra j^2, growing as j^4 near the waist.

    Kept for comparison against the quadratic profile.
    """

    def shifts(self, j, beam: BeamConfig, species: AtomSpecies, L: int):
        j = np.asarray(j, dtype=float)
        return j**2 * PhysicalShift().shifts(j, beam, species, L)


SHIFT_MODELS = {
    "none": NoShift,
    "quadratic": QuadraticShift,
    "physical": PhysicalShift,
    "quartic": QuarticShift,
}


@dataclass(frozen=True)
class Lineshape:
    """Stack-averaged transfer probability sampled on a detuning grid."""

    delta_grid: np.ndarray
    probability: np.ndarray
    Omega_R: float
    j_max: int
    tau: float

    def __post_init__(self):
        d = np.asarray(self.delta_grid, dtype=float)
        if d.ndim != 1 or len(d) < 2 or np.any(np.diff(d) <= 0):
            raise InvalidInputError("delta_grid must be strictly increasing")
        p = np.asarray(self.probability, dtype=float)
        if np.any(p < -1e-12) or np.any(p > 1.0 + 1e-12):
            raise InvalidInputError("probabilities must lie in [0, 1]")


def stack_average(delta, omega_r: float, tau: float, ring_shifts) -> np.ndarray:
    """Mean of P0(delta + shift_j) over the ring stack."""
    d = np.asarray(delta, dtype=float)[..., None] + np.asarray(ring_shifts, dtype=float)
    return transition_probability(d, omega_r, tau).mean(axis=-1)


def lineshape_from_rabi(
    omega_r: float,
    tau: float,
    j_max: int,
    shift_model,
    delta_grid,
    beam: BeamConfig | None = None,
    species: AtomSpecies | None = None,
    kick_oam_L: int | None = None,
) -> Lineshape:
    """Ensemble lineshape for a directly specified Rabi frequency.

    The stack holds N = 2 j_max + 1 singly occupied rings, |j| <= j_max.
    """
    if j_max < 0:
        raise InvalidInputError("j_max must be non-negative")
    j = np.arange(-j_max, j_max + 1)
    shifts = shift_model.shifts(j, beam, species, kick_oam_L)
    prob = stack_average(delta_grid, omega_r, tau, shifts)
    return Lineshape(
        delta_grid=np.asarray(delta_grid, dtype=float),
        probability=prob,
        Omega_R=omega_r,
        j_max=j_max,
        tau=tau,
    )


def ensemble_lineshape(
    beam: BeamConfig,
    species: AtomSpecies,
    cfg: RamanConfig,
    j_max: int,
    shift_model,
    delta_grid,
) -> Lineshape:
    """Ensemble lineshape with the Rabi frequency derived from the drive config."""
    cfg.check_matching(beam)
    coupling = effective_coupling(cfg, species)
    return lineshape_from_rabi(
        coupling.Omega_R,
        cfg.pulse_duration_tau,
        j_max,
        shift_model,
        delta_grid,
        beam=beam,
        species=species,
        kick_oam_L=cfg.kick_oam_L,
    )


def lineshape_peak(
    omega_r: float, tau: float, j_max: int, shift_model,
    beam=None, species=None, kick_oam_L=None,
    search_span: float = 5.0, scan_points: int = 4001,
):
    """Continuous peak (delta_max, P_max) of the stack-averaged lineshape.

    Scans [-search_span, +1] Omega_R, then refines the best grid point with a
    bounded scalar minimiser.
    """
    j = np.arange(-j_max, j_max + 1)
    shifts = shift_model.shifts(j, beam, species, kick_oam_L)
    xs = np.linspace(-search_span * omega_r, 1.0 * omega_r, scan_points)
    ys = stack_average(xs, omega_r, tau, shifts)
    i = int(np.argmax(ys))
    lo = xs[max(i - 2, 0)]
    hi = xs[min(i + 2, len(xs) - 1)]
    res = minimize_scalar(
        lambda d: -float(stack_average(d, omega_r, tau, shifts)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12 * omega_r},
    )
    return float(res.x), float(-res.fun)


@dataclass(frozen=True)
class CalibrationResult:
    scale_s: float
    delta_max: float
    target_delta_max: float
    on_target: bool


def calibrate_quadratic_scale(
    omega_r: float,
    tau: float,
    j_max: int,
    target_delta_max: float,
    s_max: float | None = None,
) -> CalibrationResult:
    """Choose the quadratic shift scale that places the lineshape peak.

    Root-finds delta_max(s) = target on the rising branch.  The peak location
    saturates as the broadening grows, so targets beyond the extremum are
    unattainable; in that case the extremal s (closest approach) is returned
    with ``on_target = False``.
    """
    if target_delta_max >= 0:
        raise InvalidInputError("target_delta_max must be negative for s >= 0 shifts")
    if s_max is None:
        # peak saturation happens near s j_max^2 ~ 2 Omega_R
        s_max = 3.0 * omega_r / max(j_max, 1) ** 2

    def dmax(s):
        return lineshape_peak(omega_r, tau, j_max, QuadraticShift(s))[0]

    extremum = minimize_scalar(
        dmax, bounds=(1e-6 * s_max, s_max), method="bounded",
        options={"xatol": 1e-10 * s_max},
    )
    s_ext, d_ext = float(extremum.x), float(extremum.fun)
    if target_delta_max >= d_ext:
        f = lambda s: dmax(s) - target_delta_max
        s_star = brentq(f, 1e-9 * s_max, s_ext, xtol=1e-16, rtol=1e-13)
        return CalibrationResult(float(s_star), float(dmax(s_star)), target_delta_max, True)
    return CalibrationResult(s_ext, d_ext, target_delta_max, False)


# --------------------------------------------------------------------------
# three-parameter fit of the broadened peak


@dataclass(frozen=True)
class FitResult:
    amplitude_A: float
    delta_0: float
    Omega_R_eff: float
    rms_residual: float


def fit_model(delta, amplitude, delta_0, omega_eff):
    """A * P0(delta - delta_0, Omega_eff) with the pi-pulse width convention.

    The trial profile is evaluated at its own pi-pulse duration pi/Omega_eff,
    so its on-resonance value is exactly A; with the physical pulse duration
    held fixed the reference fit constants are not reproducible (any trial
    width away from Omega_R then caps the model below its own amplitude).
    """
    x = np.asarray(delta, dtype=float) - delta_0
    return amplitude * transition_probability(x, omega_eff, np.pi / omega_eff)


def _fit_jacobian(delta, amplitude, delta_0, omega_eff):
    x = np.asarray(delta, dtype=float) - delta_0
    g2 = omega_eff**2 + x**2
    g = np.sqrt(g2)
    u = 0.5 * (np.pi / omega_eff) * g
    sin_u, cos_u = np.sin(u), np.cos(u)
    f = omega_eff**2 / g2 * sin_u**2
    df_dx = (
        -2.0 * x * omega_eff**2 / g2**2 * sin_u**2
        + omega_eff**2 / g2 * 2.0 * sin_u * cos_u * (0.5 * np.pi / omega_eff) * x / g
    )
    du_dom = -0.5 * np.pi * x**2 / (omega_eff**2 * g)
    df_dom = 2.0 * omega_eff * x**2 / g2**2 * sin_u**2 + (
        omega_eff**2 / g2
    ) * 2.0 * sin_u * cos_u * du_dom
    jac = np.empty((len(x), 3))
    jac[:, 0] = f
    jac[:, 1] = -amplitude * df_dx
    jac[:, 2] = amplitude * df_dom
    return jac


def fit_lineshape(ls: Lineshape) -> FitResult:
    """Least-squares fit of A * P0(delta - delta_0, Omega_eff) to the lineshape.

    Damped Gauss-Newton (trust-region least squares) with the analytic
    Jacobian, multi-started over width guesses {1, 1.5, 2} Omega_R because the
    sin^2 sidelobes create secondary minima.  Requires the grid to span at
    least +/- 4 Omega_R around the peak with >= 50 points.
    """
    delta = ls.delta_grid
    y = ls.probability
    peak = float(delta[int(np.argmax(y))])
    span = 4.0 * ls.Omega_R
    if len(delta) < 50 or delta[0] > peak - span or delta[-1] < peak + span:
        raise InvalidInputError(
            "lineshape grid must span at least +/- 4 Omega_R around its peak "
            "with at least 50 points"
        )

    def residual(p):
        return fit_model(delta, *p) - y

    def jacobian(p):
        return _fit_jacobian(delta, *p)

    y_max = float(y.max())
    lower = [1e-9, peak - 3.0 * ls.Omega_R, 0.2 * ls.Omega_R]
    upper = [1.5, peak + 3.0 * ls.Omega_R, 5.0 * ls.Omega_R]
    best = None
    for guess in (1.0, 1.5, 2.0):
        start = [min(max(y_max, lower[0]), upper[0]), peak, guess * ls.Omega_R]
        res = least_squares(
            residual, start, jac=jacobian, method="trf",
            bounds=(lower, upper), xtol=1e-15, ftol=1e-15, gtol=1e-15,
            max_nfev=2000,
        )
        if best is None or res.cost < best.cost:
            best = res
    rms = float(np.sqrt(np.mean(residual(best.x) ** 2)))
    result = FitResult(
        amplitude_A=float(best.x[0]),
        delta_0=float(best.x[1]),
        Omega_R_eff=float(best.x[2]),
        rms_residual=rms,
    )
    if not best.success:
        raise FitError("lineshape fit did not converge", best=result)
    return result
