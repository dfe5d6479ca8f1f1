"""Five-level Raman ladder and its reduction to the effective two-level drive.

Basis (all rotor states share n_z = n_r = 0):

    |0>  lower hyperfine manifold, m_ell = 0
    |1>  lower hyperfine manifold, symmetric (|+2L> + |-2L>)/sqrt(2)
    |2>  upper hyperfine manifold, m_ell = 0          (frame rotating at w_p)
    |3>  upper hyperfine manifold, symmetric kicked   (frame rotating at w_p)
    |4>  electronically excited, symmetric (|+L> + |-L>)/sqrt(2)
                                                      (frame rotating at w_e)

In this frame the diagonal is (0, eps_2L, hbar Dhf, hbar Dhf + eps_2L,
hbar De); the pump magnetic coupling is static, the Stokes coupling rotates at
w_ps = w_p - w_s, and the kick-pulse dipole couplings are static.  Eliminating
the far-detuned |2>, |3> (magnetic dressing) and |4> (optical dressing) leaves
a two-level system whose off-diagonal carries a static Stark part plus a
cos(w_ps t) Raman drive.

Coupling normalisation: the electric elements are (g0, g1) = (sqrt(2) g, g)
with g = sqrt(V_e hbar |De|) so that the kick-pulse Stark scale is V_e and the
sqrt(2) reflects the two OAM paths feeding the m_ell = 0 state; the magnetic
elements carry the explicit 2 m_F factor, normalised so |m_F| = 1/2 matches
the effective 1/3 spin factor of the coupling chain.  With these choices the
ladder's fourth-order Raman amplitude closes exactly onto
Omega_R = 2 sqrt(2) V / hbar, which the time integration verifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import eigh, expm
from scipy.optimize import curve_fit

from .exceptions import InvalidInputError, ValidityError
from .raman import RamanConfig, kick_peak_factor
from .units import HBAR, C_LIGHT, MU_B, AtomSpecies

# |v_b|, |v_e| beyond this make the perturbative elimination meaningless.
_PERTURBATIVE_LIMIT = 0.3


def kick_stark_scale(cfg: RamanConfig) -> float:
    """V_e = (4 alpha / (pi L!)) P_e L^L e^-L / (w_e^2 c), the optical factor."""
    return (
        4.0
        * cfg.polarizability_at_omega_e
        / math.pi
        * kick_peak_factor(cfg.kick_oam_L)
        * cfg.kick_power_P_e
        / (cfg.kick_waist_w_e**2 * C_LIGHT)
    )


@dataclass(frozen=True)
class FiveLevelModel:
    """Time-dependent 5x5 ladder Hamiltonian description."""

    cfg: RamanConfig
    species: AtomSpecies
    omega_2L0: float       # rotor transition frequency eps_2L / hbar (rad/s)
    m_F: float = 0.5
    omega_ps: float | None = None   # drive frequency; defaults to cfg.omega_ps

    @property
    def drive_frequency(self) -> float:
        return self.cfg.omega_ps if self.omega_ps is None else self.omega_ps

    @property
    def magnetic_couplings(self) -> tuple[float, float]:
        """(w_p, w_s) in joules, carrying the explicit 2 m_F spin factor."""
        scale = 2.0 * self.m_F * self.species.g_factor * MU_B / math.sqrt(3.0)
        return scale * self.cfg.B_p0, scale * self.cfg.B_s0

    @property
    def electric_couplings(self) -> tuple[float, float]:
        """(g0, g1) in joules; g0/g1 = sqrt(2) from the two OAM paths."""
        g1 = math.sqrt(abs(kick_stark_scale(self.cfg)) * HBAR * abs(self.cfg.Delta_e))
        return math.sqrt(2.0) * g1, g1

    def static_hamiltonian(self) -> np.ndarray:
        """All time-independent terms (diagonal, pump, kick couplings), in J."""
        w_p, _ = self.magnetic_couplings
        g0, g1 = self.electric_couplings
        h = np.zeros((5, 5), dtype=complex)
        h[1, 1] = HBAR * self.omega_2L0
        h[2, 2] = HBAR * self.cfg.Delta_hf
        h[3, 3] = HBAR * (self.cfg.Delta_hf + self.omega_2L0)
        h[4, 4] = HBAR * self.cfg.Delta_e
        for i, j, v in ((0, 2, w_p), (1, 3, w_p), (0, 4, g0), (1, 4, g1)):
            h[i, j] += v
            h[j, i] += np.conj(v)
        return h

    def hamiltonian(self, t: float) -> np.ndarray:
        """Instantaneous Hamiltonian (J): static part plus the Stokes tone."""
        _, w_s = self.magnetic_couplings
        h = self.static_hamiltonian()
        tone = w_s * np.exp(-1j * self.drive_frequency * t)
        for i, j in ((0, 2), (1, 3)):
            h[i, j] += tone
            h[j, i] += np.conj(tone)
        return h

    def perturbative_ratios(self) -> tuple[float, float]:
        """(|v_b|, |v_e|): magnetic and optical dressing amplitudes."""
        w_p, w_s = self.magnetic_couplings
        v_b = max(abs(w_p), abs(w_s)) / abs(HBAR * self.cfg.Delta_hf)
        _, g1 = self.electric_couplings
        v_e = g1 / abs(HBAR * self.cfg.Delta_e)
        return v_b, v_e


def raman_resonance(model: FiveLevelModel, iterations: int = 4) -> float:
    """Drive frequency matching the dressed |0> -> |1> splitting.

    Diagonalises the static Hamiltonian (pump and kick dressing included
    exactly), then iterates the Stokes-tone differential light shift
    w_s^2 [1/(E2'-E0'-w) - 1/(E3'-E1'-w)], which is first order in the drive
    intensity and does not cancel between the two legs because the kick-pulse
    Stark shifts detune them differently.
    """
    vals, vecs = eigh(model.static_hamiltonian())
    idx = [int(np.argmax(np.abs(vecs[i, :]))) for i in range(4)]
    e0, e1, e2, e3 = (vals[idx[i]] for i in range(4))
    _, w_s = model.magnetic_couplings
    omega = (e1 - e0) / HBAR
    for _ in range(iterations):
        d02 = e2 - e0 - HBAR * omega
        d13 = e3 - e1 - HBAR * omega
        omega = (e1 - e0) / HBAR + w_s**2 * (1.0 / d02 - 1.0 / d13) / HBAR
    return float(omega)


def evolve_populations(
    model: FiveLevelModel, n_periods: int, steps_per_period: int = 512
):
    """Populations of all five states sampled once per drive period.

    The Hamiltonian is periodic at the drive frequency, so one period's
    propagator is built by midpoint-exponential stepping (exact for the static
    part at any detuning scale; the step only has to resolve the slow drive
    phase) and then powered through its eigendecomposition.  Returns
    ``(times, populations)`` with populations of shape (n_periods + 1, 5).
    """
    if n_periods < 1 or steps_per_period < 8:
        raise InvalidInputError("need n_periods >= 1 and steps_per_period >= 8")
    omega = model.drive_frequency
    period = 2.0 * np.pi / omega
    dt = period / steps_per_period
    u = np.eye(5, dtype=complex)
    for k in range(steps_per_period):
        h = model.hamiltonian((k + 0.5) * dt)
        u = expm(-1j * h * dt / HBAR) @ u

    lam, w = np.linalg.eig(u)
    lam = lam / np.abs(lam)          # unitary up to round-off
    c = np.linalg.solve(w, np.eye(5, dtype=complex)[:, 0])
    k = np.arange(n_periods + 1)
    amps = np.einsum("sj,jk,j->ks", w, lam[:, None] ** k, c)
    populations = np.abs(amps) ** 2
    return k * period, populations


def oscillation_frequency(times, population, guess: float) -> tuple[float, float]:
    """Fit A sin^2(Omega t / 2) + c to a population trace.

    Returns ``(Omega, A)``; feed roughly one to two Rabi periods of data.
    """

    def shape(t, amplitude, omega, offset):
        return amplitude * np.sin(0.5 * omega * t) ** 2 + offset

    popt, _ = curve_fit(shape, times, population, p0=[1.0, guess, 0.0])
    return float(abs(popt[1])), float(popt[0])


@dataclass(frozen=True)
class EliminationResult:
    """Effective two-level reduction of the ladder.

    ``off_diagonal(t) = static_coupling + cos_amplitude * cos(w_ps t)``; the
    cos amplitude equals twice the effective coupling V of the factorised
    chain (exact algebraic identity).  ``stark_shift`` is the kick-pulse level
    shift quoted with the laser-minus-resonance detuning in the denominator,
    so red detuning (Delta_e < 0) gives a negative, trapping shift.
    """

    h_e: float
    epsilon_2L: float
    static_coupling: float
    cos_amplitude: float
    stark_shift: float
    v_b: float
    v_e: float
    omega_ps: float

    def hamiltonian(self, t: float) -> np.ndarray:
        c = self.static_coupling + self.cos_amplitude * np.cos(self.omega_ps * t)
        return np.array([[0.0, c], [c, self.epsilon_2L]])


def adiabatic_eliminate(
    cfg: RamanConfig, species: AtomSpecies, omega_2L0: float
) -> EliminationResult:
    """Two-step elimination: hyperfine dressing first, then the excited state.

    The kick-pulse element is h_e = (1/2) |u_L + u_-L| d with the dipole scale
    d = sqrt(alpha hbar |Delta_e|); dressing by the radio-frequency fields
    multiplies it by (1 - |v_b(t)|^2 / 2), and the second elimination yields
    the off-diagonal -2 |h_e(t)|^2 / (hbar Delta_e) whose expansion is the
    static Stark part plus the cos(w_ps t) Raman drive.
    """
    # |u_L + u_-L|^2 on the ring at phi = 0: both components add in phase.
    u_sum_sq = (
        8.0
        * cfg.kick_power_P_e
        * kick_peak_factor(cfg.kick_oam_L)
        / (math.pi * C_LIGHT * cfg.kick_waist_w_e**2)
    )
    dipole = math.sqrt(abs(cfg.polarizability_at_omega_e) * HBAR * abs(cfg.Delta_e))
    h_e = 0.5 * math.sqrt(u_sum_sq) * dipole

    g = species.g_factor
    v_b = g * MU_B * max(abs(cfg.B_p0), abs(cfg.B_s0)) / (
        math.sqrt(3.0) * HBAR * abs(cfg.Delta_hf)
    )
    _, g1 = FiveLevelModel(cfg, species, omega_2L0).electric_couplings
    v_e = g1 / (HBAR * abs(cfg.Delta_e))
    if v_b >= _PERTURBATIVE_LIMIT:
        raise ValidityError("magnetic dressing |v_b| too large", ratio=v_b)
    if v_e >= _PERTURBATIVE_LIMIT:
        raise ValidityError("optical dressing |v_e| too large", ratio=v_e)

    # -2 |h_e|^2 / (hbar Delta_e) including the dressed (1 - |v_b(t)|^2) factor,
    # with the effective 1/3 spin weight of the coupling chain.
    base = 2.0 * h_e**2 / (HBAR * cfg.Delta_e)
    spin_weight = g**2 * MU_B**2 / (3.0 * HBAR**2 * cfg.Delta_hf**2)
    static_b2 = cfg.B_p0**2 + cfg.B_s0**2
    static_coupling = -base * (1.0 - spin_weight * static_b2)
    cos_amplitude = base * spin_weight * 2.0 * cfg.B_p0 * cfg.B_s0
    return EliminationResult(
        h_e=h_e,
        epsilon_2L=HBAR * omega_2L0,
        static_coupling=float(static_coupling),
        cos_amplitude=float(cos_amplitude),
        stark_shift=float(base),
        v_b=float(v_b),
        v_e=float(v_e),
        omega_ps=cfg.omega_ps,
    )


def tuned_model(model: FiveLevelModel) -> FiveLevelModel:
    """Copy of the model with the drive set to the computed Raman resonance."""
    return replace(model, omega_ps=raman_resonance(model))
