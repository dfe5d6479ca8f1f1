"""Bound-state spectra of ring-trapped atoms.

The trap potential separates near a ring minimum into an axial harmonic well
W_j(z) and a radial profile V_l(r); the azimuthal motion contributes a
rigid-rotor tower m^2 C(r) with C(r) = hbar^2 / (2 M r^2).  Both 1-D problems
are solved by second-order finite differences on a uniform grid.  The radial
equation (cylindrical Laplacian) is symmetrised with psi = chi / sqrt(r),
which maps it onto a 1-D problem with effective potential
V_l(r) + (m^2 - 1/4) hbar^2 / (2 M r^2).

Eigenvalues are Richardson-extrapolated from two grids (h and h/2), removing
the leading O(h^2) discretisation error; the residual h^2 mismatch between the
two grids doubles as the convergence diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .exceptions import ConvergenceError, InvalidInputError
from .optics import BeamConfig, harmonic_decomposition, radial_trap_frequency, ring_minima
from .output import parallel_map
from .units import HBAR, K_B, AtomSpecies

# Fractional disagreement between the raw fine-grid eigenvalue and its
# extrapolation beyond which the grid is declared unconverged.
_CONVERGENCE_LIMIT = 1e-3


@dataclass(frozen=True)
class QuantumNumbers:
    """Separable quantum numbers of a trapped rotor state."""

    n_z: int
    n_r: int
    m_ell: int
    m_F: float = 0.0


@dataclass(frozen=True)
class EnergyLevel:
    qn: QuantumNumbers
    energy: float          # J, relative to the (0,0,0) ground level
    degeneracy: int


@dataclass(frozen=True)
class RotorSpectrum:
    levels: tuple[EnergyLevel, ...]
    gaps: tuple[float, float, float]   # (eps_z, eps_r, eps_ell) in J
    inequalities_ok: bool
    ratio_threshold: float = 10.0


@dataclass(frozen=True)
class BoundStates:
    """Eigenvalues and fine-grid eigenfunctions of one 1-D solve.

    ``wavefunctions[:, n]`` is state n sampled on ``grid``, normalised so that
    the trapezoid integral of |psi|^2 against ``measure`` equals one
    (measure = 1 for axial dz, measure = r for the radial r dr weight).
    """

    energies: np.ndarray
    grid: np.ndarray
    wavefunctions: np.ndarray
    measure: np.ndarray
    drift: float


@dataclass(frozen=True)
class SpectrumLimits:
    n_z_max: int
    n_r_max: int
    m_ell_max: int
    j: int = 0
    ratio_threshold: float = 10.0
    grid_points: int = 3001


def rotational_constant(r: float, species: AtomSpecies) -> float:
    """Rigid-rotor energy scale C(r) = hbar^2 / (2 M r^2)."""
    if r <= 0:
        raise InvalidInputError("radius must be positive")
    return HBAR**2 / (2.0 * species.mass * r**2)


def _fd_eigensolve(potential, lo: float, hi: float, n: int, mass: float, k: int):
    """Lowest k eigenpairs of -(hbar^2/2m) d^2/dx^2 + V on [lo, hi], Dirichlet."""
    if n < k + 4:
        raise InvalidInputError(
            f"grid of {n} points cannot resolve {k} eigenstates"
        )
    x = np.linspace(lo, hi, n)
    h = x[1] - x[0]
    t = HBAR**2 / (2.0 * mass * h**2)
    inner = x[1:-1]
    diag = 2.0 * t + potential(inner)
    off = np.full(n - 3, -t)
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    return vals, vecs, inner, h


def _solve_extrapolated(potential, lo, hi, n, mass, k):
    """Two-grid solve with Richardson extrapolation of the eigenvalues."""
    coarse, _, _, _ = _fd_eigensolve(potential, lo, hi, n, mass, k)
    fine, vecs, grid, h = _fd_eigensolve(potential, lo, hi, 2 * n - 1, mass, k)
    energies = (4.0 * fine - coarse) / 3.0
    scale = np.maximum(np.abs(energies), np.abs(energies).max())
    drift = float(np.max(np.abs(fine - energies) / scale))
    if drift > _CONVERGENCE_LIMIT:
        raise ConvergenceError(
            "finite-difference eigensolve did not converge",
            diagnostics={"grid_points": n, "relative_drift": drift, "lo": lo, "hi": hi},
        )
    psi = vecs / np.sqrt(h)
    return energies, grid, psi, drift


def solve_axial(
    beam: BeamConfig,
    species: AtomSpecies,
    j: int,
    n_z_max: int,
    grid_points: int = 2001,
) -> BoundStates:
    """Axial levels of the harmonic standing-wave well at ring j.

    Solves -(hbar^2/2M) d^2/dz^2 + W_j(z) on a symmetric box of +/- 6 b_z
    around z_j; returns the lowest n_z_max + 1 levels in ascending order.
    """
    if n_z_max < 0:
        raise InvalidInputError("n_z_max must be non-negative")
    if beam.trap_depth_V0 <= 0:
        raise InvalidInputError("bound axial states require trap_depth_V0 > 0")
    geo = ring_minima(beam, species, [j])[0]
    _, w_axial = harmonic_decomposition(beam, j)
    half = 6.0 * geo.b_z
    energies, grid, psi, drift = _solve_extrapolated(
        w_axial, geo.z_j - half, geo.z_j + half, grid_points, species.mass, n_z_max + 1
    )
    return BoundStates(energies, grid, psi, np.ones_like(grid), drift)


def solve_radial(
    beam: BeamConfig,
    species: AtomSpecies,
    j: int,
    m_ell: int,
    n_r_max: int,
    grid_points: int = 3001,
    radial_profile: str = "full",
) -> BoundStates:
    """Radial levels eps_r(n_r, m_ell) of the ring profile plus centrifugal term.

    ``radial_profile`` selects the full ring profile V_l(r) or its harmonic
    expansion about r_l (the oracle used to validate the grid machinery).
    Eigenfunctions are returned as psi(r) = chi(r)/sqrt(r), orthonormal under
    the cylindrical measure r dr.
    """
    if n_r_max < 0:
        raise InvalidInputError("n_r_max must be non-negative")
    geo = ring_minima(beam, species, [j])[0]
    v_full, _ = harmonic_decomposition(beam, j)
    omega_r = radial_trap_frequency(beam, species, j)
    b_r = np.sqrt(HBAR / (species.mass * omega_r))
    if radial_profile == "full":
        v_profile = v_full
    elif radial_profile == "harmonic":
        curv = species.mass * omega_r**2
        v_min = float(v_full(geo.r_l))
        v_profile = lambda r: v_min + 0.5 * curv * (r - geo.r_l) ** 2
    else:
        raise InvalidInputError("radial_profile must be 'full' or 'harmonic'")

    coeff = (m_ell**2 - 0.25) * HBAR**2 / (2.0 * species.mass)

    def v_eff(r):
        return v_profile(r) + coeff / r**2

    lo = max(geo.r_l - 8.0 * b_r, 1e-4 * geo.r_l)
    hi = geo.r_l + 8.0 * b_r
    energies, grid, chi, drift = _solve_extrapolated(
        v_eff, lo, hi, grid_points, species.mass, n_r_max + 1
    )
    psi = chi / np.sqrt(grid)[:, None]
    return BoundStates(energies, grid, psi, grid.copy(), drift)


def assemble_spectrum(
    beam: BeamConfig, species: AtomSpecies, limits: SpectrumLimits, workers: int = 1
) -> RotorSpectrum:
    """Combined spectrum eps(n_z, n_r, m_ell) = eps_z(n_z) + eps_r(n_r, m_ell).

    Energies are reported relative to the (0, 0, 0) ground level.  States with
    m_ell = 0 carry the hyperfine multiplicity 2F + 1; states with m_ell != 0
    are doubled by the +/- m_ell orbital degeneracy.  Radial solves for
    different m are independent and run on ``workers`` threads.
    """
    axial = solve_axial(beam, species, limits.j, limits.n_z_max)
    m_values = list(range(limits.m_ell_max + 1))
    solved = parallel_map(
        lambda m: solve_radial(
            beam, species, limits.j, m, limits.n_r_max, limits.grid_points
        ),
        m_values,
        workers,
    )
    radial_by_m = dict(zip(m_values, solved))

    ground = axial.energies[0] + radial_by_m[0].energies[0]
    deg0 = int(round(2 * species.F_ground + 1))
    levels = []
    for n_z in range(limits.n_z_max + 1):
        for n_r in range(limits.n_r_max + 1):
            for m in range(limits.m_ell_max + 1):
                energy = axial.energies[n_z] + radial_by_m[m].energies[n_r] - ground
                levels.append(
                    EnergyLevel(
                        qn=QuantumNumbers(n_z=n_z, n_r=n_r, m_ell=m),
                        energy=float(energy),
                        degeneracy=deg0 if m == 0 else 2 * deg0,
                    )
                )
    levels.sort(key=lambda lv: (lv.energy, lv.qn.n_z, lv.qn.n_r, lv.qn.m_ell))

    eps_z = float(axial.energies[1] - axial.energies[0]) if limits.n_z_max >= 1 else float(
        solve_axial(beam, species, limits.j, 1).energies[1] - axial.energies[0]
    )
    r0 = radial_by_m[0] if limits.n_r_max >= 1 else solve_radial(
        beam, species, limits.j, 0, 1, limits.grid_points
    )
    eps_r = float(r0.energies[1] - r0.energies[0])
    r1 = radial_by_m.get(1) or solve_radial(
        beam, species, limits.j, 1, 0, limits.grid_points
    )
    eps_ell = float(r1.energies[0] - radial_by_m[0].energies[0])

    thr = limits.ratio_threshold
    ok = eps_z >= thr * eps_r and eps_r >= thr * eps_ell and eps_ell > 0
    return RotorSpectrum(
        levels=tuple(levels),
        gaps=(eps_z, eps_r, eps_ell),
        inequalities_ok=bool(ok),
        ratio_threshold=thr,
    )


def rotating_frame_energy(level: EnergyLevel, omega: float) -> float:
    """Level energy in a frame rotating at omega: eps + hbar * omega * m_ell."""
    return level.energy + HBAR * omega * level.qn.m_ell


def spectrum_rows(spectrum: RotorSpectrum):
    """Rows (n_z, n_r, m_ell, energy_J, energy_kB_nK, degeneracy) for export."""
    return [
        (
            lv.qn.n_z,
            lv.qn.n_r,
            lv.qn.m_ell,
            lv.energy,
            lv.energy / K_B * 1e9,
            lv.degeneracy,
        )
        for lv in spectrum.levels
    ]
