"""Finite-dimensional spin-j kinematics.

Basis convention: index i of a length-(2j+1) vector corresponds to the
Jz eigenvalue m = j - i, i.e. amplitudes are ordered from m = +j (north)
down to m = -j (south).  States are plain numpy arrays: 1-D for pure
states, 2-D for density matrices.  All angles are radians; hbar = 1.

Everything is a pure function of immutable inputs; the per-j operator and
eigendecomposition caches hold read-only arrays, so parameter sweeps can
share them across workers.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import sph_harm_y

from .config import TOL
from .special import as_twice, ln_binom, ln_factorial, wigner_3j

__all__ = [
    "dimension",
    "m_values",
    "spin_length",
    "SpinOperators",
    "build_spin_operators",
    "coherent_state",
    "rotate_direction",
    "angle_between",
    "rotation_evolution",
    "rotation_hamiltonian",
    "parity_operator",
    "as_density",
    "outcome_distribution",
    "gaussian_approx",
    "SphereGrid",
    "sphere_grid",
    "q_function",
    "q_function_grid",
    "p_function_grid",
    "reconstruct_from_p",
    "bhattacharyya_overlap",
    "density_csv_rows",
]


def dimension(j):
    """Hilbert-space dimension 2j + 1."""
    return as_twice(j, "j") + 1


def m_values(j):
    """Jz eigenvalues in basis order (descending from +j to -j)."""
    two_j = as_twice(j, "j")
    return (two_j - 2 * np.arange(two_j + 1)) / 2.0


def spin_length(obj):
    """Spin length j inferred from a state/operator (dimension 2j+1)."""
    d = np.asarray(obj).shape[0]
    return (d - 1) / 2.0


class SpinOperators(NamedTuple):
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jsq: np.ndarray


@lru_cache(maxsize=None)
def _spin_operators_cached(two_j):
    j = two_j / 2.0
    d = two_j + 1
    m = (two_j - 2 * np.arange(d)) / 2.0
    jz = np.diag(m).astype(complex)
    # raising operator: <m+1| J+ |m> = sqrt((j-m)(j+m+1)); index(m) = j - m
    ladder = np.sqrt((j - m[1:]) * (j + m[1:] + 1.0))
    jp = np.zeros((d, d), dtype=complex)
    jp[np.arange(d - 1), np.arange(1, d)] = ladder
    jx = (jp + jp.conj().T) / 2.0
    jy = (jp - jp.conj().T) / 2.0j
    jsq = j * (j + 1.0) * np.eye(d, dtype=complex)
    ops = SpinOperators(jx, jy, jz, jsq)
    for a in ops:
        a.setflags(write=False)
    return ops


def build_spin_operators(j):
    """Jx, Jy, Jz and J^2 as dense matrices (cached per j, read-only)."""
    return _spin_operators_cached(as_twice(j, "j"))


def _log_coherent_profile(two_j, theta):
    """Row of log|<m|theta,phi>| over m (phi-independent part), stable at poles."""
    j = two_j / 2.0
    m = (two_j - 2 * np.arange(two_j + 1)) / 2.0
    jp = j + m
    jm = j - m
    c = np.cos(np.asarray(theta)[..., None] / 2.0)
    s = np.sin(np.asarray(theta)[..., None] / 2.0)
    log_c = np.where(jp > 0, jp * np.log(np.where(np.abs(c) > 0, np.abs(c), 1.0)), 0.0)
    log_s = np.where(jm > 0, jm * np.log(np.where(np.abs(s) > 0, np.abs(s), 1.0)), 0.0)
    out = 0.5 * ln_binom(two_j, jp) + log_c + log_s
    # exact zeros at the poles
    out = np.where((jp > 0) & (c == 0.0), -np.inf, out)
    out = np.where((jm > 0) & (s == 0.0), -np.inf, out)
    return out


def coherent_state(j, theta, phi):
    """Spin coherent state |theta, phi>: max-eigenvalue state of J along (theta, phi)."""
    two_j = as_twice(j, "j")
    m = (two_j - 2 * np.arange(two_j + 1)) / 2.0
    log_mag = _log_coherent_profile(two_j, float(theta))
    amp = np.exp(log_mag) * np.exp(-1j * m * float(phi))
    return amp / np.linalg.norm(amp)


def rotate_direction(theta, phi, omega_t):
    """Direction reached from (theta, phi) after exp(-i omega t Jx).

    The x-component is unchanged; (y, z) rotate by omega_t.
    """
    nx = math.sin(theta) * math.cos(phi)
    ny = math.sin(theta) * math.sin(phi)
    nz = math.cos(theta)
    c, s = math.cos(omega_t), math.sin(omega_t)
    ny_t = c * ny - s * nz
    nz_t = s * ny + c * nz
    theta_t = math.acos(max(-1.0, min(1.0, nz_t)))
    phi_t = math.atan2(ny_t, nx) % (2 * math.pi)
    return theta_t, phi_t


def angle_between(dir_a, dir_b):
    """Angle between two (theta, phi) directions on the sphere."""
    ta, pa = dir_a
    tb, pb = dir_b
    c = math.cos(ta) * math.cos(tb) + math.sin(ta) * math.sin(tb) * math.cos(pa - pb)
    return math.acos(max(-1.0, min(1.0, c)))


@lru_cache(maxsize=None)
def _jx_eig(two_j):
    ops = _spin_operators_cached(two_j)
    evals, evecs = np.linalg.eigh(ops.jx)
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return evals, evecs


def rotation_evolution(j, omega_t):
    """U = exp(-i omega_t Jx) via the cached eigendecomposition of Jx."""
    evals, evecs = _jx_eig(as_twice(j, "j"))
    phases = np.exp(-1j * float(omega_t) * evals)
    return (evecs * phases) @ evecs.conj().T


def rotation_hamiltonian(j, omega=1.0):
    """Precession generator omega * Jx."""
    return omega * build_spin_operators(j).jx


def parity_operator(j):
    """Diagonal parity (-1)^(j - m); involutory with outcomes +/-1."""
    two_j = as_twice(j, "j")
    signs = (-1.0) ** np.arange(two_j + 1)  # j - m = index
    return np.diag(signs).astype(complex)


def as_density(state):
    """Promote a pure state vector to a density matrix (no-op for matrices)."""
    state = np.asarray(state)
    if state.ndim == 1:
        return np.outer(state, state.conj())
    return state


def outcome_distribution(state):
    """Born probabilities of a sharp Jz measurement, ordered m = +j ... -j."""
    state = np.asarray(state)
    if state.ndim == 1:
        p = np.abs(state) ** 2
    else:
        p = np.real(np.diag(state)).copy()
    p[np.abs(p) < 1e-300] = 0.0
    return p


def gaussian_approx(j, theta_t):
    """(mu, sigma) of the large-j normal approximation to the Jz outcome law."""
    j = float(j)
    return j * math.cos(theta_t), math.sqrt(j / 2.0) * math.sin(theta_t)


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature grid: Gauss-Legendre in cos(theta) x uniform phi.

    integrate() is exact for integrands that are polynomials of degree
    < 2*order in cos(theta) times trigonometric polynomials of degree
    < n_phi in phi, which covers every closed-form density used here.
    """

    theta: np.ndarray      # (n_theta,) polar nodes, ascending
    phi: np.ndarray        # (n_phi,) azimuthal nodes
    w_theta: np.ndarray    # (n_theta,) GL weights including sin(theta) d(theta) measure
    w_phi: float           # uniform phi weight 2*pi / n_phi

    def integrate(self, values):
        """Integral over the sphere of values sampled as (n_theta, n_phi)."""
        return float(np.real(self.w_theta @ np.asarray(values) @ np.full(self.phi.shape, self.w_phi)))


def sphere_grid(j, order=None, n_phi=None):
    """Quadrature grid sized for spin length j (order >= 2j+2, n_phi >= 4j+4)."""
    two_j = as_twice(j, "j")
    if order is None:
        order = two_j + 2
    if n_phi is None:
        n_phi = 2 * two_j + 4
    x, w = leggauss(order)            # nodes in cos(theta)
    theta = np.arccos(x[::-1])        # ascending theta
    w_theta = w[::-1].copy()
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    return SphereGrid(theta=theta, phi=phi, w_theta=w_theta, w_phi=2 * np.pi / n_phi)


def _coherent_overlap_grid(state_vec, grid):
    """<theta,phi|psi> on the grid as an (n_theta, n_phi) array."""
    two_j = as_twice(spin_length(state_vec), "j")
    m = (two_j - 2 * np.arange(two_j + 1)) / 2.0
    profile = np.exp(_log_coherent_profile(two_j, grid.theta))      # (nt, d)
    phases = np.exp(1j * np.outer(m, grid.phi))                     # (d, np), conj of e^{-im phi}
    return (profile * state_vec) @ phases


def q_function(state, theta, phi):
    """Husimi density (2j+1)/(4 pi) <Omega| rho |Omega> at a single direction."""
    state = np.asarray(state)
    j = spin_length(state)
    omega = coherent_state(j, theta, phi)
    if state.ndim == 1:
        val = abs(np.vdot(omega, state)) ** 2
    else:
        val = np.real(np.vdot(omega, state @ omega))
    return (2 * j + 1) / (4 * np.pi) * val


def q_function_grid(state, grid, rank_cut=1e-14):
    """Q sampled on a SphereGrid; rank-decomposes density matrices."""
    state = np.asarray(state)
    j = spin_length(state)
    norm = (2 * j + 1) / (4 * np.pi)
    if state.ndim == 1:
        return norm * np.abs(_coherent_overlap_grid(state, grid)) ** 2
    evals, evecs = np.linalg.eigh(state)
    out = np.zeros((grid.theta.size, grid.phi.size))
    for lam, vec in zip(evals, evecs.T):
        if lam > rank_cut:
            out += lam * np.abs(_coherent_overlap_grid(vec, grid)) ** 2
    return norm * out


def _p_coefficient_table(two_j):
    """Prefactor sqrt((2j-k)! (2j+k+1)!) / (sqrt(4 pi) (2j)!) for k = 0..2j."""
    k = np.arange(two_j + 1)
    log_pref = 0.5 * (ln_factorial(two_j - k) + ln_factorial(two_j + k + 1)) - ln_factorial(two_j)
    return np.exp(log_pref) / math.sqrt(4 * math.pi)


def p_function_grid(state, grid, max_j=30):
    """Glauber-Sudarshan-type P sampled on a SphereGrid (spins up to j = 30).

    Uses the multipole expansion of rho over spherical harmonics; the
    factorial prefactors grow with j, hence the stable-range guard.
    """
    rho = as_density(np.asarray(state))
    j = spin_length(rho)
    two_j = as_twice(j, "j")
    if j > max_j:
        raise ValueError(f"p_function is limited to j <= {max_j} (factorial growth)")
    m = (two_j - 2 * np.arange(two_j + 1)) / 2.0
    pref = _p_coefficient_table(two_j)

    out = np.zeros((grid.theta.size, grid.phi.size), dtype=complex)
    for k in range(two_j + 1):
        for q in range(-k, k + 1):
            # rho_kq = sqrt(2k+1) sum_m (-1)^(j-m) <m|rho|m-q> 3j(j k j; -m+q, -q, m)
            acc = 0.0 + 0.0j
            for i, mm in enumerate(m):
                i2 = i + q  # index of m' = m - q  (index = j - m)
                if 0 <= i2 <= two_j:
                    w3 = wigner_3j(j, k, j, -mm + q, -q, mm)
                    if w3 != 0.0:
                        acc += (-1.0) ** round(j - mm) * rho[i, i2] * w3
            if acc == 0.0:
                continue
            rho_kq = math.sqrt(2 * k + 1) * acc
            # under scipy's Condon-Shortley harmonics the multipole pair
            # (rho_kq, Y_kq) carries no extra (-1)^(k-q); verified by the
            # exact reconstruction identity
            ylm = sph_harm_y(k, q, grid.theta[:, None], grid.phi[None, :])
            out += rho_kq * ylm * pref[k]
    return out


def reconstruct_from_p(p_values, grid, j):
    """rho = integral P(Omega) |Omega><Omega| dOmega evaluated on the grid."""
    two_j = as_twice(j, "j")
    m = (two_j - 2 * np.arange(two_j + 1)) / 2.0
    profile = np.exp(_log_coherent_profile(two_j, grid.theta))      # (nt, d)
    phases = np.exp(-1j * np.outer(m, grid.phi))                    # (d, np)
    d = two_j + 1
    rho = np.zeros((d, d), dtype=complex)
    weighted = grid.w_theta[:, None] * np.asarray(p_values) * grid.w_phi
    for it in range(grid.theta.size):
        amp = profile[it][:, None] * phases                          # (d, np) coherent amplitudes
        rho += (amp * weighted[it]) @ amp.conj().T
    return rho


def bhattacharyya_overlap(qa, qb, grid):
    """Overlap integral of sqrt(f*g) for two normalized sphere densities."""
    qa = np.asarray(qa)
    qb = np.asarray(qb)
    for q in (qa, qb):
        total = grid.integrate(q)
        if abs(total - 1.0) > TOL.density_norm:
            raise ValueError(f"density not normalized: integral = {total}")
    return grid.integrate(np.sqrt(np.clip(qa, 0.0, None) * np.clip(qb, 0.0, None)))


def density_csv_rows(values, grid):
    """Serialize a grid density as (theta, phi, value) rows."""
    values = np.asarray(values)
    for i, theta in enumerate(grid.theta):
        for k, phi in enumerate(grid.phi):
            yield float(theta), float(phi), float(values[i, k])
