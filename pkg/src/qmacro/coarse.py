"""Coarse-grained spin measurements: slots, POVM, and macrorealism conditions.

A measurement of resolution dm lumps the 2j+1 sharp outcomes m into slots.
Sharp-edged von Neumann slot projectors distinguish microstates across a
border; the smooth spin-coherent-state POVM built here does not, and its
elements are diagonal with regularized-incomplete-beta coefficients.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from .config import TOL
from .leggett_garg import Propagator
from .special import as_twice, sinc_ratio
from .spin import (
    SphereGrid,
    as_density,
    bhattacharyya_overlap,
    coherent_state,
    m_values,
    outcome_distribution,
    q_function_grid,
    sphere_grid,
    spin_length,
)

__all__ = [
    "SlotPartition",
    "make_partition",
    "partition_from_cuts",
    "vn_slot_projector",
    "povm_coefficient",
    "CoarsePOVM",
    "build_povm",
    "slot_probabilities",
    "slot_probabilities_q",
    "reduce_state",
    "povm_two_time_correlation",
    "mixture_condition_gap",
    "noninvasiveness_gap",
    "sufficient_condition_check",
    "quantum_char_fn",
    "classical_char_fn",
    "char_fn_phase_args",
    "classical_limit_deviation",
]


@dataclass(frozen=True)
class SlotPartition:
    """Ordered cover of the eigenvalues m by slots, north (m = +j) first.

    boundaries are cut points in m running from j+1/2 down to -j-1/2; slot i
    holds the m with boundaries[i] >= m > boundaries[i+1].  Band i is the
    polar interval with cos(theta) = m_cut / (j + 1/2) at the edges, so the
    bands tile [0, pi] and slot i faces band i.
    """

    j: float
    boundaries: np.ndarray                 # (n_slots + 1,) descending in m
    slots: tuple = field(repr=False)       # per-slot basis-index arrays
    bands: tuple = field(repr=False)       # per-slot (theta_lo, theta_hi)
    delta_m: float = 0.0

    @property
    def n_slots(self):
        return len(self.slots)

    @property
    def coarse_factor(self):
        """delta_m / sqrt(j); the partition is coarse when this is >= 2."""
        return self.delta_m / math.sqrt(self.j) if self.j > 0 else math.inf

    @property
    def is_coarse(self):
        return self.coarse_factor >= 2.0


def make_partition(j, delta_m=None, mode="aligned"):
    """Partition the 2j+1 outcomes into slots of width delta_m, or hemispheres.

    mode="aligned": ceil((2j+1)/delta_m) slots anchored at the north edge.
    mode="hemispheres": two slots cut at m = 0 (equator); for integer j the
    borderline m = 0 outcome is assigned to the southern slot.
    """
    two_j = as_twice(j, "j")
    j = two_j / 2.0
    top = j + 0.5
    if mode == "hemispheres":
        cuts = [top, 0.0, -top]
        dm = top
    elif mode == "aligned":
        if delta_m is None or not (1.0 <= delta_m <= two_j + 1):
            raise ValueError("delta_m must lie in [1, 2j+1]")
        n_slots = math.ceil((two_j + 1) / delta_m)
        cuts = [max(top - i * delta_m, -top) for i in range(n_slots)] + [-top]
        dm = float(delta_m)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return partition_from_cuts(j, cuts, delta_m=dm)


def partition_from_cuts(j, cuts, delta_m=None):
    """Partition with explicit cut points in m (descending, from j+1/2 to -j-1/2)."""
    two_j = as_twice(j, "j")
    j = two_j / 2.0
    top = j + 0.5
    cuts = [float(c) for c in cuts]
    if cuts[0] != top or cuts[-1] != -top or any(a <= b for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cuts must descend from j+1/2 to -j-1/2")
    m = m_values(j)
    slots = []
    bands = []
    for lo_cut, hi in zip(cuts[1:], cuts[:-1]):
        idx = np.nonzero((m <= hi) & (m > lo_cut))[0]
        slots.append(idx)
        theta_lo = math.acos(max(-1.0, min(1.0, hi / top)))
        theta_hi = math.acos(max(-1.0, min(1.0, lo_cut / top)))
        bands.append((theta_lo, theta_hi))
    if any(len(s) == 0 for s in slots):
        raise ValueError("empty slot; decrease delta_m or check boundaries")
    if delta_m is None:
        delta_m = float(min(a - b for a, b in zip(cuts[:-1], cuts[1:])))
    return SlotPartition(
        j=j,
        boundaries=np.asarray(cuts),
        slots=tuple(np.asarray(s) for s in slots),
        bands=tuple(bands),
        delta_m=delta_m,
    )


def vn_slot_projector(part, slot):
    """Sharp 0/1 projector onto the von Neumann slot."""
    if not 0 <= slot < part.n_slots:
        raise IndexError(f"slot {slot} out of range")
    d = as_twice(part.j, "j") + 1
    p = np.zeros((d, d), dtype=complex)
    idx = part.slots[slot]
    p[idx, idx] = 1.0
    return p


def povm_coefficient(j, band, k):
    """POVM weight g(k) of eigenvalue k for the polar band (theta1, theta2).

    Equals the regularized incomplete beta difference
    I_u1(j+k+1, j-k+1) - I_u2(...) at u = cos^2(theta/2).
    """
    two_j = as_twice(j, "j")
    two_k = as_twice(k, "k")
    theta1, theta2 = band
    a = (two_j + two_k) / 2.0 + 1.0
    b = (two_j - two_k) / 2.0 + 1.0
    u1 = math.cos(theta1 / 2.0) ** 2
    u2 = math.cos(theta2 / 2.0) ** 2
    return float(betainc(a, b, u1) - betainc(a, b, u2))


@dataclass(frozen=True)
class CoarsePOVM:
    """Diagonal POVM elements and their Hermitian Kraus square roots.

    ``element_diags[i]`` is the diagonal of P_i; kraus_diags = sqrt of it,
    so M_i^2 = P_i holds by construction and sum_i P_i = 1.
    """

    partition: SlotPartition
    element_diags: np.ndarray   # (n_slots, d)
    kraus_diags: np.ndarray     # (n_slots, d)

    @property
    def n_slots(self):
        return self.element_diags.shape[0]

    def element(self, i):
        return np.diag(self.element_diags[i]).astype(complex)

    def kraus(self, i):
        return np.diag(self.kraus_diags[i]).astype(complex)


def build_povm(part):
    """Spin-coherent-state POVM for a slot partition."""
    j = part.j
    m = m_values(j)
    diags = np.empty((part.n_slots, m.size))
    for i, band in enumerate(part.bands):
        diags[i] = [povm_coefficient(j, band, mk) for mk in m]
    total = diags.sum(axis=0)
    if np.max(np.abs(total - 1.0)) > TOL.povm_completeness:
        raise RuntimeError("POVM completeness violated beyond tolerance")
    return CoarsePOVM(partition=part, element_diags=diags, kraus_diags=np.sqrt(diags))


def slot_probabilities(state, povm):
    """Outcome probabilities Tr[rho P_i] (the trace path)."""
    p = outcome_distribution(state)
    w = povm.element_diags @ p
    return w / w.sum()


def slot_probabilities_q(state, part, order=None, n_phi=None, richardson=True):
    """Outcome probabilities via band integration of the Q-function.

    Independent of the trace path: integrates Q(theta, phi) over each polar
    band with per-band Gauss-Legendre x uniform-phi quadrature.  A single
    Richardson-style doubling of the band order flags under-resolution.
    """
    state = np.asarray(state)
    j = spin_length(state)
    two_j = as_twice(j, "j")
    if order is None:
        order = two_j + 2
    if n_phi is None:
        n_phi = 2 * two_j + 4

    def integrate(order_):
        w = np.empty(part.n_slots)
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        for i, (t1, t2) in enumerate(part.bands):
            x, wx = np.polynomial.legendre.leggauss(order_)
            c1, c2 = math.cos(t2), math.cos(t1)      # cos decreasing in theta
            nodes = 0.5 * (c2 - c1) * x + 0.5 * (c1 + c2)
            weights = 0.5 * (c2 - c1) * wx
            theta = np.arccos(nodes)
            band_grid = SphereGrid(theta=theta, phi=phi, w_theta=weights, w_phi=2 * np.pi / n_phi)
            w[i] = band_grid.integrate(q_function_grid(state, band_grid))
        return w

    w = integrate(order)
    if richardson:
        w2 = integrate(2 * order)
        if np.max(np.abs(w - w2)) > 10 * TOL.slot_prob_match:
            w = w2
    return w


def reduce_state(state, povm, slot):
    """Post-measurement state M_i rho M_i / w_i for outcome ``slot``."""
    state = np.asarray(state)
    k = povm.kraus_diags[slot]
    if state.ndim == 1:
        branch = k * state
        w = float(np.vdot(branch, branch).real)
        if w <= TOL.zero_branch:
            raise ZeroDivisionError("vanishing-probability outcome")
        return branch / math.sqrt(w)
    branch = k[:, None] * state * k[None, :]
    w = float(np.trace(branch).real)
    if w <= TOL.zero_branch:
        raise ZeroDivisionError("vanishing-probability outcome")
    return branch / w


def _sharp_branches(state, part):
    """(weight, reduced density) pairs under von Neumann slot projection."""
    rho = as_density(np.asarray(state))
    out = []
    for idx in part.slots:
        branch = np.zeros_like(rho)
        branch[np.ix_(idx, idx)] = rho[np.ix_(idx, idx)]
        w = float(np.trace(branch).real)
        if w > TOL.zero_branch:
            out.append((w, branch / w))
    return out


def povm_two_time_correlation(rho0, propagator, povm, signs, ti, tj):
    """Two-time correlation with Kraus reduction for a dichotomic POVM.

    ``signs`` assigns the outcome value (+1/-1) to each slot.
    """
    rho_i = propagator.evolve(as_density(rho0), ti)
    w = slot_probabilities(rho_i, povm)
    c = 0.0
    for i, (s_i, w_i) in enumerate(zip(signs, w)):
        if w_i <= TOL.zero_branch:
            continue
        branch = reduce_state(rho_i, povm, i)
        evolved = propagator.evolve(branch, tj - ti)
        q = slot_probabilities(evolved, povm)
        c += s_i * w_i * float(np.dot(np.asarray(signs, dtype=float), q))
    return c


def mixture_condition_gap(state, povm, grid=None, sharp=False):
    """1 - overlap between Q(rho) and the post-measurement mixture sum_i w_i Q(rho_i).

    Exactly zero (up to quadrature) for diagonal rho; the worst coherent
    state sitting on a hemisphere border gives overlap ~ 0.997 for the
    POVM.  ``sharp=True`` reduces with the von Neumann slot projectors
    instead, whose hard edges disturb border states noticeably more.
    """
    state = np.asarray(state)
    j = spin_length(state)
    if grid is None:
        grid = sphere_grid(j)
    q0 = q_function_grid(state, grid)
    mixture = np.zeros_like(q0)
    if sharp:
        for w_i, branch in _sharp_branches(state, povm.partition):
            mixture += w_i * q_function_grid(branch, grid)
    else:
        w = slot_probabilities(state, povm)
        for i, w_i in enumerate(w):
            if w_i <= TOL.zero_branch:
                continue
            mixture += w_i * q_function_grid(reduce_state(state, povm, i), grid)
    return 1.0 - bhattacharyya_overlap(q0, mixture, grid)


def noninvasiveness_gap(rho0, hamiltonian, povm, ti, tj, grid=None):
    """Disturbance of a measurement at ti as seen at tj.

    Compares Q of the undisturbed state at tj with the weighted mixture of
    the measured-and-evolved branches; returns 1 - overlap^2 (the squared
    Bhattacharyya coefficient, a classical fidelity), which vanishes iff
    the two distributions agree.  ti = tj degenerates to the mixture
    condition (zero for diagonal states).
    """
    if not ti <= tj:
        raise ValueError("requires ti <= tj")
    rho0 = as_density(np.asarray(rho0))
    j = spin_length(rho0)
    if grid is None:
        grid = sphere_grid(j)
    prop = hamiltonian if isinstance(hamiltonian, Propagator) else Propagator(hamiltonian)
    undisturbed = q_function_grid(prop.evolve(rho0, tj), grid)
    rho_i = prop.evolve(rho0, ti)
    w = slot_probabilities(rho_i, povm)
    mixture = np.zeros_like(undisturbed)
    for i, w_i in enumerate(w):
        if w_i <= TOL.zero_branch:
            continue
        branch = prop.evolve(reduce_state(rho_i, povm, i), tj - ti)
        mixture += w_i * q_function_grid(branch, grid)
    overlap = bhattacharyya_overlap(undisturbed, mixture, grid)
    return 1.0 - overlap**2


def sufficient_condition_check(hamiltonian, povm, directions, times, border_level=0.1, sharp=True):
    """Worst-case slot leakage of evolved coherent states.

    For each sampled (direction, t) computes 1 - max_i |P_i U_t |Omega>|^2;
    small leakage for all samples means the evolution never builds
    superpositions across slot borders.  By default P_i are the sharp slot
    projectors (leakage = mass outside the best slot); ``sharp=False`` uses
    the smooth POVM elements, whose soft borders leak a few percent even
    mid-slot.  Returns (max_leakage, border_fraction, leakages).
    """
    part = povm.partition
    j = part.j
    prop = hamiltonian if isinstance(hamiltonian, Propagator) else Propagator(hamiltonian)
    if sharp:
        weights = np.zeros_like(povm.element_diags)
        for i, idx in enumerate(part.slots):
            weights[i, idx] = 1.0
    else:
        weights = povm.element_diags**2
    leakages = []
    for theta, phi in directions:
        psi0 = coherent_state(j, theta, phi)
        for t in times:
            psi = prop.evolve(psi0, t)
            norms = weights @ (np.abs(psi) ** 2)
            leakages.append(1.0 - float(np.max(norms)))
    leakages = np.asarray(leakages)
    border_fraction = float(np.mean(leakages > border_level))
    return float(np.max(leakages)), border_fraction, leakages


def _one_minus_cos_half_kappa(xi, eta, theta):
    """1 - cos(kappa/2) computed without cancellation for small xi, eta."""
    ca, cb = math.cos(xi / 2.0), math.cos(eta / 2.0)
    sa, sb = math.sin(xi / 2.0), math.sin(eta / 2.0)
    one_minus_cacb = 2.0 * math.sin(xi / 4.0) ** 2 + ca * 2.0 * math.sin(eta / 4.0) ** 2
    return one_minus_cacb + sa * sb * math.cos(theta)


def quantum_char_fn(j, xi, eta, theta):
    """Exact two-time characteristic function of sharp Jz outcomes.

    The four rotations collapse to a single rotation by kappa(xi, eta,
    theta), giving sin((2j+1) kappa/2) / ((2j+1) sin(kappa/2)).
    """
    n = as_twice(j, "j") + 1
    omc = _one_minus_cos_half_kappa(xi, eta, theta)
    half_kappa = 2.0 * math.asin(math.sqrt(max(0.0, min(1.0, omc / 2.0))))
    return float(sinc_ratio(n, half_kappa))


def classical_char_fn(j, xi, eta, theta):
    """Classical-ensemble limit sin((2j+1) k/2) / ((2j+1) k/2)."""
    n = as_twice(j, "j") + 1
    k = math.sqrt(max(0.0, xi**2 + eta**2 + 2.0 * xi * eta * math.cos(theta)))
    x = n * k / 2.0
    return float(np.sinc(x / np.pi))


def char_fn_phase_args(j, xi, eta, theta):
    """Rotation-angle arguments ((2j+1) kappa/2, (2j+1) k/2).

    Their difference ~ j * xi^3 is the quantity whose smallness defines the
    classical cutoff xi << 1/sqrt(j).
    """
    n = as_twice(j, "j") + 1
    omc = _one_minus_cos_half_kappa(xi, eta, theta)
    half_kappa = 2.0 * math.asin(math.sqrt(max(0.0, min(1.0, omc / 2.0))))
    k = math.sqrt(max(0.0, xi**2 + eta**2 + 2.0 * xi * eta * math.cos(theta)))
    return n * half_kappa, n * k / 2.0


def classical_limit_deviation(j, xi, eta, theta):
    """Squared rotation-angle mismatch |((2j+1)kappa/2)^2 - ((2j+1)k/2)^2|.

    This is the term that must vanish for the quantum characteristic
    function to reduce to the classical one; it stays tiny for
    xi << 1/sqrt(j) and becomes order one at the cutoff edge, while the raw
    value difference is additionally suppressed by the 1/((2j+1) sin) sinc
    amplitudes.
    """
    pq, pc = char_fn_phase_args(j, xi, eta, theta)
    return abs(pq * pq - pc * pc)
