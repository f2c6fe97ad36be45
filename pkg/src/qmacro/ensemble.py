"""Virtual-qubit entanglement bounds from collective spin moments.

Normalized collective expectation values of two (or M) spin samples define
a legal 4x4 (2^M x 2^M) density matrix; its negativity lower-bounds the
average pairwise entanglement and is exactly the average for the xxz-type
families treated here.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .config import TOL

__all__ = [
    "PAULI",
    "CollectiveMoments",
    "moments_from_pair_states",
    "virtual_qubit_state",
    "negativity",
    "partial_transpose",
    "xxz_eigenvalue",
    "dicke_collective",
    "dicke_pair_state",
    "singlet_collective",
    "singlet_moments",
    "admixture_collective",
    "admixture_moments",
    "multipartite_virtual",
    "proposition1_check",
]

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_ID = np.eye(2, dtype=complex)

PAULI = (_ID, _SX, _SY, _SZ)


@dataclass(frozen=True)
class CollectiveMoments:
    """Normalized single-sample vectors s_a, s_b and cross-correlation matrix t."""

    s_a: np.ndarray = field(default_factory=lambda: np.zeros(3))
    s_b: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        for arr, shape in ((self.s_a, (3,)), (self.s_b, (3,)), (self.t, (3, 3))):
            if np.asarray(arr).shape != shape:
                raise ValueError("moments have shapes (3,), (3,), (3,3)")
        if max(np.max(np.abs(self.s_a)), np.max(np.abs(self.s_b)), np.max(np.abs(self.t))) > 1 + 1e-12:
            raise ValueError("normalized moments must lie in [-1, 1]")


def moments_from_pair_states(pair_states):
    """Collective moments of an explicit n_a x n_b grid of two-qubit states."""
    states = np.asarray(pair_states, dtype=complex)
    if states.ndim == 2:
        states = states[None, None]
    mean = states.reshape(-1, 4, 4).mean(axis=0)
    s_a = np.array([np.real(np.trace(mean @ np.kron(PAULI[i], _ID))) for i in range(1, 4)])
    s_b = np.array([np.real(np.trace(mean @ np.kron(_ID, PAULI[i]))) for i in range(1, 4)])
    t = np.array(
        [
            [np.real(np.trace(mean @ np.kron(PAULI[i], PAULI[k]))) for k in range(1, 4)]
            for i in range(1, 4)
        ]
    )
    return CollectiveMoments(s_a=s_a, s_b=s_b, t=t)


def virtual_qubit_state(moments, psd_tol=None):
    """4x4 virtual two-qubit density matrix reconstructed from moments.

    Physical input moments always give a PSD matrix (the reconstruction
    equals the uniform mixture over all pairs); a PSD violation therefore
    signals non-physical input.
    """
    rho = np.kron(_ID, _ID).astype(complex)
    for i in range(3):
        rho += moments.s_a[i] * np.kron(PAULI[i + 1], _ID)
        rho += moments.s_b[i] * np.kron(_ID, PAULI[i + 1])
        for k in range(3):
            rho += moments.t[i, k] * np.kron(PAULI[i + 1], PAULI[k + 1])
    rho /= 4.0
    tol = TOL.psd if psd_tol is None else psd_tol
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("moments do not describe a physical ensemble (virtual state not PSD)")
    return rho


def partial_transpose(rho, dims=(2, 2), subsystem=1):
    """Partial transpose of a bipartite density matrix."""
    da, db = dims
    r = np.asarray(rho).reshape(da, db, da, db)
    if subsystem == 1:
        r = r.transpose(0, 3, 2, 1)
    else:
        r = r.transpose(2, 1, 0, 3)
    return r.reshape(da * db, da * db)


def negativity(rho):
    """Entanglement negativity (Tr|rho^pT| - 1)/2 = |sum of negative eigenvalues|."""
    evals = np.linalg.eigvalsh(partial_transpose(rho))
    return float(max(0.0, -evals[evals < 0.0].sum()))


def xxz_eigenvalue(c, h_xx, t_zz, sign=1.0):
    """The only possibly-negative partial-transpose eigenvalue of xxz-form states.

    nu = (1 - sqrt(c^2 + 4 h_xx^2) + sign * t_zz) / 4, where c is the sum
    (or difference) of the z-polarizations and sign matches h_yy = sign*h_xx.
    """
    return 0.25 * (1.0 - math.sqrt(c * c + 4.0 * h_xx * h_xx) + sign * t_zz)


def dicke_pair_state(n_total, k):
    """Reduced two-qubit state of a symmetric N-spin state with k excitations."""
    if not 0 <= k <= n_total or n_total < 2:
        raise ValueError("need N >= 2 and 0 <= k <= N")
    n, k = float(n_total), float(k)
    d = (n - k) * (n - k - 1.0) / (n * (n - 1.0))
    e = k * (k - 1.0) / (n * (n - 1.0))
    f = k * (n - k) / (n * (n - 1.0))
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = d            # |00><00|
    rho[3, 3] = e            # |11><11|
    rho[1, 1] = rho[2, 2] = f
    rho[1, 2] = rho[2, 1] = f  # 2f |psi+><psi+|
    return rho


def dicke_collective(n_total, k, n_block=1):
    """(virtual pair state, E_ab) for blocks drawn from a Dicke state.

    The moments are position-independent, so E_ab is the same for every
    admissible block size n_block <= N/2.
    """
    if not 1 <= n_block <= n_total // 2:
        raise ValueError("block size must satisfy 1 <= n <= N/2")
    rho_pair = dicke_pair_state(n_total, k)
    moments = moments_from_pair_states(rho_pair)
    virtual = virtual_qubit_state(moments)
    n, kk = float(n_total), float(k)
    d = (n - kk) * (n - kk - 1.0) / (n * (n - 1.0))
    e = kk * (kk - 1.0) / (n * (n - 1.0))
    f = kk * (n - kk) / (n * (n - 1.0))
    nu = 0.5 * (d + e) - 0.5 * math.sqrt((e - d) ** 2 + 4.0 * f * f)
    return virtual, abs(min(0.0, nu))


def singlet_collective(n):
    """Collective negativity 1/(2n) of two samples in a generalized singlet."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return 1.0 / (2.0 * n)


def singlet_moments(n):
    """Moments of the generalized singlet: t = -(n+2)/(3n) on the diagonal."""
    t = -(n + 2.0) / (3.0 * n) * np.eye(3)
    return CollectiveMoments(t=t)


def admixture_collective(n, p):
    """(E_ab, n_c) for the singlet mixed with perfectly z-correlated pairs.

    E_ab = (1 + p - n(1-p)) / (4n) while n < n_c = ceil((1+p)/(1-p)), and 0
    beyond the critical sample size; p = 1 recovers the pure singlet.
    """
    if not 0.0 <= p <= 1.0 or n < 1:
        raise ValueError("need p in [0,1] and n >= 1")
    if p == 1.0:
        return 1.0 / (2.0 * n), math.inf
    n_c = math.ceil((1.0 + p) / (1.0 - p))
    e_ab = (1.0 + p - n * (1.0 - p)) / (4.0 * n)
    return (e_ab if n < n_c else 0.0), n_c


def admixture_moments(n, p):
    """Moments of the singlet/z-correlated mixture."""
    txx = -p * (n + 2.0) / (3.0 * n)
    tzz = -p * (n - 1.0) / (3.0 * n) - 1.0 / n
    return CollectiveMoments(t=np.diag([txx, txx, tzz]))


def multipartite_virtual(t_tensor, psd_tol=None):
    """Virtual M-qubit density matrix from an order-M normalized correlation tensor.

    ``t_tensor`` has shape (4,)*M indexed by 0 = identity, 1..3 = x, y, z;
    the all-zero entry must be 1.  M is capped at 6 (dense 2^M).
    """
    t = np.asarray(t_tensor, dtype=float)
    m_parts = t.ndim
    if t.shape != (4,) * m_parts:
        raise ValueError("tensor must have shape (4,)*M")
    if m_parts > 6:
        raise ValueError("M capped at 6")
    if abs(t[(0,) * m_parts] - 1.0) > 1e-12:
        raise ValueError("identity component must equal 1")
    dim = 2**m_parts
    rho = np.zeros((dim, dim), dtype=complex)
    for idx in product(range(4), repeat=m_parts):
        coeff = t[idx]
        if coeff == 0.0:
            continue
        op = np.array([[1.0]], dtype=complex)
        for i in idx:
            op = np.kron(op, PAULI[i])
        rho += coeff * op
    rho /= dim
    tol = TOL.psd if psd_tol is None else psd_tol
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("tensor does not describe a physical ensemble")
    return rho


def proposition1_check(pair_states):
    """Convexity bound: collective negativity <= average pairwise negativity.

    Returns (collective, average, gap) with gap = average - collective,
    which is nonnegative for every explicit ensemble.
    """
    states = np.asarray(pair_states, dtype=complex).reshape(-1, 4, 4)
    average = float(np.mean([negativity(rho) for rho in states]))
    collective = negativity(virtual_qubit_state(moments_from_pair_states(states)))
    return collective, average, average - collective
