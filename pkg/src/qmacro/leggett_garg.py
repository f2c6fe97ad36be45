"""Two-time correlations with the projection postulate and Leggett-Garg quantities.

The CHSH-type combination K = C12 + C23 + C34 - C14 is bounded by 2 in any
macrorealistic theory; the Wigner-type combination K = C12 + C23 - C13 by 1.
Quantum evolutions violate both, and the closed forms implemented here say
by how much.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .special import as_twice, sinc_ratio
from .spin import as_density

__all__ = [
    "Propagator",
    "DichotomicObservable",
    "parity_observable",
    "survival_observable",
    "LGResult",
    "two_time_correlation",
    "sampled_correlation",
    "analytic_parity_correlation",
    "lg_chsh",
    "lg_wigner",
    "analytic_k_parity",
    "lg_wigner_survival",
    "classical_rotor_correlation",
    "classical_ensemble_sign_correlation",
    "classical_ensemble_char_fn",
    "chsh_from_joint",
    "find_k_maximum",
]


class Propagator:
    """exp(-i H t) factory for a fixed Hermitian generator H."""

    def __init__(self, hamiltonian):
        h = np.asarray(hamiltonian, dtype=complex)
        if np.max(np.abs(h - h.conj().T)) > TOL.hermitian:
            raise ValueError("generator must be Hermitian")
        self._evals, self._evecs = np.linalg.eigh(h)

    def at(self, t):
        phases = np.exp(-1j * self._evals * float(t))
        return (self._evecs * phases) @ self._evecs.conj().T

    def evolve(self, state, t):
        u = self.at(t)
        state = np.asarray(state)
        if state.ndim == 1:
            return u @ state
        return u @ state @ u.conj().T


@dataclass(frozen=True)
class DichotomicObservable:
    """Projector pair for outcomes +1 / -1."""

    plus_projector: np.ndarray
    minus_projector: np.ndarray

    def __post_init__(self):
        p, q = self.plus_projector, self.minus_projector
        d = p.shape[0]
        for proj in (p, q):
            if np.max(np.abs(proj @ proj - proj)) > TOL.unitary:
                raise ValueError("projectors must be idempotent")
        if np.max(np.abs(p + q - np.eye(d))) > TOL.unitary:
            raise ValueError("projectors must sum to the identity")

    @property
    def operator(self):
        return self.plus_projector - self.minus_projector


def parity_observable(j):
    """Dichotomic +/-1 observable from the spin parity operator."""
    from .spin import parity_operator

    a = parity_operator(j)
    eye = np.eye(a.shape[0])
    return DichotomicObservable((eye + a) / 2.0, (eye - a) / 2.0)


def survival_observable(psi0):
    """Asks 'is the system still in |psi0>?' (outcome +1) or not (-1)."""
    psi0 = np.asarray(psi0, dtype=complex)
    p = np.outer(psi0, psi0.conj())
    return DichotomicObservable(p, np.eye(psi0.size) - p)


@dataclass(frozen=True)
class LGResult:
    correlations: tuple
    k_value: float
    bound: float

    @property
    def violated(self):
        return self.k_value > self.bound


def two_time_correlation(rho0, propagator, obs, ti, tj):
    """<A_i A_j> with Lueders reduction at the first measurement time.

    C = sum_{k,l} k*l * p(k at ti) * p(l at tj | k at ti); zero-probability
    branches contribute nothing.
    """
    if tj < ti:
        raise ValueError("requires ti <= tj")
    rho_i = propagator.evolve(as_density(rho0), ti)
    a_op = obs.operator
    c = 0.0
    for sign, proj in ((1.0, obs.plus_projector), (-1.0, obs.minus_projector)):
        branch = proj @ rho_i @ proj
        p_branch = np.real(np.trace(branch))
        if p_branch <= TOL.zero_branch:
            continue
        evolved = propagator.evolve(branch / p_branch, tj - ti)
        c += sign * p_branch * np.real(np.trace(evolved @ a_op))
    return float(c)


def sampled_correlation(rho0, propagator, obs, ti, tj, shots, seed):
    """Monte-Carlo estimate of the two-time correlation (seeded).

    Draws the first outcome from the Born probabilities at ti, reduces, and
    draws the second at tj; returns (mean, standard error).  Exact branch
    probabilities remain the default everywhere else.
    """
    rng = np.random.default_rng(seed)
    rho_i = propagator.evolve(as_density(rho0), ti)
    branches = []
    for sign, proj in ((1.0, obs.plus_projector), (-1.0, obs.minus_projector)):
        branch = proj @ rho_i @ proj
        p_branch = float(np.real(np.trace(branch)))
        if p_branch <= TOL.zero_branch:
            branches.append((sign, 0.0, 0.5))
            continue
        evolved = propagator.evolve(branch / p_branch, tj - ti)
        q_plus = float(np.real(np.trace(evolved @ obs.plus_projector)))
        branches.append((sign, p_branch, min(1.0, max(0.0, q_plus))))
    signs = np.array([b[0] for b in branches])
    probs = np.array([b[1] for b in branches])
    probs = probs / probs.sum()
    first = rng.choice(len(branches), size=shots, p=probs)
    q_plus = np.array([branches[i][2] for i in first])
    second = np.where(rng.uniform(size=shots) < q_plus, 1.0, -1.0)
    products = signs[first] * second
    return float(np.mean(products)), float(np.std(products) / math.sqrt(shots))


def analytic_parity_correlation(j, omega_dt):
    """Closed-form parity correlation sin((2j+1)x) / ((2j+1) sin x), x = omega*dt."""
    n = as_twice(j, "j") + 1
    return sinc_ratio(n, omega_dt)


def lg_chsh(correlation_fn, t1, t2, t3, t4):
    """CHSH-type Leggett-Garg combination; macrorealistic bound 2."""
    if not (t1 < t2 < t3 < t4):
        raise ValueError("requires t1 < t2 < t3 < t4")
    c12 = correlation_fn(t1, t2)
    c23 = correlation_fn(t2, t3)
    c34 = correlation_fn(t3, t4)
    c14 = correlation_fn(t1, t4)
    k = c12 + c23 + c34 - c14
    return LGResult(correlations=(c12, c23, c34, c14), k_value=float(k), bound=2.0)


def lg_wigner(correlation_fn, t1, t2, t3):
    """Wigner-type Leggett-Garg combination; macrorealistic bound 1."""
    if not (t1 < t2 < t3):
        raise ValueError("requires t1 < t2 < t3")
    c12 = correlation_fn(t1, t2)
    c23 = correlation_fn(t2, t3)
    c13 = correlation_fn(t1, t3)
    k = c12 + c23 - c13
    return LGResult(correlations=(c12, c23, c13), k_value=float(k), bound=1.0)


def analytic_k_parity(x):
    """Large-spin K(x) = 3 sin(x)/x - sin(3x)/(3x) for equidistant parity runs."""
    x = np.asarray(x, dtype=float)
    return 3.0 * np.sinc(x / np.pi) - np.sinc(3.0 * x / np.pi)


def lg_wigner_survival(p1, p2, gamma):
    """K = 4 p1 sqrt(p2) cos(gamma) - 4 p2 + 1 from survival probabilities."""
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        raise ValueError("survival probabilities must lie in [0, 1]")
    return 4.0 * p1 * math.sqrt(p2) * math.cos(gamma) - 4.0 * p2 + 1.0


def classical_rotor_correlation(omega, ti, tj):
    """Deterministic rotating-vector sign correlation sgn(cos w ti) sgn(cos w tj)."""
    return float(np.sign(math.cos(omega * ti)) * np.sign(math.cos(omega * tj)))


def _isotropic_directions(n_samples, rng):
    z = rng.uniform(-1.0, 1.0, n_samples)
    phi = rng.uniform(0.0, 2 * np.pi, n_samples)
    s = np.sqrt(1.0 - z**2)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def _z_projection_at(n0, omega, t):
    """z-component of unit vectors n0 rotating about x with frequency omega."""
    c, s = math.cos(omega * t), math.sin(omega * t)
    return s * n0[:, 1] + c * n0[:, 2]


def classical_ensemble_sign_correlation(omega, ti, tj, n_samples=100000, seed=0):
    """Monte-Carlo sign correlation for an isotropic classical spin ensemble."""
    rng = np.random.default_rng(seed)
    n0 = _isotropic_directions(n_samples, rng)
    ai = np.sign(_z_projection_at(n0, omega, ti))
    aj = np.sign(_z_projection_at(n0, omega, tj))
    return float(np.mean(ai * aj))


def classical_ensemble_char_fn(j, xi, eta, theta, n_samples=1000000, seed=0):
    """Monte-Carlo two-time characteristic function of the classical ensemble.

    Samples m_i = J * (z-projection) with J = j + 1/2 after rotations by 0
    and theta about x; returns (mean, standard error) of the real part.
    """
    rng = np.random.default_rng(seed)
    big_j = float(j) + 0.5
    n0 = _isotropic_directions(n_samples, rng)
    m1 = big_j * _z_projection_at(n0, 1.0, 0.0)
    m2 = big_j * _z_projection_at(n0, 1.0, theta)
    vals = np.cos(xi * m1 + eta * m2)
    return float(np.mean(vals)), float(np.std(vals) / math.sqrt(n_samples))


def chsh_from_joint(joint):
    """K for an explicit joint distribution over four predetermined +/-1 values.

    ``joint`` maps to probabilities indexed by (a1, a2, a3, a4) bits with
    0 -> +1 and 1 -> -1; any such assignment satisfies K <= 2 exactly.
    """
    p = np.asarray(joint, dtype=float).reshape(2, 2, 2, 2)
    if abs(p.sum() - 1.0) > 1e-12 or np.any(p < -1e-15):
        raise ValueError("joint must be a probability distribution")
    vals = 1.0 - 2.0 * np.arange(2)

    def corr(i, k):
        c = 0.0
        for idx, prob in np.ndenumerate(p):
            c += vals[idx[i]] * vals[idx[k]] * prob
        return c

    k = corr(0, 1) + corr(1, 2) + corr(2, 3) - corr(0, 3)
    return float(k)


def find_k_maximum(fn, lo, hi, coarse=1000, refine_tol=1e-10):
    """Locate the maximum of a smooth 1-D function by scan + golden-section."""
    xs = np.linspace(lo, hi, coarse)
    ys = np.asarray([fn(x) for x in xs])
    i = int(np.argmax(ys))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, coarse - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    while b - a > refine_tol:
        if fn(c) > fn(d):
            b, d = d, c
            c = b - invphi * (b - a)
        else:
            a, c = c, d
            d = a + invphi * (b - a)
    x = (a + b) / 2.0
    return x, fn(x)
