"""An oscillating Schroedinger-cat spin and its coarse-grained phenomenology.

The generator couples only the two polar coherent states, so |+j> evolves
into cos(wt)|+j> + sin(wt)|-j>: a superposition of macroscopically distinct
states.  Level splitting of the active two-level block is 2w, i.e. the
system behaves as a spin-1/2 precessing at the effective frequency 2w.
"""

import math
from dataclasses import dataclass

import numpy as np

from .coarse import build_povm, make_partition, povm_two_time_correlation
from .leggett_garg import LGResult, Propagator
from .special import as_twice

__all__ = [
    "CatModel",
    "cat_hamiltonian",
    "cat_state",
    "hemisphere_lg",
    "DecoherenceTrace",
    "decoherence_trace",
    "survival_exponential",
    "survival_undecohered",
    "decohered_noninvasiveness",
    "cat_circuit_simulate",
    "info_bits",
]


@dataclass(frozen=True)
class CatModel:
    """Spin length and oscillation frequency of the cat generator."""

    j: float
    omega: float = 1.0

    @property
    def effective_precession(self):
        """Two-level splitting 2*omega seen by dichotomic measurements."""
        return 2.0 * self.omega


def cat_hamiltonian(model):
    """i w (|-j><+j| - |+j><-j|) as a dense matrix."""
    d = as_twice(model.j, "j") + 1
    h = np.zeros((d, d), dtype=complex)
    h[d - 1, 0] = 1j * model.omega
    h[0, d - 1] = -1j * model.omega
    return h


def cat_state(model, t):
    """cos(wt)|+j> + sin(wt)|-j> (exact solution from |+j> at t = 0)."""
    d = as_twice(model.j, "j") + 1
    psi = np.zeros(d, dtype=complex)
    psi[0] = math.cos(model.omega * t)
    psi[-1] = math.sin(model.omega * t)
    return psi


def hemisphere_lg(model, times, initial=None):
    """Leggett-Garg combination from which-hemisphere POVM measurements.

    Runs the full Kraus pipeline; 4 times give the CHSH form (bound 2),
    3 times the Wigner form (bound 1).  Correlations follow
    cos(2w(tj - ti)) up to exponentially small corrections in j.
    """
    times = list(times)
    if sorted(times) != times:
        raise ValueError("times must be ordered")
    povm = build_povm(make_partition(model.j, mode="hemispheres"))
    prop = Propagator(cat_hamiltonian(model))
    rho0 = cat_state(model, 0.0) if initial is None else initial
    signs = (1.0, -1.0)  # north, south

    def corr(ti, tj):
        return povm_two_time_correlation(rho0, prop, povm, signs, ti, tj)

    if len(times) == 4:
        t1, t2, t3, t4 = times
        c = (corr(t1, t2), corr(t2, t3), corr(t3, t4), corr(t1, t4))
        k = c[0] + c[1] + c[2] - c[3]
        return LGResult(correlations=c, k_value=float(k), bound=2.0)
    if len(times) == 3:
        t1, t2, t3 = times
        c = (corr(t1, t2), corr(t2, t3), corr(t1, t3))
        k = c[0] + c[1] - c[2]
        return LGResult(correlations=c, k_value=float(k), bound=1.0)
    raise ValueError("need 3 or 4 measurement times")


@dataclass(frozen=True)
class DecoherenceTrace:
    """Survival probabilities under alternating free evolution and dephasing."""

    dt: float
    a: float                 # cos^2(w dt) per free step
    survival: np.ndarray     # A_0 ... A_n
    nu: float                # fitted exponential decay rate

    def survival_law(self, t):
        """Fitted A(t) = (1 + exp(-nu t)) / 2, decaying from 1 to 1/2."""
        return 0.5 * (1.0 + np.exp(-self.nu * np.asarray(t)))


def decoherence_trace(model, dt, n_steps):
    """Iterate A_n = a A_{n-1} + (1-a)(1 - A_{n-1}) and fit the decay rate.

    a = 1 freezes the state (Zeno-like, nu = 0); a = 0 flips it
    deterministically each step (nu = inf).
    """
    if n_steps < 1:
        raise ValueError("n_steps >= 1 required")
    a = math.cos(model.omega * dt) ** 2
    surv = np.empty(n_steps + 1)
    surv[0] = 1.0
    for n in range(1, n_steps + 1):
        surv[n] = a * surv[n - 1] + (1.0 - a) * (1.0 - surv[n - 1])
    # log-linear fit of |2 A_n - 1| = |2a-1|^n, excluding the noise floor
    resid = np.abs(2.0 * surv - 1.0)
    if a >= 1.0 - 1e-12:
        nu = 0.0
    elif a <= 1e-12:
        nu = math.inf
    else:
        keep = resid > 1e-6
        n_idx = np.nonzero(keep)[0]
        slope = np.polyfit(n_idx * dt, np.log(resid[keep]), 1)[0]
        nu = -slope
    return DecoherenceTrace(dt=dt, a=a, survival=surv, nu=nu)


def survival_exponential(trace):
    """Survival law with exponential envelope (the decohered dynamics itself)."""
    r = abs(2.0 * trace.a - 1.0)
    sign = 1.0 if trace.a >= 0.5 else -1.0

    def law(steps):
        return 0.5 * (1.0 + (sign * r) ** np.asarray(steps))

    return law


def survival_undecohered(model, dt):
    """Bare quantum survival cos^2(w n dt), i.e. no dephasing between steps."""

    def law(steps):
        return np.cos(model.omega * dt * np.asarray(steps)) ** 2

    return law


def decohered_noninvasiveness(survival_law, i, j):
    """Gap of the classical-path decomposition for a step measurement at i < j.

    The unmeasured north-weight at step j must equal the two-path
    composition through step i; any non-exponential survival law breaks
    this.
    """
    if not 0 <= i < j:
        raise ValueError("requires 0 <= i < j")
    a_j = float(survival_law(j))
    a_i = float(survival_law(i))
    a_d = float(survival_law(j - i))
    composed = a_i * a_d + (1.0 - a_i) * (1.0 - a_d)
    return abs(a_j - composed)


def _rotate_first_qubit(psi, angle):
    """|1> -> cos|1> + sin|0>, |0> -> cos|0> - sin|1> on qubit 0."""
    c, s = math.cos(angle), math.sin(angle)
    psi = psi.reshape(2, -1)
    new0 = c * psi[0] + s * psi[1]
    new1 = -s * psi[0] + c * psi[1]
    return np.concatenate([new0, new1])


def _chain_cnot(psi, n, control, target):
    """Flip ``target`` when ``control`` is 0 (keeps the all-ones branch fixed)."""
    psi = psi.reshape((2,) * n)
    idx0 = [slice(None)] * n
    idx0[control] = 0
    sub = psi[tuple(idx0)]
    axis = target if target < control else target - 1
    psi[tuple(idx0)] = np.flip(sub, axis=axis).copy()
    return psi.reshape(-1)


def cat_circuit_simulate(n_qubits, omega_dt, n_intervals):
    """Nearest-neighbor gate simulation of the cat evolution on N qubits.

    Per interval: undo the ladder of c-nots, rotate qubit 0 by omega_dt,
    redo the ladder.  Returns (amplitude_ones, amplitude_zeros, gate_tally).
    """
    if n_qubits > 20:
        raise ValueError("statevector capped at 20 qubits")
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits")
    dim = 2**n_qubits
    psi = np.zeros(dim, dtype=complex)
    psi[-1] = 1.0  # |11...1>
    gates = 0
    for interval in range(n_intervals):
        if interval > 0:
            for k in reversed(range(n_qubits - 1)):
                psi = _chain_cnot(psi, n_qubits, k, k + 1)
                gates += 1
        psi = _rotate_first_qubit(psi, omega_dt)
        gates += 1
        for k in range(n_qubits - 1):
            psi = _chain_cnot(psi, n_qubits, k, k + 1)
            gates += 1
    return complex(psi[-1]), complex(psi[0]), gates


def info_bits(j, c):
    """(sharp, coarse) information content of one measurement in bits.

    Sharp resolution distinguishes 2j outcomes: 1 + log2(j) bits.  Slots of
    size c*sqrt(j) leave 1 - log2(c) + log2(j)/2 bits; the ratio tends to
    1/2 for large j.
    """
    if j < 1 or c < 1:
        raise ValueError("requires j >= 1 and c >= 1")
    sharp = 1.0 + math.log2(j)
    coarse = 1.0 - math.log2(c) + 0.5 * math.log2(j)
    return sharp, coarse
