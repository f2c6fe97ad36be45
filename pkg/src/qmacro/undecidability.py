"""Boolean-function black boxes, Pauli axioms, and decidability as GF(2) membership.

A length-N Pauli string is a pair of bit vectors (x_bits, z_bits) with the
per-site phase convention i^(x z) sigma_x^x sigma_z^z, which makes every
string Hermitian with eigenvalues +/-1.  A proposition (string) is decidable
within a commuting independent axiom set iff its bit vector lies in the
GF(2) span of the axioms; measured on the joint eigenstate it is then
deterministic, and otherwise uniformly random.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

__all__ = [
    "BooleanFn",
    "PauliString",
    "pauli_product",
    "AxiomSet",
    "blackbox_unitary",
    "blackbox_pauli_strings",
    "apply_pauli",
    "measure_pauli",
    "MeasurementStats",
    "joint_eigenstate",
    "decidability_test",
    "decidable_randomness_audit",
    "ghz_axioms",
    "ghz_contradiction",
    "bell_axioms",
]

_S0 = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class BooleanFn:
    """A Boolean function of one bit, recorded as the value pair (f(0), f(1))."""

    f0: int
    f1: int

    def __post_init__(self):
        if self.f0 not in (0, 1) or self.f1 not in (0, 1):
            raise ValueError("f0, f1 must be bits")


@dataclass(frozen=True)
class PauliString:
    """Hermitian N-qubit Pauli operator encoded by x/z bit vectors."""

    x_bits: tuple
    z_bits: tuple

    def __post_init__(self):
        if len(self.x_bits) != len(self.z_bits):
            raise ValueError("bit vectors must have equal length")
        if any(b not in (0, 1) for b in self.x_bits + self.z_bits):
            raise ValueError("entries must be bits")

    @property
    def n_qubits(self):
        return len(self.x_bits)

    @property
    def symplectic(self):
        return np.array(self.x_bits + self.z_bits, dtype=np.uint8)

    def commutes_with(self, other):
        x1, z1 = np.array(self.x_bits), np.array(self.z_bits)
        x2, z2 = np.array(other.x_bits), np.array(other.z_bits)
        return int(np.dot(x1, z2) + np.dot(z1, x2)) % 2 == 0

    def to_matrix(self):
        site = {
            (0, 0): _S0,
            (1, 0): _SX,
            (0, 1): _SZ,
            (1, 1): 1j * _SX @ _SZ,  # = sigma_y
        }
        op = np.array([[1.0]], dtype=complex)
        for x, z in zip(self.x_bits, self.z_bits):
            op = np.kron(op, site[(x, z)])
        return op

    def label(self):
        names = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        return "".join(names[(x, z)] for x, z in zip(self.x_bits, self.z_bits))


def pauli_product(strings):
    """Product of Hermitian Pauli strings as (PauliString, sign).

    Tracks the power of i accumulated by the per-site i^(xz) convention and
    by reordering sigma_x past sigma_z; for mutually commuting factors the
    accumulated phase is always +/-1, returned as ``sign``.
    """
    strings = list(strings)
    n = strings[0].n_qubits
    x = np.zeros(n, dtype=int)
    z = np.zeros(n, dtype=int)
    exp_i = 0  # power of i, mod 4
    for s in strings:
        sx = np.array(s.x_bits, dtype=int)
        sz = np.array(s.z_bits, dtype=int)
        # each factor carries i^(sx.sz); commuting its sigma_x block past the
        # accumulated sigma_z block gives (-1)^(z.sx)
        exp_i += int(np.dot(sx, sz)) + 2 * int(np.dot(z, sx))
        x += sx
        z += sz
    x %= 2
    z %= 2
    # normalize the result's own i^(x.z) convention away
    exp_i -= int(np.dot(x, z))
    exp_i %= 4
    if exp_i == 0:
        sign = 1.0
    elif exp_i == 2:
        sign = -1.0
    else:
        raise ValueError("product of these strings is not Hermitian (odd power of i)")
    return PauliString(tuple(int(v) for v in x), tuple(int(v) for v in z)), sign


@dataclass(frozen=True)
class AxiomSet:
    """Independent, mutually commuting Pauli strings with assigned truth bits.

    Truth bit b encodes eigenvalue (-1)^b of the string on the encoding
    state: bit 0 = proposition holds = eigenvalue +1.
    """

    strings: tuple
    truth_bits: tuple

    def __post_init__(self):
        if len(self.strings) != len(self.truth_bits):
            raise ValueError("one truth bit per axiom")
        if any(b not in (0, 1) for b in self.truth_bits):
            raise ValueError("truth bits must be 0/1")
        rows = np.array([s.symplectic for s in self.strings], dtype=np.uint8)
        if _gf2_rank(rows) != len(self.strings):
            raise ValueError("axiom strings are GF(2)-dependent")
        for i, a in enumerate(self.strings):
            for b in self.strings[i + 1 :]:
                if not a.commutes_with(b):
                    raise ValueError("axiom strings must mutually commute")

    @property
    def n_qubits(self):
        return self.strings[0].n_qubits


def _gf2_rank(rows):
    m = rows.copy() % 2
    rank = 0
    n_cols = m.shape[1] if m.size else 0
    for col in range(n_cols):
        pivot = None
        for r in range(rank, m.shape[0]):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _gf2_solve(rows, target):
    """Solve k @ rows = target over GF(2); returns k or None."""
    n_rows = rows.shape[0]
    aug = np.concatenate([rows.T % 2, (target % 2)[:, None]], axis=1).astype(np.uint8)
    # eliminate on the transposed system: columns are the unknown k_p
    piv_cols = []
    rank = 0
    for col in range(n_rows):
        pivot = None
        for r in range(rank, aug.shape[0]):
            if aug[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        aug[[rank, pivot]] = aug[[pivot, rank]]
        for r in range(aug.shape[0]):
            if r != rank and aug[r, col]:
                aug[r] ^= aug[rank]
        piv_cols.append(col)
        rank += 1
    for r in range(rank, aug.shape[0]):
        if aug[r, -1]:
            return None
    k = np.zeros(n_rows, dtype=np.uint8)
    for r, col in enumerate(piv_cols):
        k[col] = aug[r, -1]
    return k


def blackbox_unitary(fns, n_qubits=None):
    """Tensor product of sigma_x^f(0) sigma_z^f(1) encoding the Boolean functions."""
    fns = list(fns)
    if n_qubits is not None and len(fns) != n_qubits:
        raise ValueError("one Boolean function per qubit")
    if len(fns) > 12:
        raise ValueError("dense black box capped at 12 qubits")
    op = np.array([[1.0]], dtype=complex)
    for f in fns:
        site = np.linalg.matrix_power(_SX, f.f0) @ np.linalg.matrix_power(_SZ, f.f1)
        op = np.kron(op, site)
    return op


def blackbox_pauli_strings(fns):
    """The black box as an (unnormalized-phase) Pauli string pair of bit vectors."""
    return PauliString(tuple(f.f0 for f in fns), tuple(f.f1 for f in fns))


def apply_pauli(state, pauli):
    """P |psi> for a Pauli string, computed with index masks on the statevector."""
    state = np.asarray(state, dtype=complex)
    n = pauli.n_qubits
    dim = 1 << n
    if state.shape[0] != dim:
        raise ValueError("state dimension does not match the Pauli string")
    x_mask = 0
    z_mask = 0
    for k, (x, z) in enumerate(zip(pauli.x_bits, pauli.z_bits)):
        if x:
            x_mask |= 1 << (n - 1 - k)
        if z:
            z_mask |= 1 << (n - 1 - k)
    idx = np.arange(dim)
    z_parity = np.array([bin(b & z_mask).count("1") & 1 for b in idx])
    global_i = sum(x * z for x, z in zip(pauli.x_bits, pauli.z_bits)) % 4
    phase = (1j**global_i) * (-1.0) ** z_parity
    out = np.empty_like(state)
    out[idx ^ x_mask] = phase * state
    return out


@dataclass(frozen=True)
class MeasurementStats:
    p_plus: float
    p_minus: float
    counts: tuple
    deterministic: bool
    seed: int | None


def measure_pauli(state, pauli, shots=0, seed=None):
    """Outcome statistics of measuring a Pauli string on a pure state.

    Exact probabilities come from the projectors (1 +/- P)/2; sampling uses
    a seeded generator.  ``deterministic`` flags max probability > 1 - 1e-10.
    """
    state = np.asarray(state, dtype=complex)
    expect = float(np.real(np.vdot(state, apply_pauli(state, pauli))))
    p_plus = min(1.0, max(0.0, (1.0 + expect) / 2.0))
    p_minus = 1.0 - p_plus
    counts = (0, 0)
    if shots:
        if seed is None:
            raise ValueError("sampling requires a seed")
        rng = np.random.default_rng(seed)
        n_plus = int(rng.binomial(shots, p_plus))
        counts = (n_plus, shots - n_plus)
    deterministic = max(p_plus, p_minus) > 1.0 - 1e-10
    return MeasurementStats(p_plus, p_minus, counts, deterministic, seed)


def joint_eigenstate(axioms):
    """The pure state stabilized by (-1)^bit * string for every axiom."""
    n = axioms.n_qubits
    dim = 1 << n
    for ref in range(dim):
        psi = np.zeros(dim, dtype=complex)
        psi[ref] = 1.0
        for s, bit in zip(axioms.strings, axioms.truth_bits):
            psi = (psi + (-1.0) ** bit * apply_pauli(psi, s)) / 2.0
        norm = np.linalg.norm(psi)
        if norm > 1e-8:
            return psi / norm
    raise RuntimeError("no joint eigenstate found (inconsistent axiom set)")


def decidability_test(axioms, theta):
    """GF(2) membership of ``theta`` in the axiom span.

    Returns (k, derived_bit) on success, where theta's bit vector equals
    sum_p k_p * axiom_p and derived_bit = XOR of the selected truth bits
    (the logic-level value, before any operator-product sign); returns None
    if undecidable.
    """
    rows = np.array([s.symplectic for s in axioms.strings], dtype=np.uint8)
    k = _gf2_solve(rows, theta.symplectic)
    if k is None:
        return None
    derived = int(np.dot(k, np.array(axioms.truth_bits, dtype=int))) % 2
    return k, derived


def decidable_randomness_audit(axioms, shots=0, seed=None, prob_tol=1e-10):
    """Check decidable <=> deterministic over all 4^N Pauli strings.

    Measures every string on the axioms' joint eigenstate.  Returns a list
    of report rows and asserts nothing itself; the counting laws (2^N
    decidable strings) are left to the caller.
    """
    n = axioms.n_qubits
    psi = joint_eigenstate(axioms)
    rows = []
    for bits in product((0, 1), repeat=2 * n):
        theta = PauliString(tuple(bits[:n]), tuple(bits[n:]))
        verdict = decidability_test(axioms, theta)
        shot_seed = None
        if shots and seed is not None:
            shot_seed = seed + len(rows)
        stats = measure_pauli(psi, theta, shots=shots, seed=shot_seed)
        decidable = verdict is not None
        uniform = abs(stats.p_plus - 0.5) <= prob_tol
        row = {
            "theta": theta.label(),
            "decidable": decidable,
            "k": None if verdict is None else [int(v) for v in verdict[0]],
            "derived_bit": None if verdict is None else verdict[1],
            "deterministic": stats.deterministic,
            "uniform": uniform,
            "p_plus": stats.p_plus,
            "counts": stats.counts,
            "seed": shot_seed,
        }
        if decidable:
            # eigenvalue bookkeeping: measured bit must match the derived bit
            # corrected by the sign of the operator product
            chosen = [s for s, kp in zip(axioms.strings, verdict[0]) if kp]
            if chosen:
                _, sign = pauli_product(chosen)
            else:
                sign = 1.0
            predicted = (verdict[1] + (0 if sign > 0 else 1)) % 2
            row["measured_bit"] = 0 if stats.p_plus > 0.5 else 1
            row["predicted_bit"] = predicted
        rows.append(row)
    return rows


def ghz_axioms():
    """The three two-Y-one-X strings fixing the 3-qubit GHZ state, truth bits 1."""
    s1 = PauliString((1, 1, 1), (1, 1, 0))  # Y Y X
    s2 = PauliString((1, 1, 1), (1, 0, 1))  # Y X Y
    s3 = PauliString((1, 1, 1), (0, 1, 1))  # X Y Y
    return AxiomSet(strings=(s1, s2, s3), truth_bits=(1, 1, 1))


def bell_axioms():
    """Two-qubit stabilizer axioms ZZ, XX of the |Phi+> Bell state, truth bits 0."""
    s1 = PauliString((0, 0), (1, 1))  # Z Z
    s2 = PauliString((1, 1), (0, 0))  # X X
    return AxiomSet(strings=(s1, s2), truth_bits=(0, 0))


def ghz_contradiction():
    """Logic vs quantum value of the XXX proposition under the GHZ axioms.

    GF(2) derivation gives truth bit 1 (XOR of the axiom bits); the quantum
    expectation of XXX on the GHZ state is +1 (bit 0) because the operator
    product of the three axioms is -XXX.  Returns a report dict with the
    full sign bookkeeping.
    """
    axioms = ghz_axioms()
    theta = PauliString((1, 1, 1), (0, 0, 0))  # X X X
    verdict = decidability_test(axioms, theta)
    if verdict is None:
        raise RuntimeError("XXX must be decidable under the GHZ axioms")
    k, derived_bit = verdict
    prod_string, sign = pauli_product(axioms.strings)
    psi = joint_eigenstate(axioms)
    stats_axioms = [measure_pauli(psi, s) for s in axioms.strings]
    stats_theta = measure_pauli(psi, theta)
    quantum_bit = 0 if stats_theta.p_plus > 0.5 else 1
    return {
        "axioms": [s.label() for s in axioms.strings],
        "axiom_bits": list(axioms.truth_bits),
        "axiom_expectations": [s.p_plus - s.p_minus for s in stats_axioms],
        "theta": theta.label(),
        "k": [int(v) for v in k],
        "classical_bit": derived_bit,
        "product_string": prod_string.label(),
        "product_sign": sign,
        "quantum_expectation": stats_theta.p_plus - stats_theta.p_minus,
        "quantum_bit": quantum_bit,
        "contradiction": quantum_bit != derived_bit,
    }
