"""Central numerical tolerances.

All hard-coded accuracy thresholds used for validation live here so they
can be inspected or overridden in one place (the CLI exposes ``--tol``).
"""

from dataclasses import dataclass, fields


@dataclass
class Tolerances:
    hermitian: float = 1e-12        # |M - M^dag| for operators flagged Hermitian
    unitary: float = 1e-10          # |U^dag U - 1| for unitaries
    state_norm: float = 1e-12       # pure-state norm / density trace deviation
    psd: float = 1e-10              # admissible negative eigenvalue of a density matrix
    povm_completeness: float = 1e-10
    quadrature: float = 1e-6        # sphere-integral normalization
    slot_prob_match: float = 1e-8   # trace path vs Q-integration path
    density_norm: float = 1e-6      # normalization required of sampled densities
    zero_branch: float = 1e-14      # branch probability below which a branch is dropped
    sin_ratio_taylor: float = 1e-8  # |sin x| below which the series fallback is used


TOL = Tolerances()

_NAMES = {f.name for f in fields(Tolerances)}


def set_tolerances(**kwargs):
    """Update entries of the shared tolerance record in place."""
    for name, value in kwargs.items():
        if name not in _NAMES:
            raise ValueError(f"unknown tolerance {name!r}")
        setattr(TOL, name, float(value))
    return TOL
