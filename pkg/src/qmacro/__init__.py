"""qmacro: numerics for the quantum-to-classical transition.

Subpackages cover spin-j kinematics (``spin``), Leggett-Garg machinery
(``leggett_garg``), coarse-grained POVM measurements and macrorealism
conditions (``coarse``), the oscillating-cat model with decoherence
(``cat``), collective-operator entanglement in harmonic chains and fields
(``chain``), virtual-qubit ensemble entanglement (``ensemble``), and the
Boolean-function / Pauli decidability calculus (``undecidability``).
"""

__version__ = "0.1.0"

from . import cat, chain, coarse, config, ensemble, leggett_garg, special, spin, undecidability

__all__ = [
    "__version__",
    "cat",
    "chain",
    "coarse",
    "config",
    "ensemble",
    "leggett_garg",
    "special",
    "spin",
    "undecidability",
]
