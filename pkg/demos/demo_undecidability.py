"""Mathematical undecidability shows up as quantum randomness.

Encodes Boolean-function axioms in Pauli eigenstates, checks decidability
by GF(2) linear algebra, and verifies measurement-by-measurement that
decidable propositions give deterministic outcomes while undecidable ones
give coin flips.  Ends with the GHZ logic-vs-quantum contradiction.
Saves undecidability_audit.png.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qmacro.undecidability import (
    AxiomSet,
    PauliString,
    bell_axioms,
    decidable_randomness_audit,
    ghz_contradiction,
)

# --- single qubit: one axiom, three complementary questions -------------------
axioms = AxiomSet((PauliString((0,), (1,)),), (0,))  # "f(0) = 0" as sigma_z
rows = decidable_randomness_audit(axioms, shots=4000, seed=11)
print("single-qubit axiom Z (one bit of information):")
for r in rows:
    kind = "deterministic" if r["deterministic"] else "random"
    print(f"  measure {r['theta']}: decidable = {r['decidable']!s:5}  -> {kind}, p(+) = {r['p_plus']:.3f}")

# --- two qubits: Bell-state axioms --------------------------------------------
rows2 = decidable_randomness_audit(bell_axioms(), shots=4000, seed=23)
n_dec = sum(r["decidable"] for r in rows2)
print(f"\nBell axioms ZZ, XX: {n_dec} decidable strings of {len(rows2)} (2^N = 4)")
print("  local Z1 is fully undecidable:",
      [r["p_plus"] for r in rows2 if r["theta"] == "ZI"][0])

# --- GHZ contradiction -----------------------------------------------------------
report = ghz_contradiction()
print("\nGHZ argument:")
print("  axioms", ", ".join(report["axioms"]), "all true (bits", report["axiom_bits"], ")")
print(f"  logic derives the XXX bit = {report['classical_bit']}")
print(f"  the operator product is {report['product_sign']:+.0f} * XXX, so quantum gives bit = {report['quantum_bit']}")
print("  contradiction =", report["contradiction"])

# --- picture: sampled frequencies ------------------------------------------------
fig, ax = plt.subplots(figsize=(10, 4))
labels = [r["theta"] for r in rows2]
freqs = [r["counts"][0] / 4000 if r["counts"][0] else r["p_plus"] for r in rows2]
colors = ["tab:green" if r["decidable"] else "tab:gray" for r in rows2]
ax.bar(labels, freqs, color=colors)
ax.axhline(0.5, ls="--", c="k", lw=0.8)
ax.set_ylabel("frequency of outcome +1")
ax.set_title("Bell axioms: green = decidable (deterministic), gray = undecidable (random)")
fig.tight_layout()
fig.savefig("undecidability_audit.png", dpi=120)
print("\nsaved undecidability_audit.png")
