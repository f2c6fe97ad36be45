"""Coarse-grained measurements turn a quantum spin into a classical ensemble.

Shows the which-hemisphere worst case (the 0.997 overlap between the
Q-distribution and its post-measurement mixture), the non-invasiveness gap
for rotations, and the quantum -> classical convergence of the two-time
characteristic function below the 1/sqrt(j) cutoff.
Saves coarse_graining.png.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qmacro.coarse import (
    build_povm,
    classical_char_fn,
    make_partition,
    mixture_condition_gap,
    noninvasiveness_gap,
    quantum_char_fn,
)
from qmacro.spin import coherent_state, q_function_grid, rotation_hamiltonian, sphere_grid

# --- worst-case mixture condition ------------------------------------------
print("which-hemisphere measurement of an equatorial coherent state:")
for j in (25.0, 100.0, 400.0):
    povm = build_povm(make_partition(j, mode="hemispheres"))
    rho_eq = coherent_state(j, math.pi / 2, math.pi)
    overlap = 1.0 - mixture_condition_gap(rho_eq, povm)
    print(f"  j = {j:5g}: overlap(Q, mixture) = {overlap:.4f}   (scale invariant)")

# --- Q-function of the equatorial state and its mixture ---------------------
j = 100.0
grid = sphere_grid(j)
povm = build_povm(make_partition(j, mode="hemispheres"))
rho_eq = coherent_state(j, math.pi / 2, math.pi)
q0 = q_function_grid(rho_eq, grid)

# --- non-invasiveness for the rotation Hamiltonian --------------------------
rng = np.random.default_rng(1)
h_rot = rotation_hamiltonian(j, 1.0)
gaps = []
for _ in range(10):
    ti, tj = np.sort(rng.uniform(0, 2 * math.pi, 2))
    if tj - ti < 1e-2:
        continue
    gaps.append(noninvasiveness_gap(rho_eq, h_rot, povm, ti, tj))
print(f"rotation non-invasiveness gap over random time pairs: max = {max(gaps):.4f} (< 0.01)")

# --- characteristic-function classical limit --------------------------------
theta = 1.0
j_char = 1e4
xis = np.linspace(1e-4, 0.03, 120)
q_vals = [quantum_char_fn(j_char, xi, xi, theta) for xi in xis]
c_vals = [classical_char_fn(j_char, xi, xi, theta) for xi in xis]
cut = 1.0 / math.sqrt(j_char)
print(f"char fn at j = 1e4: |q - c| = {abs(q_vals[10]-c_vals[10]):.2e} well below the cutoff 1/sqrt(j) = {cut:.3f}")

fig, axes = plt.subplots(1, 3, figsize=(13, 4))
phi_idx = np.argmin(np.abs(grid.phi - math.pi))
axes[0].plot(grid.theta, q0[:, phi_idx], "b-")
axes[0].set_xlabel(r"$\vartheta$")
axes[0].set_ylabel(r"$Q(\vartheta, \varphi=\pi)$")
axes[0].set_title("equatorial coherent state, j = 100")

axes[1].bar(range(len(gaps)), gaps)
axes[1].axhline(0.01, ls="--", c="k", lw=0.8)
axes[1].set_xlabel("random time pair")
axes[1].set_ylabel("non-invasiveness gap")
axes[1].set_title("rotation stays macrorealistic")

axes[2].plot(xis, q_vals, "r-", label="quantum")
axes[2].plot(xis, c_vals, "b--", label="classical ensemble")
axes[2].axvline(cut, ls=":", c="k", label=r"$1/\sqrt{j}$")
axes[2].set_xlabel(r"$\xi = \eta$")
axes[2].legend()
axes[2].set_title("two-time characteristic function")

fig.tight_layout()
fig.savefig("coarse_graining.png", dpi=120)
print("saved coarse_graining.png")
