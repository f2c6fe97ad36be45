"""Collective-operator entanglement in the harmonic chain and its field limit.

Calculates the ground-state degree of entanglement between averaged blocks
of oscillators (contiguous, separated, and periodic), compares with the
variance witness, and evaluates the window-averaged Klein-Gordon
propagators where the same measure finds nothing.  Saves chain_entanglement.png.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qmacro.chain import (
    BlockSpec,
    ChainParams,
    CovarianceBlock,
    block_covariance,
    duan_witness,
    epsilon,
    epsilon_periodic_approx,
    field_propagators,
    two_point_table,
    window_commutator_norm,
)

# --- two-point functions -----------------------------------------------------
g, h = two_point_table(0.5, 10)
print("two-point functions at alpha = 0.5: g_1 =", round(g[1], 6), " h_1 =", round(h[1], 6))

# --- epsilon vs block size for d = 0 and d = 1 --------------------------------
ns = np.arange(1, 9)
fig, axes = plt.subplots(1, 3, figsize=(13, 4))
for alpha, color in ((0.99, "r"), (0.9, "g"), (0.5, "b")):
    params = ChainParams(alpha=alpha)
    eps0 = [epsilon(block_covariance(params, BlockSpec(s=n, m=1, d=0))) for n in ns]
    eps1 = [epsilon(block_covariance(params, BlockSpec(s=n, m=1, d=1))) for n in ns]
    axes[0].plot(ns, eps0, color + "o-", label=f"alpha = {alpha}")
    axes[1].plot(ns, eps1, color + "o-")
params = ChainParams(alpha=0.99)
print("d = 1, alpha = 0.99: entangled only for n = 2..4:",
      [round(epsilon(block_covariance(params, BlockSpec(s=n, m=1, d=1))), 5) for n in ns[:6]])
cov = block_covariance(params, BlockSpec(s=2, m=1, d=0))
print(f"witness vs measure at n = 2: Delta = {duan_witness(cov):.3f}, epsilon = {epsilon(cov):.3f}")

# --- periodic subblocks: entanglement follows the boundary count --------------
for s in (1, 2, 5):
    eps_p = epsilon(block_covariance(params, BlockSpec(s=s, m=10 // s, d=0)))
    approx = epsilon_periodic_approx(0.99, 10, 10 // s)
    axes[2].bar(str(s), eps_p, color="tab:blue")
    print(f"periodic n = 10, s = {s}: epsilon = {eps_p:.3f}")

axes[0].set_xlabel("block size n")
axes[0].set_ylabel(r"$\varepsilon$")
axes[0].set_title("adjacent blocks (d = 0)")
axes[0].legend()
axes[1].set_xlabel("block size n")
axes[1].set_title("one oscillator apart (d = 1)")
axes[2].set_xlabel("subblock size s")
axes[2].set_title("periodic blocks, n = 10, alpha = 0.99")

fig.tight_layout()
fig.savefig("chain_entanglement.png", dpi=120)
print("saved chain_entanglement.png")

# --- Klein-Gordon collective propagators ---------------------------------------
print("\nwindow-averaged field: commutator check =", round(window_commutator_norm(1.0), 10))
g0, h0 = field_propagators(1.0, 1.0, 0.0)
for r in (1.5, 2.0, 4.0):
    g_ab, h_ab = field_propagators(1.0, 1.0, r)
    eps_f = epsilon(CovarianceBlock(g=g0, h=h0, g_ab=g_ab, h_ab=h_ab))
    print(f"  r = {r}: D_phi = {g_ab:+.6f}, D_pi = {h_ab:+.6f}, epsilon = {eps_f}")
print("the collective measure finds no entanglement for any r > L")
