import math

import numpy as np
import pytest
from scipy.special import kv, modstruve

from qmacro.chain import (
    BlockSpec,
    ChainParams,
    CovarianceBlock,
    block_covariance,
    block_indices,
    duan_witness,
    epsilon,
    epsilon_periodic_approx,
    field_propagators,
    two_point,
    two_point_table,
    window_commutator_norm,
)


def test_two_point_decoupled_limit():
    g0, h0 = two_point(1e-12, 0)
    assert g0 == pytest.approx(0.5, abs=1e-9)
    assert h0 == pytest.approx(0.5, abs=1e-9)
    g1, h1 = two_point(1e-12, 1)
    assert abs(g1) < 1e-9 and abs(h1) < 1e-9


def test_two_point_signs():
    g1, h1 = two_point(0.5, 1)
    assert g1 > 0.0 > h1


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9])
def test_two_point_hypergeometric_vs_finite_sum(alpha):
    for l in range(9):
        g_inf, h_inf = two_point(alpha, l)
        g_fin, h_fin = two_point(alpha, l, n_oscillators=2**14)
        assert g_inf == pytest.approx(g_fin, abs=1e-10)
        assert h_inf == pytest.approx(h_fin, abs=1e-10)


def test_two_point_monotone_decay():
    for alpha in (0.5, 0.9):
        g, h = two_point_table(alpha, 30)
        assert np.all(np.diff(np.abs(g[1:])) < 0.0)
        assert np.all(np.diff(np.abs(h[1:])) < 0.0)


def test_two_point_range_guard():
    with pytest.raises(ValueError):
        two_point(0.5, 10, n_oscillators=20)


def test_block_indices_periodic_layout():
    # d=1, m=2, s=3: hand-enumerated alternating layout
    blocks = BlockSpec(s=3, m=2, d=1)
    idx_a, idx_b = block_indices(blocks)
    assert idx_a.tolist() == [0, 1, 2, 8, 9, 10]
    assert idx_b.tolist() == [4, 5, 6, 12, 13, 14]
    # contiguous case
    idx_a, idx_b = block_indices(BlockSpec(s=4, m=1, d=2))
    assert idx_a.tolist() == [0, 1, 2, 3]
    assert idx_b.tolist() == [6, 7, 8, 9]


def test_block_covariance_single_pair():
    params = ChainParams(alpha=0.5)
    cov = block_covariance(params, BlockSpec(s=1, m=1, d=0))
    g0, h0 = two_point(0.5, 0)
    g1, h1 = two_point(0.5, 1)
    assert cov.g == pytest.approx(g0, abs=1e-14)
    assert cov.h == pytest.approx(h0, abs=1e-14)
    assert cov.g_ab == pytest.approx(g1, abs=1e-14)
    assert cov.h_ab == pytest.approx(h1, abs=1e-14)
    assert cov.g * cov.h >= 0.25 - 1e-12  # uncertainty floor


def test_block_covariance_brute_force():
    # independent dense double-sum over explicitly enumerated indices
    params = ChainParams(alpha=0.7)
    blocks = BlockSpec(s=2, m=3, d=2)
    cov = block_covariance(params, blocks)
    idx_a, idx_b = block_indices(blocks)
    lmax = int(max(abs(i - k) for i in idx_a for k in list(idx_a) + list(idx_b)))
    g, h = two_point_table(0.7, lmax)
    n = blocks.n
    g_direct = sum(g[abs(i - k)] for i in idx_a for k in idx_a) / n
    gab_direct = sum(g[abs(i - k)] for i in idx_a for k in idx_b) / n
    assert cov.g == pytest.approx(g_direct, abs=1e-13)
    assert cov.g_ab == pytest.approx(gab_direct, abs=1e-13)


def test_epsilon_vacuum_and_guard():
    assert epsilon(CovarianceBlock(g=0.5, h=0.5, g_ab=0.0, h_ab=0.0)) == 0.0
    with pytest.raises(ValueError):
        epsilon(CovarianceBlock(g=0.5, h=0.5, g_ab=0.6, h_ab=0.0))


def test_epsilon_contiguous_structure():
    params = ChainParams(alpha=0.99)
    eps_d0 = [epsilon(block_covariance(params, BlockSpec(s=n, m=1, d=0))) for n in range(1, 9)]
    assert all(e > 0.0 for e in eps_d0)
    eps_d1 = {n: epsilon(block_covariance(params, BlockSpec(s=n, m=1, d=1))) for n in range(1, 7)}
    assert eps_d1[1] == 0.0 and eps_d1[5] == 0.0 and eps_d1[6] == 0.0
    assert eps_d1[2] > 0.0 and eps_d1[3] > 0.0 and eps_d1[4] > 0.0
    for alpha in (0.5, 0.9, 0.99):
        for d in (2, 3):
            for n in (1, 4, 8, 12):
                cov = block_covariance(ChainParams(alpha=alpha), BlockSpec(s=n, m=1, d=d))
                assert epsilon(cov) == 0.0
    assert epsilon(block_covariance(ChainParams(alpha=0.5), BlockSpec(s=1, m=1, d=0))) > 0.0


def test_periodic_blocks_boundary_ordering():
    params = ChainParams(alpha=0.99)
    eps = {
        s: epsilon(block_covariance(params, BlockSpec(s=s, m=10 // s, d=0)))
        for s in (1, 2, 5)
    }
    assert eps[1] > eps[2] > eps[5] > 0.0


def test_epsilon_normalization_invariance():
    # recomputing with sum and mean collective conventions leaves eps fixed:
    # G, H, G_AB, H_AB all scale by the same factor c, and the Heisenberg
    # numerator scales by c^2
    params = ChainParams(alpha=0.9)
    blocks = BlockSpec(s=3, m=2, d=1)
    cov = block_covariance(params, blocks)
    base = epsilon(cov)
    for c in (blocks.n, 1.0 / blocks.n):  # sum / mean conventions vs 1/sqrt(n)
        scaled = CovarianceBlock(g=c * cov.g, h=c * cov.h, g_ab=c * cov.g_ab, h_ab=c * cov.h_ab)
        d1 = scaled.g - abs(scaled.g_ab)
        d2 = scaled.h - abs(scaled.h_ab)
        eps_scaled = max(0.0, (c * 0.5) ** 2 / (d1 * d2) - 1.0)
        assert eps_scaled == pytest.approx(base, abs=1e-12)


def test_duan_witness_relation():
    assert duan_witness(CovarianceBlock(g=0.5, h=0.5, g_ab=0.0, h_ab=0.0)) == pytest.approx(2.0)
    found_eps_without_duan = False
    for alpha in (0.3, 0.5, 0.7, 0.9, 0.99):
        params = ChainParams(alpha=alpha)
        for n in range(1, 9):
            cov = block_covariance(params, BlockSpec(s=n, m=1, d=0))
            delta = duan_witness(cov)
            eps = epsilon(cov)
            if delta < 2.0:
                assert eps > 0.0  # the witness never beats the measure
            if eps > 0.0 and delta >= 2.0:
                found_eps_without_duan = True
    assert found_eps_without_duan


def test_epsilon_periodic_approx():
    # grows with the number of boundaries at fixed n
    vals = [epsilon_periodic_approx(0.4, 12, m) for m in (1, 2, 3)]
    assert vals[0] < vals[1] < vals[2]
    # m = 1, n = 1 reduces to the nearest-neighbor two-oscillator estimate
    g0, h0 = two_point(0.4, 0)
    g1, h1 = two_point(0.4, 1)
    direct = 0.25 / ((g0 + (2 - 3) * g1) * (h0 + (2 - 1) * h1)) - 1.0
    assert epsilon_periodic_approx(0.4, 1, 1) == pytest.approx(direct, abs=1e-14)
    # against the exact pipeline at alpha = 0.4, n = 12: the truncation to
    # nearest-neighbor correlations is good to ~30% for periodic blocks and
    # ~60% for the contiguous case (eps is tiny and highly sensitive there)
    for m, tol in ((1, 0.65), (2, 0.30), (3, 0.30)):
        exact = epsilon(block_covariance(ChainParams(alpha=0.4), BlockSpec(s=12 // m, m=m, d=0)))
        approx = epsilon_periodic_approx(0.4, 12, m)
        assert abs(approx - exact) / exact < tol


# ----------------------------------------------------- field propagators


def _int_k0(x):
    # int_0^x K_0(t) dt
    return math.pi * x / 2.0 * (kv(0, x) * modstruve(-1, x) + kv(1, x) * modstruve(0, x))


def _f2(w, m):
    # double antiderivative: -int_0^w (w - s) K_0(m s) ds
    if w == 0.0:
        return 0.0
    return -(w / m) * _int_k0(m * w) + (1.0 - m * w * kv(1, m * w)) / m**2


def _d_phi_closed(m, length, r):
    coeffs = ((0.5, r), (-0.25, length + r), (-0.25, abs(length - r)))
    return 2.0 / (math.pi * length) * sum(c * _f2(w, m) for c, w in coeffs)


def _d_pi_closed(m, length, r):
    coeffs = ((0.5, r), (-0.25, length + r), (-0.25, abs(length - r)))
    bess = sum(c * kv(0, m * w) for c, w in coeffs if w > 0.0)
    return 2.0 / (math.pi * length) * bess + m**2 * _d_phi_closed(m, length, r)


@pytest.mark.parametrize("mass", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("length", [1.0, 2.0])
def test_field_propagators_match_bessel_oracle(mass, length):
    for r_factor in (1.5, 2.0, 4.0):
        r = r_factor * length
        d_phi, d_pi = field_propagators(mass, length, r)
        assert d_phi == pytest.approx(_d_phi_closed(mass, length, r), rel=1e-8, abs=1e-12)
        assert d_pi == pytest.approx(_d_pi_closed(mass, length, r), rel=1e-8, abs=1e-12)


def test_field_propagator_at_zero_separation():
    d_phi, d_pi = field_propagators(1.0, 1.0, 0.0)
    # D_Phi(0) has a clean closed form; D_Pi(0) is UV-log-divergent and only
    # needs to be large for the entanglement conclusion
    assert d_phi == pytest.approx(_d_phi_closed(1.0, 1.0, 1e-13), rel=1e-6)
    assert d_pi > 1.0


def test_field_guards():
    with pytest.raises(ValueError):
        field_propagators(0.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        field_propagators(1.0, 1e-9, 2.0)
    with pytest.raises(ValueError):
        field_propagators(1.0, 1.0, 1.0)


def test_field_null_result():
    # epsilon = 0 for every tested (mass, L, r > L) point
    for mass in (0.5, 1.0, 2.0):
        for length in (1.0, 2.0):
            g, h = field_propagators(mass, length, 0.0)
            for r_factor in (1.5, 2.0, 4.0):
                g_ab, h_ab = field_propagators(mass, length, r_factor * length)
                cov = CovarianceBlock(g=g, h=h, g_ab=g_ab, h_ab=h_ab)
                assert epsilon(cov) == 0.0


def test_window_commutator_norm():
    # the collective pair at one center must give exactly the canonical i
    assert window_commutator_norm(1.0) == pytest.approx(1.0, abs=1e-6)
    assert window_commutator_norm(2.5) == pytest.approx(1.0, abs=1e-6)
    # triangular autocorrelation of the sharp window
    assert window_commutator_norm(2.0, 0.5) == pytest.approx(0.75, abs=1e-6)
    assert window_commutator_norm(1.0, 3.0) == pytest.approx(0.0, abs=1e-6)
