import math

import numpy as np
import pytest

from qmacro.cat import CatModel, cat_hamiltonian, cat_state
from qmacro.coarse import (
    build_povm,
    char_fn_phase_args,
    classical_char_fn,
    classical_limit_deviation,
    make_partition,
    mixture_condition_gap,
    noninvasiveness_gap,
    povm_coefficient,
    quantum_char_fn,
    reduce_state,
    slot_probabilities,
    slot_probabilities_q,
    sufficient_condition_check,
    vn_slot_projector,
)
from qmacro.leggett_garg import classical_ensemble_char_fn
from qmacro.spin import (
    SphereGrid,
    as_density,
    coherent_state,
    dimension,
    m_values,
    rotation_evolution,
    rotation_hamiltonian,
    sphere_grid,
)


def test_make_partition_hemispheres():
    part = make_partition(100.0, mode="hemispheres")
    assert part.n_slots == 2
    assert part.bands[0] == pytest.approx((0.0, math.pi / 2))
    assert part.bands[1] == pytest.approx((math.pi / 2, math.pi))
    m = m_values(100.0)
    assert np.all(m[part.slots[0]] > 0)
    assert np.all(m[part.slots[1]] <= 0)


def test_make_partition_aligned():
    part = make_partition(100.0, 201.0)
    assert part.n_slots == 1
    part = make_partition(100.0, 20.0)
    assert part.n_slots == 11
    assert part.is_coarse and part.coarse_factor == pytest.approx(2.0)
    sizes = [len(s) for s in part.slots]
    assert sum(sizes) == 201
    fine = make_partition(100.0, 2.0)
    assert not fine.is_coarse
    with pytest.raises(ValueError):
        make_partition(100.0, 0.5)


def test_vn_slot_projectors():
    part = make_partition(0.5, mode="hemispheres")
    assert np.allclose(vn_slot_projector(part, 0), np.diag([1.0, 0.0]))
    assert np.allclose(vn_slot_projector(part, 1), np.diag([0.0, 1.0]))
    part = make_partition(10.0, 7.0)
    total = sum(vn_slot_projector(part, i) for i in range(part.n_slots))
    assert np.allclose(total, np.eye(21))
    for i in range(part.n_slots):
        p = vn_slot_projector(part, i)
        assert np.allclose(p @ p, p)
    with pytest.raises(IndexError):
        vn_slot_projector(part, part.n_slots)


def test_vn_projector_keeps_interior_coherent_state():
    j = 100.0
    part = make_partition(j, 40.0)
    # deep inside the north slot (m = 95, >8 sigma from the border at 60.5)
    psi = coherent_state(j, math.acos(95.0 / j), 0.3)
    p = vn_slot_projector(part, 0)
    assert np.linalg.norm(p @ psi - psi) < 1e-6
    # at the exact slot center the border sits 4.6 sigma away, so the
    # binomial tail only gives ~4e-3
    psi_mid = coherent_state(j, math.acos(80.0 / j), 0.3)
    assert np.linalg.norm(p @ psi_mid - psi_mid) < 5e-3


def test_povm_coefficient_closed_form_vs_quadrature():
    j = 100.0
    part = make_partition(j, mode="hemispheres")
    band = part.bands[0]
    # direct quadrature oracle at order 4j: integrate |<k|Omega>|^2 over the band
    order = int(4 * j)
    x, w = np.polynomial.legendre.leggauss(order)
    c1, c2 = math.cos(band[1]), math.cos(band[0])
    nodes = 0.5 * (c2 - c1) * x + 0.5 * (c1 + c2)
    weights = 0.5 * (c2 - c1) * w
    theta = np.arccos(nodes)
    for k in (100.0, 50.0, 0.0, -30.0):
        idx = int(j - k)
        amps = np.array([abs(coherent_state(j, t, 0.0)[idx]) ** 2 for t in theta])
        oracle = (2 * j + 1) / 2.0 * float(weights @ amps)
        assert povm_coefficient(j, band, k) == pytest.approx(oracle, abs=1e-10)


def test_povm_coefficient_special_values():
    j = 100.0
    full = (0.0, math.pi)
    for k in (100.0, 13.0, -77.0):
        assert povm_coefficient(j, full, k) == pytest.approx(1.0, abs=1e-12)
    north = (0.0, math.pi / 2)
    assert povm_coefficient(j, north, 100.0) == pytest.approx(1.0, abs=1e-12)
    assert povm_coefficient(j, north, 0.0) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("j,dm", [(100.0, 2.0), (100.0, 10.0), (100.0, 40.0), (400.0, 20.0), (400.0, 80.0)])
def test_povm_completeness_and_kraus(j, dm):
    povm = build_povm(make_partition(j, dm))
    assert np.max(np.abs(povm.element_diags.sum(axis=0) - 1.0)) < 1e-10
    assert np.all(povm.element_diags >= -1e-15)
    assert np.max(np.abs(povm.kraus_diags**2 - povm.element_diags)) < 1e-10


def test_povm_border_profile_width():
    # hemisphere coefficient vs k is a smoothed step of width O(sqrt(j))
    j = 100.0
    povm = build_povm(make_partition(j, mode="hemispheres"))
    g_north = povm.element_diags[0]
    m = m_values(j)
    above = m[g_north > 0.9]
    below = m[g_north < 0.1]
    width = above.min() - below.max()
    assert 10.0 <= width <= 30.0


def test_slot_probabilities_trace_vs_q_paths():
    j = 50.0
    part = make_partition(j, 25.0)
    povm = build_povm(part)
    rng = np.random.default_rng(6)
    # generic mixed state with off-diagonal structure
    d = dimension(j)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    w_trace = slot_probabilities(rho, povm)
    w_q = slot_probabilities_q(rho, part)
    assert np.max(np.abs(w_trace - w_q)) < 1e-8
    assert w_trace.sum() == pytest.approx(1.0, abs=1e-12)


def test_slot_probabilities_examples():
    j = 100.0
    povm = build_povm(make_partition(j, mode="hemispheres"))
    d = dimension(j)
    assert np.allclose(slot_probabilities(np.eye(d, dtype=complex) / d, povm), [0.5, 0.5], atol=1e-12)
    rho_eq = coherent_state(j, math.pi / 2, math.pi)
    assert np.allclose(slot_probabilities(rho_eq, povm), [0.5, 0.5], atol=1e-10)
    north = np.zeros(d, dtype=complex)
    north[0] = 1.0
    w = slot_probabilities(north, povm)
    # beta-tail bound: the misassignment probability is 2^-(2j+1)
    assert w[0] == pytest.approx(1.0, abs=1e-10)
    assert w[1] < 2.0 ** (-(2 * j + 1)) * 10


def test_reduce_state():
    j = 100.0
    povm = build_povm(make_partition(j, 40.0))
    psi = coherent_state(j, math.acos(95.0 / j), 1.0)
    reduced = reduce_state(psi, povm, 0)
    assert abs(np.vdot(reduced, psi)) ** 2 > 1.0 - 1e-6
    psi_mid = coherent_state(j, math.acos(80.0 / j), 1.0)
    assert abs(np.vdot(reduce_state(psi_mid, povm, 0), psi_mid)) ** 2 > 1.0 - 1e-4
    # single-slot POVM: reduction is the identity
    povm1 = build_povm(make_partition(j, 2 * j + 1))
    assert np.allclose(reduce_state(psi, povm1, 0), psi)
    # vanishing branch
    with pytest.raises(ZeroDivisionError):
        north = np.zeros(dimension(j), dtype=complex)
        north[0] = 1.0
        reduce_state(north, povm := build_povm(make_partition(j, mode="hemispheres")), 1)


def test_mixture_condition_diagonal_state_exact():
    j = 50.0
    povm = build_povm(make_partition(j, mode="hemispheres"))
    rng = np.random.default_rng(7)
    diag = rng.dirichlet(np.ones(dimension(j)))
    rho = np.diag(diag).astype(complex)
    assert mixture_condition_gap(rho, povm) < 1e-9


def test_mixture_condition_worst_case_overlap():
    for j, tol in ((25.0, 2e-3), (100.0, 1e-3)):
        povm = build_povm(make_partition(j, mode="hemispheres"))
        gap = mixture_condition_gap(coherent_state(j, math.pi / 2, math.pi), povm)
        assert (1.0 - gap) == pytest.approx(0.997, abs=tol)


def test_noninvasiveness_gap_rotation_vs_cat():
    j = 100.0
    povm = build_povm(make_partition(j, mode="hemispheres"))
    rho0 = coherent_state(j, 1.1, 0.4)
    gap = noninvasiveness_gap(rho0, rotation_hamiltonian(j, 1.0), povm, 0.9, 2.1)
    assert gap < 0.01
    model = CatModel(j=j, omega=1.0)
    gap_cat = noninvasiveness_gap(
        cat_state(model, 0.0), cat_hamiltonian(model), povm, math.pi / 4, math.pi / 2
    )
    assert gap_cat > 0.3
    # ti = tj reduces to the mixture condition: zero for diagonal states
    diag = np.diag(np.full(dimension(j), 1.0 / dimension(j))).astype(complex)
    assert noninvasiveness_gap(diag, rotation_hamiltonian(j, 1.0), povm, 1.0, 1.0) < 1e-8
    with pytest.raises(ValueError):
        noninvasiveness_gap(rho0, rotation_hamiltonian(j, 1.0), povm, 2.0, 1.0)


def test_sufficient_condition_rotation():
    j = 100.0
    dm = 40.0
    povm = build_povm(make_partition(j, dm))
    rng = np.random.default_rng(11)
    dir_list = [(math.acos(c), rng.uniform(0, 2 * math.pi)) for c in rng.uniform(-1, 1, 40)]
    times = rng.uniform(0, 2 * math.pi, 5)
    max_leak, border_fraction, leakages = sufficient_condition_check(
        rotation_hamiltonian(j, 1.0), povm, dir_list, times
    )
    # border states are the fraction ~ sqrt(j)/dm of all samples
    ratio = math.sqrt(j) / dm
    assert 0.5 * ratio <= border_fraction <= 2.0 * ratio
    # samples whose rotated center stays deep inside a slot barely leak
    from qmacro.spin import rotate_direction

    boundaries = povm.partition.boundaries
    k = 0
    n_interior = 0
    for theta, phi in dir_list:
        for t in times:
            theta_t, _ = rotate_direction(theta, phi, t)
            dist = np.min(np.abs(j * math.cos(theta_t) - boundaries[1:-1]))
            if dist > 25.0:  # > 3.5 sigma even at the equator
                assert leakages[k] < 1e-3
                n_interior += 1
            k += 1
    assert n_interior > 10


def test_sufficient_condition_cat_and_identity():
    j = 30.0
    povm = build_povm(make_partition(j, mode="hemispheres"))
    model = CatModel(j=j, omega=1.0)
    max_leak, _, leakages = sufficient_condition_check(
        cat_hamiltonian(model), povm, [(0.0, 0.0)], [math.pi / 4]
    )
    assert max_leak == pytest.approx(0.5, abs=1e-6)
    # zero Hamiltonian: mid-slot states never leak
    h0 = np.zeros((dimension(j), dimension(j)), dtype=complex)
    _, _, leakages = sufficient_condition_check(h0, povm, [(0.4, 1.0)], [1.0])
    assert leakages.max() < 1e-3


def test_quantum_char_fn_normalization_and_bruteforce():
    assert quantum_char_fn(7.0, 0.0, 0.0, 1.3) == 1.0
    j, theta = 2.0, 0.9
    u = rotation_evolution(j, theta)
    m = m_values(j)
    p_joint = np.abs(u) ** 2 / dimension(j)  # p[m2_idx, m1_idx]
    rng = np.random.default_rng(13)
    for _ in range(10):
        xi, eta = rng.uniform(-2.0, 2.0, 2)
        brute = 0.0
        for i1 in range(5):
            for i2 in range(5):
                brute += math.cos(xi * m[i1] + eta * m[i2]) * p_joint[i2, i1]
        assert quantum_char_fn(j, xi, eta, theta) == pytest.approx(brute, abs=1e-10)


def test_classical_char_fn_values():
    assert classical_char_fn(10.0, 0.0, 0.0, 0.4) == 1.0
    # antiparallel cancellation: theta = pi with xi = eta gives k = 0
    assert classical_char_fn(10.0, 0.7, 0.7, math.pi) == pytest.approx(1.0, abs=1e-12)
    mean, se = classical_ensemble_char_fn(10.0, 0.3, 0.2, 1.0, n_samples=10**6, seed=21)
    assert abs(mean - classical_char_fn(10.0, 0.3, 0.2, 1.0)) < 3.0 * se


def test_classical_limit_inside_cutoff():
    j = 1e4
    xi = 0.01 / math.sqrt(j)
    for theta in (0.4, 1.5, 2.8):
        q = quantum_char_fn(j, xi, xi, theta)
        c = classical_char_fn(j, xi, xi, theta)
        assert abs(q - c) < 1e-4


def test_classical_limit_monotone_convergence():
    # sup over a (xi, eta, theta) sample with xi, eta <= 0.1/sqrt(j)
    rng = np.random.default_rng(17)
    pts = [(rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0), rng.uniform(0.1, 3.0)) for _ in range(40)]
    sups = []
    for j in (1e2, 1e3, 1e4):
        cut = 0.1 / math.sqrt(j)
        sup = max(
            abs(quantum_char_fn(j, fx * cut, fy * cut, th) - classical_char_fn(j, fx * cut, fy * cut, th))
            for fx, fy, th in pts
        )
        sups.append(sup)
    assert sups[0] > sups[1] > sups[2]


def test_classical_limit_deviation_cutoff_scaling():
    j = 1e4
    for theta in (0.3, 1.0, 2.0):
        assert classical_limit_deviation(j, 0.1 / math.sqrt(j), 0.1 / math.sqrt(j), theta) < 1e-3
        assert classical_limit_deviation(j, 2.0 / math.sqrt(j), 2.0 / math.sqrt(j), theta) > 0.05
    pq, pc = char_fn_phase_args(j, 0.0, 0.0, 1.0)
    assert pq == pc == 0.0


def test_border_fraction_scaling_of_mixture_gap():
    # fraction of coherent states whose sharp-projector mixture gap
    # exceeds 0.05 scales as sqrt(j)/dm (the POVM keeps every gap ~3e-3)
    for j, order in ((100.0, None), (400.0, 420)):
        dm = 4.0 * math.sqrt(j)
        part = make_partition(j, dm)
        povm = build_povm(part)
        grid = sphere_grid(j) if order is None else sphere_grid(j, order=order, n_phi=order + 4)
        centers = np.linspace(-j + 0.5, j - 0.5, 49)
        gaps = []
        for mc in centers:
            psi = coherent_state(j, math.acos(mc / j), 0.0)
            gaps.append(mixture_condition_gap(psi, povm, grid, sharp=True))
        fraction = float(np.mean(np.asarray(gaps) > 0.05))
        ratio = math.sqrt(j) / dm
        assert 0.5 * ratio <= fraction <= 2.0 * ratio
