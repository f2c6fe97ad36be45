"""Ground-state collective entanglement of the nearest-neighbor harmonic chain.

Blocks of oscillators are represented only by their averaged position and
momentum; the Gaussian covariance data of two such collective modes decide
entanglement through a negativity-based degree and the variance witness.
The continuum (Klein-Gordon) limit uses window-averaged field operators.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .special import hyp2f1

__all__ = [
    "ChainParams",
    "two_point",
    "two_point_table",
    "BlockSpec",
    "block_indices",
    "CovarianceBlock",
    "block_covariance",
    "epsilon",
    "duan_witness",
    "epsilon_periodic_approx",
    "field_propagators",
    "window_commutator_norm",
]


@dataclass(frozen=True)
class ChainParams:
    """Coupling alpha = 2 Omega^2 / (2 Omega^2 + omega^2) in (0, 1)."""

    alpha: float
    n_oscillators: int | None = None  # None = infinite chain

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")


def _gen_binom(x, l):
    """Generalized binomial C(x, l) as an exact product (keeps the sign)."""
    out = 1.0
    for i in range(1, l + 1):
        out *= (x - i + 1) / i
    return out


def two_point(alpha, l, n_oscillators=None):
    """Vacuum correlations (g_l, h_l) = (<q_i q_{i+l}>, <p_i p_{i+l}>).

    Finite chains sum the dispersion nu(theta_k) = sqrt(1 - alpha cos
    theta_k) over modes; the infinite chain uses the hypergeometric closed
    forms in z = (1 - sqrt(1 - alpha^2)) / alpha.
    """
    l = int(l)
    if l < 0:
        raise ValueError("l must be nonnegative")
    if n_oscillators is not None:
        n = int(n_oscillators)
        if l >= n / 2:
            raise ValueError("finite mode requires l < N/2")
        theta = 2.0 * np.pi * np.arange(n) / n
        nu = np.sqrt(1.0 - alpha * np.cos(theta))
        cos_l = np.cos(l * theta)
        g = float(np.sum(cos_l / nu) / (2 * n))
        h = float(np.sum(cos_l * nu) / (2 * n))
        return g, h
    z = (1.0 - math.sqrt(1.0 - alpha**2)) / alpha
    mu = 1.0 / math.sqrt(1.0 + z * z)
    g = z**l / (2.0 * mu) * _gen_binom(l - 0.5, l) * hyp2f1(0.5, l + 0.5, l + 1.0, z * z)
    h = mu * z**l / 2.0 * _gen_binom(l - 1.5, l) * hyp2f1(-0.5, l - 0.5, l + 1.0, z * z)
    return g, h


def two_point_table(alpha, l_max, n_oscillators=None):
    """(g, h) arrays for l = 0 .. l_max."""
    pairs = [two_point(alpha, l, n_oscillators) for l in range(l_max + 1)]
    g, h = zip(*pairs)
    return np.asarray(g), np.asarray(h)


@dataclass(frozen=True)
class BlockSpec:
    """Two collective blocks of m subblocks with s oscillators, gaps of d.

    Subblocks of A and B alternate along the chain:
    A_0 | gap d | B_0 | gap d | A_1 | gap d | B_1 | ...;
    each block holds n = m*s oscillators.  m = 1 is the contiguous case.
    """

    s: int = 1
    m: int = 1
    d: int = 0

    def __post_init__(self):
        if self.s < 1 or self.m < 1 or self.d < 0:
            raise ValueError("need s >= 1, m >= 1, d >= 0")

    @property
    def n(self):
        return self.m * self.s


def block_indices(blocks):
    """(indices_A, indices_B) for the alternating subblock layout."""
    period = blocks.s + blocks.d
    a = []
    b = []
    for r in range(blocks.m):
        a.extend(range(2 * r * period, 2 * r * period + blocks.s))
        b.extend(range((2 * r + 1) * period, (2 * r + 1) * period + blocks.s))
    return np.asarray(a), np.asarray(b)


@dataclass(frozen=True)
class CovarianceBlock:
    """Collective second moments: G = <Q_A^2>, H = <P_A^2>, and cross terms."""

    g: float
    h: float
    g_ab: float
    h_ab: float


def block_covariance(params, blocks):
    """Covariance data of the two collective modes from two-point sums."""
    idx_a, idx_b = block_indices(blocks)
    n = blocks.n
    l_max = int(
        max(
            np.abs(idx_a[:, None] - idx_a[None, :]).max(),
            np.abs(idx_a[:, None] - idx_b[None, :]).max(),
        )
    )
    g_tab, h_tab = two_point_table(params.alpha, l_max, params.n_oscillators)
    d_aa = np.abs(idx_a[:, None] - idx_a[None, :])
    d_ab = np.abs(idx_a[:, None] - idx_b[None, :])
    return CovarianceBlock(
        g=float(g_tab[d_aa].sum() / n),
        h=float(h_tab[d_aa].sum() / n),
        g_ab=float(g_tab[d_ab].sum() / n),
        h_ab=float(h_tab[d_ab].sum() / n),
    )


def epsilon(cov):
    """Degree of entanglement max(0, 1/(4 delta1 delta2) - 1).

    delta1 = G - |G_AB|, delta2 = H - |H_AB|; the numerator 1/4 is the
    squared Heisenberg bound of the collective pair.
    """
    d1 = cov.g - abs(cov.g_ab)
    d2 = cov.h - abs(cov.h_ab)
    if d1 <= 0.0 or d2 <= 0.0:
        raise ValueError("nonpositive delta: covariance data not physical")
    return max(0.0, 0.25 / (d1 * d2) - 1.0)


def duan_witness(cov):
    """Variance witness Delta = 2 (G - G_AB + H + H_AB); Delta < 2 certifies entanglement."""
    return 2.0 * (cov.g - cov.g_ab + cov.h + cov.h_ab)


def epsilon_periodic_approx(alpha, n, m):
    """Nearest-neighbor estimate of the periodic-block entanglement (d = 0).

    Valid for alpha <~ 0.5 where correlations beyond l = 1 are negligible;
    grows with the number of subblock boundaries m.
    """
    g0, h0 = two_point(alpha, 0)
    g1, h1 = two_point(alpha, 1)
    d1 = g0 + (2.0 - (4.0 * m - 1.0) / n) * g1
    d2 = h0 + (2.0 - 1.0 / n) * h1
    return 0.25 / (d1 * d2) - 1.0


def _head_integrand(k, mass, length, r, kind):
    """Full integrand with the sin^2/k^2 factor written in stable sinc form."""
    x = k * length / 2.0
    sinc = np.sinc(x / np.pi)
    window = (length / 2.0) ** 2 * sinc * sinc
    root = np.sqrt(k * k + mass * mass)
    w = window / root if kind == "phi" else window * root
    return w * np.cos(k * r)


def _tail_weight(k, mass, kind):
    """Prefactor of cos(k*w) in the tail: (1 - cos kL)/2 expanded off."""
    root = np.sqrt(k * k + mass * mass)
    return 1.0 / (k * k * root) if kind == "phi" else root / (k * k)


def field_propagators(mass, length, r, k_split=None, uv_cutoff=1e6, rel_tol=1e-9):
    """Window-averaged Klein-Gordon propagators (D_Phi, D_Pi) at separation r.

    Adaptive quadrature on a head interval plus QUADPACK oscillatory
    (cosine-weighted) tails.  mass = 0 makes D_Phi infrared-divergent and is
    rejected; the momentum propagator at r = 0 is ultraviolet log-divergent
    for a sharp window and is regularized at ``uv_cutoff`` (the entanglement
    conclusions do not depend on the cutoff).
    """
    if length < 1e-6:
        raise ValueError("window length too small; propagators ill defined for L -> 0")
    if mass <= 0.0:
        raise ValueError("mass = 0 makes the field propagator infrared-divergent")
    if r < 0.0:
        raise ValueError("separation must be nonnegative")
    if r > 0.0 and abs(r - length) < 1e-12:
        raise ValueError("r = L is logarithmically divergent for a sharp window")
    if k_split is None:
        k_split = max(4.0 * math.pi / length, 4.0 * math.pi / (r + length), 2.0 * mass)

    out = []
    for kind in ("phi", "pi"):
        head, _ = quad(
            _head_integrand,
            0.0,
            k_split,
            args=(mass, length, r, kind),
            limit=400,
            epsabs=0.0,
            epsrel=rel_tol,
        )
        # sin^2(kL/2) cos(kr) = 1/2 cos(kr) - 1/4 cos(k(L+r)) - 1/4 cos(k(L-r))
        tail = 0.0
        for coeff, freq in ((0.5, r), (-0.25, length + r), (-0.25, abs(length - r))):
            if freq > 0.0:
                piece, _ = quad(
                    _tail_weight,
                    k_split,
                    np.inf,
                    args=(mass, kind),
                    weight="cos",
                    wvar=freq,
                    limit=400,
                    epsabs=1e-12,
                    epsrel=rel_tol,
                )
            elif kind == "phi":
                piece, _ = quad(
                    _tail_weight, k_split, np.inf, args=(mass, kind), limit=400, epsrel=rel_tol
                )
            else:
                # UV log-divergent piece: integrate sqrt(k^2+m^2)/k^2 up to the cutoff
                piece = (
                    math.asinh(uv_cutoff / mass)
                    - math.asinh(k_split / mass)
                    + math.sqrt(k_split**2 + mass**2) / k_split
                    - math.sqrt(uv_cutoff**2 + mass**2) / uv_cutoff
                )
            tail += coeff * piece
        out.append(2.0 / (math.pi * length) * (head + tail))
    return out[0], out[1]


def window_commutator_norm(length, r=0.0, k_split=None, rel_tol=1e-9):
    """Audit integral (2/pi L) Int_{-inf}^{inf} sin^2(kL/2) cos(kr) / k^2 dk.

    Equals the triangular window autocorrelation max(0, 1 - r/L); at r = 0
    this is the coefficient of i in the collective-pair commutator, so the
    oscillatory machinery must return 1 there.
    """
    if k_split is None:
        k_split = 4.0 * math.pi / length

    def head_fn(k):
        x = k * length / 2.0
        sinc = np.sinc(x / np.pi)
        return (length / 2.0) ** 2 * sinc * sinc * np.cos(k * r)

    head, _ = quad(head_fn, 0.0, k_split, limit=400, epsabs=1e-13, epsrel=rel_tol)
    tail = 0.0
    for coeff, freq in ((0.5, r), (-0.25, length + r), (-0.25, abs(length - r))):
        if freq > 0.0:
            piece, _ = quad(
                lambda k: 1.0 / (k * k),
                k_split,
                np.inf,
                weight="cos",
                wvar=freq,
                limit=400,
                epsabs=1e-12,
                epsrel=rel_tol,
            )
        else:
            piece = 1.0 / k_split
        tail += coeff * piece
    return 4.0 / (math.pi * length) * (head + tail)
