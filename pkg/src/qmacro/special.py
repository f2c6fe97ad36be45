"""Special-function kernels shared across the package.

Everything here works on ordinary floats/arrays.  Half-integer angular
momentum arguments are passed as floats (0.5, 1.0, 1.5, ...) and converted
to twice-value integers internally, so no float equality on j or m is ever
needed.
"""

import math

import numpy as np
from scipy.special import gammaln

from .config import TOL

__all__ = [
    "ln_factorial",
    "ln_binom",
    "as_twice",
    "wigner_3j",
    "hyp2f1",
    "sinc_ratio",
]


def ln_factorial(n):
    """log(n!) for nonnegative integer (array) arguments."""
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def ln_binom(n, k):
    """log of the binomial coefficient C(n, k)."""
    return ln_factorial(n) - ln_factorial(k) - ln_factorial(np.asarray(n) - np.asarray(k))


def as_twice(x, name="argument"):
    """Convert a half-integer given as float to its exact twice-value integer.

    Raises ValueError if ``x`` is not a multiple of 1/2 (within 1e-9).
    """
    t = 2.0 * float(x)
    r = round(t)
    if abs(t - r) > 1e-9:
        raise ValueError(f"{name} = {x} is not a half-integer")
    return int(r)


def _triangle_violated(tj1, tj2, tj3):
    return tj3 < abs(tj1 - tj2) or tj3 > tj1 + tj2 or (tj1 + tj2 + tj3) % 2 != 0


def wigner_3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3j symbol via the Racah sum evaluated in log-factorial space.

    Selection-rule violations return 0.0; non-half-integer input raises.
    """
    tj = [as_twice(x, n) for x, n in ((j1, "j1"), (j2, "j2"), (j3, "j3"))]
    tm = [as_twice(x, n) for x, n in ((m1, "m1"), (m2, "m2"), (m3, "m3"))]
    for a, b in zip(tj, tm):
        if abs(b) > a or (a - b) % 2 != 0:
            return 0.0
    if tm[0] + tm[1] + tm[2] != 0:
        return 0.0
    if _triangle_violated(*tj):
        return 0.0

    tj1, tj2, tj3 = tj
    tm1, tm2, tm3 = tm
    # all of the following are genuine integers (twice-values are even sums)
    jpm = [(a + b) // 2 for a, b in zip(tj, tm)]   # j_i + m_i
    jmm = [(a - b) // 2 for a, b in zip(tj, tm)]   # j_i - m_i
    j123 = (tj1 + tj2 + tj3) // 2

    log_delta = (
        ln_factorial((tj1 + tj2 - tj3) // 2)
        + ln_factorial((tj1 - tj2 + tj3) // 2)
        + ln_factorial((-tj1 + tj2 + tj3) // 2)
        - ln_factorial(j123 + 1)
    )
    log_norm = 0.5 * (log_delta + sum(ln_factorial(x) for x in jpm + jmm))

    t_min = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    t_max = min((tj1 + tj2 - tj3) // 2, jmm[0], jpm[1])
    total = 0.0
    for t in range(t_min, t_max + 1):
        log_den = (
            ln_factorial(t)
            + ln_factorial((tj3 - tj2 + tm1) // 2 + t)
            + ln_factorial((tj3 - tj1 - tm2) // 2 + t)
            + ln_factorial((tj1 + tj2 - tj3) // 2 - t)
            + ln_factorial(jmm[0] - t)
            + ln_factorial(jpm[1] - t)
        )
        total += (-1.0) ** t * math.exp(log_norm - log_den)
    phase = (-1.0) ** ((tj1 - tj2 - tm3) // 2)
    return phase * total


def hyp2f1(a, b, c, x, rtol=1e-14, max_terms=100000):
    """Gauss hypergeometric series 2F1(a, b; c; x) for |x| < 1.

    Straight power series with term recursion; the series terminates when a
    or b is a nonpositive integer.  Raises on |x| >= 1 or nonpositive
    integer c.
    """
    if abs(x) >= 1.0:
        raise ValueError("hyp2f1 series requires |x| < 1")
    if c <= 0 and c == int(c):
        raise ValueError("c must not be a nonpositive integer")
    term = 1.0
    total = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        total += term
        if abs(term) <= rtol * max(abs(total), 1.0):
            return total
    raise RuntimeError(f"hyp2f1 did not converge for x={x}")


def sinc_ratio(n, x):
    """sin(n*x) / (n*sin(x)) for integer n, with series fallback near x = k*pi.

    This is the Dirichlet-kernel shape that appears in all the trace
    formulas; the removable singularities at multiples of pi are evaluated
    by a 5th-order series in the offset.
    """
    n = int(n)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    sin_x = np.sin(x)
    small = np.abs(sin_x) < TOL.sin_ratio_taylor
    ok = ~small
    out[ok] = np.sin(n * x[ok]) / (n * sin_x[ok])
    if np.any(small):
        k = np.round(x[small] / np.pi)
        d = x[small] - k * np.pi
        nd = n * d
        num = 1.0 - nd**2 / 6.0 + nd**4 / 120.0
        den = 1.0 - d**2 / 6.0 + d**4 / 120.0
        sign = np.cos(n * k * np.pi) * np.cos(k * np.pi)  # = +/-1
        out[small] = sign * num / den
    return out[0] if scalar else out
