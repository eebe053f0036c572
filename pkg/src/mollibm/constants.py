"""Exact fluctuation constants of the matrix central limit theorem.

For the degree-n full-cycle Hermite trace functional integrated over a long
window, the limit is a conjugation-invariant Gaussian matrix

    M = sigma_n (a G + b xi Id),   G ~ GUE(1/N),  xi ~ N(0, 1/N^2),

and everything here computes the combinatorial coefficients exactly:

* ``k_constant(k, n)``: the k-th spectral moment coefficient, a sum of
  N^(cyc0 - nk/2) over pairings of k blocks of n points whose blocks pair
  completely; its N -> infinity limit is the Catalan number C_{k/2}.
* ``ab_coefficients(n)``: a^2 and b^2, obtained from the pairings of two
  n-blocks sorted by whether the two block endpoints n and 2n share a cycle
  of pi * (0)(1..n)(n+1..2n); those contribute tr(A^2), the rest (tr A)^2.
* ``variance_functional``: the variance of Tr(A M).

All sums are over explicit enumerations; coefficients are LaurentN, no
floating point."""

from __future__ import annotations

import numpy as np

from .exactalg import LaurentN
from .kernels import Autocorrelation, sigma_q_squared
from .pairings import (
    Partition12,
    catalan,
    enumerate_block_complete_pairings,
    enumerate_inhomogeneous_pairings,
    is_block_rigid_noncrossing,
)
from .permutations import Perm, compose
from .tracepoly import full_cycle


class OddMomentError(ValueError):
    """Odd spectral moments of the limit vanish; there is no constant."""


def two_block_cycle(n) -> Perm:
    """(0)(1 ... n)(n+1 ... 2n)."""
    return Perm.from_cycles(
        2 * n, tuple(range(1, n + 1)), tuple(range(n + 1, 2 * n + 1))
    )


def k_constant(k, n) -> LaurentN:
    """Moment coefficient: sum over completely-paired block pairings of
    N^(cyc0(pi * (01...nk)) - nk/2)."""
    if k % 2 == 1:
        raise OddMomentError(f"k={k} is odd")
    points = n * k
    alpha = full_cycle(points)
    coeffs = {}
    for pi in enumerate_block_complete_pairings(n, k):
        e = compose(pi.as_perm(), alpha).cyc0() - points // 2
        coeffs[e] = coeffs.get(e, 0) + 1
    return LaurentN(coeffs)


def k_limit(k, check_n=2) -> int:
    """Large-N limit of k_constant: the Catalan number C_{k/2}.  Also checks
    that it counts exactly the block-rigid non-crossing pairings."""
    if k % 2 == 1:
        raise OddMomentError(f"k={k} is odd")
    value = catalan(k // 2)
    rigid = sum(
        1
        for pi in enumerate_block_complete_pairings(check_n, k)
        if is_block_rigid_noncrossing(pi, check_n, k)
    )
    if rigid != value:
        raise AssertionError(
            f"block-rigid non-crossing count {rigid} != Catalan {value}"
        )
    return value


TRACE_A_SQUARED = "trace_A_squared"
TRACE_A_TIMES_TRACE_A = "trace_A_times_trace_A"


def classify_pairing(pi: Partition12, n) -> str:
    """Class of a pairing of two n-blocks: 'trace_A_squared' when the points
    n and 2n share a cycle of pi * (0)(1..n)(n+1..2n), else
    'trace_A_times_trace_A'."""
    pa = compose(pi.as_perm(), two_block_cycle(n))
    for cyc in pa.cycles():
        if n in cyc:
            return TRACE_A_SQUARED if 2 * n in cyc else TRACE_A_TIMES_TRACE_A
    raise AssertionError("unreachable")


def ab_coefficients(n):
    """(a^2, b^2) as LaurentN: N^-n sum of N^cyc0(pi * alpha~) over the two
    classes of pairings of two n-blocks."""
    if not 1 <= n <= 10:
        raise ValueError("n out of supported range")
    alpha = two_block_cycle(n)
    a_coeffs, b_coeffs = {}, {}
    for pi in enumerate_inhomogeneous_pairings(n, 2):
        pa = compose(pi.as_perm(), alpha)
        e = pa.cyc0() - n
        bucket = (
            a_coeffs if classify_pairing(pi, n) == TRACE_A_SQUARED else b_coeffs
        )
        bucket[e] = bucket.get(e, 0) + 1
    return LaurentN(a_coeffs), LaurentN(b_coeffs)


def leading_pairing_counts(n):
    """Counts of pairings of two n-blocks whose pi * alpha~ is (0) times a
    product of n transpositions, split by class; equals (1, n-1)."""
    alpha = two_block_cycle(n)
    count_sq = count_prod = 0
    for pi in enumerate_inhomogeneous_pairings(n, 2):
        pa = compose(pi.as_perm(), alpha)
        cycles = pa.cycles()
        if len(cycles) == n + 1 and all(len(c) == 2 for c in cycles[1:]):
            if classify_pairing(pi, n) == TRACE_A_SQUARED:
                count_sq += 1
            else:
                count_prod += 1
    return count_sq, count_prod


def variance_functional(a_mat, n, dim, rho: Autocorrelation) -> float:
    """Variance of Tr(A M) for the limiting Gaussian matrix:
    sigma_n^2 * (a^2 tr(A^2) + b^2 (tr A)^2), with normalized traces."""
    a_mat = np.asarray(a_mat, dtype=complex)
    if a_mat.shape != (dim, dim):
        raise ValueError("matrix dimension mismatch")
    if not np.allclose(a_mat, a_mat.conj().T, atol=1e-10):
        raise ValueError("test matrix must be Hermitian")
    a2, b2 = ab_coefficients(n)
    tr_a = np.trace(a_mat).real / dim
    tr_a2 = np.trace(a_mat @ a_mat).real / dim
    sigma2 = sigma_q_squared(rho, n)
    return float(sigma2 * (float(a2(dim)) * tr_a2 + float(b2(dim)) * tr_a ** 2))
