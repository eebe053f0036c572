"""Trace monomials, Hermite trace polynomials and their exact moments.

A permutation beta of {0,...,n} indexes the trace monomial

    Tr_beta(A_1, ..., A_n) = (product of A_i along the cycle through 0)
                             * prod over other cycles c of Tr(prod_{j in c} A_j),

a matrix-valued expression.  When all arguments are equal the monomial only
depends on the cycle type of beta, so such polynomials are stored keyed by
(matrix power, sorted trace powers).

The Hermite trace polynomial attached to alpha on {0,...,n} is the signed
sum over singleton/pair partitions pi,

    sum_pi (-1)^(#blocks of pi) (1/N)^a u^(#pairs) Tr_{beta_pi(alpha)},

with the contraction weight a from `pairings.contract`.  For alpha the full
cycle (0 1 ... n) this produces M^n plus lower-order trace corrections, and
at N = 1 it collapses to (-1)^n times the classical two-variable Hermite
polynomial.

Moment formulas implemented exactly (coefficients are Laurent polynomials in
the dimension N):

* the Wick expansion of E Tr_alpha(W(h_1) D_1, ..., W(h_n) D_n) as a sum over
  perfect pairings weighted by Gram-matrix entries, and
* the product moment E(H(W(h_1)) ... H(W(h_k))) as a sum over inhomogeneous
  pairings of the nk tensor slots, weighted by N^(cyc0 - nk/2).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exactalg import LaurentN, UNPoly
from .pairings import (
    Partition12,
    contract,
    enumerate_inhomogeneous_pairings,
    enumerate_pair_partitions,
    enumerate_partition12,
    block_index,
)
from .permutations import Perm, compose

MAX_HERMITE_N = 8


def full_cycle(n) -> Perm:
    """alpha_n = (0 1 ... n)."""
    return Perm.from_cycles(n, tuple(range(n + 1)))


def pointed_cycle(k) -> Perm:
    """(0)(1 ... k): fixes 0, cycles the rest; Tr_alpha(A,...) = Tr(A_1...A_k) Id."""
    return Perm.from_cycles(k, tuple(range(1, k + 1)))


def eval_trace_monomial(beta: Perm, args):
    """Evaluate Tr_beta on a list of beta.n square matrices."""
    args = [np.asarray(a) for a in args]
    if len(args) != beta.n:
        raise ValueError(f"expected {beta.n} arguments, got {len(args)}")
    dims = {a.shape for a in args}
    if len(dims) != 1 or any(s[0] != s[1] for s in dims):
        raise ValueError("arguments must be square matrices of equal size")
    dim = args[0].shape[0]
    cycles = beta.cycles()
    out = np.eye(dim, dtype=complex)
    for i in cycles[0][1:]:
        out = out @ args[i - 1]
    scalar = 1.0 + 0.0j
    for cyc in cycles[1:]:
        prod = np.eye(dim, dtype=complex)
        for j in cyc:
            prod = prod @ args[j - 1]
        scalar *= np.trace(prod)
    return scalar * out


def format_monomial(key, letter="M"):
    """Render a cycle-type key like (1, (2, 1)) as 'M Tr M^2 Tr M'."""
    power, traces = key
    parts = []
    if power:
        parts.append(letter if power == 1 else f"{letter}^{power}")
    ones = sum(1 for l in traces if l == 1)
    for l in traces:
        if l > 1:
            parts.append(f"Tr {letter}^{l}")
    if ones == 1:
        parts.append(f"Tr {letter}")
    elif ones > 1:
        parts.append(f"(Tr {letter})^{ones}")
    return " ".join(parts) if parts else "1"


class TracePolynomial:
    """Linear combination of single-argument trace monomials, keyed by cycle
    type, with UNPoly coefficients (exact in u and N)."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                self.add_term(key, coeff)

    def add_term(self, key, coeff):
        if isinstance(coeff, int):
            coeff = UNPoly.term(coeff)
        cur = self.terms.get(key, UNPoly.zero())
        new = cur + coeff
        if new.is_zero:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __eq__(self, other):
        return isinstance(other, TracePolynomial) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, reverse=True):
            mono = format_monomial(key)
            coeff = str(self.terms[key])
            if "+" in coeff[1:] or "-" in coeff[1:]:
                coeff = f"({coeff})"
            if mono == "1":
                bits.append(coeff)
            elif coeff == "1":
                bits.append(mono)
            elif coeff == "-1":
                bits.append(f"-{mono}")
            else:
                bits.append(f"{coeff}*{mono}")
        out = bits[0]
        for b in bits[1:]:
            out += b if b.startswith("-") else "+" + b
        return out

    __repr__ = __str__

    def _needed_powers(self):
        need = {1}
        for power, traces in self.terms:
            need.add(power)
            need.update(traces)
        need.discard(0)
        return sorted(need)

    def __call__(self, m, u):
        """Numeric evaluation at a single Hermitian matrix m."""
        m = np.asarray(m, dtype=complex)
        dim = m.shape[0]
        powers = {0: np.eye(dim, dtype=complex)}
        for p in range(1, max(self._needed_powers(), default=1) + 1):
            powers[p] = powers[p - 1] @ m
        traces = {p: np.trace(mat) for p, mat in powers.items()}
        out = np.zeros((dim, dim), dtype=complex)
        for (power, tr_key), coeff in self.terms.items():
            c = complex(float(coeff(Fraction(u).limit_denominator(10**12), dim)))
            scal = c
            for l in tr_key:
                scal *= traces[l]
            out += scal * powers[power]
        return out

    def eval_batched(self, ms, u):
        """Evaluate at a stack of matrices ms with shape (..., N, N)."""
        ms = np.asarray(ms, dtype=complex)
        dim = ms.shape[-1]
        powers = {0: np.broadcast_to(np.eye(dim, dtype=complex), ms.shape)}
        prev = powers[0]
        for p in range(1, max(self._needed_powers(), default=1) + 1):
            prev = prev @ ms
            powers[p] = prev
        traces = {p: np.trace(mat, axis1=-2, axis2=-1) for p, mat in powers.items()}
        out = np.zeros_like(ms)
        for (power, tr_key), coeff in self.terms.items():
            c = complex(float(coeff(Fraction(u).limit_denominator(10**12), dim)))
            scal = np.full(ms.shape[:-2], c, dtype=complex)
            for l in tr_key:
                scal = scal * traces[l]
            out += scal[..., None, None] * powers[power]
        return out


def hermite_trace_polynomial(n, alpha: Perm | None = None) -> TracePolynomial:
    """Exact expansion over singleton/pair partitions of {1,...,n}.

    The sign of a partition with l pairs is (-1)^(n - l), i.e. minus one to
    the number of blocks (matching the appendix sign column).
    """
    if n > MAX_HERMITE_N:
        raise ValueError(f"n={n} exceeds cap {MAX_HERMITE_N}")
    if alpha is None:
        alpha = full_cycle(n)
    if alpha.n != n:
        raise ValueError("alpha size mismatch")
    poly = TracePolynomial()
    for pi in enumerate_partition12(n):
        c = contract(alpha, pi)
        sign = -1 if (n - c.num_pairs) % 2 else 1
        poly.add_term(
            c.beta.cycle_type_key(),
            UNPoly.term(sign, u_exp=c.num_pairs, n_exp=-c.inv_n_exponent),
        )
    return poly


def eval_hermite(alpha, m, u):
    """Evaluate the Hermite trace polynomial for `alpha` (a Perm, or an int n
    meaning the full cycle) at matrix m and variance parameter u."""
    if isinstance(alpha, int):
        alpha = full_cycle(alpha)
    return hermite_trace_polynomial(alpha.n, alpha)(m, u)


def check_gram(gram, n):
    gram = np.asarray(gram)
    if gram.shape != (n, n):
        raise ValueError(f"Gram matrix must be {n}x{n}")
    if not np.allclose(gram, gram.T, atol=1e-12):
        raise ValueError("Gram matrix must be symmetric")
    return gram


def mixed_moment(alpha: Perm, gram, mats):
    """Wick expansion of E Tr_alpha(W(h_1) D_1, ..., W(h_n) D_n).

    gram[i, j] = <h_i, h_j>; mats are the deterministic factors D_i.  Odd n
    gives the zero matrix.  The result carries the 1/N^(n/2) prefactor.
    """
    n = alpha.n
    gram = check_gram(gram, n)
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if len(mats) != n:
        raise ValueError("need one matrix per argument")
    dim = mats[0].shape[0]
    if n % 2 == 1:
        return np.zeros((dim, dim), dtype=complex)
    out = np.zeros((dim, dim), dtype=complex)
    for pi in enumerate_pair_partitions(n):
        weight = 1.0
        for i, j in pi.pairs:
            weight *= gram[i - 1, j - 1]
        out += weight * eval_trace_monomial(compose(pi.as_perm(), alpha), mats)
    return out / dim ** (n / 2)


def mixed_moment_identity(alpha: Perm) -> LaurentN:
    """Scalar s with E Tr_alpha(W(h), ..., W(h)) = s * Id for a unit vector h,
    as an exact Laurent polynomial in N."""
    n = alpha.n
    if n % 2 == 1:
        return LaurentN.zero()
    coeffs = {}
    for pi in enumerate_pair_partitions(n):
        e = compose(pi.as_perm(), alpha).cyc0() - n // 2
        coeffs[e] = coeffs.get(e, 0) + 1
    return LaurentN(coeffs)


MAX_PRODUCT_POINTS = 24


def product_moment(n, k) -> UNPoly:
    """E(H(W(h_1)) ... H(W(h_k))) for the degree-n full-cycle Hermite trace
    polynomial, with unit-norm h_i and all cross inner products equal to a
    single parameter r.

    Returned as a polynomial in r (the u-slot of UNPoly) with LaurentN
    coefficients; every inhomogeneous pairing contributes r^(nk/2) weighted
    by N^(cyc0(pi * alpha_nk) - nk/2).  Odd nk gives zero.
    """
    points = n * k
    if points > MAX_PRODUCT_POINTS:
        raise ValueError(f"nk={points} exceeds cap {MAX_PRODUCT_POINTS}")
    out = UNPoly.zero()
    if points % 2 == 1:
        return out
    alpha = full_cycle(points)
    for pi in enumerate_inhomogeneous_pairings(n, k):
        e = compose(pi.as_perm(), alpha).cyc0() - points // 2
        out = out + UNPoly.term(1, u_exp=points // 2, n_exp=e)
    return out


def product_moment_value(n, k, gram, dim) -> Fraction:
    """Exact product moment with an explicit Gram matrix (Fractions or ints)
    at a concrete dimension."""
    points = n * k
    if points % 2 == 1:
        return Fraction(0)
    gram = [[Fraction(x) for x in row] for row in gram]
    alpha = full_cycle(points)
    total = Fraction(0)
    for pi in enumerate_inhomogeneous_pairings(n, k):
        w = Fraction(1)
        for i, j in pi.pairs:
            w *= gram[block_index(i, n) - 1][block_index(j, n) - 1]
        e = compose(pi.as_perm(), alpha).cyc0() - points // 2
        total += w * Fraction(dim) ** e
    return total


def classical_hermite_displays():
    """The four reference expansions of the full-cycle Hermite trace
    polynomials for n = 1..4, entered term by term."""
    u = UNPoly.term
    return {
        1: TracePolynomial({(1, ()): u(-1)}),
        2: TracePolynomial({(2, ()): u(1), (0, ()): u(-1, u_exp=1)}),
        3: TracePolynomial(
            {
                (3, ()): u(-1),
                (1, ()): u(2, u_exp=1),
                (0, (1,)): u(1, u_exp=1, n_exp=-1),
            }
        ),
        4: TracePolynomial(
            {
                (4, ()): u(1),
                (1, (1,)): u(-2, u_exp=1, n_exp=-1),
                (2, ()): u(-3, u_exp=1),
                (0, (2,)): u(-1, u_exp=1, n_exp=-1),
                (0, ()): UNPoly({2: LaurentN({0: 2, -2: 1})}),
            }
        ),
    }


def verify_reference_expansions():
    """Compare hermite_trace_polynomial(n) against the hard-coded reference
    displays for n = 1..4; returns a list of (n, ok, computed, expected)."""
    report = []
    refs = classical_hermite_displays()
    for n, ref in refs.items():
        got = hermite_trace_polynomial(n)
        report.append((n, got == ref, str(got), str(ref)))
    return report
