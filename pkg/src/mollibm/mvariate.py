"""Matrix-variate Hermite polynomials (Hermitian case, degree <= 3) and the
rectangular covariance objects.

Hermitian case.  For a permutation sigma of {1,...,n} let sigma^ be sigma
with 0 appended as a fixed point.  The scalar polynomials

    h_{sigma^}(X) = (Hermite trace polynomial of sigma^)(X, u = N)

are pure trace expressions in the power sums s_i = Tr(X^i).  Weighting them
by the irreducible characters of S(n),

    h_kappa(X) = sum_sigma chi^kappa(sigma) h_{sigma^}(X),

yields, for each partition kappa of n, a polynomial proportional to the
classical matrix-variate Hermite polynomial in the complex normalization
(verified symbolically by `proportionality_check` and by Monte Carlo
orthogonality under the density ~ exp(-Tr(X^2)/2) on Hermitian matrices).

Rectangular case.  For a matrix-valued kernel Phi with int Phi^T Phi = Id,
the smoothed process X(t) = int dW(s) Phi(t-s) of an l x N Brownian sheet is
stationary with standard Gaussian marginals; its covariance is carried by
R(t) = int Phi(s)^T Phi(t+s) ds with R(0) = Id and, writing |R| for the
symmetric square root of R R^T, spec(|R|) inside [0, 1].
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactalg import LaurentN
from .permutations import Perm
from .rng import stream
from .scalar import MCEstimate
from .tracepoly import hermite_trace_polynomial

MAX_DEGREE = 3


# ---------------------------------------------------------------------------
# Power-sum expressions


class PowerSumExpr:
    """Linear combination of monomials s1^e1 s2^e2 s3^e3 with LaurentN
    coefficients (Fractions allowed)."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                self.add_term(key, coeff)

    def add_term(self, key, coeff):
        key = tuple(int(e) for e in key)
        if len(key) != 3:
            raise ValueError("key must be (e1, e2, e3)")
        if isinstance(coeff, dict):
            coeff = LaurentN(coeff)
        elif not isinstance(coeff, LaurentN):
            coeff = LaurentN({0: coeff})
        cur = self.terms.get(key, LaurentN.zero())
        new = cur + coeff
        if new.is_zero:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __add__(self, other):
        out = PowerSumExpr(dict(self.terms))
        for key, coeff in other.terms.items():
            out.add_term(key, coeff)
        return out

    def scale(self, factor):
        out = PowerSumExpr()
        for key, coeff in self.terms.items():
            out.add_term(key, coeff * factor)
        return out

    def total_degree(self):
        return max(
            (e1 + 2 * e2 + 3 * e3 for e1, e2, e3 in self.terms), default=0
        )

    def __eq__(self, other):
        return isinstance(other, PowerSumExpr) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, reverse=True):
            mono = "*".join(
                f"s{i+1}^{e}" if e > 1 else f"s{i+1}"
                for i, e in enumerate(key)
                if e
            )
            coeff = str(self.terms[key])
            if "+" in coeff[1:] or "-" in coeff[1:]:
                coeff = f"({coeff})"
            if not mono:
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

    def eval_power_sums(self, s1, s2, s3, dim):
        """Vectorized evaluation given arrays of power sums."""
        out = np.zeros_like(np.asarray(s1, dtype=float))
        for (e1, e2, e3), coeff in self.terms.items():
            out = out + float(coeff(dim)) * s1**e1 * s2**e2 * s3**e3
        return out

    def __call__(self, x):
        """Evaluate at a single Hermitian matrix."""
        x = np.asarray(x, dtype=complex)
        dim = x.shape[0]
        x2 = x @ x
        s1 = np.trace(x).real
        s2 = np.trace(x2).real
        s3 = np.trace(x2 @ x).real
        return float(self.eval_power_sums(s1, s2, s3, dim))


# ---------------------------------------------------------------------------
# Building blocks indexed by pointed permutations


def hermite_tilde_sigma_hat(sigma_hat: Perm) -> PowerSumExpr:
    """Trace-polynomial expansion of a 0-fixing permutation, specialized to
    u = N.  All monomials are pure traces since the 0-cycle is trivial."""
    if sigma_hat(0) != 0:
        raise ValueError("permutation must fix 0")
    n = sigma_hat.n
    if n > MAX_DEGREE:
        raise ValueError(f"degree {n} not supported (max {MAX_DEGREE})")
    poly = hermite_trace_polynomial(n, sigma_hat)
    out = PowerSumExpr()
    for (power, traces), coeff in poly.terms.items():
        if power != 0:
            raise AssertionError("0-fixing permutation produced a matrix part")
        key = [0, 0, 0]
        for l in traces:
            key[l - 1] += 1
        # substitute u = N: a u^k N^e term becomes N^(e+k)
        laurent = {}
        for k, ln in coeff.items():
            for e, v in ln.items():
                laurent[e + k] = laurent.get(e + k, 0) + v
        out.add_term(tuple(key), LaurentN(laurent))
    return out


PARTITIONS = {
    2: ((2,), (1, 1)),
    3: ((3,), (2, 1), (1, 1, 1)),
}

# Irreducible characters of S(2), S(3) by cycle type of the class.
CHARACTERS = {
    (2,): {(1, 1): 1, (2,): 1},
    (1, 1): {(1, 1): 1, (2,): -1},
    (3,): {(1, 1, 1): 1, (2, 1): 1, (3,): 1},
    (2, 1): {(1, 1, 1): 2, (2, 1): 0, (3,): -1},
    (1, 1, 1): {(1, 1, 1): 1, (2, 1): -1, (3,): 1},
}

CLASS_SIZES = {
    2: {(1, 1): 1, (2,): 1},
    3: {(1, 1, 1): 1, (2, 1): 3, (3,): 2},
}


def character_table(n):
    """{kappa: {cycle_type: chi}} for S(n), n = 2 or 3."""
    if n not in PARTITIONS:
        raise ValueError("only n = 2, 3 are stored")
    return {kappa: dict(CHARACTERS[kappa]) for kappa in PARTITIONS[n]}


def _pointed(perm_of_n, n):
    """Embed a permutation of {1..n} (dict or tuple of images) as a Perm of
    {0..n} fixing 0."""
    img = (0,) + tuple(perm_of_n)
    return Perm(img)


def symmetric_group_pointed(n):
    """All of S(n), embedded with 0 fixed, with their cycle types."""
    out = []
    for images in itertools.permutations(range(1, n + 1)):
        p = _pointed(images, n)
        ctype = tuple(sorted((len(c) for c in p.cycles()[1:]), reverse=True))
        out.append((p, ctype))
    return out


def hermite_kappa(kappa) -> PowerSumExpr:
    """Character-weighted combination over S(n) of the sigma^ blocks."""
    kappa = tuple(kappa)
    n = sum(kappa)
    if kappa not in PARTITIONS.get(n, ()):
        raise ValueError(f"unsupported partition {kappa}")
    chi = CHARACTERS[kappa]
    out = PowerSumExpr()
    for p, ctype in symmetric_group_pointed(n):
        weight = chi[ctype]
        if weight:
            out = out + hermite_tilde_sigma_hat(p).scale(weight)
    return out


def dumitriu_reference(kappa) -> PowerSumExpr:
    """Reference matrix-variate Hermite polynomials in the complex
    normalization, in power sums s_i = Tr(X^i).

    The s1 coefficient of the degree-3 one-row polynomial is
    -(N+1)(N+2)/2; orthogonality to s1 under exp(-Tr X^2/2) forces the
    minus sign (symbolic and MC checks both pin it down).
    """
    kappa = tuple(kappa)
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    sixth = Fraction(1, 6)
    if kappa == (1, 1):
        return PowerSumExpr(
            {
                (2, 0, 0): {0: half},
                (0, 1, 0): {0: -half},
                (0, 0, 0): {2: half, 1: -half},
            }
        )
    if kappa == (2,):
        return PowerSumExpr(
            {
                (2, 0, 0): {0: 1},
                (0, 1, 0): {0: 1},
                (0, 0, 0): {2: -1, 1: -1},
            }
        )
    if kappa == (1, 1, 1):
        return PowerSumExpr(
            {
                (3, 0, 0): {0: sixth},
                (1, 1, 0): {0: -half},
                (0, 0, 1): {0: third},
                (1, 0, 0): {2: half, 1: -Fraction(3, 2), 0: 1},
            }
        )
    if kappa == (2, 1):
        return PowerSumExpr({(3, 0, 0): {0: third}, (0, 0, 1): {0: -third}})
    if kappa == (3,):
        return PowerSumExpr(
            {
                (3, 0, 0): {0: sixth},
                (1, 1, 0): {0: half},
                (0, 0, 1): {0: third},
                (1, 0, 0): {2: -half, 1: -Fraction(3, 2), 0: -1},
            }
        )
    raise ValueError(f"unsupported partition {kappa}")


def proportionality_check(kappa):
    """Constant c with hermite_kappa(kappa) = c * dumitriu_reference(kappa)
    as polynomials in (s1, s2, s3, N), or None when no such constant
    exists."""
    h = hermite_kappa(kappa)
    ref = dumitriu_reference(kappa)
    if set(h.terms) != set(ref.terms):
        return None
    ratio = None
    for key, coeff in h.terms.items():
        ref_coeff = ref.terms[key]
        # candidate from the leading monomials, then verify exactly
        e = ref_coeff.leading_exponent()
        num, den = coeff.coeff(e), ref_coeff.coeff(e)
        if den == 0:
            return None
        cand = Fraction(num) / Fraction(den)
        if ratio is None:
            ratio = cand
        if cand != ratio or coeff != ref_coeff * _as_laurent_scalar(ratio):
            return None
    return ratio


def _as_laurent_scalar(frac):
    return LaurentN({0: frac})


# ---------------------------------------------------------------------------
# Monte Carlo orthogonality under exp(-Tr X^2 / 2)


def sample_standard_hermitian(rng, dim, size):
    """Hermitian matrices with density ~ exp(-Tr(X^2)/2): diagonal N(0,1),
    off-diagonal real/imaginary parts N(0, 1/2)."""
    g = rng.normal(size=(size, dim, dim)) + 1j * rng.normal(size=(size, dim, dim))
    return (g + g.conj().transpose(0, 2, 1)) / 2.0


def _batched_power_sums(x):
    x2 = x @ x
    s1 = np.trace(x, axis1=1, axis2=2).real
    s2 = np.trace(x2, axis1=1, axis2=2).real
    s3 = np.trace(x2 @ x, axis1=1, axis2=2).real
    return s1, s2, s3


def mc_orthogonality(kappa, lam, dim, samples, seed) -> MCEstimate:
    """Sample mean of h_kappa(X) h_lambda(X); near zero for kappa != lambda,
    strictly positive on the diagonal."""
    if samples < 100:
        raise ValueError("too few samples")
    x = sample_standard_hermitian(stream(seed), dim, samples)
    s1, s2, s3 = _batched_power_sums(x)
    va = hermite_kappa(kappa).eval_power_sums(s1, s2, s3, dim)
    vb = hermite_kappa(lam).eval_power_sums(s1, s2, s3, dim)
    prod = va * vb
    return MCEstimate(
        mean=float(prod.mean()),
        stderr=float(prod.std(ddof=1) / math.sqrt(samples)),
        replicates=samples,
        seed=seed,
        extra={"analytic_target": None if tuple(kappa) == tuple(lam) else 0.0},
    )


def mc_mean(kappa, dim, samples, seed) -> MCEstimate:
    """Sample mean of h_kappa(X); zero for every kappa of positive degree."""
    x = sample_standard_hermitian(stream(seed), dim, samples)
    s1, s2, s3 = _batched_power_sums(x)
    v = hermite_kappa(kappa).eval_power_sums(s1, s2, s3, dim)
    return MCEstimate(
        mean=float(v.mean()),
        stderr=float(v.std(ddof=1) / math.sqrt(samples)),
        replicates=samples,
        seed=seed,
        extra={"analytic_target": 0.0},
    )


# ---------------------------------------------------------------------------
# Rectangular covariance objects


@dataclass(frozen=True)
class RectCovariance:
    """Lagged covariance R and its symmetric part |R| = (R R^T)^(1/2) on the
    lag grid m*step, m = -(cells) .. cells."""

    step: float
    lagged: np.ndarray   # (2*cells + 1, N, N)
    symmetric: np.ndarray

    @property
    def dim(self):
        return self.lagged.shape[1]

    def lag_index(self, t):
        half = (len(self.lagged) - 1) // 2
        m = round(t / self.step)
        if abs(m) > half:
            raise ValueError("lag outside support")
        return half + m

    def r_at(self, t):
        return self.lagged[self.lag_index(t)]

    def symmetric_at(self, t):
        return self.symmetric[self.lag_index(t)]


NORMALIZATION_SLACK = 0.01


def normalize_rect_kernel(phi, step):
    """Renormalize Phi so that int Phi^T Phi = Id when within 1% of it;
    reject anything farther off."""
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 3 or phi.shape[1] != phi.shape[2]:
        raise ValueError("Phi must have shape (cells, N, N)")
    gram = step * np.einsum("sij,sik->jk", phi, phi)
    dim = phi.shape[1]
    err = np.linalg.norm(gram - np.eye(dim), 2)
    if err > NORMALIZATION_SLACK * max(1.0, np.linalg.norm(gram, 2)):
        raise ValueError(f"kernel normalization off by {err:.3g} (> 1%)")
    evals, vecs = np.linalg.eigh(gram)
    if evals.min() <= 0:
        raise ValueError("kernel Gram matrix is singular")
    inv_sqrt = (vecs * (1.0 / np.sqrt(evals))) @ vecs.T
    return phi @ inv_sqrt


def rect_covariance(phi, step) -> RectCovariance:
    """R(mh) = h sum_s Phi(s)^T Phi(s + m h), plus symmetric square roots."""
    phi = normalize_rect_kernel(phi, step)
    cells, dim = phi.shape[0], phi.shape[1]
    lagged = np.zeros((2 * cells + 1, dim, dim))
    for m in range(-cells, cells + 1):
        if m >= 0:
            block = np.einsum("sij,sik->jk", phi[: cells - m], phi[m:])
        else:
            block = np.einsum("sij,sik->jk", phi[-m:], phi[: cells + m])
        lagged[cells + m] = step * block
    sym = np.empty_like(lagged)
    for i, r in enumerate(lagged):
        evals, vecs = np.linalg.eigh(r @ r.T)
        sym[i] = (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.T
    return RectCovariance(step=step, lagged=lagged, symmetric=sym)


def rect_process_covariance_check(phi, step, ell, dim, samples, seed,
                                  lag_steps=1):
    """Simulate X(t) = sum_m dW(t - m h) Phi_m at two times `lag_steps`
    cells apart and compare E[X(t2)_ij X(t1)_rs] with the lagged covariance.

    Under this smoothing convention the empirical covariance matches
    delta_ir R(t1 - t2)_js, i.e. the transpose of R at the positive lag.
    """
    phi = normalize_rect_kernel(phi, step)
    cov = rect_covariance(phi, step)
    cells = phi.shape[0]
    if ell > dim:
        raise ValueError("need ell <= N")
    rng = stream(seed)
    total = cells + lag_steps
    dw = rng.normal(0.0, math.sqrt(step), size=(samples, total, ell, dim))
    # X(t_i) = sum_m dW_{i-m} Phi_m with kernel cell index m;
    # x2 is the later time t2 = t1 + lag_steps*step
    x1 = np.einsum("bmln,mnk->blk", dw[:, :cells][:, ::-1], phi)
    x2 = np.einsum("bmln,mnk->blk", dw[:, lag_steps : lag_steps + cells][:, ::-1], phi)
    emp = np.einsum("blj,bns->ljns", x2, x1) / samples
    target = np.einsum(
        "ln,js->ljns", np.eye(ell), cov.r_at(-lag_steps * step)
    )
    prod_sd = np.sqrt(
        np.einsum("blj,bns->ljns", x2**2, x1**2) / samples - emp**2
    )
    stderr = prod_sd / math.sqrt(samples)
    return {
        "empirical": emp,
        "analytic_target": target,
        "stderr": stderr,
        "max_abs_error": float(np.max(np.abs(emp - target))),
        "max_sigma": float(np.max(np.abs(emp - target) / np.maximum(stderr, 1e-30))),
    }


def random_rect_kernel(rng, cells, dim, smooth=2):
    """A random valid Phi: smoothed Gaussian cells, then normalized."""
    raw = rng.normal(size=(cells, dim, dim))
    for _ in range(smooth):
        raw[1:-1] = 0.5 * raw[1:-1] + 0.25 * (raw[:-2] + raw[2:])
    gram = np.einsum("sij,sik->jk", raw, raw)
    evals, vecs = np.linalg.eigh(gram)
    inv_sqrt = (vecs * (1.0 / np.sqrt(evals))) @ vecs.T
    # exact normalization, step folded in
    step = 1.0 / cells
    return raw @ inv_sqrt / math.sqrt(step), step
