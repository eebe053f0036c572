"""Hermitian Brownian motion, its smoothing, and the matrix limit theorems.

The driving noise is an N x N Hermitian Brownian motion: independent complex
Brownian entries above the diagonal, real on it, E|W_ij(t)|^2 = |t|/N, so
W(1) is GUE(1/N).  Smoothing with a unit-L2 kernel at any scale leaves the
marginal law exactly GUE(1/N).

Implemented checks, in increasing depth:

* law of large numbers: int_0^1 (smoothed W)^k dt approaches the exact GUE
  moment E (M^(N))^k, computed here by Wick enumeration;
* the degree-3 martingale  W(t)^3 - t (2 W(t) + tr W(t) Id);
* fluctuations of the time-averaged degree-n Hermite trace polynomial: the
  matrix T^(-1/2) int_0^T H(X_s) ds converges to sigma_n (a G + b xi Id)
  with G ~ GUE(1/N) and xi ~ N(0, 1/N^2) independent, whose entrywise
  second-order signatures are tested;
* the large-N ("free") regime, where occupation moments approach semicircle
  moments (Catalan numbers) and the order-n Chebyshev fluctuation variance
  approaches sigma_n^2; run with a streaming ring buffer so dimension 250
  fits in memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.signal import fftconvolve

from .exactalg import LaurentN
from .kernels import Autocorrelation, Kernel, sigma_q_squared
from .pairings import catalan
from .rng import stream
from .scalar import MCEstimate, variance_with_se
from .tracepoly import hermite_trace_polynomial, mixed_moment_identity, pointed_cycle


@dataclass(frozen=True)
class HermitianPath:
    """Hermitian Brownian increments, shape (steps, N, N)."""

    t_min: float
    t_max: float
    dt: float
    increments: np.ndarray
    seed: int | None = None

    @property
    def dim(self):
        return self.increments.shape[1]

    @property
    def num_steps(self):
        return self.increments.shape[0]

    def values(self):
        w = np.concatenate(
            [np.zeros((1, self.dim, self.dim), dtype=complex),
             np.cumsum(self.increments, axis=0)]
        )
        i0 = round(-self.t_min / self.dt)
        return w - w[i0]


@dataclass(frozen=True)
class MatrixProcess:
    """Matrix-valued values on a uniform grid starting at t0."""

    t0: float
    dt: float
    values: np.ndarray
    eps: float

    @property
    def dim(self):
        return self.values.shape[1]

    def window(self, a=0.0, b=1.0):
        i0 = round((a - self.t0) / self.dt)
        i1 = round((b - self.t0) / self.dt)
        if not (0 <= i0 <= i1 < len(self.values)):
            raise ValueError(f"[{a},{b}] not covered by the smoothed path")
        return self.values[i0 : i1 + 1]


def hermitian_increments(rng, steps, dim, dt):
    """(steps, dim, dim) Hermitian Gaussian increments with entry variance
    dt/dim (diagonal real of the same variance)."""
    scale = math.sqrt(dt / dim)
    g = rng.normal(0.0, scale, size=(steps, dim, dim)) + 1j * rng.normal(
        0.0, scale, size=(steps, dim, dim)
    )
    return (g + g.conj().transpose(0, 2, 1)) / 2.0


def simulate_hermitian_bm(dim, t_min, t_max, dt, seed) -> HermitianPath:
    if dim < 1 or dt <= 0:
        raise ValueError("need dim >= 1 and dt > 0")
    steps = round((t_max - t_min) / dt)
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed)
    inc = hermitian_increments(rng, steps, dim, dt)
    return HermitianPath(t_min=t_min, t_max=t_max, dt=dt, increments=inc,
                         seed=None if isinstance(seed, np.random.Generator) else seed)


def mollify_matrix(path: HermitianPath, kernel: Kernel, eps) -> MatrixProcess:
    """Entrywise smoothing; marginals are exactly GUE(1/N)."""
    taps = kernel.taps(eps, path.dt)
    if len(taps) > path.num_steps:
        raise ValueError("path too short for the kernel support at this scale")
    vals = fftconvolve(
        path.increments, taps.reshape(-1, 1, 1), mode="valid", axes=0
    )
    t0 = path.t_min + (len(taps) // 2) * path.dt
    return MatrixProcess(t0=t0, dt=path.dt, values=vals, eps=eps)


def matrix_powers(values, k_max):
    """{k: values^k} for a stack of matrices, k = 1..k_max."""
    out = {1: values}
    for k in range(2, k_max + 1):
        out[k] = out[k - 1] @ values
    return out


def matrix_lln_estimate(smoothed: MatrixProcess, power) -> np.ndarray:
    """Trapezoid value of int_0^1 X(t)^power dt."""
    if power > 8:
        raise ValueError("power capped at 8")
    x = smoothed.window(0.0, 1.0)
    xk = matrix_powers(x, power)[power]
    return np.trapezoid(xk, dx=smoothed.dt, axis=0)


def matrix_lln_mean(dim, kernel, eps, powers, replicates, seed, dt=None):
    """Replicate average of the occupation integrals, one matrix per power."""
    if dt is None:
        dt = eps * kernel.step
    pad = (kernel.support_halfwidth + kernel.step) * eps
    acc = {int(k): np.zeros((dim, dim), dtype=complex) for k in powers}
    for r in range(replicates):
        path = simulate_hermitian_bm(dim, -pad, 1.0 + pad, dt, stream(seed, r))
        sm = mollify_matrix(path, kernel, eps)
        x = sm.window(0.0, 1.0)
        pk = matrix_powers(x, max(acc))
        for k in acc:
            acc[k] += np.trapezoid(pk[k], dx=dt, axis=0)
    return {k: v / replicates for k, v in acc.items()}


# ---------------------------------------------------------------------------
# Exact GUE moments (Wick enumeration) and their Monte Carlo counterpart


def gue_moment_exact(k) -> LaurentN:
    """E tr(M^k) for M ~ GUE(1/N), exact in N.  Odd k gives 0; even k tends
    to the Catalan number C_{k/2} as N grows."""
    if k > 10:
        raise ValueError("k capped at 10")
    return mixed_moment_identity(pointed_cycle(k)) * LaurentN.monomial(-1)


def gue_moment_value(k, dim) -> Fraction:
    return gue_moment_exact(k)(dim)


def gue_expected_power(k, dim) -> np.ndarray:
    """E (M^k) as a matrix: the scalar Wick moment times the identity."""
    return float(gue_moment_value(k, dim)) * np.eye(dim)


def sample_gue(rng, dim, size):
    scale = math.sqrt(1.0 / dim)
    g = rng.normal(0.0, scale, size=(size, dim, dim)) + 1j * rng.normal(
        0.0, scale, size=(size, dim, dim)
    )
    return (g + g.conj().transpose(0, 2, 1)) / 2.0


def gue_sample_tr_moments(dim, ks, samples, seed):
    """Monte Carlo tr-moments of GUE(1/N) vs the Wick values."""
    x = sample_gue(stream(seed), dim, samples)
    pk = matrix_powers(x, max(ks))
    out = {}
    for k in ks:
        vals = np.trace(pk[k], axis1=1, axis2=2).real / dim
        out[int(k)] = MCEstimate(
            mean=float(vals.mean()),
            stderr=float(vals.std(ddof=1) / math.sqrt(samples)),
            replicates=samples,
            seed=seed,
            extra={"analytic_target": float(gue_moment_value(k, dim))},
        )
    return out


# ---------------------------------------------------------------------------
# The degree-3 martingale


def degree3_martingale(w, t, dim):
    """W^3 - t (2 W + tr(W) Id); reduces to x^3 - 3 t x when N = 1."""
    tr = np.trace(w, axis1=-2, axis2=-1).real / dim
    eye = np.eye(dim)
    return w @ w @ w - t * (2.0 * w + tr[..., None, None] * eye)


def martingale_diagnostics(dim, times, replicates, seed):
    """Replicated checks that the degree-3 combination is a centered
    martingale: E Tr M(t) = 0 and orthogonal increments
    E[Tr M(t) Tr M(s)] = E[(Tr M(s))^2] for s < t.

    The path is sampled exactly at the requested times (independent Gaussian
    segments), so there is no time-discretization error.
    """
    times = sorted(float(t) for t in times)
    if any(t <= 0 for t in times):
        raise ValueError("times must be positive")
    rng = stream(seed)
    w = np.zeros((replicates, dim, dim), dtype=complex)
    prev = 0.0
    tr_m = {}
    for t in times:
        w = w + hermitian_increments(rng, replicates, dim, t - prev)
        prev = t
        m = degree3_martingale(w, t, dim)
        tr_m[t] = np.trace(m, axis1=1, axis2=2).real
    report = {"mean_trace": {}, "orthogonal_increments": {}}
    for t, v in tr_m.items():
        report["mean_trace"][t] = {
            "empirical": float(v.mean()),
            "stderr": float(v.std(ddof=1) / math.sqrt(replicates)),
            "analytic_target": 0.0,
        }
    for s, t in zip(times, times[1:]):
        prod = tr_m[t] * tr_m[s] - tr_m[s] ** 2
        report["orthogonal_increments"][(s, t)] = {
            "empirical": float(prod.mean()),
            "stderr": float(prod.std(ddof=1) / math.sqrt(replicates)),
            "analytic_target": 0.0,
        }
    return report


# ---------------------------------------------------------------------------
# Matrix fluctuations


def fluctuation_matrix(path: HermitianPath, kernel: Kernel, n, big_t) -> np.ndarray:
    """T^(-1/2) int_0^T H(X_s) ds with X the unit-scale smoothing of the
    path and H the degree-n full-cycle Hermite trace polynomial at u = 1."""
    if n > 4:
        raise ValueError("n capped at 4")
    if big_t > 1e4:
        raise ValueError("T capped at 1e4")
    x = mollify_matrix(path, kernel, eps=1.0)
    vals = x.window(0.0, big_t)
    h = hermite_trace_polynomial(n).eval_batched(vals, u=1.0)
    return np.trapezoid(h, dx=x.dt, axis=0) / math.sqrt(big_t)


def fluctuation_matrix_samples(kernel, n, dim, big_t, replicates, seed, dt=None):
    """(replicates, dim, dim) stack of fluctuation matrices; replicate r is
    drawn from stream(seed, r)."""
    if dt is None:
        dt = kernel.step
    pad = kernel.support_halfwidth + kernel.step
    out = np.empty((replicates, dim, dim), dtype=complex)
    for r in range(replicates):
        path = simulate_hermitian_bm(dim, -pad, big_t + pad, dt, stream(seed, r))
        out[r] = fluctuation_matrix(path, kernel, n, big_t)
    return out


def gaussian_matrix_decomposition_check(samples, sigma_n_sq, a2_val, b2_val):
    """Entrywise second-order signatures of sigma (a G + b xi Id):

        Var(Re offdiag) = sigma^2 a^2 / (2N)
        Var(diag)       = sigma^2 (a^2/N + b^2/N^2)
        Cov(diag,diag') = sigma^2 b^2 / N^2
        Cov(Re, Im offdiag) = 0
    """
    samples = np.asarray(samples)
    reps, dim = samples.shape[0], samples.shape[1]
    if reps < 1000:
        raise ValueError("need at least 1e3 samples")
    if dim < 2:
        raise ValueError("need dim >= 2")

    def _var_row(x, target):
        v, se = variance_with_se(x)
        return {"empirical": v, "stderr": se, "analytic_target": target}

    def _cov_row(x, y, target):
        prod = (x - x.mean()) * (y - y.mean())
        return {
            "empirical": float(prod.mean()),
            "stderr": float(prod.std(ddof=1) / math.sqrt(reps)),
            "analytic_target": target,
        }

    off_re = samples[:, 0, 1].real
    off_im = samples[:, 0, 1].imag
    d0 = samples[:, 0, 0].real
    d1 = samples[:, 1, 1].real
    return {
        "var_offdiag_real": _var_row(off_re, sigma_n_sq * a2_val / (2 * dim)),
        "var_offdiag_imag": _var_row(off_im, sigma_n_sq * a2_val / (2 * dim)),
        "cov_offdiag_real_imag": _cov_row(off_re, off_im, 0.0),
        "var_diag": _var_row(d0, sigma_n_sq * (a2_val / dim + b2_val / dim**2)),
        "cov_diag_diag": _cov_row(d0, d1, sigma_n_sq * b2_val / dim**2),
    }


def gaussianity_fourth_moment(scalars):
    """Fourth moment of a centered scalar family vs 3 * (second moment)^2."""
    x = np.asarray(scalars, dtype=float)
    x = x - x.mean()
    m2 = float(np.mean(x**2))
    m4 = np.mean(x**4)
    se = float(np.std(x**4, ddof=1) / math.sqrt(len(x)))
    return {
        "empirical": float(m4),
        "stderr": se,
        "analytic_target": 3.0 * m2 * m2,
    }


# ---------------------------------------------------------------------------
# Chebyshev polynomials and the large-N regime


def chebyshev_U(n, x):
    """Monic Chebyshev polynomials of the second kind on [-2, 2]:
    U_0 = 1, U_1 = x, U_{n+1} = x U_n - U_{n-1}.  They are the orthonormal
    polynomials of the unit semicircle law."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for _ in range(n - 1):
        prev, cur = cur, x * cur - prev
    return cur if cur.ndim else float(cur)


def semicircle_moment(k):
    """Moments of the unit semicircle law: Catalan numbers at even order."""
    return 0 if k % 2 == 1 else catalan(k // 2)


@dataclass(frozen=True)
class SpectralMoments:
    """Normalized-trace power sums tr(M^k), k = 0..k_max."""

    moments: tuple

    @classmethod
    def of(cls, mat, k_max):
        mat = np.asarray(mat, dtype=complex)
        dim = mat.shape[0]
        out = [1.0]
        p = np.eye(dim, dtype=complex)
        for _ in range(k_max):
            p = p @ mat
            out.append(float(np.trace(p).real / dim))
        return cls(tuple(out))


def free_limit_checks(dim, kernel, n, eps, seed, k_max=4, eval_stride=2):
    """Large-N occupation moments against the semicircle, plus the order-n
    Chebyshev fluctuation variance against sigma_n^2.

    Streams the smoothed process with a ring buffer of kernel-cell
    increments, so only O(cells * dim^2) memory is used.  n <= 3.
    """
    if dim < 100:
        raise ValueError("the large-N check needs dim >= 100")
    if n > 3:
        raise ValueError("fluctuation order capped at 3")
    dt = eps * kernel.step
    taps_rev = (kernel.values[::-1] / math.sqrt(eps)).astype(float).copy()
    cells = len(taps_rev)
    delta = eval_stride * dt
    evals = round(1.0 / delta) + 1

    rng = stream(seed)
    buf = hermitian_increments(rng, cells, dim, dt)
    ptr = 0
    mom = np.zeros(k_max + 1)
    z = np.zeros((dim, dim), dtype=complex)
    for ev in range(evals):
        weight = 0.5 if ev in (0, evals - 1) else 1.0
        x = np.tensordot(np.roll(taps_rev, ptr), buf, axes=(0, 0))
        x2 = x @ x
        mom[1] += weight * np.trace(x).real
        mom[2] += weight * np.vdot(x, x).real
        if k_max >= 3:
            mom[3] += weight * np.vdot(x, x2).real
        if k_max >= 4:
            mom[4] += weight * np.vdot(x2, x2).real
        if n == 1:
            z += weight * x
        elif n == 2:
            z += weight * (x2 - np.eye(dim))
        else:
            z += weight * (x2 @ x - 2.0 * x)
        if ev < evals - 1:
            for _ in range(eval_stride):
                buf[ptr] = hermitian_increments(rng, 1, dim, dt)[0]
                ptr = (ptr + 1) % cells
    mom *= delta / dim
    z *= delta / math.sqrt(eps)

    report = {"lln": {}, "clt": {}}
    for k in range(1, k_max + 1):
        report["lln"][k] = {
            "empirical": float(mom[k]),
            "analytic_target": float(semicircle_moment(k)),
            "finite_n_target": float(gue_moment_value(k, dim)),
        }
    rho = _own_rho(kernel)
    tr_z2 = float(np.vdot(z, z).real / dim)
    report["clt"] = {
        "order": n,
        "empirical": tr_z2,
        "analytic_target": sigma_q_squared(rho, n),
    }
    return report


def _own_rho(kernel) -> Autocorrelation:
    from .kernels import autocorrelation

    return autocorrelation(kernel)
