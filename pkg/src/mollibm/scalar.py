"""Scalar smoothed Brownian motion: simulation, occupation moments and the
fluctuation statistic.

The driving noise is a bilateral Brownian motion stored as i.i.d. N(0, dt)
increments on a uniform grid.  Smoothing against a piecewise-constant kernel
phi at scale eps,

    X(t) = eps^(-1/2) int phi((t - s)/eps) dW(s),

is a discrete convolution of the increments with the kernel taps.  When dt
divides eps*step the taps resolve the kernel cells exactly, so each X(t) is
exactly N(0,1) and lagged correlations equal the kernel autocorrelation on
the grid; the only discretization left is the time integral over [0, 1].

Verified limits (all at desk scale):

* occupation moments int_0^1 X(t)^k dt approach standard normal moments;
* for a centered F with Hermite coefficients c_q (rank >= 1), the statistic
  eps^(-1/2) int_0^1 F(X(s)) ds is asymptotically centered Gaussian with
  variance sum_q q! c_q^2 sigma_q^2, where sigma_q^2 = 2 int_0^inf rho^q;
* for kernels with int phi = 0 the stronger scaling eps^(-1) int_0^1 X gives
  an eps-independent Gaussian law of variance -2 int_0^inf u rho(u) du.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .kernels import Autocorrelation, Kernel, integrate_u_rho, sigma_q_squared
from .rng import stream

MAX_OCCUPATION_POWER = 12
MAX_HERMITE_DEGREE = 12


@dataclass(frozen=True)
class BrownianPath:
    """Bilateral Brownian increments on [t_min, t_max] with step dt."""

    t_min: float
    t_max: float
    dt: float
    increments: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "increments", np.asarray(self.increments))

    @property
    def num_steps(self):
        return len(self.increments)

    def node_times(self):
        return self.t_min + self.dt * np.arange(self.num_steps + 1)

    def values(self):
        """W at the grid nodes, pinned to W(0) = 0."""
        w = np.concatenate([[0.0], np.cumsum(self.increments)])
        i0 = round(-self.t_min / self.dt)
        if not 0 <= i0 <= self.num_steps:
            raise ValueError("grid does not contain 0")
        return w - w[i0]


@dataclass(frozen=True)
class SmoothedProcess:
    """Values of a smoothed path on a uniform grid starting at t0."""

    t0: float
    dt: float
    values: np.ndarray
    eps: float

    def node_times(self):
        return self.t0 + self.dt * np.arange(len(self.values))

    def window(self, a=0.0, b=1.0):
        """Values on [a, b]; both endpoints must lie on the grid."""
        i0 = round((a - self.t0) / self.dt)
        i1 = round((b - self.t0) / self.dt)
        if not (0 <= i0 <= i1 < len(self.values)):
            raise ValueError(f"[{a},{b}] is not covered by the smoothed path")
        return self.values[i0 : i1 + 1]


def simulate_bilateral_bm(t_min, t_max, dt, seed) -> BrownianPath:
    """Independent N(0, dt) increments; deterministic given the seed."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if not t_min < 0 <= t_max:
        raise ValueError("need t_min < 0 <= t_max")
    steps = round((t_max - t_min) / dt)
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed)
    inc = rng.normal(0.0, math.sqrt(dt), size=steps)
    return BrownianPath(t_min=t_min, t_max=t_max, dt=dt, increments=inc,
                        seed=None if isinstance(seed, np.random.Generator) else seed)


def mollify(path: BrownianPath, kernel: Kernel, eps) -> SmoothedProcess:
    """Smooth a Brownian path at scale eps.

    Requires dt <= eps*step with exact cell alignment and a path long enough
    for the kernel window [t - a*eps, t + a*eps].
    """
    taps = kernel.taps(eps, path.dt)
    if len(taps) > path.num_steps:
        raise ValueError("path too short for the kernel support at this scale")
    vals = np.convolve(path.increments, taps, mode="valid")
    half = len(taps) // 2
    t0 = path.t_min + half * path.dt
    return SmoothedProcess(t0=t0, dt=path.dt, values=vals, eps=eps)


def _mollify_batch(increments, kernel, eps, dt):
    taps = kernel.taps(eps, dt)
    return fftconvolve(increments, taps[None, :], mode="valid", axes=1)


def occupation_moment(smoothed: SmoothedProcess, k) -> float:
    """Trapezoid value of int_0^1 X(t)^k dt."""
    k = int(k)
    if not 1 <= k <= MAX_OCCUPATION_POWER:
        raise ValueError(f"power k={k} outside 1..{MAX_OCCUPATION_POWER}")
    x = smoothed.window(0.0, 1.0)
    return float(np.trapezoid(x**k, dx=smoothed.dt))


def gaussian_moment(k):
    """E N(0,1)^k: 0 for odd k, (k-1)!! for even k."""
    if k % 2 == 1:
        return 0.0
    return float(math.prod(range(k - 1, 0, -2))) if k else 1.0


# ---------------------------------------------------------------------------
# Hermite expansions


def hermite_values(x, degree):
    """H_0..H_degree (probabilists') at x, via H_{q+1} = x H_q - q H_{q-1}."""
    x = np.asarray(x, dtype=float)
    out = np.empty((degree + 1,) + x.shape)
    out[0] = 1.0
    if degree >= 1:
        out[1] = x
    for q in range(1, degree):
        out[q + 1] = x * out[q] - q * out[q - 1]
    return out


class NotCenteredError(ValueError):
    pass


@dataclass(frozen=True)
class HermiteCoeffs:
    """Coefficients c_0..c_d of F = sum c_q H_q."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        if len(self.c) - 1 > MAX_HERMITE_DEGREE:
            raise ValueError("degree too large")

    @classmethod
    def single(cls, q):
        """F = H_q."""
        return cls((0.0,) * q + (1.0,))

    @classmethod
    def from_c1(cls, values):
        """Coefficients (c_1, c_2, ...) with c_0 = 0."""
        return cls((0.0,) + tuple(values))

    @property
    def degree(self):
        return len(self.c) - 1

    @property
    def rank(self):
        for q, v in enumerate(self.c):
            if q >= 1 and v != 0.0:
                return q
        raise ValueError("no nonzero coefficient of positive degree")

    def require_centered(self):
        if self.c[0] != 0.0:
            raise NotCenteredError("constant Hermite coefficient must vanish")

    def __call__(self, x):
        h = hermite_values(x, self.degree)
        return np.tensordot(np.asarray(self.c), h, axes=(0, 0))


def sigma_w_squared(coeffs: HermiteCoeffs, rho: Autocorrelation) -> float:
    """Limit variance sum_{q >= rank} q! c_q^2 sigma_q^2."""
    coeffs.require_centered()
    coeffs.rank  # raises if F = 0
    total = 0.0
    for q, c in enumerate(coeffs.c):
        if q >= 1 and c != 0.0:
            total += math.factorial(q) * c * c * sigma_q_squared(rho, q)
    return total


def fluctuation_statistic(path: BrownianPath, kernel: Kernel, eps,
                          coeffs: HermiteCoeffs, scale_exponent=-0.5) -> float:
    """eps^scale_exponent * int_0^1 F(X(s)) ds for centered F.

    The default exponent -1/2 is the central-limit normalization; -1 is the
    stronger scaling used when int phi = 0.
    """
    coeffs.require_centered()
    x = mollify(path, kernel, eps).window(0.0, 1.0)
    return float(eps**scale_exponent * np.trapezoid(coeffs(x), dx=path.dt))


# ---------------------------------------------------------------------------
# Replicated experiments


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    replicates: int
    seed: int
    extra: dict = field(default_factory=dict)


def variance_with_se(samples):
    """Sample variance and the standard error of that estimate (via the
    fourth central moment)."""
    samples = np.asarray(samples, dtype=float)
    r = len(samples)
    v = float(np.var(samples, ddof=1))
    m4 = float(np.mean((samples - samples.mean()) ** 4))
    se = math.sqrt(max(m4 - v * v, 0.0) / r)
    return v, se


def _replicate_increments(kernel, eps, dt, seed, indices):
    """Stack of increment rows, one stream per replicate index."""
    a = kernel.support_halfwidth
    pad = (a + kernel.step) * eps
    t_min, t_max = -pad, 1.0 + pad
    steps = round((t_max - t_min) / dt)
    rows = np.empty((len(indices), steps))
    sqdt = math.sqrt(dt)
    for row, r in enumerate(indices):
        rows[row] = stream(seed, r).normal(0.0, sqdt, size=steps)
    return t_min, rows


def fluctuation_samples(kernel, eps, coeff_sets, replicates, seed,
                        dt=None, scale_exponent=-0.5, batch=128):
    """Replicated fluctuation statistics for several Hermite expansions over
    the same driving noise.

    Returns an array of shape (len(coeff_sets), replicates); replicate r is
    drawn from stream(seed, r) regardless of batching.
    """
    if dt is None:
        dt = eps * kernel.step
    for cs in coeff_sets:
        cs.require_centered()
    degree = max(cs.degree for cs in coeff_sets)
    coeff_mat = np.zeros((len(coeff_sets), degree + 1))
    for i, cs in enumerate(coeff_sets):
        coeff_mat[i, : cs.degree + 1] = cs.c

    out = np.empty((len(coeff_sets), replicates))
    scale = eps**scale_exponent
    for start in range(0, replicates, batch):
        idx = range(start, min(start + batch, replicates))
        t_min, rows = _replicate_increments(kernel, eps, dt, seed, idx)
        smoothed = _mollify_batch(rows, kernel, eps, dt)
        half = len(kernel.taps(eps, dt)) // 2
        t0 = t_min + half * dt
        i0 = round((0.0 - t0) / dt)
        i1 = round((1.0 - t0) / dt)
        x = smoothed[:, i0 : i1 + 1]
        h = hermite_values(x, degree)  # (degree+1, B, T)
        f = np.tensordot(coeff_mat, h, axes=(1, 0))  # (n_sets, B, T)
        out[:, list(idx)] = scale * np.trapezoid(f, dx=dt, axis=2)
    return out


def clt_experiment(kernel, eps, coeffs: HermiteCoeffs, replicates, seed,
                   rho: Autocorrelation, dt=None) -> MCEstimate:
    """Empirical variance of the fluctuation statistic vs its analytic
    target sum q! c_q^2 sigma_q^2."""
    samples = fluctuation_samples(kernel, eps, [coeffs], replicates, seed, dt=dt)[0]
    v, se = variance_with_se(samples)
    target = sigma_w_squared(coeffs, rho)
    return MCEstimate(
        mean=v,
        stderr=se,
        replicates=replicates,
        seed=seed,
        extra={
            "analytic_target": target,
            "sample_mean": float(samples.mean()),
            "sample_mean_se": float(samples.std(ddof=1) / math.sqrt(replicates)),
        },
    )


def zero_mean_kernel_experiment(kernel, eps, replicates, seed,
                                rho: Autocorrelation, dt=None) -> MCEstimate:
    """Variance of eps^-1 int_0^1 X for a kernel with int phi = 0; the
    analytic value -2 int_0^inf u rho(u) du does not depend on eps."""
    coeffs = HermiteCoeffs.single(1)
    samples = fluctuation_samples(
        kernel, eps, [coeffs], replicates, seed, dt=dt, scale_exponent=-1.0
    )[0]
    v, se = variance_with_se(samples)
    return MCEstimate(
        mean=v,
        stderr=se,
        replicates=replicates,
        seed=seed,
        extra={"analytic_target": -2.0 * integrate_u_rho(rho)},
    )


def occupation_experiment(kernel, eps, powers, seed, dt=None):
    """Occupation moments of a single smoothed path vs Gaussian moments."""
    if dt is None:
        dt = eps * kernel.step
    a = kernel.support_halfwidth
    pad = (a + kernel.step) * eps
    path = simulate_bilateral_bm(-pad, 1.0 + pad, dt, seed)
    smoothed = mollify(path, kernel, eps)
    return {
        int(k): {
            "empirical": occupation_moment(smoothed, k),
            "analytic_target": gaussian_moment(int(k)),
        }
        for k in powers
    }
