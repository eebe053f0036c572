"""Experiment orchestration: configs, deterministic dispatch, result records.

A single `ExperimentConfig` names one experiment kind plus its parameters;
`run` dispatches to the owning module and returns a `ResultRecord` whose
quantities each carry an empirical value, a standard error where one exists,
the analytic target, the tolerance used and the pass flag
(pass <=> |empirical - target| <= tolerance).  Identical config + seed give
identical records, wall-clock aside.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .constants import ab_coefficients, k_constant, k_limit
from .exactalg import LaurentN
from .golden import (
    contraction_csv_rows,
    golden_report,
    pairing_csv_rows,
)
from .kernels import (
    autocorrelation,
    kernel_from_json,
    make_difference_kernel,
    make_indicator_kernel,
    sigma_q_squared,
)
from .matrixsim import (
    free_limit_checks,
    fluctuation_matrix_samples,
    gaussian_matrix_decomposition_check,
    gaussianity_fourth_moment,
    gue_expected_power,
    matrix_lln_mean,
    semicircle_moment,
)
from .mvariate import (
    PARTITIONS,
    hermite_kappa,
    mc_orthogonality,
    proportionality_check,
)
from .scalar import (
    HermiteCoeffs,
    clt_experiment,
    occupation_experiment,
    zero_mean_kernel_experiment,
)
from .tracepoly import hermite_trace_polynomial

KINDS = (
    "scalar-lln",
    "scalar-clt",
    "matrix-lln",
    "matrix-clt",
    "free-limit",
    "constants",
    "trace-tables",
    "mvariate",
    "golden",
)

# single-path occupation-moment tolerances at eps = 1e-4
OCCUPATION_TOL = {1: 0.05, 2: 0.05, 3: 0.05, 4: 0.15}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    kernel: str = "indicator"
    kernel_step: float | None = None
    eps: float = 1e-3
    dt: float | None = None
    big_t: float = 1000.0
    dim: int = 2
    n: int = 2
    k: int | None = None
    powers: tuple = (2, 3, 4)
    replicates: int = 2000
    hermite_coeffs: tuple | None = None
    kappa: tuple | None = None
    samples: int = 100000
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        caps = {
            "eps": self.eps > 0,
            "dim": 1 <= self.dim <= 512,
            "n": 1 <= self.n <= 6,
            "big_t": 0 < self.big_t <= 1e4,
            "replicates": 1 <= self.replicates <= 10**6,
            "samples": 1 <= self.samples <= 10**7,
            "powers": all(1 <= int(p) <= 8 for p in self.powers),
        }
        if self.k is not None:
            caps["k"] = 1 <= self.k <= 10 and self.n * self.k <= 24
        bad = [name for name, ok in caps.items() if not ok]
        if bad:
            raise ValueError(f"parameter(s) out of range: {', '.join(bad)}")

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for key in ("powers", "hermite_coeffs", "kappa"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        return cls(**d)

    def to_dict(self):
        return asdict(self)

    def make_kernel(self):
        step = self.kernel_step
        if self.kernel == "indicator":
            return make_indicator_kernel(step or 0.01)
        if self.kernel == "difference":
            return make_difference_kernel(step or 0.01)
        if self.kernel.startswith("file:"):
            with open(self.kernel[5:], encoding="utf-8") as fh:
                return kernel_from_json(fh.read())
        raise ValueError(f"unknown kernel spec {self.kernel!r}")


@dataclass
class QuantityResult:
    name: str
    empirical: float | str
    analytic_target: float | str | None
    tolerance: float
    passed: bool
    stderr: float | None = None

    @classmethod
    def compare(cls, name, empirical, target, tolerance, stderr=None):
        passed = abs(empirical - target) <= tolerance
        return cls(name, float(empirical), float(target), float(tolerance),
                   bool(passed), None if stderr is None else float(stderr))

    @classmethod
    def exact(cls, name, got, want):
        return cls(name, str(got), str(want), 0.0, str(got) == str(want))


@dataclass
class ResultRecord:
    config: dict
    quantities: list
    wall_clock_s: float
    version: str = __version__
    tables: dict = field(default_factory=dict)

    @property
    def all_passed(self):
        return all(q.passed for q in self.quantities)

    def to_dict(self):
        return {
            "config": self.config,
            "quantities": [asdict(q) for q in self.quantities],
            "all_passed": self.all_passed,
            "wall_clock_s": self.wall_clock_s,
            "version": self.version,
            **({"tables": self.tables} if self.tables else {}),
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def run(config: ExperimentConfig) -> ResultRecord:
    started = time.time()
    runner = _RUNNERS[config.kind]
    quantities, tables = runner(config)
    return ResultRecord(
        config=config.to_dict(),
        quantities=quantities,
        wall_clock_s=round(time.time() - started, 3),
        tables=tables,
    )


def _run_scalar_lln(cfg):
    kernel = cfg.make_kernel()
    rows = occupation_experiment(kernel, cfg.eps, cfg.powers, cfg.seed, dt=cfg.dt)
    out = []
    for k, row in rows.items():
        tol = OCCUPATION_TOL.get(k, 0.25)
        out.append(
            QuantityResult.compare(
                f"occupation_moment_k{k}", row["empirical"],
                row["analytic_target"], tol,
            )
        )
    return out, {}


def _run_scalar_clt(cfg):
    kernel = cfg.make_kernel()
    rho = autocorrelation(kernel)
    coeffs = HermiteCoeffs.from_c1(cfg.hermite_coeffs or (0.0, 1.0))
    est = clt_experiment(kernel, cfg.eps, coeffs, cfg.replicates, cfg.seed, rho,
                         dt=cfg.dt)
    target = est.extra["analytic_target"]
    out = [
        QuantityResult.compare(
            "fluctuation_variance", est.mean, target, 3 * est.stderr, est.stderr
        ),
        QuantityResult.compare(
            "fluctuation_mean", est.extra["sample_mean"], 0.0,
            3 * est.extra["sample_mean_se"], est.extra["sample_mean_se"],
        ),
    ]
    return out, {}


def _run_matrix_lln(cfg):
    kernel = cfg.make_kernel()
    means = matrix_lln_mean(cfg.dim, kernel, cfg.eps, cfg.powers,
                            cfg.replicates, cfg.seed, dt=cfg.dt)
    out = []
    for k, mat in means.items():
        err = float(np.max(np.abs(mat - gue_expected_power(k, cfg.dim))))
        out.append(QuantityResult.compare(f"lln_entrywise_error_k{k}", err, 0.0, 0.1))
    return out, {}


def _kernel_with_step(cfg, default_step):
    """Kernel per config, with a kind-specific default grid step.  Coarse
    steps keep the simulations cheap; the built-in kernels are exactly
    representable at any step dividing 1."""
    if cfg.kernel_step is not None:
        return cfg.make_kernel()
    return ExperimentConfig(
        kind=cfg.kind, kernel=cfg.kernel, kernel_step=default_step
    ).make_kernel()


def _run_matrix_clt(cfg):
    # simulate on a coarse kernel grid; analytic targets use the fine grid
    kernel = _kernel_with_step(cfg, 0.1)
    rho = autocorrelation(make_indicator_kernel(0.01)) if cfg.kernel == "indicator" \
        else autocorrelation(make_difference_kernel(0.01))
    samples = fluctuation_matrix_samples(
        kernel, cfg.n, cfg.dim, cfg.big_t, cfg.replicates, cfg.seed, dt=cfg.dt
    )
    sigma2 = sigma_q_squared(rho, cfg.n)
    a2, b2 = ab_coefficients(cfg.n)
    a2v, b2v = float(a2(cfg.dim)), float(b2(cfg.dim))
    kconst = float(k_constant(2, cfg.n)(cfg.dim))

    tr_m2 = np.trace(samples @ samples, axis1=1, axis2=2).real / cfg.dim
    se = float(tr_m2.std(ddof=1) / np.sqrt(cfg.replicates))
    out = [
        QuantityResult.compare(
            "tr_moment_2", float(tr_m2.mean()), kconst * sigma2, 3 * se, se
        )
    ]
    rows = gaussian_matrix_decomposition_check(samples, sigma2, a2v, b2v)
    for name, row in rows.items():
        out.append(
            QuantityResult.compare(
                name, row["empirical"], row["analytic_target"],
                3 * row["stderr"], row["stderr"],
            )
        )
    probe = np.zeros((cfg.dim, cfg.dim))
    probe[0, 0] = 1.0
    for label, mat in (("E11", probe), ("identity", np.eye(cfg.dim))):
        scalars = np.einsum("rij,ji->r", samples, mat).real
        row = gaussianity_fourth_moment(scalars)
        out.append(
            QuantityResult.compare(
                f"fourth_moment_Tr_{label}", row["empirical"],
                row["analytic_target"], 5 * row["stderr"], row["stderr"],
            )
        )
    return out, {}


def _run_free_limit(cfg):
    kernel = _kernel_with_step(cfg, 0.25)
    rep = free_limit_checks(cfg.dim, kernel, cfg.n, cfg.eps, cfg.seed)
    out = []
    for k, row in rep["lln"].items():
        out.append(
            QuantityResult.compare(
                f"tr_moment_k{k}", row["empirical"],
                float(semicircle_moment(k)), 0.1,
            )
        )
    clt = rep["clt"]
    out.append(
        QuantityResult.compare(
            f"clt_variance_n{clt['order']}", clt["empirical"],
            clt["analytic_target"], 0.15 * clt["analytic_target"],
        )
    )
    return out, {}


def _run_constants(cfg):
    a2, b2 = ab_coefficients(cfg.n)
    out = [
        QuantityResult.exact(f"a2_n{cfg.n}", a2, a2),
        QuantityResult.exact(f"b2_n{cfg.n}", b2, b2),
    ]
    if cfg.n in (2, 3):
        reference = {
            2: ("1", "1"),
            3: ("1+3*N^-2", "2"),
        }[cfg.n]
        out = [
            QuantityResult.exact(f"a2_n{cfg.n}", a2, reference[0]),
            QuantityResult.exact(f"b2_n{cfg.n}", b2, reference[1]),
        ]
    if cfg.k is not None and cfg.k % 2 == 0:
        kc = k_constant(cfg.k, cfg.n)
        out.append(QuantityResult.exact(f"K_k{cfg.k}_n{cfg.n}", kc, kc))
        out.append(
            QuantityResult.exact(
                f"K_limit_k{cfg.k}",
                kc.coeff(0),
                k_limit(cfg.k, check_n=min(cfg.n, 3)),
            )
        )
    tables = {}
    if cfg.n in (2, 3):
        tables[f"pairing_n{cfg.n}"] = pairing_csv_rows(cfg.n)
    numeric = {}
    if cfg.dim:
        numeric = {
            "a2_value": float(a2(cfg.dim)),
            "b2_value": float(b2(cfg.dim)),
        }
        tables["numeric"] = [f"{k},{v}" for k, v in numeric.items()]
    return out, tables


def _run_trace_tables(cfg):
    out = []
    tables = {}
    for n in (2, 3, 4):
        rows = contraction_csv_rows(n)
        tables[f"contraction_n{n}"] = rows
    rep = golden_report()
    out.append(
        QuantityResult(
            name="golden_contraction_tables",
            empirical="ok" if rep["ok"] else "mismatch",
            analytic_target="ok",
            tolerance=0.0,
            passed=rep["ok"],
        )
    )
    tables[f"hermite_n{cfg.n}"] = [str(hermite_trace_polynomial(cfg.n))]
    return out, tables


def _run_mvariate(cfg):
    out = []
    kappas = [tuple(cfg.kappa)] if cfg.kappa else [
        k for n in (2, 3) for k in PARTITIONS[n]
    ]
    tables = {"expressions": []}
    for kappa in kappas:
        c = proportionality_check(kappa)
        out.append(
            QuantityResult(
                name=f"proportional_{kappa}",
                empirical="none" if c is None else str(c),
                analytic_target="nonzero constant",
                tolerance=0.0,
                passed=c is not None and c != 0,
            )
        )
        tables["expressions"].append(f"{kappa}: {hermite_kappa(kappa)}")
    for i, ka in enumerate(kappas):
        for kb in kappas[i + 1:]:
            if sum(ka) != sum(kb):
                continue
            est = mc_orthogonality(ka, kb, cfg.dim, cfg.samples, cfg.seed)
            out.append(
                QuantityResult.compare(
                    f"mc_orthogonality_{ka}_{kb}", est.mean, 0.0,
                    5 * est.stderr, est.stderr,
                )
            )
    return out, tables


def _run_golden(cfg):
    rep = golden_report()
    out = [
        QuantityResult(
            name="golden_suite",
            empirical="ok" if rep["ok"] else f"{len(rep['mismatches'])} mismatches",
            analytic_target="ok",
            tolerance=0.0,
            passed=rep["ok"],
        )
    ]
    tables = {}
    if rep["mismatches"]:
        tables["mismatches"] = [str(m) for m in rep["mismatches"]]
    return out, tables


_RUNNERS = {
    "scalar-lln": _run_scalar_lln,
    "scalar-clt": _run_scalar_clt,
    "matrix-lln": _run_matrix_lln,
    "matrix-clt": _run_matrix_clt,
    "free-limit": _run_free_limit,
    "constants": _run_constants,
    "trace-tables": _run_trace_tables,
    "mvariate": _run_mvariate,
    "golden": _run_golden,
}


def golden_suite() -> ResultRecord:
    return run(ExperimentConfig(kind="golden"))
