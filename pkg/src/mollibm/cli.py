"""Command-line interface.

Subcommands mirror the experiment kinds:

    mollibm scalar lln|clt ...      occupation moments / fluctuation variance
    mollibm matrix lln|clt|free ... Hermitian-matrix experiments
    mollibm free ...                alias for `matrix free`
    mollibm constants --n ...       exact a^2/b^2/K coefficients (+ CSV)
    mollibm comb --n ...            contraction table as CSV
    mollibm trace-poly expand|tables
    mollibm mvariate ...            degree <= 3 matrix-variate checks
    mollibm golden                  the full exact reference suite

`--config file.json` loads an ExperimentConfig and overrides any flags.
Exit code is 0 iff every check in the produced record passed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import ExperimentConfig, run
from .tracepoly import hermite_trace_polynomial


def _add_common(sub):
    sub.add_argument("--kernel", default="indicator",
                     help="indicator | difference | file:<path>")
    sub.add_argument("--kernel-step", type=float, default=None)
    sub.add_argument("--eps", type=float, default=1e-3)
    sub.add_argument("--dt", type=float, default=None)
    sub.add_argument("--T", dest="big_t", type=float, default=1000.0)
    sub.add_argument("--N", dest="dim", type=int, default=2)
    sub.add_argument("--n", type=int, default=2)
    sub.add_argument("--k", type=int, default=None)
    sub.add_argument("--powers", default=None,
                     help="comma-separated moment orders, e.g. 2,3,4")
    sub.add_argument("--replicates", type=int, default=2000)
    sub.add_argument("--hermite-coeffs", default=None,
                     help="comma-separated c1,c2,... (c0 = 0 implied)")
    sub.add_argument("--kappa", default=None,
                     help="partition, e.g. 2,1")
    sub.add_argument("--samples", type=int, default=100000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None)
    sub.add_argument("--config", default=None,
                     help="JSON config file; overrides flags")


def _parse_tuple(text, cast=float):
    if text is None:
        return None
    return tuple(cast(x) for x in str(text).split(",") if x != "")


def _config_from_args(args, kind):
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            return ExperimentConfig.from_dict(json.load(fh))
    kwargs = dict(
        kind=kind,
        kernel=args.kernel,
        kernel_step=args.kernel_step,
        eps=args.eps,
        dt=args.dt,
        big_t=args.big_t,
        dim=args.dim,
        n=args.n,
        k=args.k,
        replicates=args.replicates,
        samples=args.samples,
        seed=args.seed,
        out=args.out,
    )
    powers = _parse_tuple(args.powers, int)
    if powers:
        kwargs["powers"] = powers
    coeffs = _parse_tuple(args.hermite_coeffs, float)
    if coeffs:
        kwargs["hermite_coeffs"] = coeffs
    kappa = _parse_tuple(args.kappa, int)
    if kappa:
        kwargs["kappa"] = kappa
    return ExperimentConfig(**kwargs)


def _emit(record, out_path):
    text = record.to_json()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if record.all_passed else 1


def main(argv=None):
    parser = argparse.ArgumentParser(prog="mollibm", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    scalar = subs.add_parser("scalar", help="scalar smoothed Brownian motion")
    scalar_sub = scalar.add_subparsers(dest="mode", required=True)
    for mode in ("lln", "clt"):
        _add_common(scalar_sub.add_parser(mode))

    matrix = subs.add_parser("matrix", help="Hermitian-matrix experiments")
    matrix_sub = matrix.add_subparsers(dest="mode", required=True)
    for mode in ("lln", "clt", "free"):
        _add_common(matrix_sub.add_parser(mode))

    free = subs.add_parser("free", help="large-N (free) limit checks")
    _add_common(free)
    free.set_defaults(dim=250)

    constants = subs.add_parser("constants", help="exact fluctuation constants")
    _add_common(constants)

    comb = subs.add_parser("comb", help="contraction table CSV")
    _add_common(comb)

    tp = subs.add_parser("trace-poly", help="Hermite trace polynomials")
    tp_sub = tp.add_subparsers(dest="mode", required=True)
    _add_common(tp_sub.add_parser("expand"))
    _add_common(tp_sub.add_parser("tables"))

    mv = subs.add_parser("mvariate", help="matrix-variate Hermite checks")
    _add_common(mv)

    golden = subs.add_parser("golden", help="exact reference suite")
    _add_common(golden)

    args = parser.parse_args(argv)

    if args.command == "scalar":
        kind = "scalar-lln" if args.mode == "lln" else "scalar-clt"
        return _emit(run(_config_from_args(args, kind)), args.out)

    if args.command == "matrix":
        kind = {"lln": "matrix-lln", "clt": "matrix-clt", "free": "free-limit"}[args.mode]
        cfg = _config_from_args(args, kind)
        return _emit(run(cfg), args.out)

    if args.command == "free":
        return _emit(run(_config_from_args(args, "free-limit")), args.out)

    if args.command == "constants":
        return _emit(run(_config_from_args(args, "constants")), args.out)

    if args.command == "comb":
        cfg = _config_from_args(args, "trace-tables")
        record = run(cfg)
        rows = record.tables.get(f"contraction_n{cfg.n}")
        if rows is None:
            print(f"no contraction table stored for n={cfg.n}", file=sys.stderr)
            return 2
        text = "\n".join(rows)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        print(text)
        return 0 if record.all_passed else 1

    if args.command == "trace-poly":
        if args.mode == "expand":
            print(hermite_trace_polynomial(args.n))
            return 0
        return _emit(run(_config_from_args(args, "trace-tables")), args.out)

    if args.command == "mvariate":
        return _emit(run(_config_from_args(args, "mvariate")), args.out)

    if args.command == "golden":
        return _emit(run(_config_from_args(args, "golden")), args.out)

    parser.error("unknown command")


if __name__ == "__main__":
    sys.exit(main())
