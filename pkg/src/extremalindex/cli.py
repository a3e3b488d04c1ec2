"""Command-line front end: ``simulate``, ``estimate`` and ``experiment``.

Exit codes: 0 ok, 1 usage or config error, 2 data error, 3 empty result cells.
"""
from __future__ import annotations

import argparse
import io
import os
import sys

import numpy as np

from .errors import EstimatorError, ExtremalIndexError
from .estimators import parse_norm, theta1, theta2, theta3
from .experiments import WORKERS_ENV, angle_grid, run_monte_carlo
from .io import (
    ConfigError,
    DataError,
    config_document,
    config_hash,
    load_run_config,
    metadata_lines,
    read_series_csv,
    result_rows_to_csv,
    series_to_csv,
    write_table,
)
from .series import BlockScheme, MultivariateSeries, as_direction
from .simulators import RNG_IDENTITY, Ar1Params, ArchParams, simulate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_EMPTY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple[float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) == 1:
        return parts[0], parts[0]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected one value or two comma-separated values, got {text!r}")
    return parts[0], parts[1]


def _vector(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(text: str, out_path: str | None) -> None:
    if out_path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        parent = os.path.dirname(out_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    except OSError as err:
        raise UsageError(f"cannot write {out_path}: {err}") from None


def cmd_simulate(args) -> int:
    if args.process == "arch":
        lam1, lam2 = args.lambda_ if args.lambda_ else (0.7, 0.3)
        eta1, eta2 = args.eta if args.eta else (2e-5, 2e-5)
        kwargs = dict(eta1=eta1, eta2=eta2, lambda1=lam1, lambda2=lam2)
        if args.burnin is not None:
            kwargs["burnin"] = args.burnin
        try:
            params = ArchParams(**kwargs)
        except ValueError as err:
            raise UsageError(str(err)) from None
        described = dict(kwargs)
    elif args.process == "ar1":
        rho1, rho2 = args.rho if args.rho else (0.5, 0.5)
        try:
            params = Ar1Params(rho1, rho2, args.alpha, args.burnin)
        except ValueError as err:
            raise UsageError(str(err)) from None
        described = dict(rho1=rho1, rho2=rho2, alpha=args.alpha, burnin=params.burnin)
    else:
        params, described = None, {}
    if args.n < 1:
        raise UsageError("--n must be positive")
    series = simulate(args.process, args.n, params, args.seed)
    doc = {"process": args.process, "params": described, "n": args.n, "seed": args.seed, "rng": RNG_IDENTITY}
    meta = metadata_lines(
        process=args.process,
        params=" ".join(f"{k}={v}" for k, v in described.items()) or "-",
        seed=args.seed,
        config_sha256=config_hash(doc),
    )
    _emit(series_to_csv(series.values, meta), args.out)
    print(f"rng={RNG_IDENTITY} seed={args.seed} n={args.n} process={args.process}", file=sys.stderr)
    return EXIT_OK


def _directions(args, d: int) -> list[np.ndarray]:
    if args.angles is not None:
        if d != 2:
            raise UsageError("--angles needs a bivariate series")
        return [tau for _, tau in angle_grid(args.angles)]
    if not args.tau:
        raise UsageError("give --tau or --angles")
    out = []
    for tau in args.tau:
        try:
            out.append(as_direction(tau, d))
        except ExtremalIndexError as err:
            raise UsageError(str(err)) from None
    return out


def cmd_estimate(args) -> int:
    header, values = read_series_csv(args.input)
    series = MultivariateSeries(values)
    if not 1 <= args.kn < series.n:
        raise UsageError(f"--kn must satisfy 1 <= k_n < n = {series.n}, got {args.kn}")
    scheme = BlockScheme.from_k(series.n, args.kn)
    dropped = series.n - scheme.n_used
    try:
        norm = parse_norm(args.L)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if not args.kappa > 0:
        raise UsageError("--kappa must be positive")
    if args.est == 3 and not 0 < args.sigma < args.phi:
        raise UsageError("--sigma and --phi must satisfy 0 < sigma < phi")
    directions = _directions(args, series.d)

    rows = []
    for tau in directions:
        theta = H = neg_log = None
        error = ""
        try:
            if args.est == 1:
                rep = theta1(series, tau, scheme, norm)
                theta, H, neg_log = rep.theta_hat, rep.H_hat, rep.neg_log_Htilde_hat
            elif args.est == 2:
                rep = theta2(series, tau, args.kappa, scheme)
                theta, H, neg_log = rep.theta_hat, rep.H_hat, rep.neg_log_Htilde_hat
            else:
                theta = theta3(series, tau, args.sigma, args.phi, scheme, args.quad_points)
        except ExtremalIndexError as err:
            error = f"{type(err).__name__}: {err}"
            if isinstance(err, EstimatorError) and err.level is not None:
                error += f" (level {err.level})"
        rows.append([*tau.tolist(), theta, H, neg_log, scheme.k_n, scheme.r_n, error])

    settings = {"est": args.est, "kn": args.kn, "L": args.L, "kappa": args.kappa}
    if args.est == 3:
        settings.update(sigma=args.sigma, phi=args.phi, quad_points=args.quad_points)
    meta = metadata_lines(
        input=args.input,
        estimator=" ".join(f"{k}={v}" for k, v in settings.items()),
        k_n=scheme.k_n, r_n=scheme.r_n, n=series.n, dropped=dropped,
        config_sha256=config_hash(settings),
    )
    buf = io.StringIO()
    names = [f"tau_{i + 1}" for i in range(series.d)]
    write_table(buf, names + ["theta_hat", "H_hat", "neg_log_Htilde_hat", "k_n", "r_n", "error"], rows, meta)
    _emit(buf.getvalue(), args.out)
    print(f"k_n={scheme.k_n} r_n={scheme.r_n} dropped {dropped} trailing observation(s)", file=sys.stderr)
    return EXIT_OK


def cmd_experiment(args) -> int:
    config, output, _ = load_run_config(args.config)
    out_path = args.out or output
    rows = run_monte_carlo(config, workers=args.workers, strict=False)
    meta = metadata_lines(
        process=config.process,
        base_seed=config.base_seed,
        replications=config.replications,
        config_sha256=config_hash(config_document(config)),
    )
    _emit(result_rows_to_csv(rows, meta), out_path)
    empty = [r for r in rows if r.successes == 0]
    for r in empty:
        print(f"empty cell: {r.estimator} k_n={r.k_n} angle={r.angle_index}", file=sys.stderr)
    return EXIT_EMPTY if empty else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="extremalindex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate a benchmark series to CSV")
    p.add_argument("process", choices=["iid", "arch", "ar1"])
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--rho", type=_pair, help="AR(1) coefficient(s): r or r1,r2")
    p.add_argument("--alpha", type=float, default=0.5, help="logistic dependence parameter")
    p.add_argument("--lambda", dest="lambda_", type=_pair, help="ARCH coefficient(s): l or l1,l2")
    p.add_argument("--eta", type=_pair, help="ARCH intercept(s)")
    p.add_argument("--burnin", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate theta(tau) on a CSV series")
    p.add_argument("input")
    p.add_argument("--est", type=int, choices=[1, 2, 3], default=2)
    p.add_argument("--L", default="1,1", help="norm for estimator 1: 'c,a' or 'const1'")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--kn", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--tau", type=_vector, action="append", help="direction, repeatable")
    group.add_argument("--angles", type=int, help="use the angle grid phi_k = k pi / 22, k = 1..K")
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--phi", type=float, default=1.5)
    p.add_argument("--quad-points", type=int, default=64)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("experiment", help="run a Monte Carlo study from a JSON config")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None,
                   help=f"parallel workers (default ${WORKERS_ENV} or 1)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
