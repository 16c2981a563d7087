"""Command-line entry point: ``dyadic-schrodinger <command> [options]``.

Exit codes are 0 when every check passes, 1 when a verification fails and
2 on usage or configuration errors.  Every command accepts
``--config FILE`` with ``key = value`` lines naming long options of that
command (dashes or underscores); options given on the command line win.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import besov, evolution, haar, maximal, nonlocal_op
from .exceptions import DyadicError
from .grid import BesovParams, GridFunction, generate_besov_sample, generate_lipschitz_sample, read_csv, write_csv
from .suites import VerifyConfig, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_GRID_SHARP_CELLS = 1024


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _common(p: argparse.ArgumentParser, resolution: int):
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", "-J", type=int, default=resolution)
    p.add_argument("--domain", "-L", type=int, default=1)
    p.add_argument("--out", help="output path (report or CSV)")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dyadic-schrodinger", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("verify", help="run every identity and inequality suite")
    _common(p, 7)
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--lambda", dest="lam", type=float, default=0.7)
    p.add_argument("--betas", type=_floats, default=(0.25, 0.5, 0.75))
    p.add_argument("--lambdas", type=_floats, default=(0.3, 0.5, 0.7))
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--tpoints", type=int, default=512)
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="override a tolerance")
    p.add_argument("--inject-fault", choices=["prefactor"], help="test hook: use a wrong integral prefactor")
    p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("besov", help="Besov seminorm by quadrature and by coefficients")
    _common(p, 8)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--input", help="grid function CSV (default: generated sample)")
    p.add_argument("--rtol", type=float, default=1e-10)

    p = sub.add_parser("dbeta", help="apply D^beta")
    _common(p, 8)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--input")
    p.add_argument("--output", help="CSV for the result")
    p.add_argument("--method", choices=["spectral", "integral", "both"], default="both")
    p.add_argument("--check", action="store_true", help="report the discrepancy of the two forms")
    p.add_argument("--rtol", type=float, default=1e-10)

    p = sub.add_parser("evolve", help="evolve initial data to time t")
    _common(p, 8)
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--lambda", dest="lam", type=float, default=0.7)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--input")
    p.add_argument("--output")
    p.add_argument("--residual", action="store_true")
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--trajectory", metavar="T0:T1:STEPS")

    p = sub.add_parser("maximal", help="maximal functions and the rate bound per cell")
    _common(p, 8)
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--lambda", dest="lam", type=float, default=0.7)
    p.add_argument("--input")
    p.add_argument("--tpoints", type=int, default=512)

    p = sub.add_parser("converge", help="u(t) -> u0 along t = 2**-m for Lipschitz data")
    _common(p, 8)
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--lambda", dest="lam", type=float, default=0.7)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--mmax", type=int, default=30)
    p.add_argument("--slope", type=float, default=1.0, help="slope bound of the samples (0 gives zero data)")
    return parser


def _read_config(path: str) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    for number, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        dests = {a.dest: a for a in sub._actions}
        # "lambda" is the option name, "lam" the attribute
        values = {("lam" if k == "lambda" else k): v for k, v in _read_config(args.config).items()}
        unknown = sorted(set(values) - set(dests) - {"config"})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        for key, value in values.items():
            action = dests[key]
            if isinstance(action, argparse._StoreTrueAction):
                value = value.lower() in ("1", "true", "yes", "on")
            elif isinstance(action, argparse._AppendAction):
                value = [v.strip() for v in value.split(";") if v.strip()]
            sub.set_defaults(**{key: value})
        args = parser.parse_args(argv)
    return args


def _load_input(args) -> GridFunction:
    if args.input:
        return read_csv(args.input)
    return generate_besov_sample(args.resolution, args.domain, getattr(args, "lam", 0.5), args.seed)


def _emit(obj: dict, path: str | None = None):
    text = json.dumps(obj, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _write_rows(path: str | None, header: list[str], rows):
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([f"{x:.17g}" if isinstance(x, float) else x for x in row])
    finally:
        if path:
            fh.close()


def cmd_verify(args) -> int:
    tolerances = {}
    for item in args.tol:
        if "=" not in item:
            raise UsageError(f"--tol expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        tolerances[key.strip()] = float(value)
    cfg = VerifyConfig(
        resolution=args.resolution,
        domain=args.domain,
        seed=args.seed,
        beta=args.beta,
        lam=args.lam,
        betas=args.betas,
        lambdas=args.lambdas,
        samples=args.samples,
        tpoints=args.tpoints,
        threads=args.threads,
        tolerances=tolerances,
        inject_fault=args.inject_fault,
    )
    report = run_verify(cfg)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json() + "\n")
    if not args.quiet:
        print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_besov(args) -> int:
    f = _load_input(args)
    c = haar.analyze(f)
    quad = besov.seminorm_sq_quadrature(f, args.lam)
    # the unit-interval means never enter the seminorm
    detail_only = haar.HaarCoefficients(c.resolution, c.domain_length, np.zeros_like(c.coarse), c.detail)
    coef = besov.seminorm_sq_coefficients(detail_only, args.lam)
    rel = abs(quad - coef) / coef if coef > 0 else abs(quad - coef)
    out = {
        "lambda": args.lam,
        "seminorm_sq_quadrature": quad,
        "seminorm_sq_coefficients": coef,
        "relative_difference": rel,
        "besov_norm": besov.besov_norm(f, args.lam),
        "coefficient_norm": besov.coefficient_norm(c, args.lam),
        "pass": rel <= args.rtol,
    }
    if f.mean_zero_per_unit() and f.l2_norm() > 0:
        out["equivalence_ratio"] = besov.equivalence_ratio(f, args.lam)
        out["equivalence_bracket"] = list(besov.equivalence_bracket(args.lam))
    _emit(out, args.out)
    return EXIT_OK if out["pass"] else EXIT_FAIL


def cmd_dbeta(args) -> int:
    f = _load_input(args)
    result = {}
    if args.method in ("spectral", "both") or args.check:
        result["spectral"] = nonlocal_op.dbeta_via_spectrum(f, args.beta)
    if args.method in ("integral", "both") or args.check:
        result["integral"] = nonlocal_op.dbeta_integral(f, args.beta)
    out = {"beta": args.beta, "method": args.method, "l2_norm": {k: v.l2_norm() for k, v in result.items()}}
    status = EXIT_OK
    if args.check:
        ref = result["spectral"]
        diff = (result["integral"] - ref).l2_norm()
        rel = diff / ref.l2_norm() if ref.l2_norm() > 0 else diff
        out["max_abs_discrepancy"] = float(np.max(np.abs(result["integral"].values - ref.values)))
        out["relative_l2_discrepancy"] = rel
        out["pass"] = rel <= args.rtol
        status = EXIT_OK if out["pass"] else EXIT_FAIL
    if args.output:
        write_csv(result["integral" if args.method != "spectral" else "spectral"], args.output)
    _emit(out, args.out)
    return status


def _parse_trajectory(spec: str):
    try:
        t0, t1, steps = spec.split(":")
        t0, t1, steps = float(t0), float(t1), int(steps)
    except ValueError:
        raise UsageError(f"--trajectory expects T0:T1:STEPS, got {spec!r}")
    if steps < 1 or t0 < 0 or t1 < t0:
        raise UsageError("--trajectory needs 0 <= T0 <= T1 and STEPS >= 1")
    return np.linspace(t0, t1, steps + 1)


def cmd_evolve(args) -> int:
    params = BesovParams(args.lam, args.beta)
    if args.t < 0:
        raise UsageError("--t must be non-negative")
    f = _load_input(args)
    c0 = haar.analyze(f)
    atol = 1e-12 * max(f.scale, 1e-300)
    if not c0.has_zero_coarse(atol):
        raise DyadicError("initial data must have zero mean on every unit interval")
    c0 = haar.HaarCoefficients(c0.resolution, c0.domain_length, np.zeros_like(c0.coarse), c0.detail)
    if args.output:
        write_csv(haar.synthesize(evolution.evolve(c0, args.beta, args.t)), args.output)
    if args.trajectory:
        rows = evolution.trajectory(c0, params, _parse_trajectory(args.trajectory), args.h)
        _write_rows(args.out, ["t", "l2_norm", "besov_norm", "residual"], (tuple(map(float, r)) for r in rows))
        return EXIT_OK
    out = {
        "beta": args.beta,
        "lambda": args.lam,
        "t": args.t,
        "l2_norm": float(np.sqrt(evolution.evolve(c0, args.beta, args.t).energy())),
        "besov_continuity_modulus": evolution.besov_continuity_modulus(c0, params, args.t, 0.0),
    }
    if args.residual:
        out["h"] = args.h
        out["pde_residual"] = evolution.pde_residual(c0, params, args.t, args.h)
    _emit(out, args.out)
    return EXIT_OK


def cmd_maximal(args) -> int:
    params = BesovParams(args.lam, args.beta)
    f = _load_input(args)
    if args.tpoints < 1:
        raise UsageError("--tpoints must be positive")
    tg = maximal.default_t_grid(args.tpoints)
    c = haar.analyze(f)
    if not c.has_zero_coarse(1e-12 * max(f.scale, 1e-300)):
        raise DyadicError("maximal estimates need zero mean on every unit interval")
    c = haar.HaarCoefficients(c.resolution, c.domain_length, np.zeros_like(c.coarse), c.detail)
    md = maximal.hardy_littlewood_dyadic(f)
    ms = maximal.sharp_maximal_dyadic(f, args.lam)
    if f.n_cells <= MAX_GRID_SHARP_CELLS:
        mg = maximal.sharp_maximal_grid(f, args.lam)
    else:
        mg = np.full(f.n_cells, np.nan)
    star = maximal.star_maximal(c, args.beta, tg)
    rate = maximal.convergence_rate_bound(f, params, tg)
    viol = rate.lhs > rate.rhs + 1e-12 * (1.0 + rate.rhs)
    rows = (
        (i, float(md[i]), float(ms[i]), float(mg[i]), float(star[i]), float(rate.lhs[i]), float(rate.rhs[i]), int(viol[i]))
        for i in range(f.n_cells)
    )
    _write_rows(args.out, ["cell", "M_dy", "M#_dy", "M#_grid", "Sstar", "lhs_rate", "rhs_rate", "violation"], rows)
    print(f"rate-bound violations: {rate.violations}", file=sys.stderr)
    return EXIT_OK if rate.passed else EXIT_FAIL


def _converge_one(args, params, seed):
    g, _ = generate_lipschitz_sample(args.resolution, args.domain, args.slope, seed)
    ts = 2.0 ** -np.arange(args.mmax + 1)
    c = haar.analyze(g)
    contrib = haar.level_contributions(c) if g.resolution else np.zeros((0, g.n_cells))
    omega = evolution.frequencies(g.resolution, params.beta)
    rhs = maximal.rate_constant(params) * maximal.sharp_maximal_dyadic(g, params.lam)
    scale = g.scale
    rows = []
    for m, t in enumerate(ts):
        diff = np.abs(((np.exp(-1j * t * omega) - 1.0)[:, None] * contrib).sum(axis=0))
        err = float(diff.max()) if diff.size else 0.0
        violations = int(np.sum(diff / t > rhs + 1e-12 * (1.0 + rhs)))
        rows.append((seed, m, float(t), err, err / scale if scale > 0 else 0.0, violations))
    return rows


def cmd_converge(args) -> int:
    params = BesovParams(args.lam, args.beta)
    if args.samples < 1 or args.mmax < 0:
        raise UsageError("--samples must be positive and --mmax non-negative")
    seeds = [args.seed + s for s in range(args.samples)]
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        results = list(pool.map(lambda s: _converge_one(args, params, s), seeds))
    rows = [r for block in results for r in block]
    _write_rows(args.out, ["seed", "m", "t", "max_abs_error", "relative_error", "violations"], rows)
    total = sum(r[-1] for r in rows)
    print(f"rate-bound violations: {total}", file=sys.stderr)
    return EXIT_OK if total == 0 else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "besov": cmd_besov,
    "dbeta": cmd_dbeta,
    "evolve": cmd_evolve,
    "maximal": cmd_maximal,
    "converge": cmd_converge,
}


def main(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        if args.resolution < 0 or args.threads < 1:
            raise UsageError("--resolution must be >= 0 and --threads >= 1")
        return COMMANDS[args.command](args)
    except (UsageError, DyadicError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
