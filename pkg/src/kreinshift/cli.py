"""Command-line surface.

Commands:
  xi          shift-function profile of a pair (H0, V) as CSV
  logm        logarithm of a dissipative (or anti-dissipative) matrix
  check       seeded verification suites
  average     weak-pairing averaging identity for a linear path
  op-average  operator-valued averaging identity for a factor K

Exit codes: 0 success, 1 mathematical check or convergence failure,
2 usage or parse error.  KREIN_SHIFT_THREADS caps parallel evaluation
(0 or unset picks the CPU count); output is identical at any setting.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from .averaging import (
    PerturbationPath,
    TestFunction,
    averaged_pairing_lhs,
    averaged_pairing_rhs,
    operator_average_residual,
    operator_increment_residual,
)
from .checks import DEFAULT_SEED, SUITE_NAMES, run_suites
from .errors import ConvergenceError, KreinShiftError, PreconditionError
from .herglotz import EpsSchedule, HerglotzFamily
from .io import format_float, read_matrix, write_csv
from .matkit import expm, frobenius, hermitian_part, is_hermitian
from .oplog import Branch, QuadratureConfig, logm_antidissipative, logm_dissipative, logm_oracle_diag
from .shift import auto_grid, compute_profile

EXIT_OK = 0
EXIT_MATH = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    eps0: float = 1e-2
    conv_tol: float = 1e-9
    rel_tol: float = 1e-11
    rank_tol: float = 1e-12
    seed: int = DEFAULT_SEED

    def schedule(self) -> EpsSchedule:
        return EpsSchedule(eps0=self.eps0, conv_tol=self.conv_tol)

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(rel_tol=self.rel_tol)


def _parse_grid(spec: str, fam: HerglotzFamily) -> np.ndarray:
    if spec.lower() == "auto":
        return auto_grid(fam)
    parts = spec.split(":")
    if len(parts) != 3:
        raise PreconditionError(f"grid must be min:max:count or auto, got {spec!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1 or hi < lo:
        raise PreconditionError(f"bad grid specification {spec!r}")
    return np.linspace(lo, hi, count)


def _parse_srange(spec: str) -> tuple[float, float]:
    parts = spec.split(":")
    if len(parts) != 2:
        raise PreconditionError(f"s-range must be a:b, got {spec!r}")
    a, b = float(parts[0]), float(parts[1])
    if not a < b:
        raise PreconditionError(f"s-range must be increasing, got {spec!r}")
    return a, b


def _parse_f(spec: str) -> TestFunction:
    kind, _, payload = spec.partition(":")
    try:
        if kind == "poly":
            return TestFunction.polynomial([float(c) for c in payload.split(",")])
        if kind == "gauss":
            mu, sigma = (float(x) for x in payload.split(","))
            return TestFunction.gaussian(mu, sigma)
        if kind == "imres":
            re, im = (float(x) for x in payload.split(","))
            return TestFunction.resolvent_im(complex(re, im))
    except ValueError as exc:
        raise PreconditionError(f"cannot parse test function {spec!r}: {exc}") from exc
    raise PreconditionError(
        f"unknown test function {spec!r} (want poly:c0,c1,... | gauss:mu,sigma | imres:re,im)"
    )


def _load_hermitian(path, what: str) -> np.ndarray:
    m, _ = read_matrix(path)
    if not is_hermitian(m, 1e-10):
        raise PreconditionError(f"{what} matrix in {path} is not Hermitian")
    return hermitian_part(m)


def _out_stream(args):
    return open(args.out, "w", encoding="utf-8") if args.out else sys.stdout


# ----------------------------------------------------------------------


def _cmd_xi(args) -> int:
    h0 = _load_hermitian(args.h0, "base")
    v = _load_hermitian(args.v, "perturbation")
    if h0.shape != v.shape:
        raise _Usage(f"dimension mismatch: H0 is {h0.shape[0]}, V is {v.shape[0]}")
    cfg = _config_from(args)
    fam = HerglotzFamily.from_potential(h0, v, cfg.rank_tol)
    grid = _parse_grid(args.grid, fam)
    profile = compute_profile(
        fam, grid, cfg.schedule(), cfg.quadrature(), include_det=True
    )

    header = [
        "lambda",
        "xi",
        "xi_plus",
        "xi_minus",
        "xi_oracle",
        "xi_det",
        "xiop_plus_1",
        "xiop_plus_2",
        "xiop_plus_3",
        "xiop_minus_1",
        "xiop_minus_2",
        "xiop_minus_3",
        "converged",
    ]

    def top3(eigs):
        vals = [format_float(x) for x in eigs[:3]]
        return vals + [""] * (3 - len(vals))

    rows = []
    for i, lam in enumerate(profile.grid):
        rows.append(
            [format_float(lam)]
            + [
                format_float(x)
                for x in (
                    profile.xi[i],
                    profile.xi_plus[i],
                    profile.xi_minus[i],
                    profile.xi_oracle[i],
                    profile.xi_det[i],
                )
            ]
            + top3(profile.xi_op_plus_eigs[i])
            + top3(profile.xi_op_minus_eigs[i])
            + ["1" if profile.converged[i] else "0"]
        )
    stream = _out_stream(args)
    try:
        write_csv(stream, header, rows)
    finally:
        if stream is not sys.stdout:
            stream.close()

    bad = [
        float(profile.grid[i])
        for i in range(len(profile.grid))
        if not profile.converged[i]
        or abs(profile.xi[i] - profile.xi_oracle[i]) >= 1e-6
    ]
    if bad:
        print(
            "oracle or convergence failure at lambda: "
            + ", ".join(format_float(x) for x in bad),
            file=sys.stderr,
        )
        return EXIT_MATH
    return EXIT_OK


def _cmd_logm(args) -> int:
    t, _ = read_matrix(args.t)
    cfg = _config_from(args)
    branch = Branch.LN if args.branch == "ln" else Branch.LOG
    if branch is Branch.LN:
        # principal-branch diagnostic route through the eigendecomposition
        result = logm_oracle_diag(t, Branch.LN)
    elif args.anti:
        result = logm_antidissipative(t, cfg.quadrature())
    else:
        result = logm_dissipative(t, cfg.quadrature())
    residual = frobenius(expm(result) - t) / max(frobenius(t), 1e-300)
    header = ["row", "col", "re", "im"]
    rows = [
        [str(i), str(j), format_float(result[i, j].real), format_float(result[i, j].imag)]
        for i in range(result.shape[0])
        for j in range(result.shape[1])
    ]
    stream = _out_stream(args)
    try:
        write_csv(stream, header, rows)
        stream.write(f"# expm-roundtrip-relative-residual,{format_float(residual)}\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK


def _cmd_check(args) -> int:
    names = list(SUITE_NAMES) if args.suite == "all" else [args.suite]
    reports = run_suites(names, seed=args.seed)
    overall = all(r.ok for r in reports)
    stream = _out_stream(args)
    try:
        for rep in reports:
            stream.write(rep.render() + "\n")
        stream.write(f"overall: {'PASS' if overall else 'FAIL'}\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK if overall else EXIT_MATH


def _cmd_average(args) -> int:
    h0 = _load_hermitian(args.h0, "base")
    v1 = _load_hermitian(args.v, "path direction")
    if h0.shape != v1.shape:
        raise _Usage(f"dimension mismatch: H0 is {h0.shape[0]}, V is {v1.shape[0]}")
    s1, s2 = _parse_srange(args.s_range)
    f = _parse_f(args.f)
    path = PerturbationPath(np.zeros_like(h0), v1, s1, s2)
    lhs = averaged_pairing_lhs(h0, path, f)
    rhs = averaged_pairing_rhs(h0, path, f)
    resid = abs(lhs - rhs)
    stream = _out_stream(args)
    try:
        write_csv(
            stream,
            ["lhs", "rhs", "residual"],
            [[format_float(lhs), format_float(rhs), format_float(resid)]],
        )
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK if resid < 1e-4 * (1.0 + abs(lhs)) else EXIT_MATH


def _cmd_op_average(args) -> int:
    h0 = _load_hermitian(args.h0, "base")
    k, _ = read_matrix(args.k)
    if k.shape[0] != h0.shape[0]:
        raise _Usage(f"dimension mismatch: H0 is {h0.shape[0]}, K has {k.shape[0]} rows")
    f = _parse_f(args.f)
    if args.s_range:
        s1, s2 = _parse_srange(args.s_range)
        rep = operator_increment_residual(h0, k, s1, s2, f)
    else:
        rep = operator_average_residual(h0, k, f)
    stream = _out_stream(args)
    try:
        write_csv(
            stream,
            ["residual", "lhs_fro", "rhs_fro"],
            [
                [
                    format_float(rep.residual),
                    format_float(frobenius(rep.lhs)),
                    format_float(frobenius(rep.rhs)),
                ]
            ],
        )
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK if rep.residual < 1e-4 else EXIT_MATH


# ----------------------------------------------------------------------


class _Usage(Exception):
    pass


def _config_from(args) -> RunConfig:
    return RunConfig(
        eps0=args.eps0,
        conv_tol=args.conv_tol,
        rel_tol=args.rel_tol,
        rank_tol=args.rank_tol,
        seed=getattr(args, "seed", DEFAULT_SEED),
    )


def _add_common(p) -> None:
    p.add_argument("--eps0", type=float, default=1e-2, help="starting height of the vertical limit")
    p.add_argument("--conv-tol", dest="conv_tol", type=float, default=1e-9)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-11)
    p.add_argument("--rank-tol", dest="rank_tol", type=float, default=1e-12)
    p.add_argument("--out", default=None, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kreinshift",
        description="Spectral shift operators and functions for Hermitian matrix pairs.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xi", help="shift-function profile of a pair (H0, V) as CSV")
    p.add_argument("--h0", required=True, help="matrix file for the base matrix")
    p.add_argument("--v", required=True, help="matrix file for the perturbation")
    p.add_argument("--grid", default="auto", help="min:max:count or auto")
    _add_common(p)
    p.set_defaults(func=_cmd_xi)

    p = sub.add_parser("logm", help="logarithm of a dissipative matrix as CSV")
    p.add_argument("--t", required=True, help="matrix file for the argument")
    p.add_argument(
        "--branch",
        choices=("log", "ln"),
        default="log",
        help="log: cut along the negative imaginary axis (integral route); "
        "ln: principal branch via the eigendecomposition route",
    )
    p.add_argument("--anti", action="store_true", help="argument is anti-dissipative")
    _add_common(p)
    p.set_defaults(func=_cmd_logm)

    p = sub.add_parser("check", help="run seeded verification suites")
    p.add_argument("suite", choices=SUITE_NAMES + ("all",))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("average", help="weak-pairing averaging identity for V(s) = s V")
    p.add_argument("--h0", required=True)
    p.add_argument("--v", required=True, help="matrix file for the path direction")
    p.add_argument("--s-range", dest="s_range", default="0:1", help="a:b")
    p.add_argument("--f", default="poly:0,1", help="poly:c0,c1,... | gauss:mu,sigma | imres:re,im")
    _add_common(p)
    p.set_defaults(func=_cmd_average)

    p = sub.add_parser("op-average", help="operator averaging identity for a factor K")
    p.add_argument("--h0", required=True)
    p.add_argument("--k", required=True, help="matrix file for the factor K")
    p.add_argument("--s-range", dest="s_range", default=None, help="a:b for the increment form")
    p.add_argument("--f", default="poly:0,1")
    _add_common(p)
    p.set_defaults(func=_cmd_op_average)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, KreinShiftError) as exc:
        # parse-level problems (bad files, malformed flags) are usage errors;
        # violated mathematical bounds are math failures
        if isinstance(exc, PreconditionError) and _is_parse_error(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


def _is_parse_error(exc: Exception) -> bool:
    text = str(exc)
    markers = (
        "matrix file",
        "cannot parse",
        "grid must be",
        "s-range must be",
        "unknown test function",
        "bad grid",
    )
    return any(m in text for m in markers)


if __name__ == "__main__":
    sys.exit(main())
