"""Command-line front end.

    srmkit construct --input states.json --kind lsm --output meas.json
    srmkit gu-srm    --input states.json --group group.json --output meas.json
    srmkit diagnose  --input states.json --measurement meas.json
    srmkit sweep     --input binary.json --grid 0.01:0.99:0.01
    srmkit oracle    --input states.json --seed 0

Exit codes: 0 success, 2 input validation, 3 precondition, 4 GU structure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import _io
from .analysis import parse_grid, sweep_csv, weight_sweep
from .errors import PreconditionError, SrmError, ValidationError
from .factor import RANK_RTOL, svd
from .gu import GU_TOL, binary_srm, cyclic_srm, gu_srm, load_group_spec, symmetry_check
from .measurement import (
    completeness_residual,
    load_measurement,
    lsm,
    orthogonal_lsm,
    residual_error,
    srm,
    verify_srm_implicit,
    weighted_error,
    wlsm,
)
from .optimality import (
    HOLEVO_TOL,
    brute_force_lsm_oracle,
    error_probability,
    helstrom_oracle,
    holevo_conditions,
    sasaki_criterion,
)
from .stateset import load_state_set

CONSTRUCT_KINDS = ("lsm", "olsm", "wlsm", "srm", "binary-srm", "cyclic-srm")


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def _read(path: str, what: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise ValidationError(f"{what} file not found: {path}")
    return p.read_text(encoding="utf-8")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _weights(args, s) -> np.ndarray:
    if args.weights_from_priors:
        return np.sqrt(s.priors)
    if args.weights is None:
        raise ValidationError("--kind wlsm needs --weights or --weights-from-priors")
    try:
        w = np.array([float(x) for x in args.weights.split(",")])
    except ValueError:
        raise ValidationError(f"--weights must be a comma-separated list, got {args.weights!r}") from None
    if w.size != s.m:
        raise ValidationError(f"--weights has {w.size} entries, expected {s.m}")
    return w


def cmd_construct(args) -> int:
    s = load_state_set(_read(args.input, "state set"))
    kind = args.kind
    if kind == "lsm":
        meas = lsm(s, args.rank_tol)
    elif kind == "olsm":
        meas = orthogonal_lsm(s, args.rank_tol)
    elif kind == "srm":
        meas = srm(s, args.rank_tol)
    elif kind == "wlsm":
        meas = wlsm(s, _weights(args, s), args.rank_tol)
    elif kind == "binary-srm":
        meas = binary_srm(s, args.rank_tol)
    else:
        meas = cyclic_srm(s, tol=args.tol, rel_tol=args.rank_tol)
    if args.output:
        Path(args.output).write_text(_io.dumps(meas.to_dict()) + "\n", encoding="utf-8")
    summary = {
        "kind": meas.kind,
        "rank": int(meas.rank_used),
        "residual_error": _io.round_sig(residual_error(s, meas)),
        "completeness_residual": _io.round_sig(completeness_residual(s, meas, args.rank_tol)),
    }
    if meas.kind == "wlsm":
        summary["weighted_error"] = _io.round_sig(weighted_error(s, meas, meas.metadata["weights"]))
    print(_io.dumps(summary))
    return 0


def cmd_gu_srm(args) -> int:
    s = load_state_set(_read(args.input, "state set"))
    g = load_group_spec(_read(args.group, "group spec"))
    meas = gu_srm(s, g, tol=args.tol, rel_tol=args.rank_tol)
    if args.output:
        Path(args.output).write_text(_io.dumps(meas.to_dict()) + "\n", encoding="utf-8")
    report = holevo_conditions(s, meas, HOLEVO_TOL)
    out = {
        "sigma": [_io.round_sig(x) for x in meas.metadata["sigma"]],
        "w0": _io.round_sig(meas.metadata["w0"]),
        "p_error": _io.round_sig(error_probability(s, meas)),
        "residual_error": _io.round_sig(residual_error(s, meas)),
        "verdict": report.verdict,
        "symmetry_deviation": None if g.generators is None else _io.round_sig(symmetry_check(meas, g)),
    }
    print(_io.dumps(out))
    return 0


def cmd_diagnose(args) -> int:
    s = load_state_set(_read(args.input, "state set"))
    if not args.measurement:
        raise ValidationError("diagnose needs --measurement")
    meas = load_measurement(_read(args.measurement, "measurement"))
    if meas.matrix.shape != s.states.shape:
        raise ValidationError(f"measurement shape {meas.matrix.shape} does not match states {s.states.shape}")
    report = holevo_conditions(s, meas, args.tol if args.tol_given else HOLEVO_TOL)
    out = report.to_dict()
    out["completeness_residual"] = _io.round_sig(completeness_residual(s, meas, args.rank_tol))
    out["implicit_srm_residual"] = _io.round_sig(verify_srm_implicit(s, meas, args.rank_tol))
    out["residual_error"] = _io.round_sig(residual_error(s, meas))
    try:
        ok, spread = sasaki_criterion(s, True, args.rank_tol)
        out["sasaki_constant_diagonal"] = ok
    except PreconditionError:
        out["sasaki_constant_diagonal"] = None
    _emit(_io.dumps(out) + "\n", args.output)
    return 0


def cmd_sweep(args) -> int:
    s = load_state_set(_read(args.input, "state set"))
    if not args.grid:
        raise ValidationError("sweep needs --grid start:stop:step")
    rows = weight_sweep(s, parse_grid(args.grid), args.rank_tol)
    _emit(sweep_csv(rows), args.output)
    return 0


def cmd_oracle(args) -> int:
    s = load_state_set(_read(args.input, "state set"))
    f = svd(s.states, args.rank_tol)
    meas = lsm(s, args.rank_tol)
    out = {"e_min": _io.round_sig(residual_error(s, meas)), "rank": f.r}
    if s.m == 2:
        out["helstrom_oracle"] = _io.round_sig(helstrom_oracle(s))
        out["lsm_p_error"] = _io.round_sig(error_probability(s, meas))
    if s.m <= 6 and s.dim <= 6:
        out["lsm_oracle"] = _io.round_sig(brute_force_lsm_oracle(s, args.trials, args.seed))
    _emit(_io.dumps(out) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="state set JSON")
    common.add_argument("--output", help="output path (default: standard output)")
    common.add_argument("--tol", type=_positive, default=None, help="structure/optimality tolerance")
    common.add_argument("--rank-tol", type=_positive, default=RANK_RTOL, help="relative rank threshold")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="srmkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a measurement")
    p.add_argument("--kind", choices=CONSTRUCT_KINDS, default="lsm")
    wg = p.add_mutually_exclusive_group()
    wg.add_argument("--weights", help="comma-separated positive weights")
    wg.add_argument("--weights-from-priors", action="store_true", help="use sqrt(priors) as weights")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("gu-srm", parents=[common], help="SRM of a geometrically uniform set")
    p.add_argument("--group", required=True, help="group spec JSON")
    p.set_defaults(func=cmd_gu_srm)

    p = sub.add_parser("diagnose", parents=[common], help="optimality report for a measurement")
    p.add_argument("--measurement", required=True, help="measurement JSON")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("sweep", parents=[common], help="weighted error versus prior p (two states)")
    p.add_argument("--grid", required=True, help="start:stop:step")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common], help="brute-force optimality oracles")
    p.add_argument("--trials", type=int, default=10_000)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    args.tol_given = args.tol is not None
    if args.tol is None:
        args.tol = GU_TOL
    if not 0 < args.rank_tol < 1:
        print("error: --rank-tol must lie in (0, 1)", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SrmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
