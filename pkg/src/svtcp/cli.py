"""Command-line interface: ``svtcp {eval,solve,check,probe,demo}``.

Exit codes: 0 Solved/Verified (or a certificate that re-validates), 1
Refuted/NoSolutionFound, 2 Unknown, 64 usage error, 65 invalid instance,
66 missing input.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import classes, instances, io, setvalued, tcp
from .classes import Status
from .setvalued import SvtcpInstance
from .tcp import SolverConfig, TcpInstance
from .tensor import DenseTensor, contract_to_scalar, contract_to_vector

EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_NOINPUT = 64, 65, 66

TENSOR_CLASSES = ("s", "semipositive", "strict-semipositive", "r0", "p")
SET_CLASSES = ("strong-sp", "weak-sp", "zero-unique", "limit-r0")

DISCREPANCY_NOTE = (
    "note: at v=(1,0) the only candidate witness is w=1, and B(1)v^2 = (1,0) is not "
    "strictly positive, so v is not in C' under the strict definition of C'. The "
    "positive variant below is a map where a point of C' exists while C stays empty."
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _vec(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.replace(" ", "").split(",") if x != ""])
    except ValueError:
        raise UsageError(f"cannot parse vector {text!r}") from None


def _status_exit(status) -> int:
    return {Status.VERIFIED: EXIT_OK, Status.REFUTED: EXIT_NEGATIVE, Status.UNKNOWN: EXIT_UNKNOWN}[status]


def _verdict_payload(v: classes.ClassVerdict) -> dict:
    return {"status": v.status.value, "certificate": v.certificate, "omega": v.omega, "detail": v.detail}


def _tensor_of(inst, cls: str) -> DenseTensor:
    if isinstance(inst, DenseTensor):
        return inst
    if isinstance(inst, TcpInstance):
        return inst.B
    raise UsageError(f"class {cls!r} needs a tensor or tcp instance")


def _svtcp_of(inst, what: str) -> SvtcpInstance:
    if not isinstance(inst, SvtcpInstance):
        raise UsageError(f"{what} needs an svtcp instance")
    return inst


# -- commands ----------------------------------------------------------------------


def cmd_eval(args, inst):
    v = _vec(args.v)
    tol = args.tol
    if args.cls:
        return _eval_certificate(args, inst, v)
    if isinstance(inst, DenseTensor):
        return {"Bv^{m-1}": contract_to_vector(inst, v), "Bv^m": contract_to_scalar(inst, v)}, EXIT_OK
    if isinstance(inst, TcpInstance):
        res = tcp.natural_residual(inst, v)
        ok = tcp.is_solution(inst, v, tol)
        return {"natural_residual": res, "residual_norm": float(np.linalg.norm(res)),
                "feasible": tcp.is_feasible(inst, v, tol), "solution": ok}, EXIT_OK if ok else EXIT_NEGATIVE
    r, w = setvalued.svtcp_residual(inst, v)
    ok, witness = setvalued.is_svtcp_solution(inst, v, tol)
    payload = {"omega_of_v": setvalued.omega_of(inst, v), "r": r, "argmin_omega": w,
               "solution": ok, "witness_omega": witness}
    return payload, EXIT_OK if ok else EXIT_NEGATIVE


def _eval_certificate(args, inst, v):
    """Re-check a certificate against the class definition.  Exit 0 when it holds up."""
    cls = args.cls
    w = tuple(_vec(args.omega)) if args.omega else None
    if cls in TENSOR_CLASSES:
        B = _tensor_of(inst, cls)
        if cls == "s":
            valid = bool(v.min() > 0 and contract_to_vector(B, v).min() > 0)
            claim = "v > 0 and Bv^{m-1} > 0"
        elif cls in ("semipositive", "strict-semipositive"):
            valid = classes.semipositive_violation(B, v, strict=cls.startswith("strict"))
            claim = "violates " + cls
        elif cls == "r0":
            valid = classes.r0_violation(B, v)
            claim = "nonzero solution of TCP(B, 0)"
        else:
            valid = classes.p_violation(B, v)
            claim = "violates P"
    else:
        inst = _svtcp_of(inst, f"class {cls!r}")
        omegas = setvalued.omega_of(inst, v)
        if cls in ("strong-sp", "weak-sp"):
            pos = v > 0
            bad = [u for u in omegas if pos.any() and v.min() >= 0
                   and contract_to_vector(inst.family.at(u), v)[pos].max() < 0]
            if cls == "strong-sp":
                valid = (w in bad) if w is not None else bool(bad)
            else:
                valid = len(bad) == len(omegas) and bool(bad)
            claim = "violates " + cls
        elif cls == "zero-unique":
            ok, witness = setvalued.is_svtcp_solution(inst, v, args.tol)
            valid = bool(ok and v.any())
            claim = "nonzero solution"
        else:
            if w is None:
                raise UsageError("limit-r0 certificates need --omega")
            valid = w in inst.omega.limit_values() and classes.r0_violation(inst.family.at(w), v)
            claim = "nonzero solution of TCP(B(w), 0) for w in the limit set"
    return {"class": cls, "certificate": v, "omega": w, "claim": claim, "valid": bool(valid)}, (
        EXIT_OK if valid else EXIT_NEGATIVE
    )


def cmd_solve(args, inst):
    cfg = SolverConfig(starts=args.starts, max_iters=args.max_iters, tol=args.tol, seed=args.seed)
    if isinstance(inst, TcpInstance):
        rep = tcp.solve_tcp(inst, cfg)
        payload = {"status": rep.status.value, "v": rep.v, "residual": rep.residual,
                   "solver": rep.solver.value, "iterations": rep.iterations}
        return payload, EXIT_OK if rep.solved else EXIT_NEGATIVE
    inst = _svtcp_of(inst, "solve")
    sols = setvalued.solve_svtcp(inst, cfg)
    payload = {"solutions": [{"v": v, "omega": w} for v, w in sols.pairs],
               "complete": sols.complete, "omegas_tried": sols.omegas_tried}
    return payload, EXIT_OK if sols.pairs else EXIT_NEGATIVE


def cmd_check(args, inst):
    cls = args.cls
    depth = args.grid_depth
    if cls in TENSOR_CLASSES:
        B = _tensor_of(inst, cls)
        if cls == "s":
            v = classes.check_s_tensor(B, budget=args.budget, seed=args.seed)
        elif cls == "semipositive":
            v = classes.check_semipositive(B, False, depth)
        elif cls == "strict-semipositive":
            v = classes.check_semipositive(B, True, depth)
        elif cls == "r0":
            v = classes.check_r0(B, depth)
        else:
            v = classes.check_p_tensor(B, depth)
    else:
        inst = _svtcp_of(inst, f"class {cls!r}")
        if cls == "strong-sp":
            v = setvalued.check_strongly_semipositive_set(inst, depth)
        elif cls == "weak-sp":
            v = setvalued.check_weakly_semipositive_set(inst, depth)
        elif cls == "zero-unique":
            cfg = SolverConfig(starts=args.starts, tol=args.tol, seed=args.seed)
            v = setvalued.check_zero_unique_solution(inst, depth, cfg)
        else:
            v = setvalued.check_limit_r0(inst, depth)
    payload = {"class": cls, **_verdict_payload(v)}
    return payload, _status_exit(v.status)


def cmd_probe(args, inst):
    if args.kind == "sol":
        if not isinstance(inst, TcpInstance):
            raise UsageError("probe --kind sol needs a tcp instance")
        scales = [float(x) for x in _vec(args.scales)]
        cfg = SolverConfig(starts=1, tol=args.tol, seed=args.seed)
        rep = classes.probe_sol_boundedness(inst, scales, cfg)
        payload = {"kind": "sol", "r0": _verdict_payload(rep.r0), "scales": rep.scales,
                   "solutions": rep.solutions, "norms": rep.norms, "max_norm": rep.max_norm}
        return payload, _status_exit(rep.r0.status)
    inst = _svtcp_of(inst, "probe --kind level")
    dirs = setvalued.sample_directions(inst.dim, args.directions, args.seed)
    grid = setvalued.log_grid(args.t_max)
    alphas = args.alpha or [10.0]
    rep = setvalued.probe_level_boundedness(inst, dirs, grid, alphas)
    payload = {
        "kind": "level",
        "t_grid": rep.t_grid,
        "alphas": rep.alphas,
        "directions": [
            {"direction": d.direction, "tail_min": d.tail_min, "r_at_t_max": d.r[-1],
             "first_exceed": [d.first_exceed[a] for a in alphas], "bounded": [d.bounded[a] for a in alphas]}
            for d in rep.directions
        ],
        "bounded_directions": {str(a): rep.bounded_directions(a) for a in alphas},
    }
    flagged = any(rep.bounded_directions(a) for a in alphas)
    return payload, EXIT_NEGATIVE if flagged else EXIT_OK


def cmd_demo(args, _inst):
    if args.name != "example-3-1":
        raise UsageError(f"unknown demo {args.name!r}; available: example-3-1")
    ex = instances.example_3_1()
    in_cp, w_cp = setvalued.membership_Cprime(ex, [1.0, 0.0])
    lim = setvalued.check_limit_r0(ex, args.grid_depth)
    var = instances.example_3_1_positive_variant()
    var_cp, var_w = setvalued.membership_Cprime(var, [1.0, 0.0])
    promo = setvalued.promote_cprime_to_c(var, [1.0, 0.0], var_w) if var_cp else None
    payload = {
        "omega((1,0))": setvalued.omega_of(ex, [1.0, 0.0]),
        "omega((2,0))": setvalued.omega_of(ex, [2.0, 0.0]),
        "recurrent_set_along_(1,0)": setvalued.recurrent_omega_set(ex, [1.0, 0.0]),
        "auto_limit_set": ex.omega.auto_limit_set(),
        "limit_r0": _verdict_payload(lim),
        "C_prime((1,0))": in_cp,
        "C_prime_witness": w_cp,
        "C((1,1))": setvalued.membership_C(ex, [1.0, 1.0])[0],
        "discrepancy_note": DISCREPANCY_NOTE,
        "positive_variant": {
            "C_prime((1,0))": var_cp,
            "C_prime_witness": var_w,
            "promotion": None if promo is None else {"v": promo.v, "t": promo.t},
        },
    }
    return payload, EXIT_OK


def _print_human(command: str, payload: dict) -> None:
    def fmt(x):
        x = io.to_jsonable(x)
        return io.canonical_dumps(x) if isinstance(x, (list, dict)) else str(x)

    for key, value in payload.items():
        if isinstance(value, dict) and key not in ("limit_r0",):
            print(f"{key}:")
            for k2, v2 in value.items():
                print(f"  {k2}: {fmt(v2)}")
        else:
            print(f"{key}: {fmt(value)}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=tcp.DEFAULT_TOL)
    common.add_argument("--grid-depth", type=int, default=10)
    common.add_argument("--starts", type=int, default=16)
    common.add_argument("--json", action="store_true", help="print a machine-readable report")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    parser = _Parser(prog="svtcp", description="Set-valued tensor complementarity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate residuals or re-check a certificate")
    p.add_argument("instance")
    p.add_argument("--v", required=True, help="comma-separated vector")
    p.add_argument("--class", dest="cls", choices=TENSOR_CLASSES + SET_CLASSES)
    p.add_argument("--omega", help="comma-separated parameter for set certificates")

    p = sub.add_parser("solve", parents=[common], help="solve a tcp or svtcp instance")
    p.add_argument("instance")
    p.add_argument("--max-iters", type=int, default=200)

    p = sub.add_parser("check", parents=[common], help="run a class checker")
    p.add_argument("instance")
    p.add_argument("--class", dest="cls", required=True, choices=TENSOR_CLASSES + SET_CLASSES)
    p.add_argument("--budget", type=int, default=32, help="multi-start budget for the S-tensor search")

    p = sub.add_parser("probe", parents=[common], help="level-boundedness or solution-set probes")
    p.add_argument("instance")
    p.add_argument("--kind", choices=("level", "sol"), default="level")
    p.add_argument("--directions", type=int, default=50)
    p.add_argument("--t-max", type=float, default=1e3)
    p.add_argument("--alpha", type=float, action="append")
    p.add_argument("--scales", default="1,10,100")

    p = sub.add_parser("demo", parents=[common], help="bundled walkthroughs")
    p.add_argument("name", choices=("example-3-1",))
    return parser


COMMANDS = {"eval": cmd_eval, "solve": cmd_solve, "check": cmd_check, "probe": cmd_probe, "demo": cmd_demo}


def main(argv=None) -> int:
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    inst, text = None, None
    if args.command != "demo":
        try:
            inst = io.load_instance(args.instance)
        except (FileNotFoundError, IsADirectoryError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NOINPUT
        except ValueError as exc:
            print(f"invalid instance: {exc}", file=sys.stderr)
            return EXIT_DATA
        text = io.dumps_instance(inst)
    try:
        payload, code = COMMANDS[args.command](args, inst)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.json:
        tolerances = {"tol": args.tol, "grid_depth": args.grid_depth}
        wall = time.perf_counter() - start if args.timing else None
        report = io.make_report(args.command, text, payload, tolerances, args.seed, wall)
        sys.stdout.write(io.dumps_report(report))
    else:
        _print_human(args.command, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
