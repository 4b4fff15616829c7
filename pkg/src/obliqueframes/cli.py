"""Command line front end: one JSON problem in, one JSON report out."""

import argparse
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .aliasing import min_aliasing_rotation, pair_aliasing, subspace_aliasing
from .duality import (
    canonical_v_dual, certify, check_feasible_spectrum, construct_parseval_dual,
    optimal_dual, random_dual,
)
from .errors import ConjectureRegime, ConjectureRegimeWarning, FrameError, ValidationError
from .frames import eigenlist, frame_operator
from .geometry import combined_optimal, conjecture_experiment, optimal_rotation, principal_angles
from .linalg import Tol
from .majorization import PotentialSpec, potential
from .problem import Problem, dumps, encode_matrix, encode_rows, load_problem

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_MATH = 0, 1, 2, 3


def _spectrum(values, p, tol):
    """Unpadded spectrum plus the count of ambient zeros."""
    values = np.asarray(values, dtype=float)
    cutoff = tol.rank * max(1.0, float(values.max(initial=0.0)))
    kept = values[values > cutoff]
    return {"values": kept, "trace": float(values.sum()), "zero_count": int(p - kept.size)}


def _field_for(A, field):
    # a real problem can still produce complex output (random duals)
    if field == "real" and np.max(np.abs(np.imag(A)), initial=0.0) > 0:
        return "complex"
    return field


def _frame_out(F, field):
    field = _field_for(F.vectors, field)
    return {"field": field, "rows": encode_rows(F.vectors, field)}


def _certificate(cert, p, tol, field):
    return {
        "dual_frame": _frame_out(cert.G, field),
        "spectrum": _spectrum(cert.spectrum, p, tol),
        "rank_B": cert.rank_B,
        "residuals": {
            "duality": cert.residual_duality,
            "adjoint": cert.residual_adjoint,
            "range_in_V": cert.residual_in_V,
            "psd_min_eig_B": cert.min_eig_B,
        },
    }


def _angles(sp):
    a = principal_angles(sp)
    out = {
        "radians": a.thetas,
        "degrees": np.degrees(a.thetas),
        "cosines": a.cosines,
        "friedrichs": {"radians": a.friedrichs, "degrees": float(np.degrees(a.friedrichs))},
        "dixmier": {"radians": a.dixmier, "degrees": float(np.degrees(a.dixmier))},
    }
    return a, out


def cmd_angles(pb: Problem, args):
    sp = pb.sp
    a, out = _angles(sp)
    res = {"principal_angles": out, "complementary": sp.is_complementary}
    if sp.is_complementary:
        A = subspace_aliasing(sp)
        res["subspace_aliasing"] = A
        res["residuals"] = {"aliasing_vs_tan": abs(A - float(np.tan(a.friedrichs)))}
    else:
        res["subspace_aliasing"] = None
    return res


def cmd_dual(pb: Problem, args):
    F, sp, tol = pb.F, pb.sp, pb.F.tol
    p = sp.ambient_dim
    mode = args.mode
    res = {"mode": mode, "m": 2 * sp.d - F.n}
    if mode == "canonical":
        cert = certify(F, canonical_v_dual(F, sp), sp)
    elif mode == "optimal":
        if pb.trace_budget is None:
            raise ValidationError("mode 'optimal' needs trace_budget in the problem file")
        cert, nu = optimal_dual(F, sp, pb.trace_budget)
        res["trace_budget"] = pb.trace_budget
        res["waterfilled"] = _spectrum(nu, p, tol)
        res["residuals_extra"] = {
            "trace_vs_budget": abs(cert.trace - pb.trace_budget),
            "commutator": cert.commutator,
        }
    elif mode == "parseval":
        cert = construct_parseval_dual(F, sp)
        S_G = frame_operator(cert.G)
        res["residuals_extra"] = {"parseval": float(np.linalg.norm(S_G - sp.P_V))}
    else:
        seed = args.seed if args.seed is not None else (pb.seed if pb.seed is not None else 0)
        cert = random_dual(F, sp, seed=seed)
        res["seed"] = seed
    res.update(_certificate(cert, p, tol, pb.field))
    return res


def cmd_feasible(pb: Problem, args):
    if pb.spectrum is None:
        raise ValidationError("command 'feasible' needs spectrum in the problem file")
    F, sp = pb.F, pb.sp
    verdict = check_feasible_spectrum(pb.spectrum, F, sp)
    return {
        "spectrum": pb.spectrum,
        "canonical_spectrum": _spectrum(eigenlist(canonical_v_dual(F, sp)), sp.ambient_dim, F.tol),
        "m": verdict.m,
        "feasible": verdict.feasible,
        "violated": [{"index": i, "kind": kind} for i, kind in verdict.violated],
    }


def _plan(plan, field):
    return {
        "U0": encode_matrix(plan.U, _field_for(plan.U, field)),
        "predicted_spectrum": plan.predicted_spectrum,
        "measured_spectrum": plan.measured_spectrum,
        "residuals": {"predicted_vs_measured": plan.residual},
        "notes": list(plan.notes),
    }


def cmd_rotate(pb: Problem, args):
    F, sp, tol = pb.F, pb.sp, pb.F.tol
    p = sp.ambient_dim
    res = {"objective": args.objective}
    before = eigenlist(canonical_v_dual(F, sp))
    res["canonical_spectrum_before"] = _spectrum(before, p, tol)
    if args.objective == "spectrum":
        plan = optimal_rotation(F, sp)
        res.update(_plan(plan, pb.field))
    elif args.objective == "aliasing":
        plan, achieved = min_aliasing_rotation(F, sp)
        res.update(_plan(plan, pb.field))
        res["aliasing_before"] = pair_aliasing(F, canonical_v_dual(F, sp), sp).pair_aliasing
        res["aliasing_min"] = achieved
    else:
        if pb.trace_budget is None:
            raise ValidationError("objective 'combined' needs trace_budget in the problem file")
        try:
            plan, cert, nu = combined_optimal(F, sp, pb.trace_budget)
            res["proven"] = True
        except ConjectureRegime:
            if not args.experiment_conjecture:
                raise
            warnings.warn("combined optimum is unproven for n < 2d; reporting an experiment",
                          ConjectureRegimeWarning, stacklevel=2)
            plan = optimal_rotation(F, sp)
            cert, nu = optimal_dual(plan.apply(F), sp, pb.trace_budget)
            res["proven"] = False
        res.update(_plan(plan, pb.field))
        res["optimal_dual"] = _certificate(cert, p, tol, pb.field)
        res["waterfilled"] = _spectrum(nu, p, tol)
    if args.experiment_conjecture:
        seed = args.seed if args.seed is not None else (pb.seed if pb.seed is not None else 0)
        obs = conjecture_experiment(F, sp, pb.trace_budget, samples=args.samples, seed=seed)
        res["conjecture_experiment"] = {
            "samples": obs.samples, "violations": obs.violations,
            "worst_margin": obs.worst_margin, "regime_proven": obs.regime_proven,
            "details": obs.details,
        }
    return res


def cmd_potential(pb: Problem, args):
    F, sp = pb.F, pb.sp
    spec = PotentialSpec.parse(args.h)
    G = canonical_v_dual(F, sp)
    return {
        "h": args.h,
        "frame": potential(spec, eigenlist(F), F.span_dim),
        "canonical_dual": potential(spec, eigenlist(G), sp.d),
    }


COMMANDS = {
    "angles": cmd_angles, "dual": cmd_dual, "feasible": cmd_feasible,
    "rotate": cmd_rotate, "potential": cmd_potential,
}


def _tol(args) -> Tol:
    kw = {}
    if args.tol_eq is not None:
        kw["eq"] = args.tol_eq
    if args.tol_rank is not None:
        kw["rank"] = args.tol_rank
    return Tol(**kw)


def _echo(args):
    keys = ("mode", "objective", "h", "seed", "tol_eq", "tol_rank", "experiment_conjecture")
    return {"command": args.command, **{k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}}


def run(args, path):
    """Run one command on one file. Returns ``(report, exit_code)``."""
    report = {"command": _echo(args), "input": str(path)}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            tol = _tol(args)
            pb = load_problem(path, tol)
            report["input_digest"] = pb.digest
            report["result"] = COMMANDS[args.command](pb, args)
            code = EXIT_OK
        except ValidationError as exc:
            code = EXIT_INPUT
            report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        except FrameError as exc:
            code = EXIT_MATH
            report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        except OSError as exc:
            code = EXIT_INPUT
            report["error"] = {"type": "ParseError", "message": str(exc)}
    report["warnings"] = [{"type": w.category.__name__, "message": str(w.message)} for w in caught]
    report["exit_code"] = code
    return report, code


def _run_batch_item(item):
    args, path, out_dir = item
    report, code = run(args, path)
    target = out_dir / f"{path.stem}.{args.command}.report.json"
    target.write_text(dumps(report) + "\n")
    return str(path), str(target), code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", nargs="?", help="problem file (JSON)")
    common.add_argument("--batch", metavar="DIR", help="run on every *.json in DIR, one report per file")
    common.add_argument("--out", metavar="DIR", help="where batch reports go (default: DIR itself)")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers in batch mode")
    common.add_argument("--tol-eq", type=float, help="equality tolerance")
    common.add_argument("--tol-rank", type=float, help="rank tolerance")
    common.add_argument("--seed", type=int, help="seed for random duals and experiments")
    common.add_argument("--experiment-conjecture", action="store_true",
                        help="sample rotations and report the combined-optimum experiment")
    common.add_argument("--samples", type=int, default=50, help="rotations sampled by the experiment")

    parser = argparse.ArgumentParser(prog="obliqueframes", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("angles", parents=[common], help="principal angles and subspace aliasing")
    d = sub.add_parser("dual", parents=[common], help="construct an oblique dual")
    d.add_argument("--mode", choices=["canonical", "optimal", "parseval", "random"], default="canonical")
    sub.add_parser("feasible", parents=[common], help="test a candidate dual spectrum")
    r = sub.add_parser("rotate", parents=[common], help="optimal rotation of W")
    r.add_argument("--objective", choices=["spectrum", "aliasing", "combined"], default="spectrum")
    h = sub.add_parser("potential", parents=[common], help="convex potentials of F and its canonical dual")
    h.add_argument("--h", default="fp", help="fp, mse or pq:<q>")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if (args.problem is None) == (args.batch is None):
        parser.error("give exactly one of a problem file or --batch DIR")
    if args.problem is not None:
        report, code = run(args, Path(args.problem))
        sys.stdout.write(dumps(report) + "\n")
        for w in report["warnings"]:
            print(f"warning: {w['type']}: {w['message']}", file=sys.stderr)
        if code:
            print(f"error: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
        return code

    src = Path(args.batch)
    out_dir = Path(args.out) if args.out else src
    out_dir.mkdir(parents=True, exist_ok=True)
    items = [(args, path, out_dir) for path in sorted(src.glob("*.json"))]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_batch_item, items))
    else:
        results = [_run_batch_item(item) for item in items]
    summary = [{"input": a, "report": b, "exit_code": c} for a, b, c in results]
    sys.stdout.write(dumps({"batch": str(src), "reports": summary}) + "\n")
    worst = max((c for *_, c in results), default=0)
    return worst


if __name__ == "__main__":
    sys.exit(main())
