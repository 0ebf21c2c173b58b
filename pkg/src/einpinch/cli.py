"""Command-line verification reports.

Exit codes: 0 verified, 1 internal error, 2 infeasible input or failed
precondition, 3 counterexample found.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .berger import find_berger_frame, verify_berger_properties
from .constants import constants_table, corollary13_audit
from .curvature import MODEL_NAMES, CurvatureTensor4, EigenProfile, blocks_to_profile, model_space, tensor_to_blocks
from .errors import BlowUpError, NotEinsteinError
from .flow import FlowState, integrate, scalar_evolution_check, self_similar_residual, trace_identity_residual
from .search import SearchConfig, lemma22_search, lemma41_search

SCHEMA = "1"
EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


class CommandError(Exception):
    def __init__(self, message, code, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def envelope(command, seed, config, payload, wall_time):
    return {"schema": SCHEMA, "command": command, "seed": seed, "config": config,
            "payload": payload, "wall_time": wall_time}


# -- commands ---------------------------------------------------------------

def cmd_constants(args):
    table = constants_table(args.precision)
    audit = corollary13_audit()
    lines = [f"{'name':8s} {'value':>{args.precision + 4}s} {'truncated':>10s} {'printed':>10s} {'|diff|':>10s}"]
    for row in table["rows"]:
        lines.append(f"{row['name']:8s} {row['rounded']:>{args.precision + 4}s} {row['truncated']:>10s} "
                     f"{row['printed']:>10s} {row['abs_diff']:10.2e}")
    lines.append("")
    lines.append(f"2*K_1/2            {audit['two_k_half']:.{args.precision}f}")
    lines.append(f"displayed form     {audit['closed_form_display']:.{args.precision}f}")
    lines.append(f"printed decimal    {audit['printed_decimal']:.6f}")
    return {"table": table, "corollary13": audit}, "\n".join(lines), EXIT_OK


def cmd_verify(args):
    cfg = SearchConfig(samples=args.samples, refinements=args.refinements, seed=args.seed,
                       threads=args.threads)
    if args.lemma == "22":
        report = lemma22_search(args.eps, cfg, ablate_upper_bound=args.ablate_upper_bound)
    else:
        report = lemma41_search(args.s, args.eps, cfg)
    payload = report.to_dict()
    lines = [f"lemma {report.lemma}: {report.samples} samples"]
    for label, sub in report.by_case.items():
        if sub is None:
            lines.append(f"  {label}: empty")
            continue
        extra = f" [{sub.proof_case}]" if sub.proof_case else ""
        lines.append(f"  {label}{extra}: min margin {sub.margin:.6g} (I = {sub.I_value:.6g}, bound {sub.bound:.6g})")
    verdict = "COUNTEREXAMPLE" if report.counterexample else "verified"
    lines.append(f"{verdict}: min margin {report.margin:.6g} at {report.argmin.to_dict()}")
    code = EXIT_COUNTEREXAMPLE if report.counterexample else EXIT_OK
    return payload, "\n".join(lines), code


def _profile_from_args(args):
    if args.profile is not None:
        vals = args.profile
        return EigenProfile(vals[:3], vals[3:]), "profile"
    if args.fixture is None:
        raise CommandError("give a fixture name or --profile", EXIT_PRECONDITION)
    return blocks_to_profile(tensor_to_blocks(model_space(args.fixture))), args.fixture


def cmd_flow(args):
    p, source = _profile_from_args(args)
    try:
        traj = integrate(FlowState(p), args.t_end, args.dt)
    except BlowUpError as exc:
        raise CommandError(str(exc), EXIT_PRECONDITION, {"t_estimate": exc.t_estimate}) from exc
    normalized = abs(p.a.sum() - 2) < 1e-9 and abs(p.c.sum() - 2) < 1e-9
    payload = {
        "source": source,
        "initial": p.to_dict(),
        "final": traj.final().to_dict(),
        "t_end": float(traj.t[-1]),
        "steps": int(traj.t.size - 1),
        "trace_identity_residual": trace_identity_residual(traj),
        "ordering_events": [list(e) for e in traj.ordering_events()],
        "self_similar_residual": self_similar_residual(p, args.t_end, args.dt) if normalized else None,
        "scalar_residual": scalar_evolution_check(p, args.t_end, args.dt) if normalized else None,
    }
    if args.csv:
        traj.write_csv(args.csv)
        payload["csv"] = args.csv
    lines = [f"flow {source} to t = {payload['t_end']:g} in {payload['steps']} steps",
             f"final a = {np.round(traj.a[-1], 9).tolist()}",
             f"final c = {np.round(traj.c[-1], 9).tolist()}"]
    if normalized:
        lines.append(f"self-similar residual {payload['self_similar_residual']:.3e}")
        lines.append(f"scalar residual       {payload['scalar_residual']:.3e}")
    return payload, "\n".join(lines), EXIT_OK


def _load_tensor(args):
    if args.fixture:
        return model_space(args.fixture)
    if args.input is None:
        raise CommandError("give a tensor JSON file (or '-') or --fixture", EXIT_PRECONDITION)
    fh = sys.stdin if args.input == "-" else open(args.input)
    with fh:
        return CurvatureTensor4.from_dict(json.load(fh))


def cmd_berger(args):
    t = _load_tensor(args)
    try:
        result = find_berger_frame(t)
    except NotEinsteinError as exc:
        raise CommandError(str(exc), EXIT_PRECONDITION,
                           {"ricci_defect": exc.ricci_defect, "b_norm": exc.b_norm}) from exc
    check = verify_berger_properties(t, result.frame)
    payload = {"frame": result.frame.Q.tolist(), "data": result.data.to_dict(),
               "degenerate": result.degenerate, "properties": check.to_dict()}
    d = result.data
    lines = [f"K12 = {d.m:.9f}  K13 = {d.k13:.9f}  K14 = {d.k14:.9f}  x = {d.x:.9f}  y = {d.y:.9f}",
             f"degenerate spectrum: {result.degenerate}",
             "properties: " + ", ".join(f"{k}={'ok' if getattr(check, k) else 'FAIL'}"
                                        for k in ("min_plane", "max_plane", "mixed_vanish", "inequalities"))]
    return payload, "\n".join(lines), EXIT_OK


def cmd_model(args):
    t = model_space(args.name)
    return t.to_dict(), json.dumps(t.to_dict()), EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print the JSON report envelope")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="einpinch", parents=[common],
                                     description="Curvature pinching checks for Einstein four-manifolds.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", parents=[common], help="closed-form constants and audits")
    p.add_argument("--precision", type=int, default=6)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify", parents=[common], help="falsification search for a lemma")
    p.add_argument("lemma", choices=["22", "41"])
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--refinements", type=int, default=100)
    p.add_argument("--ablate-upper-bound", action="store_true",
                   help="replace the K14 <= sqrt(3)/2 hypothesis by K14 <= 2")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("flow", parents=[common], help="integrate the eigenvalue ODE")
    p.add_argument("fixture", nargs="?", choices=MODEL_NAMES)
    p.add_argument("--profile", type=float, nargs=6, metavar=("A1", "A2", "A3", "C1", "C2", "C3"))
    p.add_argument("--t-end", type=float, default=0.4)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("berger", parents=[common], help="Berger frame of a tensor")
    p.add_argument("input", nargs="?", help="tensor JSON file, or '-' for stdin")
    p.add_argument("--fixture", choices=MODEL_NAMES)
    p.set_defaults(func=cmd_berger)

    p = sub.add_parser("model", parents=[common], help="print a model-space tensor as JSON")
    p.add_argument("name", choices=MODEL_NAMES)
    p.set_defaults(func=cmd_model)
    return parser


_CONFIG_SKIP = {"func", "json", "command", "seed", "threads"}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    args.threads = getattr(args, "threads", 1)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _CONFIG_SKIP}
    start = time.perf_counter()
    try:
        payload, text, code = args.func(args)
    except CommandError as exc:
        payload, text, code = {"error": str(exc), **(exc.payload or {})}, f"error: {exc}", exc.code
    except (ValueError, KeyError, OSError) as exc:
        payload, text, code = {"error": str(exc)}, f"error: {exc}", EXIT_PRECONDITION
    except Exception as exc:  # noqa: BLE001
        payload, text, code = {"error": repr(exc)}, f"internal error: {exc!r}", EXIT_INTERNAL
    wall = time.perf_counter() - start
    if args.json:
        print(json.dumps(envelope(args.command, args.seed, config, payload, wall), sort_keys=True), file=out)
    else:
        stream = out if code in (EXIT_OK, EXIT_COUNTEREXAMPLE) else sys.stderr
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
