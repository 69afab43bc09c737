"""Command-line front end.

Exit status: 0 on success (all checks passed), 1 on a domain error or a
failed check, 2 on a usage error. Subsystem indices are 1-based on the
command line and in printed reports.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import oracles
from .errors import (
    DegenerateSlit,
    InvalidState,
    ParseError,
    QStateError,
    StructureMismatch,
    SubjectObjectOverlap,
)
from .relative import relative_state_direct, relative_state_via_pair
from .scenarios import MachZehnderModel, OneSlitModel, run_mach_zehnder, run_one_slit
from .stateio import format_number, format_state, read_event, read_state
from .tensor_core import max_deviation
from .tolerances import EPS_CMP

TOLERANCE_ENV = "QSTATE_TOLERANCE"


class UsageError(Exception):
    pass


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--tolerance", type=_positive_float, default=None,
                        help=f"comparison tolerance (overrides ${TOLERANCE_ENV})")
    common.add_argument("--output", "-o", default=None, help="write the report to this file")

    parser = argparse.ArgumentParser(
        prog="qstate",
        description="Collapse vs relative-state descriptions of subsystem states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run the randomized identity checks")
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("one-slit", parents=[common], help="one-slit preparation")
    p.add_argument("--cells", type=int, required=True)
    p.add_argument("--slit", required=True, help="comma-separated 0-based cell indices")
    p.add_argument("--random-amplitudes", action="store_true",
                   help="draw the quanton amplitudes at random instead of uniformly")
    p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("mach-zehnder", parents=[common], help="Mach-Zehnder interferometer")
    p.add_argument("--theta", type=float, default=45.0, help="first beam splitter angle, degrees")
    p.add_argument("--mode", choices=("interference", "which-way"), required=True,
                   help="configuration at preparation time")
    p.add_argument("--delayed", action="store_true",
                   help="flip the configuration after preparation, before detection")

    p = sub.add_parser("relative-state", parents=[common],
                       help="relative state of one subsystem from a state file")
    p.add_argument("--state", required=True, help="state file")
    p.add_argument("--subject", required=True, help="<subsystem>:<projector-file>, 1-based")
    p.add_argument("--object", dest="obj", type=int, required=True, help="object subsystem, 1-based")
    return parser


def _tolerance(args) -> float:
    if args.tolerance is not None:
        return args.tolerance
    env = os.environ.get(TOLERANCE_ENV)
    if env:
        try:
            return _positive_float(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"${TOLERANCE_ENV}: {exc}")
    return EPS_CMP


def _fmt_complex(z) -> str:
    re = round(float(z.real), 6) + 0.0
    im = round(float(z.imag), 6) + 0.0
    return f"{re:+.6f}{im:+.6f}i"


def format_matrix(m, indent="    ") -> str:
    return "\n".join(indent + "  ".join(_fmt_complex(z) for z in row) for row in np.asarray(m))


def _prob(p) -> str:
    return f"{p:.9f}"


def _kv(key, value) -> str:
    if isinstance(value, bool):
        value = "true" if value else "false"
    elif isinstance(value, (float, np.floating)):
        value = format_number(value)
    return f"{key} = {value}"


# -- commands -------------------------------------------------------------------


def cmd_check(args, tol):
    reports = oracles.run_all_checks(args.trials, seed=args.seed, tol=tol, workers=args.workers)
    ok = all(r.passed for r in reports)
    lines = []
    if args.format == "machine":
        lines.append(_kv("trials", args.trials))
        lines.append(_kv("seed", args.seed))
        lines.append(_kv("tolerance", tol))
        for r in reports:
            lines.append(_kv(f"{r.name}.passed", r.passed))
            lines.append(_kv(f"{r.name}.max_deviation", r.max_deviation))
            lines.append(_kv(f"{r.name}.failing_seed", "none" if r.failing_seed is None else r.failing_seed))
        lines.append(_kv("all_passed", ok))
    else:
        lines.append(f"checks: trials={args.trials} seed={args.seed} tolerance={tol:g}")
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            extra = "" if r.failing_seed is None else f" failing_seed={r.failing_seed}"
            lines.append(f"{status} {r.name:<26} max_deviation={r.max_deviation:.3e}{extra}")
        lines.append("all checks passed" if ok else "SOME CHECKS FAILED")
    return (0 if ok else 1), "\n".join(lines) + "\n"


def _render_scenario(report, fmt) -> str:
    symbol = "P" if report.name == "mach-zehnder" else "weight"
    if fmt == "machine":
        lines = [format_state(report.composite_state).rstrip("\n"), "---"]
        for k, v in report.parameters.items():
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            lines.append(_kv(k, v))
        for label, w in zip(report.branch_labels, report.branch_weights):
            lines.append(_kv(f"{symbol}({label})", w))
        lines.append(_kv("max_deviation", report.max_deviation))
        lines.append(_kv("reconstruction_deviation", report.reconstruction_deviation))
        lines.append(_kv("equivalent", report.equivalence_verdict))
        return "\n".join(lines) + "\n"

    lines = [report.name + ": " + " ".join(
        f"{k}={','.join(map(str, v)) if isinstance(v, tuple) else v}" for k, v in report.parameters.items()
    )]
    for entry in report.timeline:
        lines.append(f"  {entry}")
    lines.append("  ".join(
        f"{symbol}({label}) = {_prob(w)}" for label, w in zip(report.branch_labels, report.branch_weights)
    ))
    for label, w, c, r in zip(report.branch_labels, report.branch_weights,
                              report.cqm_object_states, report.rsqm_object_states):
        if r is None:
            lines.append(f"branch {label}: zero probability (degenerate branch)")
            continue
        lines.append(f"branch {label}: weight {_prob(w)}")
        lines.append("  collapse object state:")
        lines.append(format_matrix(c.matrix))
        lines.append("  relative object state:")
        lines.append(format_matrix(r.matrix))
    lines.append(f"reconstruction deviation = {report.reconstruction_deviation:.3e}")
    lines.append(f"max deviation = {report.max_deviation:.3e}")
    lines.append("verdict: " + ("EQUIVALENT" if report.equivalence_verdict else "DIFFERENT"))
    return "\n".join(lines) + "\n"


def cmd_one_slit(args, tol):
    if args.cells < 2:
        raise UsageError("--cells must be >= 2")
    try:
        slit = tuple(int(s) for s in args.slit.split(",") if s.strip())
    except ValueError:
        raise UsageError(f"--slit: cannot parse {args.slit!r}")
    if any(not 0 <= c < args.cells for c in slit):
        raise UsageError("--slit indices must lie in 0..cells-1")
    if args.random_amplitudes:
        rng = np.random.default_rng(args.seed)
        amps = rng.standard_normal(args.cells) + 1j * rng.standard_normal(args.cells)
        model = OneSlitModel(args.cells, slit, amps / np.linalg.norm(amps))
    else:
        model = OneSlitModel.uniform(args.cells, slit)
    report = run_one_slit(model, tol=tol)
    return (0 if report.equivalence_verdict else 1), _render_scenario(report, args.format)


def cmd_mach_zehnder(args, tol):
    if not 0.0 <= args.theta <= 180.0:
        raise UsageError("--theta must lie in [0, 180]")
    model = MachZehnderModel(args.theta, args.mode == "interference", args.delayed)
    report = run_mach_zehnder(model, tol=tol)
    return (0 if report.equivalence_verdict else 1), _render_scenario(report, args.format)


def _parse_subject(spec: str):
    head, sep, path = spec.partition(":")
    if not sep or not path:
        raise UsageError("--subject must look like <subsystem>:<projector-file>")
    try:
        return int(head) - 1, path
    except ValueError:
        raise UsageError(f"--subject: bad subsystem {head!r}")


def cmd_relative_state(args, tol):
    subject, path = _parse_subject(args.subject)
    state = read_state(args.state).validate()
    n = state.structure.n_subsystems
    obj = args.obj - 1
    if not (0 <= subject < n and 0 <= obj < n):
        raise UsageError(f"subsystem indices must lie in 1..{n}")
    if subject == obj:
        raise UsageError("--object must differ from the subject subsystem")
    event = read_event(path, subject)
    if event.dim != state.structure.dims[subject]:
        raise UsageError("projector dimension does not match the subject subsystem")
    direct = relative_state_direct(state, event, obj)
    pair = relative_state_via_pair(state, event, obj)
    dev = max_deviation(direct, pair)
    if args.format == "machine":
        text = (format_state(direct) + "---\n"
                + _kv("subject", subject + 1) + "\n" + _kv("object", obj + 1) + "\n"
                + _kv("path_deviation", dev) + "\n" + _kv("paths_agree", dev <= tol) + "\n")
    else:
        text = "\n".join([
            f"relative state of subsystem {obj + 1} w.r.t. event on subsystem {subject + 1}",
            "  all-at-once trace:",
            format_matrix(direct.matrix),
            "  via the object/subject pair:",
            format_matrix(pair.matrix),
            f"max deviation between paths = {dev:.3e}",
        ]) + "\n"
    return (0 if dev <= tol else 1), text


COMMANDS = {
    "check": cmd_check,
    "one-slit": cmd_one_slit,
    "mach-zehnder": cmd_mach_zehnder,
    "relative-state": cmd_relative_state,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = _tolerance(args)
        status, text = COMMANDS[args.command](args, tol)
    except (UsageError, ParseError, InvalidState) as exc:
        print(f"qstate {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qstate {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except DegenerateSlit as exc:
        print(f"qstate {args.command}: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (SubjectObjectOverlap, StructureMismatch) as exc:
        print(f"qstate {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except QStateError as exc:
        print(f"qstate {args.command}: {exc.code}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
