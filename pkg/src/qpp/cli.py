"""Command line interface.

Subcommands:

* ``qpp verify cabello``: rebuild the fixed two-spin scenario and check
  every claim about it (selection probability 1/9, both resolutions of
  identity, delta exclusivity, the five forced zeros, unsatisfiability
  over all 128 assignments, and the three-step refutation).
* ``qpp verify hardy``: the same battery for the Hardy construction at
  given angles, or at the optimizer's angles with ``--optimal``.
* ``qpp check FILE``: validate a scenario file and decide noncontextual
  satisfiability; SAT and UNSAT both exit 0.
* ``qpp optimize {hardy,cabello-family}``: run the maximizers.

Exit codes: 0 success, 2 validation or usage error, 3 I/O or parse
error, 4 numerical failure.  Reports print as text by default or as
stable JSON with ``--json``.  The environment variable QPP_TOL
overrides the default consistency tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, hilbert, nchv, prepost, scenario
from .constructions import (
    DegenerateConfigurationError,
    cabello_scenario,
    hardy_scenario,
)
from .nchv import UNSAT, EnumerationLimitError
from .optimizer import ConvergenceError, maximize_cabello_family, maximize_hardy
from .prepost import SelectionInconsistencyError
from .scenario import PrePostScenario, ScenarioParseError

__all__ = [
    "EXIT_OK",
    "EXIT_VALIDATION",
    "EXIT_IO",
    "EXIT_NUMERIC",
    "ARTIFACT_VERSION",
    "Check",
    "Report",
    "main",
    "entry",
]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

ARTIFACT_VERSION = 1

CABELLO_PROBABILITY = 1.0 / 9.0
HARDY_MAX_PROBABILITY = ((math.sqrt(5.0) - 1.0) / 2.0) ** 5

_FORCED_EXPECTED = (
    "alpha=0(Prediction), beta+=0(Prediction), beta-=0(Prediction), "
    "gamma+=0(Retrodiction), gamma-=0(Retrodiction)"
)
_TRACE_EXPECTED = "delta+=1; delta-=1; CONFLICT"


@dataclass(frozen=True)
class Check:
    """One named comparison inside a report."""

    name: str
    expected: object
    actual: object
    deviation: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "deviation": self.deviation,
            "pass": self.passed,
        }

    @staticmethod
    def from_dict(d: dict) -> "Check":
        return Check(d["name"], d["expected"], d["actual"], d["deviation"], d["pass"])


@dataclass(frozen=True)
class Report:
    """A command's full result: checks plus free-form details."""

    command: str
    checks: tuple[Check, ...]
    details: dict | None = None
    artifact_version: int = ARTIFACT_VERSION

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        doc = {
            "artifact_version": self.artifact_version,
            "command": self.command,
            "checks": [c.to_dict() for c in self.checks],
            "overall": self.overall,
        }
        if self.details is not None:
            doc["details"] = self.details
        return doc

    @staticmethod
    def from_dict(d: dict) -> "Report":
        return Report(
            command=d["command"],
            checks=tuple(Check.from_dict(c) for c in d["checks"]),
            details=d.get("details"),
            artifact_version=d["artifact_version"],
        )

    def render_text(self) -> str:
        lines = [f"{self.command} (qpp {__version__})"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{status}  {c.name:<32} expected={_fmt(c.expected)} "
                f"actual={_fmt(c.actual)} deviation={_fmt(c.deviation)}"
            )
        if self.details:
            lines.append("details:")
            block = json.dumps(self.details, indent=2, ensure_ascii=False)
            lines.extend("  " + ln for ln in block.splitlines())
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(report: Report, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(report.render_text())


def _fail(message: str, code: int) -> int:
    print(f"qpp: {message}", file=sys.stderr)
    return code


def _forced_string(forced) -> str:
    return ", ".join(f"{fv.label}={fv.bit}({fv.justification})" for fv in forced)


def _forced_details(forced) -> list[dict]:
    return [{"label": fv.label, "bit": fv.bit, "justification": fv.justification} for fv in forced]


def _trace_details(trace: nchv.ContradictionTrace) -> list[dict]:
    return [
        {"premises": list(step.premises), "rule": step.rule, "conclusion": step.conclusion}
        for step in trace.steps
    ]


def _context_entry_deviation(s: PrePostScenario, members) -> float:
    pm = s.projector_map()
    ops = [pm[m].operator for m in members]
    dev = hilbert.identity_deviation(ops)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            dev = max(dev, hilbert.exclusivity_deviation(ops[i], ops[j]))
    return dev


def _scenario_battery(
    s: PrePostScenario, tol_check: float, numeric_tol: float
) -> tuple[list[Check], dict]:
    """Checks shared by the verify targets, plus their detail entries."""
    checks: list[Check] = []
    vreport = scenario.validate(s, tol_check)
    checks.append(Check("scenario_valid", True, vreport.passed, None, vreport.passed))

    for i, ctx in enumerate(s.contexts):
        dev = _context_entry_deviation(s, ctx.members)
        checks.append(
            Check(f"resolution_of_identity[{i}]", 0.0, dev, dev, dev < numeric_tol)
        )

    pm = s.projector_map()
    overlap = abs(hilbert.inner(pm["delta+"].state, pm["delta-"].state))
    checks.append(Check("delta_pair_exclusive", 0.0, overlap, overlap, overlap < numeric_tol))

    forced = prepost.forced_values(s, tol_check)
    actual_forced = _forced_string(forced)
    checks.append(
        Check("forced_values", _FORCED_EXPECTED, actual_forced, None, actual_forced == _FORCED_EXPECTED)
    )

    sat = nchv.enumerate_assignments(s, forced)
    checks.append(Check("nchv_status", UNSAT, sat.status, None, sat.status == UNSAT))
    n = len(s.projectors)
    checks.append(
        Check("assignments_examined", 1 << n, sat.assignments_examined, None,
              sat.assignments_examined == 1 << n)
    )
    if sat.conflict is not None:
        actual_trace = "; ".join(sat.conflict.conclusions())
        trace_detail = _trace_details(sat.conflict)
    else:
        actual_trace = "(no certificate)"
        trace_detail = []
    checks.append(
        Check("contradiction_trace", _TRACE_EXPECTED, actual_trace, None,
              actual_trace == _TRACE_EXPECTED)
    )

    details = {"forced_values": _forced_details(forced), "trace": trace_detail}
    return checks, details


def _verify_exit(checks: list[Check]) -> int:
    if all(c.passed for c in checks):
        return EXIT_OK
    for c in checks:
        if c.name == "scenario_valid" and not c.passed:
            return EXIT_VALIDATION
    return EXIT_NUMERIC


def _export(s: PrePostScenario, path: str) -> int:
    try:
        Path(path).write_bytes(scenario.save(s))
    except OSError as exc:
        return _fail(f"export failed: {exc}", EXIT_IO)
    return EXIT_OK


def _cmd_verify_cabello(args, tol_check: float) -> int:
    s = cabello_scenario()
    checks: list[Check] = []
    battery, details = _scenario_battery(s, tol_check, numeric_tol=1e-12)
    checks.append(battery[0])

    prob = prepost.selection_probability(s)
    dev = abs(prob - CABELLO_PROBABILITY)
    checks.append(
        Check("selection_probability", CABELLO_PROBABILITY, prob, dev, dev < 1e-12)
    )
    checks.extend(battery[1:])

    report = Report("verify cabello", tuple(checks), details)
    _emit(report, args.json)
    code = _verify_exit(checks)
    if code == EXIT_OK and args.export:
        code = _export(s, args.export)
    return code


def _cmd_verify_hardy(args, tol_check: float) -> int:
    has_angles = args.theta_a is not None or args.theta_b is not None
    if args.optimal and has_angles:
        return _fail("verify hardy: --optimal conflicts with --theta-a/--theta-b", EXIT_VALIDATION)
    if not args.optimal:
        if args.theta_a is None or args.theta_b is None:
            return _fail(
                "verify hardy: supply both --theta-a and --theta-b, or --optimal",
                EXIT_VALIDATION,
            )

    if args.optimal:
        err = _check_search_args(args.grid, args.refine_tol, args.threads)
        if err:
            return _fail(err, EXIT_VALIDATION)
        try:
            result = maximize_hardy(args.grid, args.refine_tol, args.threads)
        except ConvergenceError as exc:
            return _fail(str(exc), EXIT_NUMERIC)
        params = dict(result.parameters)
        theta_a, theta_b = params["theta_a"], params["theta_b"]
    else:
        theta_a, theta_b = args.theta_a, args.theta_b

    try:
        s = hardy_scenario(theta_a, theta_b, tol_check)
    except DegenerateConfigurationError as exc:
        return _fail(str(exc), EXIT_VALIDATION)

    checks, details = _scenario_battery(s, tol_check, numeric_tol=1e-9)
    prob = prepost.selection_probability(s)
    details["selection_probability"] = prob
    details["theta_a"] = theta_a
    details["theta_b"] = theta_b

    if args.optimal:
        dev = abs(result.objective - HARDY_MAX_PROBABILITY)
        checks.append(
            Check("optimal_probability", HARDY_MAX_PROBABILITY, result.objective, dev, dev < 1e-6)
        )
        details["evaluations"] = result.evaluations
        details["grid_resolution"] = result.grid_resolution
        details["refine_tolerance"] = result.refine_tolerance

    margin = CABELLO_PROBABILITY - prob
    checks.append(Check("probability_below_bound", True, prob < CABELLO_PROBABILITY, margin,
                        prob < CABELLO_PROBABILITY))

    report = Report("verify hardy", tuple(checks), details)
    _emit(report, args.json)
    code = _verify_exit(checks)
    if code == EXIT_OK and args.export:
        code = _export(s, args.export)
    return code


def _cmd_check(args, tol_check: float) -> int:
    if args.max_witnesses < 0:
        return _fail(f"--max-witnesses must be nonnegative, got {args.max_witnesses}", EXIT_VALIDATION)
    try:
        data = Path(args.path).read_bytes()
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    try:
        s = scenario.load(data, lax=args.lax, tol_check=tol_check)
    except ScenarioParseError as exc:
        return _fail(f"parse error: {exc}", EXIT_IO)

    command = f"check {args.path}"
    vreport = scenario.validate(s, tol_check)
    valid_check = Check("scenario_valid", True, vreport.passed, None, vreport.passed)
    if not vreport.passed:
        details = {
            "validation_failures": [
                {"name": c.name, "deviation": c.deviation, "detail": c.detail}
                for c in vreport.failures()
            ]
        }
        _emit(Report(command, (valid_check,), details), args.json)
        return EXIT_VALIDATION

    try:
        forced = prepost.forced_values(s, tol_check)
    except SelectionInconsistencyError as exc:
        return _fail(str(exc), EXIT_VALIDATION)
    try:
        sat = nchv.enumerate_assignments(s, forced)
    except EnumerationLimitError as exc:
        return _fail(str(exc), EXIT_NUMERIC)

    details = {
        "status": sat.status,
        "assignments_examined": sat.assignments_examined,
        "forced_values": _forced_details(forced),
        "witnesses": [w.as_dict() for w in sat.witnesses[: args.max_witnesses]],
        "witnesses_total": len(sat.witnesses),
    }
    if sat.status == UNSAT:
        if sat.conflict is not None:
            details["trace"] = _trace_details(sat.conflict)
        else:
            details["trace_note"] = "UNSAT without unit-propagation certificate"

    checks = (valid_check, Check("satisfiability", "SAT|UNSAT", sat.status, None, True))
    _emit(Report(command, checks, details), args.json)
    return EXIT_OK


def _check_search_args(grid: int, refine_tol: float, threads: int) -> str | None:
    if grid < 16:
        return f"--grid must be at least 16, got {grid}"
    if not refine_tol > 0.0:
        return f"--refine-tol must be positive, got {refine_tol!r}"
    if threads < 1:
        return f"--threads must be at least 1, got {threads}"
    return None


def _cmd_optimize(args) -> int:
    err = _check_search_args(args.grid, args.refine_tol, args.threads)
    if err is None and args.target == "cabello-family" and not args.exclusivity_tol > 0.0:
        err = f"--exclusivity-tol must be positive, got {args.exclusivity_tol!r}"
    if err:
        return _fail(err, EXIT_VALIDATION)

    try:
        if args.target == "hardy":
            result = maximize_hardy(args.grid, args.refine_tol, args.threads)
        else:
            result = maximize_cabello_family(
                args.grid, args.refine_tol, args.exclusivity_tol, args.threads
            )
    except ConvergenceError as exc:
        return _fail(str(exc), EXIT_NUMERIC)

    details = {
        "parameters": dict(result.parameters),
        "objective": result.objective,
        "evaluations": result.evaluations,
        "grid_resolution": result.grid_resolution,
        "refine_tolerance": result.refine_tolerance,
    }
    if result.exclusivity_tol is not None:
        details["exclusivity_tol"] = result.exclusivity_tol
    checks = (
        Check("converged", True, True, None, True),
        Check("objective", None, result.objective, None, True),
    )
    _emit(Report(f"optimize {args.target}", checks, details), args.json)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpp",
        description="Verify and explore pre/postselected contextuality scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="rebuild a known scenario and check its claims")
    vtargets = verify.add_subparsers(dest="target", required=True)

    vc = vtargets.add_parser("cabello", help="the fixed two-spin scenario")
    vc.add_argument("--json", action="store_true", help="emit the report as JSON")
    vc.add_argument("--export", metavar="PATH", help="also write the scenario file")

    vh = vtargets.add_parser("hardy", help="the two-qubit Hardy construction")
    vh.add_argument("--theta-a", type=float, help="first polar angle, in (0, pi/2)")
    vh.add_argument("--theta-b", type=float, help="second polar angle, in (0, pi/2)")
    vh.add_argument("--optimal", action="store_true", help="verify at the optimizer's angles")
    vh.add_argument("--grid", type=int, default=64, help="initial grid resolution (default 64)")
    vh.add_argument("--refine-tol", type=float, default=1e-9,
                    help="refinement tolerance (default 1e-9)")
    vh.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    vh.add_argument("--json", action="store_true", help="emit the report as JSON")
    vh.add_argument("--export", metavar="PATH", help="also write the scenario file")

    check = sub.add_parser("check", help="validate a scenario file and decide satisfiability")
    check.add_argument("path", help="scenario JSON file")
    check.add_argument("--lax", action="store_true", help="ignore unknown fields")
    check.add_argument("--max-witnesses", type=int, default=16,
                       help="witnesses to include in the report (default 16)")
    check.add_argument("--json", action="store_true", help="emit the report as JSON")

    opt = sub.add_parser("optimize", help="maximize a selection probability")
    opt.add_argument("target", choices=["hardy", "cabello-family"])
    opt.add_argument("--grid", type=int, default=64, help="initial grid resolution (default 64)")
    opt.add_argument("--refine-tol", type=float, default=1e-9,
                     help="refinement tolerance (default 1e-9)")
    opt.add_argument("--exclusivity-tol", type=float, default=1e-9,
                     help="feasibility tolerance for the family search (default 1e-9)")
    opt.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    opt.add_argument("--json", action="store_true", help="emit the report as JSON")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return EXIT_OK
        return code if isinstance(code, int) else EXIT_VALIDATION

    tol_check = hilbert.TOL_CHECK
    env = os.environ.get("QPP_TOL")
    if env is not None:
        try:
            tol_check = float(env)
        except ValueError:
            return _fail(f"invalid QPP_TOL value {env!r}", EXIT_VALIDATION)
        if not tol_check > 0.0:
            return _fail(f"QPP_TOL must be positive, got {env!r}", EXIT_VALIDATION)

    if args.command == "verify":
        if args.target == "cabello":
            return _cmd_verify_cabello(args, tol_check)
        return _cmd_verify_hardy(args, tol_check)
    if args.command == "check":
        return _cmd_check(args, tol_check)
    return _cmd_optimize(args)


def entry() -> None:
    sys.exit(main())
