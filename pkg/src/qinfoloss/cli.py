"""Command-line front end: ``qinfoloss <command> [options]``.

Every command writes one table (CSV by default) to stdout or ``--out``.
Exit status is 0 on success, 1 on a domain error or failed self-test and
2 on a usage error.
"""

from __future__ import annotations

import argparse
import io
import math
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import scenarios as sc
from .errors import QInfoError
from .metrics import LogBase
from .report import OutputTable, make_table, render
from .selftest import run_selftest
from .states import make_mms

PROG = "qinfoloss"

_PI_TOKEN = re.compile(r"^(?:(\d+)\s*\*?\s*)?pi(?:\s*/\s*(\d+))?$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one-line diagnostic, exit 2
        raise UsageError(message)


def parse_angle(text: str) -> float:
    """Radians from a float or a pi expression such as ``pi/3`` or ``2pi/3``."""
    t = text.strip().lower()
    neg = t.startswith("-")
    if neg:
        t = t[1:].strip()
    m = _PI_TOKEN.match(t)
    if m:
        k = int(m.group(1) or 1)
        n = int(m.group(2) or 1)
        if n == 0:
            raise ValueError(f"bad angle {text!r}")
        value = math.pi * k / n
    else:
        value = float(t)
        if not math.isfinite(value):
            raise ValueError(f"bad angle {text!r}")
    return -value if neg else value


def parse_real(text: str) -> float:
    """A float or an exact fraction like ``1/3``."""
    try:
        return float(text)
    except ValueError:
        return float(Fraction(text.strip()))


def parse_complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise ValueError(f"expected a positive integer, got {text!r}")
    return n


# argparse reports the function name in type errors
parse_angle.__name__ = "angle"
parse_real.__name__ = "number"
parse_complex.__name__ = "complex"
_positive_int.__name__ = "positive integer"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--base", choices=("e", "2"), default="e")
    common.add_argument("--jobs", type=_positive_int, default=1)

    angles = _Parser(add_help=False)
    angles.add_argument("--theta", type=parse_angle, nargs="+", metavar="ANGLE")
    angles.add_argument("--points", type=_positive_int, default=181,
                        help="grid size on [0, pi] (single qubit) or [0, pi/2] (Bell)")
    angles.add_argument("--degrees", action="store_true", help="read --theta in degrees")

    parser = _Parser(prog=PROG, description="Entropy gain and information loss under measurement.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("sweep-1q", parents=[common, angles], help="single qubit in the computational basis")
    sub.add_parser("bell-sweep", parents=[common, angles], help="Phi+ with Alice's modulator at theta")
    p = sub.add_parser("bell-ineq", parents=[common, angles], help="Bell inequality check")
    p.add_argument("--mms", action="store_true", help="use the maximally mixed two-qubit state")
    sub.add_parser("no-comm", parents=[common, angles], help="entropy without data comparison")
    p = sub.add_parser("teleport", parents=[common], help="teleportation of a|0> + b|1>")
    p.add_argument("--a", type=parse_complex, default=complex(1))
    p.add_argument("--b", type=parse_complex, default=complex(0))
    p = sub.add_parser("ghz", parents=[common], help="GHZ_m after one-qubit measurement")
    p.add_argument("--m", type=int, nargs="+", default=list(range(3, 11)))
    p = sub.add_parser("w", parents=[common], help="W_m after one-qubit measurement")
    p.add_argument("--m", type=int, nargs="+", default=list(range(3, 11)))
    p = sub.add_parser("werner", parents=[common], help="Werner state entropy chain")
    p.add_argument("--alpha", type=parse_real, nargs="+", default=[0.0, 1 / 3, 0.7476, 1.0])
    sub.add_parser("mee", parents=[common], help="minimal entanglement entropy and information loss")
    sub.add_parser("selftest", parents=[common], help="golden-number and property checks")
    return parser


def _thetas(args, stop: float = math.pi) -> list[float]:
    if args.theta is None:
        return sc.theta_grid(args.points, stop)
    if args.degrees:
        return [sc.snap_angle(math.radians(t)) for t in args.theta]
    return [sc.snap_angle(t) for t in args.theta]


def _sweep_table(rows) -> OutputTable:
    return make_table(
        ("theta", "S", "iR", "iL", "beta"),
        [(r.theta, r.entropy, r.retrievability, r.loss, r.bias) for r in rows],
    )


def _report_table(label: str, items) -> OutputTable:
    return make_table(
        (label, "S", "iR", "iL", "purity"),
        [(k, r.entropy, r.retrievability, r.loss, r.purity) for k, r in items],
    )


def run_command(args) -> OutputTable:
    base = LogBase.parse(args.base)
    jobs = args.jobs
    cmd = args.command
    if cmd == "sweep-1q":
        return _sweep_table(sc.single_qubit_sweep(_thetas(args), base, jobs))
    if cmd == "bell-sweep":
        return _sweep_table(sc.bell_sweep(_thetas(args, math.pi / 2), base, jobs))
    if cmd == "bell-ineq":
        state = make_mms(2) if args.mms else None
        rows = sc.pmap(lambda t: sc.bell_inequality_check(t, state), _thetas(args, math.pi / 2), jobs)
        return make_table(
            ("theta", "lhs", "rhs", "violated"), [(v.theta, v.lhs, v.rhs, v.violated) for v in rows]
        )
    if cmd == "no-comm":
        rows = sc.no_comm_sweep(_thetas(args, math.pi / 2), base, jobs)
        return make_table(
            ("theta", "S_joint", "S_alice", "S_bob", "S_extra"),
            [(r.theta, r.joint_entropy, r.alice_entropy, r.bob_entropy, r.extra_entropy) for r in rows],
        )
    if cmd == "teleport":
        rep = sc.teleportation_report(args.a, args.b, base)
        probs = rep.outcome_probs
        return make_table(
            ("alice_entropy", "alice_iR", "alice_iL", "classical_bits", "bob_fidelity",
             "p_phi+", "p_phi-", "p_psi+", "p_psi-"),
            [(rep.alice_entropy, rep.alice_ir, rep.alice_il, rep.classical_bits,
              rep.bob_state_fidelity, probs["Phi+"], probs["Phi-"], probs["Psi+"], probs["Psi-"])],
        )
    if cmd == "ghz":
        return _report_table("m", zip(args.m, sc.pmap(lambda m: sc.ghz_measure_one(m, base), args.m, jobs)))
    if cmd == "w":
        return _report_table("m", zip(args.m, sc.pmap(lambda m: sc.w_measure_one(m, base), args.m, jobs)))
    if cmd == "werner":
        rows = sc.werner_report(args.alpha, base, jobs)
        return make_table(
            ("alpha", "dS_bell_werner", "iR_bell_werner", "dS_werner_mms", "iR_werner_mms",
             "iR_bell_mms", "separable_ppt", "separable_vnei_necessary"),
            [(r.alpha, r.s_alpha, r.ir_bell_to_werner, r.ds_werner_to_mms, r.ir_werner_to_mms,
              r.ir_bell_to_mms, r.separable_ppt, r.separable_vnei_necessary) for r in rows],
        )
    if cmd == "mee":
        summary = sc.mee_mei_summary()
        mee = summary.mee if base is LogBase.NATURAL else summary.mee / math.log(2)
        return make_table(("MEE", "MEI", "vnei_alpha"), [(mee, summary.mei, sc.solve_vnei_alpha())])
    raise UsageError(f"unknown command {cmd!r}")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "selftest":
            buf = io.StringIO()
            ok = run_selftest(buf)
            _emit(buf.getvalue(), args.out)
            return 0 if ok else 1
        _emit(render(run_command(args), args.format), args.out)
    except QInfoError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
