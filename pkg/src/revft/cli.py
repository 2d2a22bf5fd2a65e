"""Command-line front end.

Subcommands: verify (exhaustive recovery suites), compile (write a compiled
cycle as circuit JSON plus a metadata sidecar), simulate / sweep (Monte Carlo
logical error rates; deterministic for a fixed seed), analyze (closed-form
calculators, JSON output with exact rationals and floats).

Exit codes: 0 success, 1 verification failure, 2 usage error.  Output files
are written atomically (temp file then rename).  REVFT_THREADS caps the
simulation worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import analysis
from .builders import LayoutStrategy, compile_cycle, predicted_counts
from .circuit import GateKind, check_locality, circuit_to_dict
from .sim import SweepRow, estimate_pbit, sweep_threshold, sweep_to_csv
from .verify import run_verification


def _fmt(x: float) -> float:
    return float(f"{x:.9g}")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".revft-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(payload: dict | str, out: str | None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _layout_arg(text: str) -> LayoutStrategy:
    try:
        return LayoutStrategy.parse(text)
    except (ValueError, IndexError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _gate_arg(text: str) -> GateKind:
    name = text.strip().upper()
    if name not in GateKind.__members__:
        raise argparse.ArgumentTypeError(f"unknown gate kind {text!r}")
    return GateKind[name]


def _g_list_arg(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability {text} outside [0, 1]")
    return value


def cmd_verify(args) -> int:
    report = run_verification(args.layout)
    _emit(report, args.out)
    if args.out:
        status = "pass" if report["passed"] else "FAIL"
        print(f"verify --layout {args.layout}: {status} (report written to {args.out})")
    return 0 if report["passed"] else 1


def cmd_compile(args) -> int:
    cycle = compile_cycle(args.gate, args.level, args.layout)
    _emit(json.dumps(circuit_to_dict(cycle.circuit), indent=2) + "\n", args.out)
    if args.out:
        meta_path = args.out + ".meta.json"
        _atomic_write(meta_path, json.dumps(cycle.metadata(), indent=2) + "\n")
    census = cycle.census
    gates_pred, bits_pred = predicted_counts(args.level, 9)
    info = sys.stdout if args.out else sys.stderr  # keep bare stdout valid JSON
    print(f"census: {census.as_dict()}", file=info)
    print(
        f"counted ops without INIT3: {census.total_without_init} "
        f"(predicted for non-local G=9: {gates_pred}); bits per logical operand: "
        f"{9 ** args.level} (predicted {bits_pred})",
        file=info,
    )
    violations = check_locality(cycle.circuit, cycle.topology)
    if violations:
        print(f"locality violations: {violations[:5]}", file=info)
        return 1
    return 0


def cmd_simulate(args) -> int:
    report = estimate_pbit(
        args.level, args.layout, args.g, args.trials, args.seed, g_init=args.g_init
    )
    if args.format == "csv":
        row = SweepRow(
            args.g, args.level, str(args.layout), report.trials, report.failures,
            report.p_hat, report.ci95_halfwidth, report.seed,
        )
        _emit(sweep_to_csv([row]), args.out)
    else:
        payload = {
            "g": args.g,
            "level": args.level,
            "layout": str(args.layout),
            **report.as_dict(),
            "p_hat": _fmt(report.p_hat),
            "ci95_halfwidth": _fmt(report.ci95_halfwidth),
        }
        _emit(payload, args.out)
    return 0


def cmd_sweep(args) -> int:
    rows = sweep_threshold(
        args.g_list, args.level, args.layout, args.trials, args.seed, g_init=args.g_init
    )
    if args.format == "json":
        payload = {
            "rows": [
                {
                    "g": r.g,
                    "level": r.level,
                    "layout": r.layout,
                    "trials": r.trials,
                    "failures": r.failures,
                    "p_hat": _fmt(r.p_hat),
                    "ci95": _fmt(r.ci95),
                    "seed": r.seed,
                }
                for r in rows
            ]
        }
        _emit(payload, args.out)
    else:
        _emit(sweep_to_csv(rows), args.out)
    return 0


def _rational(fraction: Fraction) -> dict:
    return {"exact": f"{fraction.numerator}/{fraction.denominator}", "float": _fmt(float(fraction))}


def cmd_analyze(args) -> int:
    calc = args.calculator
    if calc == "threshold":
        payload = {"G": args.G, "threshold": _rational(analysis.threshold(args.G))}
    elif calc == "bound":
        payload = {
            "g": args.g,
            "rho": args.rho,
            "k": args.k,
            "bound": _fmt(analysis.logical_error_bound(args.g, args.rho, args.k)),
        }
    elif calc == "level":
        payload = {
            "T": args.T,
            "g": args.g,
            "rho": args.rho,
            "level": analysis.min_concat_level(args.T, args.g, args.rho),
        }
    elif calc == "blowup":
        b = analysis.blowup(args.G, args.level)
        payload = {
            "G": args.G,
            "level": args.level,
            "gate_factor": b.gate_factor,
            "bit_factor": b.bit_factor,
            "gate_exponent": _fmt(b.gate_exponent),
            "bit_exponent": _fmt(b.bit_exponent),
        }
    elif calc == "mixed":
        m = analysis.mixed_threshold(args.k, args.rho1, args.rho2)
        payload = {
            "k": args.k,
            "rho1": args.rho1,
            "rho2": args.rho2,
            "threshold": _fmt(m.value),
            "ratio": _fmt(m.ratio),
        }
    elif calc == "table2":
        ratios = analysis.table2_ratios()
        payload = {
            "rho1": str(analysis.TABLE2_RHO1),
            "rho2": str(analysis.TABLE2_RHO2),
            "k": list(range(6)),
            "ratio": [_fmt(r) for r in ratios],
            "ratio_rounded": [round(r, 2) for r in ratios],
        }
    elif calc == "entropy":
        payload = {
            "g": args.g,
            "E": args.E,
            "kappa": _fmt(analysis.KAPPA),
            "max_useful_level": _fmt(analysis.max_useful_level(args.g, args.E)),
        }
        if args.G_tilde is not None:
            report = analysis.entropy_bounds(
                args.G_tilde, args.E, args.level, args.g, args.temperature
            )
            payload.update(
                {
                    "G_tilde": args.G_tilde,
                    "level": args.level,
                    "upper_bound_bits": _fmt(report.upper_bound_bits),
                    "lower_bound_bits": _fmt(report.lower_bound_bits),
                }
            )
            if report.landauer_joules is not None:
                payload["landauer_joules"] = _fmt(report.landauer_joules)
    elif calc == "landauer":
        payload = {
            "bits": args.bits,
            "temperature": args.temperature,
            "joules": _fmt(analysis.landauer_energy(args.bits, args.temperature)),
        }
    else:  # pragma: no cover
        raise ValueError(calc)
    _emit(payload, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revft",
        description="Fault-tolerant reversible circuits: build, simulate, analyze.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the exhaustive recovery-circuit suites")
    p.add_argument("--layout", required=True, choices=["nonlocal", "2d", "1d"])
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compile", help="compile an encoded gate cycle to circuit JSON")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--layout", type=_layout_arg, default=LayoutStrategy("nonlocal"))
    p.add_argument("--gate", type=_gate_arg, default=GateKind.MAJ)
    p.add_argument("--out", help="circuit JSON path (metadata sidecar gets .meta.json)")
    p.set_defaults(func=cmd_compile)

    for name in ("simulate", "sweep"):
        p = sub.add_parser(name, help=f"{name} logical error rates under gate noise")
        p.add_argument("--level", type=int, default=1)
        p.add_argument("--layout", type=_layout_arg, default=LayoutStrategy("nonlocal"))
        if name == "simulate":
            p.add_argument("--g", type=_probability, required=True)
        else:
            p.add_argument("--g-list", type=_g_list_arg, required=True)
        p.add_argument("--g-init", type=_probability, default=None,
                       help="initialization error rate (defaults to --g)")
        p.add_argument("--trials", type=int, default=100000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "json"],
                       default="json" if name == "simulate" else "csv")
        p.set_defaults(func=cmd_simulate if name == "simulate" else cmd_sweep)

    p = sub.add_parser("analyze", help="closed-form calculators")
    p.add_argument(
        "calculator",
        choices=["threshold", "bound", "level", "blowup", "mixed", "table2", "entropy", "landauer"],
    )
    p.add_argument("--G", type=int, help="counted operations per encoded bit per cycle")
    p.add_argument("--E", type=int, help="recovery operation count")
    p.add_argument("--G-tilde", dest="G_tilde", type=float,
                   help="lower-level gates per higher-level gate (entropy model)")
    p.add_argument("--T", type=float, help="target module gate count")
    p.add_argument("--g", type=_probability, help="physical gate error rate")
    p.add_argument("--rho", type=float, help="threshold value")
    p.add_argument("--rho1", type=float, default=float(analysis.TABLE2_RHO1))
    p.add_argument("--rho2", type=float, default=float(analysis.TABLE2_RHO2))
    p.add_argument("--k", type=int, default=0, help="concatenation levels (bound/mixed)")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--bits", type=float, help="entropy in bits (landauer)")
    p.add_argument("--temperature", type=float, default=None, help="kelvin")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    return parser


_REQUIRED_ANALYZE_FLAGS = {
    "threshold": ("G",),
    "bound": ("g", "rho"),
    "level": ("T", "g", "rho"),
    "blowup": ("G",),
    "mixed": (),
    "table2": (),
    "entropy": ("g", "E"),
    "landauer": ("bits", "temperature"),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze":
        missing = [
            f"--{name.replace('_', '-')}"
            for name in _REQUIRED_ANALYZE_FLAGS[args.calculator]
            if getattr(args, name) is None
        ]
        if missing:
            parser.error(f"analyze {args.calculator} requires {', '.join(missing)}")
    try:
        return args.func(args)
    except ValueError as exc:
        parser.error(str(exc))
        return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
