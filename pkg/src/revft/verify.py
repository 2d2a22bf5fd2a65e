"""Exhaustive verification suites behind the `verify` CLI subcommand.

Each suite is exact and small enough to enumerate fully: the majority truth
table, recovery of every input within distance 1 of a codeword, reversibility
of the INIT3-free body, locality on the layout's topology, the single-fault
scan, and the gate census.
"""

from __future__ import annotations

from .builders import build_recovery_1d, build_recovery_nonlocal, recovery_2d_topology
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    Line1D,
    NonLocal,
    Topology,
    apply_gate,
    check_locality,
    evaluate,
    gate_census,
    is_permutation,
)
from .sim import enumerate_single_faults

# Reversible majority gate: input -> output, first output bit is the majority.
MAJ_TRUTH_TABLE = {
    (0, 0, 0): (0, 0, 0),
    (0, 0, 1): (0, 0, 1),
    (0, 1, 0): (0, 1, 0),
    (0, 1, 1): (1, 1, 1),
    (1, 0, 0): (0, 1, 1),
    (1, 0, 1): (1, 1, 0),
    (1, 1, 0): (1, 0, 1),
    (1, 1, 1): (1, 0, 0),
}

_EXPECTED_CENSUS = {
    "nonlocal": {"total": 8, "without_init": 6},
    "2d": {"total": 8, "without_init": 6},
    "1d": {"total": 13, "without_init": 11},
}


def recovery_for_layout(layout: str) -> tuple[Circuit, Topology]:
    if layout in ("nonlocal",):
        return build_recovery_nonlocal(), NonLocal()
    if layout == "2d":
        return build_recovery_nonlocal(), recovery_2d_topology()
    if layout == "1d":
        return build_recovery_1d(), Line1D()
    raise ValueError(f"unknown layout {layout!r} (expected nonlocal, 2d, or 1d)")


def _check_truth_table() -> tuple[bool, str]:
    g = Gate(GateKind.MAJ, (0, 1, 2))
    for inp, want in MAJ_TRUTH_TABLE.items():
        got = apply_gate(g, inp)
        if got != want:
            return False, f"MAJ{inp} = {got}, expected {want}"
        if got[0] != (sum(inp) >= 2):
            return False, f"first output of MAJ{inp} is not the majority"
    return True, "8 rows match"


def _check_recovery_correction(circuit: Circuit) -> tuple[bool, str]:
    cases = 0
    for codeword in (0, 1):
        base = [codeword if i in set(circuit.inputs) else 0 for i in range(circuit.width)]
        flips = [None] + list(circuit.inputs)
        for flip in flips:
            state = list(base)
            if flip is not None:
                state[flip] ^= 1
            final = evaluate(circuit, tuple(state), check_ancillas=False)
            if any(final[o] != codeword for o in circuit.outputs):
                return False, f"codeword {codeword}, flipped {flip}: outputs wrong"
            cases += 1
    return True, f"{cases} inputs corrected exactly"


def _check_reversibility(circuit: Circuit) -> tuple[bool, str]:
    body = Circuit(
        circuit.width,
        tuple(g for g in circuit.gates if g.kind is not GateKind.INIT3),
        inputs=tuple(range(circuit.width)),
    )
    if not is_permutation(body):
        return False, "INIT3-free body is not a permutation"
    return True, f"bijective over 2^{circuit.width} states"


def _check_locality(circuit: Circuit, topology: Topology) -> tuple[bool, str]:
    violations = check_locality(circuit, topology)
    if violations:
        return False, f"{len(violations)} non-local gates: {violations[:3]}"
    return True, "all gates local"


def _check_single_faults(circuit: Circuit) -> tuple[bool, str]:
    runs = 0
    for codeword in (0, 1):
        scan = enumerate_single_faults(circuit, codeword)
        runs += scan.runs
        if not scan.passed:
            return False, f"codeword {codeword}: {len(scan.violations)} faults exceed distance 1"
        if scan.max_distance > 1:
            return False, f"codeword {codeword}: max distance {scan.max_distance}"
    return True, f"{runs} forced faults, max output distance 1"


def _check_census(circuit: Circuit, layout: str) -> tuple[bool, str]:
    census = gate_census(circuit)
    want = _EXPECTED_CENSUS[layout]
    ok = census.total == want["total"] and census.total_without_init == want["without_init"]
    detail = f"total {census.total} ({census.total_without_init} without INIT3)"
    return ok, detail


def run_verification(layout: str) -> dict:
    """Run every suite for the layout's recovery circuit; returns a report dict."""
    circuit, topology = recovery_for_layout(layout)
    checks = [
        ("maj_truth_table", *_check_truth_table()),
        ("recovery_correction", *_check_recovery_correction(circuit)),
        ("reversibility", *_check_reversibility(circuit)),
        ("locality", *_check_locality(circuit, topology)),
        ("single_fault_tolerance", *_check_single_faults(circuit)),
        ("gate_census", *_check_census(circuit, layout)),
    ]
    return {
        "layout": layout,
        "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in checks],
        "census": gate_census(circuit).as_dict(),
        "passed": all(p for _, p, _ in checks),
    }
