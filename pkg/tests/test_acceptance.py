"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s`.  The two statistical
criteria use a million trials apiece and finish in seconds on the compiled
kernel (minutes on the numpy fallback).
"""

import itertools
import subprocess
import sys
from fractions import Fraction

from revft.analysis import (
    KAPPA,
    blowup,
    entropy_bounds,
    max_useful_level,
    min_concat_level,
    table2_ratios,
    threshold,
)
from revft.builders import (
    NONLOCAL,
    build_interleave_1d,
    build_interleave_2d,
    build_recovery_1d,
    build_recovery_nonlocal,
    compile_cycle,
    predicted_counts,
)
from revft.circuit import Gate, GateKind, apply_gate, gate_census
from revft.sim import enumerate_single_faults, estimate_pbit, sweep_threshold

from test_builders import codeword_swap_touches, run_recovery

K = GateKind

MAJ_TABLE = {
    (0, 0, 0): (0, 0, 0),
    (0, 0, 1): (0, 0, 1),
    (0, 1, 0): (0, 1, 0),
    (0, 1, 1): (1, 1, 1),
    (1, 0, 0): (0, 1, 1),
    (1, 0, 1): (1, 1, 0),
    (1, 1, 0): (1, 0, 1),
    (1, 1, 1): (1, 0, 0),
}


def criterion(number, description, ok):
    print(f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {description}")
    assert ok, f"criterion {number}: {description}"


def test_criterion_1_maj_truth_table():
    gate = Gate(K.MAJ, (0, 1, 2))
    ok = all(apply_gate(gate, inp) == out for inp, out in MAJ_TABLE.items())
    criterion(1, "MAJ truth table matches all 8 rows exactly", ok)


def test_criterion_2_recovery_correction():
    ok = True
    for circuit in (build_recovery_nonlocal(), build_recovery_1d()):
        for cw in (0, 1):
            base = (cw, cw, cw)
            blocks = [base] + [
                tuple(b ^ (i == flip) for i, b in enumerate(base)) for flip in range(3)
            ]
            ok = ok and all(run_recovery(circuit, blk) == base for blk in blocks)
    criterion(2, "both recovery circuits correct all distance<=1 inputs exactly", ok)


def test_criterion_3_single_fault_tolerance():
    ok = True
    for circuit in (build_recovery_nonlocal(), build_recovery_1d()):
        for cw in (0, 1):
            scan = enumerate_single_faults(circuit, cw)
            ok = ok and scan.passed and scan.max_distance <= 1
    criterion(3, "every forced single fault leaves outputs within Hamming distance 1", ok)


def test_criterion_4_gate_accounting():
    near = gate_census(build_recovery_nonlocal())
    far = gate_census(build_recovery_1d())
    il1 = build_interleave_1d()
    il1_census = gate_census(il1)
    swap3, elementary = codeword_swap_touches(
        il1, ((0, 4, 8), (9, 13, 17), (18, 22, 26))
    )
    par = gate_census(build_interleave_2d("parallel"))
    perp = gate_census(build_interleave_2d("perpendicular"))
    ok = (
        near.total == 8
        and near.total_without_init == 6
        and far.total == 13
        and far.total_without_init == 11
        and il1_census.elementary_swap_count == 45
        and max(swap3.values()) <= 12
        and par.elementary_swap_count == 9
        and perp.elementary_swap_count == 12
    )
    criterion(4, "gate censuses: 8/6 nonlocal, 13/11 1D, 45-swap interleave, 9/12 2D", ok)


def test_criterion_5_thresholds():
    expected = {
        9: Fraction(1, 108),
        11: Fraction(1, 165),
        14: Fraction(1, 273),
        16: Fraction(1, 360),
        38: Fraction(1, 2109),
        40: Fraction(1, 2340),
    }
    ok = all(threshold(g_ops) == frac for g_ops, frac in expected.items())
    criterion(5, "threshold(G) exact for G in {9, 11, 14, 16, 38, 40}", ok)


def test_criterion_6_blowup():
    compiled = compile_cycle(K.MAJ, 2, NONLOCAL)
    b11 = blowup(11, 1)
    b9 = blowup(9, 2)
    ok = (
        predicted_counts(2, 9) == (441, 81)
        and compiled.census.total_without_init == 441
        and round(b11.gate_exponent, 2) == 4.75
        and round(b9.bit_exponent, 2) == 3.17
    )
    criterion(6, "blowup (441, 81) matches compiled census; exponents 4.75 and 3.17", ok)


def test_criterion_7_table2():
    ok = [round(r, 2) for r in table2_ratios()] == [0.13, 0.36, 0.60, 0.77, 0.88, 0.94]
    criterion(7, "mixed-threshold ratios reproduce 0.13/0.36/0.60/0.77/0.88/0.94", ok)


def test_criterion_8_level_formula():
    ok = min_concat_level(1e6, 1e-3, 1e-2) == 2
    criterion(8, "min_concat_level(1e6, 1e-3, 1e-2) = 2", ok)


def test_criterion_9_entropy():
    level = max_useful_level(1e-2, 11)
    grid_ok = all(
        entropy_bounds(gt, e, lv, g).lower_bound_bits
        <= entropy_bounds(gt, e, lv, g).upper_bound_bits
        for gt, e, lv, g in itertools.product(
            (9, 11), (6, 8, 11), (1, 2, 3), (1e-4, 1e-3, 1e-2)
        )
    )
    ok = 2.31 <= level <= 2.32 and abs(KAPPA - 4.327) <= 1e-3 and grid_ok
    criterion(9, "max useful level 2.317, kappa 4.327, lower<=upper on the grid", ok)


def test_criterion_10_monte_carlo_bound():
    g = 0.005
    report = estimate_pbit(1, NONLOCAL, g, 1_000_000, 2024)
    bound = 36 * g * g + 3 * report.ci95_halfwidth
    rows = sweep_threshold([0.002, 0.005, 0.009], 1, NONLOCAL, 200_000, 2024)
    monotone = all(
        lo.p_hat <= hi.p_hat + lo.ci95 + hi.ci95 for lo, hi in zip(rows, rows[1:])
    )
    ok = report.p_hat <= bound and monotone
    criterion(
        10,
        f"level-1 p_hat {report.p_hat:.2e} <= 36g^2+3ci = {bound:.2e}, monotone in g",
        ok,
    )


def test_criterion_11_suppression():
    g = 0.002
    level1 = estimate_pbit(1, NONLOCAL, g, 1_000_000, 7)
    level2 = estimate_pbit(2, NONLOCAL, g, 1_000_000, 7)
    separated = (
        level2.p_hat + level2.ci95_halfwidth < level1.p_hat - level1.ci95_halfwidth
    )
    criterion(
        11,
        f"level-2 p_hat {level2.p_hat:.2e} below level-1 {level1.p_hat:.2e} "
        "with non-overlapping 95% intervals",
        separated,
    )


def test_criterion_12_determinism(tmp_path):
    args = [
        sys.executable, "-m", "revft.cli", "sweep",
        "--g-list", "0.002,0.005", "--level", "1",
        "--trials", "50000", "--seed", "31",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    subprocess.run([*args, "--out", str(a)], check=True)
    subprocess.run([*args, "--out", str(b)], check=True)
    ok = a.read_bytes() == b.read_bytes()
    criterion(12, "repeated sweep with identical seed is byte-identical", ok)
