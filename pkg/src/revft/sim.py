"""Fault injection and Monte Carlo simulation.

The fault model is per-operation: with probability g a gate replaces the bits
it acts on by a uniform sample over all 2**arity values (the correct output
may occur by chance); a failing INIT3 leaves a uniform 3-bit value instead of
zeros.  Each trial draws from its own counter-based stream (see rng.py), so
reports are bit-identical however the trials are chunked or threaded.

Heavy workloads run through one of two interchangeable engines: a compiled
Cython kernel when the extension is available, and a vectorized numpy
fallback.  Set REVFT_SIM_BACKEND=kernel|numpy to force one; REVFT_THREADS
caps worker threads used to process trial chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _engine
from .builders import CompiledCycle, LayoutStrategy, compile_cycle
from .circuit import BitState, Circuit, Gate, GateKind, apply_gate
from .rng import TrialStream, prob_to_threshold

try:
    from . import _kernel
except ImportError:  # extension not built; numpy fallback still works
    _kernel = None

_CHUNK = 1 << 16


@dataclass(frozen=True)
class NoiseModel:
    g_gate: float
    g_init: float | None = None  # defaults to g_gate

    def __post_init__(self):
        if not 0.0 <= self.g_gate <= 1.0:
            raise ValueError(f"g_gate out of range: {self.g_gate}")
        if self.g_init is not None and not 0.0 <= self.g_init <= 1.0:
            raise ValueError(f"g_init out of range: {self.g_init}")

    @property
    def init_probability(self) -> float:
        return self.g_gate if self.g_init is None else self.g_init


@dataclass(frozen=True)
class FaultEvent:
    gate_index: int
    replacement: tuple[int, ...]


@dataclass(frozen=True)
class SimReport:
    trials: int
    failures: int
    p_hat: float
    ci95_halfwidth: float
    seed: int

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "p_hat": self.p_hat,
            "ci95_halfwidth": self.ci95_halfwidth,
            "seed": self.seed,
        }


_Z95 = 1.959963984540054


def _ci95_halfwidth(failures: int, trials: int) -> float:
    """Normal-approximation half-width; Wilson half-width below 30 failures."""
    p = failures / trials
    if failures >= 30:
        return _Z95 * math.sqrt(p * (1.0 - p) / trials)
    z2 = _Z95 * _Z95
    return (
        _Z95
        * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
        / (1.0 + z2 / trials)
    )


def make_report(failures: int, trials: int, seed: int) -> SimReport:
    return SimReport(trials, failures, failures / trials, _ci95_halfwidth(failures, trials), seed)


def noisy_apply(g: Gate, state: BitState, noise: NoiseModel, stream: TrialStream) -> BitState:
    """Apply one gate under the fault model, consuming one draw of the stream."""
    new_state = apply_gate(g, state)
    p = noise.init_probability if g.kind is GateKind.INIT3 else noise.g_gate
    word = stream.next_u64()
    if (word >> 11) < prob_to_threshold(p):
        s = list(new_state)
        for j, op in enumerate(g.operands):
            s[op] = (word >> j) & 1
        return tuple(s)
    return new_state


def evaluate_with_fault(circuit: Circuit, state: BitState, event: FaultEvent) -> BitState:
    """Deterministic run with exactly one forced fault at the given gate."""
    if not 0 <= event.gate_index < len(circuit.gates):
        raise ValueError(f"gate index {event.gate_index} out of range")
    state = tuple(state)
    for i, g in enumerate(circuit.gates):
        if i == event.gate_index:
            if len(event.replacement) != g.kind.arity:
                raise ValueError("replacement length must equal gate arity")
            s = list(apply_gate(g, state))
            for j, op in enumerate(g.operands):
                s[op] = event.replacement[j] & 1
            state = tuple(s)
        else:
            state = apply_gate(g, state)
    return state


def run_trials(
    circuit: Circuit,
    input_generator: Callable[[TrialStream], BitState],
    noise: NoiseModel,
    n: int,
    seed: int,
    failed: Callable[[BitState, BitState], bool],
) -> SimReport:
    """Reference Monte Carlo loop: n independent trials, one stream per trial.

    The input generator consumes the leading draws of the trial stream; each
    gate then consumes exactly one draw (gate i uses draw i+1 when the
    generator takes a single draw, which keeps this loop bit-compatible with
    the fast engines).
    """
    if n < 1:
        raise ValueError("trial count must be at least 1")
    failures = 0
    for t in range(n):
        stream = TrialStream(seed, t)
        initial = input_generator(stream)
        state = initial
        for g in circuit.gates:
            state = noisy_apply(g, state, noise, stream)
        if failed(initial, state):
            failures += 1
    return make_report(failures, n, seed)


def codeword_generator(circuit: Circuit) -> Callable[[TrialStream], BitState]:
    """Draw one word and place its low bit on every declared input position."""

    def generate(stream: TrialStream) -> BitState:
        bit = stream.next_u64() & 1
        s = [0] * circuit.width
        for i in circuit.inputs:
            s[i] = bit
        return tuple(s)

    return generate


def _worker_count() -> int:
    raw = os.environ.get("REVFT_THREADS", "1")
    try:
        return max(1, min(int(raw), 64))
    except ValueError:
        return 1


def backend_name() -> str:
    forced = os.environ.get("REVFT_SIM_BACKEND", "").strip().lower()
    if forced == "numpy":
        return "numpy"
    if forced == "kernel":
        if _kernel is None:
            raise RuntimeError("REVFT_SIM_BACKEND=kernel but the extension is not built")
        return "kernel"
    if forced:
        raise ValueError(f"unknown REVFT_SIM_BACKEND {forced!r}")
    return "kernel" if _kernel is not None else "numpy"


def _gate_arrays(gates: Sequence[Gate]):
    kinds = np.array([int(g.kind) for g in gates], dtype=np.int32)
    arities = np.array([g.kind.arity for g in gates], dtype=np.int32)
    ops = np.zeros((len(gates), 3), dtype=np.int32)
    for i, g in enumerate(gates):
        ops[i, : len(g.operands)] = g.operands
    return kinds, ops, arities


def simulate_encoded(
    circuit: Circuit,
    groups: Sequence[Sequence[int]],
    out_positions: Sequence[int],
    expected_table: Sequence[int],
    noise: NoiseModel,
    trials: int,
    seed: int,
) -> SimReport:
    """Count trials whose majority-decoded output disagrees with expectation.

    Each trial draws one word whose bit j supplies the logical value written
    to every cell of group j; the expected decoded value is looked up in
    expected_table by the packed group bits.  out_positions must list 3**k
    cells in recursive-majority order.
    """
    if trials < 1:
        raise ValueError("trial count must be at least 1")
    if len(expected_table) != 1 << len(groups):
        raise ValueError("expected table must have one entry per group assignment")
    kinds, ops, arities = _gate_arrays(circuit.gates)
    group_arrays = [np.asarray(g, dtype=np.int32) for g in groups]
    out_cells = np.asarray(out_positions, dtype=np.int32)
    expected = np.asarray(expected_table, dtype=np.uint8)
    g_thresh = prob_to_threshold(noise.g_gate)
    g_init_thresh = prob_to_threshold(noise.init_probability)

    backend = backend_name()
    if backend == "kernel":
        flat = np.concatenate(group_arrays) if group_arrays else np.zeros(0, dtype=np.int32)
        bounds = np.zeros(len(group_arrays) + 1, dtype=np.int32)
        np.cumsum([len(g) for g in group_arrays], out=bounds[1:])

        def run_range(lo: int, hi: int) -> int:
            return _kernel.count_failures(
                kinds, ops, arities, circuit.width, flat, bounds, out_cells,
                expected, lo, hi, seed, g_thresh, g_init_thresh,
            )

    else:

        def run_range(lo: int, hi: int) -> int:
            return _engine.count_failures(
                kinds, ops, arities, circuit.width, group_arrays, out_cells,
                expected, lo, hi, seed, g_thresh, g_init_thresh,
            )

    ranges = [(lo, min(lo + _CHUNK, trials)) for lo in range(0, trials, _CHUNK)]
    workers = _worker_count()
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            failures = sum(pool.map(lambda r: run_range(*r), ranges))
    else:
        failures = sum(run_range(lo, hi) for lo, hi in ranges)
    return make_report(failures, trials, seed)


@lru_cache(maxsize=32)
def _cycle_for(base: GateKind, level: int, layout: LayoutStrategy) -> CompiledCycle:
    return compile_cycle(base, level, layout)


def _expected_table(base: GateKind, tracked: int) -> tuple[int, ...]:
    table = []
    for y in range(8):
        bits = (y & 1, (y >> 1) & 1, (y >> 2) & 1)
        out = apply_gate(Gate(base, (0, 1, 2)), bits)
        table.append(out[tracked])
    return tuple(table)


def estimate_pbit(
    level: int,
    layout: LayoutStrategy,
    g: float,
    trials: int,
    seed: int,
    *,
    g_init: float | None = None,
    base: GateKind = GateKind.TOFFOLI,
    tracked: int = 0,
) -> SimReport:
    """Per-bit logical error rate of one encoded cycle.

    Each trial encodes three uniformly random logical bits, runs one compiled
    cycle (a transversal gate that preserves the tracked operand, followed by
    recovery) under noise, and fails when the ideal decode of the tracked
    output codeword differs from the noiseless expectation.
    """
    if level < 1:
        raise ValueError("estimate_pbit needs level >= 1")
    cycle = _cycle_for(base, level, layout)
    noise = NoiseModel(g, g_init)
    return simulate_encoded(
        cycle.circuit,
        cycle.logical_inputs,
        cycle.logical_outputs[tracked],
        _expected_table(base, tracked),
        noise,
        trials,
        seed,
    )


@dataclass(frozen=True)
class SweepRow:
    g: float
    level: int
    layout: str
    trials: int
    failures: int
    p_hat: float
    ci95: float
    seed: int


SWEEP_COLUMNS = ("g", "level", "layout", "trials", "failures", "p_hat", "ci95", "seed")


def sweep_threshold(
    g_values: Sequence[float],
    level: int,
    layout: LayoutStrategy,
    trials: int,
    seed: int,
    *,
    g_init: float | None = None,
) -> list[SweepRow]:
    """Estimate the logical error rate across gate error rates (paired seeds)."""
    if not g_values:
        raise ValueError("g_values must be non-empty")
    if any(a > b for a, b in zip(g_values, g_values[1:])):
        raise ValueError("g_values must be ascending")
    rows = []
    for g in g_values:
        r = estimate_pbit(level, layout, g, trials, seed, g_init=g_init)
        rows.append(
            SweepRow(g, level, str(layout), trials, r.failures, r.p_hat, r.ci95_halfwidth, seed)
        )
    return rows


def sweep_to_csv(rows: Iterable[SweepRow]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for r in rows:
        lines.append(
            f"{r.g:.9g},{r.level},{r.layout},{r.trials},{r.failures},"
            f"{r.p_hat:.9g},{r.ci95:.9g},{r.seed}"
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FaultScan:
    codeword: int
    runs: int
    max_distance: int
    violations: tuple[tuple[FaultEvent, int], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def enumerate_single_faults(circuit: Circuit, codeword: int) -> FaultScan:
    """Force every (gate, replacement) fault once and measure output damage.

    The input is the clean codeword on the declared input positions.  For a
    recovery circuit no single fault may leave the declared outputs at
    Hamming distance above 1 from the codeword.
    """
    if not circuit.outputs:
        raise ValueError("circuit must declare output positions")
    codeword &= 1
    initial = tuple(codeword if i in set(circuit.inputs) else 0 for i in range(circuit.width))
    runs = 0
    max_distance = 0
    violations = []
    for idx, g in enumerate(circuit.gates):
        for packed in range(1 << g.kind.arity):
            replacement = tuple((packed >> j) & 1 for j in range(g.kind.arity))
            event = FaultEvent(idx, replacement)
            final = evaluate_with_fault(circuit, initial, event)
            distance = sum(final[o] != codeword for o in circuit.outputs)
            runs += 1
            max_distance = max(max_distance, distance)
            if distance > 1:
                violations.append((event, distance))
    return FaultScan(codeword, runs, max_distance, tuple(violations))
