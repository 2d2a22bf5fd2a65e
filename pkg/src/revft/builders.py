"""Builders for fault-tolerant reversible circuits.

The error-recovery circuit takes a possibly corrupted 3-bit repetition
codeword plus six fresh ancillas, copies each input bit into two ancillas
(MAJINV on a bit and two zeros is a copy), arranges one copy of every input
bit into each of three decode blocks, and writes each block's majority into
a declared output position.  Any single gate fault corrupts at most one
output bit, which the next recovery cycle absorbs.

Three placements are provided:

* non-local: the classic 9-bit circuit (inputs 0,1,2, outputs 0,3,6);
* 2D: the same gate list is already nearest-neighbor on a 3x3 cell block
  (ancilla rows sit under the logical row); the recovered codeword comes out
  rotated from row to column, recorded in the outputs;
* 1D: inputs live at cells 0,4,8 of a 9-cell window so each can be copied
  into its two neighbors, then a 9-swap shuffle (packed as 4 SWAP3 + 1 SWAP)
  interleaves the three copy blocks before decoding.  Outputs land back on
  cells 0,4,8, so consecutive cycles compose without extra routing.

Interleave schedules move whole codewords next to each other so a 3-bit gate
can act transversally; they follow the outer-codewords-toward-the-middle
ordering and their swap budgets (45 elementary swaps in 1D, 9 parallel / 12
perpendicular in 2D) are enforced by tests.

compile_cycle recursively builds one level-L encoded gate application: the
gate applied transversally at level L-1 followed by an error-recovery cycle
on each logical operand, every lower-level gate itself expanded the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .circuit import (
    BitState,
    Census,
    Circuit,
    Gate,
    GateKind,
    Lattice2D,
    Line1D,
    NonLocal,
    Topology,
    gate_census,
    grid_topology,
    invert,
)

K = GateKind

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class LayoutStrategy:
    kind: str  # "nonlocal" | "2d" | "1d" | "mixed"
    two_d_levels: int = 0  # for mixed: levels compiled as 2D before switching to 1D

    def __post_init__(self):
        if self.kind not in ("nonlocal", "2d", "1d", "mixed"):
            raise ValueError(f"unknown layout {self.kind!r}")
        if self.kind == "mixed" and self.two_d_levels < 0:
            raise ValueError("mixed layout needs two_d_levels >= 0")

    @staticmethod
    def parse(text: str) -> "LayoutStrategy":
        text = text.strip().lower()
        if text.startswith("mixed:"):
            return LayoutStrategy("mixed", int(text.split(":", 1)[1]))
        if text == "mixed":
            return LayoutStrategy("mixed", 1)
        return LayoutStrategy(text)

    def __str__(self) -> str:
        if self.kind == "mixed":
            return f"mixed:{self.two_d_levels}"
        return self.kind


NONLOCAL = LayoutStrategy("nonlocal")
TWO_D = LayoutStrategy("2d")
ONE_D = LayoutStrategy("1d")


def build_recovery_nonlocal() -> Circuit:
    """9-bit error-recovery circuit with unrestricted gate placement.

    MAJINV(i, i+3, i+6) copies input bit i into two fresh ancillas, so after
    encoding each block (0,1,2), (3,4,5), (6,7,8) holds one copy of every
    input bit; the three MAJ gates then write each block's majority into its
    first bit.  Outputs are at 0, 3, 6; the remaining bits are discards.
    """
    gates = (
        Gate(K.INIT3, (3, 4, 5)),
        Gate(K.INIT3, (6, 7, 8)),
        Gate(K.MAJINV, (0, 3, 6)),
        Gate(K.MAJINV, (1, 4, 7)),
        Gate(K.MAJINV, (2, 5, 8)),
        Gate(K.MAJ, (0, 1, 2)),
        Gate(K.MAJ, (3, 4, 5)),
        Gate(K.MAJ, (6, 7, 8)),
    )
    return Circuit(9, gates, inputs=(0, 1, 2), outputs=(0, 3, 6), ancillas=(3, 4, 5, 6, 7, 8))


def recovery_2d_topology() -> Lattice2D:
    """3x3 cell block on which the non-local recovery is nearest-neighbor."""
    return grid_topology(3, 3)


def build_recovery_1d() -> Circuit:
    """9-bit error-recovery circuit using only nearest-neighbor operations.

    Input bits sit at cells 0, 4, 8 with two fresh ancillas next to each, so
    every MAJINV copy is local.  The copy blocks (x0 x0 x0 | x1 x1 x1 |
    x2 x2 x2) are then interleaved by nine elementary swaps, packed as four
    SWAP3 gates plus one lone SWAP, after which the decode blocks are the
    contiguous triples.  The majorities are steered back onto cells 0, 4, 8
    so the circuit composes with itself.  Budget: 6 MAJ-type gates, 4 SWAP3,
    1 SWAP, 2 INIT3 (13 operations, 11 without initialization).
    """
    gates = (
        Gate(K.INIT3, (1, 2, 3)),
        Gate(K.INIT3, (5, 6, 7)),
        Gate(K.MAJINV, (0, 1, 2)),
        Gate(K.MAJINV, (4, 3, 5)),
        Gate(K.MAJINV, (8, 7, 6)),
        Gate(K.SWAP3, (3, 2, 1)),
        Gate(K.SWAP3, (6, 5, 4)),
        Gate(K.SWAP3, (4, 3, 2)),
        Gate(K.SWAP, (4, 5)),
        Gate(K.SWAP3, (7, 6, 5)),
        Gate(K.MAJ, (0, 1, 2)),
        Gate(K.MAJ, (4, 3, 5)),
        Gate(K.MAJ, (8, 7, 6)),
    )
    return Circuit(
        9,
        gates,
        inputs=(0, 4, 8),
        outputs=(0, 4, 8),
        ancillas=(1, 2, 3, 5, 6, 7),
    )


RECOVERY_1D_HOME: Triple = (0, 4, 8)

_SWAP3_CAP_PER_CODEWORD = 12


def _interleave_1d_moves(triples: tuple[Triple, Triple, Triple]):
    """Elementary-swap schedule bringing the outer codewords to the middle.

    Each codeword occupies a 9-cell segment; corresponding bits of adjacent
    codewords are 9 cells apart.  Codeword 0 moves right (last bit first,
    8+7+6 swaps), then codeword 2 moves left (first bit first, 10+8+6 swaps).
    Returns per-move lists of (swap cells, codewords touched) plus the final
    position of every codeword bit.
    """
    p = triples[0]
    if any(triples[1][i] != p[i] + 9 or triples[2][i] != p[i] + 18 for i in range(3)):
        raise ValueError("codeword triples must be 9-cell translates of each other")
    if not (0 <= p[0] < p[1] < p[2] <= p[0] + 8):
        raise ValueError("codeword bits must be ordered within a 9-cell segment")

    width = triples[2][2] + 1
    occupant: list[tuple[int, int] | None] = [None] * width
    pos: dict[tuple[int, int], int] = {}
    for cw in range(3):
        for i in range(3):
            occupant[triples[cw][i]] = (cw, i)
            pos[(cw, i)] = triples[cw][i]

    def shift(token: tuple[int, int], target: int) -> list[tuple[tuple[int, int], set[int]]]:
        swaps = []
        cur = pos[token]
        step = 1 if target > cur else -1
        while cur != target:
            nxt = cur + step
            other = occupant[nxt]
            touched = {token[0]} | ({other[0]} if other else set())
            swaps.append(((min(cur, nxt), max(cur, nxt)), touched))
            occupant[cur], occupant[nxt] = other, token
            if other:
                pos[other] = cur
            pos[token] = nxt
            cur = nxt
        return swaps

    moves = []
    for i in (2, 1, 0):  # outer codeword 0 rightward, last bit first
        moves.append(shift((0, i), pos[(1, i)] - 1))
    for i in (0, 1, 2):  # outer codeword 2 leftward, first bit first
        moves.append(shift((2, i), pos[(1, i)] + 1))

    final = tuple(tuple(pos[(cw, i)] for cw in range(3)) for i in range(3))
    return width, moves, final


def _pack_swaps(moves) -> tuple[list[Gate], dict[int, int]]:
    """Pack chained elementary swaps into SWAP3 gates.

    Consecutive swaps of one move share a cell and combine into one SWAP3;
    a swap stays alone when pairing would push some codeword past the
    per-codeword SWAP3 budget (or when the move has an odd tail).
    """
    gates: list[Gate] = []
    swap3_touches = {0: 0, 1: 0, 2: 0}
    for move in moves:
        i = 0
        while i < len(move):
            if i + 1 < len(move):
                (a1, b1), t1 = move[i]
                (a2, b2), t2 = move[i + 1]
                touched = t1 | t2
                if all(swap3_touches[c] < _SWAP3_CAP_PER_CODEWORD for c in touched):
                    shared = {a1, b1} & {a2, b2}
                    (mid,) = shared
                    first = a1 if b1 == mid else b1
                    last = a2 if b2 == mid else b2
                    gates.append(Gate(K.SWAP3, (first, mid, last)))
                    for c in touched:
                        swap3_touches[c] += 1
                    i += 2
                    continue
            (a, b), _ = move[i]
            gates.append(Gate(K.SWAP, (a, b)))
            i += 1
    return gates, swap3_touches


def build_interleave_1d(
    triples: tuple[Triple, Triple, Triple] = ((0, 4, 8), (9, 13, 17), (18, 22, 26)),
) -> Circuit:
    """Interleave three codewords on a line so matching bits become adjacent.

    After the schedule, bit i of the three codewords occupies a contiguous
    triple.  Elementary-swap content is 45 with at most 24 swaps and at most
    12 SWAP3 operations touching any one codeword.
    """
    width, moves, final = _interleave_1d_moves(tuple(tuple(t) for t in triples))
    gates, _ = _pack_swaps(moves)
    outputs = tuple(cell for tri in final for cell in tri)
    return Circuit(width, tuple(gates), inputs=tuple(range(width)), outputs=outputs)


def interleave_1d_result_triples(
    triples: tuple[Triple, Triple, Triple] = ((0, 4, 8), (9, 13, 17), (18, 22, 26)),
) -> tuple[Triple, Triple, Triple]:
    """Where the gate-ready triples land: entry i is (b0[i], b1[i], b2[i])."""
    _, _, final = _interleave_1d_moves(tuple(tuple(t) for t in triples))
    return final


def build_interleave_2d(direction: str) -> Circuit:
    """Interleave three codewords on the lattice for a transversal gate.

    "parallel" shuffles three codewords lying along one logical row (9
    elementary swaps as 4 SWAP3 + 1 SWAP); "perpendicular" slides the outer
    codewords of a vertical stack across the two ancilla rows between logical
    rows (12 elementary swaps as 6 SWAP3).  Either way no codeword is touched
    by more than 3 SWAP3 gates.
    """
    if direction == "parallel":
        gates = _parallel_shuffle_gates(0)
        width = 27
        outputs = tuple(range(9))
    elif direction == "perpendicular":
        gates = []
        for c in range(3):  # top codeword moves down two rows
            gates.append(Gate(K.SWAP3, (c, c + 3, c + 6)))
        for c in range(3):  # bottom codeword moves up two rows
            gates.append(Gate(K.SWAP3, (18 + c, 15 + c, 12 + c)))
        width = 21
        outputs = tuple(range(6, 15))
    else:
        raise ValueError(f"direction must be 'parallel' or 'perpendicular', got {direction!r}")
    return Circuit(width, tuple(gates), inputs=tuple(range(width)), outputs=outputs)


def interleave_2d_topology(direction: str) -> Lattice2D:
    if direction == "parallel":
        return grid_topology(3, 9)
    if direction == "perpendicular":
        return grid_topology(7, 3)
    raise ValueError(f"direction must be 'parallel' or 'perpendicular', got {direction!r}")


def _parallel_shuffle_gates(base: int) -> list[Gate]:
    # Nine elementary swaps turning (a a a b b b c c c) into (a b c)^3,
    # packed as 4 SWAP3 + 1 SWAP; at most 3 SWAP3 touch any codeword.
    pattern = (
        (K.SWAP3, (3, 2, 1)),
        (K.SWAP3, (6, 5, 4)),
        (K.SWAP3, (4, 3, 2)),
        (K.SWAP, (4, 5)),
        (K.SWAP3, (7, 6, 5)),
    )
    return [Gate(kind, tuple(base + i for i in ops)) for kind, ops in pattern]


def data_positions(level: int) -> tuple[int, ...]:
    """Canonical data cells of one level-L logical bit inside its 9**L window."""
    if level < 0:
        raise ValueError("level must be non-negative")
    if level == 0:
        return (0,)
    sub = data_positions(level - 1)
    w = 9 ** (level - 1)
    return tuple(j * w + p for j in range(3) for p in sub)


def encode_value(bit: int, level: int) -> BitState:
    """Level-L codeword of a single bit: all data cells set, ancillas zero."""
    state = [0] * (9 ** level)
    for p in data_positions(level):
        state[p] = bit & 1
    return tuple(state)


def decode_positions(state: BitState, positions: tuple[int, ...]) -> int:
    """Recursive 3-way majority over an ordered list of 3**k data cells."""
    values = [state[p] for p in positions]
    while len(values) > 1:
        values = [
            (values[i] + values[i + 1] + values[i + 2] >= 2) * 1
            for i in range(0, len(values), 3)
        ]
    return values[0]


def ideal_decode(state: BitState, level: int) -> int:
    """Noiseless decoder: recursive majority down to level 0."""
    return decode_positions(state, data_positions(level))


class _Slot:
    """A 9**level cell window holding one logical bit during compilation.

    ``data`` names the three sub-windows currently holding the encoded value;
    each recovery cycle moves them between (0, 1, 2) and (0, 3, 6).
    """

    __slots__ = ("level", "offset", "subs", "data")

    def __init__(self, level: int, offset: int):
        self.level = level
        self.offset = offset
        if level == 0:
            self.subs: tuple[_Slot, ...] = ()
        else:
            w = 9 ** (level - 1)
            self.subs = tuple(_Slot(level - 1, offset + j * w) for j in range(9))
        self.data = (0, 1, 2)

    def data_bit(self, i: int) -> "_Slot":
        return self.subs[self.data[i]]

    def data_cells(self) -> list[int]:
        if self.level == 0:
            return [self.offset]
        cells = []
        for j in self.data:
            cells.extend(self.subs[j].data_cells())
        return cells


_RECOVERY_PHASES = {
    (0, 1, 2): {
        "init": ((3, 4, 5), (6, 7, 8)),
        "encode": ((0, 3, 6), (1, 4, 7), (2, 5, 8)),
        "decode": ((0, 1, 2), (3, 4, 5), (6, 7, 8)),
        "next": (0, 3, 6),
    },
    (0, 3, 6): {
        "init": ((1, 2, 4), (5, 7, 8)),
        "encode": ((0, 1, 2), (3, 4, 5), (6, 7, 8)),
        "decode": ((0, 3, 6), (1, 4, 7), (2, 5, 8)),
        "next": (0, 1, 2),
    },
}


def _emit_init(gates: list[Gate], slots: Iterable[_Slot]) -> None:
    cells = []
    for s in slots:
        cells.extend(s.data_cells())
    for i in range(0, len(cells), 3):
        gates.append(Gate(K.INIT3, tuple(cells[i : i + 3])))


def _emit_cycle(gates: list[Gate], kind: GateKind, slots: tuple[_Slot, _Slot, _Slot]) -> None:
    if slots[0].level == 0:
        gates.append(Gate(kind, tuple(s.offset for s in slots)))
        return
    for i in range(3):
        _emit_cycle(gates, kind, tuple(s.data_bit(i) for s in slots))
    for s in slots:
        _emit_recovery(gates, s)


def _emit_recovery(gates: list[Gate], slot: _Slot) -> None:
    phase = _RECOVERY_PHASES[slot.data]
    for tri in phase["init"]:
        _emit_init(gates, (slot.subs[j] for j in tri))
    for tri in phase["encode"]:
        _emit_cycle(gates, K.MAJINV, tuple(slot.subs[j] for j in tri))
    for tri in phase["decode"]:
        _emit_cycle(gates, K.MAJ, tuple(slot.subs[j] for j in tri))
    slot.data = phase["next"]


@dataclass(frozen=True)
class CompiledCycle:
    circuit: Circuit
    level: int
    layout: LayoutStrategy
    census: Census
    logical_inputs: tuple[tuple[int, ...], ...]
    logical_outputs: tuple[tuple[int, ...], ...]
    topology: Topology

    def metadata(self) -> dict:
        return {
            "level": self.level,
            "layout": str(self.layout),
            "census": self.census.as_dict(),
            "logical_inputs": [list(t) for t in self.logical_inputs],
            "logical_outputs": [list(t) for t in self.logical_outputs],
        }


def _compile_nonlocal(base: GateKind, level: int) -> CompiledCycle:
    window = 9 ** level
    slots = tuple(_Slot(level, j * window) for j in range(3))
    logical_inputs = tuple(tuple(s.data_cells()) for s in slots)
    gates: list[Gate] = []
    _emit_cycle(gates, base, slots)
    logical_outputs = tuple(tuple(s.data_cells()) for s in slots)
    inputs = tuple(sorted(c for tri in logical_inputs for c in tri))
    circuit = Circuit(
        3 * window,
        tuple(gates),
        inputs=inputs,
        outputs=tuple(c for tri in logical_outputs for c in tri),
        ancillas=tuple(i for i in range(3 * window) if i not in set(inputs)),
    )
    return CompiledCycle(
        circuit,
        level,
        NONLOCAL,
        gate_census(circuit),
        logical_inputs,
        logical_outputs,
        NonLocal(),
    )


def _compile_level0(base: GateKind, layout: LayoutStrategy) -> CompiledCycle:
    circuit = Circuit(3, (Gate(base, (0, 1, 2)),), inputs=(0, 1, 2), outputs=(0, 1, 2))
    topo: Topology
    if layout.kind == "1d":
        topo = Line1D()
    elif layout.kind in ("2d", "mixed"):
        topo = grid_topology(1, 3)
    else:
        topo = NonLocal()
    groups = ((0,), (1,), (2,))
    return CompiledCycle(circuit, 0, layout, gate_census(circuit), groups, groups, topo)


def _compile_1d_level1(base: GateKind) -> CompiledCycle:
    home = tuple(tuple(9 * j + p for p in RECOVERY_1D_HOME) for j in range(3))
    triples = (home[0], home[1], home[2])
    interleave = build_interleave_1d(triples)
    gate_triples = interleave_1d_result_triples(triples)
    gates = list(interleave.gates)
    for tri in gate_triples:
        gates.append(Gate(base, tri))
    gates.extend(invert(interleave).gates)
    for j in range(3):
        gates.extend(Gate(g.kind, tuple(c + 9 * j for c in g.operands))
                     for g in build_recovery_1d().gates)
    inputs = tuple(sorted(c for tri in home for c in tri))
    circuit = Circuit(
        27,
        tuple(gates),
        inputs=inputs,
        outputs=tuple(c for tri in home for c in tri),
        ancillas=tuple(i for i in range(27) if i not in set(inputs)),
    )
    return CompiledCycle(
        circuit, 1, ONE_D, gate_census(circuit), home, home, Line1D()
    )


def _compile_2d_level1(base: GateKind, layout: LayoutStrategy) -> CompiledCycle:
    # 3x9 lattice, bit = row*9 + col; codeword j on row 0 at columns 3j..3j+2,
    # ancilla rows 1 and 2 beneath it.
    gates = _parallel_shuffle_gates(0)
    for i in range(3):
        gates.append(Gate(base, (3 * i, 3 * i + 1, 3 * i + 2)))
    shuffle = Circuit(27, tuple(_parallel_shuffle_gates(0)), inputs=tuple(range(27)))
    gates.extend(invert(shuffle).gates)
    logical_outputs = []
    for j in range(3):
        c0 = 3 * j
        gates.extend(
            (
                Gate(K.INIT3, (9 + c0, 10 + c0, 11 + c0)),
                Gate(K.INIT3, (18 + c0, 19 + c0, 20 + c0)),
                Gate(K.MAJINV, (c0, 9 + c0, 18 + c0)),
                Gate(K.MAJINV, (c0 + 1, 10 + c0, 19 + c0)),
                Gate(K.MAJINV, (c0 + 2, 11 + c0, 20 + c0)),
                Gate(K.MAJ, (c0, c0 + 1, c0 + 2)),
                Gate(K.MAJ, (9 + c0, 10 + c0, 11 + c0)),
                Gate(K.MAJ, (18 + c0, 19 + c0, 20 + c0)),
            )
        )
        logical_outputs.append((c0, 9 + c0, 18 + c0))
    home = tuple((3 * j, 3 * j + 1, 3 * j + 2) for j in range(3))
    inputs = tuple(range(9))
    circuit = Circuit(
        27,
        tuple(gates),
        inputs=inputs,
        outputs=tuple(c for tri in logical_outputs for c in tri),
        ancillas=tuple(range(9, 27)),
    )
    return CompiledCycle(
        circuit,
        1,
        layout,
        gate_census(circuit),
        home,
        tuple(logical_outputs),
        grid_topology(3, 9),
    )


def compile_cycle(base: GateKind, level: int, layout: LayoutStrategy) -> CompiledCycle:
    """One encoded application of a 3-bit gate at the given concatenation level.

    Non-local layouts compile recursively to any depth.  The 1D and 2D local
    layouts are compiled for levels 0 and 1, where the interleave schedules
    and recovery circuits are nearest-neighbor by construction; deeper local
    nesting is not supported.
    """
    if base.arity != 3:
        raise ValueError(f"base gate must be 3-bit, got {base.name}")
    if level < 0:
        raise ValueError("level must be non-negative")
    if layout.kind == "nonlocal":
        if level == 0:
            return _compile_level0(base, layout)
        return _compile_nonlocal(base, level)
    if level == 0:
        return _compile_level0(base, layout)
    if level == 1:
        if layout.kind == "1d" or (layout.kind == "mixed" and layout.two_d_levels == 0):
            return _compile_1d_level1(base)
        return _compile_2d_level1(base, layout)
    raise ValueError(
        f"layout {layout} supports compilation at levels 0 and 1 only (got {level})"
    )


def predicted_counts(level: int, g_ops: int) -> tuple[int, int]:
    """Closed-form blowup: ((3(G-2))**L counted gates, 9**L bit slots)."""
    if g_ops < 3:
        raise ValueError("operation count per encoded bit must be at least 3")
    if level < 0:
        raise ValueError("level must be non-negative")
    return (3 * (g_ops - 2)) ** level, 9 ** level
