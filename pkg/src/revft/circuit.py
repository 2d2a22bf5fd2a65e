"""Reversible-circuit intermediate representation.

A circuit is an ordered list of gates applied to a fixed-width array of bits.
Gates come from a seven-kind set built around the reversible majority gate:
MAJ writes the majority of its three operands into the first operand, MAJINV
is its exact inverse (applied to (b, 0, 0) it copies b into both zeros, which
is the repetition-code encoder), SWAP3 is a single counted operation equal to
two adjacent elementary swaps, and INIT3 resets three bits at once.

States are plain tuples of 0/1 ints and circuits are frozen dataclasses, so
everything here is an immutable value that is safe to share between workers.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

BitState = tuple[int, ...]


class GateKind(enum.IntEnum):
    CNOT = 0
    TOFFOLI = 1
    MAJ = 2
    MAJINV = 3
    SWAP = 4
    SWAP3 = 5
    INIT3 = 6

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def is_bijective(self) -> bool:
        return self is not GateKind.INIT3


_ARITY = {
    GateKind.CNOT: 2,
    GateKind.TOFFOLI: 3,
    GateKind.MAJ: 3,
    GateKind.MAJINV: 3,
    GateKind.SWAP: 2,
    GateKind.SWAP3: 3,
    GateKind.INIT3: 3,
}

# Self-inverse kinds keep their operand order under inversion; MAJ and MAJINV
# exchange; SWAP3 is a 3-cycle whose inverse is the reversed operand order.
_INVERSE_KIND = {
    GateKind.CNOT: GateKind.CNOT,
    GateKind.TOFFOLI: GateKind.TOFFOLI,
    GateKind.MAJ: GateKind.MAJINV,
    GateKind.MAJINV: GateKind.MAJ,
    GateKind.SWAP: GateKind.SWAP,
    GateKind.SWAP3: GateKind.SWAP3,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    operands: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if len(self.operands) != self.kind.arity:
            raise ValueError(
                f"{self.kind.name} takes {self.kind.arity} operands, "
                f"got {len(self.operands)}"
            )
        if len(set(self.operands)) != len(self.operands):
            raise ValueError(f"duplicate operands in {self.kind.name}{self.operands}")
        if any(i < 0 for i in self.operands):
            raise ValueError(f"negative operand index in {self.kind.name}{self.operands}")


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...]
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()
    ancillas: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "ancillas", tuple(self.ancillas))
        if self.width <= 0:
            raise ValueError("circuit width must be positive")
        all_bits = range(self.width)
        if sorted(self.inputs + self.ancillas) != list(all_bits):
            raise ValueError("inputs and ancillas must partition the bit indices")
        if not set(self.outputs) <= set(all_bits):
            raise ValueError("outputs must be bit indices of the circuit")
        for g in self.gates:
            if max(g.operands) >= self.width:
                raise ValueError(f"operand out of range in {g.kind.name}{g.operands}")


def apply_gate(g: Gate, state: BitState) -> BitState:
    """Apply one gate and return the new state.

    MAJ(a, b, c) is b ^= a, c ^= a, then a ^= b & c, which puts the majority
    of the inputs on a.  MAJINV undoes those steps in reverse.  SWAP3(a, b, c)
    is SWAP(a, b) then SWAP(b, c); as a value permutation it is the 3-cycle
    (va, vb, vc) -> (vb, vc, va), and the reversed operand order gives its
    inverse.  INIT3 forces its three operands to zero.
    """
    for i in g.operands:
        if i >= len(state):
            raise ValueError(f"operand {i} out of range for width {len(state)}")
    s = list(state)
    k = g.kind
    if k is GateKind.CNOT:
        c, t = g.operands
        s[t] ^= s[c]
    elif k is GateKind.TOFFOLI:
        c1, c2, t = g.operands
        s[t] ^= s[c1] & s[c2]
    elif k is GateKind.MAJ:
        a, b, c = g.operands
        s[b] ^= s[a]
        s[c] ^= s[a]
        s[a] ^= s[b] & s[c]
    elif k is GateKind.MAJINV:
        a, b, c = g.operands
        s[a] ^= s[b] & s[c]
        s[c] ^= s[a]
        s[b] ^= s[a]
    elif k is GateKind.SWAP:
        a, b = g.operands
        s[a], s[b] = s[b], s[a]
    elif k is GateKind.SWAP3:
        a, b, c = g.operands
        s[a], s[b] = s[b], s[a]
        s[b], s[c] = s[c], s[b]
    elif k is GateKind.INIT3:
        for i in g.operands:
            s[i] = 0
    else:  # pragma: no cover
        raise ValueError(f"unknown gate kind {k!r}")
    return tuple(s)


def elementary_swaps(g: Gate) -> list[tuple[int, int]]:
    """Expand a gate into the elementary swaps it contains (empty if none)."""
    if g.kind is GateKind.SWAP:
        return [tuple(g.operands)]
    if g.kind is GateKind.SWAP3:
        a, b, c = g.operands
        return [(a, b), (b, c)]
    return []


def evaluate(circuit: Circuit, state: BitState, *, check_ancillas: bool = True) -> BitState:
    """Fold apply_gate over the circuit's gate list.

    Ancilla positions are required to be zero on entry unless the check is
    suspended (exhaustive permutation checks run over all states).
    """
    state = tuple(state)
    if len(state) != circuit.width:
        raise ValueError(f"state width {len(state)} != circuit width {circuit.width}")
    if check_ancillas and any(state[i] for i in circuit.ancillas):
        raise ValueError("ancilla positions must be zero on input")
    for g in circuit.gates:
        state = apply_gate(g, state)
    return state


def invert(circuit: Circuit) -> Circuit:
    """Return the inverse circuit: reversed gate list with each gate inverted.

    Input/output/ancilla declarations are carried over unchanged (they
    describe positions, not direction), so inverting twice restores the
    original circuit exactly.
    """
    inverted = []
    for g in reversed(circuit.gates):
        if g.kind is GateKind.INIT3:
            raise ValueError("circuit containing INIT3 is not invertible")
        kind = _INVERSE_KIND[g.kind]
        ops = tuple(reversed(g.operands)) if g.kind is GateKind.SWAP3 else g.operands
        inverted.append(Gate(kind, ops))
    return Circuit(
        circuit.width,
        tuple(inverted),
        inputs=circuit.inputs,
        outputs=circuit.outputs,
        ancillas=circuit.ancillas,
    )


def _int_states(width: int) -> np.ndarray:
    n = 1 << width
    values = np.arange(n, dtype=np.uint32)
    return ((values[:, None] >> np.arange(width, dtype=np.uint32)) & 1).astype(np.uint8)


def apply_gate_columns(s: np.ndarray, kind: GateKind, ops: tuple[int, ...]) -> None:
    """In-place gate application on a (batch, width) uint8 state matrix."""
    if kind is GateKind.CNOT:
        c, t = ops
        s[:, t] ^= s[:, c]
    elif kind is GateKind.TOFFOLI:
        c1, c2, t = ops
        s[:, t] ^= s[:, c1] & s[:, c2]
    elif kind is GateKind.MAJ:
        a, b, c = ops
        s[:, b] ^= s[:, a]
        s[:, c] ^= s[:, a]
        s[:, a] ^= s[:, b] & s[:, c]
    elif kind is GateKind.MAJINV:
        a, b, c = ops
        s[:, a] ^= s[:, b] & s[:, c]
        s[:, c] ^= s[:, a]
        s[:, b] ^= s[:, a]
    elif kind is GateKind.SWAP:
        a, b = ops
        s[:, [a, b]] = s[:, [b, a]]
    elif kind is GateKind.SWAP3:
        a, b, c = ops
        s[:, [a, b, c]] = s[:, [b, c, a]]
    elif kind is GateKind.INIT3:
        s[:, list(ops)] = 0
    else:  # pragma: no cover
        raise ValueError(f"unknown gate kind {kind!r}")


def is_permutation(circuit: Circuit, *, max_width: int = 20) -> bool:
    """Exhaustively check that the circuit is a bijection on its state space.

    The ancilla-zero precondition is suspended: all 2**width inputs are run.
    Circuits containing INIT3 are constant on three bits and report False.
    """
    if circuit.width > max_width:
        raise ValueError(
            f"width {circuit.width} too large for exhaustive check (max {max_width})"
        )
    if any(g.kind is GateKind.INIT3 for g in circuit.gates):
        return False
    s = _int_states(circuit.width)
    for g in circuit.gates:
        apply_gate_columns(s, g.kind, g.operands)
    powers = (np.uint64(1) << np.arange(circuit.width, dtype=np.uint64))
    packed = s.astype(np.uint64) @ powers
    return len(np.unique(packed)) == 1 << circuit.width


@dataclass(frozen=True)
class NonLocal:
    pass


@dataclass(frozen=True)
class Line1D:
    pass


@dataclass(frozen=True)
class Lattice2D:
    width: int
    height: int
    cells: tuple[tuple[int, int], ...]  # bit index -> (row, col)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(c) for c in self.cells))
        if len(set(self.cells)) != len(self.cells):
            raise ValueError("lattice cell map must be injective")
        for r, c in self.cells:
            if not (0 <= r < self.height and 0 <= c < self.width):
                raise ValueError(f"cell {(r, c)} outside {self.height}x{self.width} lattice")


Topology = NonLocal | Line1D | Lattice2D


def grid_topology(height: int, width: int) -> Lattice2D:
    """Row-major lattice covering height*width bits."""
    cells = tuple((b // width, b % width) for b in range(height * width))
    return Lattice2D(width, height, cells)


def _connected(cells: list[tuple[int, int]]) -> bool:
    remaining = set(cells)
    stack = [cells[0]]
    remaining.discard(cells[0])
    while stack:
        r, c = stack.pop()
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if nb in remaining:
                remaining.discard(nb)
                stack.append(nb)
    return not remaining


def check_locality(circuit: Circuit, topology: Topology) -> list[tuple[int, str]]:
    """Return (gate index, reason) for every gate that is not local.

    On a line a gate is local when its operand set is a contiguous index run;
    on a lattice when the operand cells form a connected set under 4-neighbor
    adjacency (a straight or L-shaped triple).  Non-local topology admits all.
    """
    if isinstance(topology, NonLocal):
        return []
    violations = []
    if isinstance(topology, Line1D):
        for idx, g in enumerate(circuit.gates):
            lo, hi = min(g.operands), max(g.operands)
            if hi - lo != len(g.operands) - 1:
                violations.append((idx, f"operands {g.operands} not contiguous on line"))
        return violations
    if len(topology.cells) < circuit.width:
        raise ValueError("topology does not map every circuit bit to a cell")
    for idx, g in enumerate(circuit.gates):
        cells = [topology.cells[i] for i in g.operands]
        if not _connected(cells):
            violations.append((idx, f"cells {cells} not adjacent on lattice"))
    return violations


@dataclass(frozen=True)
class Census:
    counts: Mapping[GateKind, int] = field(default_factory=dict)

    def __getitem__(self, kind: GateKind) -> int:
        return self.counts.get(kind, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def total_without_init(self) -> int:
        return self.total - self[GateKind.INIT3]

    @property
    def maj_like(self) -> int:
        return self[GateKind.MAJ] + self[GateKind.MAJINV]

    @property
    def elementary_swap_count(self) -> int:
        return self[GateKind.SWAP] + 2 * self[GateKind.SWAP3]

    def as_dict(self) -> dict[str, int]:
        d = {kind.name: n for kind, n in sorted(self.counts.items()) if n}
        d["total"] = self.total
        return d


def gate_census(circuit: Circuit) -> Census:
    """Per-kind gate counts; each Gate counts as one operation."""
    counts: dict[GateKind, int] = {}
    for g in circuit.gates:
        counts[g.kind] = counts.get(g.kind, 0) + 1
    return Census(counts)


def circuit_to_dict(circuit: Circuit) -> dict:
    return {
        "width": circuit.width,
        "inputs": list(circuit.inputs),
        "outputs": list(circuit.outputs),
        "ancillas": list(circuit.ancillas),
        "gates": [{"kind": g.kind.name, "operands": list(g.operands)} for g in circuit.gates],
    }


def circuit_from_dict(data: dict) -> Circuit:
    try:
        width = int(data["width"])
        raw_gates = data["gates"]
        inputs = tuple(data.get("inputs", ()))
        outputs = tuple(data.get("outputs", ()))
        ancillas = tuple(data.get("ancillas", ()))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed circuit object: {exc}") from exc
    gates = []
    for entry in raw_gates:
        name = entry.get("kind")
        if name not in GateKind.__members__:
            raise ValueError(f"unknown gate kind {name!r}")
        gates.append(Gate(GateKind[name], tuple(entry["operands"])))
    return Circuit(width, tuple(gates), inputs, outputs, ancillas)


def save_circuit(circuit: Circuit, path) -> None:
    with open(path, "w") as fh:
        json.dump(circuit_to_dict(circuit), fh, indent=2)
        fh.write("\n")


def load_circuit(path) -> Circuit:
    with open(path) as fh:
        return circuit_from_dict(json.load(fh))
