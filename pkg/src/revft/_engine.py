"""Vectorized (numpy) Monte Carlo engine.

Pure-Python fallback for the compiled kernel: trials are simulated in chunks
as (chunk, width) uint8 matrices.  Randomness follows the per-trial counter
scheme in rng.py exactly, so counts are bit-identical to the kernel and to
the scalar reference regardless of chunking.
"""

from __future__ import annotations

import numpy as np

from .circuit import GateKind, apply_gate_columns
from .rng import draws_array, trial_keys_array


def count_failures(
    kinds: np.ndarray,
    ops: np.ndarray,
    arities: np.ndarray,
    width: int,
    group_cells: list[np.ndarray],
    out_cells: np.ndarray,
    expected: np.ndarray,
    start: int,
    stop: int,
    seed: int,
    g_thresh: int,
    g_init_thresh: int,
) -> int:
    keys = trial_keys_array(seed, start, stop)
    m = stop - start
    state = np.zeros((m, width), dtype=np.uint8)

    w0 = draws_array(keys, 0)
    y = np.zeros(m, dtype=np.int64)
    for j, cells in enumerate(group_cells):
        bit = ((w0 >> np.uint64(j)) & np.uint64(1)).astype(np.uint8)
        y |= bit.astype(np.int64) << j
        state[:, cells] = bit[:, None]

    init_code = int(GateKind.INIT3)
    for i in range(len(kinds)):
        kind = GateKind(int(kinds[i]))
        operands = tuple(int(o) for o in ops[i, : arities[i]])
        apply_gate_columns(state, kind, operands)
        thresh = g_init_thresh if kinds[i] == init_code else g_thresh
        if thresh:
            w = draws_array(keys, i + 1)
            mask = (w >> np.uint64(11)) < np.uint64(thresh)
            if mask.any():
                wm = w[mask]
                for j, op in enumerate(operands):
                    state[mask, op] = ((wm >> np.uint64(j)) & np.uint64(1)).astype(np.uint8)

    values = state[:, out_cells]
    while values.shape[1] > 1:
        folded = values.reshape(m, -1, 3).sum(axis=2)
        values = (folded >= 2).astype(np.uint8)
    decoded = values[:, 0]
    return int(np.count_nonzero(decoded != expected[y]))
