# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Monte Carlo kernel.

Scalar per-trial loop over the gate list with counter-based randomness,
matching revft.rng and the numpy engine bit for bit.  Gate kind codes mirror
revft.circuit.GateKind.
"""

from libc.stdint cimport int32_t, uint8_t, uint64_t

import numpy as np


cdef uint64_t GAMMA = 0x9E3779B97F4A7C15UL

DEF KIND_CNOT = 0
DEF KIND_TOFFOLI = 1
DEF KIND_MAJ = 2
DEF KIND_MAJINV = 3
DEF KIND_SWAP = 4
DEF KIND_SWAP3 = 5
DEF KIND_INIT3 = 6


cdef inline uint64_t mix64(uint64_t z) nogil:
    z ^= z >> 30
    z *= <uint64_t>0xBF58476D1CE4E5B9UL
    z ^= z >> 27
    z *= <uint64_t>0x94D049BB133111EBUL
    z ^= z >> 31
    return z


def count_failures(
    int32_t[::1] kinds,
    int32_t[:, ::1] ops,
    int32_t[::1] arities,
    int width,
    int32_t[::1] group_cells,
    int32_t[::1] group_bounds,
    int32_t[::1] out_cells,
    uint8_t[::1] expected,
    uint64_t start,
    uint64_t stop,
    uint64_t seed,
    uint64_t g_thresh,
    uint64_t g_init_thresh,
):
    cdef uint64_t failures = 0
    cdef uint64_t t, key, w
    cdef int n_gates = kinds.shape[0]
    cdef int n_groups = group_bounds.shape[0] - 1
    cdef int n_out = out_cells.shape[0]
    cdef int i, j, c, k, span, span3, y
    cdef uint8_t bit, tmp
    cdef uint64_t thresh
    cdef int32_t a, b, d

    state_arr = np.zeros(width, dtype=np.uint8)
    dec_arr = np.zeros(max(n_out, 1), dtype=np.uint8)
    cdef uint8_t[::1] state = state_arr
    cdef uint8_t[::1] dec = dec_arr

    with nogil:
        for t in range(start, stop):
            key = mix64(seed + (t + 1) * GAMMA)
            w = mix64(key + GAMMA)
            for c in range(width):
                state[c] = 0
            y = 0
            for j in range(n_groups):
                bit = <uint8_t>((w >> j) & 1)
                y |= bit << j
                for c in range(group_bounds[j], group_bounds[j + 1]):
                    state[group_cells[c]] = bit
            for i in range(n_gates):
                k = kinds[i]
                if k == KIND_CNOT:
                    state[ops[i, 1]] ^= state[ops[i, 0]]
                elif k == KIND_TOFFOLI:
                    state[ops[i, 2]] ^= state[ops[i, 0]] & state[ops[i, 1]]
                elif k == KIND_MAJ:
                    a = ops[i, 0]; b = ops[i, 1]; d = ops[i, 2]
                    state[b] ^= state[a]
                    state[d] ^= state[a]
                    state[a] ^= state[b] & state[d]
                elif k == KIND_MAJINV:
                    a = ops[i, 0]; b = ops[i, 1]; d = ops[i, 2]
                    state[a] ^= state[b] & state[d]
                    state[d] ^= state[a]
                    state[b] ^= state[a]
                elif k == KIND_SWAP:
                    a = ops[i, 0]; b = ops[i, 1]
                    tmp = state[a]; state[a] = state[b]; state[b] = tmp
                elif k == KIND_SWAP3:
                    a = ops[i, 0]; b = ops[i, 1]; d = ops[i, 2]
                    tmp = state[a]; state[a] = state[b]; state[b] = tmp
                    tmp = state[b]; state[b] = state[d]; state[d] = tmp
                else:  # INIT3
                    state[ops[i, 0]] = 0
                    state[ops[i, 1]] = 0
                    state[ops[i, 2]] = 0
                thresh = g_init_thresh if k == KIND_INIT3 else g_thresh
                if thresh:
                    w = mix64(key + (i + 2) * GAMMA)
                    if (w >> 11) < thresh:
                        for j in range(arities[i]):
                            state[ops[i, j]] = <uint8_t>((w >> j) & 1)
            for c in range(n_out):
                dec[c] = state[out_cells[c]]
            span = n_out
            while span > 1:
                span3 = span / 3
                for c in range(span3):
                    dec[c] = 1 if dec[3 * c] + dec[3 * c + 1] + dec[3 * c + 2] >= 2 else 0
                span = span3
            if dec[0] != expected[y]:
                failures += 1
    return failures
