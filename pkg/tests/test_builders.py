import itertools

import pytest

from revft.builders import (
    LayoutStrategy,
    NONLOCAL,
    ONE_D,
    TWO_D,
    build_interleave_1d,
    build_interleave_2d,
    build_recovery_1d,
    build_recovery_nonlocal,
    compile_cycle,
    data_positions,
    decode_positions,
    encode_value,
    ideal_decode,
    interleave_1d_result_triples,
    interleave_2d_topology,
    predicted_counts,
    recovery_2d_topology,
)
from revft.circuit import (
    Circuit,
    Gate,
    GateKind,
    Line1D,
    apply_gate,
    check_locality,
    elementary_swaps,
    evaluate,
    gate_census,
    invert,
    is_permutation,
)

K = GateKind


def run_recovery(circuit, block):
    """Evaluate a recovery circuit on an input block placed at its inputs."""
    state = [0] * circuit.width
    for bit, pos in zip(block, circuit.inputs):
        state[pos] = bit
    final = evaluate(circuit, tuple(state), check_ancillas=False)
    return tuple(final[o] for o in circuit.outputs)


class TestRecoveryNonlocal:
    def test_exact_gate_list(self):
        c = build_recovery_nonlocal()
        assert c.gates == (
            Gate(K.INIT3, (3, 4, 5)),
            Gate(K.INIT3, (6, 7, 8)),
            Gate(K.MAJINV, (0, 3, 6)),
            Gate(K.MAJINV, (1, 4, 7)),
            Gate(K.MAJINV, (2, 5, 8)),
            Gate(K.MAJ, (0, 1, 2)),
            Gate(K.MAJ, (3, 4, 5)),
            Gate(K.MAJ, (6, 7, 8)),
        )
        assert c.inputs == (0, 1, 2)
        assert c.outputs == (0, 3, 6)

    def test_census(self):
        census = gate_census(build_recovery_nonlocal())
        assert census.as_dict() == {"MAJ": 3, "MAJINV": 3, "INIT3": 2, "total": 8}
        assert census.total_without_init == 6

    def test_clean_codewords_are_fixed_points(self):
        c = build_recovery_nonlocal()
        assert run_recovery(c, (0, 0, 0)) == (0, 0, 0)
        assert run_recovery(c, (1, 1, 1)) == (1, 1, 1)

    def test_single_input_error_corrected(self):
        c = build_recovery_nonlocal()
        assert run_recovery(c, (1, 0, 0)) == (0, 0, 0)
        for cw in (0, 1):
            base = (cw, cw, cw)
            for flip in range(3):
                block = tuple(b ^ (i == flip) for i, b in enumerate(base))
                assert run_recovery(c, block) == base

    def test_encoding_intermediate_state(self):
        # after the three copies, every block holds one copy of each input bit
        c = build_recovery_nonlocal()
        state = (1, 0, 0, 0, 0, 0, 0, 0, 0)
        for g in c.gates[:5]:
            state = apply_gate(g, state)
        assert state == (1, 0, 0, 1, 0, 0, 1, 0, 0)

    def test_outputs_are_block_majorities_for_all_blocks(self):
        c = build_recovery_nonlocal()
        for block in itertools.product((0, 1), repeat=3):
            maj = int(sum(block) >= 2)
            assert run_recovery(c, block) == (maj, maj, maj)

    def test_body_is_permutation(self):
        c = build_recovery_nonlocal()
        body = Circuit(9, c.gates[2:], inputs=tuple(range(9)))
        assert is_permutation(body)

    def test_encode_half_round_trip_over_all_states(self):
        c = build_recovery_nonlocal()
        encode = Circuit(9, c.gates[2:5], inputs=tuple(range(9)))
        inverse = invert(encode)
        for packed in range(512):
            s = tuple((packed >> j) & 1 for j in range(9))
            assert evaluate(inverse, evaluate(encode, s)) == s

    def test_local_on_2d_block(self):
        assert check_locality(build_recovery_nonlocal(), recovery_2d_topology()) == []


class TestRecovery1D:
    def test_census_budget(self):
        census = gate_census(build_recovery_1d())
        assert census.total == 13
        assert census.total_without_init == 11
        assert census.maj_like == 6
        assert census[K.SWAP3] == 4
        assert census[K.SWAP] == 1
        assert census[K.INIT3] == 2
        assert census.elementary_swap_count == 9

    def test_line_locality(self):
        assert check_locality(build_recovery_1d(), Line1D()) == []

    def test_corrects_all_distance_one_inputs(self):
        c = build_recovery_1d()
        for cw in (0, 1):
            base = (cw, cw, cw)
            for block in [base] + [
                tuple(b ^ (i == flip) for i, b in enumerate(base)) for flip in range(3)
            ]:
                assert run_recovery(c, block) == base

    def test_functionally_equivalent_to_nonlocal(self):
        # identical block -> majority behavior, only the positions differ
        near = build_recovery_nonlocal()
        far = build_recovery_1d()
        for block in itertools.product((0, 1), repeat=3):
            assert run_recovery(far, block) == run_recovery(near, block)

    def test_composes_with_itself(self):
        # outputs land on the input cells, so two cycles chain directly
        c = build_recovery_1d()
        assert c.inputs == c.outputs == (0, 4, 8)
        state = [0] * 9
        state[0], state[4], state[8] = 1, 1, 0
        once = evaluate(c, tuple(state), check_ancillas=False)
        twice = evaluate(c, once, check_ancillas=False)
        assert tuple(twice[o] for o in c.outputs) == (1, 1, 1)

    def test_body_is_permutation(self):
        c = build_recovery_1d()
        body = Circuit(9, tuple(g for g in c.gates if g.kind is not K.INIT3),
                       inputs=tuple(range(9)))
        assert is_permutation(body)


def codeword_swap_touches(circuit, triples):
    """Per-codeword SWAP3 and elementary-swap touch counts for a schedule."""
    width = circuit.width
    occupant = [None] * width
    for cw, tri in enumerate(triples):
        for pos in tri:
            occupant[pos] = cw
    swap3 = {0: 0, 1: 0, 2: 0}
    elementary = {0: 0, 1: 0, 2: 0}
    for g in circuit.gates:
        touched = set()
        for a, b in elementary_swaps(g):
            for cw in (occupant[a], occupant[b]):
                if cw is not None:
                    touched.add(cw)
                    elementary[cw] += 1
            occupant[a], occupant[b] = occupant[b], occupant[a]
        if g.kind is K.SWAP3:
            for cw in touched:
                swap3[cw] += 1
    return swap3, elementary


class TestInterleave1D:
    TRIPLES = ((0, 4, 8), (9, 13, 17), (18, 22, 26))

    def test_elementary_swap_content_is_45(self):
        census = gate_census(build_interleave_1d(self.TRIPLES))
        assert census.elementary_swap_count == 45

    def test_per_codeword_budgets(self):
        swap3, elementary = codeword_swap_touches(
            build_interleave_1d(self.TRIPLES), self.TRIPLES
        )
        assert max(swap3.values()) == 12
        assert max(elementary.values()) <= 24

    def test_line_locality(self):
        assert check_locality(build_interleave_1d(self.TRIPLES), Line1D()) == []

    def test_result_triples_are_contiguous_and_transversal(self):
        final = interleave_1d_result_triples(self.TRIPLES)
        for tri in final:
            assert tri[1] == tri[0] + 1 and tri[2] == tri[1] + 1
        # entry i collects bit i of each codeword, in codeword order
        width = 27
        occupant = [None] * width
        for cw, tri in enumerate(self.TRIPLES):
            for i, pos in enumerate(tri):
                occupant[pos] = (cw, i)
        circuit = build_interleave_1d(self.TRIPLES)
        for g in circuit.gates:
            for a, b in elementary_swaps(g):
                occupant[a], occupant[b] = occupant[b], occupant[a]
        for i, tri in enumerate(final):
            assert [occupant[p] for p in tri] == [(0, i), (1, i), (2, i)]

    def test_round_trip_identity_on_codeword_cells(self):
        circuit = build_interleave_1d(self.TRIPLES)
        inverse = invert(circuit)
        cells = [c for tri in self.TRIPLES for c in tri]
        for packed in range(512):
            s = [0] * 27
            for j, c in enumerate(cells):
                s[c] = (packed >> j) & 1
            s = tuple(s)
            assert evaluate(inverse, evaluate(circuit, s, check_ancillas=False),
                            check_ancillas=False) == s

    def test_rejects_non_translate_layout(self):
        with pytest.raises(ValueError):
            build_interleave_1d(((0, 4, 8), (9, 13, 17), (18, 22, 25)))
        with pytest.raises(ValueError):
            build_interleave_1d(((0, 4, 9), (9, 13, 18), (18, 22, 27)))


class TestInterleave2D:
    def test_parallel_budget(self):
        c = build_interleave_2d("parallel")
        census = gate_census(c)
        assert census.elementary_swap_count == 9
        assert census[K.SWAP3] == 4 and census[K.SWAP] == 1
        assert check_locality(c, interleave_2d_topology("parallel")) == []

    def test_perpendicular_budget(self):
        c = build_interleave_2d("perpendicular")
        census = gate_census(c)
        assert census.elementary_swap_count == 12
        assert census[K.SWAP3] == 6
        assert check_locality(c, interleave_2d_topology("perpendicular")) == []

    def test_parallel_swap3_per_codeword_at_most_3(self):
        triples = ((0, 1, 2), (3, 4, 5), (6, 7, 8))
        swap3, elementary = codeword_swap_touches(build_interleave_2d("parallel"), triples)
        assert max(swap3.values()) <= 3
        assert max(elementary.values()) <= 6

    def test_perpendicular_swap3_per_codeword_at_most_3(self):
        triples = ((0, 1, 2), (9, 10, 11), (18, 19, 20))
        swap3, elementary = codeword_swap_touches(
            build_interleave_2d("perpendicular"), triples
        )
        assert max(swap3.values()) <= 3
        assert max(elementary.values()) <= 6

    def test_parallel_interleaves_matching_bits(self):
        c = build_interleave_2d("parallel")
        occupant = list(range(9)) + [None] * 18
        for g in c.gates:
            for a, b in elementary_swaps(g):
                occupant[a], occupant[b] = occupant[b], occupant[a]
        # row 0 becomes (a0 b0 c0 | a1 b1 c1 | a2 b2 c2)
        assert occupant[:9] == [0, 3, 6, 1, 4, 7, 2, 5, 8]

    def test_unknown_direction(self):
        with pytest.raises(ValueError):
            build_interleave_2d("diagonal")


class TestEncodeDecode:
    def test_encode_level_1(self):
        state = encode_value(1, 1)
        assert tuple(state[p] for p in data_positions(1)) == (1, 1, 1)
        assert sum(state) == 3

    def test_encode_level_0_and_2(self):
        assert encode_value(0, 0) == (0,)
        state = encode_value(1, 2)
        assert len(state) == 81
        assert [state[p] for p in data_positions(2)] == [1] * 9

    def test_decode_majority(self):
        assert ideal_decode((1, 1, 0), 1) == 1
        assert ideal_decode((0, 0, 0), 1) == 0

    def test_decode_level_2_survives_one_corrupted_block(self):
        positions = data_positions(2)
        for bit in (0, 1):
            clean = list(encode_value(bit, 2))
            for block in range(3):
                for pattern in itertools.product((0, 1), repeat=3):
                    state = clean[:]
                    for i, v in enumerate(pattern):
                        state[positions[3 * block + i]] = v
                    assert ideal_decode(tuple(state), 2) == bit


class TestCompileCycle:
    def test_level0_is_single_gate(self):
        cycle = compile_cycle(K.MAJ, 0, NONLOCAL)
        assert cycle.circuit.gates == (Gate(K.MAJ, (0, 1, 2)),)
        assert cycle.census.total == 1

    @pytest.mark.parametrize("level", [0, 1, 2, 3])
    def test_census_matches_predicted_counts(self, level):
        cycle = compile_cycle(K.MAJ, level, NONLOCAL)
        gates_pred, bits_pred = predicted_counts(level, 9)
        assert cycle.census.total_without_init == gates_pred
        assert cycle.circuit.width == 3 * bits_pred

    def test_level1_counted_ops_per_logical_operand(self):
        # 3 transversal gates + an 8-operation recovery act on each encoded bit
        cycle = compile_cycle(K.MAJ, 1, NONLOCAL)
        for j in range(3):
            window = set(range(9 * j, 9 * j + 9))
            touching = [g for g in cycle.circuit.gates if window & set(g.operands)]
            assert len(touching) == 11

    @pytest.mark.parametrize("base", [K.MAJ, K.MAJINV, K.TOFFOLI, K.SWAP3])
    def test_level1_transversality(self, base):
        cycle = compile_cycle(base, 1, NONLOCAL)
        for bits in itertools.product((0, 1), repeat=3):
            state = [0] * cycle.circuit.width
            for j in range(3):
                for c in cycle.logical_inputs[j]:
                    state[c] = bits[j]
            out = evaluate(cycle.circuit, tuple(state))
            decoded = tuple(
                decode_positions(out, cycle.logical_outputs[j]) for j in range(3)
            )
            assert decoded == apply_gate(Gate(base, (0, 1, 2)), bits)

    def test_level2_transversality(self):
        cycle = compile_cycle(K.TOFFOLI, 2, NONLOCAL)
        for bits in itertools.product((0, 1), repeat=3):
            state = [0] * cycle.circuit.width
            for j in range(3):
                for c in cycle.logical_inputs[j]:
                    state[c] = bits[j]
            out = evaluate(cycle.circuit, tuple(state))
            decoded = tuple(
                decode_positions(out, cycle.logical_outputs[j]) for j in range(3)
            )
            assert decoded == apply_gate(Gate(K.TOFFOLI, (0, 1, 2)), bits)

    @pytest.mark.parametrize("layout", [ONE_D, TWO_D])
    def test_local_level1_cycles_are_local_and_correct(self, layout):
        cycle = compile_cycle(K.TOFFOLI, 1, layout)
        assert check_locality(cycle.circuit, cycle.topology) == []
        for bits in itertools.product((0, 1), repeat=3):
            state = [0] * cycle.circuit.width
            for j in range(3):
                for c in cycle.logical_inputs[j]:
                    state[c] = bits[j]
            out = evaluate(cycle.circuit, tuple(state))
            decoded = tuple(
                decode_positions(out, cycle.logical_outputs[j]) for j in range(3)
            )
            assert decoded == apply_gate(Gate(K.TOFFOLI, (0, 1, 2)), bits)

    def test_mixed_layout_dispatch(self):
        lone = compile_cycle(K.MAJ, 1, LayoutStrategy.parse("mixed:0"))
        assert check_locality(lone.circuit, Line1D()) == []
        ltwo = compile_cycle(K.MAJ, 1, LayoutStrategy.parse("mixed:2"))
        assert ltwo.census.total == compile_cycle(K.MAJ, 1, TWO_D).census.total

    def test_local_layouts_reject_deep_levels(self):
        with pytest.raises(ValueError):
            compile_cycle(K.MAJ, 2, ONE_D)
        with pytest.raises(ValueError):
            compile_cycle(K.MAJ, 2, TWO_D)

    def test_rejects_two_bit_base(self):
        with pytest.raises(ValueError):
            compile_cycle(K.CNOT, 1, NONLOCAL)

    def test_census_field_matches_circuit(self):
        cycle = compile_cycle(K.MAJ, 2, NONLOCAL)
        assert cycle.census.counts == gate_census(cycle.circuit).counts


class TestPredictedCounts:
    def test_examples(self):
        assert predicted_counts(2, 9) == (441, 81)
        assert predicted_counts(0, 7) == (1, 1)
        assert predicted_counts(1, 11) == (27, 9)

    def test_validation(self):
        with pytest.raises(ValueError):
            predicted_counts(1, 2)
        with pytest.raises(ValueError):
            predicted_counts(-1, 9)


def test_layout_parsing():
    assert LayoutStrategy.parse("nonlocal") == NONLOCAL
    assert LayoutStrategy.parse("mixed:3").two_d_levels == 3
    assert str(LayoutStrategy.parse("mixed:3")) == "mixed:3"
    with pytest.raises(ValueError):
        LayoutStrategy.parse("hexagonal")
    with pytest.raises(ValueError):
        LayoutStrategy("mixed", -1)
