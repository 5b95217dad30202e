"""Stream and indexed representations: counter closed form, recursive
grammar, verifier family with advice, deterministic sweep, the adapter,
the stutter-paced generator for reversible instances, and verification."""

from __future__ import annotations

import pytest

from planrep import (
    AdviceBits,
    CounterSpec,
    all_instances_instance,
    bfs_solve,
    block_constants,
    c16_crar,
    c16_csar,
    c26_csar,
    compute_advice,
    counter_crar,
    counter_instance,
    counter_macro,
    crar_to_csar,
    deterministic_csar,
    macro_access,
    macro_stream,
    resolve_builtin,
    reversible_csar,
    sat_verifier_instance,
    serialize_instance,
    strips_to_ffp,
    truncate,
    validate_plan,
    verify_representation,
)
from planrep.errors import (
    IndexOutOfRangeError,
    NoFalsifiedClauseError,
    NotReversibleObservedError,
    StuckError,
)
from planrep.model import LiteralSet, StripsInstance, step

PAPER_RULER_16 = [
    "a1", "a2", "a1", "a3", "a1", "a2", "a1", "a4",
    "a1", "a2", "a1", "a3", "a1", "a2", "a1", "a5",
]


def simulated_counter_plan(n):
    """Explicit simulation oracle: run the binary counter to all-ones."""
    inst = counter_instance(CounterSpec(n, (1 << n) - 1, "binary"))
    plan = bfs_solve(inst).plan
    assert plan is not None
    return plan


class TestCounterRepresentations:
    def test_closed_form_reference_positions(self):
        rep = counter_crar(5)
        assert rep.access(8) == "a4"
        assert rep.access(16) == "a5"
        assert rep.length == 31

    @pytest.mark.parametrize("n", range(1, 7))
    def test_triple_oracle_agreement(self, n):
        simulated = simulated_counter_plan(n)
        rep = counter_crar(n)
        grammar = counter_macro(n)
        assert rep.length == len(simulated)
        for i in range(1, len(simulated) + 1):
            assert rep.access(i) == simulated[i - 1]
            assert macro_access(grammar, i) == simulated[i - 1]

    def test_access_bounds(self):
        with pytest.raises(IndexOutOfRangeError):
            counter_crar(3).access(0)
        with pytest.raises(IndexOutOfRangeError):
            counter_crar(3).access(8)

    def test_macro_symbol_count_is_linear(self):
        for n in (1, 2, 5, 10):
            assert counter_macro(n).symbol_count() == 3 * n - 2

    def test_macro_stream_paper_prefix(self):
        rep = macro_stream(counter_macro(5))
        assert rep.take(16) == PAPER_RULER_16
        assert rep.cursor == 16


class TestAdvice:
    def test_empty_subset(self):
        advice = compute_advice(3, 0)
        assert advice.sat and advice.assignment == 0

    def test_full_subset(self):
        assert not compute_advice(3, 255).sat

    def test_witness_is_smallest(self):
        assert compute_advice(3, 1) == AdviceBits(True, 0b001)


class TestVerifierRepresentations:
    def test_stream_lengths(self):
        assert len(list(c16_csar(3, 0, compute_advice(3, 0)))) == 11
        assert len(list(c16_csar(3, 255, compute_advice(3, 255)))) == 17

    def test_first_action_matches_verdict(self):
        for i in (0, 1, 37, 254, 255):
            advice = compute_advice(3, i)
            first = next(iter(c16_csar(3, i, advice)))
            assert (first == "acs") == advice.sat
            assert (first == "acu") == (not advice.sat)

    def test_streamed_plans_validate(self):
        for i in (0, 3, 128, 255):
            inst = sat_verifier_instance(3, i)
            plan = list(c16_csar(3, i, compute_advice(3, i)))
            assert validate_plan(inst, plan).valid

    def test_random_access_endpoints(self):
        advice = compute_advice(3, 255)
        rep = c16_crar(3, 255, advice)
        assert rep.access(1) == "acu"
        assert rep.access(17) == "agu"

    def test_random_access_equals_stream_for_all_subsets(self):
        for i in range(256):
            advice = compute_advice(3, i)
            plan = list(c16_csar(3, i, advice))
            rep = c16_crar(3, i, advice)
            assert rep.length == len(plan)
            assert [rep.access(k) for k in range(1, rep.length + 1)] == plan

    def test_wrong_unsat_advice_raises(self):
        # subset 0 is satisfiable: claiming unsat leaves nothing to falsify
        with pytest.raises(NoFalsifiedClauseError):
            list(c16_csar(3, 0, AdviceBits(False, 0)))

    def test_wrong_sat_advice_yields_detectably_invalid_plan(self):
        # subset 255 is unsatisfiable: any claimed assignment fails validation
        inst = sat_verifier_instance(3, 255)
        plan = list(c16_csar(3, 255, AdviceBits(True, 0)))
        assert not validate_plan(inst, plan).valid

    def test_degenerate_width(self):
        advice = compute_advice(1, 0)
        assert list(c16_csar(1, 0, advice)) == ["acs", "avt_0", "ags"]
        assert validate_plan(sat_verifier_instance(1, 0), ["acs", "avt_0", "ags"]).valid


class TestDeterministicSweep:
    def test_first_emission(self):
        assert next(iter(c26_csar(3))) == "abi"

    def test_verdict_probe_positions(self):
        constants = block_constants(3)
        plan = list(c26_csar(3))
        assert plan[constants.offset - 1] == "ais"  # empty subset is satisfiable
        assert plan[constants.stride * 255 + constants.offset - 1] == "aiu"

    def test_whole_sweep_solves_its_instance(self):
        inst = all_instances_instance(2)
        assert validate_plan(inst, list(c26_csar(2))).valid

    def test_stuck_on_dead_instance(self):
        dead = StripsInstance(["x1"], [], 0, LiteralSet(pos=1))
        with pytest.raises(StuckError):
            list(deterministic_csar(dead))


class TestAdapter:
    def test_counter_stream_prefix(self):
        rep = crar_to_csar(counter_crar(5))
        assert rep.take(16) == PAPER_RULER_16

    def test_zero_length(self):
        source = counter_crar(1)
        assert list(crar_to_csar(source)) == ["a1"]
        empty = truncate(crar_to_csar(counter_crar(1)), 0)
        assert list(empty) == []
        from planrep import RandomAccessRep, RepMeta

        nothing = RandomAccessRep(0, lambda i: "x", RepMeta(8))
        assert list(crar_to_csar(nothing)) == []

    def test_adapter_matches_stream_for_verifier_family(self):
        advice = compute_advice(3, 255)
        assert list(crar_to_csar(c16_crar(3, 255, advice))) == list(
            c16_csar(3, 255, advice)
        )

    def test_size_grows_only_by_the_counter(self):
        source = counter_crar(6)
        adapted = crar_to_csar(source)
        assert adapted.meta.serialized_bits <= source.meta.serialized_bits + 64


class TestReversible:
    def gray(self, n, target):
        return counter_instance(CounterSpec(n, target, "gray"))

    def test_core_is_optimal_after_stripping_stutters(self):
        inst = self.gray(2, 3)
        rep = reversible_csar(inst, delay_budget=1)
        out = list(rep)
        core = [a for a, kind in zip(out, rep.emission_kinds) if kind == "chosen"]
        assert len(core) == bfs_solve(inst).optimal_length == 3

    def test_output_is_a_valid_plan(self):
        for n, target in ((1, 1), (2, 3), (3, 5)):
            inst = self.gray(n, target)
            verdict = verify_representation(inst, reversible_csar(inst, 1))
            assert verdict.is_valid

    def test_stutter_pairs_are_adjacent_inverses(self):
        inst = self.gray(3, 6)
        rep = reversible_csar(inst, delay_budget=1)
        out = list(rep)
        kinds = rep.emission_kinds
        state = inst.init
        i = 0
        while i < len(out):
            if kinds[i] == "stutter":
                assert kinds[i + 1] == "stutter"
                u = step(state, inst.action(out[i]))
                assert step(u, inst.action(out[i + 1])) == state
                i += 2
            else:
                state = step(state, inst.action(out[i]))
                i += 1

    def test_goal_satisfied_initially_yields_empty_output(self):
        assert list(reversible_csar(self.gray(2, 0), 1)) == []

    def test_larger_delay_budget_emits_fewer_stutters(self):
        inst = self.gray(3, 7)
        eager = reversible_csar(inst, delay_budget=1)
        lazy = reversible_csar(inst, delay_budget=10)
        n_eager = sum(1 for k in zip(list(eager), eager.emission_kinds) if k[1] == "stutter")
        n_lazy = sum(1 for k in zip(list(lazy), lazy.emission_kinds) if k[1] == "stutter")
        assert n_lazy < n_eager

    def test_works_on_functional_view(self):
        inst = strips_to_ffp(self.gray(2, 3))
        verdict = verify_representation(inst, reversible_csar(inst, 1))
        assert verdict.is_valid

    def test_irreversible_instance_detected(self):
        with pytest.raises(NotReversibleObservedError):
            list(reversible_csar(counter_instance(CounterSpec(2, 3, "binary")), 1))


class TestVerifyRepresentation:
    def test_truncated_counter_stream_is_valid(self):
        inst = counter_instance(CounterSpec(5, 16, "binary"))
        rep = truncate(crar_to_csar(counter_crar(5)), 16)
        assert verify_representation(inst, rep).is_valid

    def test_full_counter_stream_overshoots(self):
        inst = counter_instance(CounterSpec(5, 16, "binary"))
        verdict = verify_representation(inst, crar_to_csar(counter_crar(5)))
        assert verdict.status == "invalid"

    def test_swapped_symbol_detected_at_step_two(self):
        inst = counter_instance(CounterSpec(5, 31, "binary"))
        grammar = counter_macro(5)
        tampered = {
            name: tuple("a3" if s == "a2" else s for s in exp)
            for name, exp in grammar.macros.items()
        }
        from planrep.grammar import MacroGrammar

        bad = MacroGrammar(list(tampered.items()), grammar.root)
        verdict = verify_representation(inst, macro_stream(bad))
        assert verdict.status == "invalid" and verdict.failure_step == 2

    def test_budget_exceeded(self):
        inst = counter_instance(CounterSpec(5, 16, "binary"))
        verdict = verify_representation(inst, crar_to_csar(counter_crar(5)), budget=1)
        assert verdict.status == "budget-exceeded"
        indexed = verify_representation(inst, counter_crar(5), budget=1)
        assert indexed.status == "budget-exceeded"

    def test_unknown_action_name_is_invalid_not_an_error(self):
        inst = counter_instance(CounterSpec(2, 3, "binary"))
        grammar_rep = macro_stream(counter_macro(3))  # a3 does not exist here
        verdict = verify_representation(inst, grammar_rep)
        assert verdict.status == "invalid"

    def test_random_access_verification(self):
        inst = counter_instance(CounterSpec(4, 15, "binary"))
        assert verify_representation(inst, counter_crar(4)).is_valid


class TestBuiltinUris:
    @pytest.mark.parametrize(
        "uri, first",
        [
            ("builtin:counter-crar?n=5", "a1"),
            ("builtin:counter-macro?n=5", "a1"),
            ("builtin:c16-csar?n=3&i=255", "acu"),
            ("builtin:c16-crar?n=3&i=0", "acs"),
            ("builtin:c26-csar?n=1", "abi"),
        ],
    )
    def test_resolution(self, uri, first):
        rep = resolve_builtin(uri)
        if hasattr(rep, "access"):
            assert rep.access(1) == first
        else:
            assert rep.take(1) == [first]

    def test_reversible_uri(self, tmp_path):
        inst = counter_instance(CounterSpec(2, 3, "gray"))
        path = tmp_path / "gray.strips"
        path.write_text(serialize_instance(inst))
        rep = resolve_builtin(f"builtin:reversible?file={path}&k=2")
        assert verify_representation(inst, rep).is_valid

    def test_unknown_builtin(self):
        with pytest.raises(ValueError):
            resolve_builtin("builtin:nope?n=1")
        with pytest.raises(ValueError):
            resolve_builtin("builtin:counter-crar")


class TestMeasuredCompactness:
    def test_serialized_bits_within_linear_bound(self):
        # measured stand-in for the size criterion: each built-in
        # representation's parameter record stays within 64x the size of
        # the instance it represents
        for n in range(1, 7):
            inst_bits = 8 * len(
                serialize_instance(counter_instance(CounterSpec(n, (1 << n) - 1, "binary")))
            )
            assert counter_crar(n).meta.serialized_bits <= 64 * inst_bits
            assert macro_stream(counter_macro(n)).meta.serialized_bits <= 64 * inst_bits
            c26_bits = 8 * len(serialize_instance(all_instances_instance(n)))
            assert c26_csar(n).meta.serialized_bits <= 64 * c26_bits

    def test_verifier_family_bits(self):
        for n in range(1, 7):
            masks = [0] if n < 3 else [0, 255]
            for i in masks:
                inst_bits = 8 * len(serialize_instance(sat_verifier_instance(n, i)))
                advice = compute_advice(n, i)
                assert c16_csar(n, i, advice).meta.serialized_bits <= 64 * inst_bits
                assert c16_crar(n, i, advice).meta.serialized_bits <= 64 * inst_bits

    def test_access_updates_step_cost(self):
        rep = counter_crar(5)
        assert rep.meta.max_step_cost == 0
        rep.access(16)
        assert rep.meta.max_step_cost >= 1
