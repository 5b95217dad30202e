"""Grammar validation, symbolic lengths, indexed access, bounded-memory
streaming, grammar induction, and the grammar file format."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from planrep.errors import FormatError, IndexOutOfRangeError
from planrep.grammar import (
    MacroGrammar,
    expand,
    induce_grammar,
    iter_expansion,
    macro_access,
    macro_lengths,
    macro_validate,
    parse_grammar,
    serialize_grammar,
)
from planrep.representations import counter_macro


def counter_plan(n):
    return [f"a{(i & -i).bit_length()}" for i in range(1, 1 << n)]


class TestValidate:
    def test_single_production(self):
        check = macro_validate(MacroGrammar([("P1", ("a1",))], "P1"))
        assert check.ok and check.order == ("P1",)

    def test_self_cycle(self):
        check = macro_validate(MacroGrammar([("P", ("P",))], "P"))
        assert not check.ok and check.cycle == ("P",)

    def test_longer_cycle_path(self):
        g = MacroGrammar([("A", ("B",)), ("B", ("C",)), ("C", ("A",))], "A")
        check = macro_validate(g)
        assert not check.ok and set(check.cycle) == {"A", "B", "C"}

    def test_topological_order_dependencies_first(self):
        g = MacroGrammar(
            [("P3", ("P2", "a3", "P2")), ("P2", ("P1", "a2", "P1")), ("P1", ("a1",))],
            "P3",
        )
        check = macro_validate(g)
        assert check.ok and check.order == ("P1", "P2", "P3")

    def test_unknown_root(self):
        check = macro_validate(MacroGrammar([("P", ("a",))], "Q"))
        assert not check.ok and check.unknown == "Q"

    def test_empty_expansion_rejected(self):
        check = macro_validate(MacroGrammar([("P", ())], "P"))
        assert not check.ok

    def test_declared_terminal_alphabet(self):
        g = MacroGrammar([("P", ("a", "b"))], "P", terminals={"a"})
        check = macro_validate(g)
        assert not check.ok and check.unknown == "b"


class TestLengths:
    def test_counter_grammar_lengths(self):
        lengths = macro_lengths(counter_macro(3))
        assert (lengths["P1"], lengths["P2"], lengths["P3"]) == (1, 3, 7)

    def test_single_terminal(self):
        assert macro_lengths(MacroGrammar([("P", ("a",))], "P"))["P"] == 1

    def test_closed_form_without_expanding(self):
        assert macro_lengths(counter_macro(20))["P20"] == (1 << 20) - 1


class TestAccess:
    def test_reference_position(self):
        assert macro_access(counter_macro(3), 4) == "a3"

    def test_first_terminal(self):
        assert macro_access(counter_macro(5), 1) == "a1"

    def test_agrees_with_full_expansion(self):
        g = counter_macro(10)
        reference = expand(g)
        assert reference == counter_plan(10)
        assert [macro_access(g, i) for i in range(1, len(reference) + 1)] == reference

    def test_repeated_queries_agree(self):
        g = counter_macro(6)
        assert macro_access(g, 37) == macro_access(g, 37)

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            macro_access(counter_macro(3), 0)
        with pytest.raises(IndexOutOfRangeError):
            macro_access(counter_macro(3), 8)

    def test_descent_depth_bounded_by_height(self):
        g = counter_macro(8)
        height = g.height()
        for i in (1, 100, 255):
            stats = {}
            macro_access(g, i, stats=stats)
            assert stats["descent_depth"] <= height


class TestStream:
    def test_stream_equals_expansion_on_random_grammars(self):
        rng = random.Random(11)
        for _ in range(20):
            g = _random_grammar(rng)
            assert list(iter_expansion(g)) == _expand_by_substitution(g)

    def test_limit_truncates(self):
        assert list(iter_expansion(counter_macro(4), limit=5)) == counter_plan(4)[:5]
        assert list(iter_expansion(counter_macro(4), limit=0)) == []

    def test_stack_depth_never_exceeds_height(self):
        g = counter_macro(9)
        stats = {}
        list(iter_expansion(g, stats=stats))
        assert stats["max_stack_depth"] <= g.height()


class TestInduce:
    def test_single_action_plan(self):
        g = induce_grammar(["a1"])
        assert expand(g) == ["a1"]

    def test_counter_plan_compresses_geometrically(self):
        plan = counter_plan(10)
        g = induce_grammar(plan)
        assert expand(g) == plan
        assert g.symbol_count() <= 256

    def test_no_digram_repeats_after_induction(self):
        g = induce_grammar(counter_plan(6))
        for expansion in g.macros.values():
            digrams = list(zip(expansion, expansion[1:]))
            assert len(digrams) == len(set(digrams))

    def test_macro_names_avoid_plan_alphabet(self):
        g = induce_grammar(["M1", "M2", "M1", "M2", "M1", "M2"])
        assert expand(g) == ["M1", "M2", "M1", "M2", "M1", "M2"]

    def test_run_handling(self):
        plan = ["a"] * 9
        g = induce_grammar(plan)
        assert expand(g) == plan

    @given(
        st.lists(
            st.sampled_from(["a1", "a2", "a3", "b", "c"]), min_size=1, max_size=60
        )
    )
    def test_round_trip_property(self, plan):
        assert expand(induce_grammar(plan)) == plan

    def test_rejects_empty_plan(self):
        with pytest.raises(ValueError):
            induce_grammar([])

    def test_round_trips_every_corpus_plan(self, corpus):
        from planrep import bfs_solve

        for name, inst in corpus:
            plan = bfs_solve(inst).plan
            if plan:
                assert expand(induce_grammar(plan)) == plan, name


class TestGrammarFiles:
    def test_round_trip(self):
        g = counter_macro(4)
        text = serialize_grammar(g)
        back = parse_grammar(text)
        assert back.macros == g.macros and back.root == g.root
        assert serialize_grammar(back) == text

    def test_comments(self):
        g = parse_grammar("grammar v1\n# note\nmacro P = a b # tail\nroot P\n")
        assert g.macros == {"P": ("a", "b")}

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "grammar v2\nroot P\n",
            "grammar v1\nmacro P a\nroot P\n",
            "grammar v1\nmacro P = a\n",
            "grammar v1\nmacro P = a\nroot P\nroot P\n",
            "grammar v1\nmacro P = a\nmacro P = b\nroot P\n",
            "grammar v1\nwhat P = a\nroot P\n",
        ],
    )
    def test_malformed_rejected(self, text):
        with pytest.raises(FormatError):
            parse_grammar(text)


def _random_grammar(rng: random.Random) -> MacroGrammar:
    terminals = ["t1", "t2", "t3"]
    names = []
    macros = []
    for k in range(rng.randint(1, 5)):
        name = f"G{k}"
        pool = terminals + names  # only earlier macros: acyclic by construction
        expansion = tuple(rng.choice(pool) for _ in range(rng.randint(1, 4)))
        macros.append((name, expansion))
        names.append(name)
    return MacroGrammar(macros, names[-1])


def _expand_by_substitution(g: MacroGrammar) -> list[str]:
    """Reference expansion by repeated substitution (no stack)."""
    symbols = [g.root]
    while any(g.is_macro(s) for s in symbols):
        fresh: list[str] = []
        for s in symbols:
            fresh.extend(g.macros[s]) if g.is_macro(s) else fresh.append(s)
        symbols = fresh
    return symbols
