"""Shared fixtures: the small-instance corpus and independent test-side
oracles (naive plan enumeration, a second satisfiability checker, a
set-based dependency-graph evaluator)."""

from __future__ import annotations

import random

import pytest

from planrep import (
    CounterSpec,
    StripsAction,
    LiteralSet,
    StripsInstance,
    all_instances_instance,
    counter_instance,
    indexed_plans_instance,
    sat_verifier_instance,
)
from planrep.ffp import ground_view


def small_corpus() -> list[tuple[str, StripsInstance]]:
    """Every generator at its smallest sizes; all BFS-solvable quickly."""
    entries = [
        ("counter-1", counter_instance(CounterSpec(1, 1, "binary"))),
        ("counter-2", counter_instance(CounterSpec(2, 3, "binary"))),
        ("counter-3", counter_instance(CounterSpec(3, 5, "binary"))),
        ("gray-1", counter_instance(CounterSpec(1, 1, "gray"))),
        ("gray-2", counter_instance(CounterSpec(2, 3, "gray"))),
        ("gray-3", counter_instance(CounterSpec(3, 6, "gray"))),
        ("indexed-1", indexed_plans_instance(1)),
        ("indexed-2", indexed_plans_instance(2)),
        ("satverify-3-0", sat_verifier_instance(3, 0)),
        ("satverify-3-5", sat_verifier_instance(3, 5)),
        ("satverify-3-255", sat_verifier_instance(3, 255)),
        ("allinst-1", all_instances_instance(1)),
    ]
    return entries


@pytest.fixture(scope="session")
def corpus():
    return small_corpus()


def enumerate_plans_of_length(p: StripsInstance, length: int) -> list[tuple[str, ...]]:
    """Naive depth-bounded DFS listing every valid plan of exactly the
    given length; the independent counting oracle."""
    view = ground_view(p)
    found: list[tuple[str, ...]] = []

    def recurse(state, prefix):
        if len(prefix) == length:
            if view.is_goal(state):
                found.append(tuple(prefix))
            return
        for name, applicable, successor in view.actions:
            if applicable(state):
                prefix.append(name)
                recurse(successor(state), prefix)
                prefix.pop()

    recurse(view.init, [])
    return found


def double_loop_satisfiable(n: int, mask: int) -> bool:
    """Second satisfiability oracle, coded with set semantics instead of
    bit tests: a clause holds when its literal set meets the assignment's
    true/false literal sets."""
    import itertools

    clause_pool = []
    for vs in itertools.combinations(range(1, n + 1), 3):
        for pol in range(8):
            clause_pool.append(
                frozenset(
                    (v, "neg" if (pol >> b) & 1 else "pos")
                    for b, v in enumerate(vs)
                )
            )
    enabled = [c for j, c in enumerate(clause_pool) if (mask >> j) & 1]
    for bits in itertools.product([False, True], repeat=n):
        truth = {(v, "pos" if bits[v - 1] else "neg") for v in range(1, n + 1)}
        if all(clause & truth for clause in enabled):
            return True
    return False


def random_instance(rng: random.Random, max_atoms=6, max_actions=8) -> StripsInstance:
    """Seeded random small instance for fuzz checks."""
    n = rng.randint(1, max_atoms)
    atoms = [f"p{i}" for i in range(n)]

    def random_literals(max_size):
        pos = neg = 0
        for i in rng.sample(range(n), rng.randint(0, min(max_size, n))):
            if rng.random() < 0.5:
                pos |= 1 << i
            else:
                neg |= 1 << i
        return LiteralSet(pos, neg)

    actions = [
        StripsAction(f"op{k}", random_literals(3), random_literals(3))
        for k in range(rng.randint(1, max_actions))
    ]
    init = rng.getrandbits(n)
    goal = random_literals(3)
    return StripsInstance(atoms, actions, init, goal)
