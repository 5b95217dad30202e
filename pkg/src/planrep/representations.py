"""Executable compact plan representations.

Two access disciplines are provided.  A sequential representation hands
out the actions of one fixed plan in order with bounded work per emission;
a random-access representation answers "which action sits at position i"
for 1 <= i <= length.  Both carry measured metadata: the bit length of the
serialized parameter record that, together with the fixed interpreter code
in this module, reproduces the representation, and the worst per-access
work observed so far.

Builders cover the counter families (closed form and recursive-schema
grammar), the satisfiability-verifier family driven by a sat-flag-plus-
assignment advice record, the deterministic all-instances sweep, the
random-access-to-sequential adapter, and the stutter-paced generator for
reversible instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from . import grammar as grammar_mod
from . import model, oracles, sat3
from .constructions import all_instances_instance
from .errors import (
    IndexOutOfRangeError,
    NoFalsifiedClauseError,
    NotReversibleObservedError,
    StuckError,
)
from .ffp import FfpInstance, ground_view
from .grammar import MacroGrammar
from .model import StripsInstance


@dataclass
class RepMeta:
    """Measured size and access-cost metadata.

    ``serialized_bits`` is the bit length of the parameter record that
    fully determines the representation; ``max_step_cost`` is the largest
    number of implementation-counted work units any single access or
    emission has used so far.
    """

    serialized_bits: int
    max_step_cost: int = 0

    def charge(self, units: int) -> None:
        if units > self.max_step_cost:
            self.max_step_cost = units


def _record_meta(record: str) -> RepMeta:
    return RepMeta(serialized_bits=8 * len(record))


class SequentialRep:
    """Single-consumer action stream; ``next()`` returns the next action
    name or None at end of plan.  ``cursor`` counts emissions so far."""

    def __init__(self, source: Iterator[str], meta: RepMeta):
        self._source = source
        self.meta = meta
        self.cursor = 0

    def next(self) -> str | None:
        try:
            name = next(self._source)
        except StopIteration:
            return None
        self.cursor += 1
        self.meta.charge(1)
        return name

    def __iter__(self) -> Iterator[str]:
        while True:
            name = self.next()
            if name is None:
                return
            yield name

    def take(self, k: int) -> list[str]:
        out = []
        while len(out) < k:
            name = self.next()
            if name is None:
                break
            out.append(name)
        return out


class RandomAccessRep:
    """Indexed plan access on 1..length; repeated queries agree."""

    def __init__(self, length: int, fetch: Callable[[int], str], meta: RepMeta):
        self.length = length
        self._fetch = fetch
        self.meta = meta

    def access(self, i: int) -> str:
        if not 1 <= i <= self.length:
            raise IndexOutOfRangeError(f"index {i} outside 1..{self.length}")
        return self._fetch(i)


@dataclass(frozen=True)
class AdviceBits:
    """Verdict advice for the satisfiability-verifier family: the sat flag
    plus a satisfying assignment (meaningful only when sat)."""

    sat: bool
    assignment: int = 0


@dataclass(frozen=True)
class Verdict:
    """Outcome of representation verification."""

    status: str  # "valid" | "invalid" | "budget-exceeded"
    failure_step: int | None = None
    steps: int = 0

    @property
    def is_valid(self) -> bool:
        return self.status == "valid"


# ---------------------------------------------------------------------------
# Counter family


def counter_crar(n: int) -> RandomAccessRep:
    """Closed-form random access into the full binary-counter plan: the
    i-th increment flips the bit above the trailing zeros of i."""
    if n < 1:
        raise ValueError("need at least one counter bit")
    meta = _record_meta(f"counter-crar n={n}")

    def fetch(i: int) -> str:
        tz = (i & -i).bit_length() - 1
        meta.charge(tz + 1)
        return f"a{tz + 1}"

    return RandomAccessRep((1 << n) - 1, fetch, meta)


def counter_macro(n: int) -> MacroGrammar:
    """Recursive-schema grammar for the full binary-counter plan:
    P_1 -> a1 and P_k -> P_{k-1} a_k P_{k-1}, rooted at P_n."""
    if n < 1:
        raise ValueError("need at least one counter bit")
    macros: list[tuple[str, tuple[str, ...]]] = [("P1", ("a1",))]
    for k in range(2, n + 1):
        macros.append((f"P{k}", (f"P{k-1}", f"a{k}", f"P{k-1}")))
    return MacroGrammar(macros, f"P{n}", terminals={f"a{k}" for k in range(1, n + 1)})


# ---------------------------------------------------------------------------
# Grammar-backed representations


def macro_stream(g: MacroGrammar, limit: int | None = None) -> SequentialRep:
    """Stream a grammar's expansion with memory bounded by its height.

    The rep records the deepest descent-stack level in
    ``max_stack_depth`` once streaming begins.
    """
    stats: dict = {"max_stack_depth": 0}
    rep = SequentialRep(
        grammar_mod.iter_expansion(g, limit=limit, stats=stats),
        _record_meta(grammar_mod.serialize_grammar(g)),
    )
    rep.stats = stats
    return rep


def grammar_crar(g: MacroGrammar) -> RandomAccessRep:
    """Random access into a grammar's expansion via top-down descent."""
    lengths = grammar_mod.macro_lengths(g)
    meta = _record_meta(grammar_mod.serialize_grammar(g))

    def fetch(i: int) -> str:
        stats: dict = {}
        name = grammar_mod.macro_access(g, i, stats=stats)
        meta.charge(stats["symbols_inspected"])
        return name

    return RandomAccessRep(lengths[g.root], fetch, meta)


# ---------------------------------------------------------------------------
# Satisfiability-verifier family


def compute_advice(n: int, i: int, cap: int = sat3.DEFAULT_SAT_CAP) -> AdviceBits:
    """Brute-force the advice record for clause subset i: the verdict flag
    and, when satisfiable, the smallest satisfying assignment."""
    sat, witness = sat3.is_satisfiable(sat3.instance_from_index(n, i), cap=cap)
    return AdviceBits(sat, witness if sat else 0)


def _advice_record(kind: str, n: int, i: int, adv: AdviceBits) -> str:
    return f"{kind} n={n} i={i} sat={int(adv.sat)} assignment={adv.assignment:0{n}b}"


def _smallest_true_literal(clause: sat3.Clause, assignment: int) -> int:
    """1-based index of the first literal true under the assignment, or 1
    as a fallback when none is (wrong advice; yields an invalid plan that
    plan validation then rejects)."""
    for k, (var, negated) in enumerate(clause.literals, start=1):
        if bool((assignment >> (var - 1)) & 1) != negated:
            return k
    return 1


def _first_falsified(inst: sat3.ThreeSatInstance, clauses, assignment: int) -> int:
    """Smallest enabled clause index falsified by the assignment."""
    for j in inst.enabled_indices():
        if not clauses[j - 1].satisfied_by(assignment):
            return j
    raise NoFalsifiedClauseError(
        f"assignment {assignment:0{inst.n}b} satisfies every enabled clause; "
        "the unsat advice is wrong"
    )


def c16_csar(n: int, i: int, adv: AdviceBits) -> SequentialRep:
    """Sequential representation of a plan for the satisfiability-verifier
    instance (n, i), driven by the advice record.

    The sat branch emits the commit action, the assignment block, and one
    chain action per clause choosing the smallest true literal; the unsat
    branch interleaves counter increments with smallest-falsified-clause
    witnesses through all assignments.
    """
    inst = sat3.instance_from_index(n, i)
    clauses = sat3.enumerate_clauses(n)
    meta = _record_meta(_advice_record("c16-csar", n, i, adv))

    def gen_sat() -> Iterator[str]:
        yield "acs"
        for k in range(1, n + 1):
            if (adv.assignment >> (k - 1)) & 1:
                yield f"aset_{k}"
        yield "avt_0"
        for j in range(1, len(clauses) + 1):
            if not inst.enabled(j):
                yield f"avt_{j}_0"
            else:
                yield f"avt_{j}_{_smallest_true_literal(clauses[j - 1], adv.assignment)}"
        yield "ags"

    def gen_unsat() -> Iterator[str]:
        yield "acu"
        top = (1 << n) - 1
        for value in range(top + 1):
            yield f"avf_{_first_falsified(inst, clauses, value)}"
            if value < top:
                nxt = value + 1
                yield f"aix_{(nxt & -nxt).bit_length()}"
        yield "agu"

    return SequentialRep(gen_sat() if adv.sat else gen_unsat(), meta)


def c16_crar(n: int, i: int, adv: AdviceBits) -> RandomAccessRep:
    """Random access into the same plan c16_csar emits, reconstructing the
    action at a position from the advice record alone.

    In the unsat branch, odd interior positions are counter increments
    computed from trailing zeros of the increment ordinal; even interior
    positions recover the assignment from the ordinal and scan enabled
    clauses in order for the first falsified one.
    """
    inst = sat3.instance_from_index(n, i)
    clauses = sat3.enumerate_clauses(n)
    m = len(clauses)
    meta = _record_meta(_advice_record("c16-crar", n, i, adv))

    if adv.sat:
        set_bits = [k for k in range(1, n + 1) if (adv.assignment >> (k - 1)) & 1]
        h = len(set_bits)
        length = h + m + 3

        def fetch(p: int) -> str:
            meta.charge(m + n)
            if p == 1:
                return "acs"
            if p <= h + 1:
                return f"aset_{set_bits[p - 2]}"
            if p == h + 2:
                return "avt_0"
            if p == length:
                return "ags"
            j = p - h - 2
            if not inst.enabled(j):
                return f"avt_{j}_0"
            return f"avt_{j}_{_smallest_true_literal(clauses[j - 1], adv.assignment)}"

    else:
        h = (1 << n) - 1
        length = 2 * h + 3

        def fetch(p: int) -> str:
            meta.charge(m + n)
            if p == 1:
                return "acu"
            if p == length:
                return "agu"
            if p % 2 == 1:  # increment to ordinal (p - 1) / 2
                value = (p - 1) // 2
                return f"aix_{(value & -value).bit_length()}"
            assignment = (p - 2) // 2
            return f"avf_{_first_falsified(inst, clauses, assignment)}"

    return RandomAccessRep(length, fetch, meta)


# ---------------------------------------------------------------------------
# Deterministic instances


def deterministic_csar(p: StripsInstance | FfpInstance, meta: RepMeta | None = None) -> SequentialRep:
    """Stream the unique plan of a deterministic instance by firing the
    single applicable action per state until the goal holds.

    Raises StuckError in a dead non-goal state; two simultaneously
    applicable actions reveal the instance is not deterministic.
    """
    view = ground_view(p)
    if meta is None:
        meta = _record_meta(f"deterministic n_actions={len(view.actions)}")

    def gen() -> Iterator[str]:
        s = view.init
        while not view.is_goal(s):
            chosen = None
            work = 0
            for name, applicable, successor in view.actions:
                work += 1
                if applicable(s):
                    if chosen is not None:
                        raise ValueError(
                            f"instance not deterministic: {chosen[0]} and {name} "
                            f"both apply"
                        )
                    chosen = (name, successor(s))
            if chosen is None:
                raise StuckError(s)
            meta.charge(work)
            yield chosen[0]
            s = chosen[1]

    return SequentialRep(gen(), meta)


def c26_csar(n: int) -> SequentialRep:
    """Sequential representation of the unique all-instances sweep plan."""
    return deterministic_csar(
        all_instances_instance(n), _record_meta(f"c26-csar n={n}")
    )


# ---------------------------------------------------------------------------
# Adapters


def crar_to_csar(r: RandomAccessRep) -> SequentialRep:
    """Drive a random-access representation with a position counter to
    obtain the sequential discipline; size grows only by the counter."""
    counter_bits = max(1, r.length.bit_length())
    meta = RepMeta(serialized_bits=r.meta.serialized_bits + counter_bits)

    def gen() -> Iterator[str]:
        for i in range(1, r.length + 1):
            yield r.access(i)
            meta.charge(r.meta.max_step_cost + 1)

    return SequentialRep(gen(), meta)


def truncate(rep: SequentialRep, limit: int) -> SequentialRep:
    """Pass through at most ``limit`` emissions of a sequential rep."""

    def gen() -> Iterator[str]:
        for k, name in enumerate(rep):
            if k >= limit:
                return
            yield name

    return SequentialRep(gen(), rep.meta)


# ---------------------------------------------------------------------------
# Reversible instances


def reversible_csar(
    p: StripsInstance | FfpInstance, delay_budget: int = 1
) -> SequentialRep:
    """Stutter-paced plan generator for solvable, reversible instances.

    Each outer iteration greedily follows the shortest-plan oracle: it
    evaluates the distance of the current state and of every applicable
    successor, keeping the earliest action that reaches the minimum
    successor distance.  After every
    ``delay_budget`` oracle invocations one stutter pair is emitted: the
    first applicable action (declaration order) that has an inverse at its
    successor, followed by that inverse, returning to the pre-pair state.
    The chosen action follows.  The rep records an ``emission_kinds``
    list tagging every output "stutter" or "chosen".

    Callers are responsible for the reversibility and solvability
    preconditions; a missing inverse pair raises
    NotReversibleObservedError.
    """
    if delay_budget < 1:
        raise ValueError("delay budget must be at least 1")
    view = ground_view(p)
    meta = _record_meta(f"reversible k={delay_budget} n_actions={len(view.actions)}")
    rep = SequentialRep(iter(()), meta)
    rep.emission_kinds = []

    def distance(s) -> int:
        d = oracles.optplan_length(p, s)
        if d is None:
            raise ValueError("goal unreachable; instance violates the precondition")
        return d

    def stutter_pair(s):
        for name1, applicable1, successor1 in view.actions:
            if not applicable1(s):
                continue
            u = successor1(s)
            for name2, applicable2, successor2 in view.actions:
                if applicable2(u) and successor2(u) == s:
                    return name1, name2
        raise NotReversibleObservedError(s)

    def gen() -> Iterator[str]:
        s = view.init
        calls = 0
        while not view.is_goal(s):
            pair = None
            pending: list[str] = []

            def charge_call():
                nonlocal calls, pair
                calls += 1
                if calls % delay_budget == 0:
                    if pair is None:
                        pair = stutter_pair(s)
                    pending.extend(pair)

            best = None
            best_distance = distance(s)
            charge_call()
            for name, applicable, successor in view.actions:
                if not applicable(s):
                    continue
                t = successor(s)
                d = oracles.optplan_length(p, t)
                charge_call()
                if d is not None and d < best_distance:
                    best, best_distance = (name, t), d
            for stutter_action in pending:
                rep.emission_kinds.append("stutter")
                yield stutter_action
            if best is None:
                raise ValueError("no improving action; instance violates the precondition")
            rep.emission_kinds.append("chosen")
            yield best[0]
            s = best[1]

    rep._source = gen()
    return rep


# ---------------------------------------------------------------------------
# Verification


def verify_representation(
    p: StripsInstance | FfpInstance,
    rep: SequentialRep | RandomAccessRep,
    budget: int | None = None,
) -> Verdict:
    """Decide whether a representation's action sequence is a plan for p.

    Streams (or walks indices 1..length) while validating applicability
    step by step and the goal at the end.  Unknown action names mean the
    sequence is not a plan.  Processing more than ``budget`` actions
    aborts with a budget-exceeded verdict.
    """
    view = ground_view(p)
    by_name = {name: (applicable, successor) for name, applicable, successor in view.actions}

    if isinstance(rep, RandomAccessRep):
        if budget is not None and rep.length > budget:
            return Verdict("budget-exceeded", steps=0)
        names: Iterator[str] = (rep.access(i) for i in range(1, rep.length + 1))
    else:
        names = iter(rep)

    s = view.init
    steps = 0
    for name in names:
        steps += 1
        if budget is not None and steps > budget:
            return Verdict("budget-exceeded", steps=steps - 1)
        entry = by_name.get(name)
        if entry is None:
            return Verdict("invalid", failure_step=steps, steps=steps)
        applicable, successor = entry
        if not applicable(s):
            return Verdict("invalid", failure_step=steps, steps=steps)
        s = successor(s)
    if not view.is_goal(s):
        return Verdict("invalid", failure_step=steps + 1, steps=steps)
    return Verdict("valid", steps=steps)


# ---------------------------------------------------------------------------
# Built-in representation URIs


def resolve_builtin(uri: str) -> SequentialRep | RandomAccessRep:
    """Build a representation from a builtin URI such as
    builtin:counter-crar?n=5 or builtin:c16-csar?n=3&i=255.

    The c16 representations compute their own advice record; reversible
    representations load the named instance file.
    """
    if not uri.startswith("builtin:"):
        raise ValueError(f"not a builtin representation URI: {uri}")
    rest = uri[len("builtin:"):]
    name, _, query = rest.partition("?")
    params: dict[str, str] = {}
    if query:
        for part in query.split("&"):
            key, _, value = part.partition("=")
            params[key] = value

    def int_param(key: str, default: int | None = None) -> int:
        if key not in params:
            if default is None:
                raise ValueError(f"builtin {name} needs parameter {key}")
            return default
        return int(params[key])

    if name == "counter-crar":
        return counter_crar(int_param("n"))
    if name == "counter-macro":
        return grammar_crar(counter_macro(int_param("n")))
    if name == "c16-csar":
        n, i = int_param("n"), int_param("i")
        return c16_csar(n, i, compute_advice(n, i))
    if name == "c16-crar":
        n, i = int_param("n"), int_param("i")
        return c16_crar(n, i, compute_advice(n, i))
    if name == "c26-csar":
        return c26_csar(int_param("n"))
    if name == "reversible":
        if "file" not in params:
            raise ValueError("builtin reversible needs parameter file=<instance>")
        with open(params["file"], encoding="utf-8") as handle:
            instance = model.parse_instance(handle.read())
        return reversible_csar(instance, delay_budget=int_param("k", 1))
    raise ValueError(f"unknown builtin representation: {name}")
