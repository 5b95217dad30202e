"""Ground propositional planning: atoms, literal sets, states, actions,
plan execution and validation, plus the whitespace-tokenized text formats
for instances and plans.

A state over a frame with k declared atoms is an int bitmask: bit i holds
the truth value of the atom declared at position i.  Updating a state with
a literal set computes ``(state - negatives) | positives``.  All types are
immutable after construction and all operations are pure functions, so
values can be shared freely across threads.

Plan positions are 1-indexed everywhere; the state trace produced by
:func:`validate_plan` is 0-indexed with ``states[0]`` the initial state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import FormatError, NotApplicableError, UnknownActionError

State = int


class Atom(NamedTuple):
    """Declared atom: dense id (its position in the frame) plus name."""

    id: int
    name: str


@dataclass(frozen=True)
class LiteralSet:
    """Consistent set of literals as positive/negative atom bitmasks."""

    pos: State = 0
    neg: State = 0

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError(
                f"inconsistent literal set: atoms {list(_bits(self.pos & self.neg))} "
                "appear both positive and negative"
            )
        if self.pos < 0 or self.neg < 0:
            raise ValueError("literal masks must be nonnegative")

    @property
    def atoms(self) -> State:
        """Bitmask of all atoms mentioned, in either polarity."""
        return self.pos | self.neg

    def __len__(self) -> int:
        return (self.pos | self.neg).bit_count()


@dataclass(frozen=True)
class StripsAction:
    """Named action with consistent literal-set pre- and postcondition."""

    name: str
    pre: LiteralSet
    post: LiteralSet


class StripsInstance:
    """Ground planning instance: atom list, actions, initial state, goal.

    The atom declaration order fixes the bit layout of every state and
    literal set of the instance.
    """

    def __init__(
        self,
        atoms: Sequence[str],
        actions: Sequence[StripsAction],
        init: State,
        goal: LiteralSet,
    ):
        self.atoms: tuple[str, ...] = tuple(atoms)
        self.actions: tuple[StripsAction, ...] = tuple(actions)
        self.init: State = init
        self.goal: LiteralSet = goal
        self.n_atoms: int = len(self.atoms)
        self.full_mask: State = (1 << self.n_atoms) - 1

        self.index: dict[str, int] = {}
        for i, name in enumerate(self.atoms):
            _check_token(name, "atom")
            if name in self.index:
                raise ValueError(f"duplicate atom name: {name}")
            self.index[name] = i

        self.action_index: dict[str, StripsAction] = {}
        for a in self.actions:
            _check_token(a.name, "action")
            if a.name in self.action_index:
                raise ValueError(f"duplicate action name: {a.name}")
            if (a.pre.atoms | a.post.atoms) & ~self.full_mask:
                raise ValueError(f"action {a.name} references undeclared atoms")
            self.action_index[a.name] = a

        if init & ~self.full_mask:
            raise ValueError("initial state references undeclared atoms")
        if goal.atoms & ~self.full_mask:
            raise ValueError("goal references undeclared atoms")

    @property
    def atom_list(self) -> tuple[Atom, ...]:
        return tuple(Atom(i, name) for i, name in enumerate(self.atoms))

    def action(self, name: str) -> StripsAction:
        try:
            return self.action_index[name]
        except KeyError:
            raise UnknownActionError(name) from None

    def state(self, *names: str) -> State:
        """Bitmask of the state in which exactly the named atoms hold."""
        mask = 0
        for name in names:
            mask |= 1 << self._atom_id(name)
        return mask

    def literals(self, *tokens: str) -> LiteralSet:
        """Literal set from tokens; a ``!`` prefix negates."""
        pos = neg = 0
        for tok in tokens:
            if tok.startswith("!"):
                neg |= 1 << self._atom_id(tok[1:])
            else:
                pos |= 1 << self._atom_id(tok)
        return LiteralSet(pos, neg)

    def atom_names(self, mask: State) -> tuple[str, ...]:
        return tuple(self.atoms[i] for i in _bits(mask))

    def _atom_id(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ValueError(f"undeclared atom: {name}") from None


@dataclass(frozen=True)
class PlanTrace:
    """States visited while executing a plan.

    When ``valid``, ``states`` has one entry per plan position plus the
    initial state and ``failure_step`` is None.  Otherwise ``states``
    covers the prefix up to the last state reached and ``failure_step``
    is the 1-indexed position of the violating action; a plan whose final
    state misses the goal reports position ``len(plan) + 1``.
    """

    states: tuple[State, ...]
    valid: bool
    failure_step: int | None = None


def apply_update(s: State, y: LiteralSet) -> State:
    """Revise state ``s`` with literal set ``y``: clear its negatives,
    set its positives."""
    return (s & ~y.neg) | y.pos


def satisfies(s: State, y: LiteralSet) -> bool:
    """True iff every positive of ``y`` holds in ``s`` and no negative does."""
    return (s & y.pos) == y.pos and (s & y.neg) == 0


def action_applicable(s: State, a: StripsAction) -> bool:
    """True iff ``s`` satisfies the precondition of ``a``."""
    return (s & a.pre.pos) == a.pre.pos and (s & a.pre.neg) == 0


def step(s: State, a: StripsAction) -> State:
    """Apply ``a`` to ``s``; raises NotApplicableError on a violated
    precondition, listing the offending atom ids."""
    if not action_applicable(s, a):
        missing = tuple(_bits(a.pre.pos & ~s))
        forbidden = tuple(_bits(a.pre.neg & s))
        raise NotApplicableError(a.name, missing, forbidden)
    return apply_update(s, a.post)


def validate_plan(p: StripsInstance, plan: Sequence[str]) -> PlanTrace:
    """Execute ``plan`` from the initial state of ``p``.

    The plan is valid iff every action is applicable in turn and the final
    state satisfies the goal.  Unresolvable action names raise
    UnknownActionError.
    """
    s = p.init
    states = [s]
    for pos, name in enumerate(plan, start=1):
        a = p.action(name)
        if not action_applicable(s, a):
            return PlanTrace(tuple(states), False, pos)
        s = apply_update(s, a.post)
        states.append(s)
    if not satisfies(s, p.goal):
        return PlanTrace(tuple(states), False, len(plan) + 1)
    return PlanTrace(tuple(states), True)


def is_unary(p: StripsInstance | Iterable[StripsAction]) -> bool:
    """True iff every action posts exactly one literal."""
    actions = p.actions if isinstance(p, StripsInstance) else p
    return all(len(a.post) == 1 for a in actions)


# ---------------------------------------------------------------------------
# Text formats.
#
# Instance files (version tag "strips v1"):
#   strips v1
#   atoms: x1 x2
#   action a1
#     pre: !x1
#     post: x1
#   init: x1
#   goal: x2 !x1
# "#" starts a comment anywhere; "!" prefixes a negated literal.
# Plan files carry one action name per line with the same comment rule.


def parse_instance(text: str) -> StripsInstance:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty instance file")
    lineno, tokens = lines[0]
    if tokens != ["strips", "v1"]:
        raise FormatError(f"line {lineno}: expected header 'strips v1'")

    atoms: list[str] | None = None
    actions: list[StripsAction] = []
    init_tokens: list[str] | None = None
    goal_tokens: list[str] | None = None

    i = 1
    while i < len(lines):
        lineno, tokens = lines[i]
        key = tokens[0]
        if key == "atoms:":
            if atoms is not None:
                raise FormatError(f"line {lineno}: duplicate atoms declaration")
            atoms = tokens[1:]
            i += 1
        elif key == "action":
            if len(tokens) != 2:
                raise FormatError(f"line {lineno}: expected 'action <name>'")
            name = tokens[1]
            pre_tokens = _expect_field(lines, i + 1, "pre:")
            post_tokens = _expect_field(lines, i + 2, "post:")
            actions.append(_build_action(name, pre_tokens, post_tokens, atoms, lineno))
            i += 3
        elif key == "init:":
            if init_tokens is not None:
                raise FormatError(f"line {lineno}: duplicate init declaration")
            init_tokens = tokens[1:]
            i += 1
        elif key == "goal:":
            if goal_tokens is not None:
                raise FormatError(f"line {lineno}: duplicate goal declaration")
            goal_tokens = tokens[1:]
            i += 1
        else:
            raise FormatError(f"line {lineno}: unexpected directive {key!r}")

    if atoms is None:
        raise FormatError("missing atoms declaration")
    if init_tokens is None:
        raise FormatError("missing init declaration")
    if goal_tokens is None:
        raise FormatError("missing goal declaration")

    index = {name: k for k, name in enumerate(atoms)}
    try:
        init = 0
        for tok in init_tokens:
            if tok.startswith("!"):
                raise FormatError("init lists atoms, not literals")
            if tok not in index:
                raise FormatError(f"init references undeclared atom {tok!r}")
            init |= 1 << index[tok]
        goal = _literals_from_tokens(goal_tokens, index)
        return StripsInstance(atoms, actions, init, goal)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def serialize_instance(p: StripsInstance) -> str:
    out = ["strips v1", "atoms: " + " ".join(p.atoms)]
    for a in p.actions:
        out.append(f"action {a.name}")
        out.append("  pre: " + _literal_tokens(a.pre, p.atoms))
        out.append("  post: " + _literal_tokens(a.post, p.atoms))
    out.append(("init: " + " ".join(p.atom_names(p.init))).rstrip())
    out.append("goal: " + _literal_tokens(p.goal, p.atoms))
    return "\n".join(out) + "\n"


def parse_plan(text: str) -> list[str]:
    plan = []
    for lineno, tokens in _content_lines(text):
        if len(tokens) != 1:
            raise FormatError(f"line {lineno}: expected one action name per line")
        plan.append(tokens[0])
    return plan


def serialize_plan(plan: Sequence[str]) -> str:
    return "".join(name + "\n" for name in plan)


def _build_action(name, pre_tokens, post_tokens, atoms, lineno):
    if atoms is None:
        raise FormatError(f"line {lineno}: action declared before atoms")
    index = {a: k for k, a in enumerate(atoms)}
    try:
        return StripsAction(
            name,
            _literals_from_tokens(pre_tokens, index),
            _literals_from_tokens(post_tokens, index),
        )
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None


def _literals_from_tokens(tokens: list[str], index: dict[str, int]) -> LiteralSet:
    pos = neg = 0
    for tok in tokens:
        negated = tok.startswith("!")
        name = tok[1:] if negated else tok
        if name not in index:
            raise ValueError(f"undeclared atom: {name}")
        bit = 1 << index[name]
        if negated:
            neg |= bit
        else:
            pos |= bit
    return LiteralSet(pos, neg)


def _literal_tokens(y: LiteralSet, atoms: tuple[str, ...]) -> str:
    toks = []
    for i in _bits(y.pos | y.neg):
        toks.append(atoms[i] if (y.pos >> i) & 1 else "!" + atoms[i])
    return " ".join(toks)


def _expect_field(lines, i, key):
    if i >= len(lines) or lines[i][1][0] != key:
        where = f"line {lines[i][0]}" if i < len(lines) else "end of file"
        raise FormatError(f"{where}: expected '{key}' line")
    return lines[i][1][1:]


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    """Non-blank lines as (line number, tokens), comments stripped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if tokens:
            out.append((lineno, tokens))
    return out


def _check_token(name: str, kind: str) -> None:
    if not name or name.startswith("!") or any(c.isspace() for c in name) or "#" in name:
        raise ValueError(f"invalid {kind} name: {name!r}")


def _bits(mask: int):
    """Ascending indices of the set bits of ``mask``."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1
