"""Finite-domain planning with evaluable conditions.

Variables range over ``0 .. domain_size - 1`` and a state is a tuple of
values in declaration order.  Action preconditions, postconditions, and
the goal are arbitrary pure Python callables over states; ``step_budget``
records the evaluation cost ceiling a condition is expected to respect
(it is metadata, not enforced, since the host language cannot meter
arbitrary callables).

The module also provides the adapter from ground STRIPS instances to the
binary-domain functional view, and the exhaustive determinism and
reversibility checks.  Both checks take an explicit exploration cap and
fail loudly rather than truncating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from . import model
from .errors import ExplorationCapExceededError
from .model import StripsInstance

FfpState = tuple[int, ...]

DEFAULT_STATE_CAP = 1 << 24
DEFAULT_EDGE_CAP = 1 << 26
DEFAULT_STEP_BUDGET = 1 << 20


@dataclass(frozen=True)
class FfpAction:
    name: str
    pre: Callable[[FfpState], bool]
    post: Callable[[FfpState], FfpState]


@dataclass(frozen=True)
class FfpInstance:
    variables: tuple[tuple[str, int], ...]  # (name, domain size)
    actions: tuple[FfpAction, ...]
    init: FfpState
    goal: Callable[[FfpState], bool]
    step_budget: int = DEFAULT_STEP_BUDGET

    def __post_init__(self):
        if len(self.init) != len(self.variables):
            raise ValueError("initial state width does not match variable count")
        for value, (name, size) in zip(self.init, self.variables):
            if not 0 <= value < size:
                raise ValueError(f"initial value {value} outside domain of {name}")


def strips_to_ffp(p: StripsInstance) -> FfpInstance:
    """Binary-domain functional view agreeing with the ground semantics of
    ``p`` on every state: applicability, successors, and the goal test all
    coincide under the bitmask/tuple correspondence."""
    n = p.n_atoms

    def to_mask(t: FfpState) -> int:
        mask = 0
        for i, v in enumerate(t):
            if v:
                mask |= 1 << i
        return mask

    def to_tuple(mask: int) -> FfpState:
        return tuple((mask >> i) & 1 for i in range(n))

    def make_pre(action):
        def pre(t: FfpState) -> bool:
            return model.action_applicable(to_mask(t), action)

        return pre

    def make_post(action):
        def post(t: FfpState) -> FfpState:
            return to_tuple(model.apply_update(to_mask(t), action.post))

        return post

    actions = tuple(FfpAction(a.name, make_pre(a), make_post(a)) for a in p.actions)
    goal = p.goal

    def goal_fn(t: FfpState) -> bool:
        return model.satisfies(to_mask(t), goal)

    variables = tuple((name, 2) for name in p.atoms)
    budget = 4 * (n + len(p.actions) + 1)  # linear work per condition call
    return FfpInstance(variables, actions, to_tuple(p.init), goal_fn, budget)


class GroundView:
    """Uniform grounded interface over STRIPS and functional instances.

    Exposes hashable states, the initial state, a goal test, and per-action
    (name, applicable, successor) triples in declaration order, which is
    all the search oracles and representation builders need.
    """

    def __init__(self, init, is_goal, actions, enum_states, space_size):
        self.init = init
        self.is_goal = is_goal
        self.actions: list[tuple[str, Callable, Callable]] = actions
        self._enum_states = enum_states
        self.space_size = space_size

    def all_states(self):
        return self._enum_states()


def ground_view(p: StripsInstance | FfpInstance) -> GroundView:
    if isinstance(p, StripsInstance):
        goal = p.goal
        actions = []
        for a in p.actions:
            actions.append(
                (
                    a.name,
                    (lambda s, pp=a.pre.pos, pn=a.pre.neg: (s & pp) == pp and (s & pn) == 0),
                    (lambda s, qp=a.post.pos, qn=a.post.neg: (s & ~qn) | qp),
                )
            )
        size = 1 << p.n_atoms
        return GroundView(
            p.init,
            lambda s: (s & goal.pos) == goal.pos and (s & goal.neg) == 0,
            actions,
            lambda: range(1 << p.n_atoms),
            size,
        )
    if isinstance(p, FfpInstance):
        actions = [(a.name, a.pre, a.post) for a in p.actions]
        domains = [range(size) for _, size in p.variables]
        size = 1
        for _, k in p.variables:
            size *= k
        return GroundView(
            p.init, p.goal, actions, lambda: itertools.product(*domains), size
        )
    raise TypeError(f"not a planning instance: {type(p).__name__}")


def is_deterministic(
    p: StripsInstance | FfpInstance, state_cap: int = DEFAULT_STATE_CAP
) -> bool:
    """True iff at most one action applies in every state reachable from
    the initial state.  Reachability is computed by explicit search."""
    view = ground_view(p)
    seen = {view.init}
    frontier = [view.init]
    while frontier:
        s = frontier.pop()
        enabled = None
        for name, applicable, successor in view.actions:
            if applicable(s):
                if enabled is not None:
                    return False
                enabled = successor(s)
        if enabled is not None and enabled not in seen:
            if len(seen) >= state_cap:
                raise ExplorationCapExceededError(state_cap, "state")
            seen.add(enabled)
            frontier.append(enabled)
    return True


def is_reversible(
    p: StripsInstance | FfpInstance, state_cap: int = DEFAULT_STATE_CAP
) -> bool:
    """True iff every transition of the frame has an inverse transition:
    whenever some action leads from s to t, some action leads from t to s.
    Checked by brute force over the full state space."""
    view = ground_view(p)
    if view.space_size > state_cap:
        raise ExplorationCapExceededError(state_cap, "state")
    for s in view.all_states():
        for name, applicable, successor in view.actions:
            if not applicable(s):
                continue
            t = successor(s)
            if t == s:
                continue
            if not any(
                back_app(t) and back_succ(t) == s
                for _, back_app, back_succ in view.actions
            ):
                return False
    return True
