"""Brute-force ground truth: breadth-first optimal planning, optimal-plan
counting, and atom-dependency graph analysis.

These oracles certify desk-scale claims only; they enumerate states
explicitly, take hard exploration caps, and break ties by action
declaration order so results are reproducible byte for byte.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ExplorationCapExceededError
from .ffp import DEFAULT_EDGE_CAP, DEFAULT_STATE_CAP, FfpInstance, ground_view
from .model import StripsInstance


@dataclass(frozen=True)
class SearchResult:
    """Outcome of an optimal-plan search; ``plan`` is None when the
    instance is unsolvable."""

    plan: list[str] | None
    optimal_length: int | None
    states_expanded: int


def bfs_solve(
    p: StripsInstance | FfpInstance,
    state_cap: int = DEFAULT_STATE_CAP,
    edge_cap: int = DEFAULT_EDGE_CAP,
) -> SearchResult:
    """Breadth-first search from the initial state; returns a shortest
    plan with deterministic tie-breaking (queue order, then action
    declaration order)."""
    view = ground_view(p)
    if view.is_goal(view.init):
        return SearchResult([], 0, 0)
    parents: dict = {view.init: None}
    queue = deque([view.init])
    expanded = 0
    edges = 0
    while queue:
        s = queue.popleft()
        expanded += 1
        if expanded > state_cap:
            raise ExplorationCapExceededError(state_cap, "state")
        for name, applicable, successor in view.actions:
            if not applicable(s):
                continue
            edges += 1
            if edges > edge_cap:
                raise ExplorationCapExceededError(edge_cap, "edge")
            t = successor(s)
            if t in parents:
                continue
            parents[t] = (s, name)
            if view.is_goal(t):
                plan: list[str] = []
                node = t
                while parents[node] is not None:
                    node, action = parents[node]
                    plan.append(action)
                plan.reverse()
                return SearchResult(plan, len(plan), expanded)
            queue.append(t)
    return SearchResult(None, None, expanded)


def optplan_length(
    p: StripsInstance | FfpInstance,
    s=None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> int | None:
    """Length of the shortest plan from state ``s`` (default: the initial
    state) to the goal, or None when unreachable.  Results are memoized on
    the instance object for reuse across calls."""
    view = ground_view(p)
    if s is None:
        s = view.init
    memo = getattr(p, "_optplan_memo", None)
    if memo is None:
        memo = {}
        object.__setattr__(p, "_optplan_memo", memo)
    if s in memo:
        return memo[s]
    if view.is_goal(s):
        memo[s] = 0
        return 0
    dist = {s: 0}
    queue = deque([s])
    answer: int | None = None
    while queue:
        u = queue.popleft()
        if len(dist) > state_cap:
            raise ExplorationCapExceededError(state_cap, "state")
        for name, applicable, successor in view.actions:
            if not applicable(u):
                continue
            t = successor(u)
            if t in dist:
                continue
            dist[t] = dist[u] + 1
            if view.is_goal(t):
                answer = dist[t]
                queue.clear()
                break
            queue.append(t)
    memo[s] = answer
    return answer


def count_optimal_plans(
    p: StripsInstance | FfpInstance,
    state_cap: int = DEFAULT_STATE_CAP,
    edge_cap: int = DEFAULT_EDGE_CAP,
) -> int:
    """Number of distinct optimal action sequences, counted by dynamic
    programming over the breadth-first layering.

    Sequences are counted, not state paths: distinct actions between the
    same state pair multiply the count.  Unsolvable instances count 0; an
    initial state already satisfying the goal counts the empty plan.
    """
    view = ground_view(p)
    dist: dict = {view.init: 0}
    queue = deque([view.init])
    expanded = 0
    edges = 0
    while queue:
        s = queue.popleft()
        expanded += 1
        if expanded > state_cap:
            raise ExplorationCapExceededError(state_cap, "state")
        for name, applicable, successor in view.actions:
            if not applicable(s):
                continue
            edges += 1
            if edges > edge_cap:
                raise ExplorationCapExceededError(edge_cap, "edge")
            t = successor(s)
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)

    goal_depths = [d for s, d in dist.items() if view.is_goal(s)]
    if not goal_depths:
        return 0
    optimum = min(goal_depths)

    by_depth: dict[int, list] = {}
    for s, d in dist.items():
        if d <= optimum:
            by_depth.setdefault(d, []).append(s)
    counts: dict = {view.init: 1}
    for d in range(optimum):
        for s in by_depth.get(d, ()):
            c = counts.get(s)
            if not c:
                continue
            for name, applicable, successor in view.actions:
                if not applicable(s):
                    continue
                t = successor(s)
                if dist[t] == d + 1:
                    counts[t] = counts.get(t, 0) + c
    return sum(counts.get(s, 0) for s in by_depth.get(optimum, ()) if view.is_goal(s))


# ---------------------------------------------------------------------------
# Atom-dependency graphs


@dataclass(frozen=True)
class CausalGraph:
    """Directed atom-dependency graph over a frame; nodes are the frame's
    atom names in declaration order, edges are (source id, target id)."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    refined: bool

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def causal_graph(p: StripsInstance) -> CausalGraph:
    """Edge u -> v whenever some action mentions u in its precondition or
    postcondition and writes v (u != v)."""
    edges = set()
    for a in p.actions:
        pre_atoms = a.pre.atoms
        post_atoms = a.post.atoms
        for u in _bit_indices(pre_atoms | post_atoms):
            for v in _bit_indices(post_atoms):
                if u != v:
                    edges.add((u, v))
    return CausalGraph(p.atoms, frozenset(edges), refined=False)


def refined_causal_graph(p: StripsInstance) -> CausalGraph:
    """Refined dependency graph: a read-only precondition atom points at
    every written atom, and two co-written atoms u, v connect only when
    some action writes u without v (or no action writes v without u)."""
    post_masks = [a.post.atoms for a in p.actions]
    edges = set()
    for a in p.actions:
        pre_only = a.pre.atoms & ~a.post.atoms
        post_atoms = a.post.atoms
        for u in _bit_indices(pre_only):
            for v in _bit_indices(post_atoms):
                if u != v:
                    edges.add((u, v))
        for u in _bit_indices(post_atoms):
            for v in _bit_indices(post_atoms):
                if u == v or (u, v) in edges:
                    continue
                u_bit, v_bit = 1 << u, 1 << v
                writes_u_not_v = any(
                    (mask & u_bit) and not (mask & v_bit) for mask in post_masks
                )
                writes_v_not_u = any(
                    (mask & v_bit) and not (mask & u_bit) for mask in post_masks
                )
                if writes_u_not_v or not writes_v_not_u:
                    edges.add((u, v))
    return CausalGraph(p.atoms, frozenset(edges), refined=True)


def scc_and_acyclicity(g: CausalGraph) -> tuple[tuple[tuple[int, ...], ...], bool]:
    """Strongly connected components (sorted members, components ordered
    by smallest member) and whether the graph is acyclic.

    Only atoms that touch an edge become component members; the graphs
    here never carry self-loops, so acyclicity is every component being a
    singleton.
    """
    adjacency: dict[int, list[int]] = {}
    nodes = set()
    for u, v in sorted(g.edges):
        adjacency.setdefault(u, []).append(v)
        nodes.add(u)
        nodes.add(v)

    index_of: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[tuple[int, ...]] = []
    counter = 0

    for root in sorted(nodes):
        if root in index_of:
            continue
        work = [(root, iter(adjacency.get(root, ())))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index_of:
                    index_of[child] = lowlink[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(adjacency.get(child, ()))))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index_of[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index_of[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(tuple(sorted(component)))

    components.sort(key=lambda c: c[0])
    acyclic = all(len(c) == 1 for c in components)
    return tuple(components), acyclic


def _bit_indices(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1
