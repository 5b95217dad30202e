"""Fixed double enumeration of three-literal clauses and clause-subset
instances, with a brute-force satisfiability oracle.

Clauses over variables x_1..x_n use exactly three pairwise-distinct
variables, stored in ascending variable order.  The clause enumeration is
deterministic and polynomial-time computable: variable triples (i, j, k)
with i < j < k in lexicographic order; within a triple, the eight polarity
combinations ordered by the 3-bit number whose bit b, when set, negates
the (b+1)-th variable of the triple.  Clause j of the enumeration is
1-indexed.

An instance is the pair (n, mask): bit j-1 of ``mask`` enables clause j,
so mask 0 is the empty (trivially satisfiable) clause set.  Assignments
are int bitmasks with bit k-1 holding the value of x_k.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import CapExceededError, IndexOutOfRangeError

Assignment = int

DEFAULT_SAT_CAP = 24


@dataclass(frozen=True)
class Clause:
    """Three literals as (variable, negated) pairs, variables ascending."""

    literals: tuple[tuple[int, bool], tuple[int, bool], tuple[int, bool]]

    def __post_init__(self):
        vs = [v for v, _ in self.literals]
        if len(set(vs)) != 3 or sorted(vs) != vs or min(vs) < 1:
            raise ValueError(f"clause needs three distinct ascending variables: {vs}")

    def satisfied_by(self, assignment: Assignment) -> bool:
        return any(
            bool((assignment >> (v - 1)) & 1) != negated for v, negated in self.literals
        )


def clause_count(n: int) -> int:
    """m(n): number of clauses in the enumeration over n variables."""
    return 8 * math.comb(n, 3) if n >= 3 else 0


def enumerate_clauses(n: int) -> list[Clause]:
    """The full clause enumeration c_1 .. c_m(n), in order."""
    if n < 0:
        raise ValueError("variable count must be nonnegative")
    clauses = []
    for triple in itertools.combinations(range(1, n + 1), 3):
        for polarity in range(8):
            clauses.append(
                Clause(tuple((v, bool((polarity >> b) & 1)) for b, v in enumerate(triple)))
            )
    return clauses


@dataclass(frozen=True)
class ThreeSatInstance:
    """Clause-subset instance: n variables, enabled-clause bitmask."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << clause_count(self.n)):
            raise IndexOutOfRangeError(
                f"mask {self.mask} out of range for n={self.n}"
            )

    def enabled(self, j: int) -> bool:
        """Whether clause j (1-indexed) is part of the instance."""
        return bool((self.mask >> (j - 1)) & 1)

    def enabled_indices(self) -> list[int]:
        return [j for j in range(1, clause_count(self.n) + 1) if self.enabled(j)]


def instance_from_index(n: int, i: int) -> ThreeSatInstance:
    """The i-th clause subset over n variables (bitmask convention)."""
    return ThreeSatInstance(n, i)


def index_from_instance(inst: ThreeSatInstance) -> int:
    return inst.mask


def enabled_atoms(n: int, i: int) -> set[int]:
    """Indices j of the enabling atoms seeded true for subset i."""
    return set(instance_from_index(n, i).enabled_indices())


def satisfies_all(inst: ThreeSatInstance, assignment: Assignment, clauses=None) -> bool:
    """True iff the assignment satisfies every enabled clause."""
    if clauses is None:
        clauses = enumerate_clauses(inst.n)
    return all(
        clauses[j - 1].satisfied_by(assignment) for j in inst.enabled_indices()
    )


def is_satisfiable(
    inst: ThreeSatInstance, cap: int = DEFAULT_SAT_CAP
) -> tuple[bool, Assignment | None]:
    """Exhaustive satisfiability check over all 2^n assignments.

    Returns (True, witness) with the numerically smallest satisfying
    assignment, or (False, None).
    """
    if inst.n > cap:
        raise CapExceededError(cap, "assignment enumeration width")
    clauses = enumerate_clauses(inst.n)
    enabled = [clauses[j - 1] for j in inst.enabled_indices()]
    for assignment in range(1 << inst.n):
        if all(c.satisfied_by(assignment) for c in enabled):
            return True, assignment
    return False, None
