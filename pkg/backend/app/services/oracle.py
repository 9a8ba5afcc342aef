"""
Brute-force validators for the decision procedures.

The decision module only looks at tree geodesics between hull boundary
vertices. The oracle instead walks every edge path inside the hull with
endpoints on its boundary, backtracking included, and evaluates the
embedding and disjointness criteria literally. The walks that feed the
criteria advance one length at a time and merge paths that reach the same
vertex with the same sums. Random classes come from a seeded generator so
any disagreement is reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from app.core.config import get_settings
from app.core.errors import BrokenPath, EmptySupport, LimitExceeded
from app.core.logging import get_logger
from app.services.decision import embeddable_in_cover
from app.services.free_group import GeodesicStep, Rank, ReducedWord, ball
from app.services.sphere_class import (
    CanonicalEdge,
    EndPair,
    SphereClass,
    SupportHull,
    checked,
    hull,
    pair_intersection_number,
    step_value,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class EdgePath:
    """A finite edge path in the tree; iterates over its steps."""

    start: ReducedWord
    steps: Tuple[GeodesicStep, ...] = ()

    def __iter__(self) -> Iterator[GeodesicStep]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> ReducedWord:
        return self.steps[-1].target if self.steps else self.start

    @property
    def endpoints(self) -> EndPair:
        return EndPair(self.start, self.end)

    def vertices(self) -> List[ReducedWord]:
        return [self.start] + [step.target for step in self.steps]


def path_intersection_sum(path: Iterable[GeodesicStep], a: SphereClass) -> int:
    """
    Signed weight sum along an arbitrary edge path, with multiplicity.

    Raises:
        BrokenPath: If a step does not start where the previous one ended
        IntersectionOverflow: If the sum leaves the 64-bit range
    """
    total = 0
    previous = None
    for i, step in enumerate(path):
        if previous is not None and step.source != previous:
            raise BrokenPath(i)
        total = checked(total + step_value(step, a))
        previous = step.target
    return total


def _check_bounds(h: SupportHull, max_len: int, limit: Optional[int]) -> None:
    if not h.vertices:
        raise EmptySupport("cannot enumerate paths in an empty hull")
    if limit is None:
        limit = get_settings().oracle_max_len_limit
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if max_len > limit:
        raise LimitExceeded(f"max_len {max_len} exceeds the configured limit {limit}")


def enumerate_paths(h: SupportHull, max_len: int, limit: Optional[int] = None) -> Iterator[EdgePath]:
    """
    Every edge path in ``h`` of length <= max_len with both ends on the boundary.

    Paths may backtrack; the length-0 path at each boundary vertex is
    included. Order is deterministic: by start vertex, then depth-first in
    letter order.

    Raises:
        EmptySupport: If the hull is empty
        LimitExceeded: If max_len exceeds the configured limit
    """
    _check_bounds(h, max_len, limit)
    for start in h.sorted_boundary():
        stack: List[Tuple[ReducedWord, Tuple[GeodesicStep, ...]]] = [(start, ())]
        while stack:
            vertex, steps = stack.pop()
            if vertex in h.boundary:
                yield EdgePath(start, steps)
            if len(steps) == max_len:
                continue
            for letter, nxt in reversed(h.neighbours(vertex)):
                stack.append((nxt, steps + (GeodesicStep(vertex, letter),)))


# (earlier trail, last step); None for the empty path
Trail = Optional[Tuple["Trail", GeodesicStep]]


@dataclass(frozen=True)
class PathFamily:
    """
    All enumerated paths sharing start, end, length and running sums.

    ``count`` is how many distinct edge paths the family stands for; one
    of them is kept as a witness.
    """

    start: ReducedWord
    end: ReducedWord
    length: int
    sums: Tuple[int, ...]
    count: int
    trail: Trail = None

    @property
    def endpoints(self) -> EndPair:
        return EndPair(self.start, self.end)

    def witness(self) -> EdgePath:
        steps = []
        trail = self.trail
        while trail is not None:
            trail, step = trail
            steps.append(step)
        return EdgePath(self.start, tuple(reversed(steps)))


def path_families(
    h: SupportHull, classes: Sequence[SphereClass], max_len: int, limit: Optional[int] = None
) -> Iterator[PathFamily]:
    """
    The paths of ``enumerate_paths``, walked one length at a time and grouped.

    Each step adds its signed weight for every class to the running sums,
    so the sums are the literal path sums. Paths that reach the same vertex
    with the same sums are merged and counted, which keeps the walk linear
    in ``max_len``.

    Raises:
        EmptySupport: If the hull is empty
        LimitExceeded: If max_len exceeds the configured limit
    """
    _check_bounds(h, max_len, limit)
    gains = {
        (v, letter): tuple(step_value(GeodesicStep(v, letter), a) for a in classes)
        for v in h.vertices
        for letter, _ in h.neighbours(v)
    }
    for start in h.sorted_boundary():
        level: Dict[Tuple[ReducedWord, Tuple[int, ...]], Tuple[int, Trail]] = {(start, (0,) * len(classes)): (1, None)}
        for length in range(max_len + 1):
            following: Dict[Tuple[ReducedWord, Tuple[int, ...]], Tuple[int, Trail]] = {}
            for (vertex, sums), (count, trail) in level.items():
                if vertex in h.boundary:
                    yield PathFamily(start, vertex, length, sums, count, trail)
                if length == max_len:
                    continue
                for letter, nxt in h.neighbours(vertex):
                    key = (nxt, tuple(checked(s + g) for s, g in zip(sums, gains[vertex, letter])))
                    if key in following:
                        seen, kept = following[key]
                        following[key] = (seen + count, kept)
                    else:
                        following[key] = (count, (trail, GeodesicStep(vertex, letter)))
            level = following


def default_max_len(h: SupportHull) -> int:
    return h.diameter() + get_settings().oracle_extra_len


def embeddable_by_paths(a: SphereClass, max_len: Optional[int] = None) -> bool:
    """Decide the cover-embedding criterion by exhausting edge paths of hull(A)."""
    h = hull([a])
    if max_len is None:
        max_len = default_max_len(h)
    return all(abs(family.sums[0]) <= 1 for family in path_families(h, [a], max_len))


def disjoint_by_paths(a: SphereClass, b: SphereClass, max_len: Optional[int] = None) -> bool:
    """Decide the cover-disjointness criterion by exhausting edge paths of the joint hull."""
    h = hull([a, b])
    if max_len is None:
        max_len = default_max_len(h)
    seen = set()
    for family in path_families(h, [a, b], max_len):
        va, vb = family.sums
        if va and vb:
            seen.add((va > 0) == (vb > 0))
            if len(seen) == 2:
                return False
    return True


@dataclass(frozen=True)
class CrossCheck:
    decision: bool
    oracle: bool
    paths: int
    path_mismatches: int
    max_len: int
    first_mismatch: Optional[EdgePath] = None

    @property
    def agree(self) -> bool:
        return self.decision == self.oracle and self.path_mismatches == 0


def cross_check(a: SphereClass, max_len: Optional[int] = None) -> CrossCheck:
    """
    Compare embeddable_in_cover with the exhaustive path criterion.

    Every enumerated path's signed sum is also compared against the
    geodesic value of its endpoints.
    """
    h = hull([a])
    if max_len is None:
        max_len = default_max_len(h)
    decision = embeddable_in_cover(a).verdict
    oracle = True
    paths = 0
    mismatches = 0
    first_mismatch = None
    geodesic_values: Dict[EndPair, int] = {}
    for family in path_families(h, [a], max_len):
        paths += family.count
        (total,) = family.sums
        if abs(total) > 1:
            oracle = False
        pair = family.endpoints
        if pair not in geodesic_values:
            geodesic_values[pair] = pair_intersection_number(pair, a)
        if total != geodesic_values[pair]:
            mismatches += family.count
            if first_mismatch is None:
                first_mismatch = family.witness()
    logger.debug("cross check", paths=paths, decision=decision, oracle=oracle, mismatches=mismatches)
    return CrossCheck(decision, oracle, paths, mismatches, max_len, first_mismatch)


def random_class(rank, support_bound: int, radius: int, weight_bound: int, seed: int) -> SphereClass:
    """
    Seeded random class.

    Draws between 1 and ``support_bound`` edges whose base lies in the ball
    of the given radius about the identity, each with a nonzero weight of
    absolute value at most ``weight_bound``. Repeated draws of one edge
    keep the last weight, so the support may be smaller than drawn.
    """
    rank = rank if isinstance(rank, Rank) else Rank(rank)
    if support_bound < 1 or radius < 0 or weight_bound < 1:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    bases = list(ball(rank, radius))
    weights = [w for w in range(-weight_bound, weight_bound + 1) if w]
    edges = {}
    for _ in range(rng.randint(1, support_bound)):
        edge = CanonicalEdge(rng.choice(bases), rng.randint(1, rank.k))
        edges[edge] = rng.choice(weights)
    return SphereClass(rank, edges)
