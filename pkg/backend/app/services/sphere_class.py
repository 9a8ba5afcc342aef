"""
Edge-weight classes in pi_2(M) = H_2 of the universal cover.

A class is a finitely supported integer weight on the edges of the Cayley
tree of F_k; each edge carries the sphere dual to it. This module holds the
class arithmetic, the deck action, support hulls and the signed
intersection number of a proper path (given by its pair of ends, proxied by
two hull boundary vertices) with a class.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, FrozenSet, List, Mapping, NamedTuple, Sequence, Tuple

from app.core.errors import EmptySupport, IntersectionOverflow, LetterOutOfRange, RankMismatch, ZeroClass
from app.core.logging import get_logger
from app.services.free_group import (
    GeodesicStep,
    Letter,
    Rank,
    ReducedWord,
    geodesic,
    identity,
    multiply,
)

logger = get_logger(__name__)

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


def checked(value: int) -> int:
    """Return ``value`` if it fits a signed 64-bit integer, else raise."""
    if value < INT64_MIN or value > INT64_MAX:
        raise IntersectionOverflow(f"integer {value} exceeds the signed 64-bit range")
    return value


class CanonicalEdge(NamedTuple):
    """The unoriented tree edge between ``base`` and ``base * x_gen``."""

    base: ReducedWord
    gen: int

    @property
    def head(self) -> ReducedWord:
        return self.base.append(self.gen)

    def key(self) -> Tuple:
        return (self.base.key(), self.gen)

    def __str__(self) -> str:
        return f"({self.base}, x{self.gen})"


def canonical_edge(source: ReducedWord, letter: Letter) -> Tuple[CanonicalEdge, int]:
    """
    Canonical form of the edge traversed from ``source`` along ``letter``.

    Returns:
        The edge and +1 if the traversal runs from base toward base * x_gen,
        -1 otherwise

    Raises:
        LetterOutOfRange: If the letter is not a generator or inverse
    """
    source.rank.check_letter(letter)
    if letter > 0:
        return CanonicalEdge(source, letter), 1
    return CanonicalEdge(source.append(letter), -letter), -1


def weight_key(weight: int) -> Tuple[int, bool]:
    return (abs(weight), weight < 0)


class SphereClass:
    """
    A finitely supported weight system on canonical edges.

    Zero weights are never stored; equality is structural equality of the
    weight collections. Instances are immutable.
    """

    __slots__ = ("_rank", "_weights", "_hash")

    def __init__(self, rank: Rank, weights: Mapping[CanonicalEdge, int] = ()):
        rank = rank if isinstance(rank, Rank) else Rank(rank)
        stored: Dict[CanonicalEdge, int] = {}
        for edge, weight in dict(weights).items():
            if edge.base.rank != rank:
                raise RankMismatch(rank.k, edge.base.rank.k)
            if not 1 <= edge.gen <= rank.k:
                raise LetterOutOfRange(edge.gen, rank.k)
            if weight:
                stored[edge] = checked(int(weight))
        self._rank = rank
        self._weights = stored
        self._hash = None

    @property
    def rank(self) -> Rank:
        return self._rank

    @property
    def weights(self) -> Mapping[CanonicalEdge, int]:
        return MappingProxyType(self._weights)

    @property
    def support(self) -> List[CanonicalEdge]:
        return sorted(self._weights, key=CanonicalEdge.key)

    @property
    def support_size(self) -> int:
        return len(self._weights)

    @property
    def is_zero(self) -> bool:
        return not self._weights

    def weight(self, edge: CanonicalEdge) -> int:
        return self._weights.get(edge, 0)

    def items(self) -> List[Tuple[CanonicalEdge, int]]:
        return [(edge, self._weights[edge]) for edge in self.support]

    def key(self) -> Tuple:
        """Order used for every canonical choice among classes."""
        return tuple((edge.key(), weight_key(w)) for edge, w in self.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SphereClass):
            return NotImplemented
        return self._rank == other._rank and self._weights == other._weights

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._rank, frozenset(self._weights.items())))
        return self._hash

    def __neg__(self) -> "SphereClass":
        return negate(self)

    def __add__(self, other: "SphereClass") -> "SphereClass":
        return add(self, other)

    def __rmul__(self, n: int) -> "SphereClass":
        return scale(n, self)

    def __repr__(self) -> str:
        body = ", ".join(f"{edge}: {w}" for edge, w in self.items())
        return f"SphereClass(k={self._rank.k}, {{{body}}})"


def check_rank(a: Rank, b: Rank) -> None:
    if a != b:
        raise RankMismatch(a.k, b.k)


def translate(g: ReducedWord, a: SphereClass) -> SphereClass:
    """Deck action: the weight of (v, i) in g*A is the weight of (g^-1 v, i) in A."""
    check_rank(g.rank, a.rank)
    if g.is_identity:
        return a
    return SphereClass(a.rank, {CanonicalEdge(multiply(g, e.base), e.gen): w for e, w in a.weights.items()})


def negate(a: SphereClass) -> SphereClass:
    return SphereClass(a.rank, {e: -w for e, w in a.weights.items()})


def add(a: SphereClass, b: SphereClass) -> SphereClass:
    check_rank(a.rank, b.rank)
    merged = dict(a.weights)
    for e, w in b.weights.items():
        merged[e] = checked(merged.get(e, 0) + w)
    return SphereClass(a.rank, merged)


def scale(n: int, a: SphereClass) -> SphereClass:
    return SphereClass(a.rank, {e: checked(n * w) for e, w in a.weights.items()})


def is_dependent(a: SphereClass, b: SphereClass) -> bool:
    """True when B = A or B = -A."""
    return a == b or a == negate(b)


@dataclass(frozen=True)
class SupportHull:
    """
    Minimal subtree spanning the support of one or more classes.

    ``boundary`` holds the vertices with an escaping tree edge, i.e. whose
    degree inside the hull is below 2k.
    """

    rank: Rank
    vertices: FrozenSet[ReducedWord]
    edges: FrozenSet[CanonicalEdge]
    boundary: FrozenSet[ReducedWord]
    _adjacency: Dict[ReducedWord, Tuple[Tuple[Letter, ReducedWord], ...]] = field(
        default=None, compare=False, repr=False
    )

    @property
    def root(self) -> ReducedWord:
        return min(self.vertices, key=ReducedWord.key)

    def sorted_vertices(self) -> List[ReducedWord]:
        return sorted(self.vertices, key=ReducedWord.key)

    def sorted_boundary(self) -> List[ReducedWord]:
        return sorted(self.boundary, key=ReducedWord.key)

    def neighbours(self, v: ReducedWord) -> Tuple[Tuple[Letter, ReducedWord], ...]:
        """Hull neighbours of ``v`` as (letter, vertex) pairs in letter order."""
        return self.adjacency[v]

    @property
    def adjacency(self) -> Dict[ReducedWord, Tuple[Tuple[Letter, ReducedWord], ...]]:
        if self._adjacency is None:
            adjacency = {}
            for v in self.vertices:
                adjacency[v] = tuple(
                    (letter, v.append(letter)) for letter in self.rank.letters() if v.append(letter) in self.vertices
                )
            object.__setattr__(self, "_adjacency", adjacency)
        return self._adjacency

    def eccentricity(self, start: ReducedWord) -> Tuple[ReducedWord, int]:
        far, depth = start, 0
        for v, d in _bfs(self, start):
            if d > depth:
                far, depth = v, d
        return far, depth

    def diameter(self) -> int:
        """Length of the longest geodesic inside the hull."""
        far, _ = self.eccentricity(self.root)
        _, diameter = self.eccentricity(far)
        return diameter


def _bfs(h: SupportHull, start: ReducedWord):
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        v, d = queue.popleft()
        yield v, d
        for _, w in h.neighbours(v):
            if w not in seen:
                seen.add(w)
                queue.append((w, d + 1))


def hull(classes: Sequence[SphereClass]) -> SupportHull:
    """
    Minimal subtree containing the support of every class.

    The subtree is the union of the geodesics from the least support
    endpoint to every other support endpoint.

    Raises:
        EmptySupport: If every class is zero
        RankMismatch: If the classes live over different ranks
    """
    if not classes:
        raise EmptySupport("hull needs at least one class")
    rank = classes[0].rank
    endpoints = set()
    for a in classes:
        check_rank(rank, a.rank)
        for e in a.weights:
            endpoints.add(e.base)
            endpoints.add(e.head)
    if not endpoints:
        raise EmptySupport("every class has empty support")

    root = min(endpoints, key=ReducedWord.key)
    vertices = {root}
    edges = set()
    for v in endpoints:
        for step in geodesic(root, v):
            vertices.add(step.target)
            edges.add(canonical_edge(step.source, step.letter)[0])

    degree = {v: 0 for v in vertices}
    for e in edges:
        degree[e.base] += 1
        degree[e.head] += 1
    boundary = frozenset(v for v, d in degree.items() if d < rank.degree)
    logger.debug("hull built", vertices=len(vertices), boundary=len(boundary))
    return SupportHull(rank, frozenset(vertices), frozenset(edges), boundary)


class EndPair(NamedTuple):
    """Finite proxy of a proper path: its two ends, as hull boundary vertices."""

    source: ReducedWord
    target: ReducedWord

    def reversed(self) -> "EndPair":
        return EndPair(self.target, self.source)

    def key(self) -> Tuple:
        return (self.source.key(), self.target.key())


def step_value(step: GeodesicStep, a: SphereClass) -> int:
    """Signed weight picked up by one edge traversal."""
    edge, sign = canonical_edge(step.source, step.letter)
    return sign * a.weight(edge)


def pair_intersection_number(c: EndPair, a: SphereClass) -> int:
    """
    Algebraic intersection number of the proper path ``c`` with ``A``.

    Computed as the signed weight sum along the tree geodesic from source
    to target; crossing an edge from base toward base * x_gen counts +weight.

    Raises:
        IntersectionOverflow: If the running sum leaves the 64-bit range
    """
    check_rank(c.source.rank, a.rank)
    total = 0
    for step in geodesic(c.source, c.target):
        total = checked(total + step_value(step, a))
    return total


def potential(a: SphereClass, h: SupportHull) -> Dict[ReducedWord, int]:
    """
    ``pair_intersection_number((h.root, v), A)`` for every hull vertex v.

    By additivity the value of any pair (u, v) is ``phi[v] - phi[u]``.
    """
    check_rank(h.rank, a.rank)
    root = h.root
    phi = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for letter, w in h.neighbours(v):
            if w not in phi:
                phi[w] = checked(phi[v] + step_value(GeodesicStep(v, letter), a))
                queue.append(w)
    return phi


def is_null_homologous(a: SphereClass) -> bool:
    """
    True iff every end pair meets ``A`` with intersection number 0.

    Such a weight system is a finite sum of vertex stars and represents the
    zero class in homology.
    """
    if a.is_zero:
        return True
    h = hull([a])
    phi = potential(a, h)
    return len({phi[v] for v in h.boundary}) == 1


def _branch_values(
    h: SupportHull, phi: Dict[ReducedWord, int]
) -> Dict[Tuple[ReducedWord, ReducedWord], FrozenSet[int]]:
    """End values seen beyond ``w`` when leaving ``v``, for every directed hull edge (v, w)."""
    escaping = {v: frozenset({phi[v]}) if v in h.boundary else frozenset() for v in h.vertices}
    order = [v for v, _ in _bfs(h, h.root)]
    parent: Dict[ReducedWord, ReducedWord] = {}
    children: Dict[ReducedWord, List[ReducedWord]] = {v: [] for v in order}
    for v in order:
        for _, w in h.neighbours(v):
            if w != h.root and w not in parent:
                parent[w] = v
                children[v].append(w)

    down: Dict[ReducedWord, FrozenSet[int]] = {}
    for v in reversed(order):
        down[v] = escaping[v].union(*(down[c] for c in children[v]))
    up: Dict[ReducedWord, FrozenSet[int]] = {h.root: frozenset()}
    for v in order:
        for c in children[v]:
            up[c] = escaping[v].union(up[v], *(down[s] for s in children[v] if s != c))

    beyond = {}
    for c, v in parent.items():
        beyond[v, c] = down[c]
        beyond[c, v] = up[c]
    return beyond


def _settled_value(around: List[FrozenSet[int]]) -> int:
    for i in range(len(around)):
        rest = frozenset().union(*(values for j, values in enumerate(around) if j != i))
        if len(rest) == 1:
            return next(iter(rest))
    constant = Counter(next(iter(values)) for values in around if len(values) == 1)
    if constant:
        return min(constant, key=lambda c: (-constant[c], c))
    return min(frozenset().union(*around))


def homology_representative(a: SphereClass) -> SphereClass:
    """
    Canonical weight system for the homology class of ``A``.

    Weight systems that differ by vertex stars give every end pair the same
    intersection number and map to the same representative. A hull vertex
    lying in a half-tree whose ends all carry one value takes that value;
    any other hull vertex takes the most frequent value among its constant
    branches, the smallest on ties. The result commutes with translation
    when k >= 2. For k = 1 every class is a multiple of the edge at the
    identity.

    Raises:
        ZeroClass: If A is zero in homology
    """
    if is_null_homologous(a):
        raise ZeroClass("the class is zero in homology")
    rank = a.rank
    if rank.k == 1:
        return SphereClass(rank, {CanonicalEdge(identity(rank), 1): checked(sum(a.weights.values()))})

    h = hull([a])
    phi = potential(a, h)
    beyond = _branch_values(h, phi)
    settled = {}
    for v in h.vertices:
        around = [beyond[v, w] for _, w in h.neighbours(v)]
        around += [frozenset({phi[v]})] * (rank.degree - len(around))
        settled[v] = _settled_value(around)

    weights = {e: settled[e.head] - settled[e.base] for e in h.edges}
    for b in h.boundary:
        shift = phi[b] - settled[b]
        if not shift:
            continue
        inside = {letter for letter, _ in h.neighbours(b)}
        for letter in rank.letters():
            if letter not in inside:
                edge, sign = canonical_edge(b, letter)
                weights[edge] = sign * shift
    return SphereClass(rank, {e: checked(w) for e, w in weights.items()})


def value(u: ReducedWord, v: ReducedWord, a: SphereClass) -> int:
    return pair_intersection_number(EndPair(u, v), a)
