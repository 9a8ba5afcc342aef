"""
Decision procedures with certificates.

Four questions about classes in pi_2(M), M = #_k S^2 x S^1:

- ``embeddable_in_cover``: is A carried by an embedded sphere in the
  universal cover? (every proper path meets A with intersection number
  0 or +-1)
- ``disjoint_in_cover``: are two such classes carried by disjoint spheres?
  (no pair of paths c, c' with c.A = 1 = c.B and c'.A = 1 = -c'.B)
- ``embeddable_in_M``: is A carried by an embedded sphere in M? (A and gA
  disjoint in the cover for every deck transformation g)
- ``disjoint_in_M``: are A and B carried by disjoint spheres in M?

Quantifiers over proper paths become pairs of hull boundary vertices, and
quantifiers over the group become the finite set of g for which the hulls
overlap. Every negative verdict carries a witness that
``validate_certificate`` re-checks from scratch.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, FrozenSet, NamedTuple, Optional, Sequence, Tuple, TypeVar, Union

from app.core.config import get_settings
from app.core.errors import EmptySupport, NotEmbeddable, NotEmbeddableInM, ZeroClass
from app.core.logging import get_logger
from app.services.free_group import ReducedWord, ball, identity, invert, multiply
from app.services.sphere_class import (
    EndPair,
    SphereClass,
    SupportHull,
    check_rank,
    hull,
    is_dependent,
    pair_intersection_number,
    potential,
    translate,
)

logger = get_logger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class Witness:
    """A proper path (as an end pair) with its intersection numbers."""

    pair: EndPair
    values: Tuple[int, ...]

    def key(self) -> Tuple:
        return self.pair.key()


@dataclass(frozen=True)
class PartitionCertificate:
    """Positive cover-embedding witness: the two classes of ends, on the boundary."""

    sides: Tuple[Tuple[ReducedWord, int], ...]
    kind = "end-partition"

    def side_of(self) -> Dict[ReducedWord, int]:
        return dict(self.sides)


@dataclass(frozen=True)
class ViolationCertificate:
    """Negative cover-embedding witness: a path meeting A at least twice."""

    witness: Witness
    kind = "violating-pair"


@dataclass(frozen=True)
class QuadrantCertificate:
    """
    Positive cover-disjointness witness.

    Boundary vertices are classified by their side for A and for B (0 for
    the lower potential, 1 for the upper); at least one of the four
    quadrants is empty, i.e. one of the intersections of complementary
    regions is compact.
    """

    occupied: Tuple[Tuple[int, int], ...]
    empty: Tuple[Tuple[int, int], ...]
    dependent: bool
    kind = "empty-quadrant"


@dataclass(frozen=True)
class SignConflictCertificate:
    """Negative cover-disjointness witness: one same-sign and one opposite-sign path."""

    same_sign: Witness
    opposite_sign: Witness
    kind = "sign-conflict"


@dataclass(frozen=True)
class TranslatesCertificate:
    """Positive manifold witness: the translates that were checked."""

    checked: Tuple[ReducedWord, ...]
    kind = "translates-checked"


@dataclass(frozen=True)
class FailingTranslateCertificate:
    """Negative manifold witness: a translate g with the failing cover certificate."""

    g: ReducedWord
    inner: Union[ViolationCertificate, SignConflictCertificate]
    kind = "failing-translate"


CoverEmbedCertificate = Union[PartitionCertificate, ViolationCertificate]
CoverDisjointCertificate = Union[QuadrantCertificate, SignConflictCertificate]
ManifoldCertificate = Union[TranslatesCertificate, FailingTranslateCertificate]
Certificate = Union[CoverEmbedCertificate, CoverDisjointCertificate, ManifoldCertificate]


class Decision(NamedTuple):
    verdict: bool
    certificate: Certificate


class FamilyDecision(NamedTuple):
    verdict: bool
    failing: Optional[Tuple[int, ...]]
    certificate: Optional[Certificate]


def _require_nonzero(h: SupportHull, phi: Dict[ReducedWord, int], which: str) -> None:
    if len({phi[v] for v in h.boundary}) < 2:
        raise ZeroClass(f"class {which} is zero in homology")


def _boundary_potential(a: SphereClass, which: str = "A") -> Tuple[SupportHull, Dict[ReducedWord, int]]:
    if a.is_zero:
        raise ZeroClass(f"class {which} is the zero class")
    h = hull([a])
    phi = potential(a, h)
    _require_nonzero(h, phi, which)
    return h, phi


def embeddable_in_cover(a: SphereClass, name: str = "A") -> Decision:
    """
    Decide whether A is carried by an embedded sphere in the universal cover.

    Every unordered pair of distinct boundary vertices of hull(A) must meet
    A with intersection number 0 or +-1.

    Returns:
        Decision with a PartitionCertificate on success, otherwise a
        ViolationCertificate for the least violating pair (oriented so its
        value is positive)

    Raises:
        ZeroClass: If A is zero in homology
        IntersectionOverflow: If an intersection number overflows
    """
    h, phi = _boundary_potential(a, name)
    boundary = h.sorted_boundary()

    violation: Optional[Witness] = None
    for p, q in combinations(boundary, 2):
        v = phi[q] - phi[p]
        if abs(v) >= 2:
            pair = EndPair(p, q) if v > 0 else EndPair(q, p)
            candidate = Witness(pair, (abs(v),))
            if violation is None or candidate.key() < violation.key():
                violation = candidate
    if violation is not None:
        logger.debug("cover embedding fails", pair=str(violation.pair), value=violation.values[0])
        return Decision(False, ViolationCertificate(violation))

    # Any boundary vertex separates the rest into the two end classes.
    p0 = boundary[0]
    sides = tuple((q, 1 if phi[q] == phi[p0] else 2) for q in boundary)
    return Decision(True, PartitionCertificate(sides))


def _pair_types(
    boundary: Sequence[ReducedWord], phi_a: Dict[ReducedWord, int], phi_b: Dict[ReducedWord, int]
) -> Tuple[Optional[Witness], Optional[Witness]]:
    same: Optional[Witness] = None
    opposite: Optional[Witness] = None
    for p, q in combinations(boundary, 2):
        va = phi_a[q] - phi_a[p]
        vb = phi_b[q] - phi_b[p]
        if not va or not vb:
            continue
        # orient so that c.A = +1
        if va < 0:
            p, q, va, vb = q, p, -va, -vb
        candidate = Witness(EndPair(p, q), (va, vb))
        if vb > 0:
            if same is None or candidate.key() < same.key():
                same = candidate
        elif opposite is None or candidate.key() < opposite.key():
            opposite = candidate
    return same, opposite


def disjoint_in_cover(a: SphereClass, b: SphereClass, names: Tuple[str, str] = ("A", "B")) -> Decision:
    """
    Decide whether A and B are carried by disjoint embedded spheres in the cover.

    Over the boundary pairs of the joint hull, value pairs (c.A, c.B) with
    both entries nonzero are classified as same-sign or opposite-sign; the
    verdict is true iff at most one type occurs.

    Raises:
        NotEmbeddable: If either class fails embeddable_in_cover
        ZeroClass: If either class is zero in homology
        RankMismatch: If the classes live over different ranks
    """
    check_rank(a.rank, b.rank)
    for cls, which in ((a, names[0]), (b, names[1])):
        embedded = embeddable_in_cover(cls, which)
        if not embedded.verdict:
            raise NotEmbeddable(which, embedded.certificate)
    return _disjoint_in_cover_unchecked(a, b)


def _disjoint_in_cover_unchecked(a: SphereClass, b: SphereClass) -> Decision:
    joint = hull([a, b])
    phi_a = potential(a, joint)
    phi_b = potential(b, joint)
    boundary = joint.sorted_boundary()
    same, opposite = _pair_types(boundary, phi_a, phi_b)

    if same is not None and opposite is not None:
        return Decision(False, SignConflictCertificate(same, opposite))

    low_a = min(phi_a[v] for v in boundary)
    low_b = min(phi_b[v] for v in boundary)
    occupied = sorted({(int(phi_a[v] != low_a), int(phi_b[v] != low_b)) for v in boundary})
    empty = [q for q in ((0, 0), (0, 1), (1, 0), (1, 1)) if q not in occupied]
    return Decision(True, QuadrantCertificate(tuple(occupied), tuple(empty), is_dependent(a, b)))


def overlap_elements(h1: SupportHull, h2: SupportHull, radius: Optional[int] = None) -> FrozenSet[ReducedWord]:
    """
    Group elements g for which g * h2 comes within ``radius`` of h1.

    With radius 0 this is exactly { p q^-1 : p in h1, q in h2 }, the g for
    which h1 and g * h2 share a vertex.

    Raises:
        EmptySupport: If either hull is empty
    """
    if not h1.vertices or not h2.vertices:
        raise EmptySupport("overlap needs nonempty hulls")
    check_rank(h1.rank, h2.rank)
    if radius is None:
        radius = get_settings().overlap_radius
    offsets = list(ball(h1.rank, radius))
    inverses = [invert(q) for q in h2.vertices]
    elements = set()
    for p in h1.vertices:
        for w in offsets:
            pw = multiply(p, w)
            for q_inv in inverses:
                elements.add(multiply(pw, q_inv))
    return frozenset(elements)


def _first_failure(
    items: Sequence[T], check: Callable[[T], Decision], threads: Optional[int] = None
) -> Optional[Tuple[T, Decision]]:
    """Run ``check`` over ``items`` in order and return the first failure."""
    if threads is None:
        threads = get_settings().threads
    if threads <= 1 or len(items) <= 1:
        for item in items:
            result = check(item)
            if not result.verdict:
                return item, result
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(check, items))
    for item, result in zip(items, results):
        if not result.verdict:
            return item, result
    return None


def inverse_pair_representative(g: ReducedWord) -> ReducedWord:
    """The shortlex-least of g and g^-1."""
    return min(g, invert(g), key=ReducedWord.key)


def embeddable_in_M(a: SphereClass, radius: Optional[int] = None, threads: Optional[int] = None) -> Decision:
    """
    Decide whether A is carried by an embedded sphere in M.

    A must embed in the cover, and A and gA must be disjoint in the cover
    for every non-identity g whose translate of hull(A) overlaps hull(A).
    Since g and g^-1 give the same verdict only one of each inverse pair is
    checked.

    Returns:
        Decision with a TranslatesCertificate listing the checked
        representatives, or a FailingTranslateCertificate (g = identity when
        the cover test itself fails)
    """
    cover = embeddable_in_cover(a)
    if not cover.verdict:
        return Decision(False, FailingTranslateCertificate(identity(a.rank), cover.certificate))

    h = hull([a])
    overlap = overlap_elements(h, h, radius)
    representatives = sorted(
        {inverse_pair_representative(g) for g in overlap if not g.is_identity}, key=ReducedWord.key
    )
    logger.debug("checking translates", overlap=len(overlap), representatives=len(representatives))

    failure = _first_failure(representatives, lambda g: _disjoint_in_cover_unchecked(a, translate(g, a)), threads)
    if failure is not None:
        g, result = failure
        return Decision(False, FailingTranslateCertificate(g, result.certificate))
    return Decision(True, TranslatesCertificate(tuple(representatives)))


def disjoint_in_M(
    a: SphereClass,
    b: SphereClass,
    radius: Optional[int] = None,
    threads: Optional[int] = None,
    names: Tuple[str, str] = ("A", "B"),
) -> Decision:
    """
    Decide whether A and B are carried by disjoint embedded spheres in M.

    Checks disjoint_in_cover(A, gB) for every g (identity included) whose
    translate of hull(B) overlaps hull(A); for any other g the hulls are
    vertex-disjoint and only one sign type can occur.

    Raises:
        NotEmbeddableInM: If either class fails embeddable_in_M
    """
    check_rank(a.rank, b.rank)
    for cls, which in ((a, names[0]), (b, names[1])):
        if cls.is_zero:
            raise ZeroClass(f"class {which} is the zero class")
        embedded = embeddable_in_M(cls, radius, threads)
        if not embedded.verdict:
            raise NotEmbeddableInM(which, embedded.certificate)

    elements = sorted(overlap_elements(hull([a]), hull([b]), radius), key=ReducedWord.key)
    failure = _first_failure(elements, lambda g: _disjoint_in_cover_unchecked(a, translate(g, b)), threads)
    if failure is not None:
        g, result = failure
        return Decision(False, FailingTranslateCertificate(g, result.certificate))
    return Decision(True, TranslatesCertificate(tuple(elements)))


def disjoint_family_in_M(
    classes: Sequence[SphereClass], radius: Optional[int] = None, threads: Optional[int] = None
) -> FamilyDecision:
    """
    Decide whether finitely many classes are carried by pairwise disjoint spheres in M.

    Returns:
        FamilyDecision whose ``failing`` is the index of a non-embeddable
        class (1-tuple) or the least non-disjoint index pair
    """
    for i, a in enumerate(classes):
        result = embeddable_in_M(a, radius, threads)
        if not result.verdict:
            return FamilyDecision(False, (i,), result.certificate)
    for i, j in combinations(range(len(classes)), 2):
        result = disjoint_in_M(classes[i], classes[j], radius, threads)
        if not result.verdict:
            return FamilyDecision(False, (i, j), result.certificate)
    return FamilyDecision(True, None, None)


def _validate_partition(a: SphereClass, cert: PartitionCertificate) -> bool:
    sides = cert.side_of()
    if set(sides) != hull([a]).boundary or not set(sides.values()) <= {1, 2}:
        return False
    first_sign: Dict[ReducedWord, int] = {}
    for u, v in combinations(sorted(sides, key=ReducedWord.key), 2):
        val = pair_intersection_number(EndPair(u, v), a)
        if sides[u] == sides[v]:
            if val != 0:
                return False
        else:
            if abs(val) != 1:
                return False
            # all nonzero values seen from a fixed end share one sign
            if first_sign.setdefault(u, val) != val:
                return False
    return True


def _validate_sign_conflict(a: SphereClass, b: SphereClass, cert: SignConflictCertificate) -> bool:
    same, opposite = cert.same_sign, cert.opposite_sign
    same_vals = (pair_intersection_number(same.pair, a), pair_intersection_number(same.pair, b))
    opp_vals = (pair_intersection_number(opposite.pair, a), pair_intersection_number(opposite.pair, b))
    return (
        same_vals == same.values
        and opp_vals == opposite.values
        and same_vals in ((1, 1), (-1, -1))
        and opp_vals in ((1, -1), (-1, 1))
    )


def validate_certificate(
    a: SphereClass, cert: Certificate, b: Optional[SphereClass] = None, radius: Optional[int] = None
) -> bool:
    """
    Re-check a certificate by direct recomputation of the cited numbers.

    For manifold certificates, ``b`` is the second class of a disjointness
    question; when omitted the question is embeddability of ``a``. ``radius``
    must match the overlap radius the certificate was produced with.
    """
    if isinstance(cert, PartitionCertificate):
        return _validate_partition(a, cert)
    if isinstance(cert, ViolationCertificate):
        value = pair_intersection_number(cert.witness.pair, a)
        return value == cert.witness.values[0] and abs(value) >= 2
    if isinstance(cert, SignConflictCertificate):
        return b is not None and _validate_sign_conflict(a, b, cert)
    if isinstance(cert, QuadrantCertificate):
        return b is not None and disjoint_in_cover(a, b).certificate == cert
    if isinstance(cert, FailingTranslateCertificate):
        if b is None:
            if cert.g.is_identity:
                return validate_certificate(a, cert.inner)
            g_in_overlap = cert.g in overlap_elements(hull([a]), hull([a]), radius)
            return g_in_overlap and validate_certificate(a, cert.inner, translate(cert.g, a))
        g_in_overlap = cert.g in overlap_elements(hull([a]), hull([b]), radius)
        return g_in_overlap and validate_certificate(a, cert.inner, translate(cert.g, b))
    if isinstance(cert, TranslatesCertificate):
        if b is None:
            return all(disjoint_in_cover(a, translate(g, a)).verdict for g in cert.checked)
        return all(disjoint_in_cover(a, translate(g, b)).verdict for g in cert.checked)
    raise TypeError(f"unknown certificate type {type(cert).__name__}")
