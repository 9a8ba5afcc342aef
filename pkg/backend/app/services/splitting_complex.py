"""
Finite subcomplexes of the splitting complex of F_k.

Vertices are homology classes of embedded spheres in M up to the deck
action and orientation reversal (conjugacy classes of free splittings); two
vertices span an edge when their spheres can be made disjoint in M. Higher
simplices follow the flag rule: every clique of pairwise-compatible vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from app.core.config import get_settings
from app.core.errors import RankMismatch, ZeroClass
from app.core.logging import get_logger
from app.services.decision import Certificate, disjoint_in_M, embeddable_in_M
from app.services.free_group import invert
from app.services.sphere_class import SphereClass, check_rank, homology_representative, hull, negate, translate

logger = get_logger(__name__)

SIMPLEX_RULE = "flag"


@dataclass(frozen=True)
class SplittingVertex:
    canonical: SphereClass
    sources: Tuple[int, ...]


@dataclass(frozen=True)
class Rejection:
    index: int
    reason: str
    certificate: Optional[Certificate] = None
    detail: str = ""


@dataclass
class ComplexOutput:
    vertices: List[SplittingVertex] = field(default_factory=list)
    edges: List[Tuple[int, int]] = field(default_factory=list)
    simplices: List[Tuple[int, ...]] = field(default_factory=list)
    facets: List[Tuple[int, ...]] = field(default_factory=list)
    rejected: List[Rejection] = field(default_factory=list)
    simplex_rule: str = SIMPLEX_RULE


def normalize(a: SphereClass) -> SphereClass:
    """
    Canonical representative of the orbit of A under translation and negation.

    Both A and -A are first replaced by their homology representatives, so
    weight systems differing by vertex stars agree. Candidates are the
    translates placing a hull vertex at the identity and their negations;
    the least by ``SphereClass.key`` wins.

    Raises:
        ZeroClass: If A is zero in homology
    """
    candidates = []
    for rep in (homology_representative(a), homology_representative(negate(a))):
        for q in hull([rep]).vertices:
            moved = translate(invert(q), rep)
            candidates.append(moved)
            candidates.append(negate(moved))
    return min(candidates, key=SphereClass.key)


def vertex_equivalent(a: SphereClass, b: SphereClass) -> bool:
    """True iff B is homologous to +-gA for some g."""
    check_rank(a.rank, b.rank)
    return normalize(a) == normalize(b)


def _simplex_key(simplex: Tuple[int, ...]) -> Tuple:
    return (len(simplex), simplex)


def build_complex(
    classes: Sequence[SphereClass],
    dim_cap: Optional[int] = None,
    radius: Optional[int] = None,
    threads: Optional[int] = None,
) -> ComplexOutput:
    """
    Assemble the subcomplex spanned by the given classes.

    Classes that are zero, of the wrong rank, or not embeddable in M are
    reported in ``rejected`` with their certificates. Survivors are merged
    by ``normalize``; edges come from ``disjoint_in_M`` on the canonical
    representatives; ``simplices`` lists every clique with at most
    ``dim_cap + 1`` vertices and ``facets`` the maximal ones within the cap.

    Args:
        classes: Input classes, indexed by position
        dim_cap: Largest simplex dimension to emit (settings default 5)
        radius: Overlap radius passed to the decision procedures
        threads: Worker count for the per-translate checks

    Returns:
        ComplexOutput with deterministic ordering
    """
    if dim_cap is None:
        dim_cap = get_settings().dim_cap
    output = ComplexOutput()
    if not classes:
        return output
    rank = classes[0].rank

    groups: Dict[SphereClass, List[int]] = {}
    for i, a in enumerate(classes):
        if a.rank != rank:
            output.rejected.append(Rejection(i, "rank-mismatch", detail=str(RankMismatch(rank.k, a.rank.k))))
            continue
        try:
            decision = embeddable_in_M(a, radius, threads)
        except ZeroClass as e:
            output.rejected.append(Rejection(i, "zero-class", detail=str(e)))
            continue
        if not decision.verdict:
            logger.warning("class rejected", index=i, reason="not-embeddable-in-M")
            output.rejected.append(Rejection(i, "not-embeddable-in-M", decision.certificate))
            continue
        groups.setdefault(normalize(a), []).append(i)

    canonicals = sorted(groups, key=SphereClass.key)
    output.vertices = [SplittingVertex(c, tuple(groups[c])) for c in canonicals]

    graph = nx.Graph()
    graph.add_nodes_from(range(len(canonicals)))
    for i, j in combinations(range(len(canonicals)), 2):
        if disjoint_in_M(canonicals[i], canonicals[j], radius, threads).verdict:
            graph.add_edge(i, j)
    output.edges = sorted(tuple(sorted(e)) for e in graph.edges())

    cap = dim_cap + 1
    output.simplices = sorted(
        (tuple(sorted(c)) for c in nx.enumerate_all_cliques(graph) if len(c) <= cap), key=_simplex_key
    )
    output.facets = sorted((tuple(sorted(c)) for c in nx.find_cliques(graph) if len(c) <= cap), key=_simplex_key)
    logger.debug(
        "complex built",
        vertices=len(output.vertices),
        edges=len(output.edges),
        simplices=len(output.simplices),
        rejected=len(output.rejected),
    )
    return output
