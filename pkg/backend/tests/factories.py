"""Shared test data."""

from app.services.free_group import Rank, word
from app.services.sphere_class import CanonicalEdge, SphereClass, canonical_edge


def edge_class(k, *entries) -> SphereClass:
    """Build a class from (vertex letters, gen, weight) triples."""
    rank = Rank(k)
    return SphereClass(rank, {CanonicalEdge(word(rank, *vertex), gen): w for vertex, gen, w in entries})


def vertex_star(k, *vertex, weight=1) -> SphereClass:
    """Every edge at ``vertex``, oriented outward. Zero in homology."""
    rank = Rank(k)
    v = word(rank, *vertex)
    weights = {}
    for letter in rank.letters():
        edge, sign = canonical_edge(v, letter)
        weights[edge] = sign * weight
    return SphereClass(rank, weights)


GENERATOR_1 = edge_class(2, ((), 1, 1))
GENERATOR_2 = edge_class(2, ((), 2, 1))
# embeddable in M
ZIGZAG = edge_class(2, ((), 1, 1), ((1,), 1, -1))
# embeddable in the cover, not in M; fails at g = x1
PARALLEL = edge_class(2, ((), 2, 1), ((1,), 2, 1))

DOCUMENT = {
    "rank": 2,
    "classes": [
        {"name": "A", "weights": [{"vertex": [], "gen": 1, "weight": 1}]},
        {"name": "B", "weights": [{"vertex": [], "gen": 2, "weight": 1}, {"vertex": [1], "gen": 2, "weight": 1}]},
        {"name": "C", "weights": [{"vertex": [], "gen": 2, "weight": 1}]},
        {"name": "D", "weights": [{"vertex": [], "gen": 1, "weight": 1}, {"vertex": [1], "gen": 1, "weight": -1}]},
    ],
}
