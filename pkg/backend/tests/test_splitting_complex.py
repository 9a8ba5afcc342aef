import pytest

from app.core.errors import ZeroClass
from app.services.decision import FailingTranslateCertificate
from app.services.free_group import word
from app.services.sphere_class import negate, translate
from app.services.splitting_complex import build_complex, normalize, vertex_equivalent
from tests.factories import GENERATOR_1, GENERATOR_2, PARALLEL, ZIGZAG, edge_class, vertex_star


class TestNormalize:
    def test_translates_to_the_identity(self):
        assert normalize(edge_class(2, ((2,), 1, 1))) == GENERATOR_1

    def test_already_minimal(self):
        assert normalize(GENERATOR_1) == GENERATOR_1

    def test_positive_weight_preferred(self):
        assert normalize(edge_class(2, ((), 1, -1))) == GENERATOR_1

    def test_orbit(self):
        shifted = edge_class(2, ((1,), 1, 1), ((1, 1), 1, -1))
        assert normalize(shifted) == normalize(ZIGZAG)

    def test_zero_class(self):
        with pytest.raises(ZeroClass):
            normalize(edge_class(2))
        with pytest.raises(ZeroClass):
            normalize(vertex_star(2, -1))

    def test_stars_do_not_change_the_normal_form(self):
        assert normalize(GENERATOR_1 + vertex_star(2, 1)) == GENERATOR_1
        assert normalize(ZIGZAG + vertex_star(2, 2, weight=-1)) == ZIGZAG

    @pytest.mark.parametrize(
        "a, b, expected",
        [
            (GENERATOR_1, edge_class(2, ((2,), 1, 1)), True),
            (GENERATOR_1, edge_class(2, ((), 1, -1)), True),
            (GENERATOR_1, GENERATOR_2, False),
            (GENERATOR_1, GENERATOR_1 + vertex_star(2, 1), True),
            (ZIGZAG, translate(word(2, 2), ZIGZAG) + vertex_star(2, 2, 1, weight=3), True),
        ],
    )
    def test_vertex_equivalent(self, a, b, expected):
        assert vertex_equivalent(a, b) is expected


class TestBuildComplex:
    def test_two_generators_span_an_edge(self):
        output = build_complex([GENERATOR_1, GENERATOR_2])
        assert [v.canonical for v in output.vertices] == [GENERATOR_1, GENERATOR_2]
        assert output.edges == [(0, 1)]
        assert output.simplices == [(0,), (1,), (0, 1)]
        assert output.facets == [(0, 1)]
        assert output.simplex_rule == "flag"
        assert output.rejected == []

    def test_translates_merge(self):
        output = build_complex([GENERATOR_1, edge_class(2, ((2,), 1, 1))])
        assert len(output.vertices) == 1
        assert output.vertices[0].sources == (0, 1)
        assert output.edges == []
        assert output.simplices == [(0,)]

    def test_homologous_weight_systems_merge(self):
        shifted = GENERATOR_1 + vertex_star(2, 1)
        output = build_complex([GENERATOR_1, shifted])
        assert [v.canonical for v in output.vertices] == [GENERATOR_1]
        assert output.vertices[0].sources == (0, 1)
        assert output.edges == []

    def test_non_embeddable_class_rejected(self):
        output = build_complex([PARALLEL, GENERATOR_1])
        assert len(output.vertices) == 1
        assert output.vertices[0].sources == (1,)
        (rejection,) = output.rejected
        assert rejection.index == 0
        assert rejection.reason == "not-embeddable-in-M"
        assert isinstance(rejection.certificate, FailingTranslateCertificate)
        assert rejection.certificate.g == word(2, 1)

    def test_zero_and_foreign_rank_rejected(self):
        output = build_complex([GENERATOR_1, edge_class(2), edge_class(3, ((), 1, 1))])
        assert [(r.index, r.reason) for r in output.rejected] == [(1, "zero-class"), (2, "rank-mismatch")]

    def test_dim_cap_limits_simplices(self):
        output = build_complex([GENERATOR_1, GENERATOR_2, ZIGZAG], dim_cap=1)
        assert all(len(s) <= 2 for s in output.simplices)
        assert all(len(s) <= 2 for s in output.facets)

    def test_empty_input(self):
        output = build_complex([])
        assert output.vertices == [] and output.simplices == []

    def test_invariant_under_permutation_translation_and_negation(self):
        classes = [ZIGZAG, PARALLEL, GENERATOR_1, GENERATOR_2]
        reference = build_complex(classes)
        moved = [
            negate(GENERATOR_2),
            translate(word(2, 2, 1), PARALLEL),
            translate(word(2, -1), GENERATOR_1),
            negate(translate(word(2, 1, 2), ZIGZAG)),
        ]
        other = build_complex(moved)
        assert [v.canonical for v in other.vertices] == [v.canonical for v in reference.vertices]
        assert other.edges == reference.edges
        assert other.simplices == reference.simplices
        assert other.facets == reference.facets
        assert len(other.rejected) == len(reference.rejected) == 1
        assert other.rejected[0].index == 1
