"""End-to-end sweeps over fixtures and seeded random classes."""

import random

import pytest

from app.core.errors import SpheresError
from app.services.decision import (
    PartitionCertificate,
    disjoint_in_cover,
    disjoint_in_M,
    embeddable_in_cover,
    embeddable_in_M,
    validate_certificate,
)
from app.services.free_group import ball, reduce, word
from app.services.oracle import cross_check, disjoint_by_paths, random_class
from app.services.sphere_class import hull, is_null_homologous, negate, translate
from app.services.splitting_complex import build_complex
from tests.factories import GENERATOR_1, GENERATOR_2, PARALLEL, ZIGZAG, edge_class


def nonzero_classes(count, seed, ranks=(1, 2, 3), support=3, radius=1, weight=3):
    """Seeded random classes that are nonzero in homology."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        k = rng.choice(ranks)
        bounds = (rng.randint(1, support), rng.randint(0, radius), rng.randint(1, weight))
        a = random_class(k, *bounds, rng.getrandbits(32))
        if not is_null_homologous(a):
            found.append(a)
    return found


def embedded_classes(count, seed, ranks=(2,), support=3, radius=1):
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        a = random_class(rng.choice(ranks), rng.randint(1, support), radius, 1, rng.getrandbits(32))
        if not is_null_homologous(a) and embeddable_in_cover(a).verdict:
            found.append(a)
    return found


def random_element(rng, k, length=3):
    return reduce([rng.choice([1, -1]) * rng.randint(1, k) for _ in range(rng.randint(0, length))], k)


def outcome(check, *args, **kwargs):
    """Verdict of a decision, or the name of the precondition it failed."""
    try:
        return check(*args, **kwargs).verdict
    except SpheresError as e:
        return type(e).__name__


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_generator_spheres_embed_in_M(k):
    for base in ball(k, 2):
        for gen in range(1, k + 1):
            for w in (1, -1):
                a = edge_class(k, (base.letters, gen, w))
                assert embeddable_in_M(a).verdict, a


def test_derived_fixtures_and_their_certificates():
    zigzag = embeddable_in_M(ZIGZAG)
    assert zigzag.verdict
    assert validate_certificate(ZIGZAG, zigzag.certificate)

    cover = embeddable_in_cover(PARALLEL)
    assert cover.verdict
    assert validate_certificate(PARALLEL, cover.certificate)
    manifold = embeddable_in_M(PARALLEL)
    assert not manifold.verdict
    assert manifold.certificate.g == word(2, 1)
    assert validate_certificate(PARALLEL, manifold.certificate)

    crossing = disjoint_in_cover(GENERATOR_1, PARALLEL)
    assert not crossing.verdict
    assert crossing.certificate.same_sign.values == (1, 1)
    assert crossing.certificate.opposite_sign.values == (1, -1)
    assert validate_certificate(GENERATOR_1, crossing.certificate, PARALLEL)


@pytest.mark.slow
def test_oracle_agrees_on_random_classes():
    for a in nonzero_classes(500, seed=2024, support=5, radius=3):
        result = cross_check(a)
        assert result.max_len == hull([a]).diameter() + 4
        assert result.agree, (a, result.first_mismatch)


@pytest.mark.slow
def test_oracle_agrees_on_disjointness():
    classes = embedded_classes(120, seed=31, ranks=(2, 3))
    for a, b in zip(classes[::2], classes[1::2]):
        assert disjoint_by_paths(a, b) == disjoint_in_cover(a, b).verdict, (a, b)


def test_positive_certificates_split_the_ends_in_two():
    for a in nonzero_classes(300, seed=5):
        result = embeddable_in_cover(a)
        if result.verdict:
            assert isinstance(result.certificate, PartitionCertificate)
            assert set(result.certificate.side_of().values()) == {1, 2}
        assert validate_certificate(a, result.certificate)


@pytest.mark.slow
def test_verdicts_are_invariant():
    rng = random.Random(11)
    classes = nonzero_classes(400, seed=11, ranks=(2,), support=3, radius=1, weight=1)
    for a, b in zip(classes[::2], classes[1::2]):
        g = random_element(rng, 2)
        ga, gb = translate(g, a), translate(g, b)
        assert outcome(embeddable_in_cover, ga) == outcome(embeddable_in_cover, a)
        assert outcome(embeddable_in_M, ga) == outcome(embeddable_in_M, a) == outcome(embeddable_in_M, negate(a))
        cover = outcome(disjoint_in_cover, a, b)
        assert outcome(disjoint_in_cover, ga, gb) == cover
        assert outcome(disjoint_in_cover, negate(a), b) == cover
        manifold = outcome(disjoint_in_M, a, b)
        assert outcome(disjoint_in_M, b, a) == manifold
        assert outcome(disjoint_in_M, ga, gb) == manifold
        assert outcome(disjoint_in_M, a, negate(b)) == manifold
        if isinstance(cover, bool):
            assert outcome(disjoint_in_cover, b, a) == cover


def test_multiples_of_embedded_classes_do_not_embed():
    for a in embedded_classes(100, seed=3):
        for n in (2, 3, -2):
            assert not embeddable_in_cover(n * a).verdict


@pytest.mark.slow
def test_overlap_radius_does_not_change_verdicts():
    fixtures = [GENERATOR_1, GENERATOR_2, ZIGZAG, PARALLEL]
    for a in fixtures:
        assert embeddable_in_M(a, radius=0).verdict == embeddable_in_M(a, radius=1).verdict
    for a in fixtures[:3]:
        for b in fixtures[:3]:
            assert disjoint_in_M(a, b, radius=0).verdict == disjoint_in_M(a, b, radius=1).verdict

    classes = embedded_classes(200, seed=8)
    for a in classes:
        assert embeddable_in_M(a, radius=0).verdict == embeddable_in_M(a, radius=1).verdict
    for a, b in zip(classes[::2], classes[1::2]):
        assert outcome(disjoint_in_M, a, b, radius=0) == outcome(disjoint_in_M, a, b, radius=1)


def test_complex_of_the_fixtures():
    output = build_complex([ZIGZAG, PARALLEL, GENERATOR_1, GENERATOR_2])
    assert [v.canonical for v in output.vertices] == [GENERATOR_1, ZIGZAG, GENERATOR_2]
    assert [v.sources for v in output.vertices] == [(2,), (0,), (3,)]
    assert output.edges == [(0, 1), (0, 2), (1, 2)]
    assert output.simplices == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    assert output.facets == [(0, 1, 2)]
    assert [(r.index, r.reason) for r in output.rejected] == [(1, "not-embeddable-in-M")]

    shuffled = build_complex([translate(word(2, -2), GENERATOR_2), GENERATOR_1, negate(ZIGZAG), PARALLEL])
    assert [v.canonical for v in shuffled.vertices] == [v.canonical for v in output.vertices]
    assert shuffled.simplices == output.simplices
