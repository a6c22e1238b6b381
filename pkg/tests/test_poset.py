import itertools

import pytest
from hypothesis import given, settings

import oracles as O
from buildsets import corpus
from buildsets.errors import AxiomViolation, NotMeetSemilattice, SizeLimit, ValidationError
from buildsets.poset import (
    FinitePoset,
    MeetSemilattice,
    direct_product,
    factorize_interval,
    hasse_dot,
    irreducibles,
    is_isomorphic,
    is_linear_extension,
    linear_extensions,
    max_below,
    validate_poset,
)
from conftest import build_pair, intersection_families
from golden import GOLDEN


def norm(label: str) -> str:
    return label.replace("{", "").replace("}", "").replace(",", "")


def test_axiom_violations_carry_witnesses():
    with pytest.raises(AxiomViolation) as exc:
        FinitePoset.from_relation(["a", "b"], [("a", "b"), ("b", "a")])
    assert exc.value.witness == {"x": "a", "y": "b"}
    with pytest.raises(AxiomViolation, match="transitivity"):
        FinitePoset.from_relation(["a", "b", "c"], [("a", "b"), ("b", "c")])
    with pytest.raises(ValidationError):
        FinitePoset.from_relation(["a", "a"], [])
    with pytest.raises(ValidationError, match="unknown element"):
        validate_poset(["a"], [("a", "z")])


def test_not_meet_semilattice_names_pair():
    P = FinitePoset.from_covers(["a", "b", "c"], [("a", "c"), ("b", "c")])
    with pytest.raises(NotMeetSemilattice) as exc:
        MeetSemilattice.from_poset(P)
    assert set(exc.value.witness.values()) == {"a", "b"}


def test_meets_and_joins_on_twin_diamond():
    L = corpus.get("twin-diamond").lattice
    assert L.meet("ab", "bc") == "b"
    assert L.try_join(["a", "c"]) is None
    assert L.join("a", "b") == "ab"
    with pytest.raises(ValueError):
        L.try_join([])
    assert not L.is_lattice and L.top is None


@pytest.mark.parametrize("name", corpus.LATTICES)
def test_irreducibles_match_oracle(name):
    e = corpus.get(name)
    got = sorted(norm(e.label(x)) for x in irreducibles(e.lattice))
    assert got == GOLDEN["irreducibles"][name]


@pytest.mark.parametrize("name", ["B3", "U24", "Pi4", "twin-diamond"])
def test_factorization_is_a_verified_isomorphism(name):
    L = corpus.get(name).lattice
    for x in L.plus:
        divisors, iso = factorize_interval(L, x)
        assert iso.verify()
        assert divisors == max_below(L, irreducibles(L), x)


def test_factorize_bottom_rejected():
    L = corpus.get("B2").lattice
    with pytest.raises(ValidationError):
        factorize_interval(L, L.bottom)


def test_linear_extensions_are_lexicographic_and_complete():
    L = corpus.get("B3").lattice
    exts = list(linear_extensions(L))
    brute = [p for p in itertools.permutations(L.elements) if is_linear_extension(L, p)]
    assert len(exts) == len(brute) == 48
    idx = [tuple(L.i(x) for x in e) for e in exts]
    assert idx == sorted(idx)
    assert len(list(linear_extensions(L, limit=5))) == 5


def test_isomorphism_products():
    B2 = corpus.get("B2").lattice
    C2 = corpus.get("C2").lattice
    iso = is_isomorphic(direct_product([C2, C2]), B2)
    assert iso is not None and iso.verify()
    assert iso.inverse().then(iso).map == {x: x for x in B2.elements}
    assert is_isomorphic(corpus.get("C4").lattice, B2) is None
    assert is_isomorphic(corpus.get("U23").lattice, corpus.get("Pi3").lattice) is not None


def test_isomorphism_size_limit():
    big = FinitePoset.from_covers(list(range(70)), [(k, k + 1) for k in range(69)])
    with pytest.raises(SizeLimit):
        is_isomorphic(big, big)


def test_hasse_dot_b2():
    e = corpus.get("B2")
    dot = hasse_dot(e.lattice, e.label)
    assert dot.count("[label=") == 4 and dot.count("->") == 4


@settings(max_examples=60, deadline=None)
@given(intersection_families(max_ground=4, max_sets=6))
def test_irreducibles_random_families(fam):
    L, Lo = build_pair(*fam)
    assert set(irreducibles(L)) == set(O.irreducibles(Lo))


@settings(max_examples=60, deadline=None)
@given(intersection_families())
def test_meet_is_intersection_and_join_is_least_bound(fam):
    L, Lo = build_pair(*fam)
    for a, b in itertools.combinations(L.elements, 2):
        assert L.meet(a, b) == a & b
        assert L.try_join([a, b]) == Lo.join([a, b])
