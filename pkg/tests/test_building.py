import itertools

import pytest
from hypothesis import given, settings

import oracles as O
from buildsets import corpus
from buildsets.building import (
    BuildingSet,
    building_closure,
    building_rank,
    enumerate_building_sets,
    extreme_members,
    factors,
    is_building_set,
    is_building_set_definitional,
    maximum_building_set,
    minimum_building_set,
    removal_chain,
    rounds_from_extremes,
)
from buildsets.errors import NotLinearExtension, SizeLimit, ValidationError
from buildsets.poset import FinitePoset, MeetSemilattice, linear_extensions
from conftest import build_pair, intersection_families
from golden import GOLDEN


@pytest.mark.parametrize("name", list(GOLDEN["building_set_counts"]))
def test_enumeration_counts(name):
    L = corpus.get(name).lattice
    assert len(enumerate_building_sets(L)) == GOLDEN["building_set_counts"][name]


@pytest.mark.parametrize("name", ["B3", "U24", "U23", "twin-diamond", "fork", "C4"])
def test_enumeration_matches_oracle_family(name):
    e = corpus.get(name)
    Lo = O.corpus(name)
    to_oracle = {x: y for x, y in zip(e.lattice.elements, _oracle_order(e, Lo))}
    got = {frozenset(to_oracle[x] for x in B.members) for B in enumerate_building_sets(e.lattice)}
    assert got == set(O.building_sets(Lo))


def _oracle_order(e, Lo):
    """Oracle elements in the library's element order, matched by label."""
    def lab(y):
        if isinstance(y, frozenset):
            return "".join(str(v) for v in sorted(y)) or "0"
        return str(y)
    by = {lab(y): y for y in Lo.el}
    return [by[e.label(x)] for x in e.lattice.elements]


def test_enumeration_is_canonically_sorted():
    fam = enumerate_building_sets(corpus.get("B3").lattice)
    keys = [(len(B), tuple(sorted(B.lattice.i(x) for x in B.members))) for B in fam]
    assert keys == sorted(keys)
    summ = fam.summary()
    assert (summ["count"], summ["min_size"], summ["max_size"]) == (12, 3, 7)


def test_b3_closure_example():
    e = corpus.get("B3")
    L = e.lattice
    B = building_closure(L, [e.parse("12"), e.parse("23")])
    assert sorted(map(e.label, B.members)) == sorted(["1", "2", "3", "12", "23", "123"])
    assert B.rounds == 1


def test_b3_check_missing_irreducible():
    e = corpus.get("B3")
    v = is_building_set(e.lattice, [e.parse("1"), e.parse("2")])
    assert not v and e.label(v.witness["missing_irreducible"]) == "3"


def test_bottom_not_allowed():
    L = corpus.get("B2").lattice
    with pytest.raises(ValidationError):
        is_building_set(L, [L.bottom])


def test_definitional_certificates_list_factors():
    e = corpus.get("B2")
    L = e.lattice
    v = is_building_set_definitional(L, minimum_building_set(L), certificates=True)
    assert v
    top = L.top
    assert sorted(map(e.label, v.witness["phi"][top])) == ["1", "2"]
    assert sorted(map(e.label, factors(minimum_building_set(L), top))) == ["1", "2"]


def test_min_and_max():
    for name in corpus.LATTICES:
        L = corpus.get(name).lattice
        fam = enumerate_building_sets(L)
        assert fam.masks[0] == minimum_building_set(L).mask == L.irreducible_mask
        assert max(fam.masks, key=bin) & maximum_building_set(L).mask == max(fam.masks, key=bin)
        assert maximum_building_set(L).mask in fam.masks


def test_rounds_from_extremes_rebuild():
    for name in ["B3", "Pi4", "twin-diamond"]:
        for B in enumerate_building_sets(corpus.get(name).lattice):
            assert rounds_from_extremes(B) >= 0


def test_removal_chain_every_step_is_building():
    L = corpus.get("B3").lattice
    fam = enumerate_building_sets(L)
    for ext in itertools.islice(linear_extensions(L), 0, 48, 7):
        for a, b in itertools.product(fam, repeat=2):
            steps = removal_chain(a, b, ext)
            end = steps[-1].mask if steps else a.mask
            assert end == a.mask & b.mask
            assert all(is_building_set(L, s.mask) for s in steps)


def test_removal_chain_rejects_non_extension():
    L = corpus.get("B2").lattice
    with pytest.raises(NotLinearExtension):
        removal_chain(maximum_building_set(L), minimum_building_set(L), list(reversed(L.elements)))


def test_building_rank_counts_reducibles():
    L = corpus.get("B3").lattice
    assert building_rank(maximum_building_set(L)) == 4
    assert building_rank(minimum_building_set(L)) == 0


def test_extreme_members_of_b3_maximum():
    e = corpus.get("B3")
    assert sorted(map(e.label, extreme_members(maximum_building_set(e.lattice)))) == ["12", "13", "23"]


def test_size_limit():
    n = 70
    elems = list(range(n))
    L = MeetSemilattice.from_poset(FinitePoset.from_covers(elems, [(0, k) for k in range(1, n)]))
    with pytest.raises(SizeLimit):
        enumerate_building_sets(L)


@settings(max_examples=40, deadline=None)
@given(intersection_families(max_ground=4, max_sets=6))
def test_checkers_agree_with_oracle(fam):
    L, Lo = build_pair(*fam)
    plus = L.plus
    for r in range(len(plus) + 1):
        for S in itertools.combinations(plus, r):
            want = O.is_building_set(Lo, S)
            assert bool(is_building_set(L, S)) == want
            assert bool(is_building_set_definitional(L, S)) == want
            if r > 4 and len(plus) > 8:
                break


@settings(max_examples=40, deadline=None)
@given(intersection_families(max_ground=4, max_sets=6))
def test_enumeration_and_closure_match_oracle(fam):
    L, Lo = build_pair(*fam)
    got = {frozenset(B.members) for B in enumerate_building_sets(L)}
    family = O.building_sets(Lo)
    assert got == set(family)
    for X in itertools.islice(O.subsets(L.plus), 64):
        assert set(building_closure(L, X).members) == O.closure(Lo, family, X)


def test_building_set_dataclass_membership():
    e = corpus.get("B2")
    B = maximum_building_set(e.lattice)
    assert isinstance(B, BuildingSet) and len(B) == 3 and e.lattice.top in B
