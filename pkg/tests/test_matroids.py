import pytest

from buildsets.errors import CoverAxiomViolation, NotIntersectionClosed, ValidationError
from buildsets.matroids import (
    boolean_matroid,
    flat_label,
    matroid_from_flats,
    partition_lattice_matroid,
    set_partitions,
    uniform_matroid,
)


@pytest.mark.parametrize("m,bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)])
def test_partitions_bell(m, bell):
    assert len(set_partitions(list(range(m)))) == bell


def test_corpus_matroids():
    assert len(uniform_matroid(2, 4).flats) == 6
    assert len(partition_lattice_matroid(4).flats) == 15
    assert boolean_matroid(3).is_free and boolean_matroid(3).is_simple
    assert uniform_matroid(2, 3).is_simple and not uniform_matroid(2, 3).is_free


def test_cover_axiom():
    with pytest.raises(CoverAxiomViolation):
        matroid_from_flats("abc", [[], ["a"], ["a", "b", "c"]])


def test_intersection_closure_and_ground():
    with pytest.raises(NotIntersectionClosed):
        matroid_from_flats("abc", [[], ["a", "b"], ["b", "c"], ["a", "b", "c"]])
    with pytest.raises(NotIntersectionClosed):
        matroid_from_flats("ab", [[], ["a"]])
    with pytest.raises(ValidationError):
        matroid_from_flats("ab", [[], ["z"], ["a", "b"]])


def test_non_simple_matroid():
    M = matroid_from_flats("abc", [[], ["a", "b"], ["c"], ["a", "b", "c"]])
    assert not M.is_simple


def test_flat_labels():
    assert flat_label(frozenset(), "123") == "0"
    assert flat_label(frozenset("31"), "123") == "13"
    assert flat_label(frozenset(["12", "34"]), ["12", "13", "34"]) == "{12,34}"
