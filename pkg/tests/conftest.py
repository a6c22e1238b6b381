import itertools

import pytest
from hypothesis import strategies as st

import oracles as O
from buildsets import corpus
from buildsets.matroids import subset_lattice

# seeds for the sampled closure checks on lattices with |L⁺| > 10
CLOSURE_SEEDS = [0, 1, 2, 3, 4]


@pytest.fixture(scope="session")
def closure_seeds():
    return CLOSURE_SEEDS


@pytest.fixture(params=corpus.LATTICES)
def entry(request):
    return corpus.get(request.param)


def _closed(family, ground_mask):
    fam = set(family)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(fam), 2):
            if a & b not in fam:
                fam.add(a & b)
                changed = True
    return fam


@st.composite
def intersection_families(draw, max_ground=4, max_sets=7, with_top=None):
    """Random intersection-closed families of subsets of range(n); with
    ``with_top`` False the ground set may be absent, giving meet-semilattices
    without a 1̂."""
    n = draw(st.integers(1, max_ground))
    full = (1 << n) - 1
    raw = draw(st.lists(st.integers(0, full), min_size=1, max_size=max_sets))
    top = draw(st.booleans()) if with_top is None else with_top
    if top:
        raw.append(full)
    fam = _closed(raw, full)
    sets = [frozenset(k for k in range(n) if m >> k & 1) for m in fam]
    return list(range(n)), sets


def build_pair(ground, sets):
    """The same family as a library MeetSemilattice and as an oracle Lat."""
    L = subset_lattice(ground, sets)
    Lo = O.Lat(list(L.elements), lambda a, b: a <= b)
    return L, Lo


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
