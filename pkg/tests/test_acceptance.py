"""The eleven acceptance criteria, one test each. Every test records a
PASS or FAIL line, printed in the terminal summary and on stdout."""
import contextlib
import itertools
import random
import subprocess
import sys
import time

from buildsets import corpus, suites
from buildsets.building import (
    building_closure,
    enumerate_building_sets,
    is_building_set,
    is_building_set_definitional,
)
from buildsets.embeddings import restrict_building_set, verify_restriction_theorem
from buildsets.fans import bergman_fan, corollary_pipeline, is_unimodular
from buildsets.poset import bits, linear_extensions
from conftest import ACCEPTANCE
from golden import GOLDEN


@contextlib.contextmanager
def criterion(n: int, title: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        line = f"FAIL criterion {n}: {title}"
        ACCEPTANCE[n] = line
        print(line)
        raise
    line = f"PASS criterion {n}: {title} ({time.perf_counter() - start:.1f}s)"
    ACCEPTANCE[n] = line
    print(line)


def _plus_masks(L):
    plus = list(bits(L.plus_mask))
    for r in range(len(plus) + 1):
        for c in itertools.combinations(plus, r):
            yield sum(1 << i for i in c)


def test_1_characterization_equivalence():
    with criterion(1, "definitional and characterization checkers agree"):
        start = time.perf_counter()
        checked = 0
        for name in corpus.LATTICES:
            L = corpus.get(name).lattice
            assert len(L.plus) <= 16
            for m in _plus_masks(L):
                assert bool(is_building_set(L, m)) == bool(is_building_set_definitional(L, m)), (name, m)
                checked += 1
        assert checked == sum(2 ** len(corpus.get(n).lattice.plus) for n in corpus.LATTICES)
        assert time.perf_counter() - start < 60


def test_2_enumeration_counts():
    with criterion(2, "pinned building-set counts"):
        want = {"B2": 2, "B3": 12, "Pi4": 8, "U23": 1, "U24": 1}
        got = {n: len(enumerate_building_sets(corpus.get(n).lattice)) for n in want}
        assert got == want
        assert all(GOLDEN["building_set_counts"][n] == want[n] for n in want)


def test_3_lattice_and_convex_geometry():
    with criterion(3, "families are convex geometries, supersolvable for every extension"):
        for name in corpus.LATTICES:
            e = corpus.get(name)
            r = suites.convex_geometry(e, max_extensions=10000)
            assert r["holds"], r
            L = e.lattice
            n_ext = sum(1 for _ in linear_extensions(L.subposet(L.plus), limit=10000))
            assert r["counts"]["extensions"] == n_ext


def test_4_closure_correctness(closure_seeds):
    with criterion(4, "closure equals intersection of containing building sets"):
        start = time.perf_counter()
        for name in corpus.LATTICES:
            L = corpus.get(name).lattice
            family = enumerate_building_sets(L).masks
            plus = list(bits(L.plus_mask))
            if len(plus) <= 10:
                xs = list(_plus_masks(L))
            else:
                xs = []
                for seed in closure_seeds:
                    rng = random.Random(seed)
                    xs += [sum(1 << i for i in plus if rng.random() < 0.5) for _ in range(1000)]
            for X in xs:
                want = L.plus_mask
                for m in family:
                    if X & ~m == 0:
                        want &= m
                assert building_closure(L, X).mask == want, (name, X)
        assert time.perf_counter() - start < 120


def test_5_supersolvable_equivalence():
    with criterion(5, "supersolvability checkers agree; upper ideals pass"):
        for name in corpus.LATTICES:
            r = suites.supersolvable(corpus.get(name), max_extensions=10000)
            assert r["holds"], r
            assert r["counts"]["upper_ideal_orders"] >= 1


def test_6_rank_supermodularity():
    with criterion(6, "building rank is supermodular, covers add 1"):
        for name in corpus.LATTICES:
            r = suites.rank(corpus.get(name))
            assert r["holds"], r


def test_7_extreme_points():
    with criterion(7, "extreme members equal closure extreme points"):
        for name in corpus.LATTICES:
            r = suites.extreme(corpus.get(name))
            assert r["holds"], r


def test_8_nested_factors():
    with criterion(8, "factors lemma on every face of every nested complex"):
        start = time.perf_counter()
        faces = 0
        for name in corpus.LATTICES:
            r = suites.nested(corpus.get(name))
            assert r["holds"], r
            faces += r["counts"]["faces"]
        assert faces == sum(GOLDEN["f_vectors"][n]["all_faces"] for n in corpus.LATTICES)
        assert time.perf_counter() - start < 60


def test_9_restriction_theorem():
    with criterion(9, "restriction theorem and negative control"):
        for name in corpus.EMBEDDINGS:
            start = time.perf_counter()
            rep = verify_restriction_theorem(corpus.get_embedding(name).embedding)
            assert rep.holds and rep.part1 and rep.part2, (name, rep.counterexample)
            assert time.perf_counter() - start < 300
        # the closure of the target's irreducibles omits the source irreducible 123
        ee = corpus.get_embedding("U23-B3")
        K = ee.embedding.target
        res = restrict_building_set(ee.embedding, building_closure(K, K.irreducible_mask))
        assert not res.contains_source_irreducibles
        assert not is_building_set(ee.embedding.source, res.mask)


def test_10_corollary_pipeline():
    with criterion(10, "Bergman fan is a unimodular subfan of the nestohedral fan"):
        runs = 0
        for name in corpus.MATROIDS:
            M = corpus.get(name).matroid
            top = M.flats.i(M.top)
            for B in enumerate_building_sets(M.flats):
                if not B.mask >> top & 1:
                    continue
                r = corollary_pipeline(M, B)
                assert r.holds, (name, r.witness)
                assert all(is_unimodular(c) for c in bergman_fan(M, B).cones)
                runs += 1
        assert runs == sum(GOLDEN["fans"][n]["building_sets"] for n in corpus.MATROIDS)


def test_11_determinism():
    with criterion(11, "two verify runs are byte-identical"):
        cmd = [sys.executable, "-m", "buildsets.cli", "verify", "--suite", "all", "--no-timing"]
        a = subprocess.run(cmd, capture_output=True, check=False)
        b = subprocess.run(cmd, capture_output=True, check=False)
        assert a.returncode == 0, a.stderr
        assert a.stdout and a.stdout == b.stdout

