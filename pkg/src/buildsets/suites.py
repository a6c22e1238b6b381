"""Invariant suites run by ``verify``.

Each suite takes a corpus entry (or embedding entry) and returns a plain
dict: suite name, target name, ``holds``, counts and the first witness found.
Nothing here reads the clock or draws unseeded randomness.
"""

from __future__ import annotations

import random
from typing import Callable

from . import corpus
from .building import (
    BuildingSet,
    _closure_rounds,
    _extreme_mask,
    building_closure,
    building_rank,
    enumerate_building_sets,
    is_building_set,
    is_building_set_definitional,
    lattice_mask,
    plus_mask,
)
from .corpus import EmbeddingEntry, Entry
from .embeddings import restrict_building_set, verify_restriction_theorem
from .fans import bergman_fan, completeness_grid, corollary_pipeline, locate
from .nested import check_factors_lemma, nested_complex
from .poset import bits, linear_extensions, popcount
from .setsystems import (
    ClosureOperator,
    RankedFamily,
    SupersolvabilityCache,
    check_ranked,
    check_supermodular,
    complement_system,
    extreme_mask,
    is_anti_exchange,
    is_antimatroid,
    is_convex_geometry,
    is_intersection_closed,
    upper_ideals,
)

DEFAULT_MAX_EXTENSIONS = 10000
CHARACTERIZATION_EXHAUSTIVE = 16
CLOSURE_EXHAUSTIVE = 10
CLOSURE_SAMPLES = 1000
DEFAULT_SEEDS = (0,)

LATTICE_SUITES = ["characterization", "convex-geometry", "supersolvable", "closure",
                  "rank", "extreme", "nested"]
SUITES = LATTICE_SUITES + ["restriction", "fans"]


def _result(suite: str, target: str, holds: bool, counts: dict, witness=None, summary: str = "") -> dict:
    return {"suite": suite, "target": target, "holds": bool(holds), "counts": counts,
            "witness": witness, "summary": summary}


def _labels(entry: Entry, m: int) -> list[str]:
    return [entry.label(x) for x in entry.lattice.subset(m)]


def _family(entry: Entry):
    L = entry.lattice
    cache = L.__dict__.get("_family")
    if cache is None:
        cache = L.__dict__["_family"] = enumerate_building_sets(L)
    return cache


def _plus_subsets(L, exhaustive_up_to: int, samples: int, seeds) -> tuple[list[int], bool]:
    """Lattice masks of subsets of L⁺: all of them when small, otherwise a
    seeded sample (empty and full set always included)."""
    plus = list(bits(L.plus_mask))
    if len(plus) <= exhaustive_up_to:
        out = []
        for k in range(1 << len(plus)):
            out.append(sum(1 << plus[j] for j in range(len(plus)) if k >> j & 1))
        return out, True
    out = [0, L.plus_mask]
    per = max(1, samples // max(1, len(seeds)))
    for seed in seeds:
        rng = random.Random(seed)
        for _ in range(per):
            k = rng.getrandbits(len(plus))
            out.append(sum(1 << plus[j] for j in range(len(plus)) if k >> j & 1))
    return out, False


def characterization(entry: Entry, **_) -> dict:
    """Definitional and characterization checkers agree on subsets of L⁺."""
    L = entry.lattice
    subsets, exhaustive = _plus_subsets(L, CHARACTERIZATION_EXHAUSTIVE, 4096, DEFAULT_SEEDS)
    accepted = 0
    for m in subsets:
        a = bool(is_building_set(L, m))
        b = bool(is_building_set_definitional(L, m))
        if a != b:
            return _result("characterization", entry.name, False, {"subsets": len(subsets)},
                           {"subset": _labels(entry, m), "characterization": a, "definitional": b})
        accepted += a
    return _result("characterization", entry.name, True,
                   {"subsets": len(subsets), "building_sets": accepted, "exhaustive": exhaustive},
                   summary=f"{len(subsets)} subsets, {accepted} building sets, checkers agree")


def _extension_orders(entry: Entry, max_extensions: int) -> list[tuple]:
    """Linear extensions of L⁺ in lexicographic order, capped."""
    L = entry.lattice
    P = L.subposet(L.plus)
    return list(linear_extensions(P, limit=max_extensions))


def convex_geometry(entry: Entry, max_extensions: int = DEFAULT_MAX_EXTENSIONS, **_) -> dict:
    fam = _family(entry)
    sys = fam.set_system()
    op = ClosureOperator(sys)
    counts = {"family": len(fam)}
    checks = [
        ("intersection_closed", is_intersection_closed(sys)),
        ("convex_geometry", is_convex_geometry(sys)),
        ("complement_antimatroid", is_antimatroid(complement_system(sys))),
    ]
    for name, v in checks:
        if not v:
            return _result("convex-geometry", entry.name, False, counts, {"check": name, **(v.witness or {})})
    if bool(is_anti_exchange(op)) != bool(checks[1][1]):
        return _result("convex-geometry", entry.name, False, counts, {"check": "anti_exchange_agreement"})
    cache = SupersolvabilityCache(op)
    n = 0
    for order in _extension_orders(entry, max_extensions):
        n += 1
        v = cache.convex_geometry(order)
        if not v:
            return _result("convex-geometry", entry.name, False, {**counts, "extensions": n},
                           {"check": "supersolvable", "order": [entry.label(x) for x in order], **v.witness})
    counts["extensions"] = n
    return _result("convex-geometry", entry.name, True, counts,
                   summary=f"family: {len(fam)}, extensions: {n}")


def _non_extension_orders(entry: Entry, extensions: list[tuple]) -> list[tuple]:
    """Reversals and adjacent swaps of extensions, plus the reversed index
    order: deterministic orders that are mostly not linear extensions."""
    plus = tuple(entry.lattice.plus)
    out = {plus[::-1]: None}
    for ext in extensions[:50]:
        out[ext[::-1]] = None
        for k in range(len(ext) - 1):
            sw = ext[:k] + (ext[k + 1], ext[k]) + ext[k + 2:]
            out[sw] = None
    return list(out)


def supersolvable(entry: Entry, max_extensions: int = DEFAULT_MAX_EXTENSIONS, **_) -> dict:
    """The removal form and the closure form of supersolvability agree on the
    building-set family for extensions and non-extensions, and the upper
    ideals of L pass for every extension of L."""
    fam = _family(entry)
    cache = SupersolvabilityCache(fam.closure_operator())
    exts = _extension_orders(entry, max_extensions)
    orders = exts + _non_extension_orders(entry, exts)
    passed = 0
    for order in orders:
        a, b = cache.convex_geometry(order), cache.closure_operator(order)
        if bool(a) != bool(b):
            return _result("supersolvable", entry.name, False, {"orders": len(orders)},
                           {"order": [entry.label(x) for x in order], "convex_geometry": bool(a),
                            "closure_operator": bool(b)})
        passed += bool(a)
    L = entry.lattice
    ideals = upper_ideals(L)
    up_cache = SupersolvabilityCache(ClosureOperator(ideals))
    n_up = 0
    for order in linear_extensions(L, limit=max_extensions):
        n_up += 1
        a, b = up_cache.convex_geometry(order), up_cache.closure_operator(order)
        if not (a and b):
            return _result("supersolvable", entry.name, False, {"orders": len(orders), "upper_ideal_orders": n_up},
                           {"family": "upper_ideals", "order": [entry.label(x) for x in order],
                            "convex_geometry": bool(a), "closure_operator": bool(b)})
    counts = {"orders": len(orders), "supersolvable_orders": passed,
              "upper_ideals": len(ideals), "upper_ideal_orders": n_up}
    return _result("supersolvable", entry.name, True, counts,
                   summary=f"orders: {len(orders)}, agree; upper ideals: {len(ideals)} over {n_up} extensions")


def closure(entry: Entry, seeds=DEFAULT_SEEDS, **_) -> dict:
    """The closure algorithm returns the smallest building set containing X."""
    L = entry.lattice
    masks = _family(entry).masks
    subsets, exhaustive = _plus_subsets(L, CLOSURE_EXHAUSTIVE, CLOSURE_SAMPLES, seeds)
    max_rounds = 0
    for X in subsets:
        got, k = _closure_rounds(L, X)
        want = L.plus_mask
        for m in masks:
            if X & ~m == 0:
                want &= m
        if got != want:
            return _result("closure", entry.name, False, {"subsets": len(subsets)},
                           {"X": _labels(entry, X), "closure": _labels(entry, got), "expected": _labels(entry, want)})
        max_rounds = max(max_rounds, k)
    return _result("closure", entry.name, True,
                   {"subsets": len(subsets), "exhaustive": exhaustive, "max_rounds": max_rounds},
                   summary=f"{len(subsets)} subsets, max rounds: {max_rounds}")


def rank(entry: Entry, **_) -> dict:
    L = entry.lattice
    fam = _family(entry)
    sys = fam.set_system()
    irr = plus_mask(L, L.irreducible_mask)

    def r(pm: int) -> int:
        return popcount(pm & ~irr)

    def join(a: int, b: int) -> int:
        return plus_mask(L, _closure_rounds(L, lattice_mask(L, a | b))[0])

    rf = RankedFamily(sys, r)
    for name, v in (("ranked", check_ranked(rf)), ("supermodular", check_supermodular(rf, join))):
        if not v:
            return _result("rank", entry.name, False, {"family": len(fam)}, {"check": name, **v.witness})
    for B in fam:
        if building_rank(B) != r(plus_mask(L, B.mask)):
            return _result("rank", entry.name, False, {"family": len(fam)}, {"building_set": B.members})
    pairs = len(fam) * (len(fam) + 1) // 2
    return _result("rank", entry.name, True, {"family": len(fam), "pairs": pairs},
                   summary=f"family: {len(fam)}, pairs: {pairs}, supermodular, covers rank 1")


def extreme(entry: Entry, **_) -> dict:
    L = entry.lattice
    fam = _family(entry)
    op = fam.closure_operator()
    for B in fam:
        a = plus_mask(L, _extreme_mask(L, B.mask))
        b = extreme_mask(op, plus_mask(L, B.mask))
        if a != b:
            return _result("extreme", entry.name, False, {"family": len(fam)},
                           {"building_set": [entry.label(x) for x in B.members],
                            "extreme_members": _labels(entry, lattice_mask(L, a)),
                            "extreme_points": _labels(entry, lattice_mask(L, b))})
    return _result("extreme", entry.name, True, {"family": len(fam)},
                   summary=f"family: {len(fam)}, extreme sets agree")


def nested(entry: Entry, **_) -> dict:
    """Factors lemma on every face, and downward closure, for every nested
    complex of the family."""
    fam = _family(entry)
    faces = 0
    for B in fam:
        cx = nested_complex(B)
        fs = set(cx.faces)
        for f in cx.faces:
            faces += 1
            for v in bits(f):
                if f & ~(1 << v) not in fs:
                    return _result("nested", entry.name, False, {"faces": faces},
                                   {"check": "downward_closed", "face": _labels(entry, f)})
            v = check_factors_lemma(B, f)
            if not v:
                return _result("nested", entry.name, False, {"faces": faces},
                               {"check": "factors", "building_set": [entry.label(x) for x in B.members],
                                "face": _labels(entry, f), **(v.witness or {})})
    return _result("nested", entry.name, True, {"family": len(fam), "faces": faces},
                   summary=f"family: {len(fam)}, faces: {faces}")


def _negative_control(ee: EmbeddingEntry) -> dict | None:
    """A target building set missing some source irreducible whose
    restriction is not a building set of the source."""
    e = ee.embedding
    L, K = e.source, e.target
    need = e.push(L.irreducible_mask)
    B = building_closure(K, K.irreducible_mask)
    if need & ~B.mask == 0:
        return None
    res = restrict_building_set(e, B)
    return {"building_set": [ee.target.label(x) for x in B.members],
            "restriction": [ee.source.label(x) for x in res.members],
            "contains_source_irreducibles": res.contains_source_irreducibles,
            "restriction_is_building_set": bool(is_building_set(L, res.mask))}


_TARGET_KEYS = ("irreducible", "building_set", "antichain", "join_in_K")


def label_counterexample(src, tgt, witness: dict | None) -> dict | None:
    """Replace lattice elements in a restriction counterexample by labels."""
    if witness is None:
        return None
    out = {}
    for k, v in witness.items():
        if k in ("part", "reason"):
            out[k] = v
            continue
        label = tgt.label if k in _TARGET_KEYS else src.label
        if k == "symmetric_difference":
            out[k] = [[label(x) for x in xs] for xs in v]
        elif isinstance(v, (list, tuple)):
            out[k] = [label(x) for x in v]
        else:
            out[k] = label(v)
    return out


def restriction(ee: EmbeddingEntry, strategy: str = "auto", **_) -> dict:
    rep = verify_restriction_theorem(ee.embedding, strategy)
    counts = rep.to_json()
    counts.pop("counterexample")
    control = _negative_control(ee)
    holds = rep.holds and (control is None or not control["restriction_is_building_set"])
    out = _result("restriction", ee.name, holds, counts, label_counterexample(ee.source, ee.target, rep.counterexample),
                  summary=f"{rep.restricted} building sets restricted, {rep.distinct_images} distinct image"
                          + ("" if rep.distinct_images == 1 else "s"))
    if control is not None:
        out["negative_control"] = control
    return out


def fans(entry: Entry, allow_no_top: bool = False, **_) -> dict:
    """Corollary pipeline for every building set containing the top flat,
    plus a completeness probe of the nestohedral fans of free matroids."""
    M = entry.matroid
    if M is None:
        return _result("fans", entry.name, False, {}, {"reason": "not a matroid"})
    L = M.flats
    top = L.i(M.top)
    tot = {"building_sets": 0, "inner_cones": 0, "outer_cones": 0,
           "unimodular_inner": 0, "unimodular_outer": 0}
    subfan = True
    witness = None
    for B in _family(entry):
        if not allow_no_top and not B.mask >> top & 1:
            continue
        rep = corollary_pipeline(M, B, allow_no_top)
        tot["building_sets"] += 1
        for k in ("inner_cones", "outer_cones", "unimodular_inner", "unimodular_outer"):
            tot[k] += getattr(rep, k)
        subfan = subfan and rep.subfan
        if not rep.holds and witness is None:
            witness = {"building_set": [M.label(x) for x in B.members], **rep.to_json()}
    holds = witness is None
    if M.is_free:
        probe = _completeness(M)
        tot["grid_points"] = probe["points"]
        if probe["missed"] is not None and holds:
            holds, witness = False, {"check": "completeness", "point": probe["missed"]}
    summary = (f"cones: {tot['inner_cones']}, unimodular: {tot['unimodular_inner']}/{tot['inner_cones']}, "
               f"subfan: {'yes' if subfan else 'no'}")
    return _result("fans", entry.name, holds, tot, witness, summary)


def _completeness(M) -> dict:
    """Every point of the fixed grid lies in some maximal cone of the
    nestohedral fan of the minimum and of the maximum building set."""
    L = M.flats
    pts = completeness_grid(M.n)
    for B in (building_closure(L, [M.top]), BuildingSet(L, L.plus_mask)):
        fan = bergman_fan(M, B)
        cones = fan.maximal_cones()
        for p in pts:
            if not locate(fan, p, cones):
                return {"points": len(pts), "missed": list(p)}
    return {"points": len(pts), "missed": None}


SUITE_FUNCS: dict[str, Callable[..., dict]] = {
    "characterization": characterization,
    "convex-geometry": convex_geometry,
    "supersolvable": supersolvable,
    "closure": closure,
    "rank": rank,
    "extreme": extreme,
    "nested": nested,
    "restriction": restriction,
    "fans": fans,
}


def plan(suites: list[str], lattices: list[str] | None, embeddings: list[str] | None) -> list[tuple[str, str]]:
    """(suite, target name) pairs in a fixed order."""
    out = []
    for s in suites:
        if s == "restriction":
            out += [(s, n) for n in (embeddings if embeddings is not None else corpus.EMBEDDINGS)]
        elif s == "fans":
            names = lattices if lattices is not None else corpus.MATROIDS
            out += [(s, n) for n in names]
        else:
            out += [(s, n) for n in (lattices if lattices is not None else corpus.LATTICES)]
    return out


def run_one(suite: str, name: str, entry: Entry | EmbeddingEntry | None = None, **opts) -> dict:
    if entry is None:
        entry = corpus.get_embedding(name) if suite == "restriction" else corpus.get(name)
    return SUITE_FUNCS[suite](entry, **opts)


__all__ = ["SUITES", "LATTICE_SUITES", "SUITE_FUNCS", "plan", "run_one", "DEFAULT_MAX_EXTENSIONS"]
