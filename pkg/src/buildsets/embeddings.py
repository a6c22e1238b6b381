"""Meet-semilattice order embeddings and restriction of building sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .building import (
    BuildingSet,
    _closure_rounds,
    enumerate_building_sets,
    is_building_set,
)
from .errors import NotInjective, NotMeetPreserving, NotOrderEmbedding, ValidationError
from .nested import _nested_mask_witness, nested_complex
from .poset import MeetSemilattice, bits, popcount
from .setsystems import PASS, Verdict

# above this many reducible target elements the restriction theorem is
# checked through closures instead of enumerating B(K)
EXHAUSTIVE_REDUCIBLE_LIMIT = 16


@dataclass
class SemilatticeEmbedding:
    source: MeetSemilattice = field(repr=False)
    target: MeetSemilattice = field(repr=False)
    map: dict

    def __post_init__(self):
        L, K = self.source, self.target
        self._img = [K.i(self.map[x]) for x in L.elements]
        self._pre = {k: i for i, k in enumerate(self._img)}
        self.image_mask = sum(1 << k for k in self._img)

    def __call__(self, x):
        return self.map[x]

    def push(self, m: int) -> int:
        """Source mask to target mask."""
        return sum(1 << self._img[i] for i in bits(m))

    def pull(self, m: int) -> int:
        """Target mask to the source mask of its preimage."""
        return sum(1 << self._pre[k] for k in bits(m & self.image_mask))


def validate_embedding(L: MeetSemilattice, K: MeetSemilattice, mapping: dict) -> SemilatticeEmbedding:
    missing = [x for x in L.elements if x not in mapping]
    if missing:
        raise ValidationError("map must be total on the source", {"missing": missing[0]})
    for x in L.elements:
        if mapping[x] not in K.index:
            raise ValidationError("map sends an element outside the target", {"x": x, "image": mapping[x]})
    seen = {}
    for x in L.elements:
        y = mapping[x]
        if y in seen:
            raise NotInjective("two elements share an image", {"x": seen[y], "y": x, "image": y})
        seen[y] = x
    for x in L.elements:
        for y in L.elements:
            if L.leq(x, y) != K.leq(mapping[x], mapping[y]):
                raise NotOrderEmbedding("order is not preserved and reflected", {"x": x, "y": y})
    for x in L.elements:
        for y in L.elements:
            if mapping[L.meet(x, y)] != K.meet(mapping[x], mapping[y]):
                raise NotMeetPreserving("meets are not preserved", {"x": x, "y": y})
    return SemilatticeEmbedding(L, K, dict(mapping))


def is_consistent(e: SemilatticeEmbedding) -> Verdict:
    """Every irreducible of K below f(x) is the image of an irreducible of L
    below x, for each x in L⁺."""
    L, K = e.source, e.target
    src_irr = e.push(L.irreducible_mask)
    for x in bits(L.plus_mask):
        fx = e._img[x]
        bad = K.irreducible_mask & K._down[fx] & ~src_irr
        if bad:
            return Verdict(False, {"x": L.elements[x], "irreducible": K.elements[next(bits(bad))]})
    return PASS


@dataclass
class JoinComparison:
    source_join: object
    target_join: object
    holds: bool

    def to_json(self, label=str) -> dict:
        lab = lambda v: None if v is None else label(v)
        return {"source_join": lab(self.source_join), "target_join": lab(self.target_join),
                "holds": self.holds}


def compare_joins(e: SemilatticeEmbedding, xs: Iterable) -> JoinComparison:
    """Join of xs in L against the join of their images in K; when the L-join
    exists the K-join must exist and lie below its image."""
    xs = list(xs)
    L, K = e.source, e.target
    jl = L.try_join(xs)
    jk = K.try_join([e(x) for x in xs])
    if jl is None:
        return JoinComparison(None, jk, True)
    ok = jk is not None and K.leq(jk, e(jl))
    return JoinComparison(jl, jk, ok)


@dataclass
class Restriction:
    members: list
    mask: int
    consistent: bool
    contains_source_irreducibles: bool

    @property
    def hypotheses_hold(self) -> bool:
        return self.consistent and self.contains_source_irreducibles


def restrict_building_set(e: SemilatticeEmbedding, B) -> Restriction:
    """Preimage of B ∩ f(L⁺). Returned even when the hypotheses that
    guarantee a building set of L fail; the flags say which."""
    L, K = e.source, e.target
    bmask = B.mask if isinstance(B, BuildingSet) else K.mask(B)
    m = e.pull(bmask) & L.plus_mask
    return Restriction(
        L.subset(m), m,
        consistent=bool(is_consistent(e)),
        contains_source_irreducibles=e.push(L.irreducible_mask) & ~bmask == 0,
    )


@dataclass
class RestrictionReport:
    consistent: bool
    strategy: str
    part1: bool = False
    part2: bool = False
    restricted: int = 0
    distinct_images: int = 0
    source_family: int = 0
    faces_checked: int = 0
    counterexample: dict | None = None

    @property
    def holds(self) -> bool:
        return self.consistent and self.part1 and self.part2

    def to_json(self) -> dict:
        return {
            "consistent": self.consistent,
            "strategy": self.strategy,
            "part1": self.part1,
            "part2": self.part2,
            "restricted": self.restricted,
            "distinct_images": self.distinct_images,
            "source_family": self.source_family,
            "faces_checked": self.faces_checked,
            "counterexample": self.counterexample,
        }


def _reducible_count(K: MeetSemilattice) -> int:
    return popcount(K.plus_mask & ~K.irreducible_mask)


def verify_restriction_theorem(e: SemilatticeEmbedding, strategy: str = "auto") -> RestrictionReport:
    """Check that restricting building sets of K that contain f(I(L)) gives
    exactly B(L), and that nested sets of each restriction stay nested in K.

    ``exhaustive`` enumerates B(K). ``closure`` never does: a subset T of L⁺
    containing I(L) is a restriction iff σ_K(T) ∩ L⁺ = T, and a nested set
    of T fails in K for some B restricting to T iff some antichain's K-join u
    has σ_K(T ∪ {u}) ∩ L⁺ = T. Both reductions are exact.
    """
    L, K = e.source, e.target
    if strategy == "auto":
        strategy = "exhaustive" if _reducible_count(K) <= EXHAUSTIVE_REDUCIBLE_LIMIT else "closure"
    if strategy not in ("exhaustive", "closure"):
        raise ValueError(f"unknown strategy {strategy!r}")
    report = RestrictionReport(consistent=bool(is_consistent(e)), strategy=strategy)
    if not report.consistent:
        report.counterexample = {"reason": "embedding is not consistent", **is_consistent(e).witness}
        return report

    source_family = {b.mask for b in enumerate_building_sets(L)}
    report.source_family = len(source_family)
    need = e.push(L.irreducible_mask)
    complexes = {}

    def source_faces(tmask: int) -> list[int]:
        if tmask not in complexes:
            complexes[tmask] = nested_complex(BuildingSet(L, tmask)).faces
        return complexes[tmask]

    images: set[int] = set()
    if strategy == "exhaustive":
        report.part2 = True
        for B in enumerate_building_sets(K):
            if need & ~B.mask:
                continue
            report.restricted += 1
            t = e.pull(B.mask) & L.plus_mask
            images.add(t)
            if t not in source_family:
                continue
            for f in source_faces(t):
                report.faces_checked += 1
                bad = _nested_mask_witness(K, B.mask, e.push(f))
                if bad is not None and report.part2:
                    report.part2 = False
                    report.counterexample = {
                        "part": 2, "building_set": K.subset(B.mask),
                        "face": L.subset(f), "antichain": K.subset(sum(1 << j for j in bad)),
                    }
    else:
        report.part2 = True
        free = list(bits(L.plus_mask & ~L.irreducible_mask))
        base = L.irreducible_mask
        for k in range(1 << len(free)):
            t = base | sum(1 << free[j] for j in range(len(free)) if k >> j & 1)
            closed, _ = _closure_rounds(K, e.push(t))
            if e.pull(closed) & L.plus_mask != t:
                continue
            images.add(t)
            report.restricted += 1
            if t not in source_family:
                continue
            bad = _part2_by_closure(e, t, source_faces(t), report)
            if bad and report.part2:
                report.part2 = False
                report.counterexample = bad
    report.distinct_images = len(images)
    report.part1 = images == source_family
    if not report.part1 and report.counterexample is None:
        extra = sorted(images ^ source_family)
        report.counterexample = {"part": 1, "symmetric_difference": [L.subset(m) for m in extra[:5]]}
    return report


def _part2_by_closure(e: SemilatticeEmbedding, t: int, faces: list[int], report: RestrictionReport) -> dict | None:
    L, K = e.source, e.target
    tk = e.push(t)
    for f in faces:
        report.faces_checked += 1
        verts = [e._img[i] for i in bits(f)]
        for anti in _antichains(K, verts):
            u = K._join_idx(anti)
            if u is None:
                continue
            closed, _ = _closure_rounds(K, tk | 1 << u)
            if e.pull(closed) & L.plus_mask == t:
                return {"part": 2, "restriction": L.subset(t), "face": L.subset(f),
                        "join_in_K": K.elements[u]}
    return None


def _antichains(P, items: list[int]):
    def rec(start: int, chosen: list[int]):
        for k in range(start, len(items)):
            u = items[k]
            if any(P._up[u] >> c & 1 or P._up[c] >> u & 1 for c in chosen):
                continue
            chosen.append(u)
            if len(chosen) >= 2:
                yield list(chosen)
            yield from rec(k + 1, chosen)
            chosen.pop()
    yield from rec(0, [])
