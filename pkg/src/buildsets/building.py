"""Building sets of a finite meet-semilattice.

A building set is stored as a bitmask over the element indices of its
lattice (the bottom bit is never set). Two independent membership tests are
provided: :func:`is_building_set_definitional` checks the product
factorization of every lower interval through the explicit join map, and
:func:`is_building_set` checks the irreducibles-plus-join-closure criterion
by a pair scan.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvariantBreach, SizeLimit, ValidationError
from .poset import MeetSemilattice, bits, check_linear_extension, popcount
from .setsystems import ClosureOperator, SetSystem, Verdict, PASS

SIZE_LIMIT = 64
# enumeration cost grows with the output; refuse beyond this many sets
ENUMERATION_LIMIT = 2_000_000


@dataclass(frozen=True)
class BuildingSet:
    lattice: MeetSemilattice = field(repr=False, compare=False)
    mask: int
    certificate: str = "characterization"
    rounds: int | None = field(default=None, compare=False)

    @property
    def members(self) -> list:
        return self.lattice.subset(self.mask)

    def __contains__(self, x) -> bool:
        return bool(self.mask >> self.lattice.i(x) & 1)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __iter__(self):
        return iter(self.members)


def _mask_of(L: MeetSemilattice, S) -> int:
    if isinstance(S, BuildingSet):
        return S.mask
    if isinstance(S, int):
        return S
    m = L.mask(S)
    if m >> L._bottom & 1:
        raise ValidationError("building sets live in L⁺; the bottom element is not allowed",
                              {"element": L.bottom})
    return m


def _pair_scan(L: MeetSemilattice, m: int) -> tuple[int, int, int] | None:
    """First (a, b, a∨b) with a, b in m, a∧b ≠ 0̂, join existing and missing."""
    members = list(bits(m))
    bot = L._bottom
    for p, a in enumerate(members):
        for b in members[p + 1:]:
            if L._meet[a][b] == bot:
                continue
            j = L._join[a][b]
            if j >= 0 and not m >> j & 1:
                return a, b, j
    return None


def is_building_set(L: MeetSemilattice, S) -> Verdict:
    """I(L) ⊆ S, and S contains x ∨ y whenever x, y ∈ S meet above 0̂ and
    the join exists."""
    m = _mask_of(L, S)
    missing = L.irreducible_mask & ~m
    if missing:
        return Verdict(False, {"missing_irreducible": L.elements[next(bits(missing))]})
    hit = _pair_scan(L, m)
    if hit:
        a, b, j = hit
        return Verdict(False, {"x": L.elements[a], "y": L.elements[b], "join": L.elements[j]})
    return PASS


class _PhiCache:
    """Memo of join-map verdicts keyed by (x, factor mask); the verdict for x
    depends only on its set of factors."""

    def __init__(self, L: MeetSemilattice):
        self.L = L
        self.memo: dict[tuple[int, int], bool] = {}

    def ok(self, x: int, factors: int) -> bool:
        key = (x, factors)
        if key not in self.memo:
            self.memo[key] = self.L._join_map(list(bits(factors)), x) is not None
        return self.memo[key]


def _phi_cache(L: MeetSemilattice) -> _PhiCache:
    c = L.__dict__.get("_phi_cache")
    if c is None:
        c = L.__dict__["_phi_cache"] = _PhiCache(L)
    return c


def is_building_set_definitional(L: MeetSemilattice, S, certificates: bool = False) -> Verdict:
    """For every x in L⁺ the join map from the product of [0̂, f], f in
    max S_{≤x}, must be a poset isomorphism onto [0̂, x].

    Elements are visited in canonical order; the first failing x is the
    witness. With ``certificates`` the passing verdict carries the factor
    sets of every x.
    """
    m = _mask_of(L, S)
    cache = _phi_cache(L)
    certs = {}
    for x in bits(L.plus_mask):
        factors = L._max_of(m & L._down[x])
        if not cache.ok(x, factors):
            return Verdict(False, {"x": L.elements[x], "factors": L.subset(factors)})
        if certificates:
            certs[L.elements[x]] = L.subset(factors)
    return Verdict(True, {"phi": certs} if certificates else None)


def factors(B: BuildingSet, x) -> list:
    L = B.lattice
    return L.subset(L._max_of(B.mask & L._down[L.i(x)]))


def _closure_rounds(L: MeetSemilattice, m: int) -> tuple[int, int]:
    """Breadth-first join closure; returns (closed mask, number of growth rounds)."""
    bot = L._bottom
    cur = m | L.irreducible_mask
    fresh = cur
    rounds = 0
    while True:
        new = 0
        members = list(bits(cur))
        for a in bits(fresh):
            row_meet, row_join = L._meet[a], L._join[a]
            for b in members:
                if row_meet[b] != bot:
                    j = row_join[b]
                    if j >= 0:
                        new |= 1 << j
        new &= ~cur
        if not new:
            return cur, rounds
        rounds += 1
        cur |= new
        fresh = new


def building_closure(L: MeetSemilattice, X: Iterable = ()) -> BuildingSet:
    """Smallest building set containing X. ``rounds`` is the number of
    breadth-first join rounds before the fixed point."""
    m, k = _closure_rounds(L, _mask_of(L, X))
    return BuildingSet(L, m, "closure", k)


def minimum_building_set(L: MeetSemilattice) -> BuildingSet:
    return BuildingSet(L, L.irreducible_mask, "irreducibles")


def maximum_building_set(L: MeetSemilattice) -> BuildingSet:
    return BuildingSet(L, L.plus_mask, "maximum")


def _extension_index(L: MeetSemilattice, mask: int) -> list[int]:
    """Elements of mask sorted by down-set size, which is a linear extension."""
    return sorted(bits(mask), key=lambda j: (popcount(L._down[j]), j))


def _canonical_key(m: int) -> tuple:
    return (popcount(m), tuple(bits(m)))


@dataclass
class BuildingSetFamily:
    lattice: MeetSemilattice = field(repr=False)
    all_sets: list[BuildingSet]

    def __len__(self) -> int:
        return len(self.all_sets)

    def __iter__(self):
        return iter(self.all_sets)

    @property
    def masks(self) -> list[int]:
        return [b.mask for b in self.all_sets]

    def set_system(self) -> SetSystem:
        """The family as subsets of the ground set L⁺ (positions in L⁺ order)."""
        return SetSystem(self.lattice.plus, [plus_mask(self.lattice, m) for m in self.masks])

    def closure_operator(self) -> ClosureOperator:
        return ClosureOperator(self.set_system())

    def summary(self) -> dict:
        sizes = [len(b) for b in self.all_sets]
        hist = Counter(rounds_from_extremes(b) for b in self.all_sets)
        return {
            "count": len(self.all_sets),
            "min_size": min(sizes),
            "max_size": max(sizes),
            "rounds_histogram": {str(k): hist[k] for k in sorted(hist)},
        }


def plus_mask(L: MeetSemilattice, m: int) -> int:
    """Re-index a lattice mask to positions within L⁺."""
    b = L._bottom
    return (m & ((1 << b) - 1)) | ((m >> (b + 1)) << b)


def lattice_mask(L: MeetSemilattice, pm: int) -> int:
    b = L._bottom
    return (pm & ((1 << b) - 1)) | ((pm >> b) << (b + 1))


def enumerate_building_sets(L: MeetSemilattice, limit: int = ENUMERATION_LIMIT) -> BuildingSetFamily:
    """All building sets of L.

    Reducible elements are decided in a linear-extension order. When an
    element comes up, every pair that could join to it has already been
    decided, so it is either forced in by such a pair or free; every leaf of
    the search is therefore a building set and no branch is wasted.
    """
    if len(L.plus) > SIZE_LIMIT:
        raise SizeLimit(f"building-set enumeration is limited to |L⁺| <= {SIZE_LIMIT}")
    bot = L._bottom
    reducible = _extension_index(L, L.plus_mask & ~L.irreducible_mask)
    # pairs (a, b) below each reducible r with a ∧ b ≠ 0̂ and a ∨ b = r
    makers: dict[int, list[tuple[int, int]]] = {r: [] for r in reducible}
    plus = list(bits(L.plus_mask))
    for p, a in enumerate(plus):
        for b in plus[p + 1:]:
            j = L._join[a][b]
            if j in makers and j not in (a, b) and L._meet[a][b] != bot:
                makers[j].append((a, b))
    out: list[int] = []

    def rec(k: int, m: int):
        if k == len(reducible):
            out.append(m)
            if len(out) > limit:
                raise SizeLimit(f"more than {limit} building sets")
            return
        r = reducible[k]
        forced = any(m >> a & 1 and m >> b & 1 for a, b in makers[r])
        rec(k + 1, m | 1 << r)
        if not forced:
            rec(k + 1, m)

    rec(0, L.irreducible_mask)
    out.sort(key=_canonical_key)
    return BuildingSetFamily(L, [BuildingSet(L, m, "enumeration") for m in out])


def extreme_members(B: BuildingSet) -> list:
    """Reducible members x such that any two other members joining to x
    meet only in 0̂."""
    L = B.lattice
    return L.subset(_extreme_mask(L, B.mask))


def _extreme_mask(L: MeetSemilattice, m: int) -> int:
    bot = L._bottom
    out = 0
    cand = m & ~L.irreducible_mask
    others_all = list(bits(m))
    for x in bits(cand):
        others = [y for y in others_all if y != x and L._down[x] >> y & 1]
        ok = True
        for p, y in enumerate(others):
            for z in others[p + 1:]:
                if L._join[y][z] == x and L._meet[y][z] != bot:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out |= 1 << x
    return out


def rounds_from_extremes(B: BuildingSet) -> int:
    """Rounds the closure algorithm needs to rebuild B from its extreme
    members (a convex geometry's closed set is the closure of its extreme
    points)."""
    L = B.lattice
    m, k = _closure_rounds(L, _extreme_mask(L, B.mask))
    if m != B.mask:
        raise InvariantBreach("building set is not the closure of its extreme members",
                              {"members": B.members})
    return k


def removal_chain(B_from: BuildingSet, B_to: BuildingSet, ext: Sequence) -> list[BuildingSet]:
    """Remove the ext-minimum of the remaining difference one element at a
    time. Every intermediate set is re-certified by the pair scan.

    When B_to is not contained in B_from the chain ends at their
    intersection.
    """
    L = B_from.lattice
    check_linear_extension(L, ext)
    pos = {L.i(x): k for k, x in enumerate(ext)}
    cur, target = B_from.mask, B_from.mask & B_to.mask
    chain = []
    while cur != target:
        x = min(bits(cur & ~B_to.mask), key=pos.__getitem__)
        cur &= ~(1 << x)
        v = is_building_set(L, cur)
        if not v:
            raise InvariantBreach(f"removing {L.elements[x]!r} left a non-building set",
                                  {"removed": L.elements[x], "detail": v.witness})
        chain.append(BuildingSet(L, cur, "removal"))
    return chain


def building_rank(B: BuildingSet) -> int:
    return popcount(B.mask & ~B.lattice.irreducible_mask)
