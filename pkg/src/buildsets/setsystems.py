"""Set systems, closure operators, convex geometries and antimatroids.

Members of a family are int bitmasks over the positions of ``ground``.
Every checker returns a :class:`Verdict`; on failure the witness is the
first counterexample in canonical (ground/family) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .errors import NotIntersectionClosed, ValidationError
from .poset import FinitePoset, bits, popcount


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "witness": self.witness}


PASS = Verdict(True)


class SetSystem:
    def __init__(self, ground: Sequence[Hashable], family: Iterable[int]):
        self.ground = tuple(ground)
        self.index = {x: i for i, x in enumerate(self.ground)}
        if len(self.index) != len(self.ground):
            raise ValidationError("duplicate ground labels")
        self.full = (1 << len(self.ground)) - 1
        fam = set()
        for m in family:
            if m & ~self.full:
                raise ValidationError("family member not contained in ground set", {"mask": m})
            fam.add(m)
        self.family = frozenset(fam)

    @classmethod
    def from_sets(cls, ground, sets: Iterable[Iterable]) -> "SetSystem":
        ground = list(ground)
        index = {x: i for i, x in enumerate(ground)}
        masks = []
        for s in sets:
            m = 0
            for x in s:
                if x not in index:
                    raise ValidationError(f"{x!r} is not in the ground set", {"element": x})
                m |= 1 << index[x]
            masks.append(m)
        return cls(ground, masks)

    def __len__(self) -> int:
        return len(self.family)

    def __contains__(self, m: int) -> bool:
        return m in self.family

    def mask(self, xs: Iterable) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.index[x]
        return m

    def labels(self, m: int) -> list:
        return [self.ground[i] for i in bits(m)]

    def sorted_family(self) -> list[int]:
        return sorted(self.family, key=lambda m: (bin(m).count("1"), tuple(bits(m))))

    def __repr__(self) -> str:
        return f"SetSystem(|E|={len(self.ground)}, |S|={len(self.family)})"


def complement_system(sys: SetSystem) -> SetSystem:
    return SetSystem(sys.ground, (sys.full & ~m for m in sys.family))


def is_intersection_closed(sys: SetSystem) -> Verdict:
    if sys.full not in sys.family:
        return Verdict(False, {"reason": "ground set not in family"})
    fam = sys.sorted_family()
    for p, a in enumerate(fam):
        for b in fam[p + 1:]:
            if a & b not in sys.family:
                return Verdict(False, {"A": sys.labels(a), "B": sys.labels(b)})
    return PASS


class ClosureOperator:
    """σ(X) = intersection of the closed sets containing X."""

    def __init__(self, system: SetSystem):
        v = is_intersection_closed(system)
        if not v:
            raise NotIntersectionClosed("closed sets must contain E and be intersection-closed", v.witness)
        self.system = system
        self._closed = system.sorted_family()

    @classmethod
    def from_sets(cls, ground, sets) -> "ClosureOperator":
        return cls(SetSystem.from_sets(ground, sets))

    def __call__(self, X: int) -> int:
        out = self.system.full
        for c in self._closed:
            if X & ~c == 0:
                out &= c
        return out

    @property
    def closed_sets(self) -> list[int]:
        return list(self._closed)


def closure(op: ClosureOperator, X: Iterable) -> list:
    return op.system.labels(op(op.system.mask(X)))


def is_anti_exchange(op: ClosureOperator) -> Verdict:
    sys = op.system
    n = len(sys.ground)
    for A in op.closed_sets:
        outside = [x for x in range(n) if not A >> x & 1]
        ext = {x: op(A | 1 << x) for x in outside}
        for x in outside:
            for y in outside:
                if x != y and ext[x] >> y & 1 and ext[y] >> x & 1:
                    return Verdict(False, {"A": sys.labels(A), "x": sys.ground[x], "y": sys.ground[y]})
    return PASS


def _removable(sys: SetSystem, A: int) -> int:
    """Elements e of A with A minus e still in the family."""
    return sum(1 << e for e in bits(A) if A & ~(1 << e) in sys.family)


def _addable(sys: SetSystem, A: int) -> int:
    return sum(1 << e for e in range(len(sys.ground)) if not A >> e & 1 and A | 1 << e in sys.family)


def is_convex_geometry(sys: SetSystem) -> Verdict:
    if sys.full not in sys.family:
        return Verdict(False, {"reason": "ground set not in family"})
    fam = sys.sorted_family()
    for A in fam:
        rem = _removable(sys, A)
        for B in fam:
            diff = A & ~B
            if diff and not diff & rem:
                return Verdict(False, {"A": sys.labels(A), "B": sys.labels(B)})
    return PASS


def is_antimatroid(sys: SetSystem) -> Verdict:
    if 0 not in sys.family:
        return Verdict(False, {"reason": "empty set not in family"})
    fam = sys.sorted_family()
    for A in fam:
        add = _addable(sys, A)
        for B in fam:
            diff = B & ~A
            if diff and not diff & add:
                return Verdict(False, {"A": sys.labels(A), "B": sys.labels(B)})
    return PASS


def _positions(sys: SetSystem, order: Sequence) -> list[int]:
    if len(order) != len(sys.ground) or set(order) != set(sys.ground):
        raise ValidationError("order must be a permutation of the ground set", {"order": list(order)})
    pos = [0] * len(sys.ground)
    for k, x in enumerate(order):
        pos[sys.index[x]] = k
    return pos


def _min_by(pos: list[int], mask: int) -> int:
    return min(bits(mask), key=pos.__getitem__)


def is_supersolvable_convex_geometry(sys: SetSystem, order: Sequence) -> Verdict:
    """Removal of the order-minimum of A minus B keeps A closed, for every
    pair with B not containing A."""
    pos = _positions(sys, order)
    if sys.full not in sys.family:
        return Verdict(False, {"reason": "ground set not in family"})
    fam = sys.sorted_family()
    for A in fam:
        rem = _removable(sys, A)
        if rem == A:
            continue
        for B in fam:
            diff = A & ~B
            if diff:
                e = _min_by(pos, diff)
                if not rem >> e & 1:
                    return Verdict(False, {"A": sys.labels(A), "B": sys.labels(B), "e": sys.ground[e]})
    return PASS


def is_supersolvable_closure_operator(op: ClosureOperator, order: Sequence) -> Verdict:
    """Closing A ∪ {e} for closed A only adds elements above e in the order."""
    sys = op.system
    pos = _positions(sys, order)
    for A in op.closed_sets:
        for e in range(len(sys.ground)):
            if A >> e & 1:
                continue
            added = op(A | 1 << e) & ~(A | 1 << e)
            for f in bits(added):
                if pos[f] < pos[e]:
                    return Verdict(False, {"A": sys.labels(A), "e": sys.ground[e], "f": sys.ground[f]})
    return PASS


class SupersolvabilityCache:
    """Order-independent precomputation for checking many orders against the
    same family.

    The removal form fails for an order exactly when, for some closed A, a
    non-removable e ∈ A and a difference d = A minus B containing e, no other
    element of d comes before e. Only the inclusion-minimal sets d minus {e}
    matter per e. The closure form fails exactly when some f added by
    closing A ∪ {e} comes before e, so it reduces to a set of (e, f) pairs.
    """

    def __init__(self, op: ClosureOperator):
        self.op = op
        sys = op.system
        self.always_fails: dict | None = None
        if sys.full not in sys.family:
            self.always_fails = {"reason": "ground set not in family"}
        clauses: dict[int, dict[int, int]] = {}
        for A in op.closed_sets:
            stuck = A & ~_removable(sys, A)
            if not stuck:
                continue
            for B in op.closed_sets:
                d = A & ~B
                for e in bits(d & stuck):
                    clauses.setdefault(e, {}).setdefault(d & ~(1 << e), A)
        self.clauses: list[tuple[int, int, int]] = []
        for e in sorted(clauses):
            ds = sorted(clauses[e], key=lambda m: (popcount(m), m))
            kept: list[int] = []
            for d in ds:
                if not any(k & ~d == 0 for k in kept):
                    kept.append(d)
                    self.clauses.append((e, d, clauses[e][d]))
        pairs: dict[tuple[int, int], int] = {}
        for A in op.closed_sets:
            for e in range(len(sys.ground)):
                if not A >> e & 1:
                    for f in bits(op(A | 1 << e) & ~(A | 1 << e)):
                        pairs.setdefault((e, f), A)
        self.pairs = sorted(pairs.items())

    def convex_geometry(self, order: Sequence) -> Verdict:
        sys = self.op.system
        pos = _positions(sys, order)
        if self.always_fails:
            return Verdict(False, self.always_fails)
        for e, d, A in self.clauses:
            if not d or pos[_min_by(pos, d)] > pos[e]:
                return Verdict(False, {"A": sys.labels(A), "diff": sys.labels(d | 1 << e), "e": sys.ground[e]})
        return PASS

    def closure_operator(self, order: Sequence) -> Verdict:
        sys = self.op.system
        pos = _positions(sys, order)
        for (e, f), A in self.pairs:
            if pos[f] < pos[e]:
                return Verdict(False, {"A": sys.labels(A), "e": sys.ground[e], "f": sys.ground[f]})
        return PASS


def extreme_points(op: ClosureOperator, A: Iterable) -> list:
    sys = op.system
    m = sys.mask(A)
    return [sys.ground[x] for x in bits(m) if not op(m & ~(1 << x)) >> x & 1]


def extreme_mask(op: ClosureOperator, m: int) -> int:
    return sum(1 << x for x in bits(m) if not op(m & ~(1 << x)) >> x & 1)


@dataclass
class RankedFamily:
    system: SetSystem
    rank: Callable[[int], int]
    members: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.members:
            self.members = self.system.sorted_family()


def check_ranked(rf: RankedFamily) -> Verdict:
    """Rank is monotone under inclusion and every inclusion cover raises it
    by exactly one."""
    fam = rf.members
    r = {m: rf.rank(m) for m in fam}
    for a in fam:
        for b in fam:
            if a != b and a & ~b == 0:
                if r[a] > r[b]:
                    return Verdict(False, {"below": rf.system.labels(a), "above": rf.system.labels(b)})
                between = any(c not in (a, b) and a & ~c == 0 and c & ~b == 0 for c in fam)
                if not between and r[b] != r[a] + 1:
                    return Verdict(False, {"cover": [rf.system.labels(a), rf.system.labels(b)],
                                           "ranks": [r[a], r[b]]})
    return PASS


def check_supermodular(rf: RankedFamily, joinof: Callable[[int, int], int],
                       meetof: Callable[[int, int], int] = lambda a, b: a & b) -> Verdict:
    fam = rf.members
    r = {m: rf.rank(m) for m in fam}
    for p, a in enumerate(fam):
        for b in fam[p:]:
            j, m = joinof(a, b), meetof(a, b)
            rj = r[j] if j in r else rf.rank(j)
            rm = r[m] if m in r else rf.rank(m)
            if rj + rm < r[a] + r[b]:
                return Verdict(False, {"x": rf.system.labels(a), "y": rf.system.labels(b)})
    return PASS


def upper_ideals(P: FinitePoset) -> SetSystem:
    """All up-closed subsets of P, as a family over the elements of P."""
    n = len(P)
    found = set()
    # up-closures of antichains enumerate every upper ideal exactly once
    def rec(start: int, ideal: int, blocked: int):
        found.add(ideal)
        for i in range(start, n):
            if not (blocked >> i & 1):
                rec(i + 1, ideal | P._up[i], blocked | P._up[i] | P._down[i])
    rec(0, 0, 0)
    return SetSystem(P.elements, found)
