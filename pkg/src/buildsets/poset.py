"""Finite posets and meet-semilattices.

Elements are arbitrary hashable labels kept in a fixed canonical order (the
order they were supplied in). Internally every element is addressed by its
index in that order and subsets are int bitmasks over those indices, so
``down[i]`` is the mask of everything below element ``i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import (
    AxiomViolation,
    InternalInconsistency,
    NotLinearExtension,
    NotMeetSemilattice,
    SizeLimit,
    ValidationError,
)

ISOMORPHISM_LIMIT = 64


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinitePoset:
    """An immutable finite partial order.

    Build one with :meth:`from_relation`, :meth:`from_covers` or
    :meth:`from_function`; all of them validate the three poset axioms.
    """

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int]):
        self.elements: tuple = tuple(elements)
        self.index: dict = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            dup = next(x for x in self.elements if self.elements.count(x) > 1)
            raise ValidationError(f"duplicate element label {dup!r}", {"element": dup})
        self._up: tuple[int, ...] = tuple(up)
        down = [0] * len(self.elements)
        for i, m in enumerate(self._up):
            for j in bits(m):
                down[j] |= 1 << i
        self._down: tuple[int, ...] = tuple(down)
        self._check_axioms()

    # construction -----------------------------------------------------

    @classmethod
    def from_relation(cls, elements, pairs: Iterable[tuple]) -> "FinitePoset":
        """Pairs (x, y) meaning x <= y. Reflexive pairs are implied;
        transitivity is checked, not inferred."""
        elements = list(elements)
        index = _index_or_raise(elements)
        up = [1 << i for i in range(len(elements))]
        for x, y in pairs:
            up[_lookup(index, x)] |= 1 << _lookup(index, y)
        return cls(elements, up)

    @classmethod
    def from_covers(cls, elements, covers: Iterable[tuple]) -> "FinitePoset":
        """Pairs (x, y) meaning y covers x; the order is their reflexive
        transitive closure."""
        elements = list(elements)
        index = _index_or_raise(elements)
        n = len(elements)
        succ = [0] * n
        for x, y in covers:
            succ[_lookup(index, x)] |= 1 << _lookup(index, y)
        up = [0] * n
        for i in range(n):
            seen, frontier = 1 << i, 1 << i
            while frontier:
                nxt = 0
                for j in bits(frontier):
                    nxt |= succ[j]
                frontier = nxt & ~seen
                seen |= nxt
            up[i] = seen
        return cls(elements, up)

    @classmethod
    def from_function(cls, elements, leq: Callable[[object, object], bool]) -> "FinitePoset":
        elements = list(elements)
        n = len(elements)
        up = [0] * n
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                if i == j or leq(x, y):
                    up[i] |= 1 << j
        return cls(elements, up)

    def _check_axioms(self) -> None:
        n = len(self.elements)
        for i in range(n):
            if not self._up[i] >> i & 1:
                raise AxiomViolation("reflexivity", {"x": self.elements[i]})
        for i in range(n):
            both = self._up[i] & self._down[i] & ~(1 << i)
            if both:
                j = next(bits(both))
                raise AxiomViolation(
                    "antisymmetry", {"x": self.elements[i], "y": self.elements[j]}
                )
        for i in range(n):
            for j in bits(self._up[i]):
                missing = self._up[j] & ~self._up[i]
                if missing:
                    k = next(bits(missing))
                    raise AxiomViolation(
                        "transitivity",
                        {"x": self.elements[i], "y": self.elements[j], "z": self.elements[k]},
                    )

    # basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self)} elements)"

    def i(self, x) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise ValidationError(f"unknown element {x!r}", {"element": x}) from None

    def leq(self, x, y) -> bool:
        return bool(self._up[self.i(x)] >> self.i(y) & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x, y) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def mask(self, xs: Iterable) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.i(x)
        return m

    def subset(self, mask: int) -> list:
        return [self.elements[j] for j in bits(mask)]

    def down(self, x) -> list:
        return self.subset(self._down[self.i(x)])

    def up(self, x) -> list:
        return self.subset(self._up[self.i(x)])

    @cached_property
    def cover_pairs(self) -> tuple[tuple[int, int], ...]:
        """Index pairs (i, j) with j covering i."""
        out = []
        for i in range(len(self)):
            strict = self._up[i] & ~(1 << i)
            for j in bits(strict):
                between = strict & self._down[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        return tuple(out)

    def covers(self) -> list[tuple]:
        return [(self.elements[i], self.elements[j]) for i, j in self.cover_pairs]

    def minimal(self) -> list:
        return [x for i, x in enumerate(self.elements) if self._down[i] == 1 << i]

    def maximal(self) -> list:
        return [x for i, x in enumerate(self.elements) if self._up[i] == 1 << i]

    def _max_of(self, mask: int) -> int:
        """Mask of the maximal elements within ``mask``."""
        out = 0
        for j in bits(mask):
            if not (self._up[j] & mask & ~(1 << j)):
                out |= 1 << j
        return out

    def is_antichain(self, xs: Iterable) -> bool:
        m = self.mask(xs)
        return all(not (self._up[j] & m & ~(1 << j)) for j in bits(m))

    def subposet(self, xs: Iterable) -> "FinitePoset":
        keep = sorted(self.i(x) for x in set(xs))
        pos = {j: k for k, j in enumerate(keep)}
        up = []
        for j in keep:
            up.append(sum(1 << pos[t] for t in bits(self._up[j]) if t in pos))
        return FinitePoset([self.elements[j] for j in keep], up)

    def relation_pairs(self) -> list[tuple]:
        return [
            (self.elements[i], self.elements[j])
            for i in range(len(self))
            for j in bits(self._up[i])
        ]


def _index_or_raise(elements: list) -> dict:
    index = {}
    for k, x in enumerate(elements):
        if x in index:
            raise ValidationError(f"duplicate element label {x!r}", {"element": x})
        index[x] = k
    return index


def _lookup(index: dict, x):
    try:
        return index[x]
    except KeyError:
        raise ValidationError(f"relation mentions unknown element {x!r}", {"element": x}) from None


def validate_poset(elements, leq: Iterable[tuple]) -> FinitePoset:
    return FinitePoset.from_relation(elements, leq)


class MeetSemilattice(FinitePoset):
    """A finite poset in which every pair has a meet.

    Construction fails with :class:`NotMeetSemilattice` naming the first
    pair without a greatest lower bound. ``bottom`` is the 0̂.
    """

    def __init__(self, elements, up):
        super().__init__(elements, up)
        n = len(self.elements)
        if n == 0:
            raise NotMeetSemilattice("empty poset has no minimum")
        meet = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                lower = self._down[a] & self._down[b]
                m = self._greatest(lower)
                if m is None:
                    raise NotMeetSemilattice(
                        f"no meet for {self.elements[a]!r} and {self.elements[b]!r}",
                        {"x": self.elements[a], "y": self.elements[b]},
                    )
                meet[a][b] = meet[b][a] = m
        self._meet = tuple(tuple(row) for row in meet)
        mins = [i for i in range(n) if self._down[i] == 1 << i]
        self._bottom = mins[0]
        tops = [i for i in range(n) if self._up[i] == 1 << i]
        self._top = tops[0] if len(tops) == 1 and self._down[tops[0]] == (1 << n) - 1 else None

    @classmethod
    def from_poset(cls, P: FinitePoset) -> "MeetSemilattice":
        return cls(P.elements, P._up)

    def _greatest(self, mask: int) -> int | None:
        for j in bits(mask):
            if self._down[j] == mask:
                return j
        return None

    def _least(self, mask: int) -> int | None:
        for j in bits(mask):
            if self._up[j] == mask:
                return j
        return None

    @property
    def bottom(self):
        return self.elements[self._bottom]

    @property
    def top(self):
        """The 1̂, or None when the semilattice has several maximal elements."""
        return None if self._top is None else self.elements[self._top]

    @property
    def is_lattice(self) -> bool:
        return self._top is not None

    @cached_property
    def plus_mask(self) -> int:
        return ((1 << len(self)) - 1) & ~(1 << self._bottom)

    @property
    def plus(self) -> list:
        """L⁺, every element except the bottom, in canonical order."""
        return self.subset(self.plus_mask)

    def meet(self, x, y):
        return self.elements[self._meet[self.i(x)][self.i(y)]]

    @cached_property
    def _join(self) -> tuple[tuple[int, ...], ...]:
        n = len(self)
        table = [[-1] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                upper = self._up[a] & self._up[b]
                j = self._least(upper) if upper else None
                table[a][b] = table[b][a] = -1 if j is None else j
        return tuple(tuple(r) for r in table)

    def _join_idx(self, idxs: Iterable[int]) -> int | None:
        acc = self._bottom
        for j in idxs:
            acc = self._join[acc][j]
            if acc < 0:
                return None
        return acc

    def try_join(self, xs: Iterable):
        """Least upper bound of ``xs``, or None when it does not exist in L."""
        xs = list(xs)
        if not xs:
            raise ValueError("try_join needs a nonempty set")
        upper = (1 << len(self)) - 1
        for x in xs:
            upper &= self._up[self.i(x)]
        if not upper:
            return None
        # in a finite meet-semilattice a nonempty set of upper bounds has a meet,
        # and that meet is an upper bound itself
        j = self._least(upper)
        return None if j is None else self.elements[j]

    def join(self, x, y):
        return self.try_join([x, y])

    def interval(self, lo, hi) -> "Interval":
        a, b = self.i(lo), self.i(hi)
        if not self._up[a] >> b & 1:
            raise ValidationError(f"{lo!r} is not below {hi!r}", {"lo": lo, "hi": hi})
        carrier = self.subposet(self.subset(self._up[a] & self._down[b]))
        return Interval(lo, hi, MeetSemilattice.from_poset(carrier))

    # irreducibles and factorization ----------------------------------

    def _join_map(self, factors: Sequence[int], x: int) -> dict | None:
        """Tuple-of-components -> image index for the join map from the
        product of [0̂, f] (f in ``factors``) onto [0̂, x], or None when that
        map is not a poset isomorphism."""
        target = self._down[x]
        downs = [list(bits(self._down[f])) for f in factors]
        size = 1
        for d in downs:
            size *= len(d)
        if size != popcount(target):
            return None
        image: dict[int, tuple] = {}
        for combo in itertools.product(*downs):
            j = self._join_idx(combo)
            if j is None or not target >> j & 1 or j in image:
                return None
            image[j] = combo
        # a bijective monotone map is an isomorphism iff its inverse is
        # monotone; checking covers of the target suffices
        for a, b in self._covers_within(target):
            ca, cb = image[a], image[b]
            for u, v in zip(ca, cb):
                if not self._up[u] >> v & 1:
                    return None
        return {combo: j for j, combo in image.items()}

    def _covers_within(self, mask: int):
        for i, j in self.cover_pairs:
            if mask >> i & 1 and mask >> j & 1:
                yield i, j

    def _splitting_pair(self, x: int) -> tuple[int, int] | None:
        """Some (a, b), both strictly between 0̂ and x, with
        [0̂, a] × [0̂, b] ≅ [0̂, x] via the join map; None if x is irreducible."""
        inner = self._down[x] & ~(1 << x) & ~(1 << self._bottom)
        total = popcount(self._down[x])
        cands = list(bits(inner))
        for p, a in enumerate(cands):
            sa = popcount(self._down[a])
            if total % sa:
                continue
            for b in cands[p + 1:]:
                if self._meet[a][b] != self._bottom or self._join[a][b] != x:
                    continue
                if sa * popcount(self._down[b]) != total:
                    continue
                if self._join_map((a, b), x) is not None:
                    return a, b
        return None

    @cached_property
    def irreducible_mask(self) -> int:
        m = 0
        for x in bits(self.plus_mask):
            if self._splitting_pair(x) is None:
                m |= 1 << x
        return m


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    carrier: MeetSemilattice


@dataclass
class PosetIsomorphism:
    source: FinitePoset
    target: FinitePoset
    map: dict = field(default_factory=dict)

    def verify(self) -> bool:
        if len(self.source) != len(self.target) or len(self.map) != len(self.source):
            return False
        if len(set(self.map.values())) != len(self.map):
            return False
        for x in self.source:
            for y in self.source:
                if self.source.leq(x, y) != self.target.leq(self.map[x], self.map[y]):
                    return False
        return True

    def inverse(self) -> "PosetIsomorphism":
        return PosetIsomorphism(self.target, self.source, {v: k for k, v in self.map.items()})

    def then(self, other: "PosetIsomorphism") -> "PosetIsomorphism":
        return PosetIsomorphism(self.source, other.target, {k: other.map[v] for k, v in self.map.items()})


def meet(L: MeetSemilattice, x, y):
    return L.meet(x, y)


def try_join(L: MeetSemilattice, xs: Iterable):
    return L.try_join(xs)


def irreducibles(L: MeetSemilattice) -> list:
    """I(L): elements x of L⁺ whose interval [0̂, x] is not a product of two
    posets with at least two elements each."""
    return L.subset(L.irreducible_mask)


def max_below(P: FinitePoset, S: Iterable, x) -> list:
    """Maximal elements of {s in S : s <= x}, in canonical order."""
    m = P.mask(S) & P._down[P.i(x)]
    return P.subset(P._max_of(m))


def factorize_interval(L: MeetSemilattice, x) -> tuple[list, PosetIsomorphism]:
    """Elementary divisors of ``x`` and the join-map isomorphism from the
    product of their lower intervals onto [0̂, x]."""
    xi = L.i(x)
    if xi == L._bottom:
        raise ValidationError("factorize_interval needs an element of L⁺", {"x": x})
    divisors = L._max_of(L.irreducible_mask & L._down[xi])
    idx = list(bits(divisors))
    table = L._join_map(idx, xi)
    if table is None:
        raise InternalInconsistency(
            f"join map of elementary divisors of {x!r} is not an isomorphism",
            {"x": x, "divisors": L.subset(divisors)},
        )
    factors = [L.interval(L.bottom, L.elements[d]).carrier for d in idx]
    source = direct_product(factors)
    target = L.interval(L.bottom, x).carrier
    mapping = {
        tuple(L.elements[c] for c in combo): L.elements[j] for combo, j in table.items()
    }
    return L.subset(divisors), PosetIsomorphism(source, target, mapping)


def is_linear_extension(P: FinitePoset, order: Sequence) -> bool:
    if len(order) != len(P) or set(order) != set(P.elements):
        return False
    pos = {x: k for k, x in enumerate(order)}
    return all(pos[P.elements[i]] <= pos[P.elements[j]] for i, j in P.cover_pairs)


def check_linear_extension(P: FinitePoset, order: Sequence) -> None:
    if not is_linear_extension(P, order):
        raise NotLinearExtension("order is not a linear extension of the poset", {"order": list(order)})


def linear_extensions(P: FinitePoset, limit: int | None = None) -> Iterator[tuple]:
    """Topological orders of P in lexicographic order of element indices."""
    n = len(P)
    strict_down = [P._down[i] & ~(1 << i) for i in range(n)]
    order: list[int] = []

    def rec(placed: int):
        if len(order) == n:
            yield tuple(P.elements[i] for i in order)
            return
        for i in range(n):
            if not placed >> i & 1 and not strict_down[i] & ~placed:
                order.append(i)
                yield from rec(placed | 1 << i)
                order.pop()

    gen = rec(0)
    return gen if limit is None else itertools.islice(gen, limit)


def _signature(P: FinitePoset, i: int) -> tuple:
    down, up = P._down[i], P._up[i]
    covers_up = sum(1 for a, _ in P.cover_pairs if a == i)
    covers_down = sum(1 for _, b in P.cover_pairs if b == i)
    return popcount(down), popcount(up), covers_down, covers_up


def is_isomorphic(P: FinitePoset, Q: FinitePoset) -> PosetIsomorphism | None:
    """A witness isomorphism P -> Q, or None. Backtracking over candidates
    with matching down/up-set sizes and cover degrees."""
    if len(P) > ISOMORPHISM_LIMIT or len(Q) > ISOMORPHISM_LIMIT:
        raise SizeLimit(f"isomorphism testing is limited to {ISOMORPHISM_LIMIT} elements")
    if len(P) != len(Q):
        return None
    n = len(P)
    sp = [_signature(P, i) for i in range(n)]
    sq = [_signature(Q, i) for i in range(n)]
    if sorted(sp) != sorted(sq):
        return None
    # placing in order of down-set size keeps comparisons with already-placed
    # elements informative
    order = sorted(range(n), key=lambda i: (sp[i][0], i))
    cands = {i: [j for j in range(n) if sq[j] == sp[i]] for i in range(n)}
    assign: dict[int, int] = {}
    used = 0

    def consistent(i: int, j: int) -> bool:
        for a, b in assign.items():
            if (P._up[a] >> i & 1) != (Q._up[b] >> j & 1):
                return False
            if (P._up[i] >> a & 1) != (Q._up[j] >> b & 1):
                return False
        return True

    def rec(k: int) -> bool:
        nonlocal used
        if k == n:
            return True
        i = order[k]
        for j in cands[i]:
            if used >> j & 1 or not consistent(i, j):
                continue
            assign[i] = j
            used |= 1 << j
            if rec(k + 1):
                return True
            del assign[i]
            used &= ~(1 << j)
        return False

    if not rec(0):
        return None
    return PosetIsomorphism(P, Q, {P.elements[a]: Q.elements[b] for a, b in assign.items()})


def direct_product(Ps: Sequence[FinitePoset]) -> FinitePoset:
    """Componentwise order on tuples of labels. Returns a MeetSemilattice
    when every factor is one."""
    Ps = list(Ps)
    combos = list(itertools.product(*(range(len(P)) for P in Ps)))
    pos = {c: k for k, c in enumerate(combos)}
    up = []
    for c in combos:
        m = 0
        for d in itertools.product(*(list(bits(P._up[ci])) for P, ci in zip(Ps, c))):
            m |= 1 << pos[d]
        up.append(m)
    elements = [tuple(P.elements[ci] for P, ci in zip(Ps, c)) for c in combos]
    if all(isinstance(P, MeetSemilattice) for P in Ps):
        return MeetSemilattice(elements, up)
    return FinitePoset(elements, up)


def hasse_dot(P: FinitePoset, label: Callable[[object], str] = str, name: str = "hasse") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, x in enumerate(P.elements):
        lines.append(f'  n{i} [label="{_dot_escape(label(x))}"];')
    for i, j in P.cover_pairs:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
