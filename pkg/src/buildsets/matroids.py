"""Matroids presented by their lattice of flats, plus corpus constructors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CoverAxiomViolation, NotIntersectionClosed, ValidationError
from .poset import MeetSemilattice, bits


def flat_label(flat: frozenset, ground: Sequence) -> str:
    """Short label for a set of ground elements: concatenation when every
    ground label is one character (and "0" for the empty set), braces
    otherwise."""
    order = {x: k for k, x in enumerate(ground)}
    items = sorted(flat, key=order.__getitem__)
    if all(len(str(x)) == 1 for x in ground) and "0" not in map(str, ground):
        return "".join(map(str, items)) or "0"
    return "{" + ",".join(map(str, items)) + "}"


def subset_lattice(ground: Sequence, sets: Iterable[Iterable]) -> MeetSemilattice:
    """Inclusion order on the given subsets, in (size, ground order) order."""
    ground = list(ground)
    order = {x: k for k, x in enumerate(ground)}
    uniq = {frozenset(s) for s in sets}
    elems = sorted(uniq, key=lambda f: (len(f), sorted(order[x] for x in f)))
    up = []
    for a in elems:
        up.append(sum(1 << k for k, b in enumerate(elems) if a <= b))
    return MeetSemilattice(elems, up)


@dataclass
class Matroid:
    ground: tuple
    flats: MeetSemilattice = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def top(self) -> frozenset:
        return frozenset(self.ground)

    @property
    def is_simple(self) -> bool:
        L = self.flats
        atoms = [L.elements[j] for i, j in L.cover_pairs if i == L._bottom]
        return len(L.bottom) == 0 and all(len(a) == 1 for a in atoms)

    @property
    def is_free(self) -> bool:
        return len(self.flats) == 2 ** self.n

    def label(self, flat) -> str:
        return flat_label(flat, self.ground)

    def indicator(self, flat) -> tuple[int, ...]:
        return tuple(1 if x in flat else 0 for x in self.ground)


def matroid_from_flats(ground: Sequence, flat_list: Iterable[Iterable]) -> Matroid:
    ground = tuple(ground)
    E = frozenset(ground)
    flats = [frozenset(f) for f in flat_list]
    for f in flats:
        if not f <= E:
            raise ValidationError("flat not contained in the ground set", {"flat": sorted(f, key=str)})
    fset = set(flats)
    if E not in fset:
        raise NotIntersectionClosed("the ground set must be a flat", {"missing": sorted(E, key=str)})
    ordered = sorted(fset, key=lambda f: (len(f), sorted(ground.index(x) for x in f)))
    for a, b in itertools.combinations(ordered, 2):
        if a & b not in fset:
            raise NotIntersectionClosed(
                "flats are not closed under intersection",
                {"F": sorted(a, key=str), "G": sorted(b, key=str)},
            )
    L = subset_lattice(ground, ordered)
    M = Matroid(ground, L)
    check_cover_axiom(M)
    return M


def check_cover_axiom(M: Matroid) -> None:
    L = M.flats
    upcovers: dict[int, list[int]] = {i: [] for i in range(len(L))}
    for i, j in L.cover_pairs:
        upcovers[i].append(j)
    for i, F in enumerate(L.elements):
        for x in M.ground:
            if x in F:
                continue
            hits = [L.elements[j] for j in upcovers[i] if x in L.elements[j]]
            if len(hits) != 1:
                raise CoverAxiomViolation(
                    f"{len(hits)} covers of {M.label(F)} contain {x}",
                    {"F": M.label(F), "x": x, "covers": [M.label(G) for G in hits]},
                )


def _labels(n: int) -> list[str]:
    return [str(k) for k in range(1, n + 1)]


def boolean_lattice(n: int) -> MeetSemilattice:
    return boolean_matroid(n).flats


def boolean_matroid(n: int, ground: Sequence | None = None) -> Matroid:
    if n < 1:
        raise ValidationError("boolean_matroid needs n >= 1", {"n": n})
    ground = list(ground) if ground is not None else _labels(n)
    subsets = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(ground, r)]
    return Matroid(tuple(ground), subset_lattice(ground, subsets))


def uniform_matroid(r: int, n: int) -> Matroid:
    if not 0 < r <= n:
        raise ValidationError("uniform_matroid needs 0 < r <= n", {"r": r, "n": n})
    ground = _labels(n)
    flats = [frozenset(c) for k in range(r) for c in itertools.combinations(ground, k)]
    flats.append(frozenset(ground))
    return matroid_from_flats(ground, flats)


def set_partitions(items: list) -> list[list[list]]:
    if not items:
        return [[]]
    head, rest = items[0], items[1:]
    out = []
    for p in set_partitions(rest):
        out.append([[head]] + p)
        for k in range(len(p)):
            out.append(p[:k] + [[head] + p[k]] + p[k + 1:])
    return out


def partition_lattice_matroid(m: int) -> Matroid:
    """Flats of the graphic matroid of K_m on its edge set; isomorphic to the
    partition lattice Π_m."""
    if m < 2:
        raise ValidationError("partition_lattice_matroid needs m >= 2", {"m": m})
    verts = _labels(m)
    edges = [a + b for a, b in itertools.combinations(verts, 2)]
    flats = []
    for p in set_partitions(verts):
        flats.append(frozenset(a + b for block in p for a, b in itertools.combinations(sorted(block, key=int), 2)))
    return matroid_from_flats(edges, flats)


def natural_embedding_map(M: Matroid) -> dict:
    """Flats map to themselves inside the Boolean lattice on the same ground."""
    return {F: F for F in M.flats.elements}
