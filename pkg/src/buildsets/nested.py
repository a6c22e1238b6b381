"""Nested sets and nested set complexes.

An antichain of two or more members whose join does not exist in L places
no constraint: only joins that exist and land inside the building set make
a subset non-nested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .building import BuildingSet, SIZE_LIMIT, _mask_of
from .errors import SizeLimit, ValidationError
from .poset import MeetSemilattice, bits, popcount
from .setsystems import PASS, Verdict

FACE_LIMIT = 2_000_000


def _antichains_with(L: MeetSemilattice, pool: list[int], v: int) -> Iterator[list[int]]:
    """Antichains of size >= 2 containing v, drawn from pool ∪ {v}; pool
    elements must already be incomparable to v."""
    def rec(start: int, chosen: list[int]):
        for k in range(start, len(pool)):
            u = pool[k]
            if all(not (L._up[u] >> c & 1 or L._up[c] >> u & 1) for c in chosen):
                chosen.append(u)
                yield chosen
                yield from rec(k + 1, chosen)
                chosen.pop()
    yield from rec(0, [v])


def _bad_antichain(L: MeetSemilattice, bmask: int, face: list[int], v: int) -> list[int] | None:
    pool = [u for u in face if not (L._up[u] >> v & 1 or L._up[v] >> u & 1)]
    for chain in _antichains_with(L, pool, v):
        j = L._join_idx(chain)
        if j is not None and bmask >> j & 1:
            return list(chain)
    return None


def _nested_mask_witness(L: MeetSemilattice, bmask: int, nmask: int) -> list[int] | None:
    placed: list[int] = []
    for v in bits(nmask):
        bad = _bad_antichain(L, bmask, placed, v)
        if bad is not None:
            return bad
        placed.append(v)
    return None


def is_nested(B: BuildingSet, N: Iterable) -> Verdict:
    L = B.lattice
    nmask = _mask_of(L, N)
    if nmask & ~B.mask:
        raise ValidationError("nested sets must be subsets of the building set",
                              {"extra": L.subset(nmask & ~B.mask)})
    bad = _nested_mask_witness(L, B.mask, nmask)
    if bad is None:
        return PASS
    return Verdict(False, {"antichain": [L.elements[j] for j in sorted(bad)],
                           "join": L.elements[L._join_idx(bad)]})


@dataclass
class NestedSetComplex:
    building_set: BuildingSet = field(repr=False)
    faces: list[int]

    @property
    def lattice(self) -> MeetSemilattice:
        return self.building_set.lattice

    def face_elements(self) -> list[list]:
        return [self.lattice.subset(f) for f in self.faces]

    def __len__(self) -> int:
        return len(self.faces)

    def __contains__(self, face) -> bool:
        return _mask_of(self.lattice, face) in self._faceset

    @property
    def _faceset(self) -> frozenset:
        fs = self.__dict__.get("_fs")
        if fs is None:
            fs = self.__dict__["_fs"] = frozenset(self.faces)
        return fs

    def facets(self) -> list[int]:
        fs = self._faceset
        out = []
        for f in self.faces:
            if not any(f | 1 << v in fs for v in bits(self.building_set.mask & ~f)):
                out.append(f)
        return out

    def f_vector(self) -> list[int]:
        top = max(popcount(f) for f in self.faces)
        counts = [0] * (top + 1)
        for f in self.faces:
            counts[popcount(f)] += 1
        return counts


def nested_complex(B: BuildingSet, limit: int = FACE_LIMIT) -> NestedSetComplex:
    """All nested sets of B, grown vertex by vertex in canonical order. Only
    antichains through the newly added vertex need checking."""
    L = B.lattice
    if len(L.plus) > SIZE_LIMIT:
        raise SizeLimit(f"nested complexes are limited to |L⁺| <= {SIZE_LIMIT}")
    verts = list(bits(B.mask))
    faces: list[int] = [0]

    def rec(start: int, face: list[int], fmask: int):
        for k in range(start, len(verts)):
            v = verts[k]
            if _bad_antichain(L, B.mask, face, v) is not None:
                continue
            m = fmask | 1 << v
            faces.append(m)
            if len(faces) > limit:
                raise SizeLimit(f"more than {limit} nested sets")
            face.append(v)
            rec(k + 1, face, m)
            face.pop()

    rec(0, [], 0)
    faces.sort(key=lambda m: (popcount(m), tuple(bits(m))))
    return NestedSetComplex(B, faces)


def check_factors_lemma(B: BuildingSet, N: Iterable) -> Verdict:
    """For every antichain of N whose join x exists, the factors of x in B
    are exactly that antichain."""
    L = B.lattice
    nmask = _mask_of(L, N)
    members = list(bits(nmask))

    def rec(start: int, chosen: list[int]):
        for k in range(start, len(members)):
            u = members[k]
            if any(L._up[u] >> c & 1 or L._up[c] >> u & 1 for c in chosen):
                continue
            chosen.append(u)
            x = L._join_idx(chosen)
            if x is not None:
                got = L._max_of(B.mask & L._down[x])
                want = sum(1 << c for c in chosen)
                if got != want:
                    return list(chosen), x, got
            bad = rec(k + 1, chosen)
            if bad:
                return bad
            chosen.pop()
        return None

    bad = rec(0, [])
    if bad is None:
        return PASS
    chosen, x, got = bad
    return Verdict(False, {"antichain": L.subset(sum(1 << c for c in chosen)),
                           "join": L.elements[x], "factors": L.subset(got)})
