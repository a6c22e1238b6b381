"""Bergman and nestohedral fans built from nested set complexes.

A cone is kept combinatorially: the flats of its nested set and their 0/1
indicator vectors. The all-ones lineality vector is shared by every cone.
Unimodularity is decided by an exact integer Smith normal form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .building import BuildingSet, building_closure, is_building_set
from .embeddings import is_consistent, validate_embedding
from .errors import AmbientMismatch, TopFlatMissing, ValidationError
from .matroids import Matroid, boolean_matroid, natural_embedding_map
from .nested import nested_complex
from .poset import bits


@dataclass(frozen=True)
class Cone:
    face: tuple
    rays: tuple[tuple[int, ...], ...]

    @property
    def ambient(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    @property
    def key(self) -> frozenset:
        return frozenset(self.rays)


@dataclass
class Fan:
    ambient: int
    cones: list[Cone]
    kind: str = "bergman"
    labels: dict = field(default_factory=dict, repr=False)

    @property
    def lineality(self) -> tuple[int, ...]:
        return (1,) * self.ambient

    def __len__(self) -> int:
        return len(self.cones)

    def maximal_cones(self) -> list[Cone]:
        keys = [c.key for c in self.cones]
        return [c for c in self.cones if not any(c.key < k for k in keys)]

    def rays(self) -> list[tuple[int, ...]]:
        seen = {}
        for c in self.cones:
            for r in c.rays:
                seen.setdefault(r, None)
        return sorted(seen, key=lambda r: (sum(r), tuple(-v for v in r)))

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "lineality": list(self.lineality),
            "cones": [{"face": [self.labels.get(F, str(F)) for F in c.face],
                       "rays": [list(r) for r in c.rays]} for c in self.cones],
        }

    def to_text(self) -> str:
        rays = self.rays()
        ix = {r: k for k, r in enumerate(rays)}
        lines = ["AMBIENT_DIM", str(self.ambient), "", "RAYS"]
        lines += [" ".join(map(str, r)) for r in rays]
        lines += ["", "LINEALITY", " ".join(map(str, self.lineality)), "", "CONES"]
        for c in self.cones:
            lines.append("{" + " ".join(str(k) for k in sorted(ix[r] for r in c.rays)) + "}")
        return "\n".join(lines) + "\n"


def bergman_fan(M: Matroid, B: BuildingSet, allow_no_top: bool = False) -> Fan:
    """One cone per nested set of B, spanned by the indicator vectors of its
    flats, plus the all-ones lineality. Called a nestohedral fan when M is
    the free matroid."""
    L = M.flats
    if B.lattice is not L:
        raise ValidationError("building set does not belong to this matroid's lattice of flats")
    if not allow_no_top and M.top not in B:
        raise TopFlatMissing("building set must contain the top flat E (use allow_no_top to relax)",
                             {"top": M.label(M.top)})
    cx = nested_complex(B)
    cones = []
    for f in cx.faces:
        flats = tuple(L.subset(f))
        cones.append(Cone(flats, tuple(M.indicator(F) for F in flats)))
    return Fan(M.n, cones, "nestohedral" if M.is_free else "bergman",
               {F: M.label(F) for F in L.elements})


def smith_invariants(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, by exact elimination."""
    A = [list(map(int, r)) for r in rows]
    if not A or not A[0]:
        return []
    m, n = len(A), len(A[0])
    out = []
    t = 0
    while t < min(m, n):
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best):
                    best, piv = abs(A[i][j]), (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[t]
                if A[t][j]:
                    done = False
            if done:
                # the pivot must divide everything left, else fold a row in
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cands)
            A[t], A[i] = A[i], A[t]
            for r in A:
                r[t], r[j] = r[j], r[t]
        out.append(abs(A[t][t]))
        t += 1
    return out


def is_unimodular(c: Cone) -> bool:
    """The rays together with the all-ones vector form part of a lattice
    basis. A ray equal to the all-ones vector is redundant modulo
    lineality and dropped."""
    n = c.ambient
    if n == 0:
        return True
    ones = (1,) * n
    rows = [r for r in c.rays if r != ones] + [ones]
    inv = smith_invariants(rows)
    return len(inv) == len(rows) and all(d == 1 for d in inv)


@dataclass
class SubfanVerdict:
    holds: bool
    witness: Cone | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_subfan(inner: Fan, outer: Fan) -> SubfanVerdict:
    if inner.ambient != outer.ambient:
        raise AmbientMismatch("fans live in different ambient spaces",
                              {"inner": inner.ambient, "outer": outer.ambient})
    keys = {c.key for c in outer.cones}
    for c in inner.cones:
        if c.key not in keys:
            return SubfanVerdict(False, c)
    return SubfanVerdict(True)


def solve_exact(columns: list[tuple[int, ...]], point: Sequence[int]) -> list[Fraction] | None:
    """Coefficients expressing ``point`` in the given linearly independent
    columns, or None when it is outside their span."""
    n = len(point)
    k = len(columns)
    A = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(point[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        p = next((r for r in range(row, n) if A[r][col] != 0), None)
        if p is None:
            raise ValidationError("columns are linearly dependent")
        A[row], A[p] = A[p], A[row]
        pv = A[row][col]
        A[row] = [v / pv for v in A[row]]
        for r in range(n):
            if r != row and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    if any(A[r][k] != 0 for r in range(row, n)):
        return None
    return [A[r][k] for r in range(k)]


def cone_coefficients(c: Cone, point: Sequence[int]) -> list[Fraction] | None:
    """Ray coefficients (lineality coefficient dropped) writing ``point`` in
    the linear span of the cone plus lineality."""
    ones = (1,) * len(point)
    rays = [r for r in c.rays if r != ones]
    coef = solve_exact(rays + [ones], point)
    return None if coef is None else coef[:-1]


def locate(fan: Fan, point: Sequence[int], cones: list[Cone] | None = None) -> list[Cone]:
    """Cones (default: maximal cones) containing ``point`` modulo lineality."""
    hits = []
    for c in cones if cones is not None else fan.maximal_cones():
        coef = cone_coefficients(c, point)
        if coef is not None and all(v >= 0 for v in coef):
            hits.append(c)
    return hits


def completeness_grid(n: int, radius: int = 2) -> list[tuple[int, ...]]:
    """Fixed integer sample grid {-radius..radius}^n with last coordinate 0
    (a slice transverse to the lineality)."""
    pts = itertools.product(range(-radius, radius + 1), repeat=n - 1)
    return [p + (0,) for p in pts]


@dataclass
class CorollaryReport:
    simple: bool
    consistent: bool
    outer_building_set: list
    inner_cones: int
    outer_cones: int
    subfan: bool
    unimodular_inner: int
    unimodular_outer: int
    witness: dict | None = None

    @property
    def holds(self) -> bool:
        return (self.simple and self.consistent and self.subfan
                and self.unimodular_inner == self.inner_cones
                and self.unimodular_outer == self.outer_cones)

    def to_json(self) -> dict:
        return {
            "simple": self.simple,
            "consistent": self.consistent,
            "outer_building_set": self.outer_building_set,
            "inner_cones": self.inner_cones,
            "outer_cones": self.outer_cones,
            "subfan": self.subfan,
            "unimodular_inner": self.unimodular_inner,
            "unimodular_outer": self.unimodular_outer,
            "witness": self.witness,
            "holds": self.holds,
        }


def corollary_pipeline(M: Matroid, B: BuildingSet, allow_no_top: bool = False) -> CorollaryReport:
    """Embed the flats of a simple matroid into the Boolean lattice on its
    ground set, close the image of B there, and compare the two fans."""
    if not M.is_simple:
        raise ValidationError("matroid is not simple", {"matroid": repr(M)})
    free = boolean_matroid(M.n, M.ground)
    e = validate_embedding(M.flats, free.flats, natural_embedding_map(M))
    consistent = bool(is_consistent(e))
    outer_B = building_closure(free.flats, e.push(B.mask))
    inner = bergman_fan(M, B, allow_no_top)
    outer = bergman_fan(free, outer_B, allow_no_top)
    sub = is_subfan(inner, outer)
    witness = None
    if not sub:
        witness = {"missing_cone": [M.label(F) for F in sub.witness.face]}
    return CorollaryReport(
        simple=True,
        consistent=consistent,
        outer_building_set=[free.label(F) for F in outer_B.members],
        inner_cones=len(inner),
        outer_cones=len(outer),
        subfan=sub.holds,
        unimodular_inner=sum(is_unimodular(c) for c in inner.cones),
        unimodular_outer=sum(is_unimodular(c) for c in outer.cones),
        witness=witness,
    )
