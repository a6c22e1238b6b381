"""Built-in desk-scale lattices, matroids and embeddings.

Names accepted by the CLI's ``--lattice`` and ``--embedding`` options.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .embeddings import SemilatticeEmbedding, validate_embedding
from .errors import ParseError
from .matroids import (
    Matroid,
    boolean_matroid,
    flat_label,
    natural_embedding_map,
    partition_lattice_matroid,
    uniform_matroid,
)
from .poset import FinitePoset, MeetSemilattice


@dataclass
class Entry:
    name: str
    lattice: MeetSemilattice = field(repr=False)
    label: Callable[[object], str] = field(default=str, repr=False)
    matroid: Matroid | None = field(default=None, repr=False)

    def parse(self, token: str):
        table = self.__dict__.get("_parse")
        if table is None:
            table = self.__dict__["_parse"] = {self.label(x): x for x in self.lattice.elements}
        token = token.strip()
        if token not in table:
            raise ParseError(f"{token!r} is not an element of {self.name}", {"element": token})
        return table[token]


def chain(n: int) -> MeetSemilattice:
    elems = [str(k) for k in range(n)]
    return MeetSemilattice.from_poset(FinitePoset.from_covers(elems, zip(elems, elems[1:])))


def fork() -> MeetSemilattice:
    """Two atoms and no top."""
    return MeetSemilattice.from_poset(FinitePoset.from_covers(["0", "a", "b"], [("0", "a"), ("0", "b")]))


def twin_diamond() -> MeetSemilattice:
    """Two Boolean squares sharing the atom b; maximal elements ab and bc
    have no common upper bound."""
    covers = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "ab"), ("b", "ab"), ("b", "bc"), ("c", "bc")]
    return MeetSemilattice.from_poset(FinitePoset.from_covers(["0", "a", "b", "c", "ab", "bc"], covers))


def _matroid_entry(name: str, M: Matroid) -> Entry:
    return Entry(name, M.flats, M.label, M)


def _build(name: str) -> Entry:
    if name in ("C2", "C3", "C4"):
        return Entry(name, chain(int(name[1])))
    if name in ("B2", "B3", "B4", "B5", "B6"):
        return _matroid_entry(name, boolean_matroid(int(name[1])))
    if name == "U23":
        return _matroid_entry(name, uniform_matroid(2, 3))
    if name == "U24":
        return _matroid_entry(name, uniform_matroid(2, 4))
    if name in ("Pi3", "Pi4"):
        return _matroid_entry(name, partition_lattice_matroid(int(name[2])))
    if name == "fork":
        return Entry(name, fork())
    if name == "twin-diamond":
        return Entry(name, twin_diamond())
    raise ParseError(f"unknown built-in lattice {name!r}; known: {', '.join(LATTICES)}")


LATTICES = ["C2", "C3", "C4", "B2", "B3", "U23", "U24", "Pi3", "Pi4", "fork", "twin-diamond"]
EXTRA_LATTICES = ["B4", "B5", "B6"]
MATROIDS = ["B2", "B3", "U23", "U24", "Pi3", "Pi4"]

_cache: dict[str, Entry] = {}


def get(name: str) -> Entry:
    if name not in _cache:
        _cache[name] = _build(name)
    return _cache[name]


@dataclass
class EmbeddingEntry:
    name: str
    embedding: SemilatticeEmbedding = field(repr=False)
    source: Entry = field(repr=False)
    target: Entry = field(repr=False)


def _natural(name: str, src: str, tgt: str) -> EmbeddingEntry:
    """Flats into the Boolean lattice on the same ground set."""
    s = get(src)
    free = boolean_matroid(s.matroid.n, s.matroid.ground)
    t = _matroid_entry(tgt, free)
    return EmbeddingEntry(name, validate_embedding(s.lattice, t.lattice, natural_embedding_map(s.matroid)), s, t)


def _identity(src: str) -> EmbeddingEntry:
    s = get(src)
    return EmbeddingEntry(f"id-{src}", validate_embedding(s.lattice, s.lattice, {x: x for x in s.lattice}), s, s)


def chain_into_b2() -> EmbeddingEntry:
    """0 < m sent to ∅ < {1,2}: meet-preserving but not consistent."""
    s = Entry("C2", chain(2))
    t = get("B2")
    top = frozenset(t.matroid.ground)
    e = validate_embedding(s.lattice, t.lattice, {"0": frozenset(), "1": top})
    return EmbeddingEntry("C2-B2", e, s, t)


EMBEDDINGS = ["U23-B3", "U24-B4", "Pi4-B6"] + [f"id-{n}" for n in LATTICES]


def get_embedding(name: str) -> EmbeddingEntry:
    if name == "U23-B3":
        return _natural(name, "U23", "B3")
    if name == "U24-B4":
        return _natural(name, "U24", "B4")
    if name == "Pi4-B6":
        return _natural(name, "Pi4", "B6")
    if name == "C2-B2":
        return chain_into_b2()
    if name.startswith("id-"):
        return _identity(name[3:])
    raise ParseError(f"unknown built-in embedding {name!r}; known: {', '.join(EMBEDDINGS + ['C2-B2'])}")


__all__ = ["Entry", "get", "get_embedding", "LATTICES", "MATROIDS", "EMBEDDINGS", "flat_label"]
