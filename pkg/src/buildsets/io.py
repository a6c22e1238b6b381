"""JSON ingestion and serialization for the file formats the CLI speaks."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import corpus
from .corpus import Entry
from .embeddings import SemilatticeEmbedding, validate_embedding
from .errors import ParseError, ValidationError
from .matroids import matroid_from_flats
from .nested import NestedSetComplex
from .poset import FinitePoset, MeetSemilattice
from .setsystems import SetSystem


def read_json(path: str | Path) -> tuple[object, str]:
    """Parsed document and the sha256 of its bytes."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return doc, hashlib.sha256(raw).hexdigest()


def poset_from_json(doc: dict) -> FinitePoset:
    if not isinstance(doc, dict) or "elements" not in doc:
        raise ParseError('poset JSON needs an "elements" list')
    has_leq, has_cov = "leq" in doc, "cover_relations" in doc
    if has_leq == has_cov:
        raise ParseError('poset JSON needs exactly one of "leq" and "cover_relations"')
    elems = [str(x) for x in doc["elements"]]
    pairs = doc["leq"] if has_leq else doc["cover_relations"]
    try:
        pairs = [(str(a), str(b)) for a, b in pairs]
    except (TypeError, ValueError) as exc:
        raise ParseError("relation entries must be [x, y] pairs") from exc
    if has_leq:
        return FinitePoset.from_relation(elems, pairs)
    return FinitePoset.from_covers(elems, pairs)


def poset_to_json(P: FinitePoset, label=str, covers: bool = False) -> dict:
    key = "cover_relations" if covers else "leq"
    pairs = P.covers() if covers else P.relation_pairs()
    return {"elements": [label(x) for x in P.elements],
            key: [[label(a), label(b)] for a, b in pairs]}


def entry_from_doc(doc, name: str = "input") -> Entry:
    """A lattice entry from a poset JSON or a matroid JSON document."""
    if isinstance(doc, str):
        return corpus.get(doc)
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object")
    if "flats" in doc:
        ground = [str(x) for x in doc.get("ground", [])]
        M = matroid_from_flats(ground, [[str(x) for x in f] for f in doc["flats"]])
        return Entry(name, M.flats, M.label, M)
    P = poset_from_json(doc)
    return Entry(name, MeetSemilattice.from_poset(P))


def load_entry(path: str | None, builtin: str | None) -> tuple[Entry, dict]:
    if builtin:
        return corpus.get(builtin), {"builtin": builtin}
    if not path:
        raise ParseError("no input: pass --input FILE or --lattice NAME")
    doc, digest = read_json(path)
    if isinstance(doc, dict) and "members" in doc and "lattice" in doc:
        doc = _resolve_lattice_ref(doc["lattice"], Path(path).parent)
    return entry_from_doc(doc, Path(path).name), {"file": Path(path).name, "sha256": digest}


def _resolve_lattice_ref(ref, base: Path):
    if isinstance(ref, dict):
        return ref
    if isinstance(ref, str):
        if ref in corpus.LATTICES + corpus.EXTRA_LATTICES:
            return ref
        doc, _ = read_json(base / ref)
        return doc
    raise ParseError('"lattice" must be inline JSON, a file name or a built-in name')


def building_set_members_from_json(path: str) -> list[str] | None:
    doc, _ = read_json(path)
    if isinstance(doc, dict) and "members" in doc:
        return [str(x) for x in doc["members"]]
    return None


def set_system_from_json(doc: dict) -> SetSystem:
    if not isinstance(doc, dict) or "ground" not in doc or "family" not in doc:
        raise ParseError('set system JSON needs "ground" and "family"')
    return SetSystem.from_sets([str(x) for x in doc["ground"]], [[str(x) for x in s] for s in doc["family"]])


def set_system_to_json(sys: SetSystem) -> dict:
    return {"ground": [str(x) for x in sys.ground],
            "family": [[str(x) for x in sys.labels(m)] for m in sys.sorted_family()]}


def embedding_from_json(doc: dict, base: Path = Path(".")) -> tuple[SemilatticeEmbedding, Entry, Entry]:
    if not isinstance(doc, dict) or not {"source", "target", "map"} <= doc.keys():
        raise ParseError('embedding JSON needs "source", "target" and "map"')
    src = entry_from_doc(_resolve_lattice_ref(doc["source"], base), "source")
    tgt = entry_from_doc(_resolve_lattice_ref(doc["target"], base), "target")
    if not isinstance(doc["map"], dict):
        raise ParseError('"map" must be an object from source labels to target labels')
    mapping = {src.parse(str(k)): tgt.parse(str(v)) for k, v in doc["map"].items()}
    return validate_embedding(src.lattice, tgt.lattice, mapping), src, tgt


def complex_to_json(cx: NestedSetComplex, label=str) -> dict:
    B = cx.building_set
    return {
        "building_set": {"members": [label(x) for x in B.members]},
        "faces": [[label(x) for x in f] for f in cx.face_elements()],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def split_labels(text: str) -> list[str]:
    """Comma-separated labels; commas inside braces belong to the label."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur or out:
        out.append("".join(cur))
    tokens = [t.strip() for t in out]
    if any(not t for t in tokens):
        raise ValidationError(f"empty label in {text!r}")
    return tokens
