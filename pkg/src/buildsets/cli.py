"""``buildsets`` command-line verifier.

Every command prints one report (JSON by default, ``--format text`` for
key: value lines) and exits with 0 pass, 1 I/O or parse error, 2 validation
failure, 3 size limit, 4 falsified invariant.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import corpus, io, suites
from .building import (
    BuildingSet,
    _closure_rounds,
    _mask_of,
    building_closure,
    enumerate_building_sets,
    extreme_members,
    is_building_set,
    maximum_building_set,
    minimum_building_set,
    removal_chain,
)
from .corpus import Entry
from .embeddings import is_consistent, validate_embedding, verify_restriction_theorem
from .errors import BuildSetsError, ParseError, ValidationError
from .fans import bergman_fan, corollary_pipeline, is_subfan, is_unimodular
from .matroids import boolean_matroid, natural_embedding_map
from .nested import check_factors_lemma, is_nested, nested_complex
from .poset import MeetSemilattice, hasse_dot, linear_extensions
from .setsystems import is_convex_geometry, is_intersection_closed


class _Parser(argparse.ArgumentParser):
    """Usage errors are parse errors (exit 1), not validation failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class Report(dict):
    """Ordered report body plus the exit code it implies."""

    exit_code = 0


def _jsonable(obj, label):
    if isinstance(obj, dict):
        return {str(_jsonable(k, label)): _jsonable(v, label) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, label) for v in obj]
    if isinstance(obj, frozenset):
        return label(obj)
    return obj


def _set_label(s: frozenset) -> str:
    return "{" + ",".join(sorted(map(str, s))) + "}"


# ---------------------------------------------------------------- inputs

def _entry(args) -> tuple[Entry, dict]:
    return io.load_entry(args.input, args.lattice)


def _parse_set(entry: Entry, text: str | None) -> list:
    if text is None:
        return []
    text = text.strip()
    if text in ("", "{}"):
        return []
    return [entry.parse(t) for t in io.split_labels(text)]


def _building_set(entry: Entry, args, attr: str = "set", default: str = "maximum") -> BuildingSet:
    """The building set named by --set (or the input file's members); it
    must pass the checker."""
    L = entry.lattice
    text = getattr(args, attr, None)
    if text is None and attr == "set" and args.input:
        members = io.building_set_members_from_json(args.input)
        if members is not None:
            text = ",".join(members)
    if text is None:
        return maximum_building_set(L) if default == "maximum" else minimum_building_set(L)
    S = _parse_set(entry, text)
    v = is_building_set(L, S)
    if not v:
        raise ValidationError("not a building set", _jsonable(v.witness, entry.label))
    return BuildingSet(L, L.mask(S), "checked")


def _labels(entry: Entry, xs) -> list[str]:
    return [entry.label(x) for x in xs]


def _matroid(entry: Entry):
    if entry.matroid is None:
        raise ValidationError(f"{entry.name} is not a matroid; fans need a lattice of flats")
    return entry.matroid


def _embedding(args):
    if args.embedding:
        ee = corpus.get_embedding(args.embedding)
        return ee.embedding, ee.source, ee.target, {"builtin": args.embedding}
    if not args.input:
        raise ParseError("no embedding: pass --input FILE or --embedding NAME")
    doc, digest = io.read_json(args.input)
    e, src, tgt = io.embedding_from_json(doc, Path(args.input).parent)
    return e, src, tgt, {"file": Path(args.input).name, "sha256": digest}


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> tuple[Report, dict]:
    if args.embedding:
        e, src, tgt, inputs = _embedding(args)
        return Report(kind="embedding", embedding="yes", consistent=bool(is_consistent(e))), inputs
    if args.lattice:
        entry, inputs = _entry(args)
        doc = None
    else:
        if not args.input:
            raise ParseError("no input: pass --input FILE or --lattice NAME")
        doc, digest = io.read_json(args.input)
        inputs = {"file": Path(args.input).name, "sha256": digest}
        if isinstance(doc, dict) and "map" in doc:
            e, src, tgt = io.embedding_from_json(doc, Path(args.input).parent)
            return Report(kind="embedding", embedding="yes", consistent=bool(is_consistent(e))), inputs
        if isinstance(doc, dict) and "family" in doc:
            sysm = io.set_system_from_json(doc)
            return Report(kind="set-system", ground=len(sysm.ground), family=len(sysm),
                          intersection_closed=bool(is_intersection_closed(sysm)),
                          convex_geometry=bool(is_convex_geometry(sysm))), inputs
        if isinstance(doc, dict) and "flats" not in doc:
            P = io.poset_from_json(doc)
            try:
                L = MeetSemilattice.from_poset(P)
            except ValidationError as exc:
                exc.witness = {"poset": "yes", **exc.witness}
                raise
            entry = Entry(Path(args.input).name, L)
        else:
            entry = io.entry_from_doc(doc, Path(args.input).name)
    L = entry.lattice
    rep = Report(kind="matroid" if entry.matroid is not None else "meet-semilattice")
    rep["elements"] = len(L)
    rep["poset"] = "yes"
    rep["meet-semilattice"] = "yes"
    rep["lattice"] = "yes" if L.is_lattice else "no"
    if entry.matroid is not None:
        rep["matroid"] = "yes"
        rep["simple"] = "yes" if entry.matroid.is_simple else "no"
    rep["irreducibles"] = _labels(entry, L.subset(L.irreducible_mask))
    return rep, inputs


def cmd_building_sets(args) -> tuple[Report, dict]:
    entry, inputs = _entry(args)
    L = entry.lattice
    op = args.op
    if op == "enumerate":
        fam = enumerate_building_sets(L)
        summ = fam.summary()
        return Report(count=summ["count"], min_size=summ["min_size"], max_size=summ["max_size"],
                      rounds_histogram=summ["rounds_histogram"],
                      family=[_labels(entry, B.members) for B in fam]), inputs
    if op == "closure":
        X = _parse_set(entry, args.set)
        m, k = _closure_rounds(L, _mask_of(L, X))
        return Report(members=_labels(entry, L.subset(m)), rounds=k), inputs
    if op == "check":
        if args.set is None:
            raise ParseError("building-sets check needs --set")
        S = _parse_set(entry, args.set)
        v = is_building_set(L, S)
        rep = Report({"building set": "yes" if v else "no"})
        if not v:
            rep["witness"] = _jsonable(v.witness, entry.label)
        return rep, inputs
    if op == "extreme":
        B = _building_set(entry, args)
        return Report(members=_labels(entry, B.members), extreme=_labels(entry, extreme_members(B))), inputs
    if op == "chain":
        B_from = _building_set(entry, args)
        B_to = _building_set(entry, args, "to", default="minimum")
        if args.order:
            ext = _parse_set(entry, args.order)
        else:
            ext = list(next(linear_extensions(L, limit=1)))
        steps = removal_chain(B_from, B_to, ext)
        return Report(start=_labels(entry, B_from.members), order=_labels(entry, ext),
                      steps=[_labels(entry, s.members) for s in steps], length=len(steps)), inputs
    raise ParseError(f"unknown building-sets operation {op!r}")


def cmd_nested(args) -> tuple[Report, dict]:
    entry, inputs = _entry(args)
    B = _building_set(entry, args)
    if args.op == "complex":
        cx = nested_complex(B)
        return Report(building_set=_labels(entry, B.members), faces=len(cx), f_vector=cx.f_vector(),
                      facets=len(cx.facets())), inputs
    N = _parse_set(entry, args.face)
    v = is_nested(B, N)
    rep = Report(nested="yes" if v else "no")
    if v:
        rep["factors"] = "yes" if check_factors_lemma(B, N) else "no"
        if rep["factors"] == "no":
            rep.exit_code = 4
    else:
        rep["witness"] = _jsonable(v.witness, entry.label)
    return rep, inputs


def cmd_embed(args) -> tuple[Report, dict]:
    e, src, tgt, inputs = _embedding(args)
    if args.op == "validate":
        return Report(embedding="yes", source=len(e.source), target=len(e.target)), inputs
    if args.op == "consistent":
        v = is_consistent(e)
        rep = Report(consistent="yes" if v else "no")
        if not v:
            rep["witness"] = {"x": src.label(v.witness["x"]), "irreducible": tgt.label(v.witness["irreducible"])}
        return rep, inputs
    r = verify_restriction_theorem(e, args.strategy)
    body = r.to_json()
    body["counterexample"] = suites.label_counterexample(src, tgt, body["counterexample"])
    rep = Report(holds=r.holds, **body)
    rep["summary"] = f"{r.restricted} building sets restricted, {r.distinct_images} distinct image" + (
        "" if r.distinct_images == 1 else "s")
    if not r.holds:
        rep.exit_code = 4
    return rep, inputs


def cmd_fan(args) -> tuple[Report, dict]:
    entry, inputs = _entry(args)
    M = _matroid(entry)
    B = _building_set(entry, args)
    if args.op == "build":
        fan = bergman_fan(M, B, args.allow_no_top)
        return Report(kind=fan.kind, ambient=fan.ambient, cones=len(fan),
                      maximal_cones=len(fan.maximal_cones()), rays=len(fan.rays())), inputs
    if args.op == "unimodular":
        fan = bergman_fan(M, B, args.allow_no_top)
        good = sum(is_unimodular(c) for c in fan.cones)
        rep = Report(cones=len(fan), unimodular=f"{good}/{len(fan)}")
        bad = next((c for c in fan.cones if not is_unimodular(c)), None)
        if bad is not None:
            rep["witness"] = {"face": [M.label(F) for F in bad.face]}
            rep.exit_code = 4
        return rep, inputs
    if args.op == "subfan":
        free = boolean_matroid(M.n, M.ground)
        e = validate_embedding(M.flats, free.flats, natural_embedding_map(M))
        if args.outer_set is not None:
            outer_entry = Entry("outer", free.flats, free.label, free)
            outer_B = _building_set(outer_entry, args, "outer_set")
        else:
            outer_B = building_closure(free.flats, e.push(B.mask))
        v = is_subfan(bergman_fan(M, B, args.allow_no_top), bergman_fan(free, outer_B, args.allow_no_top))
        rep = Report(subfan="yes" if v else "no", outer_building_set=[free.label(F) for F in outer_B.members])
        if not v:
            rep["witness"] = {"missing_cone": [M.label(F) for F in v.witness.face]}
        return rep, inputs
    r = corollary_pipeline(M, B, args.allow_no_top)
    rep = Report(r.to_json())
    rep["holds"] = r.holds
    rep["summary"] = (f"cones: {r.inner_cones}, unimodular: {r.unimodular_inner}/{r.inner_cones}, "
                      f"subfan: {'yes' if r.subfan else 'no'}")
    if not r.holds:
        rep.exit_code = 4
    return rep, inputs


def _run_task(task):
    suite, name, opts = task
    return suites.run_one(suite, name, **opts)


def cmd_verify(args) -> tuple[Report, dict]:
    chosen = suites.SUITES if args.suite == "all" else [args.suite]
    opts = {"max_extensions": args.max_extensions, "strategy": args.strategy,
            "allow_no_top": args.allow_no_top}
    if args.seeds:
        opts["seeds"] = tuple(int(s) for s in args.seeds.split(","))
    inputs: dict = {}
    custom = None
    if args.input:
        custom, inputs = io.load_entry(args.input, None)
    lattices = args.lattice.split(",") if args.lattice else None
    embeddings = args.embedding.split(",") if args.embedding else None
    if custom is not None:
        tasks = []
        for s in chosen:
            if s == "restriction":
                continue
            if s == "fans" and custom.matroid is None:
                continue
            tasks.append((s, custom.name))
        results = [suites.run_one(s, n, custom, **opts) for s, n in tasks]
    else:
        if lattices:
            for n in lattices:
                corpus.get(n)
            inputs["lattices"] = lattices
        if embeddings:
            for n in embeddings:
                corpus.get_embedding(n)
            inputs["embeddings"] = embeddings
        if lattices and not embeddings:
            embeddings = []
        if embeddings and not lattices:
            lattices = []
        tasks = [(s, n) for s, n in suites.plan(chosen, lattices, embeddings)
                 if s != "fans" or corpus.get(n).matroid is not None]
        if args.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                results = list(ex.map(_run_task, [(s, n, opts) for s, n in tasks]))
        else:
            results = [suites.run_one(s, n, **opts) for s, n in tasks]
    holds = all(r["holds"] for r in results)
    rep = Report(holds=holds, passed=sum(r["holds"] for r in results), total=len(results), results=results)
    if not holds:
        rep.exit_code = 4
    return rep, inputs


def cmd_export(args) -> tuple[Report, dict, str]:
    entry, inputs = _entry(args)
    what = args.what
    if what == "hasse-dot":
        L = entry.lattice
        text = hasse_dot(L, entry.label)
        body = Report(what=what, nodes=len(L), edges=len(L.cover_pairs))
    elif what == "complex-json":
        B = _building_set(entry, args)
        cx = nested_complex(B)
        text = io.dumps(io.complex_to_json(cx, entry.label))
        body = Report(what=what, faces=len(cx))
    else:
        M = _matroid(entry)
        fan = bergman_fan(M, _building_set(entry, args), args.allow_no_top)
        text = io.dumps(fan.to_json()) if what == "fan-json" else fan.to_text()
        body = Report(what=what, cones=len(fan))
    return body, inputs, text


# ---------------------------------------------------------------- output

def _render_text(report: dict) -> str:
    lines = []

    def scalar(v):
        if isinstance(v, bool):
            return "yes" if v else "no"
        return io.json.dumps(v, ensure_ascii=False, sort_keys=True) if isinstance(v, (list, dict)) else str(v)

    for k, v in report.items():
        if k == "results":
            for r in v:
                status = "PASS" if r["holds"] else "FAIL"
                line = f"{status} {r['suite']} {r['target']}"
                if r.get("summary"):
                    line += f": {r['summary']}"
                lines.append(line)
                if not r["holds"]:
                    lines.append(f"  witness: {scalar(r['witness'])}")
            continue
        lines.append(f"{k}: {scalar(v)}")
    return "\n".join(lines) + "\n"


def _emit(args, argv, body: dict, inputs: dict, elapsed: float | None) -> str:
    report = {"command": list(argv), "inputs": inputs}
    report.update(body)
    if elapsed is not None:
        report["timing"] = {"seconds": round(elapsed, 6)}
    if args.format == "text":
        return _render_text(report)
    return io.dumps(report)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", default=argparse.SUPPRESS, help="JSON input file")
    common.add_argument("--lattice", default=argparse.SUPPRESS,
                        help=f"built-in lattice ({', '.join(corpus.LATTICES + corpus.EXTRA_LATTICES)})")
    common.add_argument("--embedding", default=argparse.SUPPRESS,
                        help=f"built-in embedding ({', '.join(corpus.EMBEDDINGS + ['C2-B2'])})")
    common.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--no-timing", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--allow-no-top", action="store_true", default=argparse.SUPPRESS,
                        help="do not require the top flat in building sets for fans")

    p = _Parser(prog="buildsets", parents=[common],
                                description="Verify building-set, nested-set and fan constructions on finite lattices.")
    p.set_defaults(input=None, lattice=None, embedding=None, format="json", jobs=1,
                   no_timing=False, allow_no_top=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="validate a poset, matroid, set system or embedding")

    bs = sub.add_parser("building-sets", parents=[common], help="building-set operations")
    bs.add_argument("op", choices=["enumerate", "closure", "check", "extreme", "chain"])
    bs.add_argument("--set", help="comma-separated element labels")
    bs.add_argument("--to", help="chain target building set (default: minimum)")
    bs.add_argument("--order", help="chain linear extension (default: first lexicographic)")

    ne = sub.add_parser("nested", parents=[common], help="nested set complexes")
    ne.add_argument("op", choices=["complex", "check"])
    ne.add_argument("--set", help="building set (default: maximum)")
    ne.add_argument("--face", help="candidate nested set for check")

    em = sub.add_parser("embed", parents=[common], help="meet-semilattice embeddings")
    em.add_argument("op", choices=["validate", "consistent", "verify"])
    em.add_argument("--strategy", choices=["auto", "exhaustive", "closure"], default="auto")

    fa = sub.add_parser("fan", parents=[common], help="Bergman and nestohedral fans")
    fa.add_argument("op", choices=["build", "unimodular", "subfan", "corollary"])
    fa.add_argument("--set", help="building set (default: maximum)")
    fa.add_argument("--outer-set", help="building set of the free matroid for subfan")

    ve = sub.add_parser("verify", parents=[common], help="run invariant suites")
    ve.add_argument("--suite", choices=["all"] + suites.SUITES, default="all")
    ve.add_argument("--max-extensions", type=int, default=suites.DEFAULT_MAX_EXTENSIONS)
    ve.add_argument("--strategy", choices=["auto", "exhaustive", "closure"], default="auto")
    ve.add_argument("--seeds", help="comma-separated sample seeds for the closure suite")

    ex = sub.add_parser("export", parents=[common], help="write DOT, complex JSON or fan files")
    ex.add_argument("what", choices=["hasse-dot", "complex-json", "fan-json", "fan-text"])
    ex.add_argument("--set", help="building set (default: maximum)")
    ex.add_argument("--out", "-o", help="output file (default: stdout)")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "building-sets": cmd_building_sets,
    "nested": cmd_nested,
    "embed": cmd_embed,
    "fan": cmd_fan,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "export":
            body, inputs, artifact = cmd_export(args)
            if not args.out:
                sys.stdout.write(artifact)
                return 0
            try:
                Path(args.out).write_text(artifact, encoding="utf-8", newline="\n")
            except OSError as exc:
                raise ParseError(f"cannot write {args.out}: {exc}") from exc
            body["out"] = args.out
        else:
            body, inputs = COMMANDS[args.command](args)
    except BuildSetsError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "witness": _jsonable(exc.witness, _set_label)}
        sys.stdout.write(_emit(args, argv, err, {}, None))
        return exc.exit_code
    elapsed = None if args.no_timing else time.perf_counter() - t0
    sys.stdout.write(_emit(args, argv, body, inputs, elapsed))
    return body.exit_code


if __name__ == "__main__":
    sys.exit(main())
