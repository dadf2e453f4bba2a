"""``vinberg-lab`` command line.

Exit codes: 0 success, 1 golden drift under ``classify --check``, 2 malformed
input, 3 wrong rank or signature, 4 Vinberg budget exhausted.
"""
from __future__ import annotations

import argparse
import difflib
import json
import sys
from importlib import resources
from pathlib import Path

from .analysis import (
    Budget,
    Status,
    anisotropy_report,
    enumeration_report,
    full_report,
    invariants_report,
    run_report,
)
from .coxeter import build_diagram, emit_dot, polyhedron_combinatorics
from .errors import NotHyperbolic, RankNotFour
from .geometry import Root
from .lattice import QuadraticLattice, lattice_from_dict, signature
from .vinberg import SCHEMA_VERSION, RunStatus, run

EXIT_OK, EXIT_DRIFT, EXIT_MALFORMED, EXIT_SHAPE, EXIT_BUDGET = 0, 1, 2, 3, 4


class Malformed(Exception):
    pass


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise Malformed(f"{path}: {exc}") from exc


def _load_lattice(path: str) -> QuadraticLattice:
    doc = _load_json(path)
    try:
        return lattice_from_dict(doc)
    except (ValueError, TypeError) as exc:
        raise Malformed(f"{path}: {exc}") from exc


def _int_tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def _dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_invariants(args) -> int:
    lat = _load_lattice(args.file)
    doc = {"schema_version": SCHEMA_VERSION, "gram": [list(r) for r in lat.gram], "name": lat.name}
    doc.update(invariants_report(lat))
    _emit(doc)
    return EXIT_OK


def cmd_anisotropy(args) -> int:
    lat = _load_lattice(args.file)
    try:
        rep = anisotropy_report(lat)
    except RankNotFour as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    _emit({"schema_version": SCHEMA_VERSION, "gram": [list(r) for r in lat.gram], **rep})
    return EXIT_OK


def cmd_vinberg(args) -> int:
    lat = _load_lattice(args.file)
    sig = signature(lat)
    if lat.rank != 4 or (sig.positives, sig.negatives) != (3, 1):
        print("error: expected a hyperbolic lattice of rank 4", file=sys.stderr)
        return EXIT_SHAPE
    budget = Budget(args.max_roots, args.max_height)
    try:
        config = budget.config(lat, args.norms or (), args.basic_point, args.chamber_point)
        state = run(lat, config)
    except NotHyperbolic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except ValueError as exc:
        raise Malformed(str(exc)) from exc
    doc = run_report(state, restricted=bool(args.norms))
    if args.dot and doc["dot"]:
        Path(args.dot).write_text(doc["dot"], encoding="utf-8")
    _emit(doc)
    return EXIT_OK if state.status is RunStatus.FINITE_VOLUME else EXIT_BUDGET


def cmd_diagram(args) -> int:
    doc = _load_json(args.transcript)
    try:
        lat = QuadraticLattice(tuple(tuple(int(x) for x in r) for r in doc["lattice"]))
        roots = [Root.of(lat, tuple(r["coords"])) for r in doc["roots"]]
        v0 = tuple(doc["basic_point"]) if doc.get("basic_point") else None
    except (KeyError, TypeError, ValueError) as exc:
        raise Malformed(f"{args.transcript}: not a Vinberg transcript ({exc})") from exc
    if not roots:
        raise Malformed(f"{args.transcript}: transcript has no roots")
    dot = emit_dot(build_diagram(roots), args.name)
    if args.dot:
        Path(args.dot).write_text(dot, encoding="utf-8")
    else:
        sys.stdout.write(dot)
    if args.combinatorics or not args.dot:
        try:
            comb = polyhedron_combinatorics(roots, v0)
        except NotHyperbolic as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SHAPE
        out = {
            "schema_version": SCHEMA_VERSION,
            "vertices": [
                {"facets": [i + 1 for i in v.facets], "vector": list(v.vector), "ideal": v.ideal}
                for v in comb.vertices
            ],
            "edges": [[i + 1, j + 1] for i, j in comb.edges],
            "unbounded_edges": [[i + 1, j + 1] for i, j in comb.unbounded_edges],
        }
        if args.combinatorics:
            Path(args.combinatorics).write_text(_dumps(out), encoding="utf-8")
        else:
            _emit(out)
    return EXIT_OK


def golden_dir() -> Path:
    return Path(str(resources.files("vinberg_lab") / "golden"))


def _check(name: str, text: str, directory: Path) -> bool:
    path = directory / name
    if not path.exists():
        print(f"golden missing: {path}", file=sys.stderr)
        return False
    expected = path.read_text(encoding="utf-8")
    if expected == text:
        return True
    diff = difflib.unified_diff(
        expected.splitlines(), text.splitlines(), f"golden/{name}", f"current/{name}", lineterm="", n=2
    )
    print(f"golden drift in {name}:", file=sys.stderr)
    for line in list(diff)[:60]:
        print(line, file=sys.stderr)
    return False


def cmd_classify(args) -> int:
    if args.stage == "enumerate":
        doc = enumeration_report()
    else:
        doc = full_report(Budget(args.max_roots, args.max_height))
    files = {f"{args.stage}.json": _dumps(doc)}
    if args.stage == "full":
        for rep in doc["classification"]:
            if rep["diagram_dot"] and rep["status"] != Status.INCONCLUSIVE.value:
                files[f"{rep['name']}.dot"] = rep["diagram_dot"]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text, encoding="utf-8")
    summary = {
        "schema_version": SCHEMA_VERSION,
        "stage": args.stage,
        "matches_reference": doc["matches_reference"],
        "missing_reference_entries": doc["missing_reference_entries"],
        "unexpected_entries": doc["unexpected_entries"],
        "table": [
            {k: r[k] for k in ("name", "discriminant", "invariant_factors")} for r in doc["rows"]
        ],
    }
    if args.stage == "full":
        summary["one_two_reflective"] = doc["one_two_reflective"]
        summary["reflective_not_one_two"] = doc["reflective_not_one_two"]
        summary["inconclusive"] = {
            r["name"]: r["notes"] for r in doc["classification"] if r["status"] == Status.INCONCLUSIVE.value
        }
    if not args.out:
        _emit(doc)
    else:
        _emit(summary)
    if args.check:
        directory = Path(args.golden) if args.golden else golden_dir()
        ok = all([_check(name, text, directory) for name, text in sorted(files.items())])
        if not ok:
            return EXIT_DRIFT
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_budget(p):
    p.add_argument("--max-roots", type=int, default=64, help="stop after this many mirrors (default 64)")
    p.add_argument(
        "--max-height",
        type=int,
        default=10_000,
        help="bound on (a, v0)^2, the priority numerator (default 10000)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vinberg-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="discriminant, invariant factors, maximal extensions")
    p.add_argument("file", help="lattice JSON ('-' for stdin)")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("anisotropy", help="local and global anisotropy of a rank-4 lattice")
    p.add_argument("file")
    p.set_defaults(func=cmd_anisotropy)

    p = sub.add_parser("vinberg", help="run Vinberg's algorithm")
    p.add_argument("file")
    p.add_argument("--norms", type=_int_tuple, help="allowed root norms, e.g. 1,2 (default: all admissible)")
    p.add_argument("--basic-point", type=_int_tuple, help="controlling vector v0, e.g. 1,0,0,0")
    p.add_argument("--chamber-point", type=_int_tuple, help="integer point fixing the fundamental cone")
    p.add_argument("--dot", help="write the Coxeter diagram here")
    _add_budget(p)
    p.set_defaults(func=cmd_vinberg)

    p = sub.add_parser("diagram", help="Coxeter diagram and combinatorics of a Vinberg transcript")
    p.add_argument("transcript", help="JSON written by 'vinberg'")
    p.add_argument("--dot", help="write DOT here instead of stdout")
    p.add_argument("--combinatorics", help="write the vertex/edge JSON here")
    p.add_argument("--name", default="coxeter", help="graph name in the DOT output")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("classify", help="enumerate candidates and classify them")
    p.add_argument("--stage", choices=("enumerate", "full"), default="full")
    p.add_argument("--out", help="directory for the JSON report and DOT files")
    p.add_argument("--check", action="store_true", help="compare against the golden files; exit 1 on drift")
    p.add_argument("--golden", help="golden directory (default: the packaged one)")
    _add_budget(p)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return args.func(args)
    except Malformed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
