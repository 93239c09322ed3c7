"""Command-line interface.

Subcommands operate on graph files (see :mod:`gaincount.fileio`) or drive
the verifier.  Exit codes: 0 pass/affirmative, 1 negative verdict or
property failure, 2 input error, 3 internal invariant breach.  Every
command mirrors its report as JSON under ``--json`` with the same field
names as the textual output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .alpha import verify_axioms
from .fileio import FileFormatError, InputDocument, parse_document, serialize_document
from .gaingraph import GraphError
from .groups import GroupError, make_group
from .matroid import (
    CERTIFICATE_BOUND,
    InternalInvariantError,
    SparsityParams,
    check_sparse,
    enumerate_circuits,
    matroid_rank,
    rank_certificate,
)
from .verifier import (
    COUNT_RULE_NAMES,
    SUITE_DEFAULT_MAX_EDGES,
    SUITE_NAMES,
    SearchSpec,
    run_property_suite,
    search_counterexample,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _ids_1based(eset) -> str:
    return ",".join(str(e + 1) for e in sorted(eset))


def _parse_edge_list(arg: Optional[str], doc: InputDocument) -> frozenset[int]:
    if arg is None:
        return doc.graph.all_edges()
    try:
        ids = [int(tok) for tok in arg.split(",") if tok.strip()]
    except ValueError:
        raise FileFormatError(None, f"bad edge list {arg!r}") from None
    out = set()
    for one in ids:
        if not (1 <= one <= doc.graph.edge_count):
            raise FileFormatError(None, f"edge id {one} out of range 1..{doc.graph.edge_count}")
        out.add(one - 1)
    return frozenset(out)


def _load(path: str) -> InputDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_document(fh.read())
    except OSError as exc:
        raise FileFormatError(None, f"cannot read {path}: {exc}") from None


def _require_params(doc: InputDocument) -> SparsityParams:
    if doc.k is None or doc.ell is None:
        raise FileFormatError(None, "file lacks a params declaration")
    if doc.alpha is None:
        raise FileFormatError(None, "file lacks an alpha declaration")
    try:
        return SparsityParams(doc.k, doc.ell, doc.alpha)
    except ValueError as exc:
        raise FileFormatError(None, f"invalid parameters: {exc}") from None


def _emit(args, text_lines: List[str], payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_check(args) -> int:
    doc = _load(args.file)
    params = _require_params(doc)
    verdict = check_sparse(params, doc.graph)
    if verdict.sparse:
        _emit(args, ["SPARSE"], {"command": "check", "sparse": True, "witness": None})
        return EXIT_OK
    witness = _ids_1based(verdict.witness)
    _emit(args, [f"NOT SPARSE witness={witness}"],
          {"command": "check", "sparse": False,
           "witness": sorted(e + 1 for e in verdict.witness)})
    return EXIT_NEGATIVE


def cmd_independent(args) -> int:
    doc = _load(args.file)
    params = _require_params(doc)
    eset = _parse_edge_list(args.edges, doc)
    verdict = check_sparse(params, doc.graph, eset)
    if verdict.sparse:
        _emit(args, ["INDEPENDENT"],
              {"command": "independent", "independent": True, "witness": None})
        return EXIT_OK
    _emit(args, [f"DEPENDENT witness={_ids_1based(verdict.witness)}"],
          {"command": "independent", "independent": False,
           "witness": sorted(e + 1 for e in verdict.witness)})
    return EXIT_NEGATIVE


def cmd_rank(args) -> int:
    doc = _load(args.file)
    params = _require_params(doc)
    rank = matroid_rank(params, doc.graph)
    lines = [f"RANK {rank}"]
    payload = {"command": "rank", "rank": rank}
    if args.certificate:
        if doc.graph.edge_count > CERTIFICATE_BOUND:
            raise FileFormatError(
                None,
                f"certificate mode is bounded at {CERTIFICATE_BOUND} edges "
                f"(graph has {doc.graph.edge_count}); rerun without --certificate")
        cert = rank_certificate(params, doc.graph)
        if cert.value != rank:
            raise InternalInvariantError(
                f"certificate value {cert.value} differs from rank {rank}")
        lines.append(f"E0 {_ids_1based(cert.e0) or '-'}")
        for part in cert.parts:
            lines.append(f"PART {_ids_1based(part)}")
        lines.append(f"VALUE {cert.value}")
        payload["certificate"] = {
            "e0": sorted(e + 1 for e in cert.e0),
            "parts": [sorted(e + 1 for e in part) for part in cert.parts],
            "value": cert.value,
        }
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_circuits(args) -> int:
    doc = _load(args.file)
    try:
        circuits = enumerate_circuits(args.k, args.l, doc.graph)
    except ValueError as exc:
        raise FileFormatError(None, str(exc)) from None
    lines = [f"CIRCUIT {_ids_1based(c)}" for c in circuits]
    if not circuits:
        lines = ["NO CIRCUITS"]
    _emit(args, lines,
          {"command": "circuits", "k": args.k, "l": args.l,
           "circuits": [sorted(e + 1 for e in c) for c in circuits]})
    return EXIT_OK


def cmd_near_balanced(args) -> int:
    doc = _load(args.file)
    eset = _parse_edge_list(args.edges, doc)
    graph = doc.graph
    if not eset or not graph.is_connected(eset):
        raise FileFormatError(None, "edge subset must be nonempty and connected")
    if graph.is_balanced(eset):
        _emit(args, ["BALANCED"],
              {"command": "near-balanced", "status": "BALANCED"})
        return EXIT_NEGATIVE
    cert = graph.near_balanced(eset)
    if cert is None:
        _emit(args, ["NEITHER"],
              {"command": "near-balanced", "status": "NEITHER"})
        return EXIT_NEGATIVE
    gname = graph.group.name(cert.witness_label)
    _emit(args,
          [f"NEAR-BALANCED base={cert.base + 1} extra={_ids_1based(cert.extra_edges)} g={gname}"],
          {"command": "near-balanced", "status": "NEAR-BALANCED",
           "base": cert.base + 1,
           "extra": sorted(e + 1 for e in cert.extra_edges), "g": gname})
    return EXIT_OK


def cmd_verify_alpha(args) -> int:
    doc = _load(args.file)
    if doc.alpha is None:
        raise FileFormatError(None, "file lacks an alpha declaration")
    if doc.k is None:
        raise FileFormatError(None, "file lacks a params declaration (k is needed)")
    report = verify_axioms(doc.alpha, doc.k)
    group = doc.group
    if report.passed:
        _emit(args, [f"ALPHA OK mode={report.mode}"],
              {"command": "verify-alpha", "passed": True, "mode": report.mode,
               "violations": []})
        return EXIT_OK
    lines = []
    payload_violations = []
    for v in report.violations:
        x = ",".join(sorted(group.name(i) for i in v.x))
        y = "" if v.y is None else ",".join(sorted(group.name(i) for i in v.y))
        lines.append(f"ALPHA VIOLATION axiom={v.axiom} x={{{x}}} y={{{y}}} {v.detail}")
        payload_violations.append({"axiom": v.axiom,
                                   "x": sorted(group.name(i) for i in v.x),
                                   "y": None if v.y is None else sorted(group.name(i) for i in v.y),
                                   "detail": v.detail})
    _emit(args, lines, {"command": "verify-alpha", "passed": False,
                        "mode": report.mode, "violations": payload_violations})
    return EXIT_NEGATIVE


def cmd_verify(args) -> int:
    if (args.suite is None) == (args.search is None):
        raise FileFormatError(None, "verify needs exactly one of --suite or --search")
    if not args.group:
        raise FileFormatError(None, "verify needs --group")
    try:
        group = make_group(" ".join(args.group))
    except GroupError as exc:
        raise FileFormatError(None, str(exc)) from None
    labels = tuple(range(group.order)) if args.all_labels else None

    if args.suite is not None:
        if args.suite not in SUITE_NAMES:
            raise FileFormatError(
                None, f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)}")
        max_edges = args.max_edges if args.max_edges is not None \
            else SUITE_DEFAULT_MAX_EDGES[args.suite]
        spec = SearchSpec(group=group, max_vertices=args.max_vertices,
                          max_edges=max_edges, count_rule=args.rule,
                          k=args.k, ell=args.l, labels=labels)
        try:
            report = run_property_suite(args.suite, spec)
        except ValueError as exc:
            raise FileFormatError(None, str(exc)) from None
        _emit(args, [report.format_line()] + report.details,
              {"command": "verify", "suite": report.name, "tested": report.tested,
               "filtered": report.filtered, "failures": report.failures,
               "details": report.details})
        return EXIT_OK if report.failures == 0 else EXIT_NEGATIVE

    if args.search not in COUNT_RULE_NAMES:
        raise FileFormatError(
            None, f"unknown rule {args.search!r}; choose from {', '.join(COUNT_RULE_NAMES)}")
    max_edges = args.max_edges if args.max_edges is not None else 8
    spec = SearchSpec(group=group, max_vertices=args.max_vertices,
                      max_edges=max_edges, count_rule=args.search,
                      k=args.k, ell=args.l, labels=labels)
    result = search_counterexample(spec)
    if result is None:
        _emit(args, [f"NO COUNTEREXAMPLE tested={spec.max_vertices} " +
                     f"vertices, {spec.max_edges} edges"],
              {"command": "verify", "search": args.search, "found": False})
        return EXIT_NEGATIVE
    text = serialize_document(
        result.graph, k=spec.k, ell=spec.ell,
        alpha_spec=None,
        header=f"counterexample for rule {args.search} (instance {result.tested})")
    w = result.verdict.i3
    lines = [f"COUNTEREXAMPLE rule={args.search} tested={result.tested}"]
    if w is not None:
        lines.append(f"I3 restriction={_ids_1based(w.restriction)} "
                     f"maximal1={_ids_1based(w.smaller)} maximal2={_ids_1based(w.larger)}")
    lines.extend(text.rstrip("\n").splitlines())
    payload = {"command": "verify", "search": args.search, "found": True,
               "tested": result.tested, "graph": text,
               "i3": None if w is None else {
                   "restriction": sorted(e + 1 for e in w.restriction),
                   "maximal1": sorted(e + 1 for e in w.smaller),
                   "maximal2": sorted(e + 1 for e in w.larger)}}
    _emit(args, lines, payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaincount",
        description="Count matroids of group-labeled graphs")
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check f_alpha-sparsity of a graph file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("independent", help="check independence of an edge subset")
    p.add_argument("file")
    p.add_argument("--edges", help="comma-separated 1-based edge ids (default: all)")
    p.set_defaults(func=cmd_independent)

    p = sub.add_parser("rank", help="matroid rank, optionally with a partition certificate")
    p.add_argument("file")
    p.add_argument("--certificate", action="store_true")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("circuits", help="circuits of the plain (k,l)-count matroid")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_circuits)

    p = sub.add_parser("near-balanced", help="near-balancedness of an edge subset")
    p.add_argument("file")
    p.add_argument("--edges", help="comma-separated 1-based edge ids (default: all)")
    p.set_defaults(func=cmd_near_balanced)

    p = sub.add_parser("verify-alpha", help="check the alpha axioms for the file's alpha and k")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify_alpha)

    p = sub.add_parser("verify", help="run a property suite or a counterexample search")
    p.add_argument("--suite", choices=SUITE_NAMES)
    p.add_argument("--search", choices=COUNT_RULE_NAMES)
    p.add_argument("--group", nargs="+", help="group spec, e.g. --group cyclic 3")
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--max-edges", type=int, default=None)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--rule", choices=COUNT_RULE_NAMES, default="theorem_full",
                   help="count rule for property suites")
    p.add_argument("--all-labels", action="store_true",
                   help="widen the label alphabet to the whole group")
    p.add_argument("--out", help="write a found counterexample to this file")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GroupError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
