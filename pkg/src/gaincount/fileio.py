"""Text format for group-labeled graph instances.

One declaration per line, ``#`` starts a comment::

    group cyclic 6
    params k 2 l 3
    alpha builtin example5 6 2
    vertices 4
    edge 1 2 0
    loop 3 2

Vertices are 1-based in files, 0-based in the API.  Edge ids are assigned in
file order (and printed 1-based).  ``group table N`` consumes the next N
lines as Cayley table rows; ``alpha table`` consumes following
``<generators> -> <value>`` lines, closing each generator set and rejecting
conflicting class values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .alpha import AlphaFunction, BUILTIN_ALPHA_NAMES, builtin_alpha
from .groups import (
    GroupError,
    GroupTable,
    Subgroup,
    conj_class,
    generated_subgroup,
    make_group,
    subgroup_conj_classes,
)
from .gaingraph import GainGraph


class FileFormatError(ValueError):
    def __init__(self, line_no: Optional[int], message: str):
        self.line_no = line_no
        self.message = message
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)


@dataclass
class InputDocument:
    group: GroupTable
    graph: GainGraph
    k: Optional[int] = None
    ell: Optional[int] = None
    alpha: Optional[AlphaFunction] = None
    alpha_spec: Optional[str] = None


def _tokens(line: str) -> List[str]:
    return line.split("#", 1)[0].split()


def parse_document(text: str) -> InputDocument:
    lines = text.splitlines()
    group: Optional[GroupTable] = None
    group_line = None
    vertices: Optional[int] = None
    k = ell = None
    alpha_decl: Optional[Tuple[int, List[str]]] = None
    alpha_table_rows: List[Tuple[int, str]] = []
    edges: List[Tuple[int, Tuple[int, int, str]]] = []

    i = 0
    n_lines = len(lines)
    while i < n_lines:
        line_no = i + 1
        toks = _tokens(lines[i])
        i += 1
        if not toks:
            continue
        head = toks[0]
        if head == "group":
            if group is not None:
                raise FileFormatError(line_no, "duplicate group declaration")
            if len(toks) >= 2 and toks[1] == "table":
                if len(toks) != 3:
                    raise FileFormatError(line_no, "usage: group table N")
                try:
                    order = int(toks[2])
                except ValueError:
                    raise FileFormatError(line_no, f"bad table order {toks[2]!r}") from None
                rows = []
                while i < n_lines and len(rows) < order:
                    row_toks = _tokens(lines[i])
                    if row_toks:
                        rows.append(" ".join(row_toks))
                    i += 1
                if len(rows) < order:
                    raise FileFormatError(line_no, f"table needs {order} rows")
                spec = f"table {order} " + " ".join(rows)
            else:
                spec = " ".join(toks[1:])
            try:
                group = make_group(spec)
            except GroupError as exc:
                raise FileFormatError(line_no, str(exc)) from None
            group_line = line_no
        elif head == "params":
            # params k <int> l <int>
            if len(toks) != 5 or toks[1] != "k" or toks[3] != "l":
                raise FileFormatError(line_no, "usage: params k <int> l <int>")
            try:
                k, ell = int(toks[2]), int(toks[4])
            except ValueError:
                raise FileFormatError(line_no, "params values must be integers") from None
        elif head == "alpha":
            if alpha_decl is not None:
                raise FileFormatError(line_no, "duplicate alpha declaration")
            if len(toks) < 2:
                raise FileFormatError(line_no, "usage: alpha builtin <name> [args] | alpha table")
            if toks[1] == "builtin":
                if len(toks) < 3:
                    raise FileFormatError(line_no, "alpha builtin needs a name")
                alpha_decl = (line_no, toks[1:])
            elif toks[1] == "table":
                alpha_decl = (line_no, ["table"])
                while i < n_lines:
                    row_toks = _tokens(lines[i])
                    if row_toks and "->" in row_toks:
                        alpha_table_rows.append((i + 1, " ".join(row_toks)))
                        i += 1
                    elif not row_toks:
                        i += 1
                    else:
                        break
            else:
                raise FileFormatError(line_no, f"unknown alpha form {toks[1]!r}")
        elif head == "vertices":
            if len(toks) != 2:
                raise FileFormatError(line_no, "usage: vertices N")
            try:
                vertices = int(toks[1])
            except ValueError:
                raise FileFormatError(line_no, f"bad vertex count {toks[1]!r}") from None
            if vertices < 0:
                raise FileFormatError(line_no, "vertex count must be >= 0")
        elif head in ("edge", "loop"):
            if head == "edge":
                if len(toks) != 4:
                    raise FileFormatError(line_no, "usage: edge <u> <v> <element-name>")
                u_s, v_s, name = toks[1], toks[2], toks[3]
            else:
                if len(toks) != 3:
                    raise FileFormatError(line_no, "usage: loop <v> <element-name>")
                u_s, v_s, name = toks[1], toks[1], toks[2]
            try:
                u, v = int(u_s), int(v_s)
            except ValueError:
                raise FileFormatError(line_no, "vertices must be integers") from None
            edges.append((line_no, (u, v, name)))
        else:
            raise FileFormatError(line_no, f"unknown declaration {head!r}")

    if group is None:
        raise FileFormatError(None, "missing group declaration")
    if vertices is None:
        raise FileFormatError(None, "missing vertices declaration")

    built_edges = []
    for line_no, (u, v, name) in edges:
        if not (1 <= u <= vertices and 1 <= v <= vertices):
            raise FileFormatError(line_no, f"vertex out of range 1..{vertices}")
        try:
            label = group.index(name)
        except GroupError as exc:
            raise FileFormatError(line_no, str(exc)) from None
        built_edges.append((u - 1, v - 1, label))
    graph = GainGraph(group, vertices, built_edges)

    alpha = None
    alpha_spec = None
    if alpha_decl is not None:
        decl_line, decl = alpha_decl
        if decl[0] == "builtin":
            name = decl[1]
            if name not in BUILTIN_ALPHA_NAMES:
                raise FileFormatError(decl_line, f"unknown builtin alpha {name!r}")
            try:
                if name == "example5":
                    if len(decl) != 4:
                        raise FileFormatError(decl_line, "usage: alpha builtin example5 <n> <i>")
                    n_arg, i_arg = int(decl[2]), int(decl[3])
                    if n_arg != group.order:
                        raise FileFormatError(
                            decl_line, f"example5 n={n_arg} does not match group order {group.order}")
                    alpha = builtin_alpha("example5", group, i=i_arg)
                    alpha_spec = f"builtin example5 {n_arg} {i_arg}"
                else:
                    if len(decl) != 2:
                        raise FileFormatError(decl_line, f"alpha builtin {name} takes no arguments")
                    alpha = builtin_alpha(name, group)
                    alpha_spec = f"builtin {name}"
            except (ValueError, GroupError) as exc:
                if isinstance(exc, FileFormatError):
                    raise
                raise FileFormatError(decl_line, str(exc)) from None
        else:
            alpha = _parse_alpha_table(group, alpha_table_rows, decl_line)
            alpha_spec = "table"
    return InputDocument(group=group, graph=graph, k=k, ell=ell,
                         alpha=alpha, alpha_spec=alpha_spec)


def _parse_alpha_table(group: GroupTable, rows: List[Tuple[int, str]],
                       decl_line: int) -> AlphaFunction:
    if not rows:
        raise FileFormatError(decl_line, "alpha table has no rows")
    assigned: Dict = {}
    for line_no, row in rows:
        lhs, _, rhs = row.partition("->")
        names = lhs.split()
        try:
            value = int(rhs.strip())
        except ValueError:
            raise FileFormatError(line_no, f"bad alpha value {rhs.strip()!r}") from None
        try:
            gens = [group.index(nm) for nm in names]
        except GroupError as exc:
            raise FileFormatError(line_no, str(exc)) from None
        cls = conj_class(group, generated_subgroup(group, gens))
        if cls in assigned and assigned[cls][0] != value:
            raise FileFormatError(
                line_no,
                f"conflicting values {assigned[cls][0]} and {value} for one conjugacy class")
        assigned[cls] = (value, line_no)
    missing = [c for c in subgroup_conj_classes(group) if c not in assigned]
    if missing:
        names = [[group.name(m) for m in c.members] for c in missing[:3]]
        raise FileFormatError(
            decl_line, f"alpha table leaves {len(missing)} conjugacy classes unassigned, e.g. {names}")
    values = {c: v for c, (v, _) in assigned.items()}
    cap = max(values.values()) if values else 0
    try:
        return AlphaFunction(group, cap, values, name="table")
    except ValueError as exc:
        raise FileFormatError(decl_line, str(exc)) from None


def serialize_document(graph: GainGraph, k: Optional[int] = None,
                       ell: Optional[int] = None,
                       alpha_spec: Optional[str] = None,
                       header: Optional[str] = None) -> str:
    """Graph (plus optional params/alpha) in the text format; re-parseable."""
    group = graph.group
    out = []
    if header:
        for line in header.splitlines():
            out.append(f"# {line}")
    if group.spec.startswith("table "):
        toks = group.spec.split()
        n = int(toks[1])
        out.append(f"group table {n}")
        flat = toks[2:]
        for r in range(n):
            out.append(" ".join(flat[r * n:(r + 1) * n]))
    else:
        out.append(f"group {group.spec}")
    if k is not None and ell is not None:
        out.append(f"params k {k} l {ell}")
    if alpha_spec is not None:
        out.append(f"alpha {alpha_spec}")
    out.append(f"vertices {graph.vertex_count}")
    for e in graph.edges:
        if e.is_loop:
            out.append(f"loop {e.tail + 1} {group.name(e.label)}")
        else:
            out.append(f"edge {e.tail + 1} {e.head + 1} {group.name(e.label)}")
    return "\n".join(out) + "\n"
