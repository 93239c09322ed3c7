"""Group-labeled multigraphs: walks, switching, balancedness, splits.

Edges are directed only to anchor their labels; reversing an edge while
inverting its label leaves every derived quantity unchanged.  Loops and
parallel edges are allowed.  Graphs are immutable: switching, relabeling and
splitting all return new graphs, with edge ids preserved.

Edge subsets are plain ``frozenset`` objects over dense edge ids 0..m-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .alpha import AlphaFunction
from .groups import GroupTable, SubgroupConjClass, conj_class, generated_subgroup


class GraphError(ValueError):
    """Raised for malformed graphs, walks or edge subsets."""


class Edge(NamedTuple):
    id: int
    tail: int
    head: int
    label: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Walk:
    """Alternating vertex/edge sequence; directions are inferred when omitted.

    A loop traversal defaults to the forward direction; pass ``dirs`` to
    force backward traversals.
    """

    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    dirs: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class NearBalanceCertificate:
    """Witness that an edge set becomes balanced in a split at ``base``.

    ``extra_edges`` is one extra edge set (the side of the bipartition moved
    to the new vertex, together with the unbalanced loops at the base).
    ``witness_label`` is the shared non-identity label in the relabeling the
    detection algorithm used.
    """

    base: int
    extra_edges: frozenset[int]
    witness_label: int


class GainGraph:
    """Directed multigraph with a group element on every edge."""

    def __init__(self, group: GroupTable, vertex_count: int,
                 edges: Sequence[tuple[int, int, int]]):
        if vertex_count < 0:
            raise GraphError("vertex_count must be >= 0")
        self.group = group
        self.vertex_count = vertex_count
        built = []
        for eid, (tail, head, label) in enumerate(edges):
            if not (0 <= tail < vertex_count and 0 <= head < vertex_count):
                raise GraphError(f"edge {eid} endpoint out of range")
            if not (0 <= label < group.order):
                raise GraphError(f"edge {eid} label out of range")
            built.append(Edge(eid, tail, head, label))
        self.edges: Tuple[Edge, ...] = tuple(built)
        self._adj: Optional[Dict[int, List[int]]] = None

    # -- basics ------------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def all_edges(self) -> frozenset[int]:
        return frozenset(range(len(self.edges)))

    def edge(self, eid: int) -> Edge:
        try:
            return self.edges[eid]
        except IndexError:
            raise GraphError(f"no edge with id {eid}") from None

    def _adjacency(self) -> Dict[int, List[int]]:
        if self._adj is None:
            adj: Dict[int, List[int]] = {v: [] for v in range(self.vertex_count)}
            for e in self.edges:
                adj[e.tail].append(e.id)
                if e.head != e.tail:
                    adj[e.head].append(e.id)
            self._adj = adj
        return self._adj

    def check_edge_set(self, eset: Iterable[int]) -> frozenset[int]:
        out = frozenset(eset)
        for eid in out:
            if not (0 <= eid < len(self.edges)):
                raise GraphError(f"edge id {eid} not in graph")
        return out

    def vertices_of(self, eset: Iterable[int]) -> frozenset[int]:
        vs = set()
        for eid in eset:
            e = self.edges[eid]
            vs.add(e.tail)
            vs.add(e.head)
        return frozenset(vs)

    def incident(self, v: int, eset: Iterable[int]) -> frozenset[int]:
        return frozenset(eid for eid in eset
                         if self.edges[eid].tail == v or self.edges[eid].head == v)

    def loops_at(self, v: int, eset: Iterable[int]) -> frozenset[int]:
        return frozenset(eid for eid in eset
                         if self.edges[eid].is_loop and self.edges[eid].tail == v)

    def components(self, eset: Iterable[int]) -> List[Tuple[frozenset[int], frozenset[int]]]:
        """Connected components of the subgraph spanned by ``eset``.

        Returns (vertex set, edge set) pairs ordered by least vertex.
        """
        eset = self.check_edge_set(eset)
        verts = self.vertices_of(eset)
        adj: Dict[int, List[int]] = {v: [] for v in verts}
        for eid in eset:
            e = self.edges[eid]
            adj[e.tail].append(eid)
            if e.head != e.tail:
                adj[e.head].append(eid)
        seen = set()
        comps = []
        for start in sorted(verts):
            if start in seen:
                continue
            stack, cverts = [start], set()
            while stack:
                v = stack.pop()
                if v in cverts:
                    continue
                cverts.add(v)
                for eid in adj[v]:
                    e = self.edges[eid]
                    other = e.head if e.tail == v else e.tail
                    if other not in cverts:
                        stack.append(other)
            seen |= cverts
            cedges = frozenset(eid for eid in eset
                               if self.edges[eid].tail in cverts)
            comps.append((frozenset(cverts), cedges))
        return comps

    def is_connected(self, eset: Iterable[int]) -> bool:
        eset = frozenset(eset)
        if not eset:
            return False
        return len(self.components(eset)) == 1

    # -- gains -------------------------------------------------------------

    def walk_gain(self, walk: Walk) -> int:
        """Ordered label product along the walk; backward traversal inverts."""
        g = self.group
        if len(walk.vertices) != len(walk.edges) + 1:
            raise GraphError("walk needs one more vertex than edges")
        dirs = walk.dirs
        if dirs is not None and len(dirs) != len(walk.edges):
            raise GraphError("walk dirs length mismatch")
        acc = g.identity
        for i, eid in enumerate(walk.edges):
            e = self.edge(eid)
            a, b = walk.vertices[i], walk.vertices[i + 1]
            if dirs is not None:
                d = dirs[i]
                ok = (d == 1 and e.tail == a and e.head == b) or \
                     (d == -1 and e.head == a and e.tail == b)
                if not ok:
                    raise GraphError(f"walk step {i} inconsistent with edge {eid}")
            elif e.tail == a and e.head == b:
                d = 1
            elif e.head == a and e.tail == b:
                d = -1
            else:
                raise GraphError(f"walk step {i} not incident with edge {eid}")
            acc = g.mul(acc, e.label if d == 1 else g.inv(e.label))
        return acc

    def switch(self, v: int, gamma: int) -> "GainGraph":
        """Relabel at one vertex: loops conjugate, out-edges left-multiply,
        in-edges right-multiply by the inverse."""
        g = self.group
        gi = g.inv(gamma)
        new = []
        for e in self.edges:
            if e.is_loop and e.tail == v:
                lab = g.mul(g.mul(gamma, e.label), gi)
            elif e.tail == v:
                lab = g.mul(gamma, e.label)
            elif e.head == v:
                lab = g.mul(e.label, gi)
            else:
                lab = e.label
            new.append((e.tail, e.head, lab))
        return GainGraph(g, self.vertex_count, new)

    def reverse_edge(self, eid: int) -> "GainGraph":
        """Flip one edge's orientation, inverting its label (a semantic no-op)."""
        new = [(e.head, e.tail, self.group.inv(e.label)) if e.id == eid
               else (e.tail, e.head, e.label) for e in self.edges]
        return GainGraph(self.group, self.vertex_count, new)

    def _forest_potentials(self, forest: frozenset[int]) -> Dict[int, int]:
        """Root-path gains for every vertex of an acyclic edge set.

        Vertices outside the forest get the identity.  Raises if the edge set
        contains a cycle (loops included).
        """
        g = self.group
        theta = {v: g.identity for v in range(self.vertex_count)}
        adj: Dict[int, List[int]] = {}
        for eid in forest:
            e = self.edges[eid]
            if e.is_loop:
                raise GraphError("forest contains a loop")
            adj.setdefault(e.tail, []).append(eid)
            adj.setdefault(e.head, []).append(eid)
        visited = set()
        for root in sorted(adj):
            if root in visited:
                continue
            visited.add(root)
            stack = [root]
            tree_edges_seen = set()
            while stack:
                v = stack.pop()
                for eid in adj[v]:
                    if eid in tree_edges_seen:
                        continue
                    e = self.edges[eid]
                    other = e.head if e.tail == v else e.tail
                    if other in visited:
                        raise GraphError("forest contains a cycle")
                    tree_edges_seen.add(eid)
                    visited.add(other)
                    lab = e.label if e.tail == v else g.inv(e.label)
                    theta[other] = g.mul(theta[v], lab)
                    stack.append(other)
        return theta

    def with_respecting(self, forest: Iterable[int]) -> "GainGraph":
        """Equivalent relabeling with identity labels on the given forest.

        Each forest tree is rooted at its least vertex and every vertex is
        switched by the gain of its root path, so the result is reachable by
        a finite switching sequence.
        """
        forest = self.check_edge_set(forest)
        theta = self._forest_potentials(forest)
        g = self.group
        new = []
        for e in self.edges:
            lab = g.mul(g.mul(theta[e.tail], e.label), g.inv(theta[e.head]))
            new.append((e.tail, e.head, lab))
        return GainGraph(g, self.vertex_count, new)

    def _tree_and_labels(self, eset: frozenset[int], avoid: Optional[int] = None):
        """Spanning tree of a connected edge set plus tree-respecting labels.

        With ``avoid`` set, the tree extends a spanning forest of the set
        minus that vertex (one connector edge per remaining component), which
        is the shape the base test needs.  Returns (tree ids, relabeled map
        edge id -> label).
        """
        g = self.group
        verts = self.vertices_of(eset)
        adj: Dict[int, List[int]] = {v: [] for v in verts}
        for eid in eset:
            e = self.edges[eid]
            if e.is_loop:
                continue
            adj[e.tail].append(eid)
            adj[e.head].append(eid)
        for v in adj:
            adj[v].sort()

        tree: set[int] = set()
        theta: Dict[int, int] = {}

        def grow(root: int, allowed_skip: Optional[int]):
            # BFS restricted to vertices != allowed_skip
            theta[root] = theta.get(root, g.identity)
            stack = [root]
            while stack:
                v = stack.pop()
                for eid in adj[v]:
                    e = self.edges[eid]
                    other = e.head if e.tail == v else e.tail
                    if other in theta or other == allowed_skip:
                        continue
                    tree.add(eid)
                    lab = e.label if e.tail == v else g.inv(e.label)
                    theta[other] = g.mul(theta[v], lab)
                    stack.append(other)

        if avoid is None:
            root = min(verts)
            theta[root] = g.identity
            grow(root, None)
        else:
            if avoid not in verts:
                raise GraphError("avoid vertex not in edge set")
            # forest of the set minus the avoided vertex, components first
            comp_roots = []
            placeholder = {}
            for start in sorted(verts - {avoid}):
                if start in placeholder:
                    continue
                comp = {start}
                stack = [start]
                while stack:
                    v = stack.pop()
                    for eid in adj[v]:
                        e = self.edges[eid]
                        other = e.head if e.tail == v else e.tail
                        if other == avoid or other in comp:
                            continue
                        comp.add(other)
                        stack.append(other)
                for v in comp:
                    placeholder[v] = start
                comp_roots.append((start, comp))
            theta[avoid] = g.identity
            for start, comp in comp_roots:
                connector = min(eid for eid in adj[avoid]
                                if (self.edges[eid].head if self.edges[eid].tail == avoid
                                    else self.edges[eid].tail) in comp)
                e = self.edges[connector]
                other = e.head if e.tail == avoid else e.tail
                tree.add(connector)
                lab = e.label if e.tail == avoid else g.inv(e.label)
                theta[other] = lab
                grow(other, avoid)
        if set(theta) != set(verts):
            raise GraphError("edge set is not connected")
        labels = {}
        for eid in eset:
            e = self.edges[eid]
            labels[eid] = g.mul(g.mul(theta[e.tail], e.label), g.inv(theta[e.head]))
        return frozenset(tree), labels

    def gain_generators(self, eset: Iterable[int]) -> List[int]:
        """Generators of the closed-walk subgroup of a connected edge set."""
        eset = self.check_edge_set(eset)
        if not eset or not self.is_connected(eset):
            raise GraphError("gain subgroup needs a nonempty connected edge set")
        tree, labels = self._tree_and_labels(eset)
        return [labels[eid] for eid in sorted(eset - tree)]

    def gain_class(self, eset: Iterable[int]) -> SubgroupConjClass:
        """Conjugacy class of the subgroup generated by closed-walk gains."""
        gens = self.gain_generators(eset)
        return conj_class(self.group, generated_subgroup(self.group, gens))

    def is_balanced(self, eset: Iterable[int]) -> bool:
        """True when no cycle inside the edge set has a non-identity gain."""
        eset = self.check_edge_set(eset)
        if not eset:
            raise GraphError("balancedness is defined for nonempty edge sets")
        ident = self.group.identity
        for _, cedges in self.components(eset):
            tree, labels = self._tree_and_labels(cedges)
            for eid in cedges - tree:
                if labels[eid] != ident:
                    return False
        return True

    # -- splits and near-balancedness ---------------------------------------

    def split(self, v: int, moved: Iterable[int]) -> "GainGraph":
        """Split ``v``: edges in ``moved`` reattach to a new vertex.

        ``moved`` together with its complement bipartitions the non-loop
        edges at v.  Balanced loops stay at v; unbalanced loops become arcs
        from v to the new vertex keeping their stored label.
        """
        moved = self.check_edge_set(moved)
        nonloop_at_v = frozenset(e.id for e in self.edges
                                 if not e.is_loop and v in (e.tail, e.head))
        if not moved <= nonloop_at_v:
            raise GraphError("moved edges must be non-loop edges incident to the split vertex")
        v2 = self.vertex_count
        new = []
        for e in self.edges:
            if e.id in moved:
                tail = v2 if e.tail == v else e.tail
                head = v2 if e.head == v else e.head
                new.append((tail, head, e.label))
            elif e.is_loop and e.tail == v and e.label != self.group.identity:
                new.append((v, v2, e.label))
            else:
                new.append((e.tail, e.head, e.label))
        return GainGraph(self.group, self.vertex_count + 1, new)

    def fractions(self, v: int, eset: Optional[Iterable[int]] = None) -> List[frozenset[int]]:
        """One edge set per component of the subgraph minus ``v``.

        Each fraction holds the edges spanned by the component's vertices
        together with v, excluding loops at v.  Ordered by least component
        vertex.
        """
        if not (0 <= v < self.vertex_count):
            raise GraphError(f"vertex {v} not in graph")
        eset = self.all_edges() if eset is None else self.check_edge_set(eset)
        verts = self.vertices_of(eset) - {v}
        adj: Dict[int, List[int]] = {u: [] for u in verts}
        for eid in eset:
            e = self.edges[eid]
            if v in (e.tail, e.head):
                continue
            if e.tail in adj:
                adj[e.tail].append(eid)
            if not e.is_loop and e.head in adj:
                adj[e.head].append(eid)
        seen = set()
        out = []
        for start in sorted(verts):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for eid in adj[u]:
                    e = self.edges[eid]
                    other = e.head if e.tail == u else e.tail
                    if other not in comp:
                        comp.add(other)
                        stack.append(other)
            seen |= comp
            keep = comp | {v}
            frac = frozenset(
                eid for eid in eset
                if not (self.edges[eid].is_loop and self.edges[eid].tail == v)
                and self.edges[eid].tail in keep and self.edges[eid].head in keep)
            out.append(frac)
        return out

    def near_balanced(self, eset: Iterable[int]) -> Optional[NearBalanceCertificate]:
        """Certificate for the least base vertex, or None.

        Balanced sets are never near-balanced.  A vertex v is a base exactly
        when, after relabeling along a spanning tree that extends a spanning
        forest avoiding v, all labels away from v are the identity and the
        labels at v fit one non-identity element g: within each fraction they
        lie in {1, g} or {1, g^-1}, and every unbalanced loop at v carries g
        or g^-1.
        """
        eset = self.check_edge_set(eset)
        if not eset:
            raise GraphError("near-balancedness is defined for nonempty edge sets")
        if not self.is_connected(eset):
            raise GraphError("near-balancedness is defined for connected edge sets")
        if self.is_balanced(eset):
            return None
        for v in sorted(self.vertices_of(eset)):
            cert = self._certify_base(eset, v)
            if cert is not None:
                return cert
        return None

    def near_balance_bases(self, eset: Iterable[int]) -> List[int]:
        """Every vertex the base test accepts; empty for balanced sets."""
        eset = self.check_edge_set(eset)
        if not eset or not self.is_connected(eset):
            raise GraphError("base testing needs a nonempty connected edge set")
        if self.is_balanced(eset):
            return []
        return [v for v in sorted(self.vertices_of(eset))
                if self._certify_base(eset, v) is not None]

    def _certify_base(self, eset: frozenset[int], v: int) -> Optional[NearBalanceCertificate]:
        g = self.group
        ident = g.identity
        _, labels = self._tree_and_labels(eset, avoid=v)
        at_v = self.incident(v, eset)
        for eid in sorted(eset - at_v):
            if labels[eid] != ident:
                return None
        loops_v = self.loops_at(v, eset)
        unbal_loops = sorted(eid for eid in loops_v if labels[eid] != ident)
        nonloop_v = at_v - loops_v

        def into_v(eid: int) -> int:
            e = self.edges[eid]
            return labels[eid] if e.head == v else g.inv(labels[eid])

        nonident = [into_v(eid) for eid in sorted(nonloop_v) if into_v(eid) != ident]
        nonident += [labels[eid] for eid in unbal_loops]
        if not nonident:
            return None
        cand = nonident[0]
        cand_inv = g.inv(cand)
        for eid in unbal_loops:
            if labels[eid] not in (cand, cand_inv):
                return None
        extra = set(unbal_loops)
        for frac in self.fractions(v, eset):
            frac_v = sorted(frac & nonloop_v)
            vals = {into_v(eid) for eid in frac_v}
            others = vals - {ident}
            if not others:
                continue
            if others <= {cand}:
                extra.update(eid for eid in frac_v if into_v(eid) == cand)
            elif others <= {cand_inv}:
                # flipping the component's side unifies the sign; the edges
                # that then carry the witness are the identity-labeled ones
                extra.update(eid for eid in frac_v if into_v(eid) == ident)
            else:
                return None
        return NearBalanceCertificate(base=v, extra_edges=frozenset(extra),
                                      witness_label=cand)

    def extra_edge_sets(self, eset: Iterable[int], v: int) -> List[frozenset[int]]:
        """All extra edge sets at a base vertex, by exhausting bipartitions.

        Every returned set is one bipartition side plus the unbalanced loops
        at v.  Raises when v is not a base of the (near-balanced) set.
        """
        eset = self.check_edge_set(eset)
        if not eset or not self.is_connected(eset):
            raise GraphError("extra edge sets need a nonempty connected edge set")
        if self.is_balanced(eset):
            raise GraphError("balanced sets have no extra edge sets")
        loops_v = self.loops_at(v, eset)
        unbal = frozenset(eid for eid in loops_v
                          if self.edges[eid].label != self.group.identity)
        nonloop_v = sorted(self.incident(v, eset) - loops_v)
        found = set()
        for bits in range(1 << len(nonloop_v)):
            moved = frozenset(eid for t, eid in enumerate(nonloop_v) if bits >> t & 1)
            if balanced_in_split(self, eset, v, moved):
                found.add(moved | unbal)
        if not found:
            raise GraphError(f"vertex {v} is not a base for near-balancedness")
        return sorted(found, key=sorted)

    def __repr__(self) -> str:  # pragma: no cover
        return (f"GainGraph({self.group.spec!r}, n={self.vertex_count}, "
                f"edges={[(e.tail, e.head, self.group.name(e.label)) for e in self.edges]})")


def balanced_in_split(graph: GainGraph, eset: Iterable[int], v: int,
                      moved: Iterable[int]) -> bool:
    """Does the edge set become balanced in the split of v moving ``moved``?

    Loop labels are freely invertible, so every choice of arc label for the
    unbalanced loops at v is tried.
    """
    eset = graph.check_edge_set(eset)
    moved = graph.check_edge_set(moved)
    unbal = sorted(eid for eid in graph.loops_at(v, eset)
                   if graph.edges[eid].label != graph.group.identity)
    for bits in range(1 << len(unbal)):
        flipped = graph
        for t, eid in enumerate(unbal):
            if bits >> t & 1:
                flipped = flipped.reverse_edge(eid)
        if flipped.split(v, moved).is_balanced(eset):
            return True
    return False


def subgroup_of_set(graph: GainGraph, eset: Iterable[int],
                    alpha: AlphaFunction) -> tuple[SubgroupConjClass, int]:
    """Conjugacy class of the closed-walk subgroup of a connected set and its
    alpha value."""
    cls = graph.gain_class(eset)
    return cls, alpha.value_of_class(cls)


def verify_near_balance_certificate(graph: GainGraph, eset: Iterable[int],
                                    cert: NearBalanceCertificate) -> bool:
    """Re-check a certificate by performing its split."""
    eset = graph.check_edge_set(eset)
    loops = graph.loops_at(cert.base, eset)
    moved = cert.extra_edges - loops
    return balanced_in_split(graph, eset, cert.base, moved)
