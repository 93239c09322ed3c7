"""Lifted count functions f_alpha and the matroids they induce.

The count of a connected edge set F is k|V(F)| - l + beta(F), where beta
caps the gain-subgroup value at k on near-balanced sets.  Sparsity,
independence, rank, circuits and the partition certificate for the rank
formula all live here.

Everything is driven by either the subset-scan reference oracle
(:func:`check_sparse_naive`) or the circuit pipeline (:func:`check_sparse`):
(k,0)-sparsity via an out-degree-k orientation, then count checks on the
circuits of the plain (k,l')-count matroids for l' = 1..l.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .alpha import AlphaFunction, verify_axioms
from .gaingraph import GainGraph, GraphError
from .groups import generated_subgroup

NAIVE_BOUND = 20
CERTIFICATE_BOUND = 10


class InternalInvariantError(RuntimeError):
    """A structural guarantee failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class CountRule:
    """Count recipe: (k, l), an alpha, and whether near-balanced sets cap at k.

    Unvalidated; the verifier deliberately runs defective variants through
    this type.  Validated user-facing parameters are `SparsityParams`.
    """

    k: int
    ell: int
    alpha: AlphaFunction
    near_cap: bool = True


class SparsityParams:
    """Validated (k, l, alpha) triple for the matroid theorems.

    Requires k >= 1, 0 <= l <= 2k-1, alpha values within 0..l, and alpha
    passing the polymatroidal axioms including the jump condition for k.
    """

    def __init__(self, k: int, ell: int, alpha: AlphaFunction):
        if k < 1:
            raise ValueError("k must be >= 1")
        if not (0 <= ell <= 2 * k - 1):
            raise ValueError(f"l must satisfy 0 <= l <= 2k-1, got k={k}, l={ell}")
        if alpha.max_value > ell:
            raise ValueError(
                f"alpha takes value {alpha.max_value}, above l={ell}")
        report = verify_axioms(alpha, k)
        if not report.passed:
            bad = sorted(report.violated_axioms())
            raise ValueError(f"alpha fails axioms {bad} for k={k}")
        self.k = k
        self.ell = ell
        self.alpha = alpha

    def rule(self) -> CountRule:
        return CountRule(self.k, self.ell, self.alpha, near_cap=True)

    def __repr__(self) -> str:  # pragma: no cover
        return f"SparsityParams(k={self.k}, l={self.ell}, alpha={self.alpha.name})"


@dataclass(frozen=True)
class CountVerdict:
    sparse: bool
    witness: Optional[frozenset[int]] = None


@dataclass(frozen=True)
class PartitionCertificate:
    """A partition {E0, E1..Et} with connected parts and its count value."""

    e0: frozenset[int]
    parts: Tuple[frozenset[int], ...]
    value: int


def _as_rule(params) -> CountRule:
    if isinstance(params, CountRule):
        return params
    return params.rule()


# ---------------------------------------------------------------------------
# Per-graph subset tables


class SubsetTables:
    """Bitmask tables over an ordered edge universe of one graph.

    Local bit t corresponds to ``ids[t]``.  Provides vertex masks and
    connectivity for every subset, the basis for all subset scans.
    """

    def __init__(self, graph: GainGraph, universe: Optional[Iterable[int]] = None,
                 bound: int = NAIVE_BOUND):
        self.graph = graph
        ids = sorted(graph.all_edges() if universe is None
                     else graph.check_edge_set(universe))
        if len(ids) > bound:
            raise GraphError(f"edge universe of size {len(ids)} exceeds bound {bound}")
        self.ids = ids
        self.m = len(ids)
        self.pos = {eid: t for t, eid in enumerate(ids)}
        self.tails = [graph.edges[eid].tail for eid in ids]
        self.heads = [graph.edges[eid].head for eid in ids]
        self.labels = [graph.edges[eid].label for eid in ids]
        self.evmask = [(1 << self.tails[t]) | (1 << self.heads[t]) for t in range(self.m)]
        size = 1 << self.m
        vmask = [0] * size
        conn = bytearray(size)
        vcount = [0] * size
        for s in range(1, size):
            low = s & -s
            t = low.bit_length() - 1
            vmask[s] = vmask[s ^ low] | self.evmask[t]
            vcount[s] = vmask[s].bit_count()
            if s == low:
                conn[s] = 1
            else:
                rest = s
                while rest:
                    lb = rest & -rest
                    rest ^= lb
                    r = s ^ lb
                    if conn[r] and (self.evmask[lb.bit_length() - 1] & vmask[r]):
                        conn[s] = 1
                        break
        self.vmask = vmask
        self.vcount = vcount
        self.conn = conn

    def mask_of(self, eset: Iterable[int]) -> int:
        m = 0
        for eid in eset:
            m |= 1 << self.pos[eid]
        return m

    def set_of(self, mask: int) -> frozenset[int]:
        return frozenset(self.ids[t] for t in range(self.m) if mask >> t & 1)

    def sort_key(self, mask: int) -> tuple:
        return tuple(sorted(self.set_of(mask)))


class RuleTables:
    """Lazy count-function evaluation for one rule over one subset universe.

    The gain subgroup and the near-balance bit are only computed when the
    verdict actually depends on them: a connected set S with excess
    t = |S| - (k|V(S)| - l) is a violator iff beta(S) < t, and beta needs the
    near-balance test only when t exceeds k and the subgroup value exceeds k.
    """

    def __init__(self, rule: CountRule, graph: GainGraph,
                 universe: Optional[Iterable[int]] = None,
                 tables: Optional[SubsetTables] = None,
                 bound: int = NAIVE_BOUND,
                 share_gain: Optional[Dict[int, tuple]] = None,
                 share_nb: Optional[Dict[int, bool]] = None):
        self.rule = rule
        self.graph = graph
        self.t = tables if tables is not None else SubsetTables(graph, universe, bound)
        self.group = graph.group
        # gain structure and near-balance bits do not depend on the rule, so
        # scans over several rules may share these caches per graph
        self._gain: Dict[int, tuple] = {} if share_gain is None else share_gain
        self._atilde: Dict[int, int] = {}
        self._gen_value: Dict[tuple, int] = {}
        self._nb: Dict[int, bool] = {} if share_nb is None else share_nb
        self._viol: Optional[List[int]] = None
        self._dep: Optional[bytearray] = None

    # gain structure -------------------------------------------------------

    def gain_info(self, mask: int) -> tuple:
        """(balanced, sorted tuple of distinct nontrivial cycle gains)."""
        got = self._gain.get(mask)
        if got is not None:
            return got
        g = self.group
        ident = g.identity
        parent: Dict[int, int] = {}
        up: Dict[int, int] = {}  # gain from parent down to the vertex

        def find(x: int) -> tuple[int, int]:
            chain = []
            while parent[x] != x:
                chain.append(x)
                x = parent[x]
            pot = ident
            for y in reversed(chain):
                pot = g.mul(pot, up[y])
            return x, pot

        gens = set()
        rest = mask
        while rest:
            lb = rest & -rest
            rest ^= lb
            t = lb.bit_length() - 1
            u, v, lab = self.t.tails[t], self.t.heads[t], self.t.labels[t]
            if u not in parent:
                parent[u] = u
                up[u] = ident
            if v not in parent:
                parent[v] = v
                up[v] = ident
            ru, pu = find(u)
            rv, pv = find(v)
            if ru != rv:
                parent[rv] = ru
                up[rv] = g.mul(g.mul(pu, lab), g.inv(pv))
            else:
                c = g.mul(g.mul(pu, lab), g.inv(pv))
                if c != ident:
                    gens.add(c)
        out = (not gens, tuple(sorted(gens)))
        self._gain[mask] = out
        return out

    def balanced(self, mask: int) -> bool:
        return self.gain_info(mask)[0]

    def alpha_tilde(self, mask: int) -> int:
        got = self._atilde.get(mask)
        if got is not None:
            return got
        _, gens = self.gain_info(mask)
        v = self._gen_value.get(gens)
        if v is None:
            sub = generated_subgroup(self.group, gens)
            v = self.rule.alpha.value_of_subgroup(sub)
            self._gen_value[gens] = v
        self._atilde[mask] = v
        return v

    def near_balanced(self, mask: int) -> bool:
        got = self._nb.get(mask)
        if got is None:
            got = self.graph.near_balanced(self.t.set_of(mask)) is not None
            self._nb[mask] = got
        return got

    # counts -----------------------------------------------------------------

    def beta(self, mask: int) -> int:
        a = self.alpha_tilde(mask)
        if self.rule.near_cap and a > self.rule.k and self.near_balanced(mask):
            return self.rule.k
        return a

    def f_value(self, mask: int) -> int:
        return self.rule.k * self.t.vcount[mask] - self.rule.ell + self.beta(mask)

    def excess(self, mask: int) -> int:
        return mask.bit_count() - (self.rule.k * self.t.vcount[mask] - self.rule.ell)

    def is_violator(self, mask: int) -> bool:
        """Connected masks only; decides |S| > f(S) with minimal work."""
        t = self.excess(mask)
        if t <= 0:
            return False
        if self.balanced(mask):
            return True
        a = self.alpha_tilde(mask)
        if not self.rule.near_cap or a <= self.rule.k:
            return a < t
        if t <= self.rule.k:
            return False
        if t > a:
            return True
        return self.near_balanced(mask)

    def violators(self) -> List[int]:
        if self._viol is None:
            conn = self.t.conn
            self._viol = [s for s in range(1, 1 << self.t.m)
                          if conn[s] and self.is_violator(s)]
        return self._viol

    def dep_table(self) -> bytearray:
        """dep[S] = S contains a connected count violator."""
        if self._dep is None:
            size = 1 << self.t.m
            dep = bytearray(size)
            for s in self.violators():
                dep[s] = 1
            for s in range(1, size):
                if dep[s]:
                    continue
                rest = s
                while rest:
                    lb = rest & -rest
                    rest ^= lb
                    if dep[s ^ lb]:
                        dep[s] = 1
                        break
            self._dep = dep
        return self._dep

    def independent(self, mask: int) -> bool:
        return not self.dep_table()[mask]


# ---------------------------------------------------------------------------
# Counts on explicit edge sets


def beta(params, graph: GainGraph, eset: Iterable[int]) -> int:
    """min(alpha-tilde, k) on near-balanced connected sets, alpha-tilde else."""
    rule = _as_rule(params)
    eset = graph.check_edge_set(eset)
    if not eset or not graph.is_connected(eset):
        raise GraphError("beta needs a nonempty connected edge set")
    a = rule.alpha.value_of_class(graph.gain_class(eset))
    if rule.near_cap and a > rule.k and graph.near_balanced(eset) is not None:
        return rule.k
    return a


def f_alpha(params, graph: GainGraph, eset: Iterable[int]) -> int:
    rule = _as_rule(params)
    eset = graph.check_edge_set(eset)
    vs = graph.vertices_of(eset)
    return rule.k * len(vs) - rule.ell + beta(rule, graph, eset)


# ---------------------------------------------------------------------------
# Sparsity checking


def check_sparse_naive(params, graph: GainGraph,
                       eset: Optional[Iterable[int]] = None,
                       bound: int = NAIVE_BOUND) -> CountVerdict:
    """Reference oracle: scan every nonempty connected subset.

    Ties among violators break toward the lexicographically least id tuple.
    """
    rule = _as_rule(params)
    rt = RuleTables(rule, graph, eset, bound=bound)
    best = None
    best_key = None
    for s in rt.violators():
        key = rt.t.sort_key(s)
        if best is None or key < best_key:
            best, best_key = s, key
    if best is None:
        return CountVerdict(True, None)
    return CountVerdict(False, rt.t.set_of(best))


def _k0_orientation_violation(k: int, graph: GainGraph,
                              ids: List[int]) -> Optional[frozenset[int]]:
    """Find a connected set with |S| > k|V(S)|, or None if an orientation
    with out-degree at most k exists (they are equivalent)."""
    outdeg: Dict[int, int] = {}
    arcs: Dict[int, List[int]] = {}  # vertex -> edge ids oriented out of it
    direction: Dict[int, tuple[int, int]] = {}  # eid -> (from, to)

    def ensure(v: int):
        if v not in outdeg:
            outdeg[v] = 0
            arcs[v] = []

    def reroute(start: int, protected: set[int]) -> bool:
        # find a directed path from start to a vertex with spare out-capacity
        # and reverse it; protected vertices cannot donate capacity
        prev: Dict[int, tuple[int, int]] = {}
        seen = {start}
        stack = [start]
        target = None
        while stack and target is None:
            x = stack.pop()
            for eid in arcs[x]:
                y = direction[eid][1]
                if y in seen:
                    continue
                seen.add(y)
                prev[y] = (x, eid)
                if outdeg[y] < k and y not in protected:
                    target = y
                    break
                stack.append(y)
        if target is None:
            return False
        y = target
        while y != start:
            x, eid = prev[y]
            arcs[x].remove(eid)
            arcs[y].append(eid)
            direction[eid] = (y, x)
            y = x
        outdeg[target] += 1
        outdeg[start] -= 1
        return True

    for eid in ids:
        e = graph.edges[eid]
        u, v = e.tail, e.head
        ensure(u)
        ensure(v)
        while outdeg[u] >= k and outdeg[v] >= k:
            if not (reroute(u, {u, v}) or reroute(v, {u, v})):
                # every vertex reachable from u or v is saturated; their arcs
                # stay inside the reachable set and witness the violation
                reach = set()
                stack = [u, v]
                while stack:
                    x = stack.pop()
                    if x in reach:
                        continue
                    reach.add(x)
                    for aid in arcs[x]:
                        stack.append(direction[aid][1])
                witness = {aid for x in reach for aid in arcs[x]}
                witness.add(eid)
                return frozenset(witness)
        start = u if outdeg[u] < k else v
        outdeg[start] += 1
        arcs[start].append(eid)
        direction[eid] = (start, v if start == u else u)
    return None


def _plain_circuit_masks(k: int, ell: int, tables: SubsetTables) -> List[int]:
    """Circuits of the plain (k, ell)-count matroid on the universe, as masks."""
    size = 1 << tables.m
    dep = bytearray(size)
    for s in range(1, size):
        if s.bit_count() > k * tables.vcount[s] - ell:
            dep[s] = 1
            continue
        rest = s
        while rest:
            lb = rest & -rest
            rest ^= lb
            if dep[s ^ lb]:
                dep[s] = 1
                break
    out = []
    for s in range(1, size):
        if not dep[s]:
            continue
        rest = s
        minimal = True
        while rest:
            lb = rest & -rest
            rest ^= lb
            if dep[s ^ lb]:
                minimal = False
                break
        if minimal:
            out.append(s)
    out.sort(key=lambda s: (s.bit_count(), tables.sort_key(s)))
    return out


def enumerate_circuits(k: int, ell: int, graph: GainGraph,
                       eset: Optional[Iterable[int]] = None,
                       bound: int = NAIVE_BOUND) -> List[frozenset[int]]:
    """All circuits of the plain (k, ell)-count matroid restricted to the set.

    Labels are ignored.  Each circuit is connected; the list is sorted by
    size then ids.
    """
    if k < 1 or not (0 <= ell <= 2 * k - 1):
        raise ValueError("need k >= 1 and 0 <= l <= 2k-1")
    tables = SubsetTables(graph, eset, bound=bound)
    masks = _plain_circuit_masks(k, ell, tables)
    out = [tables.set_of(s) for s in masks]
    for c in out:
        if not graph.is_connected(c):
            raise InternalInvariantError("count-matroid circuit is disconnected")
    return out


def check_sparse(params, graph: GainGraph,
                 eset: Optional[Iterable[int]] = None,
                 bound: int = NAIVE_BOUND) -> CountVerdict:
    """Sparsity via (k,0)-orientation plus count checks on plain circuits."""
    rule = _as_rule(params)
    ids = sorted(graph.all_edges() if eset is None else graph.check_edge_set(eset))
    k0 = _k0_orientation_violation(rule.k, graph, ids)
    if k0 is not None:
        return CountVerdict(False, k0)
    if not ids:
        return CountVerdict(True, None)
    tables = SubsetTables(graph, ids, bound=bound)
    rt = RuleTables(rule, graph, tables=tables)
    for ell_prime in range(1, rule.ell + 1):
        for cmask in _plain_circuit_masks(rule.k, ell_prime, tables):
            if cmask.bit_count() > rt.f_value(cmask):
                return CountVerdict(False, tables.set_of(cmask))
    return CountVerdict(True, None)


def independent(params, graph: GainGraph, eset: Iterable[int]) -> bool:
    """Independence in the lifted count matroid (the subgraph passes the
    sparsity pipeline)."""
    return check_sparse(params, graph, eset).sparse


# ---------------------------------------------------------------------------
# Plain count matroid rank (pebble game)


def count_matroid_rank(k: int, ell: int, graph: GainGraph,
                       eset: Optional[Iterable[int]] = None) -> int:
    """Rank of an edge set in the plain (k, l)-count matroid, labels ignored.

    Standard pebble game: every vertex starts with k pebbles, an edge is
    accepted once l+1 pebbles sit on its endpoints (on its single endpoint
    for a loop) and then consumes one.
    """
    if k < 1 or not (0 <= ell <= 2 * k - 1):
        raise ValueError("pebble game needs k >= 1 and 0 <= l <= 2k-1")
    ids = sorted(graph.all_edges() if eset is None else graph.check_edge_set(eset))
    pebbles: Dict[int, int] = {}
    arcs: Dict[int, List[int]] = {}

    def ensure(v: int):
        if v not in pebbles:
            pebbles[v] = k
            arcs[v] = []

    def pull_pebble(root: int, protected: set[int]) -> bool:
        prev: Dict[int, int] = {}
        seen = {root} | protected
        stack = [root]
        target = None
        while stack and target is None:
            x = stack.pop()
            for y in arcs[x]:
                if y in seen:
                    continue
                seen.add(y)
                prev[y] = x
                if pebbles[y] > 0:
                    target = y
                    break
                stack.append(y)
        if target is None:
            return False
        y = target
        while y != root:
            x = prev[y]
            arcs[x].remove(y)
            arcs[y].append(x)
            y = x
        pebbles[target] -= 1
        pebbles[root] += 1
        return True

    rank = 0
    for eid in ids:
        e = graph.edges[eid]
        u, v = e.tail, e.head
        ensure(u)
        ensure(v)
        if e.is_loop:
            while pebbles[u] < ell + 1 and pull_pebble(u, {u}):
                pass
            if pebbles[u] >= ell + 1:
                pebbles[u] -= 1
                arcs[u].append(u)
                rank += 1
        else:
            while pebbles[u] + pebbles[v] < ell + 1 and \
                    (pull_pebble(u, {u, v}) or pull_pebble(v, {u, v})):
                pass
            if pebbles[u] + pebbles[v] >= ell + 1:
                if pebbles[u] > 0:
                    pebbles[u] -= 1
                    arcs[u].append(v)
                else:
                    pebbles[v] -= 1
                    arcs[v].append(u)
                rank += 1
    return rank


# ---------------------------------------------------------------------------
# Rank, certificates, tight sets, fullness


def matroid_rank(params, graph: GainGraph,
                 eset: Optional[Iterable[int]] = None,
                 bound: int = NAIVE_BOUND) -> int:
    """Greedy rank in ascending edge-id order over the subset oracle."""
    rule = _as_rule(params)
    rt = RuleTables(rule, graph, eset, bound=bound)
    viol = rt.violators()
    cur = 0
    size = 0
    for t in range(rt.t.m):
        cand = cur | (1 << t)
        if not any(v & cand == v for v in viol):
            cur = cand
            size += 1
    return size


def rank_certificate(params, graph: GainGraph,
                     bound: int = CERTIFICATE_BOUND) -> PartitionCertificate:
    """Minimize |E0| + sum f(E_i) over partitions with connected parts.

    Exhaustive subset dynamic program; the minimum equals the matroid rank.
    """
    rule = _as_rule(params)
    rt = RuleTables(rule, graph, bound=bound)
    t = rt.t
    size = 1 << t.m
    fval: Dict[int, int] = {}
    for s in range(1, size):
        if t.conn[s]:
            fval[s] = rt.f_value(s)
    best = [0] * size
    choice: List[Optional[int]] = [None] * size  # part mask, or None for E0 edge
    for s in range(1, size):
        low = s & -s
        b = best[s ^ low] + 1
        ch = None
        sub = s
        while sub:
            if sub & low and sub in fval:
                v = fval[sub] + best[s ^ sub]
                if v < b:
                    b, ch = v, sub
            sub = (sub - 1) & s
        best[s] = b
        choice[s] = ch
    parts = []
    e0 = 0
    s = size - 1
    while s:
        ch = choice[s]
        if ch is None:
            e0 |= s & -s
            s ^= s & -s
        else:
            parts.append(ch)
            s ^= ch
    parts.sort(key=t.sort_key)
    return PartitionCertificate(
        e0=t.set_of(e0),
        parts=tuple(t.set_of(p) for p in parts),
        value=best[size - 1],
    )


def tight_sets(params, graph: GainGraph, bound: int = NAIVE_BOUND) -> List[frozenset[int]]:
    """Maximal connected sets with |S| = f(S) in a sparse graph.

    Raises if the graph is not sparse.  Maximal tight sets of a sparse graph
    are pairwise disjoint; that is asserted, not assumed.
    """
    rule = _as_rule(params)
    rt = RuleTables(rule, graph, bound=bound)
    if rt.violators():
        raise GraphError("tight sets are only defined for sparse graphs")
    tight = [s for s in range(1, 1 << rt.t.m)
             if rt.t.conn[s] and s.bit_count() == rt.f_value(s)]
    maximal = [s for s in tight
               if not any(s != o and s | o == o for o in tight)]
    for i, a in enumerate(maximal):
        for b in maximal[i + 1:]:
            if a & b:
                raise InternalInvariantError("maximal tight sets intersect")
    return sorted((rt.t.set_of(s) for s in maximal), key=sorted)


def is_full(params, graph: GainGraph, eset: Iterable[int],
            bound: int = NAIVE_BOUND) -> bool:
    """Does the set contain a spanning connected sparse subgraph that is
    dense enough and has the same beta?

    Brute force over subsets, per the definition: |E'| >= k|V| - l +
    min(beta(E'), 2k - l + 1) with beta(E') = beta(E) and V(E') = V(E).
    """
    rule = _as_rule(params)
    eset = graph.check_edge_set(eset)
    if not eset or not graph.is_connected(eset):
        raise GraphError("fullness needs a nonempty connected edge set")
    rt = RuleTables(rule, graph, eset, bound=bound)
    t = rt.t
    full_mask = (1 << t.m) - 1
    target_vmask = t.vmask[full_mask]
    beta_full = rt.beta(full_mask)
    dep = rt.dep_table()
    need = min(beta_full, 2 * rule.k - rule.ell + 1)
    for s in range(1, full_mask + 1):
        if t.vmask[s] != target_vmask or not t.conn[s] or dep[s]:
            continue
        if s.bit_count() < rule.k * t.vcount[s] - rule.ell + need:
            continue
        if rt.beta(s) == beta_full:
            return True
    return False
