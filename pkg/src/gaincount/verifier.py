"""Exhaustive verification: matroid axioms, counterexample search, lemma suites.

This module deliberately trusts as little of the library as possible.
Independence is recomputed from the subset-scan tables, cross-wired against
the circuit pipeline, and the structural lemmas are run as filtered property
suites over exhaustively enumerated small instances.

Instance enumeration is deterministic and performs no isomorphism reduction;
scan drivers may still cache verdicts by a canonical form (vertex
relabeling plus edge reorientation), which is sound because every quantity
checked here is invariant under both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .alpha import AlphaFunction, builtin_alpha
from .gaingraph import GainGraph, GraphError, balanced_in_split
from .groups import GroupTable
from .matroid import (
    CountRule,
    InternalInvariantError,
    RuleTables,
    SparsityParams,
    SubsetTables,
    check_sparse,
    check_sparse_naive,
    _plain_circuit_masks,
)

COUNT_RULE_NAMES = ("example3_naive", "example3_nearbal_only", "theorem_full")

SUITE_NAMES = (
    "lem4",
    "tight1",
    "near1",
    "tight2",
    "alpha1",
    "main1",
    "main2",
    "beta_monotone",
    "prop0_equiv",
)

VERIFY_EDGE_BOUND = 12
CROSS_CHECK_BOUND = 8


@dataclass(frozen=True)
class SearchSpec:
    """Bounds and count rule for enumeration-driven verification.

    ``labels`` restricts the edge label alphabet; None means the identity
    plus the first non-identity element.
    """

    group: GroupTable
    max_vertices: int = 4
    max_edges: int = 8
    count_rule: str = "theorem_full"
    k: int = 2
    ell: int = 3
    labels: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class I3Witness:
    restriction: frozenset[int]
    smaller: frozenset[int]
    larger: frozenset[int]


@dataclass(frozen=True)
class AxiomVerdict:
    """Outcome of the (I1)-(I3) check for one labeled graph."""

    i1: bool
    i2: Optional[Tuple[frozenset[int], frozenset[int]]]
    i3: Optional[I3Witness]

    @property
    def passed(self) -> bool:
        return self.i1 and self.i2 is None and self.i3 is None


@dataclass
class ScanReport:
    tested: int = 0
    distinct: int = 0
    failure_count: int = 0
    first_failure: Optional[Tuple[GainGraph, AxiomVerdict]] = None

    @property
    def passed(self) -> bool:
        return self.failure_count == 0


@dataclass
class CounterexampleReport:
    graph: GainGraph
    verdict: AxiomVerdict
    tested: int


@dataclass
class SuiteReport:
    name: str
    tested: int
    filtered: int
    failures: int
    hits: int
    details: List[str] = field(default_factory=list)

    def format_line(self) -> str:
        return (f"SUITE {self.name} tested={self.tested} "
                f"filtered={self.filtered} failures={self.failures}")


def alpha_for_count_rule(name: str, group: GroupTable) -> AlphaFunction:
    if name in ("example3_naive", "example3_nearbal_only"):
        return builtin_alpha("example3_naive", group)
    if name == "theorem_full":
        return builtin_alpha("example3_lifted", group)
    raise ValueError(f"unknown count rule {name!r}")


def rule_for_spec(spec: SearchSpec) -> CountRule:
    alpha = alpha_for_count_rule(spec.count_rule, spec.group)
    near_cap = spec.count_rule != "example3_naive"
    return CountRule(spec.k, spec.ell, alpha, near_cap=near_cap)


# ---------------------------------------------------------------------------
# Instance enumeration


def default_labels(group: GroupTable) -> Tuple[int, ...]:
    others = [g for g in group.elements() if g != group.identity]
    return (group.identity,) if not others else (group.identity, min(others))


def enumerate_instances(spec: SearchSpec) -> Iterator[GainGraph]:
    """Deterministic stream of labeled multigraphs within the bounds.

    Ordered by edge count, then vertex count, then the sorted edge-type
    multiset.  Edge slots are vertex pairs (u <= v, loops included) labeled
    from the alphabet; graphs with an isolated vertex are skipped for
    n >= 2 since an untouched vertex changes no derived quantity and the
    same edge multiset already appears at the smaller vertex count.
    """
    labels = spec.labels if spec.labels is not None else default_labels(spec.group)
    for m in range(spec.max_edges + 1):
        for n in range(1, spec.max_vertices + 1):
            if m == 0:
                if n == 1:
                    yield GainGraph(spec.group, 1, [])
                continue
            types = [(u, v, lab)
                     for u in range(n) for v in range(u, n)
                     for lab in labels]
            full = (1 << n) - 1
            for combo in combinations_with_replacement(types, m):
                if n >= 2:
                    cover = 0
                    for u, v, _ in combo:
                        cover |= (1 << u) | (1 << v)
                    if cover != full:
                        continue
                yield GainGraph(spec.group, n, list(combo))


def canonical_key(graph: GainGraph) -> tuple:
    """Iso-invariant cache key: min over vertex relabelings of the sorted
    edge list, with orientations normalized and loop labels replaced by the
    smaller of label and inverse."""
    inv = graph.group.inv
    base = [(e.tail, e.head, e.label) for e in graph.edges]
    n = graph.vertex_count
    best = None
    for perm in permutations(range(n)):
        rows = []
        for t, h, lab in base:
            a, b = perm[t], perm[h]
            if a == b:
                rows.append((a, a, min(lab, inv(lab))))
            elif a < b:
                rows.append((a, b, lab))
            else:
                rows.append((b, a, inv(lab)))
        rows.sort()
        if best is None or rows < best:
            best = rows
    return (n, tuple(best))


# ---------------------------------------------------------------------------
# Matroid axiom checking


def verify_matroid(params, graph: GainGraph, cross_check: bool = True,
                   bound: int = VERIFY_EDGE_BOUND,
                   _rt: Optional[RuleTables] = None) -> AxiomVerdict:
    """Check (I1), (I2) over all pairs and (I3) over all restrictions.

    Independence comes from the subset-scan tables.  With ``cross_check``
    (and at most 8 edges) the verdicts are additionally recomputed through
    the circuit pipeline and any disagreement raises
    :class:`InternalInvariantError`.
    """
    from .matroid import _as_rule

    rule = _as_rule(params)
    m = graph.edge_count
    if m > bound:
        raise GraphError(f"axiom verification bounded at {bound} edges, got {m}")
    rt = _rt if _rt is not None else RuleTables(rule, graph, bound=bound)
    dep = rt.dep_table()
    size = 1 << m

    i1 = not dep[0]

    i2_witness = None
    for y in range(size):
        if dep[y]:
            continue
        x = (y - 1) & y
        while True:
            if dep[x]:
                i2_witness = (rt.t.set_of(x), rt.t.set_of(y))
                break
            if x == 0:
                break
            x = (x - 1) & y
        if i2_witness:
            break

    i3_witness = None
    for ep in range(size):
        if not dep[ep]:
            continue  # every maximal independent subset is ep's own basis: skip
        base_size = None
        first = None
        x = ep
        while True:
            if not dep[x]:
                rest = ep & ~x
                maximal = True
                while rest:
                    lb = rest & -rest
                    rest ^= lb
                    if not dep[x | lb]:
                        maximal = False
                        break
                if maximal:
                    c = x.bit_count()
                    if base_size is None:
                        base_size, first = c, x
                    elif c != base_size:
                        lo, hi = (x, first) if c < base_size else (first, x)
                        i3_witness = I3Witness(
                            restriction=rt.t.set_of(ep),
                            smaller=rt.t.set_of(lo),
                            larger=rt.t.set_of(hi))
                        break
            if x == 0:
                break
            x = (x - 1) & ep
        if i3_witness:
            break

    if cross_check and m <= CROSS_CHECK_BOUND:
        _cross_check_pipeline(rule, graph, rt, dep)

    return AxiomVerdict(i1=i1, i2=i2_witness, i3=i3_witness)


def _cross_check_pipeline(rule: CountRule, graph: GainGraph,
                          rt: RuleTables, dep: bytearray) -> None:
    """Recompute every subset verdict through the circuit pipeline route."""
    size = 1 << rt.t.m
    real = check_sparse(rule, graph)
    if real.sparse != (not dep[size - 1]):
        raise InternalInvariantError(
            "pipeline and subset-scan verdicts disagree on the full edge set")
    bad = set()
    for s in range(1, size):
        if rt.t.conn[s] and s.bit_count() > rule.k * rt.t.vcount[s]:
            bad.add(s)
    for ell_prime in range(1, rule.ell + 1):
        for c in _plain_circuit_masks(rule.k, ell_prime, rt.t):
            if c.bit_count() > rt.f_value(c):
                bad.add(c)
    pipe = bytearray(size)
    for s in bad:
        pipe[s] = 1
    for s in range(1, size):
        if pipe[s]:
            continue
        rest = s
        while rest:
            lb = rest & -rest
            rest ^= lb
            if pipe[s ^ lb]:
                pipe[s] = 1
                break
    if pipe != dep:
        s = next(i for i in range(size) if pipe[i] != dep[i])
        raise InternalInvariantError(
            f"pipeline disagrees with subset scan on {sorted(rt.t.set_of(s))}")


def validate_i3_witness(params, graph: GainGraph, witness: I3Witness) -> bool:
    """Re-validate an (I3) failure with the naive oracle only.

    Both sets must pass the count condition, be maximal inside the
    restriction, and differ in cardinality.
    """
    from .matroid import _as_rule

    rule = _as_rule(params)
    if len(witness.smaller) == len(witness.larger):
        return False
    for part in (witness.smaller, witness.larger):
        if not part <= witness.restriction:
            return False
        if not check_sparse_naive(rule, graph, part).sparse:
            return False
        for eid in sorted(witness.restriction - part):
            if check_sparse_naive(rule, graph, part | {eid}).sparse:
                return False
    return True


# ---------------------------------------------------------------------------
# Scan drivers


def scan_many(rules: Sequence[CountRule], spec: SearchSpec,
              stop_on_failure: bool = False,
              cross_check: bool = True) -> List[ScanReport]:
    """Run the axiom check for several rules over one instance stream.

    Subset tables, gain structure and near-balance bits are shared per
    graph; verdicts are cached by canonical form per rule.  The first
    failing instance per rule is recorded (and, since all earlier cache
    entries passed, it is genuinely the first in enumeration order).
    """
    reports = [ScanReport() for _ in rules]
    caches: List[Dict[tuple, bool]] = [{} for _ in rules]
    active = set(range(len(rules)))
    for graph in enumerate_instances(spec):
        if not active:
            break
        key = None
        tables = None
        share_gain: Dict[int, tuple] = {}
        share_nb: Dict[int, bool] = {}
        for idx in sorted(active):
            rep = reports[idx]
            rep.tested += 1
            if key is None:
                key = canonical_key(graph)
            passed = caches[idx].get(key)
            if passed is None:
                if tables is None:
                    tables = SubsetTables(graph)
                rt = RuleTables(rules[idx], graph, tables=tables,
                                share_gain=share_gain, share_nb=share_nb)
                verdict = verify_matroid(rules[idx], graph,
                                         cross_check=cross_check, _rt=rt)
                passed = verdict.passed
                caches[idx][key] = passed
                rep.distinct += 1
                if not passed and rep.first_failure is None:
                    # fresh failures are always first in enumeration order:
                    # a failing cache hit would mean an isomorphic twin
                    # already failed earlier
                    rep.first_failure = (graph, verdict)
            if not passed:
                rep.failure_count += 1
                if stop_on_failure:
                    active.discard(idx)
    return reports


def search_counterexample(spec: SearchSpec,
                          cross_check: bool = True) -> Optional[CounterexampleReport]:
    """First graph in enumeration order whose independence family fails an
    axiom under the spec's count rule, or None."""
    rule = rule_for_spec(spec)
    cache: Dict[tuple, bool] = {}
    tested = 0
    for graph in enumerate_instances(spec):
        tested += 1
        key = canonical_key(graph)
        passed = cache.get(key)
        if passed is None:
            verdict = verify_matroid(rule, graph, cross_check=cross_check)
            cache[key] = verdict.passed
            if not verdict.passed:
                return CounterexampleReport(graph=graph, verdict=verdict, tested=tested)
    return None


# ---------------------------------------------------------------------------
# Independent oracles


def near_balanced_bruteforce(graph: GainGraph, eset: Iterable[int]) -> Optional[int]:
    """Least base vertex by trying every split bipartition, or None.

    Loop arc labels are freely invertible, which
    :func:`gaincount.gaingraph.balanced_in_split` already accounts for.
    """
    eset = graph.check_edge_set(eset)
    if not eset or not graph.is_connected(eset):
        raise GraphError("near-balance brute force needs a connected edge set")
    if graph.is_balanced(eset):
        return None
    for v in sorted(graph.vertices_of(eset)):
        if _brute_base(graph, eset, v):
            return v
    return None


def _brute_base(graph: GainGraph, eset: frozenset[int], v: int) -> bool:
    nonloop = sorted(graph.incident(v, eset) - graph.loops_at(v, eset))
    for bits in range(1 << len(nonloop)):
        moved = frozenset(eid for t, eid in enumerate(nonloop) if bits >> t & 1)
        if balanced_in_split(graph, eset, v, moved):
            return True
    return False


def brute_bases(graph: GainGraph, eset: Iterable[int]) -> List[int]:
    eset = graph.check_edge_set(eset)
    if graph.is_balanced(eset):
        return []
    return [v for v in sorted(graph.vertices_of(eset)) if _brute_base(graph, eset, v)]


def frame_independent_by_cycles(graph: GainGraph, eset: Iterable[int]) -> bool:
    """Direct frame-matroid independence: per component, no cycle or exactly
    one cycle whose gain is not the identity.

    Independent of the count machinery: per component it compares edge and
    vertex counts, finds the unique extra edge over a fresh spanning tree and
    multiplies labels along the tree path itself.
    """
    eset = graph.check_edge_set(eset)
    g = graph.group
    for verts, edges in graph.components(eset):
        m, n = len(edges), len(verts)
        if m > n:
            return False
        if m < n:
            continue
        # exactly one independent cycle; locate it via a fresh DFS tree
        pot: Dict[int, int] = {}
        tree: set[int] = set()
        root = min(verts)
        pot[root] = g.identity
        stack = [root]
        adj: Dict[int, List[int]] = {u: [] for u in verts}
        for eid in sorted(edges):
            e = graph.edges[eid]
            if not e.is_loop:
                adj[e.tail].append(eid)
                adj[e.head].append(eid)
        while stack:
            u = stack.pop()
            for eid in adj[u]:
                e = graph.edges[eid]
                other = e.head if e.tail == u else e.tail
                if other in pot:
                    continue
                tree.add(eid)
                lab = e.label if e.tail == u else g.inv(e.label)
                pot[other] = g.mul(pot[u], lab)
                stack.append(other)
        extra = [eid for eid in sorted(edges) if eid not in tree]
        if len(extra) != 1:
            raise InternalInvariantError("component with |E|=|V| must have one extra edge")
        e = graph.edges[extra[0]]
        gain = g.mul(g.mul(pot[e.tail], e.label), g.inv(pot[e.head]))
        if gain == g.identity:
            return False
    return True


# ---------------------------------------------------------------------------
# Property suites for the structural lemmas


class _InstanceContext:
    """Shared per-instance tables for the suite predicates."""

    def __init__(self, rule: CountRule, graph: GainGraph):
        self.rule = rule
        self.graph = graph
        self.rt = RuleTables(rule, graph)
        self.t = self.rt.t
        self.size = 1 << self.t.m
        self.conn_masks = [s for s in range(1, self.size) if self.t.conn[s]]
        self.dep = self.rt.dep_table()
        self._full: Dict[int, bool] = {}
        self._fval: Dict[int, int] = {}

    def f(self, mask: int) -> int:
        v = self._fval.get(mask)
        if v is None:
            v = self.rt.f_value(mask)
            self._fval[mask] = v
        return v

    def beta(self, mask: int) -> int:
        return self.rt.beta(mask)

    def tight(self, mask: int) -> bool:
        return not self.dep[mask] and mask.bit_count() == self.f(mask)

    def full(self, mask: int) -> bool:
        got = self._full.get(mask)
        if got is not None:
            return got
        rule, t = self.rule, self.t
        target = t.vmask[mask]
        bf = self.beta(mask)
        need = min(bf, 2 * rule.k - rule.ell + 1)
        ok = False
        sub = mask
        while sub:
            if (t.vmask[sub] == target and t.conn[sub] and not self.dep[sub]
                    and sub.bit_count() >= rule.k * t.vcount[sub] - rule.ell + need
                    and self.beta(sub) == bf):
                ok = True
                break
            sub = (sub - 1) & mask
        self._full[mask] = ok
        return ok

    def alpha_critical(self, mask: int) -> bool:
        if self.rt.balanced(mask):
            return False
        return (self.rt.alpha_tilde(mask) > self.rule.k
                and self.rt.near_balanced(mask))

    def describe(self, mask: int) -> str:
        return str(sorted(self.t.set_of(mask)))


def _suite_beta_monotone(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    filtered = hits = 0
    fails: List[str] = []
    for big in ctx.conn_masks:
        sub = (big - 1) & big
        while sub:
            if ctx.t.conn[sub]:
                filtered += 1
                if ctx.beta(sub) > ctx.beta(big):
                    fails.append(f"beta not monotone: {ctx.describe(sub)} in {ctx.describe(big)}")
            sub = (sub - 1) & big
    return filtered, filtered, fails


def _suite_lem4(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    filtered = 0
    fails: List[str] = []
    rule, t = ctx.rule, ctx.t
    cm = ctx.conn_masks
    for i, x in enumerate(cm):
        bx = None
        for y in cm[i:]:
            meet = x & y
            if not meet or not t.conn[meet] or ctx.dep[meet]:
                continue
            if t.vmask[meet] != (t.vmask[x] & t.vmask[y]):
                continue
            if bx is None:
                bx = ctx.beta(x)
            by = ctx.beta(y)
            bound = rule.k * t.vcount[meet] - 2 * rule.ell + min(2 * rule.k, bx + by)
            if meet.bit_count() <= bound:
                continue
            if not (ctx.full(x) and ctx.full(y)):
                continue
            filtered += 1
            join = x | y
            if bx + by < ctx.beta(meet) + ctx.beta(join):
                fails.append(
                    f"beta submodularity fails for X={ctx.describe(x)} Y={ctx.describe(y)}")
    return filtered, filtered, fails


def _tight1_hypotheses(ctx: _InstanceContext) -> bool:
    full_mask = ctx.size - 1
    if not ctx.t.conn[full_mask]:
        return False
    if ctx.rt.balanced(full_mask) or not ctx.rt.near_balanced(full_mask):
        return False
    if ctx.beta(full_mask) < 2 * ctx.rule.k - ctx.rule.ell + 1:
        return False
    return ctx.full(full_mask)


def _suite_tight1(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    if not _tight1_hypotheses(ctx):
        return 0, 0, []
    bases = ctx.graph.near_balance_bases(ctx.graph.all_edges())
    if len(bases) != 1:
        return 1, 1, [f"expected a unique base, found {bases}"]
    return 1, 1, []


def _suite_near1(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    if not _tight1_hypotheses(ctx):
        return 0, 0, []
    graph = ctx.graph
    eset = graph.all_edges()
    fails: List[str] = []
    cert = graph.near_balanced(eset)
    v = cert.base
    for frac in graph.fractions(v, eset):
        if graph.near_balanced(frac) is None:
            fails.append(f"fraction {sorted(frac)} of base {v} is not near-balanced")
    everything = graph.vertices_of(eset)
    for extra in graph.extra_edge_sets(eset, v):
        rest = eset - extra
        if not rest or not graph.is_connected(rest) or graph.vertices_of(rest) != everything:
            fails.append(f"removing extra set {sorted(extra)} disconnects the graph")
    return 1, 1, fails


def _suite_tight2(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    full_mask = ctx.size - 1
    if not ctx.t.conn[full_mask] or not ctx.alpha_critical(full_mask):
        return 0, 0, []
    if not ctx.full(full_mask):
        return 0, 0, []
    graph = ctx.graph
    eset = graph.all_edges()
    cert = graph.near_balanced(eset)
    v = cert.base
    loops = graph.loops_at(v, eset)
    nonloop_v = graph.incident(v, eset) - loops
    extras = graph.extra_edge_sets(eset, v)
    fails: List[str] = []
    for i, k1 in enumerate(extras):
        for k2 in extras[i + 1:]:
            a, b = k1 - loops, k2 - loops
            if a & b or (a | b) != nonloop_v:
                fails.append(
                    f"extra sets {sorted(k1)} and {sorted(k2)} do not complement at base {v}")
    return 1, 1, fails


def _suite_alpha1(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    full_mask = ctx.size - 1
    if not ctx.t.conn[full_mask] or not ctx.alpha_critical(full_mask):
        return 0, 0, []
    fails: List[str] = []
    for s in ctx.conn_masks:
        if ctx.rt.balanced(s) or ctx.alpha_critical(s):
            continue
        fails.append(f"connected subgraph {ctx.describe(s)} neither critical nor balanced")
    return 1, 1, fails


def _suite_main1(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    if ctx.rt.violators():
        return 0, 0, []
    tights = [s for s in ctx.conn_masks if ctx.tight(s)]
    filtered = 0
    fails: List[str] = []
    for i, x in enumerate(tights):
        for y in tights[i + 1:]:
            if not x & y:
                continue
            filtered += 1
            join = x | y
            if join.bit_count() != ctx.f(join):
                fails.append(f"union of tight {ctx.describe(x)} and {ctx.describe(y)} not tight")
    return filtered, filtered, fails


def _suite_main2(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    t = ctx.t
    filtered = 0
    fails: List[str] = []
    tights = [s for s in ctx.conn_masks if ctx.tight(s)]
    fulls = [s for s in ctx.conn_masks if ctx.full(s)]
    for x in tights:
        fx = ctx.f(x)
        for y in fulls:
            if x & y != x:
                continue
            outside = (ctx.size - 1) & ~y
            rest = outside
            while rest:
                lb = rest & -rest
                rest ^= lb
                xe = x | lb
                if not t.conn[xe] or ctx.f(xe) != fx:
                    continue
                filtered += 1
                ye = y | lb
                if ctx.f(ye) != ctx.f(y) or not ctx.full(ye):
                    fails.append(
                        f"extension fails: X={ctx.describe(x)} Y={ctx.describe(y)} e={ctx.describe(lb)}")
    return filtered, filtered, fails


def _suite_prop0(ctx: _InstanceContext) -> tuple[int, int, List[str]]:
    graph = ctx.graph
    eset = graph.all_edges()
    full_mask = ctx.size - 1
    if not eset or not ctx.t.conn[full_mask]:
        return 0, 0, []
    if graph.is_balanced(eset):
        return 0, 0, []
    fails: List[str] = []
    algo = graph.near_balance_bases(eset)
    brute = brute_bases(graph, eset)
    if algo != brute:
        fails.append(f"base sets disagree: algorithmic {algo} vs brute {brute}")
    cert = graph.near_balanced(eset)
    hits = 0
    if cert is not None:
        hits = 1
        moved = cert.extra_edges - graph.loops_at(cert.base, eset)
        if not balanced_in_split(graph, eset, cert.base, moved):
            fails.append(f"certificate split at {cert.base} is not balanced")
    return 1, hits, fails


_SUITE_FUNCS: Dict[str, Callable[[_InstanceContext], tuple[int, int, List[str]]]] = {
    "lem4": _suite_lem4,
    "tight1": _suite_tight1,
    "near1": _suite_near1,
    "tight2": _suite_tight2,
    "alpha1": _suite_alpha1,
    "main1": _suite_main1,
    "main2": _suite_main2,
    "beta_monotone": _suite_beta_monotone,
    "prop0_equiv": _suite_prop0,
}

SUITE_DEFAULT_MAX_EDGES = {name: 5 for name in SUITE_NAMES}
SUITE_DEFAULT_MAX_EDGES["prop0_equiv"] = 6


def run_property_suite(name: str, spec: SearchSpec) -> SuiteReport:
    """Filter enumerated instances by a lemma's hypotheses and assert its
    conclusion; zero failures expected, vacuous runs are reported via the
    filtered count."""
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    params = SparsityParams(spec.k, spec.ell, alpha_for_count_rule(spec.count_rule, spec.group))
    rule = params.rule()
    fn = _SUITE_FUNCS[name]
    cache: Dict[tuple, tuple[int, int, List[str]]] = {}
    tested = filtered = failures = hits = 0
    details: List[str] = []
    for graph in enumerate_instances(spec):
        tested += 1
        key = canonical_key(graph)
        got = cache.get(key)
        if got is None:
            got = fn(_InstanceContext(rule, graph))
            cache[key] = got
        f_delta, h_delta, fails = got
        filtered += f_delta
        hits += h_delta
        failures += len(fails)
        for msg in fails:
            if len(details) < 5:
                details.append(msg)
    return SuiteReport(name=name, tested=tested, filtered=filtered,
                       failures=failures, hits=hits, details=details)
