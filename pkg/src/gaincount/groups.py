"""Finite groups as dense multiplication tables, plus subgroup machinery.

Elements are indices 0..order-1.  Every group carries a display name per
element and a spec string (``trivial``, ``cyclic N``, ``dihedral N``,
``product a ; b``, ``table N ...``) that round-trips through the text file
format.  All subgroup computations are exhaustive closure loops; the groups
in scope are tiny, so clarity wins over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product
from typing import Iterable, Optional, Sequence

DEFAULT_ORDER_BOUND = 64


class GroupError(ValueError):
    """Raised for invalid group constructions or malformed group specs."""


@dataclass(frozen=True)
class GroupTable:
    """A finite group given by its Cayley table.

    Immutable after construction; safe to share across threads.
    """

    order: int
    mul_table: tuple[tuple[int, ...], ...]
    inv_table: tuple[int, ...]
    identity: int
    names: tuple[str, ...]
    spec: str

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def name(self, a: int) -> str:
        return self.names[a]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupError(f"unknown element name {name!r} in group {self.spec!r}") from None

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        t, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            t += 1
        return t

    def is_abelian(self) -> bool:
        return all(
            self.mul(a, b) == self.mul(b, a)
            for a in range(self.order)
            for b in range(a + 1, self.order)
        )

    def __repr__(self) -> str:  # pragma: no cover
        return f"GroupTable({self.spec!r}, order={self.order})"


def _validate_table(mul: Sequence[Sequence[int]], max_order: int) -> tuple[int, tuple[int, ...]]:
    """Check associativity, identity and inverses; return (identity, inv table)."""
    n = len(mul)
    if n == 0:
        raise GroupError("empty multiplication table")
    if n > max_order:
        raise GroupError(f"group order {n} exceeds bound {max_order}")
    for row in mul:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise GroupError("multiplication table is not a square over 0..order-1")
    identity = None
    for e in range(n):
        if all(mul[e][x] == x == mul[x][e] for x in range(n)):
            identity = e
            break
    if identity is None:
        raise GroupError("no two-sided identity element")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                    raise GroupError(f"multiplication not associative at ({a},{b},{c})")
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if mul[a][b] == identity and mul[b][a] == identity:
                inv[a] = b
                break
        if inv[a] is None:
            raise GroupError(f"element {a} has no inverse")
    return identity, tuple(inv)


def _build(mul: Sequence[Sequence[int]], names: Sequence[str], spec: str,
           max_order: int = DEFAULT_ORDER_BOUND) -> GroupTable:
    identity, inv = _validate_table(mul, max_order)
    names = tuple(names)
    if len(set(names)) != len(names):
        raise GroupError("element names are not unique")
    return GroupTable(
        order=len(mul),
        mul_table=tuple(tuple(row) for row in mul),
        inv_table=inv,
        identity=identity,
        names=names,
        spec=spec,
    )


def trivial_group() -> GroupTable:
    return _build([[0]], ["0"], "trivial")


def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    mul = [[(a + b) % n for b in range(n)] for a in range(n)]
    return _build(mul, [str(a) for a in range(n)], f"cyclic {n}")


def dihedral_group(n: int) -> GroupTable:
    """Dihedral group of order 2n: rotations r0..r(n-1), reflections s0..s(n-1).

    Convention: s_i = s * r_i, so r_a*r_b = r_(a+b), r_a*s_b = s_(b-a),
    s_a*r_b = s_(a+b), s_a*s_b = r_(b-a), all indices mod n.
    """
    if n < 1:
        raise GroupError("dihedral group needs n >= 1")

    def idx(kind: int, j: int) -> int:
        return kind * n + (j % n)

    mul = [[0] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            mul[idx(0, a)][idx(0, b)] = idx(0, a + b)
            mul[idx(0, a)][idx(1, b)] = idx(1, b - a)
            mul[idx(1, a)][idx(0, b)] = idx(1, a + b)
            mul[idx(1, a)][idx(1, b)] = idx(0, b - a)
    names = [f"r{j}" for j in range(n)] + [f"s{j}" for j in range(n)]
    return _build(mul, names, f"dihedral {n}")


def product_group(factors: Sequence[GroupTable], max_order: int = DEFAULT_ORDER_BOUND) -> GroupTable:
    if len(factors) < 2:
        raise GroupError("product needs at least 2 factors")
    orders = [g.order for g in factors]
    total = 1
    for o in orders:
        total *= o
    if total > max_order:
        raise GroupError(f"product order {total} exceeds bound {max_order}")
    tuples = list(iter_product(*[range(o) for o in orders]))
    pos = {t: i for i, t in enumerate(tuples)}
    mul = [
        [pos[tuple(g.mul(a, b) for g, a, b in zip(factors, ta, tb))] for tb in tuples]
        for ta in tuples
    ]
    names = ["(" + ",".join(g.name(x) for g, x in zip(factors, t)) + ")" for t in tuples]
    spec = "product " + " ; ".join(g.spec for g in factors)
    return _build(mul, names, spec, max_order)


def group_from_table(rows: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None,
                     max_order: int = DEFAULT_ORDER_BOUND) -> GroupTable:
    n = len(rows)
    if names is None:
        names = [str(i) for i in range(n)]
    spec = f"table {n} " + " ".join(str(x) for row in rows for x in row)
    return _build(rows, names, spec, max_order)


def make_group(spec: str, max_order: int = DEFAULT_ORDER_BOUND) -> GroupTable:
    """Build a group from a spec string.

    Accepted forms: ``trivial``, ``cyclic N``, ``dihedral N``,
    ``product <spec> ; <spec> ; ...`` (factors must not themselves be
    products or raw tables), and ``table N`` followed by N*N indices.
    """
    tokens = spec.split()
    if not tokens:
        raise GroupError("empty group spec")
    head = tokens[0]
    if head == "trivial":
        if len(tokens) != 1:
            raise GroupError("trivial takes no arguments")
        return trivial_group()
    if head in ("cyclic", "dihedral"):
        if len(tokens) != 2:
            raise GroupError(f"{head} takes exactly one integer argument")
        try:
            n = int(tokens[1])
        except ValueError:
            raise GroupError(f"bad {head} order {tokens[1]!r}") from None
        g = cyclic_group(n) if head == "cyclic" else dihedral_group(n)
        if g.order > max_order:
            raise GroupError(f"group order {g.order} exceeds bound {max_order}")
        return g
    if head == "product":
        parts = [p.strip() for p in spec[len("product"):].split(";")]
        if any(not p for p in parts):
            raise GroupError("empty factor in product spec")
        for p in parts:
            if p.split()[0] in ("product", "table"):
                raise GroupError("product factors must be trivial/cyclic/dihedral specs")
        return product_group([make_group(p, max_order) for p in parts], max_order)
    if head == "table":
        if len(tokens) < 2:
            raise GroupError("table spec needs an order")
        try:
            n = int(tokens[1])
        except ValueError:
            raise GroupError(f"bad table order {tokens[1]!r}") from None
        entries = tokens[2:]
        if len(entries) != n * n:
            raise GroupError(f"table {n} expects {n * n} entries, got {len(entries)}")
        try:
            flat = [int(x) for x in entries]
        except ValueError:
            raise GroupError("table entries must be integers") from None
        rows = [flat[i * n:(i + 1) * n] for i in range(n)]
        return group_from_table(rows, max_order=max_order)
    raise GroupError(f"unknown group spec {spec!r}")


# ---------------------------------------------------------------------------
# Subgroups


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a sorted member tuple of its parent group."""

    group: GroupTable
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Subgroup({[self.group.name(m) for m in self.members]})"


@dataclass(frozen=True)
class SubgroupConjClass:
    """Conjugacy class of a subgroup, keyed by its canonical representative.

    The canonical representative is the lexicographically least sorted
    member tuple among all conjugates, so the class is usable as a dict key.
    """

    group: GroupTable
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def representative(self) -> Subgroup:
        return Subgroup(self.group, self.members)

    def __repr__(self) -> str:  # pragma: no cover
        return f"SubgroupConjClass({[self.group.name(m) for m in self.members]})"


def generated_subgroup(group: GroupTable, gens: Iterable[int]) -> Subgroup:
    """Least subgroup containing ``gens``; the empty set generates {identity}."""
    for g in gens:
        if not (0 <= g < group.order):
            raise GroupError(f"element index {g} out of range")
    members = {group.identity}
    members.update(gens)
    changed = True
    while changed:
        changed = False
        snapshot = list(members)
        for a in snapshot:
            inv_a = group.inv(a)
            if inv_a not in members:
                members.add(inv_a)
                changed = True
            for b in snapshot:
                c = group.mul(a, b)
                if c not in members:
                    members.add(c)
                    changed = True
    return Subgroup(group, tuple(sorted(members)))


def conjugate_subgroup(group: GroupTable, sub: Subgroup, gamma: int) -> Subgroup:
    gi = group.inv(gamma)
    return Subgroup(group, tuple(sorted(group.mul(group.mul(gamma, m), gi) for m in sub.members)))


def conj_class(group: GroupTable, sub: Subgroup) -> SubgroupConjClass:
    best = None
    for gamma in group.elements():
        cand = conjugate_subgroup(group, sub, gamma).members
        if best is None or cand < best:
            best = cand
    return SubgroupConjClass(group, best)


@lru_cache(maxsize=None)
def all_subgroups(group: GroupTable) -> tuple[Subgroup, ...]:
    """Every subgroup, found by closing each known subgroup with one new element."""
    triv = generated_subgroup(group, ())
    seen = {triv.members: triv}
    frontier = [triv]
    while frontier:
        sub = frontier.pop()
        for g in group.elements():
            if g in sub:
                continue
            bigger = generated_subgroup(group, sub.members + (g,))
            if bigger.members not in seen:
                seen[bigger.members] = bigger
                frontier.append(bigger)
    return tuple(sorted(seen.values(), key=lambda s: (s.order, s.members)))


@lru_cache(maxsize=None)
def subgroup_conj_classes(group: GroupTable) -> tuple[SubgroupConjClass, ...]:
    classes = {}
    for sub in all_subgroups(group):
        cls = conj_class(group, sub)
        classes[cls.members] = cls
    return tuple(sorted(classes.values(), key=lambda c: (c.order, c.members)))


@dataclass(frozen=True)
class SubgroupClassification:
    is_trivial: bool
    is_cyclic: bool
    cyclic_order: Optional[int]
    iso_to_z2: bool


def classify_subgroup(group: GroupTable, sub: Subgroup) -> SubgroupClassification:
    """Cyclic means some single member generates the subgroup (so trivial is cyclic)."""
    n = sub.order
    cyclic = any(group.element_order(m) == n for m in sub.members)
    return SubgroupClassification(
        is_trivial=n == 1,
        is_cyclic=cyclic,
        cyclic_order=n if cyclic else None,
        iso_to_z2=n == 2,
    )


def maximal_cyclic_subgroups_containing(group: GroupTable, g: int) -> list[Subgroup]:
    """All inclusion-maximal cyclic subgroups containing the non-identity element g."""
    if g == group.identity:
        raise GroupError("maximal cyclic subgroups are only sensible for non-identity elements")
    cyclics = {generated_subgroup(group, (x,)).members for x in group.elements()}
    containing = [m for m in cyclics if g in m]
    maximal = [
        m for m in containing
        if not any(m != other and set(m) < set(other) for other in containing)
    ]
    return [Subgroup(group, m) for m in sorted(maximal)]
