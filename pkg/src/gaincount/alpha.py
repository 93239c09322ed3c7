"""Normalized polymatroidal functions on the subsets of a finite group.

An :class:`AlphaFunction` stores one integer per subgroup conjugacy class;
evaluating a subset X takes the class of the subgroup X generates.  That
representation makes closure-invariance and conjugation-invariance true by
construction, so axiom checking only has to test normalization,
submodularity, monotonicity and the jump (smoothness) condition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np

from .groups import (
    GroupError,
    GroupTable,
    Subgroup,
    SubgroupConjClass,
    classify_subgroup,
    conj_class,
    generated_subgroup,
    subgroup_conj_classes,
)

EXHAUSTIVE_LIMIT = 12
ORDER_LIMIT = 24

BUILTIN_ALPHA_NAMES = (
    "frame",
    "example2",
    "example3_naive",
    "example3_lifted",
    "example4",
    "example5",
)


class AlphaFunction:
    """Integer set function on a group, stored on subgroup conjugacy classes.

    Immutable by convention.  ``ell_cap`` is the largest value the function
    may take; every conjugacy class of subgroups must be assigned a value in
    0..ell_cap.
    """

    def __init__(self, group: GroupTable, ell_cap: int,
                 class_values: Dict[SubgroupConjClass, int],
                 name: Optional[str] = None):
        self.group = group
        self.ell_cap = int(ell_cap)
        self.name = name
        if self.ell_cap < 0:
            raise ValueError("ell_cap must be >= 0")
        expected = set(subgroup_conj_classes(group))
        got = set(class_values)
        if got != expected:
            missing = sorted(c.members for c in expected - got)
            extra = sorted(c.members for c in got - expected)
            raise ValueError(f"class values incomplete: missing={missing} extra={extra}")
        for cls, v in class_values.items():
            if not (0 <= int(v) <= self.ell_cap):
                raise ValueError(f"value {v} for class {cls.members} outside 0..{self.ell_cap}")
        self.class_values = {cls: int(v) for cls, v in class_values.items()}
        self._subgroup_value_cache: Dict[tuple, int] = {}
        self._report_cache: Dict[int, "AxiomReport"] = {}

    @property
    def max_value(self) -> int:
        return max(self.class_values.values())

    def value_of_class(self, cls: SubgroupConjClass) -> int:
        return self.class_values[cls]

    def value_of_subgroup(self, sub: Subgroup) -> int:
        v = self._subgroup_value_cache.get(sub.members)
        if v is None:
            v = self.class_values[conj_class(self.group, sub)]
            self._subgroup_value_cache[sub.members] = v
        return v

    def eval(self, xs: Iterable[int]) -> int:
        """Value on an arbitrary subset, via the subgroup it generates."""
        return self.value_of_subgroup(generated_subgroup(self.group, xs))

    def __repr__(self) -> str:  # pragma: no cover
        return f"AlphaFunction({self.name or 'custom'} on {self.group.spec!r})"


def s_set(n: int, i: int) -> frozenset[int]:
    """Orders n' in 2..n dividing n and one of i-1, i, i+1; drop 2 when i is odd.

    Every positive integer divides 0, so i = 1 makes the i-1 clause admit all
    divisors of n.
    """
    if not (0 < i < n):
        raise ValueError("need 0 < i < n")
    divisors = [d for d in range(2, n + 1) if n % d == 0]
    out = {d for d in divisors if any(target % d == 0 for target in (i - 1, i, i + 1))}
    if i % 2 == 1:
        out.discard(2)
    return frozenset(out)


def _is_cyclic_group(group: GroupTable) -> bool:
    return any(group.element_order(g) == group.order for g in group.elements())


def builtin_alpha(name: str, group: GroupTable, i: Optional[int] = None) -> AlphaFunction:
    """One of the built-in value families on the subgroup lattice of ``group``.

    frame:            0 on the trivial class, 1 otherwise (cap 1).
    example2:         0 / 2 (cap 2).
    example3_naive:   0 / 3 (cap 3).
    example3_lifted:  0, 2 on classes of order 2, 3 otherwise (cap 3).
    example4:         0, 2 on nontrivial cyclic classes, 3 otherwise (cap 3).
    example5:         requires a cyclic group of order n and 0 < i < n;
                      0, then 1 on order-2 classes for odd i, 2 on classes of
                      order in S(n, i), 3 otherwise (cap 3).
    """
    classes = subgroup_conj_classes(group)

    def build(cap, rule):
        return AlphaFunction(group, cap, {c: rule(c) for c in classes}, name=name)

    if name == "frame":
        return build(1, lambda c: 0 if c.order == 1 else 1)
    if name == "example2":
        return build(2, lambda c: 0 if c.order == 1 else 2)
    if name == "example3_naive":
        return build(3, lambda c: 0 if c.order == 1 else 3)
    if name == "example3_lifted":
        return build(3, lambda c: 0 if c.order == 1 else (2 if c.order == 2 else 3))
    if name == "example4":
        def ex4(c):
            if c.order == 1:
                return 0
            return 2 if classify_subgroup(group, c.representative()).is_cyclic else 3
        return build(3, ex4)
    if name == "example5":
        if i is None:
            raise ValueError("example5 needs the parameter i")
        n = group.order
        if not _is_cyclic_group(group):
            raise GroupError("example5 is defined over cyclic groups only")
        if not (0 < i < n):
            raise ValueError(f"example5 needs 0 < i < n, got i={i}, n={n}")
        valid = s_set(n, i)

        def ex5(c):
            if c.order == 1:
                return 0
            if i % 2 == 1 and c.order == 2:
                return 1
            if c.order in valid:
                return 2
            return 3
        a = build(3, ex5)
        a.name = f"example5 {n} {i}"
        return a
    raise ValueError(f"unknown builtin alpha {name!r}")


# ---------------------------------------------------------------------------
# Axiom verification


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str  # c1, c2, c3, c6, smoothness
    x: frozenset[int]
    y: Optional[frozenset[int]]
    detail: str


@dataclass
class AxiomReport:
    passed: bool
    violations: List[AxiomViolation]
    mode: str  # exhaustive, lattice, sampled
    structurally_satisfied: tuple = ("c4", "c5")

    def violated_axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}


def _closure_table(alpha: AlphaFunction):
    """Per-bitmask closure subgroup and value, for groups small enough to scan."""
    group = alpha.group
    n = group.order
    id_mask = 1 << group.identity
    join_cache: Dict[tuple[int, int], int] = {}
    sub_value: Dict[int, int] = {}

    def subgroup_mask_value(mask: int) -> int:
        v = sub_value.get(mask)
        if v is None:
            members = tuple(i for i in range(n) if mask >> i & 1)
            v = alpha.value_of_subgroup(Subgroup(group, members))
            sub_value[mask] = v
        return v

    closure = [0] * (1 << n)
    closure[0] = id_mask
    for mask in range(1, 1 << n):
        low = mask & -mask
        g = low.bit_length() - 1
        base = closure[mask ^ low]
        key = (base, g)
        j = join_cache.get(key)
        if j is None:
            if base >> g & 1:
                j = base
            else:
                members = [i for i in range(n) if base >> i & 1] + [g]
                sub = generated_subgroup(group, members)
                j = 0
                for m in sub.members:
                    j |= 1 << m
            join_cache[key] = j
        closure[mask] = j
    values = np.fromiter((subgroup_mask_value(c) for c in closure), dtype=np.int64)
    return closure, values


def _mask_set(mask: int, n: int) -> frozenset[int]:
    return frozenset(i for i in range(n) if mask >> i & 1)


def _verify_exhaustive(alpha: AlphaFunction, k: int) -> List[AxiomViolation]:
    group = alpha.group
    n = group.order
    size = 1 << n
    _, val = _closure_table(alpha)
    violations: List[AxiomViolation] = []

    def record(axiom, xm, ym, detail):
        violations.append(AxiomViolation(axiom, _mask_set(xm, n), _mask_set(ym, n) if ym is not None else None, detail))

    if val[0] != 0:
        record("c1", 0, None, f"alpha(empty) = {val[0]}")
    id_bit = 1 << group.identity
    if val[id_bit] != 0:
        record("c6", id_bit, None, f"alpha({{identity}}) = {val[id_bit]}")
    for g in group.elements():
        if g != group.identity and val[1 << g] == 0:
            record("c6", 1 << g, None, "alpha vanishes on a non-identity singleton")
            break

    # monotonicity via single-element covers (equivalent for violation detection)
    mono_ok = True
    for mask in range(size):
        base = val[mask]
        for g in range(n):
            up = mask | (1 << g)
            if val[up] < base:
                record("c3", mask, up, f"alpha drops {base} -> {val[up]}")
                mono_ok = False
                break
        if not mono_ok:
            break

    # submodularity over all subset pairs
    idx = np.arange(size)
    sub_ok = True
    for x in range(size):
        lhs = val[x] + val
        rhs = val[x | idx] + val[x & idx]
        bad = np.nonzero(lhs < rhs)[0]
        if bad.size:
            y = int(bad[0])
            record("c2", x, y,
                   f"{val[x]}+{val[y]} < {val[x | y]}+{val[x & y]}")
            sub_ok = False
            break

    # jump condition: a gap above k forces S = {identity} and g of order > 2
    for mask in range(1, size):
        for g in range(n):
            up = mask | (1 << g)
            if val[up] - val[mask] > k:
                if mask != id_bit or group.mul(g, g) == group.identity:
                    record("smoothness", mask, 1 << g,
                           f"jump {val[up] - val[mask]} > k={k}")
                    break
        else:
            continue
        break
    return violations


def _verify_lattice(alpha: AlphaFunction, k: int) -> List[AxiomViolation]:
    """Subgroup-pair checks plus singleton probes for groups past the scan limit.

    Exact for c2/c3/smoothness given the class-function representation: both
    sides of each axiom only depend on generated subgroups, and any violation
    on subsets induces one on the corresponding subgroup pair.
    """
    group = alpha.group
    n = group.order
    from .groups import all_subgroups

    subs = all_subgroups(group)
    sub_masks = []
    for s in subs:
        m = 0
        for x in s.members:
            m |= 1 << x
        sub_masks.append(m)
    vals = {m: alpha.value_of_subgroup(s) for m, s in zip(sub_masks, subs)}
    join_cache: Dict[tuple[int, int], int] = {}

    def join(ma: int, mb: int) -> int:
        key = (ma, mb) if ma <= mb else (mb, ma)
        j = join_cache.get(key)
        if j is None:
            if ma | mb in vals:
                j = ma | mb
            else:
                members = [i for i in range(n) if (ma | mb) >> i & 1]
                sub = generated_subgroup(group, members)
                j = 0
                for x in sub.members:
                    j |= 1 << x
            join_cache[key] = j
        return j

    def value_of_mask(mask: int) -> int:
        # mask need not be a subgroup; close it first
        if mask in vals:
            return vals[mask]
        members = [i for i in range(n) if mask >> i & 1]
        return alpha.eval(members)

    violations: List[AxiomViolation] = []

    def record(axiom, xm, ym, detail):
        violations.append(AxiomViolation(axiom, _mask_set(xm, n), _mask_set(ym, n) if ym is not None else None, detail))

    id_bit = 1 << group.identity
    if value_of_mask(0) != 0:
        record("c1", 0, None, "alpha(empty) nonzero")
    if value_of_mask(id_bit) != 0:
        record("c6", id_bit, None, "alpha({identity}) nonzero")
    for g in group.elements():
        if g != group.identity and value_of_mask(1 << g) == 0:
            record("c6", 1 << g, None, "alpha vanishes on a non-identity singleton")
            break

    # monotonicity: H vs <H + g>
    done = False
    for ma in sub_masks:
        va = vals[ma]
        for g in range(n):
            mb = join(ma, _singleton_subgroup_mask(group, g, vals, join_cache))
            if vals.get(mb, value_of_mask(mb)) < va:
                record("c3", ma, mb, "alpha drops along subgroup extension")
                done = True
                break
        if done:
            break

    # submodularity on subgroup pairs
    done = False
    for i, ma in enumerate(sub_masks):
        for mb in sub_masks[i:]:
            lhs = vals[ma] + vals[mb]
            rhs = value_of_mask(ma & mb) + value_of_mask(join(ma, mb))
            if lhs < rhs:
                record("c2", ma, mb, f"{vals[ma]}+{vals[mb]} < {rhs}")
                done = True
                break
        if done:
            break
    # singleton probes: literal pairs (H, {g})
    if not done:
        for ma in sub_masks:
            for g in range(n):
                gb = 1 << g
                lhs = vals[ma] + value_of_mask(gb)
                rhs = value_of_mask(ma & gb) + value_of_mask(ma | gb)
                if lhs < rhs:
                    record("c2", ma, gb, f"{lhs} < {rhs} on singleton probe")
                    done = True
                    break
            if done:
                break

    # jump condition on (subgroup, element) pairs
    done = False
    for ma in sub_masks:
        va = vals[ma]
        for g in range(n):
            up = join(ma, _singleton_subgroup_mask(group, g, vals, join_cache))
            jump = value_of_mask(up) - va
            if jump > k and (ma != id_bit or group.mul(g, g) == group.identity):
                record("smoothness", ma, 1 << g, f"jump {jump} > k={k}")
                done = True
                break
        if done:
            break
    return violations


def _singleton_subgroup_mask(group: GroupTable, g: int, vals, join_cache) -> int:
    sub = generated_subgroup(group, (g,))
    m = 0
    for x in sub.members:
        m |= 1 << x
    return m


def _verify_sampled(alpha: AlphaFunction, k: int, sample: int, seed: int) -> List[AxiomViolation]:
    group = alpha.group
    n = group.order
    rng = random.Random(seed)
    violations: List[AxiomViolation] = []

    def rand_subset() -> frozenset[int]:
        return frozenset(g for g in range(n) if rng.random() < 0.5)

    id_set = frozenset({group.identity})
    if alpha.eval(()) != 0:
        violations.append(AxiomViolation("c1", frozenset(), None, "alpha(empty) nonzero"))
    if alpha.eval(id_set) != 0:
        violations.append(AxiomViolation("c6", id_set, None, "alpha({identity}) nonzero"))
    for g in group.elements():
        if g != group.identity and alpha.eval((g,)) == 0:
            violations.append(AxiomViolation("c6", frozenset({g}), None,
                                             "alpha vanishes on a non-identity singleton"))
            break
    for _ in range(sample):
        x, y = rand_subset(), rand_subset()
        ax, ay = alpha.eval(x), alpha.eval(y)
        if x <= y and ax > ay:
            violations.append(AxiomViolation("c3", x, y, "alpha not monotone"))
            break
        if ax + ay < alpha.eval(x | y) + alpha.eval(x & y):
            violations.append(AxiomViolation("c2", x, y, "submodularity fails"))
            break
        g = rng.randrange(n)
        if x:
            jump = alpha.eval(x | {g}) - ax
            if jump > k and (x != id_set or group.mul(g, g) == group.identity):
                violations.append(AxiomViolation("smoothness", x, frozenset({g}),
                                                 f"jump {jump} > k={k}"))
                break
    return violations


def verify_axioms(alpha: AlphaFunction, k: int,
                  exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                  order_limit: int = ORDER_LIMIT,
                  sample: Optional[int] = None,
                  seed: int = 0) -> AxiomReport:
    """Check c1, c2, c3, c6 and the jump condition for the given k.

    Closure- and conjugation-invariance (c4, c5) hold by representation and
    are reported as structurally satisfied.  Groups of order up to
    ``exhaustive_limit`` get a literal all-subset-pairs check; up to
    ``order_limit`` the check runs on the subgroup lattice plus singleton
    probes; larger groups need an explicit ``sample`` budget.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = alpha.group.order
    if n <= exhaustive_limit:
        cache_key = ("exhaustive", k)
        mode = "exhaustive"
    elif n <= order_limit:
        cache_key = ("lattice", k)
        mode = "lattice"
    elif sample is not None:
        cache_key = None
        mode = "sampled"
    else:
        raise GroupError(
            f"group order {n} exceeds exhaustive bound {order_limit}; pass a sample budget")
    if cache_key is not None and cache_key in alpha._report_cache:
        return alpha._report_cache[cache_key]
    if mode == "exhaustive":
        violations = _verify_exhaustive(alpha, k)
    elif mode == "lattice":
        violations = _verify_lattice(alpha, k)
    else:
        violations = _verify_sampled(alpha, k, sample, seed)
    report = AxiomReport(passed=not violations, violations=violations, mode=mode)
    if cache_key is not None:
        alpha._report_cache[cache_key] = report
    return report
