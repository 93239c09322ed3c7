"""Group table construction and subgroup machinery."""

import pytest

from gaincount.groups import (
    GroupError,
    Subgroup,
    all_subgroups,
    classify_subgroup,
    conj_class,
    conjugate_subgroup,
    cyclic_group,
    dihedral_group,
    generated_subgroup,
    group_from_table,
    make_group,
    maximal_cyclic_subgroups_containing,
    product_group,
    subgroup_conj_classes,
    trivial_group,
)


def permutation_dihedral(n):
    """Independent model of the dihedral group as permutations of n points.

    Rotation r maps i to i+1 mod n; reflection s maps i to -i mod n.
    Composition is left-to-right to match the table convention a*b =
    'apply a then b'.
    """
    def rot(j):
        return tuple((i + j) % n for i in range(n))

    def refl(j):
        # s * r_j : first negate, then shift
        return tuple((-i + j) % n for i in range(n))

    perms = [rot(j) for j in range(n)] + [refl(j) for j in range(n)]

    def compose(p, q):  # p then q
        return tuple(q[p[i]] for i in range(n))

    index = {p: i for i, p in enumerate(perms)}
    mul = [[index[compose(p, q)] for q in perms] for p in perms]
    return mul


def test_trivial_and_cyclic_one():
    t = trivial_group()
    assert t.order == 1
    c1 = cyclic_group(1)
    assert c1.order == 1
    assert c1.identity == 0


def test_cyclic_arithmetic():
    z6 = cyclic_group(6)
    assert z6.mul(4, 5) == 3
    assert z6.inv(2) == 4
    assert z6.element_order(2) == 3
    assert z6.is_abelian()


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_dihedral_matches_permutation_model(n):
    if n < 3:
        # the permutation model degenerates below n = 3; check axioms only
        d = dihedral_group(n)
        assert d.order == 2 * n
        return
    d = dihedral_group(n)
    assert d.mul_table == tuple(tuple(row) for row in permutation_dihedral(n))


def test_dihedral_presentation_relations():
    d4 = dihedral_group(4)
    r1, s0 = d4.index("r1"), d4.index("s0")
    assert d4.name(d4.mul(r1, r1)) == "r2"
    assert d4.name(d4.mul(s0, s0)) == "r0"
    # s r s = r^-1
    assert d4.mul(d4.mul(s0, r1), s0) == d4.inv(r1)
    assert not dihedral_group(3).is_abelian()


def test_product_group_order_and_names():
    p = make_group("product cyclic 3 ; cyclic 2 ; cyclic 3")
    assert p.order == 18
    assert p.name(p.identity) == "(0,0,0)"
    a = p.index("(1,0,2)")
    b = p.index("(2,1,1)")
    assert p.name(p.mul(a, b)) == "(0,1,0)"


def test_raw_table_roundtrip_and_validation():
    z3 = cyclic_group(3)
    g = group_from_table([list(row) for row in z3.mul_table])
    assert g.mul_table == z3.mul_table
    again = make_group(g.spec)
    assert again.mul_table == z3.mul_table
    with pytest.raises(GroupError):
        group_from_table([[0, 1], [1, 1]])  # not a group
    with pytest.raises(GroupError):
        make_group("table 2 0 1 1")  # wrong entry count


def test_make_group_rejects_nonsense():
    for bad in ["", "cyclic", "cyclic x", "octonions 8", "product cyclic 2",
                "product cyclic 2 ; product cyclic 2 ; cyclic 2"]:
        with pytest.raises(GroupError):
            make_group(bad)
    with pytest.raises(GroupError):
        make_group("cyclic 100", max_order=64)


def test_inverse_involution_and_identity_laws():
    for g in [cyclic_group(6), dihedral_group(4), make_group("product cyclic 2 ; cyclic 4")]:
        for a in g.elements():
            assert g.inv(g.inv(a)) == a
            assert g.mul(a, g.inv(a)) == g.identity
            assert g.mul(g.identity, a) == a


def test_generated_subgroup_examples():
    z6 = cyclic_group(6)
    assert generated_subgroup(z6, ()).members == (0,)
    assert generated_subgroup(z6, (2,)).members == (0, 2, 4)
    d3 = dihedral_group(3)
    whole = generated_subgroup(d3, (d3.index("s0"), d3.index("r1")))
    assert whole.order == 6


def test_generated_subgroup_idempotent():
    d4 = dihedral_group(4)
    for sub in all_subgroups(d4):
        again = generated_subgroup(d4, sub.members)
        assert again.members == sub.members


def brute_force_subgroups(group):
    """All subgroups by filtering every subset containing the identity."""
    from itertools import combinations
    out = set()
    elems = list(group.elements())
    for r in range(0, group.order + 1):
        for combo in combinations(elems, r):
            s = set(combo) | {group.identity}
            if all(group.mul(a, b) in s for a in s for b in s) and \
                    all(group.inv(a) in s for a in s):
                out.add(tuple(sorted(s)))
    return out


@pytest.mark.parametrize("spec", ["cyclic 8", "dihedral 3", "product cyclic 2 ; cyclic 2"])
def test_all_subgroups_against_brute_force(spec):
    g = make_group(spec)
    assert {s.members for s in all_subgroups(g)} == brute_force_subgroups(g)


def test_conj_class_constant_on_conjugates():
    for spec in ["cyclic 6", "dihedral 4", "dihedral 3", "product cyclic 2 ; cyclic 2 ; cyclic 2"]:
        g = make_group(spec)
        for sub in all_subgroups(g):
            cls = conj_class(g, sub)
            for gamma in g.elements():
                assert conj_class(g, conjugate_subgroup(g, sub, gamma)) == cls


def test_conjugacy_in_dihedral_4():
    d4 = dihedral_group(4)
    s0 = generated_subgroup(d4, (d4.index("s0"),))
    s1 = generated_subgroup(d4, (d4.index("s1"),))
    s2 = generated_subgroup(d4, (d4.index("s2"),))
    assert s0.members != s2.members
    assert conj_class(d4, s0) == conj_class(d4, s2)
    assert conj_class(d4, s0) != conj_class(d4, s1)


def test_abelian_classes_are_singletons():
    z12 = cyclic_group(12)
    assert len(subgroup_conj_classes(z12)) == len(all_subgroups(z12))


def test_classification_agrees_with_generator_search():
    for spec in ["cyclic 6", "dihedral 3", "dihedral 4",
                 "product cyclic 3 ; cyclic 2 ; cyclic 3"]:
        g = make_group(spec)
        for sub in all_subgroups(g):
            got = classify_subgroup(g, sub)
            cyclic = any(
                generated_subgroup(g, (x,)).members == sub.members for x in sub.members)
            assert got.is_cyclic == cyclic
            assert got.is_trivial == (sub.order == 1)
            assert got.iso_to_z2 == (sub.order == 2)
            assert got.cyclic_order == (sub.order if cyclic else None)


def test_classify_whole_dihedral_3_not_cyclic():
    d3 = dihedral_group(3)
    whole = generated_subgroup(d3, tuple(d3.elements()))
    assert not classify_subgroup(d3, whole).is_cyclic
    z2 = generated_subgroup(cyclic_group(6), (3,))
    cls = classify_subgroup(cyclic_group(6), z2)
    assert cls.is_cyclic and cls.cyclic_order == 2 and cls.iso_to_z2


def brute_maximal_cyclic_containing(group, g):
    cyclics = {generated_subgroup(group, (x,)).members for x in group.elements()}
    containing = {m for m in cyclics if g in m}
    return {m for m in containing
            if not any(m != o and set(m) < set(o) for o in containing)}


def test_maximal_cyclic_uniqueness_in_cyclic_and_dihedral():
    z5 = cyclic_group(5)
    for g in range(1, 5):
        subs = maximal_cyclic_subgroups_containing(z5, g)
        assert len(subs) == 1 and subs[0].order == 5
    d5 = dihedral_group(5)
    for g in d5.elements():
        if g == d5.identity:
            continue
        subs = maximal_cyclic_subgroups_containing(d5, g)
        assert len(subs) == 1
        assert {s.members for s in subs} == brute_maximal_cyclic_containing(d5, g)


def test_maximal_cyclic_multiplicity_in_z3_z2_z3():
    p = make_group("product cyclic 3 ; cyclic 2 ; cyclic 3")
    g = p.index("(0,1,0)")
    subs = maximal_cyclic_subgroups_containing(p, g)
    assert len(subs) > 1
    assert {s.members for s in subs} == brute_maximal_cyclic_containing(p, g)


def test_maximal_cyclic_rejects_identity():
    with pytest.raises(GroupError):
        maximal_cyclic_subgroups_containing(cyclic_group(4), 0)
