import random

import numpy as np
import pytest

from qelliptic import groups as gr
from qelliptic.errors import ValidationError
from qelliptic.groups import SL2_I, SL2_S, SL2_T, SL2Matrix

from util import random_sl2


def brute_classes(G):
    """Independent conjugacy oracle: orbit closure by definition."""
    seen, classes = set(), []
    for g in G.elements():
        if g in seen:
            continue
        cls = {G.mul(G.mul(G.inv(k), g), k) for k in G.elements()}
        seen |= cls
        classes.append(frozenset(cls))
    return set(classes)


def test_build_cyclic_2_table():
    G = gr.builtin("Z2")
    assert G.table.tolist() == [[0, 1], [1, 0]]


def test_symmetric_3_classes():
    S3 = gr.symmetric(3)
    assert S3.order == 6
    got = {frozenset(m) for _, m in gr.conjugacy_classes(S3)}
    assert got == brute_classes(S3)
    assert sorted(len(m) for m in got) == [1, 2, 3]


def test_quaternion_classes():
    Q8 = gr.quaternion()
    assert len(gr.conjugacy_classes(Q8)) == 5
    assert {frozenset(m) for _, m in gr.conjugacy_classes(Q8)} == brute_classes(Q8)


def test_non_associative_table_rejected():
    # 3x3 latin square that is not a group table
    bad = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]
    with pytest.raises(ValidationError):
        gr.FiniteGroup(bad)


def test_identity_and_inverses_required():
    with pytest.raises(ValidationError):
        gr.FiniteGroup([[1, 0], [1, 0]])


def test_centralizers():
    S3 = gr.symmetric(3)
    transposition = next(g for g in S3.elements() if gr.element_order(S3, g) == 2)
    three_cycle = next(g for g in S3.elements() if gr.element_order(S3, g) == 3)
    assert len(gr.centralizer(S3, [transposition])) == 2
    assert gr.centralizer(S3, [S3.identity]) == tuple(S3.elements())
    assert gr.centralizer(S3, [three_cycle, transposition]) == (S3.identity,)


def test_commuting_pair_counts():
    # oracle: sum over g of |C_G(g)|
    for G in [gr.cyclic(2), gr.symmetric(3), gr.cyclic(1), gr.quaternion()]:
        expected = sum(len(gr.centralizer(G, [g])) for g in G.elements())
        assert len(gr.commuting_pairs(G)) == expected
    assert len(gr.commuting_pairs(gr.cyclic(2))) == 4
    assert len(gr.commuting_pairs(gr.symmetric(3))) == 18
    assert len(gr.commuting_pairs(gr.cyclic(1))) == 1


def test_sl2_pair_action_examples():
    S3 = gr.symmetric(3)
    for (g, h) in gr.commuting_pairs(S3):
        assert gr.sl2_act_pair(S3, SL2_I, (g, h)) == (g, h)
        # S sends (g, h) to (h, g^-1); T sends (g, h) to (g h^-1, h)
        assert gr.sl2_act_pair(S3, SL2_S, (g, h)) == (h, S3.inv(g))
        assert gr.sl2_act_pair(S3, SL2_T, (g, h)) == (S3.mul(g, S3.inv(h)), h)


def test_sl2_right_action_law():
    rng = random.Random(11)
    for G in [gr.symmetric(3), gr.cyclic(4), gr.quaternion()]:
        pairs = gr.commuting_pairs(G)
        for _ in range(50):
            A, B = random_sl2(rng), random_sl2(rng)
            p = rng.choice(pairs)
            lhs = gr.sl2_act_pair(G, A, gr.sl2_act_pair(G, B, p))
            rhs = gr.sl2_act_pair(G, B * A, p)
            assert lhs == rhs


def test_pair_orbits_counts():
    assert len(gr.pair_orbits(gr.cyclic(2))) == 4
    # oracle: sum over class reps of the class count of the centralizer
    for G in [gr.symmetric(3), gr.quaternion(), gr.dihedral(4)]:
        expected = 0
        for rep, _ in gr.conjugacy_classes(G):
            cent = gr.centralizer_subgroup(G, [rep])
            expected += len(gr.conjugacy_classes(cent.group))
        assert len(gr.pair_orbits(G)) == expected
    assert len(gr.pair_orbits(gr.symmetric(3))) == 8


def test_pair_orbits_with_sl2():
    orbits = gr.pair_orbits(gr.cyclic(2), "conjugation-and-sl2")
    assert len(orbits) == 2
    assert {len(o.members) for o in orbits} == {1, 3}


def test_sl2_orbits_coarsen_conjugation():
    for G in [gr.symmetric(3), gr.quaternion()]:
        conj = gr.pair_orbits(G)
        combined = gr.pair_orbits(G, "conjugation-and-sl2")
        for c in conj:
            containers = [o for o in combined if set(c.members) <= set(o.members)]
            assert len(containers) == 1


def test_sl2_alone_preserves_centralizer():
    # the centralizer of every pair in the orbit under S, T alone is unchanged
    for G in [gr.symmetric(3), gr.dihedral(4)]:
        for p in gr.commuting_pairs(G):
            base = gr.centralizer(G, list(p))
            orbit, frontier = {p}, [p]
            while frontier:
                new = []
                for q in frontier:
                    for A in (SL2_S, SL2_T):
                        r = gr.sl2_act_pair(G, A, q)
                        if r not in orbit:
                            orbit.add(r)
                            new.append(r)
                frontier = new
            for q in orbit:
                assert gr.centralizer(G, list(q)) == base


def test_element_orders():
    S3 = gr.symmetric(3)
    assert gr.element_order(S3, S3.identity) == 1
    assert sorted(gr.element_order(S3, g) for g in S3.elements()) == [1, 2, 2, 2, 3, 3]


def test_permutation_closure_and_bound():
    G = gr.from_permutations(3, [(1, 2, 0), (1, 0, 2)])
    assert G.order == 6
    with pytest.raises(ValidationError):
        gr.from_permutations(5, [(1, 2, 3, 4, 0)], max_order=3)


def test_builtin_names_and_products():
    assert gr.builtin("Z6").order == 6
    assert gr.builtin("D4").order == 8
    assert gr.builtin("S4").order == 24
    assert gr.builtin("Q8").order == 8
    V4 = gr.builtin("Z2xZ2")
    assert V4.order == 4 and V4.is_abelian
    with pytest.raises(ValidationError):
        gr.builtin("E8")


def test_build_group_from_specs():
    assert gr.build_group({"kind": "builtin", "name": "S3"}).order == 6
    assert gr.build_group({"kind": "table", "table": [[0, 1], [1, 0]]}).order == 2
    assert gr.build_group({"kind": "perms", "degree": 3, "gens": [[1, 2, 0]]}).order == 3
    spec = {"kind": "product",
            "factors": [{"kind": "builtin", "name": "Z2"}, {"kind": "builtin", "name": "Z3"}]}
    assert gr.build_group(spec).order == 6


def test_group_homs():
    Z2, Z4 = gr.cyclic(2), gr.cyclic(4)
    f = gr.GroupHom(Z2, Z4, (0, 2))
    assert f(1) == 2
    with pytest.raises(ValidationError):
        gr.GroupHom(Z2, Z4, (0, 1))   # 1 has order 4, not a homomorphism image
    assert gr.identity_hom(Z4).image == (0, 1, 2, 3)
    assert gr.trivial_hom(Z4, Z2).image == (0, 0, 0, 0)


def test_sl2_matrix_validation():
    with pytest.raises(ValidationError):
        SL2Matrix(1, 1, 1, 1)
    assert (SL2_S * SL2_S.inverse()) == SL2_I


def test_subgroup_requires_closure():
    S3 = gr.symmetric(3)
    transposition = next(g for g in S3.elements() if gr.element_order(S3, g) == 2)
    other = next(g for g in S3.elements()
                 if gr.element_order(S3, g) == 2 and g != transposition)
    with pytest.raises(ValidationError):
        gr.subgroup(S3, [S3.identity, transposition, other])
