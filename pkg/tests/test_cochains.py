import random
from fractions import Fraction

import pytest

from qelliptic import groups as gr
from qelliptic.cochains import (
    Cochain2,
    Cochain3,
    check_cocycle2,
    check_cocycle3,
    check_normalized,
    coboundary3,
    cochain3_from_json,
    cup_product_cocycle,
    cyclic_cocycle,
    gro_character,
    gro_value,
    pullback_cochain,
    pullback_cochain3,
    qz,
    restrict_cochain2,
    transgress,
    value_order,
    zero_cochain3,
)
from qelliptic.errors import ValidationError
from qelliptic.groups import GroupHom, full_subgroup
from qelliptic.verify import random_normalized_cochain2


def test_zero_cochain_is_cocycle():
    G = gr.cyclic(3)
    ok, witness = check_cocycle3(zero_cochain3(G))
    assert ok and witness is None
    assert check_normalized(zero_cochain3(G))


def test_cyclic_cocycle_values():
    a = cyclic_cocycle(2, 1)
    assert a.value(1, 1, 1) == Fraction(1, 2)
    assert sum(1 for v in a.values.values() if v) == 1

    a4 = cyclic_cocycle(4, 1)
    assert a4.value(1, 3, 3) == Fraction(1, 4)
    ok, _ = check_cocycle3(a4)
    assert ok and check_normalized(a4)

    assert cyclic_cocycle(5, 0).values == {}


def test_cyclic_cocycle_exhaustive_small():
    for n in range(1, 9):
        for k in range(n):
            a = cyclic_cocycle(n, k)
            ok, witness = check_cocycle3(a)
            assert ok, (n, k, witness)


def test_perturbed_cochain_fails_with_witness():
    G = gr.cyclic(2)
    bad = Cochain3(G, {(0, 1, 1): Fraction(1, 2)})
    ok, witness = check_cocycle3(bad)
    assert not ok and witness is not None
    assert not check_normalized(bad)


def test_coboundary_is_cocycle():
    rng = random.Random(3)
    for G in [gr.cyclic(2), gr.cyclic(4), gr.symmetric(3), gr.builtin("Z2xZ2")]:
        for _ in range(25):
            beta = random_normalized_cochain2(G, rng)
            d = coboundary3(beta)
            ok, witness = check_cocycle3(d)
            assert ok, (G.name, witness)
            assert check_normalized(d)


def test_coboundary_of_zero_is_zero():
    G = gr.cyclic(3)
    assert coboundary3(Cochain2(full_subgroup(G), {})).values == {}


def test_transgression_values_on_z2():
    a = cyclic_cocycle(2, 1)
    theta = transgress(a, 1)
    assert theta.value(1, 1) == Fraction(1, 2)
    assert theta.value(0, 1) == 0 and theta.value(1, 0) == 0
    ok, _ = check_cocycle2(theta)
    assert ok
    assert value_order(theta) == 2

    theta0 = transgress(a, 0)
    assert theta0.values == {}
    assert value_order(theta0) == 1


def test_transgression_requires_normalized_cocycle():
    G = gr.cyclic(2)
    bad = Cochain3(G, {(0, 1, 1): Fraction(1, 2)})
    with pytest.raises(ValidationError):
        transgress(bad, 1)


def test_check_cocycle2_witness():
    G = gr.cyclic(3)
    bad = Cochain2(full_subgroup(G), {(1, 2): Fraction(1, 3)})
    ok, witness = check_cocycle2(bad)
    assert not ok and witness is not None


def test_value_orders():
    assert value_order(zero_cochain3(gr.cyclic(2))) == 1
    assert value_order(cyclic_cocycle(4, 1)) == 4


def test_gro_character_zero_cases():
    G = gr.cyclic(2)
    assert all(v == 0 for v in gro_character(zero_cochain3(G), 1, 1).values())
    a = cyclic_cocycle(2, 1)
    assert all(v == 0 for v in gro_character(a, 1, 1).values())


def test_gro_character_nontrivial_on_z2_cubed():
    # triple cup product on (Z/2)^3: the pair (e1, e2) sees the third coordinate
    G = gr.builtin("Z2xZ2xZ2")
    lifts = [lambda g, i=i: (g >> (2 - i)) & 1 for i in range(3)]
    alpha = cup_product_cocycle(G, tuple(lifts), Fraction(1, 2))
    e1, e2, e3 = 4, 2, 1
    chi = gro_character(alpha, e1, e2)
    assert chi[e3] == Fraction(1, 2)
    assert chi[G.identity] == 0
    # it is a homomorphism on the centralizer
    cent = gr.centralizer(G, [e1, e2])
    for u in cent:
        for v in cent:
            assert qz(chi[u] + chi[v]) == chi[G.mul(u, v)]


def test_gro_requires_commuting_pair():
    S3 = gr.symmetric(3)
    g, h = 1, 2
    if S3.mul(g, h) == S3.mul(h, g):
        pytest.skip("unexpectedly commuting")
    with pytest.raises(ValidationError):
        gro_character(zero_cochain3(S3), g, h)


def test_gro_unchanged_by_coboundary_shift():
    rng = random.Random(5)
    V4 = gr.builtin("Z2xZ2")
    lifts = [lambda g: g // 2, lambda g: g % 2]
    cases = [
        (gr.cyclic(4), None),
        (gr.symmetric(3), None),
        (V4, cup_product_cocycle(V4, (lifts[0], lifts[1], lifts[1]), Fraction(1, 2))),
    ]
    for G, alpha in cases:
        if alpha is None:
            alpha = cyclic_cocycle(G.order, 1, group=G) if G.is_abelian and G.name.startswith("Z") \
                else zero_cochain3(G)
        pairs = gr.commuting_pairs(G)
        for _ in range(50):
            beta = random_normalized_cochain2(G, rng)
            shifted = alpha + coboundary3(beta)
            p = rng.choice(pairs)
            assert gro_character(shifted, *p) == gro_character(alpha, *p)


def test_willerton_relation():
    G = gr.builtin("Z2xZ2xZ2")
    lifts = [lambda g, i=i: (g >> (2 - i)) & 1 for i in range(3)]
    alpha = cup_product_cocycle(G, tuple(lifts), Fraction(1, 2))
    for (g1, g2) in gr.commuting_pairs(G)[:32]:
        theta = transgress(alpha, g1)
        loc = theta.carrier.index_map
        for h in gr.centralizer(G, [g1, g2]):
            expected = qz(theta.value(loc[h], loc[g2]) - theta.value(loc[g2], loc[h]))
            assert gro_value(alpha, g1, g2, h) == expected


def test_pullback_examples():
    Z2, Z4 = gr.cyclic(2), gr.cyclic(4)
    a4 = cyclic_cocycle(4, 1, group=Z4)
    incl = GroupHom(Z2, Z4, (0, 2))
    pulled = pullback_cochain(incl, a4)
    assert pulled.value(1, 1, 1) == Fraction(1, 2)
    ok, _ = check_cocycle3(pulled)
    assert ok

    ident = gr.identity_hom(Z4)
    assert pullback_cochain(ident, a4).values == a4.values

    triv = gr.trivial_hom(Z2, Z4)
    assert pullback_cochain(triv, a4).values == {}


def test_pullback_commutes_with_transgression():
    Z2, Z4 = gr.cyclic(2), gr.cyclic(4)
    a4 = cyclic_cocycle(4, 1, group=Z4)
    f = GroupHom(Z2, Z4, (0, 2))
    for g in Z2.elements():
        lhs = transgress(pullback_cochain3(f, a4), g)
        pulled = pullback_cochain(f, transgress(a4, f(g)))
        for a in Z2.elements():
            for b in Z2.elements():
                assert lhs.value(a, b) == pulled.value(a, b)


def test_restrict_cochain2():
    Z4 = gr.cyclic(4)
    theta = transgress(cyclic_cocycle(4, 1, group=Z4), 1)
    sub = gr.subgroup(theta.carrier.group, [0, 2])
    restricted = restrict_cochain2(theta, sub)
    assert restricted.value(1, 1) == theta.value(2, 2)


def test_cochain_json():
    G = gr.cyclic(4)
    a = cochain3_from_json({"family": "cyclic", "n": 4, "k": 1}, G)
    assert a.value(1, 3, 3) == Fraction(1, 4)
    z = cochain3_from_json({"family": "zero"}, G)
    assert z.values == {}
    e = cochain3_from_json(
        {"kind": "explicit", "entries": [[[1, 1, 1], "1/2"]]}, gr.cyclic(2))
    assert e.value(1, 1, 1) == Fraction(1, 2)
    with pytest.raises(ValidationError):
        cochain3_from_json({"kind": "explicit", "entries": [[[1, 1, 1], "3/2"]]}, gr.cyclic(2))
