import random
from fractions import Fraction

import pytest

from qelliptic import groups as gr
from qelliptic.cochains import Cochain2, cyclic_cocycle, transgress, value_order, zero_cochain2
from qelliptic.cyclotomic import Cyclotomic
from qelliptic.errors import ValidationError
from qelliptic.groups import full_subgroup
from qelliptic.reps import (
    central_extension,
    character_table,
    char_value_at,
    eigen_multiplicities,
    extension_element_order,
    lambda_basis,
    projective_irreps,
    theta_power_sum,
)
from qelliptic.verify import random_normalized_cochain2


def cyclic_table_oracle(n):
    """Independent abelian oracle: the characters of Z/n are k -> zeta_n^(jk)."""
    return {tuple(Cyclotomic.root(n, (j * k) % n) for k in range(n)) for j in range(n)}


def test_cyclic_tables_match_dft_oracle():
    for n in (1, 2, 3, 4, 6, 8, 12):
        tbl = character_table(gr.cyclic(n))
        got = {tuple(row) for row in tbl.rows}
        assert got == cyclic_table_oracle(n)


def test_z2_table_rows():
    tbl = character_table(gr.cyclic(2))
    assert tbl.degrees == (1, 1)
    values = sorted(tuple(v.eval_numeric().real for v in row) for row in tbl.rows)
    assert values == [(1.0, -1.0), (1.0, 1.0)]


def test_s3_table():
    tbl = character_table(gr.symmetric(3))
    assert tbl.degrees == (1, 1, 2)
    k = len(tbl.rows)
    for i in range(k):
        for j in range(k):
            assert tbl.inner_product(i, j) == Fraction(1 if i == j else 0)


def test_q8_table():
    tbl = character_table(gr.quaternion())
    assert tbl.degrees == (1, 1, 1, 1, 2)
    assert sum(d * d for d in tbl.degrees) == 8


def test_tables_deterministic():
    t1 = character_table(gr.symmetric(4))
    t2 = character_table(gr.symmetric(4))
    assert t1.rows == t2.rows and t1.degrees == (1, 1, 2, 3, 3)


def test_table_cap():
    class FakeOrder:
        order = 501
    with pytest.raises(ValidationError):
        character_table(FakeOrder())
    assert character_table(gr.cyclic(12)).num_classes == 12


def test_split_extension_is_product():
    Z2 = gr.cyclic(2)
    E = central_extension(Z2, zero_cochain2(full_subgroup(Z2)))
    assert E.n == 1 and E.order == 2
    assert extension_element_order(E, 0, 1) == 2


def test_nonsplit_extension_is_z4():
    Z2 = gr.cyclic(2)
    theta = Cochain2(full_subgroup(Z2), {(1, 1): Fraction(1, 2)})
    E = central_extension(Z2, theta)
    assert E.order == 4
    assert extension_element_order(E, 0, 1) == 4
    orders = sorted(gr.element_order(E.total, g) for g in E.total.elements())
    assert orders == [1, 2, 4, 4]


def test_v4_antisymmetric_extension_is_nonabelian():
    V4 = gr.builtin("Z2xZ2")
    vals = {}
    for g in range(4):
        for h in range(4):
            v = Fraction(divmod(g, 2)[1] * divmod(h, 2)[0], 2) % 1
            if v:
                vals[(g, h)] = v
    theta = Cochain2(full_subgroup(V4), vals)
    E = central_extension(V4, theta)
    assert E.order == 8 and not E.total.is_abelian
    projs = projective_irreps(V4, theta)
    assert [p.degree for p in projs] == [2]


def test_extension_rejects_non_cocycle():
    Z4 = gr.cyclic(4)
    bad = Cochain2(full_subgroup(Z4), {(1, 2): Fraction(1, 4)})
    with pytest.raises(ValidationError):
        central_extension(Z4, bad)


def test_order_lemma_sharp_case():
    Z2 = gr.cyclic(2)
    theta = transgress(cyclic_cocycle(2, 1, group=Z2), 1)
    E = central_extension(theta.carrier.group, theta)
    g_loc = theta.carrier.to_local(1)
    assert extension_element_order(E, 0, g_loc) == 4
    assert value_order(theta) * gr.element_order(Z2, 1) == 4


def test_order_lemma_randomized():
    rng = random.Random(9)
    for G in [gr.cyclic(6), gr.symmetric(3), gr.builtin("Z2xZ4")]:
        for _ in range(10):
            from qelliptic.cochains import coboundary3
            alpha = coboundary3(random_normalized_cochain2(G, rng))
            for g in G.elements():
                theta = transgress(alpha, g)
                E = central_extension(theta.carrier.group, theta)
                got = extension_element_order(E, 0, theta.carrier.to_local(g))
                assert (value_order(theta) * gr.element_order(G, g)) % got == 0


def test_projective_z2():
    Z2 = gr.cyclic(2)
    theta = Cochain2(full_subgroup(Z2), {(1, 1): Fraction(1, 2)})
    projs = projective_irreps(Z2, theta)
    assert len(projs) == 2
    values = {p.value_lift(1) for p in projs}
    assert values == {Cyclotomic.root(4, 1), Cyclotomic.root(4, 3)}


def test_projective_split_gives_ordinary():
    S3 = gr.symmetric(3)
    projs = projective_irreps(S3, zero_cochain2(full_subgroup(S3)))
    assert sorted(p.degree for p in projs) == [1, 1, 2]


def test_projective_degree_sum():
    Z4 = gr.cyclic(4)
    theta = transgress(cyclic_cocycle(4, 1, group=Z4), 1)
    projs = projective_irreps(theta.carrier.group, theta)
    assert sum(p.degree ** 2 for p in projs) == theta.carrier.group.order


def test_lambda_basis_untwisted_z2():
    mod = lambda_basis(gr.cyclic(2), 1)
    assert mod.N == 2
    assert sorted(b.x for b in mod.basis) == [Fraction(0), Fraction(1, 2)]
    minus = next(b for b in mod.basis if b.x == Fraction(1, 2))
    assert minus.sigma_scalar == Cyclotomic.rational(-1)


def test_lambda_basis_identity_sector():
    mod = lambda_basis(gr.cyclic(2), 0)
    assert [b.x for b in mod.basis] == [Fraction(0), Fraction(0)]


def test_lambda_basis_twisted_z2():
    Z2 = gr.cyclic(2)
    theta = transgress(cyclic_cocycle(2, 1, group=Z2), 1)
    mod = lambda_basis(Z2, 1, theta)
    assert mod.N == 4
    assert sorted(b.x for b in mod.basis) == [Fraction(1, 4), Fraction(3, 4)]


def test_lambda_basis_twist_degeneration():
    for G in [gr.cyclic(4), gr.symmetric(3)]:
        for g in G.elements():
            plain = lambda_basis(G, g)
            theta0 = transgress(
                __import__("qelliptic.cochains", fromlist=["zero_cochain3"]).zero_cochain3(G), g)
            twisted = lambda_basis(G, g, theta0)
            assert [(b.degree, b.x) for b in plain.basis] \
                == [(b.degree, b.x) for b in twisted.basis]
            assert plain.N == twisted.N


def test_eigen_multiplicities_reconstruct_character():
    S3 = gr.symmetric(3)
    mod = lambda_basis(S3, S3.identity)
    for irrep in mod.basis:
        for h in mod.cent.group.elements():
            eig = eigen_multiplicities(mod, irrep, Fraction(0), h)
            total = Cyclotomic.zero()
            count = 0
            for (M, t, mult) in eig:
                total = total + Cyclotomic.root(M, t) * mult
                count += mult
            assert total == irrep.lift_values[h]
            assert count == irrep.degree


def test_theta_power_sum():
    Z2 = gr.cyclic(2)
    theta = transgress(cyclic_cocycle(2, 1, group=Z2), 1)
    assert theta_power_sum(theta, 1, 0) == 0
    assert theta_power_sum(theta, 1, 1) == 0
    assert theta_power_sum(theta, 1, 2) == Fraction(1, 2)
