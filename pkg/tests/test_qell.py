from fractions import Fraction

import numpy as np
import pytest

from qelliptic import groups as gr
from qelliptic.cochains import cyclic_cocycle, zero_cochain3
from qelliptic.errors import ValidationError
from qelliptic.groups import GroupHom
from qelliptic.qell import (
    GSet,
    QEllBasisElement,
    QEllClass,
    build_structure,
    disjoint_union,
    fixed_points,
    free_translation,
    generator_class,
    gset_from_json,
    gset_to_json,
    point,
    q_multiply,
    qell_basis,
    qell_rank_report,
    rank_report,
    restrict_class,
    trivial_gset,
)
from qelliptic.reps import projective_irreps


def degree_multiset(report):
    return sorted(
        x for sec in report["sectors"] for (x, m) in sec["degrees"] for _ in range(m)
    )


def test_gset_validation():
    Z2 = gr.cyclic(2)
    with pytest.raises(ValidationError):
        GSet(Z2, [[0, 0], [1, 0]])   # identity must act trivially
    X = GSet(Z2, [[1, 0], [0, 1]].__class__([[1, 0], [0, 1]])) if False else None
    swap = GSet(Z2, [[0, 1], [1, 0]])
    assert swap.act(0, 1) == 1


def test_fixed_points_examples():
    S3 = gr.symmetric(3)
    free = free_translation(S3)
    assert fixed_points(free, [1]).points == ()
    pt = point(S3)
    assert fixed_points(pt, [2]).points == (0,)
    Z2 = gr.cyclic(2)
    swap = GSet(Z2, [[0, 1], [1, 0]])
    assert fixed_points(swap, [1]).points == ()
    fs = fixed_points(swap, [0])
    assert fs.points == (0, 1) and fs.gset.act(0, fs.cent.to_local(1)) == 1


def test_qell_basis_z2_point():
    Z2 = gr.cyclic(2)
    report = qell_rank_report(Z2, point(Z2))
    assert report["total"] == 4
    assert degree_multiset(report) == ["0", "0", "0", "1/2"]


def test_qell_basis_z2_point_twisted():
    Z2 = gr.cyclic(2)
    report = qell_rank_report(Z2, point(Z2), cyclic_cocycle(2, 1, group=Z2))
    assert degree_multiset(report) == ["0", "0", "1/4", "3/4"]


def test_qell_rank_s3_point():
    S3 = gr.symmetric(3)
    assert qell_rank_report(S3, point(S3))["total"] == 8


def test_qell_trivial_group():
    Z1 = gr.cyclic(1)
    X = trivial_gset(Z1, 3)
    basis = qell_basis(Z1, X)
    assert len(basis) == 3
    assert {b.orbit for b in basis} == {0, 1, 2}


def test_rank_formula_over_point():
    for name in ("Z4", "S3", "D4", "Q8"):
        G = gr.builtin(name)
        st = build_structure(G, point(G))
        expected = sum(
            len(gr.conjugacy_classes(st.sectors[s].cent.group)) for s in st.class_reps
        )
        assert rank_report(st)["total"] == expected


def test_twist_degeneration_basis():
    for name in ("Z4", "S3"):
        G = gr.builtin(name)
        plain = build_structure(G, point(G))
        zero = build_structure(G, point(G), zero_cochain3(G))
        for s in plain.class_reps:
            for o1, o2 in zip(plain.sectors[s].orbits, zero.sectors[s].orbits):
                assert [(b.degree, b.x) for b in o1.module.basis] \
                    == [(b.degree, b.x) for b in o2.module.basis]


def test_disjoint_union_additivity():
    Z2 = gr.cyclic(2)
    X = trivial_gset(Z2, 2)
    Y = GSet(Z2, [[0, 1], [1, 0]])
    both = disjoint_union(X, Y)
    b_union = qell_basis(Z2, both)
    b_parts = qell_basis(Z2, X) + qell_basis(Z2, Y)
    assert len(b_union) == len(b_parts)


def test_trivial_action_factorization():
    # twisted rank at sigma equals |X| times the projective character count
    Z2 = gr.cyclic(2)
    alpha = cyclic_cocycle(2, 1, group=Z2)
    X = trivial_gset(Z2, 3)
    st = build_structure(Z2, X, alpha)
    for sigma in st.class_reps:
        sector = st.sectors[sigma]
        count = sum(len(o.module.basis) for o in sector.orbits)
        projs = projective_irreps(sector.cent.group, sector.theta)
        assert count == X.size * len(projs)


def test_q_multiply_shifts():
    Z2 = gr.cyclic(2)
    st = build_structure(Z2, point(Z2))
    key = QEllBasisElement(1, 0, 0, 0)
    c = generator_class(st, key)
    up = q_multiply(c, 3)
    assert list(up.terms) == [QEllBasisElement(1, 0, 0, 3)]
    assert q_multiply(up, -3).terms == c.terms
    two = QEllClass(st, {QEllBasisElement(0, 0, 0, 0): 2, key: -1})
    shifted = q_multiply(two, 1)
    assert all(k.q_shift == 1 for k in shifted.terms)


def test_class_validation():
    Z2 = gr.cyclic(2)
    st = build_structure(Z2, point(Z2))
    with pytest.raises(ValidationError):
        QEllClass(st, {QEllBasisElement(1, 0, 9, 0): 1})
    with pytest.raises(ValidationError):
        QEllClass(st, {QEllBasisElement(2, 0, 0, 0): 1})


def test_class_json_round_trip():
    Z2 = gr.cyclic(2)
    st = build_structure(Z2, point(Z2))
    c = QEllClass(st, {QEllBasisElement(1, 0, 1, -2): 3, QEllBasisElement(0, 0, 0, 0): -1})
    assert QEllClass.from_json(c.to_json(), st).terms == c.terms


def test_gset_json_round_trip():
    Z2 = gr.cyclic(2)
    X = GSet(Z2, [[0, 1], [1, 0]])
    assert np.array_equal(gset_from_json(gset_to_json(X), Z2).action, X.action)


def test_restriction_identity():
    Z4 = gr.cyclic(4)
    st = build_structure(Z4, point(Z4))
    c = QEllClass(st, {b: i + 1 for i, b in enumerate(st.basis())})
    r = restrict_class(gr.identity_hom(Z4), [0], c, target=st)
    assert r.terms == c.terms


def test_restriction_z2_in_z4_degrees_preserved():
    Z2, Z4 = gr.cyclic(2), gr.cyclic(4)
    f = GroupHom(Z2, Z4, (0, 2))
    stH = build_structure(Z4, point(Z4))
    stG = build_structure(Z2, point(Z2))
    # oracle: the sigma = 2 sector characters of Z/4 restrict along {0,2} < Z/4
    # with chi_j(2) = (-1)^j, so even j lands on x = 0 and odd j on x = 1/2
    for i, irr in enumerate(stH.sectors[2].orbits[0].module.basis):
        c = generator_class(stH, QEllBasisElement(2, 0, i, 0))
        r = restrict_class(f, [0], c, target=stG)
        assert len(r.terms) == 1
        (key, coeff), = r.terms.items()
        assert coeff == 1 and key.sigma == 1
        assert stG.sectors[1].orbits[0].module.basis[key.irrep].x == irr.x


def test_restriction_trivial_hom_degree_copies():
    Z2, S3 = gr.cyclic(2), gr.symmetric(3)
    stH = build_structure(S3, point(S3))
    stG = build_structure(Z2, point(Z2))
    i2 = next(i for i, irr in enumerate(stH.sectors[0].orbits[0].module.basis)
              if irr.degree == 2)
    c = generator_class(stH, QEllBasisElement(0, 0, i2, 0))
    r = restrict_class(gr.trivial_hom(Z2, S3), [0], c, target=stG)
    # a degree-2 irreducible contributes 2 copies in each target sector
    for key, coeff in r.terms.items():
        assert coeff == 2
        assert stG.sectors[key.sigma].orbits[0].module.basis[key.irrep].x == 0
    assert {k.sigma for k in r.terms} == {0, 1}


def test_restriction_rejects_non_equivariant_map():
    Z2 = gr.cyclic(2)
    swap = GSet(Z2, [[0, 1], [1, 0]])
    st_src = build_structure(Z2, swap)
    c = QEllClass(st_src, {b: 1 for b in st_src.basis()})
    with pytest.raises(ValidationError):
        restrict_class(gr.identity_hom(Z2), [0, 0], c, X=swap)
