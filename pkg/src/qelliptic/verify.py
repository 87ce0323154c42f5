"""The property battery behind `verify all`: every identity the engine
asserts, run at its exact tolerance over the builtin suite.

Each part returns a JSON-ready report with an "ok" flag and enough detail to
locate a failure; randomized parts are driven by an explicit seed.
"""

from __future__ import annotations

import cmath
import random
from fractions import Fraction
from math import gcd

from . import groups as gr
from .cochains import (
    Cochain2,
    Cochain3,
    check_cocycle2,
    check_cocycle3,
    check_normalized,
    coboundary3,
    cup_product_cocycle,
    cyclic_cocycle,
    gro_value,
    pullback_cochain3,
    qz,
    restrict_cochain2,
    transgress,
    value_order,
    zero_cochain3,
)
from .cyclotomic import Cyclotomic
from .devoto import (
    EllFunction,
    class_equal,
    coset_completion,
    ell_eval_tau,
    ell_normalize,
    ell_sl2_act,
    invariant_rank_pt,
)
from .groups import SL2_S, SL2_T, FiniteGroup, GroupHom, SL2Matrix, full_subgroup
from .chern import (
    chern_character,
    check_image_preservation,
    kernel_c,
    verify_willerton_line,
)
from .qell import (
    QEllBasisElement,
    build_structure,
    generator_class,
    point,
    rank_report,
    restrict_class,
)
from .reps import central_extension, character_table, extension_element_order

# builtin suite of groups of order <= 24 used by the exhaustive properties
SUITE_24 = ("Z2", "Z3", "Z4", "Z6", "Z8", "Z12", "Z2xZ2", "Z2xZ4",
            "Z2xZ2xZ2", "D4", "D6", "Q8", "S3", "S4")
SUITE_8 = ("Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2xZ2xZ2", "D4", "Q8", "Z2xZ4")
TABLE_SUITE = ("Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12",
               "S3", "S4", "D4", "Q8", "Z2xZ2")
CHERN_UNTWISTED = ("Z2", "Z4", "S3")
CHERN_TWISTED = ("Z2", "Z4", "Z2xZ2")


def _coordinate_lift(factor_orders: list[int], index: int):
    """Integer lift of the character reading one coordinate of a cyclic product."""
    def lift(g: int) -> int:
        rest = g
        for n in reversed(factor_orders[index + 1:]):
            rest //= n
        return rest % factor_orders[index]
    return lift


def suite_cocycles(G: FiniteGroup, rng: random.Random, coboundaries: int = 1) -> list[Cochain3]:
    """The cocycle family exercised on a suite group: zero, the cyclic family
    when the group is cyclic, a cup product on elementary abelian 2-groups,
    and seeded random coboundaries."""
    out = [zero_cochain3(G)]
    n = G.order
    if G.name.startswith("Z") and "x" not in G.name:
        out.append(cyclic_cocycle(n, 1, group=G))
        if n > 2:
            out.append(cyclic_cocycle(n, n // 2, group=G))
    if set(gr.element_order(G, g) for g in G.elements()) <= {1, 2} and G.is_abelian and n >= 4:
        k = n.bit_length() - 1
        lifts = [_coordinate_lift([2] * k, i) for i in range(k)]
        out.append(cup_product_cocycle(G, (lifts[0], lifts[-1], lifts[-1]), Fraction(1, 2)))
        if k >= 3:
            out.append(cup_product_cocycle(G, (lifts[0], lifts[1], lifts[2]), Fraction(1, 2)))
    for _ in range(coboundaries):
        out.append(coboundary3(random_normalized_cochain2(G, rng)))
    return out


def random_normalized_cochain2(G: FiniteGroup, rng: random.Random,
                               denominator: int = 4) -> Cochain2:
    values = {}
    e = G.identity
    for g in G.elements():
        for h in G.elements():
            if g == e or h == e:
                continue
            v = qz(Fraction(rng.randrange(denominator), denominator))
            if v:
                values[(g, h)] = v
    return Cochain2(full_subgroup(G), values)


def _fail(report: dict, message: str) -> None:
    report["ok"] = False
    report["failures"].append(message)


# ---------------------------------------------------------------------------
# parts


def verify_cocycle_identities(seed: int = 0) -> dict:
    """Cyclic cocycles pass exhaustively; coboundaries always pass (d d = 0)."""
    rng = random.Random(seed)
    report = {"ok": True, "failures": [], "cyclic_checked": 0, "coboundaries_checked": 0}
    for n in range(1, 9):
        G = gr.cyclic(n)
        for k in range(n):
            alpha = cyclic_cocycle(n, k, group=G)
            ok, witness = check_cocycle3(alpha)
            if not (ok and check_normalized(alpha)):
                _fail(report, f"cyclic({n},{k}) failed at {witness}")
            report["cyclic_checked"] += 1
    for name in SUITE_8:
        G = gr.builtin(name)
        if G.order > 8:
            continue
        for _ in range(100):
            beta = random_normalized_cochain2(G, rng)
            ok, witness = check_cocycle3(coboundary3(beta))
            if not ok:
                _fail(report, f"coboundary on {name} failed at {witness}")
            report["coboundaries_checked"] += 1
    return report


def verify_transgression(seed: int = 0) -> dict:
    """Every transgression is a 2-cocycle on the centralizer, exhaustively."""
    rng = random.Random(seed)
    report = {"ok": True, "failures": [], "checked": 0}
    for name in SUITE_24:
        G = gr.builtin(name)
        for alpha in suite_cocycles(G, rng):
            for g in G.elements():
                theta = transgress(alpha, g)   # raises on failure
                ok, witness = check_cocycle2(theta)
                if not ok:
                    _fail(report, f"transgression on {name} at g={g} failed at {witness}")
                report["checked"] += 1
    return report


def verify_order_lemma(seed: int = 0) -> dict:
    """ord(0,g) divides value_order(theta_g) * ord(g), plus the sharp case."""
    rng = random.Random(seed)
    report = {"ok": True, "failures": [], "checked": 0}
    for name in SUITE_24:
        G = gr.builtin(name)
        alphas = suite_cocycles(G, rng)
        base = alphas[1] if len(alphas) > 1 else alphas[0]
        for _ in range(20):
            alphas.append(base + coboundary3(random_normalized_cochain2(G, rng)))
        for alpha in alphas:
            if not check_normalized(alpha):
                continue
            for g in G.elements():
                theta = transgress(alpha, g)
                E = central_extension(theta.carrier.group, theta)
                got = extension_element_order(E, 0, theta.carrier.to_local(g))
                bound = value_order(theta) * gr.element_order(G, g)
                if bound % got != 0:
                    _fail(report, f"{name}: ord(0,{g}) = {got} does not divide {bound}")
                report["checked"] += 1
    Z2 = gr.cyclic(2)
    theta = transgress(cyclic_cocycle(2, 1, group=Z2), 1)
    E = central_extension(theta.carrier.group, theta)
    sharp = extension_element_order(E, 0, theta.carrier.to_local(1))
    report["sharp_case_order"] = sharp
    if sharp != 4:
        _fail(report, f"sharp case: expected order 4, got {sharp}")
    return report


def verify_character_tables() -> dict:
    """Exact orthogonality, row count = class count, sum of squares = order."""
    report = {"ok": True, "failures": [], "groups": []}
    for name in TABLE_SUITE:
        G = gr.builtin(name)
        tbl = character_table(G)
        k = len(tbl.rows)
        if k != len(tbl.classes):
            _fail(report, f"{name}: {k} rows but {len(tbl.classes)} classes")
        if sum(d * d for d in tbl.degrees) != G.order:
            _fail(report, f"{name}: degree squares do not sum to {G.order}")
        for i in range(k):
            for j in range(k):
                expect = Fraction(1 if i == j else 0)
                if tbl.inner_product(i, j) != expect:
                    _fail(report, f"{name}: <chi_{i}, chi_{j}> != {expect}")
        report["groups"].append({"name": name, "degrees": list(tbl.degrees)})
    return report


def verify_qell_ranks() -> dict:
    """Stated rank examples, the character-count formula, twist degeneration."""
    report = {"ok": True, "failures": [], "cases": []}
    Z2 = gr.cyclic(2)
    rep = rank_report(build_structure(Z2, point(Z2)))
    degrees = sorted(x for sec in rep["sectors"] for (x, m) in sec["degrees"] for _ in range(m))
    report["cases"].append({"group": "Z2", "total": rep["total"], "degrees": degrees})
    if rep["total"] != 4 or degrees != ["0", "0", "0", "1/2"]:
        _fail(report, f"Z2 point rank: got {rep['total']} with degrees {degrees}")

    S3 = gr.symmetric(3)
    rep = rank_report(build_structure(S3, point(S3)))
    report["cases"].append({"group": "S3", "total": rep["total"]})
    if rep["total"] != 8:
        _fail(report, f"S3 point rank: got {rep['total']}")

    a21 = cyclic_cocycle(2, 1, group=Z2)
    rep = rank_report(build_structure(Z2, point(Z2), a21))
    degrees = sorted(x for sec in rep["sectors"] for (x, m) in sec["degrees"] for _ in range(m))
    report["cases"].append({"group": "Z2 twisted", "degrees": degrees})
    if degrees != ["0", "0", "1/4", "3/4"]:
        _fail(report, f"twisted Z2 degrees: got {degrees}")

    for name in SUITE_24:
        G = gr.builtin(name)
        plain = build_structure(G, point(G))
        twisted = build_structure(G, point(G), zero_cochain3(G))
        key = lambda st: [
            (sig, orb.rep, [(irr.x, irr.degree) for irr in orb.module.basis])
            for sig in st.class_reps for orb in st.sectors[sig].orbits
        ]
        if key(plain) != key(twisted):
            _fail(report, f"{name}: zero-twist basis differs from untwisted basis")
        total = rank_report(plain)["total"]
        expected = sum(
            len(gr.conjugacy_classes(plain.sectors[sig].cent.group))
            for sig in plain.class_reps
        )
        if total != expected:
            _fail(report, f"{name}: rank {total} != class-count formula {expected}")
    return report


def verify_restriction() -> dict:
    """Pullback-transgression square and the cyclic inclusion example."""
    report = {"ok": True, "failures": [], "homs_checked": 0}
    Z2, Z4, Z6 = gr.cyclic(2), gr.cyclic(4), gr.cyclic(6)
    S3 = gr.symmetric(3)
    three_cycle = next(g for g in S3.elements() if gr.element_order(S3, g) == 3)
    transposition = next(g for g in S3.elements() if gr.element_order(S3, g) == 2)
    homs = [
        (GroupHom(Z2, Z4, (0, 2)), cyclic_cocycle(4, 1, group=Z4)),
        (GroupHom(Z2, Z6, (0, 3)), cyclic_cocycle(6, 1, group=Z6)),
        (GroupHom(Z4, Z4, (0, 1, 2, 3)), cyclic_cocycle(4, 1, group=Z4)),
        (GroupHom(gr.cyclic(3), S3,
                  (S3.identity, three_cycle, S3.mul(three_cycle, three_cycle))),
         coboundary3(random_normalized_cochain2(S3, random.Random(7)))),
        (GroupHom(Z2, S3, (S3.identity, transposition)),
         coboundary3(random_normalized_cochain2(S3, random.Random(8)))),
    ]
    for f, alpha in homs:
        pulled = pullback_cochain3(f, alpha)
        ok3, _ = check_cocycle3(pulled)
        if not ok3:
            _fail(report, "pullback destroyed the cocycle condition")
        for g in f.domain.elements():
            lhs = transgress(pulled, g)
            theta_cod = transgress(alpha, f(g))
            cm = theta_cod.carrier.index_map
            for i, a in enumerate(lhs.carrier.elements):
                for j, b in enumerate(lhs.carrier.elements):
                    want = theta_cod.value(cm[f(a)], cm[f(b)])
                    if lhs.value(i, j) != want:
                        _fail(report, f"square fails at hom into {f.codomain.name}, g={g}")
        report["homs_checked"] += 1

    # worked example: Z/2 in Z/4, sigma = 2 sector, degrees preserved
    f = GroupHom(Z2, Z4, (0, 2))
    stH = build_structure(Z4, point(Z4))
    stG = build_structure(Z2, point(Z2))
    for i, irr in enumerate(stH.sectors[2].orbits[0].module.basis):
        c = generator_class(stH, QEllBasisElement(2, 0, i, 0))
        r = restrict_class(f, [0], c, target=stG)
        degrees = sorted(
            stG.sectors[k.sigma].orbits[0].module.basis[k.irrep].x
            for k in r.terms
        )
        if degrees != [irr.x]:
            _fail(report, f"restriction moved degree {irr.x} to {degrees}")
    return report


def verify_devoto_ranks() -> dict:
    """Point-rank totals match conjugation orbit counts; twisted Z2 stays 4."""
    report = {"ok": True, "failures": [], "cases": []}
    for name, expected in (("S3", 8), ("Z2", 4), ("Q8", None)):
        G = gr.builtin(name)
        _, total = invariant_rank_pt(G)
        oracle = len(gr.pair_orbits(G, "conjugation"))
        report["cases"].append({"group": name, "total": total, "orbit_count": oracle})
        if total != oracle or (expected is not None and total != expected):
            _fail(report, f"{name}: rank {total}, orbits {oracle}, expected {expected}")
    Z2 = gr.cyclic(2)
    _, total = invariant_rank_pt(Z2, cyclic_cocycle(2, 1, group=Z2))
    report["cases"].append({"group": "Z2 twisted", "total": total})
    if total != 4:
        _fail(report, f"twisted Z2 rank: got {total}")
    return report


def _chern_suite():
    """(name, structure) pairs for the character pipeline battery."""
    out = []
    for name in CHERN_UNTWISTED:
        G = gr.builtin(name)
        out.append((f"{name}", build_structure(G, point(G))))
    for name in CHERN_TWISTED:
        G = gr.builtin(name)
        if name == "Z2xZ2":
            lifts = [_coordinate_lift([2, 2], i) for i in range(2)]
            alpha = cup_product_cocycle(G, (lifts[0], lifts[1], lifts[1]), Fraction(1, 2))
        else:
            alpha = cyclic_cocycle(G.order, 1, group=G)
        out.append((f"{name}+twist", build_structure(G, point(G), alpha)))
    return out


def verify_chern(seed: int = 0) -> dict:
    """Kernel triviality, the line-character bridge, twist degeneration, and
    modular image preservation on spanning sets, both sides independent."""
    report = {"ok": True, "failures": [], "kernel": 0, "willerton": 0, "sl2": 0}
    suite = _chern_suite()
    for name, st in suite:
        for sigma in st.class_reps:
            kr = kernel_c(st, sigma)
            if not kr.ok:
                _fail(report, f"{name}: kernel check failed at sigma={sigma}: {kr.failures[:1]}")
            report["kernel"] += 1
        alpha = st.twist if st.twist is not None else zero_cochain3(st.group)
        for (g, h) in gr.commuting_pairs(st.group):
            ok, witness = verify_willerton_line(alpha, g, h)
            if not ok:
                _fail(report, f"{name}: line mismatch at ({g},{h}): {witness}")
            report["willerton"] += 1
    # twisted pipeline at the zero twist degenerates to the untwisted pipeline
    for name in CHERN_UNTWISTED:
        G = gr.builtin(name)
        plain = build_structure(G, point(G))
        zero = build_structure(G, point(G), zero_cochain3(G))
        for b_plain, b_zero in zip(plain.basis(), zero.basis()):
            r1 = chern_character(generator_class(plain, b_plain))
            r2 = chern_character(generator_class(zero, b_zero))
            if not class_equal(r1.ell, r2.ell):
                _fail(report, f"{name}: zero-twist pipeline differs at {b_plain}")
    for name, st in suite:
        for b in st.basis():
            c = generator_class(st, b)
            for A, mat_name in ((SL2_S, "S"), (SL2_T, "T")):
                rep = check_image_preservation(c, A)
                if not rep.ok:
                    detail = (rep.component_mismatches or rep.line_mismatches)[:1]
                    _fail(report, f"{name}: {mat_name} fails at {b}: {detail}")
                report["sl2"] += 1
    return report


def _random_raw_terms(rng: random.Random):
    terms = []
    for _ in range(rng.randrange(1, 5)):
        while True:
            a, b, c, d = (rng.randrange(-3, 4) for _ in range(4))
            if a * d - b * c == 1:
                break
        n = rng.randrange(-2, 3)
        coeff = Cyclotomic.root(rng.choice([1, 2, 3, 4]), rng.randrange(0, 4)) * rng.randrange(-2, 3)
        terms.append((SL2Matrix(a, b, c, d), n, coeff))
    return terms


def _sample_moderate_tau(rng: random.Random, raw, F: EllFunction) -> tuple[complex, complex, complex]:
    """A point where both evaluations stay of moderate size, so the exact
    1e-9 comparison is meaningful against float round-off."""
    for _ in range(500):
        tau = complex(rng.uniform(-1.2, 1.2), rng.uniform(0.2, 1.5))
        v1 = ell_eval_tau(F, tau)
        v2 = _eval_raw(raw, tau)
        if max(abs(v1), abs(v2)) <= 1e3:
            return tau, v1, v2
    raise AssertionError("could not find a moderate evaluation point")


def _eval_raw(raw, tau: complex) -> complex:
    total = 0j
    for M, n, coeff in raw:
        moebius = (M.a * tau + M.b) / (M.c * tau + M.d)
        total += coeff.eval_numeric() * cmath.exp(2j * cmath.pi * n * moebius)
    return total


def verify_ell_soundness(seed: int = 0) -> dict:
    """Symbolic equality implies numeric agreement; modular relations hold."""
    rng = random.Random(seed)
    report = {"ok": True, "failures": [], "comparisons": 0, "relations": 0}
    for _ in range(500):
        raw = _random_raw_terms(rng)
        # a rewritten list: shuffled, with terms translated by the stabilizer
        rewritten = []
        for (M, n, coeff) in raw:
            k = rng.randrange(-2, 3)
            gamma = SL2Matrix(1, k, 0, 1)
            sign = rng.choice([1, -1])
            M2 = SL2Matrix(sign * (gamma * M).a, sign * (gamma * M).b,
                           sign * (gamma * M).c, sign * (gamma * M).d)
            rewritten.append((M2, n, coeff))
        rng.shuffle(rewritten)
        F1, F2 = ell_normalize(raw), ell_normalize(rewritten)
        if F1 != F2:
            _fail(report, "stabilizer-translated term lists normalize differently")
            continue
        for _ in range(5):
            _, v1, v2 = _sample_moderate_tau(rng, raw, F1)
            if abs(v1 - v2) >= 1e-9:
                _fail(report, f"normalized evaluation differs by {abs(v1 - v2)}")
        report["comparisons"] += 1
    for _ in range(100):
        raw = _random_raw_terms(rng)
        F = ell_normalize(raw)
        G4 = F
        for _ in range(4):
            G4 = ell_sl2_act(SL2_S, G4)
        G6 = F
        ST = SL2_S * SL2_T
        for _ in range(6):
            G6 = ell_sl2_act(ST, G6)
        if G4 != F or G6 != F:
            _fail(report, "S^4 or (ST)^6 moved a function")
        report["relations"] += 1
    return report


PARTS = {
    "cocycles": verify_cocycle_identities,
    "transgression": verify_transgression,
    "orders": verify_order_lemma,
    "tables": lambda seed=0: verify_character_tables(),
    "qell": lambda seed=0: verify_qell_ranks(),
    "restriction": lambda seed=0: verify_restriction(),
    "devoto": lambda seed=0: verify_devoto_ranks(),
    "chern": verify_chern,
    "ell": verify_ell_soundness,
}


def verify_all(seed: int = 0) -> dict:
    parts = {}
    ok = True
    for name, fn in PARTS.items():
        parts[name] = fn(seed=seed)
        ok = ok and parts[name]["ok"]
    return {"ok": ok, "seed": seed, "parts": parts}
