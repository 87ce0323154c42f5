"""Exact weight-zero model of the Devoto-style elliptic target.

Functions are finite sums of SL2(Z)-precomposed integer q-powers.  A term is
determined by the bottom row (c, d) of the precomposing matrix (its coset
modulo the integer-translation stabilizer of q) together with the exponent,
so normal forms are unique and equality is exact.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .cochains import Cochain3, gro_value, qz
from .cyclotomic import Cyclotomic
from .errors import ValidationError
from .groups import (
    FiniteGroup,
    PairOrbit,
    SL2Matrix,
    centralizer,
    commuting_pairs,
    conj_pair,
    pair_orbits,
    sl2_act_pair,
)
from .qell import GSet

Coset = tuple[int, int]
TermKey = tuple[Coset, int]

COSET_ID: Coset = (0, 1)


def normalize_coset(c: int, d: int) -> Coset:
    """Reduce a bottom row to the canonical coset representative.

    Rows (c, d) and (-c, -d) give the same function, so the sign is fixed by
    c > 0, with (0, 1) for the constant-direction coset.
    """
    if gcd(c, d) != 1:
        raise ValidationError(f"coset row ({c},{d}) is not coprime")
    if c < 0 or (c == 0 and d < 0):
        c, d = -c, -d
    if c == 0:
        d = 1
    return (c, d)


def coset_act(coset: Coset, A: SL2Matrix) -> Coset:
    """Right multiplication of the bottom row by A."""
    c, d = coset
    return normalize_coset(c * A.a + d * A.c, c * A.b + d * A.d)


def coset_completion(coset: Coset) -> SL2Matrix:
    """Some matrix in SL2(Z) with the given bottom row."""
    c, d = coset
    # extended euclid: find a, b with a*d - b*c = 1
    old_r, r = d, c
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q_ = old_r // r
        old_r, r = r, old_r - q_ * r
        old_s, s = s, old_s - q_ * s
        old_t, t = t, old_t - q_ * t
    # old_s*d + old_t*c = old_r = +-1
    if old_r == -1:
        old_s, old_t = -old_s, -old_t
    return SL2Matrix(old_s, -old_t, c, d)


class EllFunction:
    """A finite sum of terms coeff * q^n composed with a modular fraction.

    The term at (coset (c,d), n) is coeff * e^(2 pi i n (a tau + b)/(c tau + d))
    for any completion of the coset to an SL2(Z) matrix; n = 0 terms merge
    into the constant slot at the identity coset.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[TermKey, Cyclotomic] | None = None):
        clean: dict[TermKey, Cyclotomic] = {}
        if terms:
            for (coset, n), coeff in terms.items():
                if not isinstance(coeff, Cyclotomic):
                    coeff = Cyclotomic.rational(coeff)
                if coeff.is_zero():
                    continue
                coset = normalize_coset(*coset) if n != 0 else COSET_ID
                key = (coset, int(n))
                prev = clean.get(key)
                merged = coeff if prev is None else prev + coeff
                if merged.is_zero():
                    clean.pop(key, None)
                else:
                    clean[key] = merged
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, key, value):
        raise AttributeError("EllFunction is immutable")

    @staticmethod
    def zero() -> "EllFunction":
        return EllFunction()

    @staticmethod
    def constant(coeff: Cyclotomic | int | Fraction) -> "EllFunction":
        return EllFunction({(COSET_ID, 0): coeff})

    @staticmethod
    def q_power(n: int, coeff: Cyclotomic | int | Fraction = 1,
                coset: Coset = COSET_ID) -> "EllFunction":
        return EllFunction({(coset, n): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "EllFunction") -> "EllFunction":
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            if key in merged:
                merged[key] = merged[key] + coeff
            else:
                merged[key] = coeff
        return EllFunction(merged)

    def __neg__(self) -> "EllFunction":
        return EllFunction({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "EllFunction") -> "EllFunction":
        return self + (-other)

    def scale(self, s: Cyclotomic | int | Fraction) -> "EllFunction":
        if not isinstance(s, Cyclotomic):
            s = Cyclotomic.rational(s)
        return EllFunction({k: c * s for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, EllFunction) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((k, v.sort_key()) for k, v in self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "Ell(0)"
        bits = []
        for (coset, n), coeff in sorted(self.terms.items()):
            head = f"q^{n}" if coset == COSET_ID else f"q^{n}@{coset}"
            bits.append(f"{coeff!r}*{head}")
        return "Ell(" + " + ".join(bits) + ")"

    def to_json(self) -> list:
        return [
            {"coset": list(coset), "n": n, "coeff": coeff.to_json()}
            for (coset, n), coeff in sorted(self.terms.items())
        ]

    @staticmethod
    def from_json(doc: Sequence[Mapping]) -> "EllFunction":
        terms: dict[TermKey, Cyclotomic] = {}
        for entry in doc:
            key = (tuple(entry["coset"]), int(entry["n"]))
            coeff = Cyclotomic.from_json(entry["coeff"])
            terms[key] = terms.get(key, Cyclotomic.zero()) + coeff
        return EllFunction(terms)


def ell_normalize(raw: Sequence[tuple[SL2Matrix, int, Cyclotomic | int | Fraction]]) -> EllFunction:
    """Collapse full-matrix terms to the coset normal form and merge coefficients."""
    terms: dict[TermKey, Cyclotomic] = {}
    for A, n, coeff in raw:
        if not isinstance(coeff, Cyclotomic):
            coeff = Cyclotomic.rational(coeff)
        key = (normalize_coset(A.c, A.d) if n != 0 else COSET_ID, int(n))
        terms[key] = terms.get(key, Cyclotomic.zero()) + coeff
    return EllFunction(terms)


def ell_sl2_act(A: SL2Matrix, F: EllFunction) -> EllFunction:
    """Per-term coset right-multiplication by A; acting by A then B is A*B."""
    return EllFunction({(coset_act(coset, A), n): coeff
                        for (coset, n), coeff in F.terms.items()})


def ell_eval_tau(F: EllFunction, tau: complex) -> complex:
    if tau.imag <= 0:
        raise ValidationError("evaluation point must have positive imaginary part")
    total = 0j
    for (coset, n), coeff in F.terms.items():
        M = coset_completion(coset)
        moebius = (M.a * tau + M.b) / (M.c * tau + M.d)
        total += coeff.eval_numeric() * cmath.exp(2j * cmath.pi * n * moebius)
    return total


def ell_eval(F: EllFunction, t1: complex, t2: complex) -> complex:
    """Evaluate at a lattice point (t1, t2) with Im(t1/t2) > 0."""
    if t2 == 0:
        raise ValidationError("t2 must be nonzero")
    return ell_eval_tau(F, t1 / t2)


def ell_equal(F1, F2) -> bool:
    """Exact comparison of normal forms (functions or classes)."""
    if isinstance(F1, EllFunction) and isinstance(F2, EllFunction):
        return F1 == F2
    if isinstance(F1, EllClass) and isinstance(F2, EllClass):
        return class_equal(F1, F2)
    raise ValidationError("ell_equal compares two functions or two classes")


# ---------------------------------------------------------------------------
# classes over all commuting pairs


@dataclass
class EllClass:
    """A family of pointwise functions indexed by all commuting pairs."""

    group: FiniteGroup
    gset: GSet
    twist: Cochain3 | None
    components: dict[tuple[int, int], dict[int, EllFunction]] = field(default_factory=dict)
    weight: int = 0

    def __post_init__(self):
        pairs = set(commuting_pairs(self.group))
        cleaned = {}
        for pair, comp in self.components.items():
            pair = (int(pair[0]), int(pair[1]))
            if pair not in pairs:
                raise ValidationError(f"{pair} is not a commuting pair")
            fixed = set(self.gset.fixed(list(pair)))
            kept = {}
            for x, fn in comp.items():
                if x not in fixed:
                    raise ValidationError(f"point {x} is not fixed by the pair {pair}")
                if not fn.is_zero():
                    kept[int(x)] = fn
            if kept:
                cleaned[pair] = kept
        self.components = cleaned

    def component(self, pair: tuple[int, int]) -> dict[int, EllFunction]:
        return self.components.get(tuple(pair), {})

    def value(self, pair: tuple[int, int], x: int) -> EllFunction:
        return self.component(pair).get(x, EllFunction.zero())

    def to_json(self) -> dict:
        return {
            f"({g},{h})": {str(x): fn.to_json() for x, fn in sorted(comp.items())}
            for (g, h), comp in sorted(self.components.items())
        }


def class_equal(F1: EllClass, F2: EllClass) -> bool:
    if F1.group is not F2.group:
        return False
    return F1.components == F2.components


def constant_class(G: FiniteGroup, X: GSet, value: Cyclotomic | int = 1) -> EllClass:
    comps = {}
    for pair in commuting_pairs(G):
        comps[pair] = {x: EllFunction.constant(value) for x in X.fixed(list(pair))}
    return EllClass(group=G, gset=X, twist=None, components=comps)


def class_sl2_act(A: SL2Matrix, F: EllClass) -> EllClass:
    """(A . F) at a pair p is the A-transform of F at p . A^-1.

    F is a fixed point exactly when every component satisfies the relabeling
    identity F_{p.A}(t.A) = F_p(t); the fixed-point sets of p and p.A agree.
    """
    Ainv = A.inverse()
    comps = {}
    for pair in commuting_pairs(F.group):
        src = sl2_act_pair(F.group, Ainv, pair)
        comp = F.component(src)
        if comp:
            comps[pair] = {x: ell_sl2_act(A, fn) for x, fn in comp.items()}
    return EllClass(group=F.group, gset=F.gset, twist=F.twist, components=comps)


def class_group_act(k: int, F: EllClass) -> EllClass:
    """Right action of a group element, with the six-term twist scalar.

    The component at (g, h) moves to the component at (k^-1 g k, k^-1 h k)
    composed with x -> x.k, times e^(2 pi i gro(alpha, g, h)(k)) when twisted.
    """
    G = F.group
    X = F.gset
    comps: dict[tuple[int, int], dict[int, EllFunction]] = {}
    for pair, comp in F.components.items():
        dest = conj_pair(G, pair, k)
        scalar = None
        if F.twist is not None:
            s = gro_value(F.twist, pair[0], pair[1], k)
            if s != 0:
                scalar = Cyclotomic.from_qz(s)
        moved = {}
        for x, fn in comp.items():
            moved[X.act(x, k)] = fn if scalar is None else fn.scale(scalar)
        comps[dest] = moved
    return EllClass(group=G, gset=X, twist=F.twist, components=comps)


def group_act_defect(alpha: Cochain3, pair: tuple[int, int], k1: int, k2: int) -> Fraction:
    """Scalar defect of acting by k1 then k2 against acting by k1 k2."""
    G = alpha.group
    moved = conj_pair(G, pair, k1)
    return qz(
        gro_value(alpha, pair[0], pair[1], k1)
        + gro_value(alpha, moved[0], moved[1], k2)
        - gro_value(alpha, pair[0], pair[1], G.mul(k1, k2))
    )


# ---------------------------------------------------------------------------
# invariant ranks over a point


def invariant_rank_pt(G: FiniteGroup, alpha: Cochain3 | None = None
                      ) -> tuple[list[tuple[PairOrbit, int]], int]:
    """Rank contribution of each conjugation orbit of commuting pairs.

    Over a point with weight zero an orbit contributes one free generator
    exactly when the six-term character vanishes identically on the
    simultaneous centralizer; triviality is asserted to be constant across
    the orbit.
    """
    orbits = pair_orbits(G, "conjugation")
    out = []
    total = 0
    for orbit in orbits:
        decisions = set()
        for member in orbit.members:
            if alpha is None:
                decisions.add(True)
                continue
            cent = centralizer(G, [member[0], member[1]])
            decisions.add(all(
                gro_value(alpha, member[0], member[1], h) == 0 for h in cent
            ))
        if len(decisions) != 1:
            raise ValidationError(
                f"orbit of {orbit.representative}: twist triviality varies across members"
            )
        rank = 1 if decisions.pop() else 0
        total += rank
        out.append((orbit, rank))
    return out, total
