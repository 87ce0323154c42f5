"""Finite G-sets and (twisted) quasi-elliptic classes.

A class is an integer combination of basis elements (sigma, orbit,
irreducible, q-power): one sector per conjugacy representative sigma, one
block per orbit of the centralizer on the sigma-fixed points, one generator
per graded irreducible of the orbit stabilizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .cochains import (
    Cochain2,
    Cochain3,
    gro_value,
    pullback_cochain3,
    qz,
    restrict_cochain2,
    transgress,
)
from .cyclotomic import Cyclotomic
from .errors import InternalDefectError, ValidationError
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    centralizer_subgroup,
    conjugacy_classes,
    full_subgroup,
    subgroup,
)
from .reps import GradedRepModule, char_value_at, lambda_basis


# ---------------------------------------------------------------------------
# finite G-sets


class GSet:
    """A finite right G-set: action[x, g] is the point x . g."""

    __slots__ = ("group", "action", "name")

    def __init__(self, group: FiniteGroup, action: Sequence[Sequence[int]] | np.ndarray,
                 name: str | None = None, check: bool = True):
        arr = np.asarray(action, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != group.order:
            raise ValidationError(
                f"action table must be size x {group.order}, got shape {arr.shape}"
            )
        size = arr.shape[0]
        if size and (arr.min() < 0 or arr.max() >= size):
            raise ValidationError("action entries out of range")
        if check and size:
            if not np.array_equal(arr[:, group.identity], np.arange(size)):
                raise ValidationError("identity does not act trivially")
            for g in group.elements():
                if not np.array_equal(arr[arr[:, g]], arr[:, group.table[g]]):
                    raise ValidationError(f"action is not compatible at element {g}")
        arr.setflags(write=False)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "action", arr)
        object.__setattr__(self, "name", name or f"X{size}")

    def __setattr__(self, key, value):
        raise AttributeError("GSet is immutable")

    @property
    def size(self) -> int:
        return int(self.action.shape[0])

    def act(self, x: int, g: int) -> int:
        return int(self.action[x, g])

    def fixed(self, elems: Sequence[int]) -> tuple[int, ...]:
        mask = np.ones(self.size, dtype=bool)
        for g in elems:
            mask &= self.action[:, g] == np.arange(self.size)
        return tuple(int(x) for x in np.nonzero(mask)[0])

    def __repr__(self) -> str:
        return f"GSet({self.name}, size={self.size}, group={self.group.name})"


def point(G: FiniteGroup) -> GSet:
    return GSet(G, [[0] * G.order], name="pt", check=False)


def free_translation(G: FiniteGroup) -> GSet:
    """G acting on itself by right translation."""
    return GSet(G, G.table, name=f"{G.name}/free", check=False)


def trivial_gset(G: FiniteGroup, size: int) -> GSet:
    return GSet(G, np.tile(np.arange(size)[:, None], (1, G.order)), name=f"triv{size}", check=False)


def disjoint_union(X: GSet, Y: GSet) -> GSet:
    if X.group is not Y.group:
        raise ValidationError("disjoint union needs a common group")
    top = np.concatenate([X.action, Y.action + X.size], axis=0)
    return GSet(X.group, top, name=f"{X.name}+{Y.name}", check=False)


def gset_from_json(doc: Mapping, G: FiniteGroup) -> GSet:
    return GSet(G, doc["action"], name=doc.get("name"))


def gset_to_json(X: GSet) -> dict:
    return {"size": X.size, "action": X.action.tolist()}


@dataclass(frozen=True)
class FixedSet:
    """A fixed-point set with the induced action of the centralizer."""

    points: tuple[int, ...]
    cent: Subgroup
    gset: GSet


def fixed_points(X: GSet, elems: Sequence[int]) -> FixedSet:
    """The sub-G-set fixed by all listed elements, as a centralizer set."""
    cent = centralizer_subgroup(X.group, elems)
    pts = X.fixed(elems)
    index = {x: i for i, x in enumerate(pts)}
    action = np.zeros((len(pts), cent.group.order), dtype=np.int64)
    for i, x in enumerate(pts):
        for j, g in enumerate(cent.elements):
            action[i, j] = index[X.act(x, g)]
    return FixedSet(points=pts, cent=cent, gset=GSet(cent.group, action, check=False))


# ---------------------------------------------------------------------------
# sector structure


@dataclass(frozen=True)
class OrbitData:
    rep: int                      # X-point index
    points: tuple[int, ...]
    transversal: dict[int, int]   # X-point -> centralizer-local element k with rep.k = point
    stab: Subgroup                # subgroup of the centralizer's local group
    module: GradedRepModule       # graded irreducibles of the stabilizer sector


@dataclass(frozen=True)
class SectorData:
    sigma: int
    cent: Subgroup                # C_G(sigma)
    theta: Cochain2 | None        # transgressed twist on cent.group
    fixed: tuple[int, ...]        # X^sigma
    orbits: tuple[OrbitData, ...]

    def orbit_of(self, x: int) -> OrbitData:
        for orb in self.orbits:
            if x in orb.transversal:
                return orb
        raise ValidationError(f"point {x} is not sigma-fixed in this sector")

    def sector_N(self) -> int:
        """Order of the distinguished lift (0, sigma); orbit-independent."""
        if self.orbits:
            return self.orbits[0].module.N
        from .reps import theta_power_sum
        C = self.cent.group
        s_loc = self.cent.to_local(self.sigma)
        m = 1
        x = s_loc
        while True:
            if x == C.identity and (self.theta is None
                                    or theta_power_sum(self.theta, s_loc, m) == 0):
                return m
            x = C.mul(x, s_loc)
            m += 1


@dataclass(frozen=True)
class QEllStructure:
    """Everything the sector decomposition of (G, X, alpha) determines."""

    group: FiniteGroup
    gset: GSet
    twist: Cochain3 | None
    sectors: dict[int, SectorData]          # keyed by conjugacy representative
    class_reps: tuple[int, ...]

    def basis(self) -> list["QEllBasisElement"]:
        out = []
        for sigma in self.class_reps:
            sector = self.sectors[sigma]
            for orb in sector.orbits:
                for i, irr in enumerate(orb.module.basis):
                    out.append(QEllBasisElement(sigma, orb.rep, i, 0))
        return out


@dataclass(frozen=True, order=True)
class QEllBasisElement:
    sigma: int
    orbit: int
    irrep: int
    q_shift: int


BasisKey = QEllBasisElement


def build_structure(G: FiniteGroup, X: GSet, alpha: Cochain3 | None = None) -> QEllStructure:
    if X.group is not G:
        raise ValidationError("G-set does not belong to the given group")
    if alpha is not None and alpha.group is not G:
        raise ValidationError("twist does not live on the given group")
    sectors: dict[int, SectorData] = {}
    reps = tuple(rep for rep, _ in conjugacy_classes(G))
    for sigma in reps:
        cent = centralizer_subgroup(G, [sigma])
        theta = transgress(alpha, sigma, carrier=cent) if alpha is not None else None
        fixed = X.fixed([sigma])
        remaining = set(fixed)
        orbits = []
        for x0 in fixed:
            if x0 not in remaining:
                continue
            transversal: dict[int, int] = {}
            for k_loc, k in enumerate(cent.elements):
                y = X.act(x0, k)
                if y not in transversal:
                    transversal[y] = k_loc
            pts = tuple(sorted(transversal))
            remaining -= set(pts)
            stab_locals = [k_loc for k_loc, k in enumerate(cent.elements) if X.act(x0, k) == x0]
            stab = subgroup(cent.group, stab_locals, name=f"stab({x0})")
            sigma_stab = stab.to_local(cent.to_local(sigma))
            theta_stab = restrict_cochain2(theta, stab) if theta is not None else None
            module = lambda_basis(stab.group, sigma_stab, theta_stab)
            orbits.append(OrbitData(rep=x0, points=pts, transversal=transversal,
                                    stab=stab, module=module))
        sectors[sigma] = SectorData(sigma=sigma, cent=cent, theta=theta,
                                    fixed=fixed, orbits=tuple(orbits))
    return QEllStructure(group=G, gset=X, twist=alpha, sectors=sectors, class_reps=reps)


def qell_basis(G: FiniteGroup, X: GSet, alpha: Cochain3 | None = None) -> list[QEllBasisElement]:
    """The q-degree-zero generators of the (twisted) quasi-elliptic module."""
    return build_structure(G, X, alpha).basis()


def rank_report(structure: QEllStructure) -> dict:
    """Per-sector fractional degrees with multiplicities; total rank over Z[q+-]."""
    sectors_out = []
    total = 0
    for sigma in structure.class_reps:
        sector = structure.sectors[sigma]
        degrees: dict[Fraction, int] = {}
        for orb in sector.orbits:
            for irr in orb.module.basis:
                degrees[irr.x] = degrees.get(irr.x, 0) + 1
        count = sum(degrees.values())
        total += count
        sectors_out.append({
            "sigma": sigma,
            "rank": count,
            "degrees": [[str(x), m] for x, m in sorted(degrees.items())],
        })
    return {"total": total, "sectors": sectors_out}


def qell_rank_report(G: FiniteGroup, X: GSet, alpha: Cochain3 | None = None) -> dict:
    return rank_report(build_structure(G, X, alpha))


# ---------------------------------------------------------------------------
# classes


@dataclass
class QEllClass:
    structure: QEllStructure
    terms: dict[QEllBasisElement, int] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for key, coeff in self.terms.items():
            if coeff == 0:
                continue
            self._check_key(key)
            cleaned[key] = int(coeff)
        self.terms = cleaned

    def _check_key(self, key: QEllBasisElement) -> None:
        sector = self.structure.sectors.get(key.sigma)
        if sector is None:
            raise ValidationError(f"sigma {key.sigma} is not a conjugacy representative")
        orb = next((o for o in sector.orbits if o.rep == key.orbit), None)
        if orb is None:
            raise ValidationError(f"no orbit with representative {key.orbit} in sector {key.sigma}")
        if not 0 <= key.irrep < len(orb.module.basis):
            raise ValidationError(f"irrep index {key.irrep} out of range")

    def __add__(self, other: "QEllClass") -> "QEllClass":
        if other.structure is not self.structure:
            raise ValidationError("classes live over different structures")
        keys = set(self.terms) | set(other.terms)
        return QEllClass(self.structure,
                         {k: self.terms.get(k, 0) + other.terms.get(k, 0) for k in keys})

    def scale(self, m: int) -> "QEllClass":
        return QEllClass(self.structure, {k: m * c for k, c in self.terms.items()})

    def to_json(self) -> list:
        return [
            {"sigma": k.sigma, "orbit": k.orbit, "irrep": k.irrep,
             "q_shift": k.q_shift, "coeff": c}
            for k, c in sorted(self.terms.items())
        ]

    @staticmethod
    def from_json(doc: Sequence[Mapping], structure: QEllStructure) -> "QEllClass":
        terms = {}
        for entry in doc:
            key = QEllBasisElement(int(entry["sigma"]), int(entry["orbit"]),
                                   int(entry["irrep"]), int(entry["q_shift"]))
            terms[key] = terms.get(key, 0) + int(entry["coeff"])
        return QEllClass(structure, terms)


def generator_class(structure: QEllStructure, key: QEllBasisElement) -> QEllClass:
    return QEllClass(structure, {key: 1})


def q_multiply(c: QEllClass, k: int) -> QEllClass:
    """Multiply by q^k: shift every term's q-power; invertible."""
    return QEllClass(
        c.structure,
        {QEllBasisElement(t.sigma, t.orbit, t.irrep, t.q_shift + k): m
         for t, m in c.terms.items()},
    )


# ---------------------------------------------------------------------------
# fiber character values (shared by the character pipelines)


def fiber_value(sector: SectorData, orbit: OrbitData, irrep_index: int,
                tau_local: int, x: int) -> Cyclotomic:
    """Character of the lift of tau acting on the fiber over x.

    tau_local is a centralizer-local element fixing x; the fiber over
    x = rep . g is the stabilizer representation conjugated by g, so the
    value is chi at the transported lift, with the 2-cocycle transport
    scalar in the twisted case.
    """
    C = sector.cent.group
    g = orbit.transversal[x]
    irrep = orbit.module.basis[irrep_index]
    u = C.mul(C.mul(g, tau_local), C.inv(g))
    u_stab = orbit.stab.to_local(u)
    if sector.theta is None:
        return irrep.lift_values[u_stab]
    th = sector.theta
    ginv = C.inv(g)
    c_transport = qz(
        th.value(g, tau_local) + th.value(C.mul(g, tau_local), ginv) - th.value(g, ginv)
    )
    return Cyclotomic.from_qz(c_transport) * irrep.lift_values[u_stab]


def fiber_transport_pair(sector: SectorData, orbit: OrbitData,
                         tau_local: int, x: int) -> tuple[Fraction, int]:
    """The transported lift of tau over x, as (central coordinate, stab-local element)."""
    C = sector.cent.group
    g = orbit.transversal[x]
    u = C.mul(C.mul(g, tau_local), C.inv(g))
    u_stab = orbit.stab.to_local(u)
    if sector.theta is None:
        return Fraction(0), u_stab
    th = sector.theta
    ginv = C.inv(g)
    c_transport = qz(
        th.value(g, tau_local) + th.value(C.mul(g, tau_local), ginv) - th.value(g, ginv)
    )
    return c_transport, u_stab


# ---------------------------------------------------------------------------
# functorial restriction


def check_equivariant(f: GroupHom, phi: Sequence[int], X: GSet, Y: GSet) -> None:
    if len(phi) != X.size:
        raise ValidationError("point map has wrong length")
    for x in range(X.size):
        for g in X.group.elements():
            if phi[X.act(x, g)] != Y.act(phi[x], f(g)):
                raise ValidationError(f"map is not equivariant at point {x}, element {g}")


def restrict_class(f: GroupHom, phi: Sequence[int], c: QEllClass, X: GSet | None = None,
                   target: QEllStructure | None = None) -> QEllClass:
    """Pull a class back along a homomorphism f: G -> H and a map X -> Y.

    Sector by sector: the sigma-component restricts along the f(sigma)-sector
    of the source, q-degrees are preserved, and the twist pulls back (the
    transgression of the pullback equals the pullback of the transgression,
    identically for the transgression formula in use; asserted when a target
    structure is supplied).
    """
    src = c.structure
    H, Y = src.group, src.gset
    G = f.domain
    if f.codomain is not H:
        raise ValidationError("class does not live over the codomain of f")
    if target is None:
        if X is None:
            raise ValidationError("restrict_class needs the domain G-set or a target structure")
        pulled = pullback_cochain3(f, src.twist) if src.twist is not None else None
        target = build_structure(G, X, pulled)
    if target.group is not G:
        raise ValidationError("target structure has the wrong group")
    X = target.gset
    check_equivariant(f, phi, X, Y)
    if (src.twist is None) != (target.twist is None):
        raise ValidationError("source and target twists disagree")
    if src.twist is not None and target.twist != pullback_cochain3(f, src.twist):
        raise ValidationError("target twist is not the pullback of the source twist")

    h_class_rep = {}
    for rep, members in conjugacy_classes(H):
        for m in members:
            h_class_rep[m] = rep

    out_terms: dict[QEllBasisElement, int] = {}
    for sigma in target.class_reps:
        t_sector = target.sectors[sigma]
        sigma_h = f(sigma)
        rep_h = h_class_rep[sigma_h]
        conjugator = next(k for k in H.elements() if H.conj(rep_h, k) == sigma_h)
        s_sector = src.sectors[rep_h]
        for t_orb in t_sector.orbits:
            y2 = Y.act(phi[t_orb.rep], H.inv(conjugator))   # lands in Y^{rep_h}
            s_orb = s_sector.orbit_of(y2)
            S = t_orb.stab
            # stabilizer lifts, transported into the canonical source sector
            w0_locs = []
            for v_stab in range(S.group.order):
                v_g = t_sector.cent.to_parent(S.to_parent(v_stab))
                w0 = H.conj(f(v_g), H.inv(conjugator))
                w0_locs.append(s_sector.cent.to_local(w0))
            for key, coeff in c.terms.items():
                if key.sigma != rep_h or key.orbit != s_orb.rep:
                    continue
                chi_vals = []
                for v_stab in range(S.group.order):
                    w0_loc = w0_locs[v_stab]
                    value = fiber_value(s_sector, s_orb, key.irrep, w0_loc, y2)
                    if src.twist is not None:
                        value = value * Cyclotomic.from_qz(gro_value(
                            src.twist, rep_h, s_sector.cent.to_parent(w0_loc), conjugator
                        ))
                    chi_vals.append(value)
                x_deg = s_orb.module.basis[key.irrep].x
                for i, lam in enumerate(t_orb.module.basis):
                    acc = Cyclotomic.zero()
                    for v_stab in range(S.group.order):
                        acc = acc + chi_vals[v_stab] * lam.lift_values[v_stab].conjugate()
                    acc = acc / S.group.order
                    if not acc.is_rational():
                        raise InternalDefectError("restriction multiplicity is not rational")
                    mult = acc.rational_value()
                    if mult.denominator != 1 or mult < 0:
                        raise InternalDefectError(
                            f"restriction multiplicity {mult} is not a natural number"
                        )
                    if mult:
                        if lam.x != x_deg:
                            raise InternalDefectError(
                                "restricted constituent changed its fractional degree"
                            )
                        out_key = QEllBasisElement(sigma, t_orb.rep, i, key.q_shift)
                        out_terms[out_key] = out_terms.get(out_key, 0) + coeff * int(mult)
    return QEllClass(target, out_terms)
