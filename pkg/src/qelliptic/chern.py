"""Untwisted and twisted character pipelines into the elliptic target.

Stages: restriction along the sector covering map (fractional q-degrees
become integer q-weights), the kernel check of that restriction, the
eigenvalue expansion at each commuting pair, and assembly into a family of
q-power functions indexed by all commuting pairs.  The identity embedding of
functions on a finite set plays the role of the classical Chern character,
so the pipeline keeps the four-stage shape while the last stage is a labeled
no-op.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cochains import Cochain3, gro_value, qz, transgress
from .cyclotomic import Cyclotomic
from .errors import InternalDefectError, ValidationError
from .groups import (
    FiniteGroup,
    SL2Matrix,
    Subgroup,
    centralizer,
    centralizer_subgroup,
    conjugacy_classes,
    commuting_pairs,
)
from .devoto import (
    COSET_ID,
    EllClass,
    EllFunction,
    class_sl2_act,
    normalize_coset,
)
from .qell import (
    OrbitData,
    QEllBasisElement,
    QEllClass,
    QEllStructure,
    SectorData,
    fiber_transport_pair,
    fiber_value,
)
from .reps import char_value_at, eigen_multiplicities, theta_power_sum


# ---------------------------------------------------------------------------
# sector restriction along the covering map


@dataclass(frozen=True)
class SectorRep:
    """Integer-q-weight form of a sigma-component after restriction.

    Each entry is (orbit representative, irrep index, weight n, coefficient)
    with n = N * (x + shift): the fractional degree times the order N of the
    distinguished lift, plus N per external q-power.
    """

    sigma: int
    N: int
    entries: tuple[tuple[int, int, int, int], ...]
    sector: SectorData


def restrict_c(structure: QEllStructure, sigma: int,
               terms: dict[QEllBasisElement, int] | None = None) -> SectorRep:
    if sigma not in structure.sectors:
        raise ValidationError(f"{sigma} is not a conjugacy representative")
    sector = structure.sectors[sigma]
    N = sector.sector_N()
    entries = []
    if terms:
        for key, coeff in sorted(terms.items()):
            if key.sigma != sigma or coeff == 0:
                continue
            orb = next(o for o in sector.orbits if o.rep == key.orbit)
            if orb.module.N != N:
                raise InternalDefectError("sector weight denominators disagree across orbits")
            x = orb.module.basis[key.irrep].x
            n_frac = N * (x + key.q_shift)
            if n_frac.denominator != 1:
                raise InternalDefectError(
                    f"weight N*x = {n_frac} is not integral in sector {sigma}"
                )
            entries.append((key.orbit, key.irrep, int(n_frac), coeff))
    return SectorRep(sigma=sigma, N=N, entries=tuple(entries), sector=sector)


# ---------------------------------------------------------------------------
# kernel of the restriction


@dataclass(frozen=True)
class KernelReport:
    sigma: int
    N: int
    elements: tuple[tuple[Fraction, int, Fraction], ...]  # (theta sum, sigma^m, circle part)
    acts_trivially: bool
    fiber_trivial: bool
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.acts_trivially and self.fiber_trivial

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma,
            "N": self.N,
            "elements": [
                {"theta_sum": str(a), "power": m, "circle": str(t)}
                for (a, m, t) in self.elements
            ],
            "acts_trivially": self.acts_trivially,
            "fiber_trivial": self.fiber_trivial,
            "failures": list(self.failures),
        }


def kernel_c(structure: QEllStructure, sigma: int,
             shifts: tuple[int, ...] = (0, 1)) -> KernelReport:
    """Enumerate the kernel of the sigma-restriction and verify its two laws.

    The kernel is the cyclic group of the pairs ((theta(s,s)+...+theta(s,s^(m-1)),
    sigma^m), [-m/N]); each member must act trivially on the fixed-point set,
    and every restricted basis generator must take the value degree * 1 on it.
    """
    sector = structure.sectors[sigma]
    G = structure.group
    X = structure.gset
    C = sector.cent
    sig_loc = C.to_local(sigma)
    N = sector.sector_N()
    failures = []

    elements = []
    for m in range(N):
        s_m = theta_power_sum(sector.theta, sig_loc, m) if sector.theta is not None else Fraction(0)
        elements.append((s_m, G.power(sigma, m), qz(Fraction(-m, N))))

    acts_trivially = True
    for (_, power_elem, _) in elements:
        for x in sector.fixed:
            if X.act(x, power_elem) != x:
                acts_trivially = False
                failures.append(f"sigma^m = {power_elem} moves the fixed point {x}")

    fiber_trivial = True
    for orb in sector.orbits:
        module = orb.module
        sig_stab = orb.stab.to_local(sig_loc)
        for irrep_index, irrep in enumerate(module.basis):
            for shift in shifts:
                n = module.N * (irrep.x + shift)
                assert n.denominator == 1
                n = int(n)
                for m in range(N):
                    s_m, _, circle = elements[m]
                    sm_power_stab = orb.stab.group.power(sig_stab, m)
                    chi = char_value_at(module, irrep,
                                        s_m if module.twist is not None else Fraction(0),
                                        sm_power_stab)
                    if module.twist is None and s_m != 0:
                        raise InternalDefectError("untwisted sector produced a theta sum")
                    value = Cyclotomic.from_qz(qz(Fraction(n, 1) * circle)) * chi
                    if value != Cyclotomic.rational(irrep.degree):
                        fiber_trivial = False
                        failures.append(
                            f"orbit {orb.rep} irrep {irrep_index} shift {shift} m={m}: "
                            f"kernel acts by {value!r}"
                        )
    return KernelReport(sigma=sigma, N=N, elements=tuple(elements),
                        acts_trivially=acts_trivially, fiber_trivial=fiber_trivial,
                        failures=tuple(failures))


# ---------------------------------------------------------------------------
# line characters


@dataclass(frozen=True)
class LineCharacter:
    """The Q/Z character by which the centralizer acts on the twisted line."""

    pair: tuple[int, int]
    values: tuple[tuple[int, Fraction], ...]   # (element of C_G(sigma,tau), value)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.values)

    def is_trivial(self) -> bool:
        return all(v == 0 for _, v in self.values)

    def to_json(self) -> dict:
        return {"pair": list(self.pair),
                "values": {str(h): f"{v.numerator}/{v.denominator}" for h, v in self.values}}


def line_character(alpha: Cochain3 | None, G: FiniteGroup, sigma: int, tau: int,
                   theta_cache: dict | None = None) -> LineCharacter:
    """h -> theta_sigma(h, tau) - theta_sigma(tau, h) on C_G(sigma, tau)."""
    if G.mul(sigma, tau) != G.mul(tau, sigma):
        raise ValidationError(f"pair ({sigma},{tau}) does not commute")
    cent_pair = centralizer(G, [sigma, tau])
    if alpha is None:
        return LineCharacter(pair=(sigma, tau),
                             values=tuple((h, Fraction(0)) for h in cent_pair))
    if theta_cache is not None and sigma in theta_cache:
        theta = theta_cache[sigma]
    else:
        theta = transgress(alpha, sigma)
        if theta_cache is not None:
            theta_cache[sigma] = theta
    loc = theta.carrier.index_map
    t_loc = loc[tau]
    values = []
    for h in cent_pair:
        h_loc = loc[h]
        values.append((h, qz(theta.value(h_loc, t_loc) - theta.value(t_loc, h_loc))))
    return LineCharacter(pair=(sigma, tau), values=tuple(values))


def verify_willerton_line(alpha: Cochain3, sigma: int, tau: int
                          ) -> tuple[bool, tuple[int, Fraction, Fraction] | None]:
    """Check the transgressed line character against the six-term character."""
    G = alpha.group
    line = line_character(alpha, G, sigma, tau)
    for h, v in line.values:
        w = gro_value(alpha, sigma, tau, h)
        if v != w:
            return False, (h, v, w)
    return True, None


# ---------------------------------------------------------------------------
# eigenvalue expansion


@dataclass(frozen=True)
class ASValue:
    """Exact expansion data at one (tau, point): weights, values, eigenvalues."""

    tau: int
    point: int
    coefficients: tuple[tuple[int, Cyclotomic], ...]          # (n, value)
    eigen: tuple[tuple[int, int, tuple[tuple[int, int, int], ...]], ...]
    # per entry: (n, coeff, ((M, t, mult), ...))


@dataclass(frozen=True)
class ASSector:
    sigma: int
    values: tuple[ASValue, ...]
    lines: tuple[LineCharacter, ...]


def atiyah_segal(structure: QEllStructure, srep: SectorRep) -> ASSector:
    """Expand a restricted sector over the centralizer classes.

    For each class representative tau of the centralizer and each point fixed
    by both elements: the exact character value of the tau-lift on the fiber,
    per q-weight, plus its eigenvalue decomposition (multiplicities from exact
    inner products over the cyclic group generated by the lift).
    """
    sector = srep.sector
    C = sector.cent
    X = structure.gset
    values = []
    lines = []
    theta_cache: dict = {}
    for tau_loc, _ in conjugacy_classes(C.group):
        tau = C.to_parent(tau_loc)
        lines.append(line_character(structure.twist, structure.group,
                                    sector.sigma, tau, theta_cache))
        for x in sector.fixed:
            if X.act(x, tau) != x:
                continue
            orb = sector.orbit_of(x)
            coeffs: dict[int, Cyclotomic] = {}
            eigen_entries = []
            for (orep, irrep_index, n, coeff) in srep.entries:
                if orep != orb.rep:
                    continue
                irrep = orb.module.basis[irrep_index]
                value = fiber_value(sector, orb, irrep_index, tau_loc, x)
                coeffs[n] = coeffs.get(n, Cyclotomic.zero()) + value * coeff
                a_c, u_stab = fiber_transport_pair(sector, orb, tau_loc, x)
                eig = eigen_multiplicities(orb.module, irrep, a_c, u_stab)
                recon = Cyclotomic.zero()
                for (M, t, mult) in eig:
                    recon = recon + Cyclotomic.root(M, t) * mult
                if recon != value:
                    raise InternalDefectError(
                        "eigenvalue expansion disagrees with the character value"
                    )
                eigen_entries.append((n, coeff, tuple(eig)))
            values.append(ASValue(
                tau=tau,
                point=x,
                coefficients=tuple(sorted((n, v) for n, v in coeffs.items() if not v.is_zero())),
                eigen=tuple(eigen_entries),
            ))
    return ASSector(sigma=srep.sigma, values=tuple(values), lines=tuple(lines))


# ---------------------------------------------------------------------------
# the assembled character


@dataclass
class ChernResult:
    ell: EllClass
    sectors: dict[int, SectorRep]
    lines: dict[tuple[int, int], LineCharacter] | None

    def to_json(self) -> dict:
        doc = {"class": self.ell.to_json()}
        if self.lines is not None:
            doc["lines"] = {f"({g},{h})": lc.to_json()
                            for (g, h), lc in sorted(self.lines.items())}
        return doc


def _canonical_pair_map(G: FiniteGroup) -> dict[tuple[int, int], tuple[int, int, int]]:
    """pair -> (canonical sigma, canonical tau, least conjugator k).

    The canonical pair of (g, h) is (sigma, k h k^-1) where sigma is the
    class representative of g and k the least element with k^-1 sigma k = g.
    """
    rep_of = {}
    for rep, members in conjugacy_classes(G):
        for m in members:
            rep_of[m] = rep
    out = {}
    for (g, h) in commuting_pairs(G):
        sigma = rep_of[g]
        k = next(k for k in G.elements() if G.conj(sigma, k) == g)
        tau = G.mul(G.mul(k, h), G.inv(k))
        out[(g, h)] = (sigma, tau, k)
    return out


def chern_character(c: QEllClass) -> ChernResult:
    """Assemble the full elliptic-class image of a quasi-elliptic class.

    Components at pairs whose first member is a conjugacy representative are
    computed directly from the restricted sector; the remaining pairs are
    filled through the conjugation action (with the six-term scalar when
    twisted), which the coherence tests show is conjugator-independent.
    """
    structure = c.structure
    G = structure.group
    X = structure.gset
    alpha = structure.twist
    sectors = {sigma: restrict_c(structure, sigma, c.terms)
               for sigma in structure.class_reps}

    components: dict[tuple[int, int], dict[int, EllFunction]] = {}
    for sigma in structure.class_reps:
        sector = structure.sectors[sigma]
        srep = sectors[sigma]
        C = sector.cent
        for tau_loc in C.group.elements():
            tau = C.to_parent(tau_loc)
            comp: dict[int, EllFunction] = {}
            for x in sector.fixed:
                if X.act(x, tau) != x:
                    continue
                orb = sector.orbit_of(x)
                coeffs: dict[int, Cyclotomic] = {}
                for (orep, irrep_index, n, coeff) in srep.entries:
                    if orep != orb.rep:
                        continue
                    value = fiber_value(sector, orb, irrep_index, tau_loc, x)
                    coeffs[n] = coeffs.get(n, Cyclotomic.zero()) + value * coeff
                fn = EllFunction({(COSET_ID, n): v for n, v in coeffs.items()})
                if not fn.is_zero():
                    comp[x] = fn
            if comp:
                components[(sigma, tau)] = comp

    pair_map = _canonical_pair_map(G)
    lines: dict[tuple[int, int], LineCharacter] | None = None
    theta_cache: dict = {}
    for pair, (sigma, tau, k) in pair_map.items():
        if pair[0] == sigma:
            continue
        base = components.get((sigma, tau))
        if not base:
            continue
        scalar = None
        if alpha is not None:
            s = gro_value(alpha, sigma, tau, k)
            if s != 0:
                scalar = Cyclotomic.from_qz(s)
        comp = {}
        for x, fn in base.items():
            comp[X.act(x, k)] = fn if scalar is None else fn.scale(scalar)
        components[pair] = comp

    if alpha is not None:
        lines = {}
        for pair in commuting_pairs(G):
            lines[pair] = line_character(alpha, G, pair[0], pair[1], theta_cache)

    ell = EllClass(group=G, gset=X, twist=alpha, components=components)
    return ChernResult(ell=ell, sectors=sectors, lines=lines)


# ---------------------------------------------------------------------------
# image preservation under the modular group


@dataclass
class ImageReport:
    matrix: SL2Matrix
    ok: bool
    component_mismatches: list
    line_mismatches: list

    def to_json(self) -> dict:
        return {
            "matrix": [[self.matrix.a, self.matrix.b], [self.matrix.c, self.matrix.d]],
            "ok": self.ok,
            "component_mismatches": self.component_mismatches[:5],
            "line_mismatches": self.line_mismatches[:5],
        }


def check_image_preservation(c: QEllClass, A: SL2Matrix) -> ImageReport:
    """Both sides of the closing modular-action identity, independently.

    The left side acts on the assembled class by pair relabeling plus coset
    multiplication.  The right side recomputes every component from scratch:
    the transformed pair by the exponent formula, the fiber value through the
    eigenvalue decomposition route, and the exponent term directly from the
    bottom row of A.  Twisted line characters must also agree across the pair
    relabeling for the image to be preserved.
    """
    structure = c.structure
    G = structure.group
    X = structure.gset
    alpha = structure.twist
    result = chern_character(c)
    lhs = class_sl2_act(A, result.ell)

    B = A.inverse()
    coset = normalize_coset(A.c, A.d)
    pair_map = _canonical_pair_map(G)

    component_mismatches = []
    line_mismatches = []
    for pair in commuting_pairs(G):
        g, h = pair
        # transformed pair (g, h) . A^-1 by the exponent formula
        gp = G.mul(G.power(g, B.d), G.power(h, -B.b))
        hp = G.mul(G.power(g, -B.c), G.power(h, B.a))
        sigma, tau, k = pair_map[(gp, hp)]
        sector = structure.sectors[sigma]
        srep = result.sectors[sigma]
        C = sector.cent
        tau_loc = C.to_local(tau)
        kinv = G.inv(k)
        scalar = Cyclotomic.one()
        if alpha is not None:
            scalar = Cyclotomic.from_qz(gro_value(alpha, sigma, tau, k))
        for x in X.fixed([g, h]):
            y = X.act(x, kinv)
            coeffs: dict[int, Cyclotomic] = {}
            if X.act(y, sigma) == y and X.act(y, tau) == y:
                orb = sector.orbit_of(y)
                for (orep, irrep_index, n, coeff) in srep.entries:
                    if orep != orb.rep:
                        continue
                    irrep = orb.module.basis[irrep_index]
                    a_c, u_stab = fiber_transport_pair(sector, orb, tau_loc, y)
                    eig = eigen_multiplicities(orb.module, irrep, a_c, u_stab)
                    val = Cyclotomic.zero()
                    for (M, t, mult) in eig:
                        val = val + Cyclotomic.root(M, t) * mult
                    coeffs[n] = coeffs.get(n, Cyclotomic.zero()) + val * coeff
            rhs_fn = EllFunction({(coset, n): v * scalar for n, v in coeffs.items()})
            lhs_fn = lhs.value(pair, x)
            if lhs_fn != rhs_fn:
                component_mismatches.append({
                    "pair": list(pair), "point": x,
                    "lhs": lhs_fn.to_json(), "rhs": rhs_fn.to_json(),
                })
        if alpha is not None:
            stable_line = line_character(alpha, G, g, h)
            moved_line = line_character(alpha, G, gp, hp)
            if set(centralizer(G, [g, h])) != set(centralizer(G, [gp, hp])):
                line_mismatches.append({"pair": list(pair), "reason": "centralizer changed"})
            elif stable_line.as_dict() != moved_line.as_dict():
                line_mismatches.append({
                    "pair": list(pair),
                    "lhs": stable_line.to_json(), "rhs": moved_line.to_json(),
                })
    ok = not component_mismatches and not line_mismatches
    return ImageReport(matrix=A, ok=ok,
                       component_mismatches=component_mismatches,
                       line_mismatches=line_mismatches)
