"""Exact character theory: Dixon tables, central extensions, projective
characters, and the graded irreducible data of the extended-centralizer
sectors (pairs of an irreducible and a rational q-degree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .cochains import Cochain2, check_cocycle2, check_normalized2, qz, value_order
from .cyclotomic import Cyclotomic
from .errors import InternalDefectError, ValidationError
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    centralizer,
    centralizer_subgroup,
    conjugacy_classes,
    element_order,
    exponent,
    full_subgroup,
)
from .modlinalg import (
    inv_mod,
    is_prime,
    nullspace_mod,
    eigenvalues_mod,
    primitive_root,
    rref_mod,
    sqrt_mod,
)

MAX_TABLE_ORDER = 500
PRIME_BOUND = 1 << 20
FULL_ASSOC_RECHECK_ORDER = 200


# ---------------------------------------------------------------------------
# character tables


@dataclass(frozen=True)
class CharacterTable:
    group: FiniteGroup
    classes: tuple[tuple[int, tuple[int, ...]], ...]
    class_of: tuple[int, ...]
    rows: tuple[tuple[Cyclotomic, ...], ...]
    degrees: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def value(self, row: int, g: int) -> Cyclotomic:
        return self.rows[row][self.class_of[g]]

    def inner_product(self, i: int, j: int) -> Fraction:
        """Exact <chi_i, chi_j>; raises if the result is not rational."""
        total = Cyclotomic.zero()
        for c, (_, members) in enumerate(self.classes):
            total = total + self.rows[i][c] * self.rows[j][c].conjugate() * len(members)
        total = total / self.group.order
        if not total.is_rational():
            raise InternalDefectError("character inner product is not rational")
        return total.rational_value()

    def to_json(self) -> dict:
        return {
            "classes": [[rep, list(members)] for rep, members in self.classes],
            "rows": [
                {"degree": d, "values": [v.to_json() for v in row]}
                for d, row in zip(self.degrees, self.rows)
            ],
        }


def _dixon_prime(order: int, expo: int) -> int:
    p = expo + 1
    while True:
        if p * p > 4 * order and is_prime(p):
            return p
        p += expo
        if p > PRIME_BOUND:
            raise ValidationError(
                f"no prime p = 1 mod {expo} with p > 2*sqrt({order}) below {PRIME_BOUND}"
            )


def _class_sum_matrix(G: FiniteGroup, classes, class_of, i: int) -> np.ndarray:
    """Matrix A_i with (A_i)[j, l] = #{(x, y) in C_i x C_j : x y = rep_l}."""
    k = len(classes)
    A = np.zeros((k, k), dtype=np.int64)
    for x in classes[i][1]:
        xinv = G.inv(x)
        for l in range(k):
            y = G.mul(xinv, classes[l][0])
            A[class_of[y], l] += 1
    return A


def character_table(G: FiniteGroup) -> CharacterTable:
    """Complete exact character table by Dixon's modular method.

    Class-sum matrices are simultaneously diagonalized over F_p for a prime
    p = 1 mod exponent(G), then character values are lifted to cyclotomic
    integers through eigenvalue multiplicities of each element's powers.
    """
    if G.order > MAX_TABLE_ORDER:
        raise ValidationError(f"character table capped at order {MAX_TABLE_ORDER}")
    classes = tuple(conjugacy_classes(G))
    k = len(classes)
    class_of = [0] * G.order
    for ci, (_, members) in enumerate(classes):
        for m in members:
            class_of[m] = ci
    id_class = class_of[G.identity]
    expo = exponent(G)
    p = _dixon_prime(G.order, expo)

    mats = {}

    def mat(i: int) -> np.ndarray:
        if i not in mats:
            mats[i] = _class_sum_matrix(G, classes, class_of, i)
        return mats[i]

    # split the column space into the k common one-dimensional eigenspaces
    spaces = [np.eye(k, dtype=np.int64)]
    for i in range(k):
        if all(B.shape[1] == 1 for B in spaces):
            break
        if i == id_class:
            continue
        A = mat(i) % p
        new_spaces = []
        for B in spaces:
            r = B.shape[1]
            if r == 1:
                new_spaces.append(B)
                continue
            # normalize so that B restricted to pivot rows is the identity
            R_ech, pivots = rref_mod(B.T, p)
            B = R_ech.T
            AB = (A @ B) % p
            R = AB[pivots, :]
            for lam in sorted(eigenvalues_mod(R, p)):
                null_rows = nullspace_mod((R - lam * np.eye(r, dtype=np.int64)) % p, p)
                if null_rows.shape[0] == 0:
                    continue
                new_spaces.append((B @ null_rows.T) % p)
        spaces = new_spaces
    if not all(B.shape[1] == 1 for B in spaces) or len(spaces) != k:
        raise InternalDefectError("class-sum matrices failed to separate eigenspaces")

    size = [len(members) for _, members in classes]
    inv_class = [class_of[G.inv(rep)] for rep, _ in classes]
    w = primitive_root(p)
    z_e = pow(w, (p - 1) // expo, p)

    # power map: class of rep_j^s
    reps = [rep for rep, _ in classes]
    rows_out = []
    for B in spaces:
        v = [int(x) % p for x in B[:, 0]]
        if v[id_class] == 0:
            raise InternalDefectError("eigenvector vanishes at the identity class")
        scale = inv_mod(v[id_class], p)
        omega = [(x * scale) % p for x in v]
        dot = 0
        for l in range(k):
            dot = (dot + omega[l] * omega[inv_class[l]] * inv_mod(size[l], p)) % p
        d_sq = (G.order * inv_mod(dot, p)) % p
        d_mod = sqrt_mod(d_sq, p)
        if d_mod is None:
            raise InternalDefectError("character degree is not a square mod p")
        d = min(d_mod, p - d_mod)
        chi_mod = [(d * omega[l] * inv_mod(size[l], p)) % p for l in range(k)]

        values = []
        for j in range(k):
            M = element_order(G, reps[j])
            z_M = pow(z_e, expo // M, p)
            z_M_inv = inv_mod(z_M, p)
            powers = []
            x = G.identity
            for _ in range(M):
                powers.append(chi_mod[class_of[x]])
                x = G.mul(x, reps[j])
            inv_M = inv_mod(M, p)
            value = Cyclotomic.zero()
            for t in range(M):
                acc = 0
                zpow = 1
                step = pow(z_M_inv, t, p)
                for s in range(M):
                    acc = (acc + powers[s] * zpow) % p
                    zpow = (zpow * step) % p
                mult = (acc * inv_M) % p
                if 2 * mult >= p:
                    raise InternalDefectError("eigenvalue multiplicity failed to lift")
                if mult:
                    value = value + Cyclotomic.root(M, t) * mult
            values.append(value)
        rows_out.append((d, tuple(values)))

    rows_out.sort(key=lambda r: (r[0], tuple(v.sort_key() for v in r[1])))
    degrees = tuple(r[0] for r in rows_out)
    if sum(d * d for d in degrees) != G.order:
        raise InternalDefectError("degree squares do not sum to the group order")
    return CharacterTable(
        group=G,
        classes=classes,
        class_of=tuple(class_of),
        rows=tuple(r[1] for r in rows_out),
        degrees=degrees,
    )


# ---------------------------------------------------------------------------
# central extensions


@dataclass
class CentralExtension:
    """The extension of H by Z/n attached to a normalized 2-cocycle theta.

    Elements are pairs (a, h) with a in (1/n)Z/Z encoded as an integer
    numerator 0..n-1 and h an element of the base; the element index is
    a_idx * |H| + h.  Multiplication: (a,h)(b,k) = (a+b+theta(h,k), hk).
    """

    base: FiniteGroup
    cocycle: Cochain2
    n: int
    _total: FiniteGroup | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return self.n * self.base.order

    def encode(self, a_num: int, h: int) -> int:
        return (a_num % self.n) * self.base.order + h

    def decode(self, idx: int) -> tuple[int, int]:
        return divmod(idx, self.base.order)

    def a_value(self, idx: int) -> Fraction:
        return Fraction(self.decode(idx)[0], self.n)

    def mul(self, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        a, h = x
        b, k = y
        t = self.cocycle.value(h, k)
        t_num = t.numerator * (self.n // t.denominator)
        return ((a + b + t_num) % self.n, self.base.mul(h, k))

    def section(self, h: int) -> int:
        """The fixed set-theoretic lift h -> (0, h)."""
        return self.encode(0, h)

    @property
    def total(self) -> FiniteGroup:
        if self._total is None:
            H = self.base
            n, m = self.n, H.order
            theta_num = np.zeros((m, m), dtype=np.int64)
            for (h, k), v in self.cocycle.values.items():
                theta_num[h, k] = v.numerator * (n // v.denominator)
            table = np.zeros((n * m, n * m), dtype=np.int64)
            for a in range(n):
                for h in range(m):
                    blocks = (a + np.arange(n)[:, None, None] + theta_num[h][None, None, :]) % n
                    # blocks[b, 0, k]: central part of (a,h)(b,k)
                    row = blocks.reshape(n, m) * m + H.table[h][None, :]
                    table[a * m + h] = row.reshape(-1)
            labels = [
                f"({a}/{n},{H.label(h)})" for a in range(n) for h in range(m)
            ]
            total = FiniteGroup(
                table,
                labels=labels,
                name=f"{H.name}^theta",
                check=n * m <= FULL_ASSOC_RECHECK_ORDER,
            )
            if n * m > FULL_ASSOC_RECHECK_ORDER:
                # associativity of the table is equivalent to the verified
                # 2-cocycle condition; re-check that instead of the m^3 scan
                ok, witness = check_cocycle2(self.cocycle)
                if not ok:
                    raise InternalDefectError(f"cocycle condition fails at {witness}")
            self._total = total
        return self._total

    @property
    def projection(self) -> GroupHom:
        return GroupHom(
            self.total, self.base, tuple(idx % self.base.order for idx in range(self.order))
        )

    def central_injection(self) -> tuple[int, ...]:
        """Indices of the central image of Z/n: a -> (a, e)."""
        return tuple(self.encode(a, self.base.identity) for a in range(self.n))


def central_extension(H: FiniteGroup, theta: Cochain2) -> CentralExtension:
    if theta.carrier.group is not H:
        raise ValidationError("cocycle carrier does not match the base group")
    ok, witness = check_cocycle2(theta)
    if not ok:
        raise ValidationError(f"not a 2-cocycle: fails at {witness}")
    if not check_normalized2(theta):
        raise ValidationError("2-cocycle is not normalized")
    return CentralExtension(base=H, cocycle=theta, n=value_order(theta))


def extension_element_order(E: CentralExtension, a: Fraction | int, h: int) -> int:
    """Order of (a, h) in the total group, computed by the cocycle walk."""
    a = qz(Fraction(a))
    if a.denominator > 1 and E.n % a.denominator != 0:
        raise ValidationError(f"central part {a} is not a multiple of 1/{E.n}")
    start = (a.numerator * (E.n // a.denominator), h)
    cur = start
    k = 1
    ident = (0, E.base.identity)
    while cur != ident:
        cur = E.mul(cur, start)
        k += 1
    return k


def theta_power_sum(theta: Cochain2, g: int, m: int) -> Fraction:
    """theta(g,g) + theta(g,g^2) + ... + theta(g,g^(m-1)) in Q/Z."""
    H = theta.carrier.group
    total = Fraction(0)
    x = g
    for _ in range(max(0, m - 1)):
        total += theta.value(g, x)
        x = H.mul(x, g)
    return qz(total)


# ---------------------------------------------------------------------------
# projective characters


@dataclass(frozen=True)
class ProjectiveCharacter:
    """A row of the extension table with the standard central character.

    ``lift_values[h]`` is the value at the section lift (0, h); values at a
    general (a, h) follow from the central character as e^(2 pi i a) times it.
    """

    extension: CentralExtension
    degree: int
    lift_values: tuple[Cyclotomic, ...]

    def value_lift(self, h: int) -> Cyclotomic:
        return self.lift_values[h]

    def value(self, a_num: int, h: int) -> Cyclotomic:
        return Cyclotomic.from_qz(Fraction(a_num % self.extension.n, self.extension.n)) * self.lift_values[h]


def projective_irreps(H: FiniteGroup, theta: Cochain2) -> list[ProjectiveCharacter]:
    """Irreducible theta-projective characters of H via the Z/n extension.

    Exactly the rows of the extension's table whose restriction to the
    central Z/n is the standard character (the generator 1/n acts by zeta_n).
    """
    E = central_extension(H, theta)
    tbl = character_table(E.total)
    out = []
    zeta = Cyclotomic.root(E.n, 1) if E.n > 1 else Cyclotomic.one()
    c1 = E.encode(1 % E.n, H.identity)
    for r in range(len(tbl.rows)):
        deg = tbl.degrees[r]
        if tbl.value(r, c1) == zeta * deg:
            lift_values = tuple(tbl.value(r, E.section(h)) for h in H.elements())
            out.append(ProjectiveCharacter(extension=E, degree=deg, lift_values=lift_values))
    total = sum(pc.degree ** 2 for pc in out)
    if total != H.order:
        raise InternalDefectError(
            f"projective character degrees sum to {total}, expected {H.order}"
        )
    return out


# ---------------------------------------------------------------------------
# graded sector bases


@dataclass(frozen=True)
class LambdaIrrep:
    """An irreducible sector generator: a character and its rational q-degree."""

    kind: str                     # "ordinary" | "projective"
    degree: int
    lift_values: tuple[Cyclotomic, ...]   # indexed by centralizer-local element
    x: Fraction                   # fractional degree in [0, 1)
    sigma_scalar: Cyclotomic      # chi at (the lift of) the distinguished element


@dataclass(frozen=True)
class GradedRepModule:
    """The free graded module of sector irreducibles for one element g.

    ``cent`` is the centralizer of g inside the ambient group; characters are
    tabulated on it (or on its theta-extension in the twisted case).
    """

    g: int
    cent: Subgroup
    twist: Cochain2 | None
    extension: CentralExtension | None
    basis: tuple[LambdaIrrep, ...]
    N: int


def _scalar_degree(value: Cyclotomic, degree: int, N: int, what: str) -> Fraction:
    """Solve value = degree * e^(2 pi i x) with x = j/N; exact match required."""
    for j in range(N):
        if value == Cyclotomic.root(N, j) * degree:
            return Fraction(j, N)
    raise InternalDefectError(f"{what} does not act by a degree-scaled root of unity")


def lambda_basis(G: FiniteGroup, g: int, theta: Cochain2 | None = None) -> GradedRepModule:
    """Basis of the g-sector: irreducibles of C_G(g) with fractional q-degrees.

    Untwisted, the distinguished central element is g itself and degrees have
    denominator dividing ord(g); twisted by a normalized 2-cocycle on C_G(g),
    irreducibles are theta-projective and the distinguished element is the
    lift (0, g), whose order in the extension bounds the denominators.
    """
    cent_elems = centralizer(G, [g])
    if theta is not None:
        if theta.carrier.parent is not G or tuple(theta.carrier.elements) != cent_elems:
            raise ValidationError("twist carrier is not the centralizer of g in G")
        cent = theta.carrier
    elif cent_elems == tuple(G.elements()):
        cent = full_subgroup(G)
    else:
        cent = centralizer_subgroup(G, [g])
    g_loc = cent.to_local(g)
    if theta is None:
        tbl = character_table(cent.group)
        N = element_order(cent.group, g_loc)
        basis = []
        for r in range(len(tbl.rows)):
            deg = tbl.degrees[r]
            scalar = tbl.value(r, g_loc)
            x = _scalar_degree(scalar, deg, N, f"central element {g}")
            lift_values = tuple(tbl.value(r, h) for h in cent.group.elements())
            basis.append(
                LambdaIrrep(kind="ordinary", degree=deg, lift_values=lift_values,
                            x=x, sigma_scalar=scalar)
            )
        return GradedRepModule(g=g, cent=cent, twist=None, extension=None,
                               basis=tuple(basis), N=N)

    projs = projective_irreps(cent.group, theta)
    E = projs[0].extension if projs else central_extension(cent.group, theta)
    N = extension_element_order(E, 0, g_loc)
    basis = []
    for pc in projs:
        scalar = pc.value_lift(g_loc)
        x = _scalar_degree(scalar, pc.degree, N, f"lift (0,{g})")
        basis.append(
            LambdaIrrep(kind="projective", degree=pc.degree, lift_values=pc.lift_values,
                        x=x, sigma_scalar=scalar)
        )
    return GradedRepModule(g=g, cent=cent, twist=theta, extension=E,
                           basis=tuple(basis), N=N)


# ---------------------------------------------------------------------------
# character helpers shared by the sector pipelines


def char_value_at(module: GradedRepModule, irrep: LambdaIrrep,
                  a: Fraction, h_local: int) -> Cyclotomic:
    """chi at the circle-extension element (a, h): e^(2 pi i a) chi(0, h).

    The standard central character extends chi from the finite Z/n lifts to
    any rational central coordinate.  Untwisted modules require a = 0.
    """
    a = qz(a)
    if module.twist is None:
        if a != 0:
            raise ValidationError("untwisted sector has no central coordinate")
        return irrep.lift_values[h_local]
    return Cyclotomic.from_qz(a) * irrep.lift_values[h_local]


def _cyclic_powers(module: GradedRepModule, a: Fraction, h_local: int) -> list[tuple[Fraction, int]]:
    """(a, h)^s for s = 0 .. M-1 in the circle extension over the sector group."""
    H = module.cent.group
    theta = module.twist
    if theta is None and qz(a) != 0:
        raise ValidationError("untwisted sector has no central coordinate")
    a = qz(a)
    denom_bound = a.denominator * (value_order(theta) if theta is not None else 1)
    ident = (Fraction(0), H.identity)
    powers = [ident]
    cur = (a, h_local)
    while cur != ident:
        powers.append(cur)
        b, k = cur
        t = theta.value(k, h_local) if theta is not None else Fraction(0)
        cur = (qz(b + a + t), H.mul(k, h_local))
        if len(powers) > H.order * denom_bound * 4:
            raise InternalDefectError("cyclic walk in the extension failed to close")
    return powers


def eigen_multiplicities(module: GradedRepModule, irrep: LambdaIrrep,
                         a: Fraction, h_local: int) -> list[tuple[int, int, int]]:
    """Eigenvalue decomposition of the element (a, h) acting in the irrep.

    Returns triples (M, t, mult): the eigenvalue zeta_M^t occurs with the
    stated multiplicity.  Multiplicities come from exact character inner
    products over the cyclic group generated by the element; they must be
    non-negative integers summing to the degree.
    """
    elems = _cyclic_powers(module, a, h_local)
    order_M = len(elems)
    powers = [char_value_at(module, irrep, b, k) if module.twist is not None
              else irrep.lift_values[k]
              for b, k in elems]
    out = []
    total = 0
    for t in range(order_M):
        acc = Cyclotomic.zero()
        for s in range(order_M):
            acc = acc + powers[s] * Cyclotomic.root(order_M, (-t * s) % order_M)
        acc = acc / order_M
        if not acc.is_rational():
            raise InternalDefectError("eigenvalue multiplicity is not rational")
        mult = acc.rational_value()
        if mult.denominator != 1 or mult < 0:
            raise InternalDefectError(f"eigenvalue multiplicity {mult} is not a natural number")
        if mult:
            out.append((order_M, t, int(mult)))
            total += int(mult)
    if total != irrep.degree:
        raise InternalDefectError("eigenvalue multiplicities do not sum to the degree")
    return out
