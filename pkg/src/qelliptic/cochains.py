"""Q/Z-valued cochains on finite groups.

Values live additively in Q/Z as exact fractions in [0, 1).  Cocycle and
coboundary checks clear denominators and run as integer arithmetic modulo a
common denominator, which keeps exhaustive scans exact and fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Mapping

import numpy as np

from .errors import InternalDefectError, ValidationError
from .groups import FiniteGroup, GroupHom, Subgroup, centralizer_subgroup, cyclic, full_subgroup


def qz(x: Fraction | int | str) -> Fraction:
    """Normalize a rational to its representative in [0, 1) modulo Z."""
    return Fraction(x) % 1


def qz_str(x: Fraction) -> str:
    x = qz(x)
    return f"{x.numerator}/{x.denominator}"


def _clean(values: Mapping, arity: int) -> dict:
    out = {}
    for key, v in values.items():
        if len(key) != arity:
            raise ValidationError(f"cochain key {key} has arity {len(key)}, expected {arity}")
        v = qz(v)
        if v != 0:
            out[tuple(int(k) for k in key)] = v
    return out


@dataclass
class Cochain3:
    """A total mapping G^3 -> Q/Z, stored sparsely (zero values omitted)."""

    group: FiniteGroup
    values: dict[tuple[int, int, int], Fraction]
    _dense: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = _clean(self.values, 3)
        n = self.group.order
        for key in self.values:
            if any(not 0 <= k < n for k in key):
                raise ValidationError(f"cochain key {key} out of range for order {n}")

    def value(self, g: int, h: int, k: int) -> Fraction:
        return self.values.get((g, h, k), Fraction(0))

    def dense(self) -> tuple[int, np.ndarray]:
        """(common denominator L, int64 array of numerators scaled by L)."""
        if self._dense is None:
            n = self.group.order
            L = lcm(1, *(v.denominator for v in self.values.values())) if self.values else 1
            arr = np.zeros((n, n, n), dtype=np.int64)
            for (g, h, k), v in self.values.items():
                arr[g, h, k] = v.numerator * (L // v.denominator)
            arr.setflags(write=False)
            self._dense = (L, arr)
        return self._dense

    def __add__(self, other: "Cochain3") -> "Cochain3":
        if other.group is not self.group:
            raise ValidationError("cochains live on different groups")
        keys = set(self.values) | set(other.values)
        return Cochain3(self.group, {k: self.value(*k) + other.value(*k) for k in keys})

    def __eq__(self, other) -> bool:
        return isinstance(other, Cochain3) and self.group is other.group and self.values == other.values


@dataclass
class Cochain2:
    """A total mapping carrier^2 -> Q/Z on a group or listed subgroup.

    Keys are local indices into ``carrier.group``.
    """

    carrier: Subgroup
    values: dict[tuple[int, int], Fraction]
    _dense: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = _clean(self.values, 2)
        n = self.carrier.group.order
        for key in self.values:
            if any(not 0 <= k < n for k in key):
                raise ValidationError(f"cochain key {key} out of range for order {n}")

    def value(self, g: int, h: int) -> Fraction:
        return self.values.get((g, h), Fraction(0))

    def dense(self) -> tuple[int, np.ndarray]:
        if self._dense is None:
            n = self.carrier.group.order
            L = lcm(1, *(v.denominator for v in self.values.values())) if self.values else 1
            arr = np.zeros((n, n), dtype=np.int64)
            for (g, h), v in self.values.items():
                arr[g, h] = v.numerator * (L // v.denominator)
            arr.setflags(write=False)
            self._dense = (L, arr)
        return self._dense

    def __add__(self, other: "Cochain2") -> "Cochain2":
        if other.carrier.group is not self.carrier.group:
            raise ValidationError("cochains live on different carriers")
        keys = set(self.values) | set(other.values)
        return Cochain2(self.carrier, {k: self.value(*k) + other.value(*k) for k in keys})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain2)
            and self.carrier.group is other.carrier.group
            and self.values == other.values
        )


def zero_cochain3(G: FiniteGroup) -> Cochain3:
    return Cochain3(G, {})


def zero_cochain2(carrier: Subgroup) -> Cochain2:
    return Cochain2(carrier, {})


# ---------------------------------------------------------------------------
# cocycle conditions


def check_cocycle3(alpha: Cochain3) -> tuple[bool, tuple[int, int, int, int] | None]:
    """Degree-3 cocycle condition; returns the first failing quadruple if any."""
    G = alpha.group
    n = G.order
    L, V = alpha.dense()
    T = G.table
    for g0 in range(n):
        for g1 in range(n):
            total = (
                V[g1]                       # alpha(g1, g2, g3)
                + V[g0][T[g1]]              # alpha(g0, g1 g2, g3)
                + V[g0, g1][:, None]        # alpha(g0, g1, g2)
                - V[T[g0, g1]]              # alpha(g0 g1, g2, g3)
                - V[g0, g1][T]              # alpha(g0, g1, g2 g3)
            ) % L
            if total.any():
                g2, g3 = map(int, np.argwhere(total)[0])
                return False, (g0, g1, g2, g3)
    return True, None


def check_normalized(alpha: Cochain3) -> bool:
    e = alpha.group.identity
    return all(e not in key for key in alpha.values)


def check_cocycle2(theta: Cochain2) -> tuple[bool, tuple[int, int, int] | None]:
    """Degree-2 cocycle condition on the carrier; returns a witness on failure."""
    H = theta.carrier.group
    n = H.order
    L, V = theta.dense()
    T = H.table
    for g in range(n):
        total = (V + V[g][T] - V[T[g]] - V[g][:, None]) % L
        # indexed [h, k]: theta(h,k) + theta(g, hk) - theta(gh, k) - theta(g, h)
        if total.any():
            h, k = map(int, np.argwhere(total)[0])
            return False, (g, h, k)
    return True, None


def check_normalized2(theta: Cochain2) -> bool:
    e = theta.carrier.group.identity
    return all(e not in key for key in theta.values)


def coboundary3(beta: Cochain2) -> Cochain3:
    """d(beta)(g,h,k) = beta(h,k) - beta(gh,k) + beta(g,hk) - beta(g,h).

    Formed on the carrier group itself; always passes check_cocycle3.
    """
    H = beta.carrier.group
    n = H.order
    L, V = beta.dense()
    T = H.table
    values: dict[tuple[int, int, int], Fraction] = {}
    for g in range(n):
        cube = (V - V[T[g]] + V[g][T] - V[g][:, None]) % L
        for h, k in np.argwhere(cube):
            values[(g, int(h), int(k))] = Fraction(int(cube[h, k]), L)
    return Cochain3(H, values)


def value_order(c: Cochain2 | Cochain3) -> int:
    """Least n with n*c = 0 pointwise: the lcm of the value denominators."""
    if not c.values:
        return 1
    return lcm(*(v.denominator for v in c.values.values()))


# ---------------------------------------------------------------------------
# builtin families


def cyclic_cocycle(n: int, k: int, group: FiniteGroup | None = None) -> Cochain3:
    """alpha(a,b,c) = k*a*floor((b+c)/n) / n on Z/n; verified at construction."""
    if n < 1:
        raise ValidationError(f"cyclic cocycle needs n >= 1, got {n}")
    if not 0 <= k < n:
        raise ValidationError(f"cyclic cocycle parameter k={k} outside 0..{n - 1}")
    if group is None:
        group = cyclic(n)
    else:
        expected = [[(i + j) % n for j in range(n)] for i in range(n)]
        if group.order != n or group.table.tolist() != expected:
            raise ValidationError("supplied group is not the standard cyclic group Z/n")
    values = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                v = qz(Fraction(k * a * ((b + c) // n), n))
                if v != 0:
                    values[(a, b, c)] = v
    alpha = Cochain3(group, values)
    ok, witness = check_cocycle3(alpha)
    if not ok:
        raise InternalDefectError(f"cyclic cocycle failed the cocycle test at {witness}")
    if not check_normalized(alpha):
        raise InternalDefectError("cyclic cocycle is not normalized")
    return alpha


def cup_product_cocycle(G: FiniteGroup, lifts: tuple[Callable[[int], int], ...],
                        scale: Fraction) -> Cochain3:
    """Triple cup product alpha(a,b,c) = scale * f1(a) f2(b) f3(c).

    Each lift must take integer values whose reductions are homomorphisms to
    (1/m)Z/Z with m * scale integral, so the product is multilinear mod 1;
    verified at construction.
    """
    f1, f2, f3 = lifts
    values = {}
    for a in G.elements():
        for b in G.elements():
            for c in G.elements():
                v = qz(scale * f1(a) * f2(b) * f3(c))
                if v != 0:
                    values[(a, b, c)] = v
    alpha = Cochain3(G, values)
    ok, witness = check_cocycle3(alpha)
    if not ok:
        raise InternalDefectError(f"cup product cochain failed the cocycle test at {witness}")
    return alpha


# ---------------------------------------------------------------------------
# transgression and the six-term character


def _require_normalized_cocycle(alpha: Cochain3) -> None:
    ok, witness = check_cocycle3(alpha)
    if not ok:
        raise ValidationError(f"cochain is not a 3-cocycle: fails at {witness}")
    if not check_normalized(alpha):
        raise ValidationError("3-cocycle is not normalized")


def transgress(alpha: Cochain3, x: int, carrier: Subgroup | None = None) -> Cochain2:
    """Transgression to a 2-cocycle on the centralizer of x.

    theta_x(g, h) = alpha(g,h,x) + alpha(x,g,h) - alpha(g,x,h), restricted to
    g, h in C_G(x).
    """
    _require_normalized_cocycle(alpha)
    G = alpha.group
    if carrier is None:
        carrier = centralizer_subgroup(G, [x])
    values = {}
    for i, g in enumerate(carrier.elements):
        for j, h in enumerate(carrier.elements):
            v = qz(alpha.value(g, h, x) + alpha.value(x, g, h) - alpha.value(g, x, h))
            if v != 0:
                values[(i, j)] = v
    theta = Cochain2(carrier, values)
    ok, witness = check_cocycle2(theta)
    if not ok:
        raise InternalDefectError(f"transgression failed the 2-cocycle test at {witness}")
    return theta


def gro_value(alpha: Cochain3, g1: int, g2: int, h: int) -> Fraction:
    """The six-term twisted-action exponent for h on the (g1, g2) component."""
    a = alpha.value
    return qz(
        a(g2, h, g1) + a(h, g1, g2) + a(g1, g2, h)
        - a(h, g2, g1) - a(g1, h, g2) - a(g2, g1, h)
    )


def gro_character(alpha: Cochain3, g1: int, g2: int) -> dict[int, Fraction]:
    """The Q/Z character h -> six-term value on the simultaneous centralizer."""
    G = alpha.group
    if G.mul(g1, g2) != G.mul(g2, g1):
        raise ValidationError(f"pair ({g1},{g2}) does not commute")
    from .groups import centralizer

    return {h: gro_value(alpha, g1, g2, h) for h in centralizer(G, [g1, g2])}


# ---------------------------------------------------------------------------
# pullback and restriction


def pullback_cochain3(f: GroupHom, alpha: Cochain3) -> Cochain3:
    if alpha.group is not f.codomain:
        raise ValidationError("cochain does not live on the codomain of the homomorphism")
    G = f.domain
    values = {}
    for g in G.elements():
        for h in G.elements():
            for k in G.elements():
                v = alpha.value(f(g), f(h), f(k))
                if v != 0:
                    values[(g, h, k)] = v
    return Cochain3(G, values)


def pullback_cochain2(f: GroupHom, theta: Cochain2) -> Cochain2:
    """Pull back along f; the image of f must land in theta's carrier."""
    carrier_index = theta.carrier.index_map
    for g in f.domain.elements():
        if f(g) not in carrier_index:
            raise ValidationError(
                f"image element {f(g)} is outside the carrier of the cochain"
            )
    G = f.domain
    values = {}
    for g in G.elements():
        for h in G.elements():
            v = theta.value(carrier_index[f(g)], carrier_index[f(h)])
            if v != 0:
                values[(g, h)] = v
    return Cochain2(full_subgroup(G), values)


def pullback_cochain(f: GroupHom, c: Cochain2 | Cochain3):
    if isinstance(c, Cochain3):
        return pullback_cochain3(f, c)
    return pullback_cochain2(f, c)


def restrict_cochain2(theta: Cochain2, sub: Subgroup) -> Cochain2:
    """Restrict pointwise to a subgroup of the carrier group.

    ``sub`` is a subgroup of ``theta.carrier.group``; the result lives on the
    subgroup's own standalone group (local indices renumbered).
    """
    if sub.parent is not theta.carrier.group:
        raise ValidationError("subgroup does not live in the cochain's carrier")
    values = {}
    for i, g in enumerate(sub.elements):
        for j, h in enumerate(sub.elements):
            v = theta.value(g, h)
            if v != 0:
                values[(i, j)] = v
    return Cochain2(full_subgroup(sub.group), values)


# ---------------------------------------------------------------------------
# serialization


def cochain3_from_json(doc: Mapping, G: FiniteGroup) -> Cochain3:
    disc = doc.get("family") or doc.get("kind")
    if disc == "zero":
        return zero_cochain3(G)
    if disc == "cyclic":
        return cyclic_cocycle(int(doc["n"]), int(doc["k"]), group=G)
    if disc == "explicit":
        values = {}
        for entry in doc["entries"]:
            key, raw = entry
            frac = Fraction(raw)
            if qz(frac) != frac:
                raise ValidationError(f"cochain value {raw!r} is not reduced into [0,1)")
            values[tuple(int(x) for x in key)] = frac
        return Cochain3(G, values)
    if disc == "coboundary":
        beta_doc = doc["beta"]
        values = {}
        for entry in beta_doc["entries"]:
            key, raw = entry
            values[tuple(int(x) for x in key)] = Fraction(raw)
        beta = Cochain2(full_subgroup(G), values)
        return coboundary3(beta)
    raise ValidationError(f"unknown cocycle family {disc!r}")


def cochain3_to_json(alpha: Cochain3) -> dict:
    return {
        "kind": "explicit",
        "entries": [[list(key), qz_str(v)] for key, v in sorted(alpha.values.items())],
    }


def cochain2_to_json(theta: Cochain2) -> dict:
    return {
        "carrier": list(theta.carrier.elements),
        "entries": [[list(key), qz_str(v)] for key, v in sorted(theta.values.items())],
    }
