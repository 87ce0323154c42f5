"""Finite group arithmetic over dense multiplication tables.

Elements are integer indices 0..order-1.  Covers construction (tables,
permutation closures, named builtins, products), conjugacy, centralizers,
commuting pairs, and the right actions of the group and of SL2(Z) on
commuting pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError

MAX_ORDER = 500

CommutingPair = tuple[int, int]


class FiniteGroup:
    """A finite group given by its Cayley table; immutable after construction."""

    __slots__ = ("table", "identity", "inverses", "labels", "name", "_orders", "_abelian")

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        labels: Sequence[str] | None = None,
        name: str | None = None,
        check: bool = True,
    ):
        tbl = np.asarray(table, dtype=np.int64)
        if tbl.ndim != 2 or tbl.shape[0] != tbl.shape[1]:
            raise ValidationError(f"multiplication table must be square, got shape {tbl.shape}")
        n = tbl.shape[0]
        if n == 0:
            raise ValidationError("group must be nonempty")
        if tbl.min() < 0 or tbl.max() >= n:
            raise ValidationError("table entries out of range")
        identity = None
        ran = np.arange(n)
        for e in range(n):
            if np.array_equal(tbl[e], ran) and np.array_equal(tbl[:, e], ran):
                identity = e
                break
        if identity is None:
            raise ValidationError("table has no two-sided identity")
        inverses = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hits = np.nonzero(tbl[g] == identity)[0]
            if len(hits) != 1 or tbl[hits[0], g] != identity:
                raise ValidationError(f"element {g} has no two-sided inverse")
            inverses[g] = hits[0]
        if check:
            for a in range(n):
                if not np.array_equal(tbl[tbl[a]], tbl[a][tbl]):
                    b, c = np.argwhere(tbl[tbl[a]] != tbl[a][tbl])[0]
                    raise ValidationError(
                        f"table is not associative at triple ({a},{b},{c})"
                    )
        tbl.setflags(write=False)
        inverses.setflags(write=False)
        object.__setattr__(self, "table", tbl)
        object.__setattr__(self, "identity", int(identity))
        object.__setattr__(self, "inverses", inverses)
        object.__setattr__(self, "labels", tuple(labels) if labels is not None else None)
        object.__setattr__(self, "name", name or f"G{n}")
        object.__setattr__(self, "_orders", None)
        object.__setattr__(self, "_abelian", None)
        if self.labels is not None and len(self.labels) != n:
            raise ValidationError("labels length does not match group order")

    def __setattr__(self, key, value):
        raise AttributeError("FiniteGroup is immutable")

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def conj(self, g: int, k: int) -> int:
        """k^-1 g k."""
        return self.mul(self.mul(self.inv(k), g), k)

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, g)
            g = self.mul(g, g)
            k >>= 1
        return result

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            object.__setattr__(self, "_abelian", bool(np.array_equal(self.table, self.table.T)))
        return self._abelian

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels is not None else str(g)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def element_order(G: FiniteGroup, g: int) -> int:
    k, x = 1, g
    while x != G.identity:
        x = G.mul(x, g)
        k += 1
    return k


def exponent(G: FiniteGroup) -> int:
    e = 1
    for g in G.elements():
        o = element_order(G, g)
        e = e * o // np.gcd(e, o)
    return int(e)


# ---------------------------------------------------------------------------
# constructions


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValidationError(f"cyclic group order must be >= 1, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, labels=[str(i) for i in range(n)], name=f"Z{n}", check=False)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: rotations r^i and reflections s r^i."""
    if n < 1:
        raise ValidationError(f"dihedral parameter must be >= 1, got {n}")

    def idx(i: int, f: int) -> int:
        return f * n + i % n

    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i, f in itertools.product(range(n), range(2)):
        for j, g in itertools.product(range(n), range(2)):
            # r^i s^f * r^j s^g = r^(i + (-1)^f j) s^(f+g)
            i2 = (i + (j if f == 0 else -j)) % n
            table[idx(i, f), idx(j, g)] = idx(i2, (f + g) % 2)
    labels = [f"r{i}" for i in range(n)] + [f"sr{i}" for i in range(n)]
    return FiniteGroup(table, labels=labels, name=f"D{n}", check=False)


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise ValidationError(f"symmetric groups are built for 1 <= n <= 5, got {n}")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(q[p[i]] for i in range(n))] for q in perms]
        for p in perms
    ]
    labels = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(table, labels=labels, name=f"S{n}", check=False)


def quaternion() -> FiniteGroup:
    """The quaternion group Q8 on {1,-1,i,-i,j,-j,k,-k}."""
    units = ["1", "i", "j", "k"]
    mul_rule = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("j", "1"): (1, "j"), ("k", "1"): (1, "k"),
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"), ("k", "j"): (-1, "i"),
        ("k", "i"): (1, "j"), ("i", "k"): (-1, "j"),
    }
    elems = [(s, u) for u in units for s in (1, -1)]
    elems.sort(key=lambda e: (units.index(e[1]), -e[0]))
    index = {e: i for i, e in enumerate(elems)}
    table = np.zeros((8, 8), dtype=np.int64)
    for (s1, u1), (s2, u2) in itertools.product(elems, elems):
        s, u = mul_rule[(u1, u2)]
        table[index[(s1, u1)], index[(s2, u2)]] = index[(s1 * s2 * s, u)]
    labels = [("" if s == 1 else "-") + u for (s, u) in elems]
    return FiniteGroup(table, labels=labels, name="Q8", check=False)


def product(*factors: FiniteGroup) -> FiniteGroup:
    if not factors:
        raise ValidationError("product needs at least one factor")
    if len(factors) == 1:
        return factors[0]
    head, rest = factors[0], product(*factors[1:])
    n1, n2 = head.order, rest.order
    if n1 * n2 > MAX_ORDER:
        raise ValidationError(f"product order {n1 * n2} exceeds the cap {MAX_ORDER}")
    table = np.zeros((n1 * n2, n1 * n2), dtype=np.int64)
    for a1, b1 in itertools.product(range(n1), range(n2)):
        row = head.table[a1][:, None] * n2 + rest.table[b1][None, :]
        table[a1 * n2 + b1] = row.reshape(-1)
    labels = [f"({head.label(a)},{rest.label(b)})" for a in range(n1) for b in range(n2)]
    return FiniteGroup(table, labels=labels, name=f"{head.name}x{rest.name}", check=False)


def from_permutations(degree: int, gens: Sequence[Sequence[int]], name: str | None = None,
                      max_order: int = MAX_ORDER) -> FiniteGroup:
    """Close a set of permutations of range(degree) under composition."""
    ident = tuple(range(degree))
    norm_gens = []
    for g in gens:
        p = tuple(int(x) for x in g)
        if sorted(p) != list(range(degree)):
            raise ValidationError(f"{list(g)} is not a permutation of range({degree})")
        norm_gens.append(p)
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        new_frontier = []
        for p in frontier:
            for g in norm_gens:
                q = tuple(g[p[i]] for i in range(degree))
                if q not in index:
                    if len(elems) >= max_order:
                        raise ValidationError(
                            f"permutation closure exceeds the size bound {max_order}"
                        )
                    index[q] = len(elems)
                    elems.append(q)
                    new_frontier.append(q)
        frontier = new_frontier
    n = len(elems)
    table = np.zeros((n, n), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            table[i, j] = index[tuple(q[p[k]] for k in range(degree))]
    labels = ["".join(map(str, p)) for p in elems] if degree <= 10 else None
    return FiniteGroup(table, labels=labels, name=name or f"Perm{n}", check=False)


def builtin(name: str) -> FiniteGroup:
    """Named builtin groups: Zn/Cn, Dn (order 2n), Sn (n <= 5), Q8, x-products."""
    key = name.strip()
    if "x" in key:
        return product(*(builtin(part) for part in key.split("x")))
    upper = key.upper()
    if upper.startswith(("Z", "C")) and upper[1:].isdigit():
        return cyclic(int(upper[1:]))
    if upper.startswith("D") and upper[1:].isdigit():
        return dihedral(int(upper[1:]))
    if upper.startswith("S") and upper[1:].isdigit():
        return symmetric(int(upper[1:]))
    if upper == "Q8":
        return quaternion()
    raise ValidationError(f"unknown builtin group {name!r}")


def build_group(spec: Mapping | str) -> FiniteGroup:
    """Build a group from a JSON-style spec or a builtin name."""
    if isinstance(spec, str):
        return builtin(spec)
    kind = spec.get("kind")
    if kind == "table":
        return FiniteGroup(spec["table"], labels=spec.get("labels"), name=spec.get("name"))
    if kind == "perms":
        return from_permutations(int(spec["degree"]), spec["gens"], name=spec.get("name"))
    if kind == "builtin":
        return builtin(spec["name"])
    if kind == "product":
        return product(*(build_group(f) for f in spec["factors"]))
    raise ValidationError(f"unknown group spec kind {kind!r}")


def group_to_json(G: FiniteGroup) -> dict:
    return {"kind": "table", "table": G.table.tolist()}


# ---------------------------------------------------------------------------
# conjugacy and centralizers


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, tuple[int, ...]]]:
    """Partition into classes; representatives are least indices, sorted."""
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in G.elements():
        if seen[g]:
            continue
        members = {G.conj(g, k) for k in G.elements()}
        for m in members:
            seen[m] = True
        classes.append((min(members), tuple(sorted(members))))
    classes.sort(key=lambda cl: cl[0])
    return classes


def class_index_map(G: FiniteGroup) -> np.ndarray:
    """Array mapping each element to the index of its conjugacy class."""
    classes = conjugacy_classes(G)
    out = np.zeros(G.order, dtype=np.int64)
    for i, (_, members) in enumerate(classes):
        for m in members:
            out[m] = i
    return out


def centralizer(G: FiniteGroup, elems: Iterable[int]) -> tuple[int, ...]:
    elems = list(elems)
    if not elems:
        raise ValidationError("centralizer needs at least one element")
    mask = np.ones(G.order, dtype=bool)
    for e in elems:
        mask &= G.table[:, e] == G.table[e, :]
    return tuple(int(k) for k in np.nonzero(mask)[0])


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a parent group, with its own standalone table."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    group: FiniteGroup

    def to_local(self, g: int) -> int:
        try:
            return self.elements.index(g)
        except ValueError:
            raise ValidationError(f"element {g} is not in the subgroup") from None

    def to_parent(self, i: int) -> int:
        return self.elements[i]

    @property
    def index_map(self) -> dict[int, int]:
        return {g: i for i, g in enumerate(self.elements)}


def subgroup(G: FiniteGroup, elems: Iterable[int], name: str | None = None) -> Subgroup:
    elements = tuple(sorted(set(int(e) for e in elems)))
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    table = np.zeros((n, n), dtype=np.int64)
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            prod = G.mul(g, h)
            if prod not in index:
                raise ValidationError(f"set is not closed: {g}*{h} = {prod} missing")
            table[i, j] = index[prod]
    labels = [G.label(g) for g in elements]
    local = FiniteGroup(table, labels=labels, name=name or f"sub{n}of{G.name}", check=False)
    return Subgroup(parent=G, elements=elements, group=local)


def centralizer_subgroup(G: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    elems = list(elems)
    return subgroup(G, centralizer(G, elems), name=f"C_{G.name}({','.join(map(str, elems))})")


def full_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(parent=G, elements=tuple(G.elements()), group=G)


# ---------------------------------------------------------------------------
# commuting pairs and the SL2(Z) action


def commuting_pairs(G: FiniteGroup) -> list[CommutingPair]:
    comm = G.table == G.table.T
    return [(int(g), int(h)) for g, h in np.argwhere(comm)]


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValidationError(
                f"matrix [[{self.a},{self.b}],[{self.c},{self.d}]] has determinant != 1"
            )

    def __mul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def __repr__(self) -> str:
        return f"SL2[{self.a},{self.b};{self.c},{self.d}]"


SL2_I = SL2Matrix(1, 0, 0, 1)
SL2_S = SL2Matrix(0, -1, 1, 0)
SL2_T = SL2Matrix(1, 1, 0, 1)


def sl2_act_pair(G: FiniteGroup, A: SL2Matrix, p: CommutingPair) -> CommutingPair:
    """Right action (g, h) . A = (g^d h^-b, g^-c h^a)."""
    g, h = p
    if G.mul(g, h) != G.mul(h, g):
        raise ValidationError(f"pair {p} does not commute")
    out = (
        G.mul(G.power(g, A.d), G.power(h, -A.b)),
        G.mul(G.power(g, -A.c), G.power(h, A.a)),
    )
    return out


def conj_pair(G: FiniteGroup, p: CommutingPair, k: int) -> CommutingPair:
    return (G.conj(p[0], k), G.conj(p[1], k))


@dataclass(frozen=True)
class PairOrbit:
    representative: CommutingPair
    members: tuple[CommutingPair, ...]
    stabilizer: tuple[int, ...]


def pair_orbits(G: FiniteGroup, acting: str = "conjugation") -> list[PairOrbit]:
    """Orbit partition of commuting pairs under conjugation, optionally with SL2(Z).

    The SL2(Z) part closes under the generators S and T by breadth-first
    search; these generate the whole group, so the closure is the full orbit.
    """
    if acting not in ("conjugation", "conjugation-and-sl2"):
        raise ValidationError(f"unknown action {acting!r}")
    pairs = commuting_pairs(G)
    remaining = set(pairs)
    orbits = []
    for seed in pairs:
        if seed not in remaining:
            continue
        orbit = {seed}
        frontier = [seed]
        while frontier:
            new_frontier = []
            for p in frontier:
                images = [conj_pair(G, p, k) for k in G.elements()]
                if acting == "conjugation-and-sl2":
                    images.append(sl2_act_pair(G, SL2_S, p))
                    images.append(sl2_act_pair(G, SL2_T, p))
                for q in images:
                    if q not in orbit:
                        orbit.add(q)
                        new_frontier.append(q)
            frontier = new_frontier
        remaining -= orbit
        rep = min(orbit)
        orbits.append(
            PairOrbit(
                representative=rep,
                members=tuple(sorted(orbit)),
                stabilizer=centralizer(G, [rep[0], rep[1]]),
            )
        )
    orbits.sort(key=lambda o: o.representative)
    return orbits


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.domain.order:
            raise ValidationError("homomorphism image has wrong length")
        if self.image[self.domain.identity] != self.codomain.identity:
            raise ValidationError("homomorphism does not send identity to identity")
        for g in self.domain.elements():
            for h in self.domain.elements():
                if self.image[self.domain.mul(g, h)] != self.codomain.mul(self.image[g], self.image[h]):
                    raise ValidationError(f"map is not a homomorphism at ({g},{h})")

    def __call__(self, g: int) -> int:
        return self.image[g]


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, tuple(G.elements()))

def trivial_hom(G: FiniteGroup, H: FiniteGroup) -> GroupHom:
    return GroupHom(G, H, tuple(H.identity for _ in G.elements()))

def inclusion_hom(sub: Subgroup) -> GroupHom:
    return GroupHom(sub.group, sub.parent, sub.elements)

def restrict_hom(f: GroupHom, sub: Subgroup) -> GroupHom:
    """Restrict f to a subgroup of its domain (as the subgroup's own group)."""
    if sub.parent is not f.domain:
        raise ValidationError("subgroup does not live in the domain of the homomorphism")
    return GroupHom(sub.group, f.codomain, tuple(f(g) for g in sub.elements))

def compose_hom(g: GroupHom, f: GroupHom) -> GroupHom:
    if f.codomain is not g.domain:
        raise ValidationError("homomorphisms do not compose")
    return GroupHom(f.domain, g.codomain, tuple(g(f(x)) for x in f.domain.elements()))
