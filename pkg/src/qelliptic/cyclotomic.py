"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in a canonical form: the modulus m is minimal for the
element (the conductor), and the coefficient vector is the remainder modulo
the m-th cyclotomic polynomial, so equality is plain structural comparison.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, Mapping


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    result = m
    k = m
    p = 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials (coefficients low to high)."""
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1] != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = c // den[-1]
        quot[i] = q
        for j, d in enumerate(den):
            num[i + j] -= q * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, low to high."""
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0] = -1
    num[m] = 1
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            if rem != [0]:
                raise ArithmeticError("cyclotomic polynomial division left a remainder")
    return tuple(num)


def _reduce_mod_phi(m: int, coeffs: dict[int, Fraction]) -> dict[int, Fraction]:
    """Remainder of sum c_r x^r modulo Phi_m, exponents already in [0, m)."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    dense = [Fraction(0)] * m
    for r, c in coeffs.items():
        dense[r] += c
    for i in range(m - 1, deg - 1, -1):
        c = dense[i]
        if c == 0:
            continue
        dense[i] = Fraction(0)
        for j in range(deg):
            dense[i - deg + j] -= c * phi[j]
    return {r: c for r, c in enumerate(dense[:deg]) if c != 0}


@lru_cache(maxsize=None)
def _descent_data(m: int, d: int):
    """Row echelon data for rewriting elements of Q(zeta_m) in Q(zeta_d), d | m.

    Returns (rows, pivots, ops) where the matrix whose column j is the reduced
    form of zeta_m^(j*m/d) has been brought to echelon form by recorded row
    operations; solving against a target vector replays the same operations.
    """
    step = m // d
    deg_m = euler_phi(m)
    deg_d = euler_phi(d)
    cols = []
    for j in range(deg_d):
        red = _reduce_mod_phi(m, {(j * step) % m: Fraction(1)})
        cols.append([red.get(r, Fraction(0)) for r in range(deg_m)])
    # a: deg_m x deg_d matrix, augmented with identity to record row operations
    a = [[cols[j][r] for j in range(deg_d)] for r in range(deg_m)]
    ops = [[Fraction(1) if i == j else Fraction(0) for j in range(deg_m)] for i in range(deg_m)]
    pivots = []
    row = 0
    for col in range(deg_d):
        piv = next((r for r in range(row, deg_m) if a[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("descent matrix is rank deficient")
        a[row], a[piv] = a[piv], a[row]
        ops[row], ops[piv] = ops[piv], ops[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        ops[row] = [x * inv for x in ops[row]]
        for r in range(deg_m):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
                ops[r] = [x - f * y for x, y in zip(ops[r], ops[row])]
        pivots.append(col)
        row += 1
    return tuple(tuple(r) for r in a), tuple(pivots), tuple(tuple(r) for r in ops)


def _try_descend(m: int, d: int, coeffs: dict[int, Fraction]) -> dict[int, Fraction] | None:
    """Rewrite coeffs (reduced mod Phi_m) in Q(zeta_d), or None if not possible."""
    deg_m = euler_phi(m)
    deg_d = euler_phi(d)
    _, _, ops = _descent_data(m, d)
    target = [coeffs.get(r, Fraction(0)) for r in range(deg_m)]
    solved = [sum(ops[r][k] * target[k] for k in range(deg_m)) for r in range(deg_m)]
    # rows beyond the pivot count must vanish for the element to lie in Q(zeta_d)
    if any(solved[r] != 0 for r in range(deg_d, deg_m)):
        return None
    return {j: solved[j] for j in range(deg_d) if solved[j] != 0}


def _canonicalize(m: int, coeffs: Mapping[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    folded: dict[int, Fraction] = {}
    for r, c in coeffs.items():
        c = Fraction(c)
        if c == 0:
            continue
        r %= m
        folded[r] = folded.get(r, Fraction(0)) + c
    folded = {r: c for r, c in folded.items() if c != 0}
    if not folded:
        return 1, {}
    reduced = _reduce_mod_phi(m, folded) if m > 1 else dict(folded)
    if not reduced:
        return 1, {}
    # conductor minimization: strip primes while possible
    changed = True
    while changed and m > 1:
        changed = False
        k, p = m, 2
        primes = []
        while p * p <= k:
            if k % p == 0:
                primes.append(p)
                while k % p == 0:
                    k //= p
            p += 1
        if k > 1:
            primes.append(k)
        for p in primes:
            d = m // p
            down = _try_descend(m, d, reduced)
            if down is not None:
                m, reduced = d, down
                changed = True
                break
    return m, reduced


class Cyclotomic:
    """An element of some Q(zeta_m), held in canonical minimal-modulus form."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs: Mapping[int, Fraction | int | str]):
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        cm, cc = _canonicalize(m, {int(r): Fraction(c) for r, c in coeffs.items()})
        object.__setattr__(self, "m", cm)
        object.__setattr__(self, "coeffs", cc)
        object.__setattr__(self, "_hash", None)

    # constructors

    @staticmethod
    def zero() -> "Cyclotomic":
        return Cyclotomic(1, {})

    @staticmethod
    def one() -> "Cyclotomic":
        return Cyclotomic(1, {0: 1})

    @staticmethod
    def rational(q: Fraction | int) -> "Cyclotomic":
        return Cyclotomic(1, {0: Fraction(q)})

    @staticmethod
    def root(m: int, k: int = 1) -> "Cyclotomic":
        """zeta_m^k."""
        return Cyclotomic(m, {k % m: 1})

    @staticmethod
    def from_qz(t: Fraction) -> "Cyclotomic":
        """e^(2 pi i t) for t in Q/Z."""
        t = Fraction(t) % 1
        return Cyclotomic(t.denominator, {t.numerator: 1})

    # ring structure

    def _lift(self, m: int) -> dict[int, Fraction]:
        step = m // self.m
        return {r * step: c for r, c in self.coeffs.items()}

    def __add__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        other = _coerce(other)
        m = self.m * other.m // gcd(self.m, other.m)
        a = self._lift(m)
        for r, c in other._lift(m).items():
            a[r] = a.get(r, Fraction(0)) + c
        return Cyclotomic(m, a)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.m, {r: -c for r, c in self.coeffs.items()})

    def __sub__(self, other):
        return self.__add__(_coerce(other).__neg__())

    def __rsub__(self, other):
        return _coerce(other).__sub__(self)

    def __mul__(self, other: "Cyclotomic | int | Fraction") -> "Cyclotomic":
        other = _coerce(other)
        if other.is_rational():
            q = other.rational_value()
            return Cyclotomic(self.m, {r: c * q for r, c in self.coeffs.items()})
        if self.is_rational():
            q = self.rational_value()
            return Cyclotomic(other.m, {r: c * q for r, c in other.coeffs.items()})
        m = self.m * other.m // gcd(self.m, other.m)
        a = self._lift(m)
        b = other._lift(m)
        prod: dict[int, Fraction] = {}
        for r1, c1 in a.items():
            for r2, c2 in b.items():
                r = (r1 + r2) % m
                prod[r] = prod.get(r, Fraction(0)) + c1 * c2
        return Cyclotomic(m, prod)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other: int | Fraction) -> "Cyclotomic":
        q = Fraction(other)
        if q == 0:
            raise ZeroDivisionError("division of a cyclotomic by zero")
        return Cyclotomic(self.m, {r: c / q for r, c in self.coeffs.items()})

    def __pow__(self, k: int) -> "Cyclotomic":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = Cyclotomic.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation, zeta -> zeta^-1."""
        return Cyclotomic(self.m, {(-r) % self.m: c for r, c in self.coeffs.items()})

    def galois(self, j: int) -> "Cyclotomic":
        """The automorphism zeta_m -> zeta_m^j; j must be prime to m."""
        if gcd(j, self.m) != 1:
            raise ValueError(f"galois exponent {j} not coprime to modulus {self.m}")
        return Cyclotomic(self.m, {(r * j) % self.m: c for r, c in self.coeffs.items()})

    # predicates and views

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self.m == 1

    def rational_value(self) -> Fraction:
        if self.m != 1:
            raise ValueError("element is not rational")
        return self.coeffs.get(0, Fraction(0))

    def is_integer(self) -> bool:
        return self.m == 1 and self.coeffs.get(0, Fraction(0)).denominator == 1

    def eval_numeric(self) -> complex:
        """Floating point value with zeta_m -> e^(2 pi i / m)."""
        return sum(
            (complex(c) * cmath.exp(2j * cmath.pi * r / self.m) for r, c in self.coeffs.items()),
            0j,
        )

    def sort_key(self):
        return (self.m, tuple(sorted((r, c.numerator, c.denominator) for r, c in self.coeffs.items())))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.sort_key()))
        return self._hash

    def __repr__(self) -> str:
        if self.is_zero():
            return "Cyc(0)"
        parts = []
        for r in sorted(self.coeffs):
            c = self.coeffs[r]
            if r == 0:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(f"z{self.m}^{r}")
            else:
                parts.append(f"({c})*z{self.m}^{r}")
        return "Cyc(" + " + ".join(parts) + ")"

    def __setattr__(self, key, value):
        raise AttributeError("Cyclotomic values are immutable")

    # serialization

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "coeffs": {str(r): f"{c.numerator}/{c.denominator}" for r, c in sorted(self.coeffs.items())},
        }

    @staticmethod
    def from_json(doc: Mapping) -> "Cyclotomic":
        return Cyclotomic(int(doc["m"]), {int(r): Fraction(c) for r, c in doc["coeffs"].items()})


def _coerce(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")


def cyclotomic_sum(items: Iterator[Cyclotomic]) -> Cyclotomic:
    total = Cyclotomic.zero()
    for x in items:
        total = total + x
    return total
