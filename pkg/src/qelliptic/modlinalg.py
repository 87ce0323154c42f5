"""Dense linear algebra over F_p for the modular character-table computation.

Matrices are int64 numpy arrays with entries in [0, p); p stays below 2^20 so
products fit comfortably in int64.
"""

from __future__ import annotations

import numpy as np

from .errors import InternalDefectError


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


def rref_mod(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Row-reduced echelon form over F_p; returns (R, pivot column list)."""
    R = A.copy() % p
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            if R[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * inv_mod(R[r, c], p)) % p
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = (R[i] - R[i, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of {v : A v = 0 mod p}."""
    R, pivots = rref_mod(A, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for idx, fc in enumerate(free):
        basis[idx, fc] = 1
        for r, pc in enumerate(pivots):
            basis[idx, pc] = (-int(R[r, fc])) % p
    return basis


def charpoly_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomial coefficients (low to high, monic) over F_p.

    Reduces to Hessenberg form by similarity transformations, then applies
    the standard determinant recurrence for Hessenberg matrices.
    """
    H = A.copy() % p
    n = H.shape[0]
    for j in range(n - 2):
        piv = None
        for r in range(j + 1, n):
            if H[r, j]:
                piv = r
                break
        if piv is None:
            continue
        if piv != j + 1:
            H[[j + 1, piv]] = H[[piv, j + 1]]
            H[:, [j + 1, piv]] = H[:, [piv, j + 1]]
        inv = inv_mod(H[j + 1, j], p)
        for r in range(j + 2, n):
            if H[r, j]:
                f = (H[r, j] * inv) % p
                H[r] = (H[r] - f * H[j + 1]) % p
                H[:, j + 1] = (H[:, j + 1] + f * H[:, r]) % p
    # c_m(x) = (x - H[m-1,m-1]) c_{m-1}(x)
    #          - sum_i H[i-1,m-1] * (prod_{k=i..m-1} H[k,k-1]) * c_{i-1}(x)
    polys = [np.array([1], dtype=np.int64)]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = np.zeros(m + 1, dtype=np.int64)
        cur[1:] = prev
        cur[:-1] = (cur[:-1] - H[m - 1, m - 1] * prev) % p
        t = 1
        for i in range(m - 1, 0, -1):
            t = (t * H[i, i - 1]) % p
            if t == 0:
                break
            coeff = (H[i - 1, m - 1] * t) % p
            if coeff:
                cur[: i] = (cur[: i] - coeff * polys[i - 1]) % p
        polys.append(cur % p)
    return polys[n]


def poly_roots_mod(coeffs: np.ndarray, p: int) -> list[int]:
    """All roots in F_p of a polynomial, by exhaustive vectorized evaluation."""
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        vals = (vals * xs + int(c)) % p
    return [int(x) for x in np.nonzero(vals == 0)[0]]


def eigenvalues_mod(A: np.ndarray, p: int) -> list[int]:
    return poly_roots_mod(charpoly_mod(A, p), p)


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = (t2 * t2) % p
            i += 1
            if i == m:
                raise InternalDefectError("Tonelli-Shanks failed to converge")
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, (b * b) % p
        t, r = (t * c) % p, (r * b) % p
    return r


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo a prime p."""
    if p == 2:
        return 1
    factors = []
    k = p - 1
    d = 2
    while d * d <= k:
        if k % d == 0:
            factors.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        factors.append(k)
    for w in range(2, p):
        if all(pow(w, (p - 1) // f, p) != 1 for f in factors):
            return w
    raise InternalDefectError(f"no primitive root found modulo {p}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
