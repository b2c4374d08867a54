"""Exact linear algebra over Z/p^e and Z for finite abelian p-groups.

Spans of integer row vectors modulo a prime power are canonicalized with the
Howell normal form, which (unlike plain row echelon over a ring with zero
divisors) supports exact membership tests with coefficient recovery and exact
span sizes.  Integer matrices are diagonalized by a Smith-style reduction
that tracks enough transform data to present finite quotients and relation
lattices in diagonal coordinates.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np


def _val(x: int, p: int, e: int) -> int:
    """p-adic valuation of the residue x mod p^e, with v(0) = e."""
    x = int(x) % (p**e)
    if x == 0:
        return e
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def howell_form(rows, p: int, e: int) -> np.ndarray:
    """Canonical Howell basis of the span of `rows` inside (Z/p^e)^n.

    Pivot columns strictly increase, each pivot entry is a power of p, and
    entries above a pivot are reduced modulo it.  The extra Howell rows
    (p^{e-v} times each pivot row) are folded in so that every span element
    reduces to zero against the basis, even when leading coefficients are
    zero divisors.
    """
    q = p**e
    mat = np.asarray(rows, dtype=np.int64)
    if mat.size == 0:
        n = mat.shape[1] if mat.ndim == 2 else 0
        return np.zeros((0, n), dtype=np.int64)
    mat = np.atleast_2d(mat) % q
    n = mat.shape[1]
    work: List[np.ndarray] = [r.copy() for r in mat if r.any()]
    pivots: List[Tuple[np.ndarray, int, int]] = []
    for col in range(n):
        cand = [r for r in work if r[col]]
        rest = [r for r in work if not r[col]]
        if not cand:
            work = rest
            continue
        cand.sort(key=lambda r: _val(int(r[col]), p, e))
        piv = cand[0]
        v = _val(int(piv[col]), p, e)
        unit = int(piv[col]) // (p**v)
        piv = (piv * pow(unit, -1, q)) % q
        for r in cand[1:]:
            c = int(r[col]) // (p**v)
            r2 = (r - c * piv) % q
            if r2.any():
                rest.append(r2)
        if v:
            shadow = (piv * (p ** (e - v))) % q
            if shadow.any():
                rest.append(shadow)
        pivots.append((piv, col, v))
        work = rest
    basis = [piv for piv, _, _ in pivots]
    for idx in range(len(pivots) - 1, -1, -1):
        _, col, v = pivots[idx]
        for k in range(idx):
            c = int(basis[k][col]) // (p**v)
            if c:
                basis[k] = (basis[k] - c * basis[idx]) % q
    if not basis:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(basis, dtype=np.int64)


def _pivot_of(row: np.ndarray) -> int:
    nz = np.flatnonzero(row)
    return int(nz[0])


def span_reduce(
    basis: np.ndarray, v, p: int, e: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Reduce v against a Howell basis; returns (residue, coefficients).

    v ≡ coefficients·basis + residue (mod p^e); v lies in the span iff the
    residue vanishes, and then the coefficients are a membership certificate.
    """
    q = p**e
    v = np.asarray(v, dtype=np.int64).reshape(-1) % q
    coeffs = np.zeros(basis.shape[0], dtype=np.int64)
    for i in range(basis.shape[0]):
        col = _pivot_of(basis[i])
        pv = int(basis[i][col])
        c = int(v[col]) // pv
        if c:
            v = (v - c * basis[i]) % q
            coeffs[i] = c % q
    return v, coeffs


def in_span(basis: np.ndarray, v, p: int, e: int) -> bool:
    if basis.shape[0] == 0:
        return not (np.asarray(v, dtype=np.int64) % (p**e)).any()
    residue, _ = span_reduce(basis, v, p, e)
    return not residue.any()


def span_size(basis: np.ndarray, p: int, e: int) -> int:
    total = 1
    for i in range(basis.shape[0]):
        v = _val(int(basis[i][_pivot_of(basis[i])]), p, e)
        total *= p ** (e - v)
    return total


def span_elements(basis: np.ndarray, p: int, e: int) -> np.ndarray:
    """Every element of the span, one row each (canonical digit order)."""
    q = p**e
    n = basis.shape[1]
    out = np.zeros((1, n), dtype=np.int64)
    for i in range(basis.shape[0]):
        v = _val(int(basis[i][_pivot_of(basis[i])]), p, e)
        reps = p ** (e - v)
        scaled = (np.arange(reps)[:, None] * basis[i][None, :]) % q
        out = (out[:, None, :] + scaled[None, :, :]).reshape(-1, n) % q
    return out


def span_sum(b1: np.ndarray, b2: np.ndarray, p: int, e: int) -> np.ndarray:
    if b1.shape[0] == 0:
        return howell_form(b2, p, e)
    if b2.shape[0] == 0:
        return howell_form(b1, p, e)
    return howell_form(np.vstack([b1, b2]), p, e)


def spans_equal(b1: np.ndarray, b2: np.ndarray, p: int, e: int) -> bool:
    return bool(np.array_equal(howell_form(b1, p, e), howell_form(b2, p, e)))


def diagonalize(
    mat,
) -> Tuple[List[int], List[List[int]], List[List[int]], List[List[int]]]:
    """Integer diagonalization U·mat·V = diag with transforms tracked.

    Returns (diag, u, v, v_inv) as Python-int matrices, where u and v are
    unimodular, diag lists the n diagonal entries (n = column count, zeros
    for deficient rank), and v_inv = v⁻¹.  Exact over Z.
    """
    a = [[int(x) for x in row] for row in np.atleast_2d(np.asarray(mat, dtype=object))]
    k = len(a)
    n = len(a[0]) if k else 0
    u = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i, t, c):  # row_i -= c * row_t
        a[i] = [x - c * y for x, y in zip(a[i], a[t])]
        u[i] = [x - c * y for x, y in zip(u[i], u[t])]

    def row_swap(i, t):
        a[i], a[t] = a[t], a[i]
        u[i], u[t] = u[t], u[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def col_op(j, t, c):  # col_j -= c * col_t
        for r in range(k):
            a[r][j] -= c * a[r][t]
        for r in range(n):
            v[r][j] -= c * v[r][t]
        vinv[t] = [x + c * y for x, y in zip(vinv[t], vinv[j])]

    def col_swap(j, t):
        for r in range(k):
            a[r][j], a[r][t] = a[r][t], a[r][j]
        for r in range(n):
            v[r][j], v[r][t] = v[r][t], v[r][j]
        vinv[j], vinv[t] = vinv[t], vinv[j]

    for t in range(min(k, n)):
        pivot = None
        best = None
        for i in range(t, k):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        if a[t][t] < 0:
            row_neg(t)
        while True:
            clean = True
            for i in range(k):
                if i == t or not a[i][t]:
                    continue
                c = a[i][t] // a[t][t]
                row_op(i, t, c)
                if a[i][t]:
                    row_swap(i, t)
                    if a[t][t] < 0:
                        row_neg(t)
                    clean = False
            for j in range(n):
                if j == t or not a[t][j]:
                    continue
                c = a[t][j] // a[t][t]
                col_op(j, t, c)
                if a[t][j]:
                    col_swap(j, t)
                    if a[t][t] < 0:
                        row_neg(t)
                    clean = False
            if clean:
                break
    diag = [a[j][j] if j < k else 0 for j in range(n)]
    return diag, u, v, vinv


def left_null_lattice(mat) -> np.ndarray:
    """Basis rows of {c ∈ Z^k : c·mat = 0}, the integer left-kernel lattice."""
    a = np.atleast_2d(np.asarray(mat, dtype=object))
    k = a.shape[0]
    diag, u, _, _ = diagonalize(a)
    rows = []
    # U·mat·V = D; row t of U kills mat exactly when row t of D is zero,
    # i.e. when t indexes past the nonzero diagonal (or a zero diagonal slot).
    for t in range(k):
        d_t = diag[t] if t < len(diag) else 0
        if d_t == 0:
            rows.append(u[t])
    if not rows:
        return np.zeros((0, k), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def span_intersection(b1: np.ndarray, b2: np.ndarray, p: int, e: int) -> np.ndarray:
    """Canonical basis of span(b1) ∩ span(b2) inside (Z/p^e)^n."""
    q = p**e
    n = b1.shape[1] if b1.size else (b2.shape[1] if b2.size else 0)
    if b1.shape[0] == 0 or b2.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    # Z-lattices L_i = rowspan(b_i) + q·Z^n; intersection via the left
    # kernel of the stacked matrix [M1; -M2].
    m1 = np.vstack([b1, q * np.eye(n, dtype=np.int64)])
    m2 = np.vstack([b2, q * np.eye(n, dtype=np.int64)])
    stacked = np.vstack([m1, -m2]).astype(object)
    ker = left_null_lattice(stacked)
    if ker.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    combos = ker[:, : m1.shape[0]]
    vecs = (combos @ m1.astype(object)) % q
    return howell_form(vecs.astype(np.int64), p, e)
