"""Exact linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p.  Everything here
is exact integer arithmetic; no floating point is involved anywhere.
"""
from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np


def as_fp(mat, p: int) -> np.ndarray:
    """Coerce to a 2-d int64 array with entries reduced mod p."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {a.ndim}")
    return a


def identity(n: int, p: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64) % p


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 is not invertible mod {p}")
    return pow(int(a), -1, p)


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def mat_pow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    n = a.shape[0]
    out = identity(n, p)
    base = a % p
    while k > 0:
        if k & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        k >>= 1
    return out


def rref(mat, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over F_p.

    Returns (R, pivots) where R has the same shape as the input and pivots
    lists the pivot column of each nonzero row, in order.
    """
    a = as_fp(mat, p).copy()
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if a[i, c] % p != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * inv_mod(int(a[r, c]), p)) % p
        for i in range(rows):
            if i != r and a[i, c] % p != 0:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a % p, pivots


def rank(mat, p: int) -> int:
    a = as_fp(mat, p)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def row_space(mat, p: int) -> np.ndarray:
    """Canonical basis (rref rows) of the row space.  Shape (rank, cols)."""
    a = as_fp(mat, p)
    if a.shape[0] == 0:
        return a.copy()
    r, piv = rref(a, p)
    return r[: len(piv)].copy()


def null_space(mat, p: int) -> np.ndarray:
    """Canonical basis of {x : mat @ x = 0}, returned as rows."""
    a = as_fp(mat, p)
    rows, cols = a.shape
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in piv]
    basis = zeros(len(free), cols)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-r[i, fc]) % p
    return row_space(basis, p) if len(free) else basis


def solve(a, b, p: int) -> Optional[np.ndarray]:
    """One solution x of a @ x = b over F_p, or None if inconsistent.

    b may be a vector or a matrix of stacked right-hand-side columns.
    """
    a = as_fp(a, p)
    b = np.array(b, dtype=np.int64) % p
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref(aug, p)
    n = a.shape[1]
    if any(c >= n for c in piv):
        return None
    x = zeros(n, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x[:, 0] if vec else x


def mat_inv(a, p: int) -> np.ndarray:
    a = as_fp(a, p)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    aug = np.concatenate([a, identity(n, p)], axis=1)
    r, piv = rref(aug, p)
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod p")
    return r[:, n:].copy()


def is_invertible(a, p: int) -> bool:
    a = as_fp(a, p)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def in_row_space(basis, v, p: int) -> bool:
    basis = as_fp(basis, p)
    v = np.array(v, dtype=np.int64).reshape(1, -1) % p
    if basis.shape[0] == 0:
        return not v.any()
    return rank(basis, p) == rank(np.concatenate([basis, v]), p)


def intersect_row_spaces(a, b, p: int) -> np.ndarray:
    """Canonical basis of rowspace(a) ∩ rowspace(b)."""
    a = row_space(a, p)
    b = row_space(b, p)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return zeros(0, max(a.shape[1], b.shape[1]))
    # x·a = y·b  ⇔  (x, y) in nullspace of [aᵀ | -bᵀ]
    stacked = np.concatenate([a.T, (-b.T) % p], axis=1)
    ker = null_space(stacked, p)
    if ker.shape[0] == 0:
        return zeros(0, a.shape[1])
    return row_space((ker[:, : a.shape[0]] @ a) % p, p)


def sum_row_spaces(a, b, p: int) -> np.ndarray:
    a = as_fp(a, p)
    b = as_fp(b, p)
    return row_space(np.concatenate([a, b]), p)


def extend_to_basis(rows, p: int, dim: int) -> np.ndarray:
    """Complete independent rows to a full basis of F_p^dim using unit vectors."""
    cur = row_space(rows, p) if np.asarray(rows).size else zeros(0, dim)
    out = [as_fp(rows, p)] if np.asarray(rows).size else []
    r = cur.shape[0]
    for i in range(dim):
        if r == dim:
            break
        e = zeros(1, dim)
        e[0, i] = 1
        if not in_row_space(cur, e[0], p):
            out.append(e)
            cur = sum_row_spaces(cur, e, p)
            r += 1
    full = np.concatenate(out) if out else zeros(0, dim)
    assert full.shape[0] == dim
    return full


def min_poly(a, p: int) -> List[int]:
    """Minimal polynomial coefficients, ascending, monic."""
    a = as_fp(a, p)
    n = a.shape[0]
    powers = [identity(n, p)]
    for _ in range(n):
        powers.append((powers[-1] @ a) % p)
    flat = np.stack([m.reshape(-1) for m in powers])
    for deg in range(1, n + 1):
        # look for monic dependence  a^deg = Σ_{i<deg} x_i a^i
        sol = solve(flat[:deg].T, flat[deg], p)
        if sol is not None:
            coeffs = [(-int(x)) % p for x in sol] + [1]
            return coeffs
    raise AssertionError("minimal polynomial must have degree <= n")


def poly_eval_matrix(coeffs: List[int], a: np.ndarray, p: int) -> np.ndarray:
    """Evaluate a polynomial (ascending coefficients) at a square matrix."""
    n = a.shape[0]
    out = zeros(n, n)
    for c in reversed(coeffs):
        out = (out @ a) % p
        out = (out + int(c) * identity(n, p)) % p
    return out
