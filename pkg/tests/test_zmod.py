"""Lattice arithmetic over Z/p^e: canonical forms, spans, diagonalization."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from towerforge import zmod


def brute_span(rows, p, e):
    """All Z/p^e-combinations of the rows, as a set of tuples (oracle)."""
    q = p**e
    rows = np.asarray(rows, dtype=np.int64) % q
    if rows.size == 0:
        return {tuple(np.zeros(rows.shape[1] if rows.ndim == 2 else 0, dtype=int))}
    out = {tuple(np.zeros(rows.shape[1], dtype=int))}
    for row in rows:
        new = set()
        for base in out:
            for c in range(q):
                new.add(tuple((np.array(base) + c * row) % q))
        out = new
    return out


small_mats = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(0, 8), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


class TestHowellForm:
    def test_zero_rows_give_empty_basis(self):
        basis = zmod.howell_form(np.zeros((3, 2), dtype=np.int64), 2, 2)
        assert basis.shape[0] == 0

    def test_span_size_matches_brute_force(self):
        rows = np.array([[2, 0], [0, 1]], dtype=np.int64)
        basis = zmod.howell_form(rows, 2, 2)
        assert zmod.span_size(basis, 2, 2) == len(brute_span(rows, 2, 2))

    def test_howell_is_canonical_for_the_span(self):
        # two generating sets of the same submodule of (Z/4)^2
        a = zmod.howell_form(np.array([[2, 2], [0, 2]]), 2, 2)
        b = zmod.howell_form(np.array([[2, 0], [2, 2], [0, 2]]), 2, 2)
        assert np.array_equal(a, b)

    @settings(max_examples=60, deadline=None)
    @given(small_mats, st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2)]))
    def test_howell_span_equals_row_span(self, rows, pe):
        p, e = pe
        rows = np.array(rows, dtype=np.int64)
        basis = zmod.howell_form(rows, p, e)
        assert brute_span(basis, p, e) == brute_span(rows, p, e)

    @settings(max_examples=60, deadline=None)
    @given(small_mats, st.sampled_from([(2, 2), (3, 2), (5, 1)]))
    def test_membership_agrees_with_brute_force(self, rows, pe):
        p, e = pe
        rows = np.array(rows, dtype=np.int64)
        basis = zmod.howell_form(rows, p, e)
        span = brute_span(rows, p, e)
        probe = rows[0] if rows.size else np.zeros(2, dtype=np.int64)
        assert zmod.in_span(basis, probe, p, e) == (tuple(probe % p**e) in span)

    @settings(max_examples=40, deadline=None)
    @given(small_mats, st.sampled_from([(2, 2), (3, 2)]))
    def test_span_elements_complete(self, rows, pe):
        p, e = pe
        basis = zmod.howell_form(np.array(rows, dtype=np.int64), p, e)
        elems = zmod.span_elements(basis, p, e)
        assert {tuple(v) for v in elems} == brute_span(rows, p, e)
        assert len(elems) == zmod.span_size(basis, p, e)


class TestSpanAlgebra:
    def test_sum_and_intersection_sizes(self):
        p, e = 2, 2
        b1 = zmod.howell_form(np.array([[1, 0]]), p, e)
        b2 = zmod.howell_form(np.array([[0, 1]]), p, e)
        total = zmod.span_sum(b1, b2, p, e)
        meet = zmod.span_intersection(b1, b2, p, e)
        assert zmod.span_size(total, p, e) == 16
        assert zmod.span_size(meet, p, e) == 1

    @settings(max_examples=40, deadline=None)
    @given(small_mats, small_mats)
    def test_modular_law_of_sizes(self, r1, r2):
        p, e = 2, 2
        r1 = np.array(r1, dtype=np.int64)
        r2 = np.array(r2, dtype=np.int64)
        cols = max(r1.shape[1], r2.shape[1])
        r1 = np.pad(r1, ((0, 0), (0, cols - r1.shape[1])))
        r2 = np.pad(r2, ((0, 0), (0, cols - r2.shape[1])))
        b1 = zmod.howell_form(r1, p, e)
        b2 = zmod.howell_form(r2, p, e)
        s = zmod.span_size(zmod.span_sum(b1, b2, p, e), p, e)
        m = zmod.span_size(zmod.span_intersection(b1, b2, p, e), p, e)
        assert s * m == zmod.span_size(b1, p, e) * zmod.span_size(b2, p, e)

    def test_spans_equal_on_rescaled_basis(self):
        b1 = np.array([[1, 2]], dtype=np.int64)
        b2 = np.array([[3, 6]], dtype=np.int64)  # 3 is a unit mod 4
        assert zmod.spans_equal(
            zmod.howell_form(b1, 2, 2), zmod.howell_form(b2, 2, 2), 2, 2
        )


def list_mat_mul(a, b):
    return [
        [sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a
    ]


class TestDiagonalize:
    @settings(max_examples=80, deadline=None)
    @given(small_mats)
    def test_uav_is_diagonal_with_unimodular_factors(self, rows):
        mat = [[int(x) - 4 for x in row] for row in rows]
        diag, u, v, vinv = zmod.diagonalize(mat)
        uav = list_mat_mul(list_mat_mul(u, mat), v)
        for i, row in enumerate(uav):
            for j, entry in enumerate(row):
                want = diag[j] if i == j else 0
                assert entry == want
        n = len(v)
        ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        assert list_mat_mul(v, vinv) == ident

    def test_left_null_lattice_kills_matrix(self):
        mat = [[2, 4], [1, 2], [3, 6]]
        null = zmod.left_null_lattice(mat)
        assert null.shape[0] == 2  # rank 1 matrix with 3 rows
        prod = list_mat_mul([[int(x) for x in row] for row in null], mat)
        assert all(all(x == 0 for x in row) for row in prod)

    def test_left_null_lattice_of_full_rank_matrix_is_empty(self):
        null = zmod.left_null_lattice([[1, 0], [0, 1]])
        assert null.shape[0] == 0
