"""Rank-2 subgroup combinatorics over elementary abelian groups.

Everything here lives inside (Z/p)^{2n}: enumerating the rank-2 subgroups,
attaching to each one a congruence plan (a small case analysis producing two
exponent vectors), assembling the plans into global exponent tables for a
pair of formal products, checking that an isotypic projection preserves the
exponent patterns, and two spanning criteria for families of subgroups (a
wedge-rank test and a constructive intersection-based basis extraction).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import GuardExceeded
from .groups import FiniteGroup
from .modrep import IsotypicProjector

ENUMERATION_GUARD = 1 << 20


@dataclass(frozen=True)
class ElementaryAbelian:
    """The group (Z/p)^rank, carried around as plain coordinate data."""

    p: int
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")

    @property
    def order(self) -> int:
        return self.p**self.rank


@dataclass
class SubgroupFamily:
    """A list of subgroups of an elementary abelian group.

    Each member is a matrix whose rows generate the subgroup; rows are kept
    linearly independent (checked on construction).
    """

    ambient: ElementaryAbelian
    members: List[np.ndarray]

    def __post_init__(self):
        p = self.ambient.p
        cleaned = []
        for k, m in enumerate(self.members):
            m = np.asarray(m, dtype=np.int64) % p
            if m.ndim != 2 or m.shape[1] != self.ambient.rank:
                raise ValueError(f"member {k} has the wrong shape")
            if linalg.rank(m, p) != m.shape[0]:
                raise ValueError(f"member {k} has dependent generator rows")
            cleaned.append(m)
        self.members = cleaned

    def __len__(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {
            "p": self.ambient.p,
            "rank": self.ambient.rank,
            "members": [m.tolist() for m in self.members],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SubgroupFamily":
        amb = ElementaryAbelian(int(data["p"]), int(data["rank"]))
        return cls(amb, [np.array(m, dtype=np.int64) for m in data["members"]])


def count_rank2_subgroups(p: int, n: int) -> int:
    """Number of rank-2 subgroups of (Z/p)^{2n}, as an exact integer."""
    q = p ** (2 * n)
    num = (q - 1) * (q - p)
    den = (p * p - 1) * (p * p - p)
    if num % den:
        raise AssertionError("subgroup count formula did not divide exactly")
    return num // den


def enumerate_rank2_subgroups(p: int, n: int) -> SubgroupFamily:
    """All rank-2 subgroups of (Z/p)^{2n}, one reduced-echelon basis each.

    Members are sorted lexicographically by their flattened echelon matrix.
    The count is checked against the closed-form formula.
    """
    m = 2 * n
    if p**m > ENUMERATION_GUARD:
        raise GuardExceeded(f"p^(2n) = {p ** m} exceeds the enumeration guard")
    members: List[np.ndarray] = []
    for j1 in range(m):
        for j2 in range(j1 + 1, m):
            free1 = [k for k in range(j1 + 1, m) if k != j2]
            free2 = [k for k in range(j2 + 1, m)]
            for vals1 in itertools.product(range(p), repeat=len(free1)):
                for vals2 in itertools.product(range(p), repeat=len(free2)):
                    b = np.zeros((2, m), dtype=np.int64)
                    b[0, j1] = 1
                    b[0, free1] = vals1
                    b[1, j2] = 1
                    b[1, free2] = vals2
                    members.append(b)
    members.sort(key=lambda b: b.reshape(-1).tolist())
    fam = SubgroupFamily(ElementaryAbelian(p, m), members)
    if len(fam) != count_rank2_subgroups(p, n):
        raise AssertionError("echelon enumeration disagrees with the count formula")
    return fam


@dataclass
class CongruencePlan:
    """The case analysis attached to one rank-2 subgroup ⟨u, w⟩.

    `i` and `j` are 1-based indices into 1..n.  `a_exp` and `b_exp` are the
    two length-n exponent vectors the plan emits; their concatenation is a
    scalar multiple of the concatenation of `c` and `d`, which in turn spans
    span{u, w} together with u.
    """

    ell: int
    case_tag: str
    i: int
    j: int
    c: np.ndarray
    d: np.ndarray
    a_exp: np.ndarray
    b_exp: np.ndarray
    u: np.ndarray
    w: np.ndarray
    p: int

    def validate(self):
        p = self.p
        cd = np.concatenate([self.c, self.d]) % p
        if not cd.any():
            raise AssertionError("both auxiliary vectors vanish")
        uw = np.vstack([self.u, self.w]) % p
        if not linalg.in_row_space(uw, cd, p):
            raise AssertionError("auxiliary vector leaves span{u, w}")
        if linalg.in_row_space(self.u.reshape(1, -1) % p, cd, p):
            raise AssertionError("auxiliary vector stays inside span{u}")
        ab = np.concatenate([self.a_exp, self.b_exp]) % p
        if not linalg.in_row_space(uw, ab, p):
            raise AssertionError("exponent vector leaves span{u, w}")
        if linalg.in_row_space(self.u.reshape(1, -1) % p, ab, p):
            raise AssertionError("exponent vector stays inside span{u}")

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "case": self.case_tag,
            "i": self.i,
            "j": self.j,
            "c": self.c.tolist(),
            "d": self.d.tolist(),
            "a_exp": self.a_exp.tolist(),
            "b_exp": self.b_exp.tolist(),
            "u": self.u.tolist(),
            "w": self.w.tolist(),
            "p": self.p,
        }


def congruence_plan(
    u: Sequence[int], w: Sequence[int], p: int, ell: int = 0
) -> CongruencePlan:
    """Build the four-case congruence plan for an independent pair (u, w).

    Writing u = (a | b) and w = (x | y) in halves of length n, the plan picks
    the first case that applies (some a_i ≠ 0, else some b_i ≠ 0, least i),
    forms the auxiliary vectors c and d, then branches on whether the
    off-index part of c (case 1) or d (case 2) vanishes.  The emitted
    exponent vectors are the normalized c, d so that position j carries
    exponent 1.
    """
    u = np.asarray(u, dtype=np.int64) % p
    w = np.asarray(w, dtype=np.int64) % p
    if u.shape != w.shape or u.ndim != 1 or u.shape[0] % 2:
        raise ValueError("u and w must be equal-length even-dimensional vectors")
    if linalg.rank(np.vstack([u, w]), p) != 2:
        raise ValueError("u and w must be linearly independent mod p")
    n = u.shape[0] // 2
    a, b = u[:n], u[n:]
    x, y = w[:n], w[n:]

    a_nz = np.flatnonzero(a)
    if a_nz.size:
        i0 = int(a_nz[0])  # 0-based
        ai, xi = int(a[i0]), int(x[i0])
        c = (x * ai - xi * a) % p
        c[i0] = 0
        d = (y * ai - xi * b) % p
        off = [j for j in range(n) if j != i0 and c[j]]
        if off:
            j0 = off[0]
            inv = linalg.inv_mod(int(c[j0]), p)
            a_exp = (c * inv) % p
            a_exp[i0] = 0
            a_exp[j0] = 1
            b_exp = (d * inv) % p
            tag = "1a"
        else:
            d_nz = np.flatnonzero(d)
            if not d_nz.size:
                raise AssertionError("both c and d vanish in case 1")
            j0 = int(d_nz[0])
            inv = linalg.inv_mod(int(d[j0]), p)
            a_exp = (c * inv) % p
            a_exp[i0] = 0
            b_exp = (d * inv) % p
            b_exp[j0] = 1
            tag = "1b"
    else:
        b_nz = np.flatnonzero(b)
        if not b_nz.size:
            raise ValueError("u must be nonzero")
        i0 = int(b_nz[0])
        bi, yi = int(b[i0]), int(y[i0])
        c = (x * bi - yi * a) % p
        d = (y * bi - yi * b) % p
        d[i0] = 0
        off = [j for j in range(n) if j != i0 and d[j]]
        if off:
            j0 = off[0]
            inv = linalg.inv_mod(int(d[j0]), p)
            a_exp = (c * inv) % p
            b_exp = (d * inv) % p
            b_exp[i0] = 0
            b_exp[j0] = 1
            tag = "2a"
        else:
            c_nz = np.flatnonzero(c)
            if not c_nz.size:
                raise AssertionError("both c and d vanish in case 2")
            j0 = int(c_nz[0])
            inv = linalg.inv_mod(int(c[j0]), p)
            a_exp = (c * inv) % p
            a_exp[j0] = 1
            b_exp = (d * inv) % p
            b_exp[i0] = 0
            tag = "2b"

    plan = CongruencePlan(
        ell=ell,
        case_tag=tag,
        i=i0 + 1,
        j=j0 + 1,
        c=c,
        d=d,
        a_exp=a_exp,
        b_exp=b_exp,
        u=u,
        w=w,
        p=p,
    )
    plan.validate()
    return plan


def plans_for_family(family: SubgroupFamily) -> List[CongruencePlan]:
    """One congruence plan per family member, from its echelon generator pair."""
    return [
        congruence_plan(m[0], m[1], family.ambient.p, ell=k)
        for k, m in enumerate(family.members)
    ]


# -- exponent tables ---------------------------------------------------------------


@dataclass
class ExponentTables:
    """Exponents of two formal products over a family of free orbit labels.

    The label set is phi × {0..num_labels-1}; entry s[h, ell] is the exponent
    of the label (h, ell) in the first product, t likewise for the second.
    """

    phi: FiniteGroup
    p: int
    num_labels: int
    s: np.ndarray
    t: np.ndarray

    def copy(self) -> "ExponentTables":
        return ExponentTables(self.phi, self.p, self.num_labels, self.s.copy(), self.t.copy())


def assemble_nu_exponents(
    plans: Sequence[CongruencePlan],
    family: SubgroupFamily,
    phi: FiniteGroup,
    designated: Sequence[int],
) -> ExponentTables:
    """Fill exponent tables so each label ℓ stores its generator pair.

    `designated` lists n distinct elements g_1..g_n of phi; the exponent of
    the label (g_k⁻¹, ℓ) in the first product is the k-th entry of the first
    half of u_ℓ, and in the second product the k-th entry of the second half.
    Duplicate designated elements would assign one label twice, so they are
    rejected.
    """
    if len(plans) != len(family):
        raise ValueError("need exactly one plan per family member")
    n = family.ambient.rank // 2
    if len(designated) != n:
        raise ValueError(f"need exactly {n} designated elements")
    if len(set(designated)) != n:
        raise ValueError("designated elements collide: the label set is not free")
    p = family.ambient.p
    s = np.zeros((phi.order, len(plans)), dtype=np.int64)
    t = np.zeros_like(s)
    for ell, plan in enumerate(plans):
        if plan.p != p:
            raise ValueError("plan and family prime mismatch")
        a, b = plan.u[:n], plan.u[n:]
        for k, g in enumerate(designated):
            h = int(phi.inv[g])
            s[h, ell] = int(a[k])
            t[h, ell] = int(b[k])
    return ExponentTables(phi, p, len(plans), s, t)


def readback_pairs(
    tables: ExponentTables,
    plans: Sequence[CongruencePlan],
    designated: Sequence[int],
) -> List[bool]:
    """Check every label reproduces its assigned pair, entry by entry.

    Recovers u_ℓ from the tables at the designated labels, compares with the
    plan's u, and confirms the plan's exponent vector spans span{u, w}
    together with u (so the stored data pins down the subgroup itself).
    """
    phi = tables.phi
    n = len(designated)
    p = tables.p
    out = []
    for ell, plan in enumerate(plans):
        a_read = [int(tables.s[int(phi.inv[g]), ell]) for g in designated]
        b_read = [int(tables.t[int(phi.inv[g]), ell]) for g in designated]
        u_read = np.array(a_read + b_read, dtype=np.int64) % p
        ok = bool(np.array_equal(u_read, plan.u % p))
        v = np.concatenate([plan.a_exp, plan.b_exp]) % p
        span_uv = linalg.row_space(np.vstack([plan.u, v]), p)
        span_uw = linalg.row_space(np.vstack([plan.u, plan.w]), p)
        ok = ok and bool(np.array_equal(span_uv, span_uw))
        out.append(ok)
    return out


def project_tables(
    tables: ExponentTables, projector: IsotypicProjector
) -> ExponentTables:
    """Apply a group-algebra element (by its coefficient map) to both tables.

    The element Σ n_h·h sends the label (x, ℓ) to Σ n_h·(hx, ℓ), so the new
    exponent at (g, ℓ) is Σ_h n_h · old[(h⁻¹g, ℓ)].
    """
    phi = tables.phi
    s_new = np.zeros_like(tables.s)
    t_new = np.zeros_like(tables.t)
    for h, coeff in projector.coefficients.items():
        if coeff % tables.p == 0:
            continue
        rows = phi.mul[int(phi.inv[h]), :]  # h⁻¹g for each g
        s_new = (s_new + coeff * tables.s[rows]) % tables.p
        t_new = (t_new + coeff * tables.t[rows]) % tables.p
    return ExponentTables(phi, tables.p, tables.num_labels, s_new, t_new)


def verify_projection_stability(
    tables: ExponentTables,
    projector: IsotypicProjector,
    family: SubgroupFamily,
    designated: Sequence[int],
) -> Tuple[bool, List[Optional[int]]]:
    """Does every member's generator pattern survive the projection?

    After projecting, member ℓ's pattern (a | b) = u_ℓ must reappear at the
    labels (g_k⁻¹f, ℓ) for some single direction f in phi.  Returns the
    overall verdict plus, per member, the first matching f (or None).
    """
    phi = tables.phi
    p = tables.p
    n = family.ambient.rank // 2
    projected = project_tables(tables, projector)
    matches: List[Optional[int]] = []
    for ell, member in enumerate(family.members):
        u = member[0] % p
        a, b = u[:n], u[n:]
        found = None
        for f in range(phi.order):
            ok = True
            for k, g in enumerate(designated):
                lbl = phi.op(int(phi.inv[g]), f)
                if projected.s[lbl, ell] != a[k] or projected.t[lbl, ell] != b[k]:
                    ok = False
                    break
            if ok:
                found = f
                break
        matches.append(found)
    return all(m is not None for m in matches), matches


# -- wedge criterion ---------------------------------------------------------------


def _wedge_coords(v1: np.ndarray, v2: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of v1 ∧ v2 in the basis e_i ∧ e_j, pairs (i < j) in lex order."""
    m = v1.shape[0]
    out = []
    for i in range(m):
        for j in range(i + 1, m):
            out.append((int(v1[i]) * int(v2[j]) - int(v1[j]) * int(v2[i])) % p)
    return np.array(out, dtype=np.int64)


def wedge_surjectivity(family: SubgroupFamily) -> Tuple[bool, int, int]:
    """Whether the wedges of the family members span the full exterior square.

    Returns (surjective, achieved rank, required rank); the required rank is
    C(m, 2) for ambient rank m.
    """
    p = family.ambient.p
    m = family.ambient.rank
    required = m * (m - 1) // 2
    rows = []
    for member in family.members:
        r = member.shape[0]
        for s_i in range(r):
            for t_i in range(s_i + 1, r):
                rows.append(_wedge_coords(member[s_i], member[t_i], p))
    if not rows:
        return (required == 0, 0, required)
    achieved = linalg.rank(np.array(rows, dtype=np.int64), p)
    return achieved == required, achieved, required


# -- constructive spanning basis ---------------------------------------------------


def pair_index(i: int, j: int, two_n: int) -> int:
    """Position of the pair {i, j} (1-based, i < j) in the standard ordering.

    Pairs are ordered (1,2), (1,3), …, (1,2n), (2,3), …: all pairs with first
    index 1 first, then first index 2, and so on.
    """
    if not (1 <= i < j <= two_n):
        raise ValueError("need 1 <= i < j <= 2n")
    k = (i - 1) * two_n - (i - 1) * i // 2
    return k + (j - i) - 1


@dataclass
class WedgeCertificate:
    """x_i ∧ x_j realized inside the exterior square of one family member."""

    i: int
    j: int
    member: int
    coefficients: List[int]


@dataclass
class SpanningBasis:
    basis: np.ndarray  # rows x_1..x_{2n}
    intersections: List[np.ndarray]
    certificates: List[WedgeCertificate]


def select_spanning_basis(family: SubgroupFamily) -> SpanningBasis:
    """Extract a basis from pairwise intersections of a pair-indexed family.

    The family must contain one member per pair {i, j} ⊆ {1..2n}, positioned
    by `pair_index`.  The m-th group is the intersection of all members whose
    pair contains m; it must be a line, whose canonical generator becomes
    x_m.  Certificates place each wedge x_i ∧ x_j inside the exterior square
    of the member at pair_index(i, j).
    """
    p = family.ambient.p
    two_n = family.ambient.rank
    n = two_n // 2
    expected = n * (2 * n - 1)
    if len(family) != expected:
        raise ValueError(
            f"family has {len(family)} members; a pair-indexed family needs {expected}"
        )
    if n == 1:
        d = family.members[0]
        basis = d.copy() % p
        cert = WedgeCertificate(i=1, j=2, member=0, coefficients=[1])
        return SpanningBasis(basis=basis, intersections=[d.copy(), d.copy()], certificates=[cert])

    lines: List[np.ndarray] = []
    for m_idx in range(1, two_n + 1):
        cur: Optional[np.ndarray] = None
        for other in range(1, two_n + 1):
            if other == m_idx:
                continue
            i, j = min(m_idx, other), max(m_idx, other)
            mem = family.members[pair_index(i, j, two_n)]
            cur = mem % p if cur is None else linalg.intersect_row_spaces(cur, mem % p, p)
        if cur is None or cur.shape[0] != 1:
            got = 0 if cur is None else cur.shape[0]
            raise ValueError(
                f"intersection for index {m_idx} has rank {got}, expected a line"
            )
        lines.append(cur[0])
    basis = np.array(lines, dtype=np.int64)
    if linalg.rank(basis, p) != two_n:
        raise ValueError("extracted intersection lines do not form a basis")

    certificates: List[WedgeCertificate] = []
    for i in range(1, two_n + 1):
        for j in range(i + 1, two_n + 1):
            k = pair_index(i, j, two_n)
            mem = family.members[k]
            target = _wedge_coords(basis[i - 1], basis[j - 1], p)
            gen_wedges = []
            r = mem.shape[0]
            for s_i in range(r):
                for t_i in range(s_i + 1, r):
                    gen_wedges.append(_wedge_coords(mem[s_i], mem[t_i], p))
            gw = np.array(gen_wedges, dtype=np.int64)
            sol = linalg.solve(gw.T, target, p)
            if sol is None:
                raise AssertionError(
                    f"wedge of basis lines {i},{j} escapes its member's exterior square"
                )
            certificates.append(
                WedgeCertificate(i=i, j=j, member=k, coefficients=[int(v) for v in sol])
            )
    return SpanningBasis(basis=basis, intersections=[l.reshape(1, -1) for l in lines], certificates=certificates)
