"""Constructors for the local rings the test suites and fixtures use.

Everything here builds `FiniteLocalRing` instances: truncated coefficient
rings Z/p^e, truncated polynomial rings, mixed-torsion rings whose additive
group is not homogeneous, and the exhaustive family of two-variable monomial
quotients of F_p[x, y] indexed by partitions.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .localring import (
    FiniteLocalRing,
    adjoin_multi_square_zero,
    adjoin_square_zero,
)


def truncated_coefficient_ring(p: int, e: int) -> FiniteLocalRing:
    """Z/p^e as a rank-one ring with designated ideal (p)."""
    return FiniteLocalRing(
        p,
        e,
        [p**e],
        [[[1]]],
        [1],
        ideal_gens=[[p]] if e > 1 else [],
        basis_names=["1"],
        name=f"Z{p**e}",
    )


def poly_quotient_ring(p: int, e: int, k: int) -> FiniteLocalRing:
    """(Z/p^e)[y] / (y^k) with designated ideal (y)."""
    if k < 1:
        raise ValueError("truncation order must be positive")
    structure = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            if i + j < k:
                structure[i, j, i + j] = 1
    unit = [1] + [0] * (k - 1)
    gens = []
    if k > 1:
        gens.append([0, 1] + [0] * (k - 2))
    elif e > 1:
        gens.append([p])
    names = ["1"] + [f"y^{i}" if i > 1 else "y" for i in range(1, k)]
    base = f"F{p}" if e == 1 else f"Z{p ** e}"
    return FiniteLocalRing(
        p,
        e,
        [p**e] * k,
        structure,
        unit,
        ideal_gens=gens,
        basis_names=names,
        name=f"{base}[y]/y^{k}",
    )


def mixed_torsion_ring(p: int) -> FiniteLocalRing:
    """Z/p²[t] / (t³, p·t): additive group Z/p² ⊕ Z/p ⊕ Z/p.

    The designated ideal is (t) = {b·t + c·t²}, of size p²; its product with
    the maximal ideal is the line (t²), which makes this the smallest family
    whose splitting needs the subring-pullback recursion rather than a single
    square-zero tower.
    """
    structure = np.zeros((3, 3, 3), dtype=np.int64)
    structure[0, 0, 0] = 1  # 1·1
    structure[0, 1, 1] = structure[1, 0, 1] = 1  # 1·t
    structure[0, 2, 2] = structure[2, 0, 2] = 1  # 1·t²
    structure[1, 1, 2] = 1  # t·t = t²
    return FiniteLocalRing(
        p,
        2,
        [p**2, p, p],
        structure,
        [1, 0, 0],
        ideal_gens=[[0, 1, 0]],
        basis_names=["1", "t", "t^2"],
        name=f"Z{p ** 2}[t]/(t^3,{p}t)",
    )


# ---------------------------------------------------------------------------
# two-variable monomial quotients, indexed by partitions
# ---------------------------------------------------------------------------


def partitions_of(n: int) -> List[Tuple[int, ...]]:
    """All partitions of n, largest part first, in lexicographic order."""
    if n == 0:
        return [()]
    out: List[Tuple[int, ...]] = []

    def rec(remaining: int, cap: int, prefix: Tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return out


def staircase_monomials(shape: Sequence[int]) -> List[Tuple[int, int]]:
    """Monomial exponent pairs (i, j) with j < len(shape) and i < shape[j].

    shape must be weakly decreasing, so the set is closed under division;
    the pairs are ordered by total degree, then by power of the first
    variable, which puts (0, 0) first.
    """
    shape = list(shape)
    if any(shape[t] < shape[t + 1] for t in range(len(shape) - 1)):
        raise ValueError("shape must be weakly decreasing")
    monos = [(i, j) for j in range(len(shape)) for i in range(shape[j])]
    monos.sort(key=lambda m: (m[0] + m[1], m[1]))
    return monos


def monomial_ring(p: int, shape: Sequence[int]) -> FiniteLocalRing:
    """F_p[x, y] / (monomials outside the staircase of `shape`).

    Basis monomials multiply by exponent addition, truncated to zero when
    the product leaves the staircase.  The designated ideal is the maximal
    ideal (every non-constant basis monomial).
    """
    monos = staircase_monomials(shape)
    index = {m: t for t, m in enumerate(monos)}
    d = len(monos)
    structure = np.zeros((d, d, d), dtype=np.int64)
    for a, (i1, j1) in enumerate(monos):
        for b, (i2, j2) in enumerate(monos):
            target = (i1 + i2, j1 + j2)
            if target in index:
                structure[a, b, index[target]] = 1
    unit = [0] * d
    unit[index[(0, 0)]] = 1
    gens = []
    for m, t in sorted(index.items(), key=lambda kv: kv[1]):
        if m != (0, 0):
            v = [0] * d
            v[t] = 1
            gens.append(v)
    names = [
        "1" if m == (0, 0) else ("x" * m[0] + "y" * m[1]) for m in monos
    ]
    shape_tag = "".join(str(c) for c in shape)
    return FiniteLocalRing(
        p,
        1,
        [p] * d,
        structure,
        unit,
        ideal_gens=gens,
        basis_names=names,
        name=f"F{p}[x,y]@{shape_tag}",
    )


def monomial_rings_up_to(p: int, max_dim: int) -> List[FiniteLocalRing]:
    """Every two-variable monomial quotient of F_p-dimension up to max_dim."""
    out = []
    for d in range(1, max_dim + 1):
        for shape in partitions_of(d):
            out.append(monomial_ring(p, shape))
    return out


def socle_line_indices(ring: FiniteLocalRing) -> List[int]:
    """Basis indices spanning one-dimensional ideals killed by the maximal ideal.

    For a monomial ring these are the maximal staircase monomials; computed
    here directly from the structure constants, so it works for any ring
    whose basis vectors are p-torsion: index t qualifies when b_t times
    every non-unit basis element vanishes.
    """
    m = ring.maximal_ideal()
    out = []
    for t in range(ring.rank):
        v = ring._basis_vector(t)
        if ring.is_unit(v) or int(ring.moduli[t]) != ring.p:
            continue
        killed = all(
            not ring.mul(v, g).any() for g in m.generators
        )
        if killed and m.contains(v):
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# the shipped fixture catalogue
# ---------------------------------------------------------------------------


def shipped_rings() -> Dict[str, FiniteLocalRing]:
    """Name → ring for the shipped fixture catalogue.

    Every member satisfies the commutator/p-th-power identity
    [Γ,Γ]Γ^p = 1 + M₂((I², pI)) for its designated ideal, which the
    verification suite re-derives by group closure on each run.  Rings on
    which that identity provably fails live in
    `frattini_counterexample_rings` instead; they are exercised by the
    dichotomy, tower and lift tests but carry their own expected verdicts.
    """
    rings: Dict[str, FiniteLocalRing] = {}
    rings["f2_y2"] = poly_quotient_ring(2, 1, 2)
    rings["f2_y3"] = poly_quotient_ring(2, 1, 3)
    rings["f3_y2"] = poly_quotient_ring(3, 1, 2)
    rings["z4"] = truncated_coefficient_ring(2, 2)
    rings["z9"] = truncated_coefficient_ring(3, 2)
    rings["z4_sq"] = adjoin_square_zero(rings["z4"], name="Z4[x]/(x^2,2x)")
    rings["z9_sq"] = adjoin_square_zero(rings["z9"], name="Z9[x]/(x^2,3x)")
    rings["mixed4"] = mixed_torsion_ring(2)
    for tag in ("2", "11", "21", "111", "3", "31", "211"):
        rings[f"mono2_{tag}"] = monomial_ring(2, tuple(int(c) for c in tag))
    for tag in ("2", "11", "21"):
        rings[f"mono3_{tag}"] = monomial_ring(3, tuple(int(c) for c in tag))
    return rings


def frattini_counterexample_rings() -> Dict[str, FiniteLocalRing]:
    """Rings whose congruence group refutes the pair-ideal identity.

    On each of these, the subgroup generated by commutators and p-th powers
    of 1 + M₂(I) is strictly smaller than 1 + M₂((I², pI)): for p = 3 the
    cube map is trivial and commutators are trace-free, so the scalar trace
    direction of the pair ideal is never reached; for p = 2 the squaring
    map a ↦ a² is additive, so products outside the span of squares (and
    every trace at nilpotency depth ≥ 4) are missed.  The deficits are
    exact and cross-checked against brute-force subgroup generation in the
    test suite.
    """
    rings: Dict[str, FiniteLocalRing] = {}
    rings["f2_y4"] = poly_quotient_ring(2, 1, 4)
    rings["f2_y5"] = poly_quotient_ring(2, 1, 5)
    rings["f3_y3"] = poly_quotient_ring(3, 1, 3)
    rings["f3_y4"] = poly_quotient_ring(3, 1, 4)
    rings["mixed9"] = mixed_torsion_ring(3)
    rings["mono2_22"] = monomial_ring(2, (2, 2))
    rings["mono2_4"] = monomial_ring(2, (4,))
    rings["mono3_3"] = monomial_ring(3, (3,))
    rings["mono3_111"] = monomial_ring(3, (1, 1, 1))
    return rings
