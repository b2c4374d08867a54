"""Finite commutative local rings and matrix congruence-subgroup machinery.

A ring here is presented by structure constants over a coefficient ring
Z/p^e: the additive group is a direct sum of cyclic p-groups (one modulus
per basis element, each dividing p^e), multiplication is a rank³ table, and
the ring carries a designated ideal whose congruence subgroup 1 + M₂(I)
drives everything downstream.  The main operations are: quotients by ideals
(presented through integer diagonalization), cotangent computations, a
verified Frattini-subgroup identity for congruence groups, the containment /
square-zero dichotomy for one-dimensional kernels, exhaustive search for
homomorphism lifts along ring surjections, and the tower constructions that
split a surjection with square-zero layers.

All certificates are constructive: memberships come with coefficients,
isomorphisms come with explicit matrices checked on every basis pair, and
negative results come with the exhausted search space or the containment
data that makes the Frattini argument run.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import zmod
from .errors import GuardExceeded
from .groups import FiniteGroup, MAX_TABLE_ORDER

TABLE_ELEMENT_GUARD = 1 << 12  # largest ring given full operation tables
FRATTINI_GUARD = 1 << 20  # largest congruence group closed element-by-element
LIFT_SEARCH_GUARD = 1 << 24  # largest generator-correction search space


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _log_p(x: int, p: int) -> int:
    """Exact base-p logarithm; raises if x is not a power of p."""
    k = 0
    while x > 1:
        if x % p:
            raise ValueError(f"{x} is not a power of {p}")
        x //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# the ring class
# ---------------------------------------------------------------------------


class FiniteLocalRing:
    """A finite commutative local ring presented by structure constants.

    The additive group is ⊕_i Z/moduli[i]·b_i with every modulus a power of
    the prime p dividing p^e, and structure[i][j] holds the coordinates of
    b_i·b_j.  The unit must have additive order exactly p^e (the ring is an
    algebra over Z/p^e through 1), the non-units must form an ideal with
    quotient field of size p, and the designated ideal (`ideal_gens`) must
    consist of non-units.  When no ideal generators are given and the
    leading basis element is the unit, the designated ideal defaults to the
    span of the remaining basis elements.
    """

    def __init__(
        self,
        p: int,
        e: int,
        moduli: Sequence[int],
        structure,
        unit: Sequence[int],
        ideal_gens: Optional[Sequence[Sequence[int]]] = None,
        basis_names: Optional[Sequence[str]] = None,
        name: str = "",
        validate: bool = True,
    ):
        self.p = int(p)
        self.e = int(e)
        self.moduli = np.asarray(moduli, dtype=np.int64)
        self.rank = int(len(self.moduli))
        self.structure = np.asarray(structure, dtype=np.int64) % self.moduli[None, None, :]
        self.unit = np.asarray(unit, dtype=np.int64) % self.moduli
        self.size = int(np.prod(self.moduli))
        self.name = name or f"R{self.size}"
        if basis_names is None:
            basis_names = [f"b{i}" for i in range(self.rank)]
        self.basis_names = list(basis_names)
        # mixed-radix weights: code = Σ c_i · w_i, lexicographic in coordinates
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.moduli[i + 1]
        self._weights = w
        self._scale = (self.p**self.e) // self.moduli  # additive embedding into ⊕Z/p^e
        if ideal_gens is None:
            if not np.array_equal(self.unit, self._basis_vector(0)) and self.rank > 1:
                raise ValueError(
                    "ideal_gens required when the leading basis element is not the unit"
                )
            ideal_gens = [self._basis_vector(i) for i in range(1, self.rank)]
        self.ideal_gens = [np.asarray(g, dtype=np.int64) % self.moduli for g in ideal_gens]
        self._tables: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None
        self._elements: Optional[np.ndarray] = None
        self._unit_mask: Optional[np.ndarray] = None
        self._designated: Optional["RingIdeal"] = None
        self._maximal: Optional["RingIdeal"] = None
        if validate:
            self.validate()

    # -- plain coordinate arithmetic ---------------------------------------

    def _basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.rank, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.rank, dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.unit.copy()

    def add(self, u, v) -> np.ndarray:
        return (np.asarray(u) + np.asarray(v)) % self.moduli

    def neg(self, u) -> np.ndarray:
        return (-np.asarray(u)) % self.moduli

    def smul(self, c: int, u) -> np.ndarray:
        return (int(c) * np.asarray(u)) % self.moduli

    def mul(self, u, v) -> np.ndarray:
        out = np.einsum("i,j,ijk->k", np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64), self.structure)
        return out % self.moduli

    def additive_order(self, u) -> int:
        u = np.asarray(u, dtype=np.int64) % self.moduli
        order = 1
        for c, m in zip(u.tolist(), self.moduli.tolist()):
            o = m // math.gcd(m, int(c))
            order = order * o // math.gcd(order, o)
        return order

    # -- integer codes (mixed radix, lexicographic in coordinates) ---------

    def encode(self, coords) -> int:
        c = np.asarray(coords, dtype=np.int64) % self.moduli
        return int((c * self._weights).sum())

    def decode(self, code) -> np.ndarray:
        code = np.asarray(code, dtype=np.int64)
        return (code[..., None] // self._weights) % self.moduli

    def elements_coords(self) -> np.ndarray:
        """All ring elements as coordinate rows, in code order."""
        if self._elements is None:
            self._elements = self.decode(np.arange(self.size))
        return self._elements

    # -- operation tables ---------------------------------------------------

    def tables(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(add, mul, neg) tables over element codes; built lazily."""
        if self._tables is None:
            if self.size > TABLE_ELEMENT_GUARD:
                raise GuardExceeded(
                    f"ring of size {self.size} exceeds the table guard {TABLE_ELEMENT_GUARD}"
                )
            elems = self.elements_coords()
            add_t = np.empty((self.size, self.size), dtype=np.int64)
            mul_t = np.empty((self.size, self.size), dtype=np.int64)
            for i in range(self.size):
                add_t[i] = ((elems[i] + elems) % self.moduli) @ self._weights
                m_i = np.einsum("a,ajk->jk", elems[i], self.structure)
                mul_t[i] = ((elems @ m_i) % self.moduli) @ self._weights
            neg_t = ((-elems) % self.moduli) @ self._weights
            self._tables = (add_t, mul_t, neg_t)
        return self._tables

    def unit_mask(self) -> np.ndarray:
        """Boolean mask over codes marking the multiplicatively invertible elements."""
        if self._unit_mask is None:
            _, mul_t, _ = self.tables()
            self._unit_mask = (mul_t == self.encode(self.unit)).any(axis=1)
        return self._unit_mask

    def is_unit(self, coords) -> bool:
        return bool(self.unit_mask()[self.encode(coords)])

    # -- additive embedding into ⊕ Z/p^e ------------------------------------

    def embed(self, coords) -> np.ndarray:
        """Injective additive map into (Z/p^e)^rank, coordinate i scaled by p^e/m_i."""
        return (np.asarray(coords, dtype=np.int64) % self.moduli) * self._scale

    def unembed(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64) % (self.p**self.e)
        if np.any(v % self._scale):
            raise ValueError("vector is not in the embedded lattice")
        return (v // self._scale) % self.moduli

    # -- designated structures ----------------------------------------------

    def designated_ideal(self) -> "RingIdeal":
        if self._designated is None:
            self._designated = ideal_span(self, self.ideal_gens)
        return self._designated

    def maximal_ideal(self) -> "RingIdeal":
        """The ideal of non-units (the ring is local, so this is an ideal)."""
        if self._maximal is None:
            mask = self.unit_mask()
            rows = self.elements_coords()[~mask]
            h = zmod.howell_form(self.embed(rows), self.p, self.e)
            gens = [self.unembed(r) for r in h]
            self._maximal = RingIdeal(self, gens, h)
        return self._maximal

    def residue(self, coords) -> int:
        """Image in the residue field S/m ≅ F_p, as an integer in [0, p)."""
        m = self.maximal_ideal()
        for c in range(self.p):
            if m.contains(self.add(coords, self.smul(-c, self.unit))):
                return c
        raise ValueError("element has no residue; residue field is not F_p")

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        p, e = self.p, self.e
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1:
            raise ValueError("e must be at least 1")
        for m in self.moduli.tolist():
            if m < p or (p**e) % m:
                raise ValueError(f"modulus {m} is not a p-power dividing p^e")
            _log_p(m, p)
        if self.structure.shape != (self.rank, self.rank, self.rank):
            raise ValueError("structure table has wrong shape")
        # scalar consistency: m_i·b_i = 0 forces m_i·(b_i·b_j) = 0
        lhs = (self.moduli[:, None, None] * self.structure) % self.moduli[None, None, :]
        if lhs.any():
            raise ValueError("structure constants inconsistent with coordinate moduli")
        if not np.array_equal(
            self.structure, self.structure.transpose(1, 0, 2) % self.moduli[None, None, :]
        ):
            raise ValueError("multiplication is not commutative")
        for j in range(self.rank):
            if not np.array_equal(self.mul(self.unit, self._basis_vector(j)), self._basis_vector(j)):
                raise ValueError("designated unit is not a left identity")
        left = np.einsum("ijl,lkm->ijkm", self.structure, self.structure) % self.moduli
        right = np.einsum("jkl,ilm->ijkm", self.structure, self.structure) % self.moduli
        if not np.array_equal(left, right):
            raise ValueError("multiplication is not associative")
        if self.additive_order(self.unit) != p**e:
            raise ValueError("the unit must have additive order exactly p^e")
        if self.size > TABLE_ELEMENT_GUARD:
            raise GuardExceeded(
                f"cannot validate locality for a ring of size {self.size}"
            )
        mask = self.unit_mask()
        nonunits = np.flatnonzero(~mask)
        add_t, _, _ = self.tables()
        closed = mask[add_t[np.ix_(nonunits, nonunits)]]
        if closed.any():
            raise ValueError("non-units are not closed under addition; ring is not local")
        if self.size % len(nonunits) or self.size // len(nonunits) != p:
            raise ValueError("residue field is not F_p")
        for g in self.ideal_gens:
            if self.is_unit(g):
                raise ValueError("designated ideal contains a unit")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"FiniteLocalRing({self.name}, p={self.p}, e={self.e}, size={self.size})"


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


@dataclass
class RingIdeal:
    """An ideal, stored as a canonical basis of its additive embedding.

    `generators` are ring-coordinate vectors generating the ideal over the
    ring; `howell` is the canonical Howell basis of the additive subgroup in
    embedded (Z/p^e)-coordinates, which answers membership questions with
    certificates and gives the exact size.
    """

    ring: FiniteLocalRing
    generators: List[np.ndarray]
    howell: np.ndarray
    _elements: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return zmod.span_size(self.howell, self.ring.p, self.ring.e)

    def is_zero(self) -> bool:
        return self.howell.shape[0] == 0

    def contains(self, coords) -> bool:
        return zmod.in_span(self.howell, self.ring.embed(coords), self.ring.p, self.ring.e)

    def membership_certificate(self, coords) -> Optional[np.ndarray]:
        """Coefficients c with embed(coords) = c·howell, or None."""
        if self.howell.shape[0] == 0:
            return np.zeros(0, dtype=np.int64) if not np.any(self.ring.embed(coords)) else None
        res, c = zmod.span_reduce(self.howell, self.ring.embed(coords), self.ring.p, self.ring.e)
        return None if res.any() else c

    def elements_coords(self) -> np.ndarray:
        """All ideal elements as ring coordinates, sorted by element code."""
        if self._elements is None:
            vecs = zmod.span_elements(self.howell, self.ring.p, self.ring.e)
            coords = np.array([self.ring.unembed(v) for v in vecs], dtype=np.int64)
            codes = coords @ self.ring._weights
            self._elements = coords[np.argsort(codes)]
        return self._elements

    def element_codes(self) -> np.ndarray:
        return self.elements_coords() @ self.ring._weights

    def least_nonzero(self) -> np.ndarray:
        """The nonzero element with smallest code (lexicographically least)."""
        if self.size < 2:
            raise ValueError("the zero ideal has no nonzero element")
        return self.elements_coords()[1].copy()

    def fp_dimension(self) -> int:
        """log_p of the size; meaningful when the ideal is elementary abelian."""
        return _log_p(self.size, self.ring.p)


def ideal_span(ring: FiniteLocalRing, gens: Sequence[Sequence[int]]) -> RingIdeal:
    """The ideal generated by `gens`: additive span of all g·b_i."""
    gens = [np.asarray(g, dtype=np.int64) % ring.moduli for g in gens]
    rows = []
    for g in gens:
        for i in range(ring.rank):
            prod = np.einsum("a,ak->k", g, ring.structure[:, i, :]) % ring.moduli
            rows.append(ring.embed(prod))
    if not rows:
        h = np.zeros((0, ring.rank), dtype=np.int64)
    else:
        h = zmod.howell_form(np.array(rows), ring.p, ring.e)
    return RingIdeal(ring, gens, h)


def zero_ideal(ring: FiniteLocalRing) -> RingIdeal:
    return ideal_span(ring, [])


def least_socle_line(ring: FiniteLocalRing) -> RingIdeal:
    """The line spanned by the least nonzero element killed by the maximal ideal.

    Socle elements are p-torsion (p·1 is a non-unit annihilating them), so
    the span really is one-dimensional over F_p.
    """
    m = ring.maximal_ideal()
    _, mul_t, _ = ring.tables()
    killed = np.ones(ring.size, dtype=bool)
    for g in m.generators:
        killed &= mul_t[ring.encode(g)] == ring.encode(ring.zero())
    killed[ring.encode(ring.zero())] = False
    codes = np.flatnonzero(killed)
    if codes.size == 0:
        raise ValueError("the ring has no nonzero socle element")
    line = ideal_span(ring, [ring.decode(int(codes[0]))])
    if line.size != ring.p:
        raise AssertionError("socle element does not span an F_p line")
    return line


def ideal_sum(a: RingIdeal, b: RingIdeal) -> RingIdeal:
    h = zmod.span_sum(a.howell, b.howell, a.ring.p, a.ring.e)
    return RingIdeal(a.ring, list(a.generators) + list(b.generators), h)


def ideal_product(a: RingIdeal, b: RingIdeal) -> RingIdeal:
    """The ideal generated by all products of the two generator sets."""
    gens = [a.ring.mul(u, v) for u in a.generators for v in b.generators]
    return ideal_span(a.ring, gens)


def ideal_scale(a: RingIdeal, c: int) -> RingIdeal:
    return ideal_span(a.ring, [a.ring.smul(c, g) for g in a.generators])


def frattini_pair_ideal(i: RingIdeal) -> RingIdeal:
    """The ideal (I², pI)."""
    ring = i.ring
    gens = [ring.mul(u, v) for u in i.generators for v in i.generators]
    gens += [ring.smul(ring.p, g) for g in i.generators]
    return ideal_span(ring, gens)


def ideals_equal(a: RingIdeal, b: RingIdeal) -> bool:
    return bool(np.array_equal(a.howell, b.howell))


# ---------------------------------------------------------------------------
# surjections and quotients
# ---------------------------------------------------------------------------


@dataclass
class RingSurjection:
    """A surjective unital ring map, with a fixed additive set-section.

    apply(x) = (x·matrix) mod target.moduli; lift(y) = (y·lift_matrix) mod
    source.moduli satisfies apply(lift(y)) = y.  The kernel is kept as an
    ideal of the source.
    """

    source: FiniteLocalRing
    target: FiniteLocalRing
    matrix: np.ndarray
    lift_matrix: np.ndarray
    kernel: RingIdeal

    def apply(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=np.int64) @ self.matrix) % self.target.moduli

    def lift(self, y) -> np.ndarray:
        return (np.asarray(y, dtype=np.int64) @ self.lift_matrix) % self.source.moduli

    def validate(self) -> None:
        s, t = self.source, self.target
        if not np.array_equal(self.apply(s.unit), t.unit):
            raise ValueError("surjection does not preserve the unit")
        for i in range(s.rank):
            for j in range(s.rank):
                lhs = self.apply(s.mul(s._basis_vector(i), s._basis_vector(j)))
                rhs = t.mul(self.apply(s._basis_vector(i)), self.apply(s._basis_vector(j)))
                if not np.array_equal(lhs, rhs):
                    raise ValueError("surjection is not multiplicative")
        for j in range(t.rank):
            y = t._basis_vector(j)
            if not np.array_equal(self.apply(self.lift(y)), y):
                raise ValueError("lift is not a section of the surjection")
        for g in self.kernel.generators:
            if np.any(self.apply(g)):
                raise ValueError("kernel generator does not map to zero")
        if s.size != t.size * self.kernel.size:
            raise ValueError("kernel size does not match the index")


def quotient(
    s: FiniteLocalRing, ideal: RingIdeal, name: str = ""
) -> Tuple[FiniteLocalRing, RingSurjection]:
    """The quotient ring S/J with its projection.

    The additive quotient is put in diagonal coordinates by integer
    diagonalization of the relation rows (coordinate moduli plus the ideal's
    additive basis); coordinates with modulus 1 are dropped.
    """
    p, e = s.p, s.e
    ideal_rows = [s.unembed(r) for r in ideal.howell]
    relations = np.vstack(
        [np.diag(s.moduli)] + ([np.array(ideal_rows, dtype=np.int64)] if ideal_rows else [])
    )
    diag, _, v, vinv = zmod.diagonalize(relations)
    if any(d == 0 for d in diag):
        raise ValueError("quotient is not finite; relations are degenerate")
    keep = [j for j, d in enumerate(diag) if d > 1]
    new_moduli = np.array([diag[j] for j in keep], dtype=np.int64)
    for m in new_moduli.tolist():
        _log_p(m, p)
    v_arr = np.array(v, dtype=np.int64)
    vinv_arr = np.array(vinv, dtype=np.int64)
    proj_matrix = v_arr[:, keep] % np.where(new_moduli > 0, new_moduli, 1)
    lift_matrix = vinv_arr[keep, :] % s.moduli

    def proj(x):
        return (np.asarray(x, dtype=np.int64) @ proj_matrix) % new_moduli

    new_rank = len(keep)
    structure = np.zeros((new_rank, new_rank, new_rank), dtype=np.int64)
    for a in range(new_rank):
        for b in range(new_rank):
            structure[a, b] = proj(s.mul(lift_matrix[a], lift_matrix[b]))
    new_unit = proj(s.unit)
    new_gens = [proj(g) for g in s.ideal_gens]
    new_gens = [g for g in new_gens if g.any()]
    new_e = _log_p(
        int(
            np.lcm.reduce(
                [
                    int(m // math.gcd(int(m), int(c)))
                    for c, m in zip(new_unit.tolist(), new_moduli.tolist())
                ]
            )
        )
        if new_rank
        else 1,
        p,
    )
    qring = FiniteLocalRing(
        p,
        new_e,
        new_moduli,
        structure,
        new_unit,
        ideal_gens=new_gens,
        name=name or f"{s.name}/J",
    )
    surj = RingSurjection(s, qring, proj_matrix, lift_matrix, ideal)
    surj.validate()
    return qring, surj


def surjection_onto_quotient_of(
    s: FiniteLocalRing, r: FiniteLocalRing, matrix: np.ndarray
) -> RingSurjection:
    """Package an explicit coordinate matrix S → R as a validated surjection.

    The kernel and a set-section are computed by enumeration (the source is
    small by construction everywhere this is used).
    """
    matrix = np.asarray(matrix, dtype=np.int64)
    elems = s.elements_coords()
    images = (elems @ matrix) % r.moduli
    img_codes = images @ r._weights
    ker_rows = elems[img_codes == r.encode(r.zero())]
    ker_h = zmod.howell_form(s.embed(ker_rows), s.p, s.e)
    kernel = RingIdeal(s, [s.unembed(h) for h in ker_h], ker_h)
    lift_rows = []
    for j in range(r.rank):
        target_code = r.encode(r._basis_vector(j))
        hits = np.flatnonzero(img_codes == target_code)
        if hits.size == 0:
            raise ValueError("matrix is not surjective")
        lift_rows.append(elems[hits[0]])
    surj = RingSurjection(s, r, matrix, np.array(lift_rows, dtype=np.int64), kernel)
    surj.validate()
    return surj


# ---------------------------------------------------------------------------
# cotangent machinery
# ---------------------------------------------------------------------------


def cotangent_denominator(s: FiniteLocalRing) -> RingIdeal:
    """The ideal (m², p) = m² + pS."""
    m = s.maximal_ideal()
    gens = [s.mul(u, v) for u in m.generators for v in m.generators]
    gens += [s.smul(s.p, s._basis_vector(i)) for i in range(s.rank)]
    return ideal_span(s, gens)


@dataclass
class CotangentSpace:
    """m/(m², p) as an F_p-vector space with chosen lifts of a basis."""

    ring: FiniteLocalRing
    dim: int
    basis: List[np.ndarray]  # ring-coordinate lifts
    denominator: RingIdeal


def cotangent_space(s: FiniteLocalRing) -> CotangentSpace:
    m = s.maximal_ideal()
    den = cotangent_denominator(s)
    dim = _log_p(m.size // den.size, s.p)
    chosen: List[np.ndarray] = []
    span = den.howell
    for row in m.howell:
        if len(chosen) == dim:
            break
        if not zmod.in_span(span, row, s.p, s.e):
            chosen.append(s.unembed(row))
            span = zmod.span_sum(span, row.reshape(1, -1), s.p, s.e)
    if len(chosen) != dim:
        raise RuntimeError("failed to extract a cotangent basis")
    return CotangentSpace(s, dim, chosen, den)


@dataclass
class CotangentFate:
    """Where a kernel element sits in the source and target cotangent spaces."""

    dies_in_target: bool
    nonzero_in_source: bool


def cotangent_image_kernel(s: FiniteLocalRing, r_proj: RingSurjection, x) -> CotangentFate:
    """For x in ker(r_proj): its class dies in the target cotangent space,
    and whether it is nonzero in the source cotangent space."""
    x = np.asarray(x, dtype=np.int64) % s.moduli
    if not r_proj.kernel.contains(x):
        raise ValueError("element is not in the kernel of the surjection")
    r = r_proj.target
    dies = cotangent_denominator(r).contains(r_proj.apply(x)) or not np.any(r_proj.apply(x))
    nonzero = not cotangent_denominator(s).contains(x)
    return CotangentFate(dies_in_target=bool(dies), nonzero_in_source=bool(nonzero))


# ---------------------------------------------------------------------------
# subrings
# ---------------------------------------------------------------------------


def subring_closure(s: FiniteLocalRing, elements: Sequence[Sequence[int]]) -> np.ndarray:
    """Howell basis (embedded) of the subring generated by unit + elements."""
    rows = [s.embed(s.unit)] + [s.embed(x) for x in elements]
    cur = zmod.howell_form(np.array(rows), s.p, s.e)
    while True:
        base = [s.unembed(r) for r in cur]
        prods = [s.embed(s.mul(a, b)) for a, b in itertools.combinations_with_replacement(base, 2)]
        nxt = zmod.span_sum(cur, np.array(prods), s.p, s.e)
        if zmod.span_size(nxt, s.p, s.e) == zmod.span_size(cur, s.p, s.e):
            return cur
        cur = nxt


@dataclass
class SubringLift:
    """A subring S' ≤ S mapping isomorphically onto the target of a surjection."""

    ok: bool
    witness: np.ndarray  # the kernel generator excluded from S'
    carrier: np.ndarray  # embedded Howell basis of S'
    section_matrix: np.ndarray  # target basis -> S coordinates, a ring map
    cotangent_ok: bool
    attempts: int


@dataclass
class SubringLiftFailure:
    ok: bool
    witness: np.ndarray
    cotangent_ok: bool
    attempts: int
    reasons: List[str]


def _section_from_carrier(
    s: FiniteLocalRing, r_proj: RingSurjection, carrier: np.ndarray
) -> np.ndarray:
    """Invert r_proj on a carrier that maps bijectively onto the target."""
    r = r_proj.target
    vecs = zmod.span_elements(carrier, s.p, s.e)
    preimage: Dict[int, np.ndarray] = {}
    for v in vecs:
        x = s.unembed(v)
        preimage[r.encode(r_proj.apply(x))] = x
    rows = [preimage[r.encode(r._basis_vector(j))] for j in range(r.rank)]
    return np.array(rows, dtype=np.int64)


def _verify_section(s: FiniteLocalRing, r_proj: RingSurjection, section: np.ndarray) -> None:
    """Check that `section` is a unital ring map splitting r_proj."""
    r = r_proj.target

    def sig(y):
        return (np.asarray(y, dtype=np.int64) @ section) % s.moduli

    if not np.array_equal(sig(r.unit), s.unit):
        raise AssertionError("section does not preserve the unit")
    for a in range(r.rank):
        va = r._basis_vector(a)
        if not np.array_equal(r_proj.apply(sig(va)), va):
            raise AssertionError("section is not a right inverse of the projection")
        for b in range(r.rank):
            vb = r._basis_vector(b)
            if not np.array_equal(sig(r.mul(va, vb)), s.mul(sig(va), sig(vb))):
                raise AssertionError("section is not multiplicative")


def subring_lift(
    s: FiniteLocalRing, r_proj: RingSurjection
) -> Union[SubringLift, SubringLiftFailure]:
    """Try to realize the target of a one-dimensional surjection as a subring.

    Lifts a cotangent basis of the target through the projection, trying
    every kernel-coset correction of every lift, closes to a subring, and
    demands that the kernel generator stays outside while the projection
    restricts to a bijection.  The first (lexicographically least) success
    wins; otherwise the failure lists one reason per attempt.
    """
    j = r_proj.kernel
    if j.size != s.p:
        raise ValueError("subring lift requires a one-dimensional kernel")
    x = j.least_nonzero()
    cot_ok = cotangent_image_kernel(s, r_proj, x).nonzero_in_source
    r = r_proj.target
    cot = cotangent_space(r)
    j_elems = j.elements_coords()
    cosets = []
    for y in cot.basis:
        base = r_proj.lift(y)
        cosets.append([(base + delta) % s.moduli for delta in j_elems])
    reasons: List[str] = []
    attempts = 0
    for combo in itertools.product(*cosets):
        attempts += 1
        carrier = subring_closure(s, list(combo))
        if zmod.in_span(carrier, s.embed(x), s.p, s.e):
            reasons.append("closure swallows the kernel generator")
            continue
        size = zmod.span_size(carrier, s.p, s.e)
        if size != r.size:
            reasons.append(f"closure has size {size}, target has size {r.size}")
            continue
        section = _section_from_carrier(s, r_proj, carrier)
        _verify_section(s, r_proj, section)
        return SubringLift(
            ok=True,
            witness=x,
            carrier=carrier,
            section_matrix=section,
            cotangent_ok=cot_ok,
            attempts=attempts,
        )
    return SubringLiftFailure(
        ok=False, witness=x, cotangent_ok=cot_ok, attempts=attempts, reasons=reasons
    )


# ---------------------------------------------------------------------------
# square-zero extension models
# ---------------------------------------------------------------------------


def adjoin_square_zero(r: FiniteLocalRing, name: str = "") -> FiniteLocalRing:
    """R with one square-zero, p-torsion generator adjoined.

    The new basis element x satisfies x² = 0, p·x = 0 and b·x = res(b)·x,
    so the maximal ideal kills x and the new ideal line is F_p·x.
    """
    return adjoin_multi_square_zero(r, 1, name=name)


def adjoin_multi_square_zero(r: FiniteLocalRing, n: int, name: str = "") -> FiniteLocalRing:
    """R with n pairwise-annihilating square-zero, p-torsion generators."""
    rank = r.rank + n
    moduli = np.concatenate([r.moduli, np.full(n, r.p, dtype=np.int64)])
    structure = np.zeros((rank, rank, rank), dtype=np.int64)
    structure[: r.rank, : r.rank, : r.rank] = r.structure
    residues = [r.residue(r._basis_vector(a)) for a in range(r.rank)]
    for a in range(r.rank):
        for t in range(n):
            structure[a, r.rank + t, r.rank + t] = residues[a] % r.p
            structure[r.rank + t, a, r.rank + t] = residues[a] % r.p
    unit = np.concatenate([r.unit, np.zeros(n, dtype=np.int64)])
    gens = [np.concatenate([g, np.zeros(n, dtype=np.int64)]) for g in r.ideal_gens]
    for t in range(n):
        v = np.zeros(rank, dtype=np.int64)
        v[r.rank + t] = 1
        gens.append(v)
    names = list(r.basis_names) + [f"x{t + 1}" for t in range(n)]
    return FiniteLocalRing(
        r.p,
        r.e,
        moduli,
        structure,
        unit,
        ideal_gens=gens,
        basis_names=names,
        name=name or f"{r.name}[x{n if n > 1 else ''}]",
    )


def _verify_additive_iso(
    src: FiniteLocalRing, dst: FiniteLocalRing, matrix: np.ndarray
) -> None:
    """matrix rows = images of src basis; checks a well-defined additive bijection."""
    if src.size != dst.size:
        raise AssertionError("sizes differ; not a bijection")
    for i in range(src.rank):
        if np.any((int(src.moduli[i]) * matrix[i]) % dst.moduli):
            raise AssertionError("map is not well defined on coordinate moduli")
    h = zmod.howell_form(dst.embed(matrix % dst.moduli), dst.p, dst.e)
    if zmod.span_size(h, dst.p, dst.e) != dst.size:
        raise AssertionError("map is not surjective")


def _verify_ring_iso(src: FiniteLocalRing, dst: FiniteLocalRing, matrix: np.ndarray) -> None:
    """Full constructive isomorphism check on every basis pair."""
    _verify_additive_iso(src, dst, matrix)

    def f(x):
        return (np.asarray(x, dtype=np.int64) @ matrix) % dst.moduli

    if not np.array_equal(f(src.unit), dst.unit):
        raise AssertionError("map does not preserve the unit")
    for a in range(src.rank):
        for b in range(src.rank):
            va, vb = src._basis_vector(a), src._basis_vector(b)
            if not np.array_equal(f(src.mul(va, vb)), dst.mul(f(va), f(vb))):
                raise AssertionError("map is not multiplicative")


# ---------------------------------------------------------------------------
# the dichotomy
# ---------------------------------------------------------------------------


@dataclass
class FrattiniContainment:
    """J ⊆ (I², pI), with membership coefficients over the pair ideal basis."""

    witness: np.ndarray
    pair_ideal: RingIdeal
    coefficients: np.ndarray

    def verify(self, s: FiniteLocalRing) -> bool:
        vec = (self.coefficients @ self.pair_ideal.howell) % (s.p**s.e)
        return bool(np.array_equal(vec, s.embed(self.witness)))


@dataclass
class SquareZeroExtension:
    """S ≅ R[x]/(x², px) with the isomorphism given by explicit matrices."""

    witness: np.ndarray
    model: FiniteLocalRing
    iso_matrix: np.ndarray  # model basis -> S coordinates
    section: SubringLift


def dichotomy(
    s: FiniteLocalRing, r_proj: RingSurjection
) -> Union[FrattiniContainment, SquareZeroExtension]:
    """One-dimensional kernel: containment in (I², pI) or square-zero split.

    Exactly one branch occurs.  The containment branch carries membership
    coefficients; the square-zero branch carries a verified isomorphism with
    the model extension built from the target.
    """
    j = r_proj.kernel
    if j.size != s.p:
        raise ValueError("dichotomy requires a kernel of F_p-dimension 1")
    if r_proj.target.e != s.e:
        raise ValueError("surjection does not preserve the coefficient ring")
    i_s = s.designated_ideal()
    for row in j.howell:
        if not zmod.in_span(i_s.howell, row, s.p, s.e):
            raise ValueError("kernel is not contained in the designated ideal")
    pair = frattini_pair_ideal(i_s)
    x = j.least_nonzero()
    cert = pair.membership_certificate(x)
    if cert is not None:
        return FrattiniContainment(witness=x, pair_ideal=pair, coefficients=cert)
    lift = subring_lift(s, r_proj)
    if not lift.ok:
        raise AssertionError(
            "square-zero branch failed to produce a subring section: " + "; ".join(lift.reasons)
        )
    r = r_proj.target
    model = adjoin_square_zero(r)
    iso = np.vstack([lift.section_matrix, lift.witness.reshape(1, -1)])
    _verify_ring_iso(model, s, iso)
    return SquareZeroExtension(witness=lift.witness, model=model, iso_matrix=iso, section=lift)


# ---------------------------------------------------------------------------
# congruence subgroups 1 + M₂(I)
# ---------------------------------------------------------------------------


class CongruenceGroup:
    """The group 1 + M₂(I) on integer codes.

    An element is coded in base |I| by the four ideal indices of the entries
    of (M − 1), row-major, so code 0 is the identity.  All group operations
    are table gathers over the ring's operation tables and vectorize over
    arrays of codes.
    """

    def __init__(self, ring: FiniteLocalRing, ideal: RingIdeal):
        self.ring = ring
        self.ideal = ideal
        add_t, mul_t, neg_t = ring.tables()
        self._add, self._mul, self._neg = add_t, mul_t, neg_t
        self.codes_i = np.sort(ideal.element_codes())
        self.k = int(self.codes_i.size)
        self.order = self.k**4
        self.idx_of_code = np.full(ring.size, -1, dtype=np.int64)
        self.idx_of_code[self.codes_i] = np.arange(self.k)
        self._one = ring.encode(ring.unit)
        self._neg_one = int(neg_t[self._one])
        self.identity = 0
        self._nilpotency = _log_p(max(self.k, self.ring.p), ring.p) + 1

    # matrices are (..., 4) arrays of ring codes, row-major

    def mats_of(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        k = self.k
        a = codes // (k**3) % k
        b = codes // (k**2) % k
        c = codes // k % k
        d = codes % k
        out = np.stack(
            [
                self._add[self._one, self.codes_i[a]],
                self.codes_i[b],
                self.codes_i[c],
                self._add[self._one, self.codes_i[d]],
            ],
            axis=-1,
        )
        return out

    def codes_of(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64)
        a = self.idx_of_code[self._add[mats[..., 0], self._neg_one]]
        b = self.idx_of_code[mats[..., 1]]
        c = self.idx_of_code[mats[..., 2]]
        d = self.idx_of_code[self._add[mats[..., 3], self._neg_one]]
        if np.any(a < 0) or np.any(b < 0) or np.any(c < 0) or np.any(d < 0):
            raise ValueError("matrix is not in 1 + M₂(I)")
        k = self.k
        return ((a * k + b) * k + c) * k + d

    def mat_mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        a, m = self._add, self._mul
        z00 = a[m[x[..., 0], y[..., 0]], m[x[..., 1], y[..., 2]]]
        z01 = a[m[x[..., 0], y[..., 1]], m[x[..., 1], y[..., 3]]]
        z10 = a[m[x[..., 2], y[..., 0]], m[x[..., 3], y[..., 2]]]
        z11 = a[m[x[..., 2], y[..., 1]], m[x[..., 3], y[..., 3]]]
        return np.stack([z00, z01, z10, z11], axis=-1)

    def mat_identity(self, shape=()) -> np.ndarray:
        zero = self.ring.encode(self.ring.zero())
        base = np.array([self._one, zero, zero, self._one], dtype=np.int64)
        return np.broadcast_to(base, tuple(shape) + (4,)).copy()

    def mat_inv(self, x: np.ndarray) -> np.ndarray:
        """Inverse of unipotent matrices by the terminating Neumann series."""
        ident = self.mat_identity(x.shape[:-1])
        y = ident.copy()
        for _ in range(self._nilpotency + 1):
            z = self.mat_mul(x, y)
            # y <- 1 - (z - 1) = 2·1 - z,  entrywise: ident + neg(z) + ident… done
            # using (1+A)y = z, next iterate y' = y - (z - 1) = y + 1 - z
            delta = np.stack(
                [
                    self._add[ident[..., t], self._neg[z[..., t]]]
                    for t in range(4)
                ],
                axis=-1,
            )
            y = np.stack(
                [self._add[y[..., t], delta[..., t]] for t in range(4)],
                axis=-1,
            )
        if not np.array_equal(self.mat_mul(x, y), ident):
            raise AssertionError("Neumann inversion did not terminate")
        return y

    # group operations over codes

    def mul_many(self, g: np.ndarray, h: np.ndarray) -> np.ndarray:
        return self.codes_of(self.mat_mul(self.mats_of(g), self.mats_of(h)))

    def inv_many(self, g: np.ndarray) -> np.ndarray:
        return self.codes_of(self.mat_inv(self.mats_of(g)))

    def power_many(self, g: np.ndarray, n: int) -> np.ndarray:
        g = np.asarray(g, dtype=np.int64)
        acc = np.zeros_like(g)
        base = g.copy()
        n = int(n)
        while n:
            if n & 1:
                acc = self.mul_many(acc, base)
            base = self.mul_many(base, base)
            n >>= 1
        return acc

    def conj_many(self, g: np.ndarray, by: int) -> np.ndarray:
        by_arr = np.full_like(np.asarray(g), by)
        return self.mul_many(self.mul_many(by_arr, g), self.inv_many(by_arr))

    def commutator(self, g: int, h: int) -> int:
        ga = np.array([g])
        ha = np.array([h])
        lhs = self.mul_many(self.inv_many(ga), self.inv_many(ha))
        rhs = self.mul_many(ga, ha)
        return int(self.mul_many(lhs, rhs)[0])

    def elementary_generators(self) -> List[int]:
        """Codes of 1 + t·E_{kl} over the ideal's additive basis elements."""
        gens: List[int] = []
        for row in self.ideal.howell:
            t_idx = int(self.idx_of_code[self.ring.encode(self.ring.unembed(row))])
            k = self.k
            for pos in range(4):
                digits = [0, 0, 0, 0]
                digits[pos] = t_idx
                gens.append(((digits[0] * k + digits[1]) * k + digits[2]) * k + digits[3])
        return gens

    def closure(self, gens: Sequence[int]) -> np.ndarray:
        """Boolean membership mask of the subgroup generated by `gens`."""
        if self.order > FRATTINI_GUARD:
            raise GuardExceeded(
                f"congruence group of order {self.order} exceeds the closure guard"
            )
        known = np.zeros(self.order, dtype=bool)
        known[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        gens_arr = np.array(sorted(set(int(g) for g in gens)), dtype=np.int64)
        if gens_arr.size == 0:
            return known
        chunk = max(1, (1 << 18) // max(1, gens_arr.size))
        while frontier.size:
            pieces = []
            for lo in range(0, frontier.size, chunk):
                part = frontier[lo : lo + chunk]
                prod = self.mul_many(
                    np.repeat(part, gens_arr.size), np.tile(gens_arr, part.size)
                )
                pieces.append(np.unique(prod))
            prod = np.unique(np.concatenate(pieces))
            new = prod[~known[prod]]
            known[new] = True
            frontier = new
        return known

    def generating_set(self) -> List[int]:
        """Elementary generators, augmented (rarely) until they generate."""
        gens = self.elementary_generators()
        while True:
            mask = self.closure(gens)
            missing = np.flatnonzero(~mask)
            if missing.size == 0:
                return sorted(set(gens))
            gens.append(int(missing[0]))

    def frattini_subgroup(self) -> np.ndarray:
        """Sorted codes of [Γ,Γ]·Γ^p.

        Computed as the normal closure of the generator commutators and
        generator p-th powers: the quotient by that normal subgroup is
        elementary abelian, and conversely the seeds lie in [Γ,Γ]·Γ^p, so
        the two agree.
        """
        gens = self.generating_set()
        seeds = set()
        for g, h in itertools.combinations(gens, 2):
            seeds.add(self.commutator(g, h))
        garr = np.array(gens, dtype=np.int64)
        for c in self.power_many(garr, self.ring.p).tolist():
            seeds.add(int(c))
        seeds.discard(self.identity)
        gen_invs = {g: int(self.inv_many(np.array([g]))[0]) for g in gens}
        t_gens = sorted(seeds)
        while True:
            subgroup_mask = self.closure(t_gens)
            members = np.flatnonzero(subgroup_mask)
            # stabilize under conjugation by the group generators; any
            # escaped conjugate joins the generating set and we re-close
            escaped: List[int] = []
            for g in gens:
                ga = np.full(members.size, g, dtype=np.int64)
                gi = np.full(members.size, gen_invs[g], dtype=np.int64)
                conj = self.mul_many(self.mul_many(ga, members), gi)
                out = conj[~subgroup_mask[conj]]
                if out.size:
                    escaped.extend(int(c) for c in np.unique(out)[:64].tolist())
            if not escaped:
                return members
            t_gens = sorted(set(t_gens) | set(escaped))


@dataclass
class FrattiniIdentityReport:
    """Outcome of comparing [Γ_I,Γ_I]·Γ_I^p with the congruence group of (I², pI)."""

    holds: bool
    group_order: int
    frattini_order: int
    pair_ideal_order: int
    pair_ideal_size: int


def frattini_subgroup_identity(
    s: FiniteLocalRing, ideal: Optional[RingIdeal] = None
) -> FrattiniIdentityReport:
    """Check [Γ_I,Γ_I]·Γ_I^p = Γ_{(I²,pI)} by closing both sides element-wise."""
    i = ideal if ideal is not None else s.designated_ideal()
    if i.size**4 > FRATTINI_GUARD:
        raise GuardExceeded(
            f"|1 + M₂(I)| = {i.size ** 4} exceeds the Frattini guard {FRATTINI_GUARD}"
        )
    grp = CongruenceGroup(s, i)
    frattini = grp.frattini_subgroup()
    pair = frattini_pair_ideal(i)
    in_pair = np.array([pair.contains(c) for c in i.elements_coords()], dtype=bool)
    pair_idx = np.flatnonzero(in_pair).astype(np.int64)
    k = grp.k
    a, b, c, d = np.meshgrid(pair_idx, pair_idx, pair_idx, pair_idx, indexing="ij")
    combos = np.sort((((a * k + b) * k + c) * k + d).reshape(-1))
    holds = bool(np.array_equal(frattini, combos))
    return FrattiniIdentityReport(
        holds=holds,
        group_order=grp.order,
        frattini_order=int(frattini.size),
        pair_ideal_order=int(combos.size),
        pair_ideal_size=pair.size,
    )


# ---------------------------------------------------------------------------
# matrix groups over the ring: congruence normal part + prime-to-p complement
# ---------------------------------------------------------------------------


def _mat2_from_coords(r: FiniteLocalRing, mat) -> Tuple[int, int, int, int]:
    """2×2 coordinate matrix over the ring -> 4-tuple of element codes."""
    rows = list(mat)
    if len(rows) != 2 or any(len(list(row)) != 2 for row in rows):
        raise ValueError("expected a 2×2 matrix of coordinate vectors")
    return tuple(
        r.encode(np.asarray(entry, dtype=np.int64)) for row in rows for entry in row
    )


def _pack_keys(mats: np.ndarray, width: int) -> np.ndarray:
    keys = np.zeros(mats.shape[:-1], dtype=np.int64)
    for t in range(4):
        keys = (keys << width) | mats[..., t]
    return keys


def build_matrix_extension(
    r: FiniteLocalRing,
    phi: FiniteGroup,
    gen_images: Dict[int, Sequence[Sequence[int]]],
) -> FiniteGroup:
    """The subgroup of GL₂(R) generated by 1 + M₂(I_R) and a faithful
    prime-to-p image of `phi`, as a multiplication-table group.

    gen_images maps each generator of `phi` to a 2×2 matrix of ring
    coordinate vectors; images must be invertible (unit determinant), the
    extended map must be a faithful homomorphism, and the resulting group
    has order |I_R|⁴·|phi|.  The returned group carries `.ring`, `.phi` and
    `.matrices` (element codes into GL₂(R)); index i projects to phi element
    i mod |phi|.
    """
    if phi.order % r.p == 0:
        raise ValueError("complement order must be prime to p")
    add_t, mul_t, neg_t = r.tables()

    def matmul(x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        z00 = add_t[mul_t[x[..., 0], y[..., 0]], mul_t[x[..., 1], y[..., 2]]]
        z01 = add_t[mul_t[x[..., 0], y[..., 1]], mul_t[x[..., 1], y[..., 3]]]
        z10 = add_t[mul_t[x[..., 2], y[..., 0]], mul_t[x[..., 3], y[..., 2]]]
        z11 = add_t[mul_t[x[..., 2], y[..., 1]], mul_t[x[..., 3], y[..., 3]]]
        return np.stack([z00, z01, z10, z11], axis=-1)

    one = r.encode(r.unit)
    zero = r.encode(r.zero())
    ident = np.array([one, zero, zero, one], dtype=np.int64)
    unit_mask = r.unit_mask()

    def det_is_unit(m):
        d = add_t[mul_t[m[0], m[3]], neg_t[mul_t[m[1], m[2]]]]
        return bool(unit_mask[d])

    # extend generator images over all of phi by following its table
    images: Dict[int, np.ndarray] = {phi.identity: ident}
    frontier = [phi.identity]
    gen_mats = {}
    for g, mat in gen_images.items():
        gen_mats[int(g)] = np.array(_mat2_from_coords(r, mat), dtype=np.int64)
    while frontier:
        nxt = []
        for x in frontier:
            for g, gm in gen_mats.items():
                y = int(phi.mul[x, g])
                cand = matmul(images[x], gm)
                if y in images:
                    if not np.array_equal(images[y], cand):
                        raise ValueError("generator images do not define a homomorphism")
                else:
                    images[y] = cand
                    nxt.append(y)
        frontier = nxt
    if len(images) != phi.order:
        raise ValueError("generator images do not cover the complement group")
    for a in range(phi.order):
        if not det_is_unit(images[a]):
            raise ValueError("complement image is not invertible over the ring")
        for b in range(phi.order):
            if not np.array_equal(matmul(images[a], images[b]), images[int(phi.mul[a, b])]):
                raise ValueError("complement images do not define a homomorphism")
    img_keys = {tuple(images[a].tolist()) for a in range(phi.order)}
    if len(img_keys) != phi.order:
        raise ValueError("complement image is not faithful")

    ideal = r.designated_ideal()
    codes_i = np.sort(ideal.element_codes())
    k = int(codes_i.size)
    total = (k**4) * phi.order
    if total > MAX_TABLE_ORDER:
        raise GuardExceeded(f"matrix extension of order {total} exceeds the table bound")
    grid = np.stack(np.meshgrid(codes_i, codes_i, codes_i, codes_i, indexing="ij"), axis=-1)
    nmats = grid.reshape(-1, 4)
    nmats[:, 0] = add_t[one, nmats[:, 0]]
    nmats[:, 3] = add_t[one, nmats[:, 3]]
    phis = np.stack([images[h] for h in range(phi.order)])
    mats = matmul(nmats[:, None, :], phis[None, :, :]).reshape(-1, 4)
    width = max(1, int(r.size - 1).bit_length())
    keys = _pack_keys(mats, width)
    sort_idx = np.argsort(keys)
    sorted_keys = keys[sort_idx]
    if np.unique(sorted_keys).size != total:
        raise ValueError("congruence part and complement image overlap")
    mul_table = np.empty((total, total), dtype=np.int64)
    for i in range(total):
        prod_keys = _pack_keys(matmul(mats[i], mats), width)
        pos = np.searchsorted(sorted_keys, prod_keys)
        if not np.array_equal(sorted_keys[pos], prod_keys):
            raise ValueError("products leave the constructed element set")
        mul_table[i] = sort_idx[pos]
    group = FiniteGroup(mul_table, name=f"gl2ext({r.name},{phi.name})")
    group.ring = r
    group.phi = phi
    group.matrices = mats
    group.congruence_order = k**4
    return group


# ---------------------------------------------------------------------------
# homomorphism lifting along a ring surjection
# ---------------------------------------------------------------------------


@dataclass
class LiftResult:
    """A verified homomorphism lift: element index -> GL₂(source) matrix codes."""

    found: bool
    images: np.ndarray
    assignment: List[int]
    search_space: int
    combos_enumerated: int


@dataclass
class NoLiftResult:
    found: bool
    search_space: int
    combos_enumerated: int
    pruned_by_order: int
    candidates_per_generator: List[int]


def lift_search(
    group: FiniteGroup,
    s: FiniteLocalRing,
    r_proj: RingSurjection,
    guard: int = LIFT_SEARCH_GUARD,
    prune_orders: bool = True,
) -> Union[LiftResult, NoLiftResult]:
    """Exhaustively search for a lift of a matrix group along a surjection.

    `group` must carry matrices over the target ring of `r_proj`.  Every
    set-theoretic lift of a generator image differs from a fixed one by a
    kernel-congruence correction, so the fiber over each generator is its
    lift times 1 + M₂(J).  Corrections whose generator order is wrong are
    pruned (soundly: homomorphic images divide element orders) unless
    `prune_orders` is false, in which case every coset correction is tried
    literally; the survivors are extended along the group's multiplication
    table and checked against the full table.  The search order, and
    therefore the returned lift, is deterministic.
    """
    r = r_proj.target
    if getattr(group, "ring", None) is not r:
        raise ValueError("group matrices are not over the surjection target")
    j = r_proj.kernel
    gens = list(group.generators)
    jsize = j.size
    search_space = (jsize**4) ** len(gens)
    if search_space > guard:
        raise GuardExceeded(
            f"lift search space {search_space} exceeds the guard {guard}"
        )
    add_t, mul_t, neg_t = s.tables()

    def matmul(x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        z00 = add_t[mul_t[x[..., 0], y[..., 0]], mul_t[x[..., 1], y[..., 2]]]
        z01 = add_t[mul_t[x[..., 0], y[..., 1]], mul_t[x[..., 1], y[..., 3]]]
        z10 = add_t[mul_t[x[..., 2], y[..., 0]], mul_t[x[..., 3], y[..., 2]]]
        z11 = add_t[mul_t[x[..., 2], y[..., 1]], mul_t[x[..., 3], y[..., 3]]]
        return np.stack([z00, z01, z10, z11], axis=-1)

    one = s.encode(s.unit)
    zero_code = s.encode(s.zero())
    ident = np.array([one, zero_code, zero_code, one], dtype=np.int64)

    def mat_pow(m, n):
        acc = ident.copy()
        base = m.copy()
        n = int(n)
        while n:
            if n & 1:
                acc = matmul(acc, base)
            base = matmul(base, base)
            n >>= 1
        return acc

    # kernel congruence corrections 1 + M₂(J), in deterministic digit order
    j_codes = np.sort(np.array([s.encode(c) for c in j.elements_coords()], dtype=np.int64))
    grid = np.stack(np.meshgrid(j_codes, j_codes, j_codes, j_codes, indexing="ij"), axis=-1)
    corr = grid.reshape(-1, 4)
    corr[:, 0] = add_t[one, corr[:, 0]]
    corr[:, 3] = add_t[one, corr[:, 3]]

    candidates: List[np.ndarray] = []
    pruned = 0
    for g in gens:
        base_r = group.matrices[g]
        base_coords = r.decode(base_r)  # (4, rank_r)
        lifted = np.array([s.encode(r_proj.lift(c)) for c in base_coords], dtype=np.int64)
        cand = matmul(lifted[None, :], corr)
        n_g = group.element_order(g)
        keep = []
        for row in cand:
            if not prune_orders or np.array_equal(mat_pow(row, n_g), ident):
                keep.append(row)
            else:
                pruned += 1
        candidates.append(np.array(keep, dtype=np.int64).reshape(-1, 4))
    per_gen = [int(c.shape[0]) for c in candidates]
    if any(n == 0 for n in per_gen):
        return NoLiftResult(
            found=False,
            search_space=search_space,
            combos_enumerated=0,
            pruned_by_order=pruned,
            candidates_per_generator=per_gen,
        )

    # schedule: a BFS spanning tree of the group over its generators plus
    # the cross edges used as consistency checks
    n = group.order
    order_of_discovery = [group.identity]
    tree_edges: List[Tuple[int, int, int]] = []  # (product, known, gen index)
    cross_edges: List[Tuple[int, int, int]] = []
    seen = np.zeros(n, dtype=bool)
    seen[group.identity] = True
    queue = [group.identity]
    while queue:
        x = queue.pop(0)
        for gi, g in enumerate(gens):
            y = int(group.mul[x, g])
            if seen[y]:
                cross_edges.append((y, x, gi))
            else:
                seen[y] = True
                tree_edges.append((y, x, gi))
                queue.append(y)
    combos_enumerated = 0
    for combo in itertools.product(*[range(c.shape[0]) for c in candidates]):
        combos_enumerated += 1
        mats = np.zeros((n, 4), dtype=np.int64)
        mats[group.identity] = ident
        chosen = [candidates[gi][ci] for gi, ci in enumerate(combo)]
        ok = True
        for y, x, gi in tree_edges:
            mats[y] = matmul(mats[x], chosen[gi])
        for y, x, gi in cross_edges:
            if not np.array_equal(mats[y], matmul(mats[x], chosen[gi])):
                ok = False
                break
        if not ok:
            continue
        # full multiplication-table verification
        good = True
        for i in range(n):
            prods = matmul(mats[i], mats)
            if not np.array_equal(prods, mats[group.mul[i]]):
                good = False
                break
        if not good:
            continue
        # the lift must project back onto the original matrices
        for i in range(n):
            down = np.array(
                [r.encode(r_proj.apply(c)) for c in s.decode(mats[i])], dtype=np.int64
            )
            if not np.array_equal(down, group.matrices[i]):
                raise AssertionError("lift does not project to the original representation")
        return LiftResult(
            found=True,
            images=mats,
            assignment=list(combo),
            search_space=search_space,
            combos_enumerated=combos_enumerated,
        )
    return NoLiftResult(
        found=False,
        search_space=search_space,
        combos_enumerated=combos_enumerated,
        pruned_by_order=pruned,
        candidates_per_generator=per_gen,
    )


@dataclass
class NoLiftCertificate:
    """The Frattini-argument obstruction data for a congruence-kernel lift.

    The load-bearing, machine-checked hypothesis is that the kernel
    congruence group 1 + M₂(J) lies inside the Frattini subgroup of the
    source congruence group (verified element by element against the closed
    commutator-and-p-th-power subgroup).  The Frattini quotient of the
    source then factors through the target congruence group, so a lift
    would force the target to generate the whole source — impossible by
    the order gap.

    `kernel_in_pair_ideal` records whether J additionally sits inside
    (I², pI); that ideal containment implies the group containment on many
    rings but not on all of them, so it is reported as data, not relied on.
    """

    kernel_in_frattini: bool
    kernel_in_pair_ideal: bool
    identity_report: FrattiniIdentityReport
    frattini_order: int
    frattini_quotient_order: int
    source_congruence_order: int
    target_congruence_order: int
    kernel_congruence_order: int
    order_gap: bool


def no_lift_certificate(
    s: FiniteLocalRing,
    r_proj: RingSurjection,
    guard: int = FRATTINI_GUARD,
) -> NoLiftCertificate:
    """Certify that no congruence-group lift exists along the surjection."""
    i_s = s.designated_ideal()
    j = r_proj.kernel
    for v in j.elements_coords():
        if not i_s.contains(v):
            raise ValueError("kernel is not contained in the designated ideal")
    grp = CongruenceGroup(s, i_s)
    if grp.order > guard:
        raise GuardExceeded(
            f"congruence group of order {grp.order} exceeds the guard {guard}"
        )
    frattini = grp.frattini_subgroup()
    j_codes = set(int(c) for c in j.element_codes())
    positions = np.flatnonzero(np.isin(grp.codes_i, sorted(j_codes)))
    k = grp.k
    gamma_j = (
        ((positions[:, None, None, None] * k + positions[None, :, None, None]) * k
         + positions[None, None, :, None]) * k + positions[None, None, None, :]
    ).reshape(-1)
    inside = bool(np.isin(gamma_j, frattini).all())
    if not inside:
        raise ValueError(
            "kernel congruence group is not contained in the Frattini subgroup; "
            "the factorization argument does not apply"
        )
    pair = frattini_pair_ideal(i_s)
    in_pair = all(pair.contains(v) for v in j.elements_coords())
    report = frattini_subgroup_identity(s, i_s)
    r = r_proj.target
    i_r = ideal_span(r, [r_proj.apply(g) for g in i_s.generators])
    src_order = i_s.size**4
    tgt_order = i_r.size**4
    ker_order = j.size**4
    return NoLiftCertificate(
        kernel_in_frattini=True,
        kernel_in_pair_ideal=bool(in_pair),
        identity_report=report,
        frattini_order=int(frattini.size),
        frattini_quotient_order=src_order // int(frattini.size),
        source_congruence_order=src_order,
        target_congruence_order=tgt_order,
        kernel_congruence_order=ker_order,
        order_gap=bool(tgt_order < src_order),
    )


# ---------------------------------------------------------------------------
# towers: peeling square-zero layers and splitting surjections
# ---------------------------------------------------------------------------


@dataclass
class TowerNoLift:
    """A layer of the tower fell into the containment branch."""

    ok: bool
    layer: int
    containment: FrattiniContainment


@dataclass
class TowerIso:
    """S ≅ R[x₁..x_n]/(x_i·x_j, p·x_i) with verified matrices and witnesses."""

    ok: bool
    model: FiniteLocalRing
    iso_matrix: np.ndarray
    section_matrix: np.ndarray
    witnesses: List[np.ndarray]
    layers: int


def _invert_bijective_surjection(r_proj: RingSurjection) -> np.ndarray:
    """Section matrix of a surjection with trivial kernel."""
    s, r = r_proj.source, r_proj.target
    rows = []
    elems = s.elements_coords()
    codes = {}
    for x in elems:
        codes[r.encode(r_proj.apply(x))] = x
    for jdx in range(r.rank):
        rows.append(codes[r.encode(r._basis_vector(jdx))])
    section = np.array(rows, dtype=np.int64)
    _verify_section(s, r_proj, section)
    return section


def square_zero_tower(
    s: FiniteLocalRing, r_proj: RingSurjection
) -> Union[TowerIso, TowerNoLift]:
    """Peel a kernel killed by the maximal ideal, one dimension at a time.

    Precondition: m_S·J = 0.  Each layer quotients by the least nonzero
    kernel line and runs the dichotomy on it; a containment layer aborts
    with its certificate, otherwise the subring sections compose into an
    isomorphism with the multi-generator square-zero model over the target.
    """
    j = r_proj.kernel
    m = s.maximal_ideal()
    if ideal_product(m, j).size != 1:
        raise ValueError("kernel is not killed by the maximal ideal")
    i_s = s.designated_ideal()
    for row in j.howell:
        if not zmod.in_span(i_s.howell, row, s.p, s.e):
            raise ValueError("kernel is not contained in the designated ideal")
    r = r_proj.target
    cur = s
    cur_proj = r_proj
    section_mats: List[np.ndarray] = []  # σ_t : S_{t+1} -> S_t
    witnesses_raw: List[Tuple[int, np.ndarray]] = []  # (layer, coords in S_layer)
    layer = 0
    while cur_proj.kernel.size > 1:
        jc = cur_proj.kernel
        x = jc.least_nonzero()
        line = ideal_span(cur, [x])
        if line.size != cur.p:
            raise AssertionError("kernel element does not span an F_p line")
        nxt, pi = quotient(cur, line, name=f"{cur.name}|{layer}")
        out = dichotomy(cur, pi)
        if isinstance(out, FrattiniContainment):
            return TowerNoLift(ok=False, layer=layer, containment=out)
        witnesses_raw.append((layer, out.witness))
        section_mats.append(out.section.section_matrix)
        # induced surjection S_{t+1} -> R
        matrix = (pi.lift_matrix @ cur_proj.matrix) % r.moduli
        lift_matrix = (cur_proj.lift_matrix @ pi.matrix) % nxt.moduli
        ker_gens = [pi.apply(g) for g in jc.generators]
        ker = ideal_span(nxt, [g for g in ker_gens if g.any()])
        nxt_proj = RingSurjection(nxt, r, matrix, lift_matrix, ker)
        nxt_proj.validate()
        cur = nxt
        cur_proj = nxt_proj
        layer += 1
    base_section = _invert_bijective_surjection(cur_proj)  # R -> S_top

    # compose the section R -> S by walking the stored matrices downwards;
    # each factor is additively well defined, so one final reduction suffices
    sec = base_section
    for t in range(len(section_mats) - 1, -1, -1):
        sec = sec @ section_mats[t]
    sec = sec % s.moduli
    witnesses: List[np.ndarray] = []
    for lay, w in witnesses_raw:
        out = w
        for t in range(lay - 1, -1, -1):
            out = out @ section_mats[t]
        witnesses.append(out % s.moduli)
    _verify_section(s, r_proj, sec)
    n = len(witnesses)
    model = adjoin_multi_square_zero(r, n)
    iso = np.vstack([sec] + [w.reshape(1, -1) for w in witnesses])
    _verify_ring_iso(model, s, iso)
    for w in witnesses:
        if np.any(r_proj.apply(w)):
            raise AssertionError("witness does not map to zero under the surjection")
    return TowerIso(
        ok=True,
        model=model,
        iso_matrix=iso,
        section_matrix=sec,
        witnesses=witnesses,
        layers=n,
    )


@dataclass
class SubringPresentation:
    """A subring carrier re-presented as a standalone ring."""

    ring: FiniteLocalRing
    embed_matrix: np.ndarray  # sub coordinates -> ambient coordinates
    to_sub: Callable[[np.ndarray], np.ndarray]


def subring_from_carrier(
    s: FiniteLocalRing, carrier: np.ndarray, name: str = ""
) -> SubringPresentation:
    """Present a multiplicatively closed additive carrier as a ring.

    The carrier (an embedded Howell basis containing the unit) is given
    diagonal coordinates via the relation lattice of its basis rows; the
    structure constants are read back through Howell-digit coefficients.
    """
    p, e = s.p, s.e
    g_rows = np.array([s.unembed(r) for r in carrier], dtype=np.int64)
    k = g_rows.shape[0]
    stacked = np.vstack([g_rows, np.diag(s.moduli)]).astype(object)
    null = zmod.left_null_lattice(stacked)
    relations = null[:, :k] if null.size else np.zeros((0, k), dtype=np.int64)
    diag, _, v, vinv = zmod.diagonalize(relations if relations.size else np.zeros((1, k), dtype=np.int64))
    if any(d == 0 for d in diag):
        raise ValueError("carrier presentation is not finite")
    keep = [jdx for jdx, d in enumerate(diag) if d > 1]
    new_moduli = np.array([diag[jdx] for jdx in keep], dtype=np.int64)
    v_arr = np.array(v, dtype=np.int64)
    vinv_arr = np.array(vinv, dtype=np.int64)

    def to_sub(x: np.ndarray) -> np.ndarray:
        res, c = zmod.span_reduce(carrier, s.embed(x), p, e)
        if res.any():
            raise ValueError("element is not in the subring carrier")
        return (c @ v_arr[:, keep]) % new_moduli

    basis_rows = (vinv_arr[keep, :] @ g_rows) % s.moduli
    new_rank = len(keep)
    structure = np.zeros((new_rank, new_rank, new_rank), dtype=np.int64)
    for a in range(new_rank):
        for b in range(new_rank):
            structure[a, b] = to_sub(s.mul(basis_rows[a], basis_rows[b]))
    unit_sub = to_sub(s.unit)
    i_s = s.designated_ideal()
    inter = zmod.span_intersection(i_s.howell, carrier, p, e)
    gens_sub = [to_sub(s.unembed(r)) for r in inter]
    ring = FiniteLocalRing(
        p,
        s.e,
        new_moduli,
        structure,
        unit_sub,
        ideal_gens=[g for g in gens_sub if g.any()],
        name=name or f"{s.name}^sub",
    )
    if ring.size != zmod.span_size(carrier, p, e):
        raise AssertionError("subring presentation has the wrong size")
    return SubringPresentation(ring=ring, embed_matrix=basis_rows, to_sub=to_sub)


@dataclass
class SplitSection:
    """A verified unital ring section of a surjection."""

    ok: bool
    section_matrix: np.ndarray
    depth: int
    tower_layers: int


def split_surjection(
    s: FiniteLocalRing, r_proj: RingSurjection, _depth: int = 0
) -> Union[SplitSection, TowerNoLift]:
    """Split a surjection whose kernel peels into square-zero layers.

    If m_S·J ≠ 0, first split S/m_S·J over the target via the square-zero
    tower, pull the section's preimage back to a subring of S, and recurse
    on the strictly smaller problem; lengths descend because m_S·J ⊊ J.
    """
    j = r_proj.kernel
    if j.size == 1:
        section = _invert_bijective_surjection(r_proj)
        return SplitSection(ok=True, section_matrix=section, depth=_depth, tower_layers=0)
    i_s = s.designated_ideal()
    for row in j.howell:
        if not zmod.in_span(i_s.howell, row, s.p, s.e):
            raise ValueError("kernel is not contained in the designated ideal")
    m = s.maximal_ideal()
    k1 = ideal_product(m, j)
    if k1.size == 1:
        out = square_zero_tower(s, r_proj)
        if isinstance(out, TowerNoLift):
            return out
        return SplitSection(
            ok=True, section_matrix=out.section_matrix, depth=_depth, tower_layers=out.layers
        )
    r = r_proj.target
    q1, pi1 = quotient(s, k1, name=f"{s.name}'")
    matrix = (pi1.lift_matrix @ r_proj.matrix) % r.moduli
    lift_matrix = (r_proj.lift_matrix @ pi1.matrix) % q1.moduli
    ker_gens = [pi1.apply(g) for g in j.generators]
    ker = ideal_span(q1, [g for g in ker_gens if g.any()])
    proj1 = RingSurjection(q1, r, matrix, lift_matrix, ker)
    proj1.validate()
    out = square_zero_tower(q1, proj1)
    if isinstance(out, TowerNoLift):
        return out
    sigma1 = out.section_matrix  # R -> S'
    lift_rows = [pi1.lift((np.asarray(sigma1[jdx]) % q1.moduli)) for jdx in range(r.rank)]
    carrier = zmod.span_sum(
        zmod.howell_form(np.array([s.embed(row) for row in lift_rows]), s.p, s.e),
        k1.howell,
        s.p,
        s.e,
    )
    sub = subring_from_carrier(s, carrier, name=f"{s.name}''")
    if sub.ring.size != r.size * k1.size:
        raise AssertionError("pullback subring has unexpected size")
    sub_matrix = (sub.embed_matrix @ r_proj.matrix) % r.moduli
    sub_lift_rows = [sub.to_sub(pi1.lift(sigma1[jdx] % q1.moduli)) for jdx in range(r.rank)]
    sub_kernel_gens = [sub.to_sub(g) for g in k1.generators]
    sub_kernel = ideal_span(sub.ring, [g for g in sub_kernel_gens if g.any()])
    sub_proj = RingSurjection(
        sub.ring, r, sub_matrix, np.array(sub_lift_rows, dtype=np.int64), sub_kernel
    )
    sub_proj.validate()
    if sub.ring.size >= s.size:
        raise AssertionError("recursion does not descend")
    rec = split_surjection(sub.ring, sub_proj, _depth=_depth + 1)
    if isinstance(rec, TowerNoLift):
        return rec
    section = (rec.section_matrix @ sub.embed_matrix) % s.moduli
    _verify_section(s, r_proj, section)
    return SplitSection(
        ok=True,
        section_matrix=section,
        depth=_depth,
        tower_layers=rec.tower_layers + out.layers,
    )


# ---------------------------------------------------------------------------
# length
# ---------------------------------------------------------------------------


def ring_length(s: FiniteLocalRing) -> int:
    """Composition length of the designated ideal as a module over the ring.

    Computed from the filtration I ⊇ mI ⊇ m²I ⊇ … ⊇ 0, whose layers are
    F_p-vector spaces (the residue field has size p); the total equals
    log_p |I|, which is asserted.
    """
    i = s.designated_ideal()
    if i.size == 1:
        return 0
    m = s.maximal_ideal()
    total = 0
    cur = i
    while cur.size > 1:
        nxt = ideal_product(m, cur)
        if nxt.size >= cur.size:
            raise AssertionError("maximal-ideal filtration does not descend")
        total += _log_p(cur.size // nxt.size, s.p)
        cur = nxt
    if s.p**total != i.size:
        raise AssertionError("length does not match the ideal size")
    return total


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def ring_to_json(s: FiniteLocalRing) -> dict:
    return {
        "p": s.p,
        "e": s.e,
        "rank": s.rank,
        "structure": s.structure.tolist(),
        "ideal_gens": [g.tolist() for g in s.ideal_gens],
        "moduli": s.moduli.tolist(),
        "unit": s.unit.tolist(),
        "name": s.name,
    }


def ring_from_json(data: dict) -> FiniteLocalRing:
    p = int(data["p"])
    e = int(data["e"])
    rank = int(data["rank"])
    moduli = data.get("moduli", [p**e] * rank)
    unit = data.get("unit")
    if unit is None:
        unit = [1] + [0] * (rank - 1)
    return FiniteLocalRing(
        p,
        e,
        moduli,
        data["structure"],
        unit,
        ideal_gens=data["ideal_gens"],
        name=data.get("name", ""),
    )
