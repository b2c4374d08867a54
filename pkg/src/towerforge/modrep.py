"""Modules over group algebras F_p[Γ] at desk scale, exactly.

A GroupModule stores one invertible matrix per designated group generator;
representations of all other elements are grown along the multiplication
table.  The decomposition machinery targets two regimes that cover every
operation here:

  * coefficient prime p not dividing the acting group's order (semisimple
    modules: splitting, isotypic projectors, simplicity certificates), and
  * groups with a normal Sylow p-subgroup acting through their prime-to-p
    quotient (socles, projective covers, injective hulls, freeness).

All arithmetic is exact over F_p via the linalg helpers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from . import linalg
from .groups import FiniteGroup, trivial_group

LINE_SPIN_GUARD = 200_000
END_ENUM_GUARD = 1 << 20


class GroupModule:
    """A finite-dimensional F_p-representation of a table-backed group."""

    def __init__(
        self,
        p: int,
        dim: int,
        group: FiniteGroup,
        gen_matrices: Sequence,
        validate: bool = True,
    ):
        self.p = p
        self.dim = dim
        self.group = group
        self.gen_matrices = [
            np.array(m, dtype=np.int64).reshape(dim, dim) % p for m in gen_matrices
        ]
        if len(self.gen_matrices) != len(group.generators):
            raise ValueError("need exactly one matrix per designated generator")
        self._rep: Optional[np.ndarray] = None
        if validate:
            self.validate()

    # -- representation bookkeeping -------------------------------------------

    def rep(self) -> np.ndarray:
        """Array of shape (|Γ|, dim, dim): the matrix of every element."""
        if self._rep is not None:
            return self._rep
        g = self.group
        n = g.order
        rep = np.full((n, self.dim, self.dim), -1, dtype=np.int64)
        rep[g.identity] = linalg.identity(self.dim, self.p)
        known = {g.identity}
        frontier = [g.identity]
        gen_pairs = list(zip(g.generators, self.gen_matrices))
        while frontier:
            nxt = []
            for x in frontier:
                for s, ms in gen_pairs:
                    y = g.op(x, s)
                    if y not in known:
                        rep[y] = (rep[x] @ ms) % self.p
                        known.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(known) != n:
            raise ValueError("generators do not reach the whole group")
        self._rep = rep
        return rep

    def matrix(self, x: int) -> np.ndarray:
        return self.rep()[x]

    def validate(self) -> None:
        if self.dim == 0:
            return
        for m in self.gen_matrices:
            if not linalg.is_invertible(m, self.p):
                raise ValueError("generator matrix is singular")
        rep = self.rep()
        g = self.group
        # full homomorphism check along the multiplication table
        for a in range(g.order):
            prods = (rep[a] @ rep) % self.p  # (n, dim, dim)
            if not np.array_equal(prods, rep[g.mul[a]]):
                raise ValueError(f"action violates the table at element {a}")

    def act_on_rows(self, x: int, rows: np.ndarray) -> np.ndarray:
        """Image of row-vectors under the element x (columns convention ρ(x)v)."""
        return (rows @ self.matrix(x).T) % self.p


@dataclass
class Submodule:
    """An invariant subspace of a GroupModule, held as canonical basis rows."""

    module: GroupModule
    basis: np.ndarray  # (k, dim) rref rows

    def __post_init__(self):
        self.basis = linalg.row_space(self.basis, self.module.p)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def contains_rows(self, rows: np.ndarray) -> bool:
        return all(linalg.in_row_space(self.basis, r, self.module.p) for r in rows)


def spin(module: GroupModule, rows) -> Submodule:
    """Smallest invariant subspace containing the given row vectors."""
    p = module.p
    cur = linalg.row_space(np.atleast_2d(np.array(rows, dtype=np.int64)), p)
    while True:
        images = [cur]
        for m in module.gen_matrices:
            images.append((cur @ m.T) % p)
        nxt = linalg.row_space(np.concatenate(images), p) if cur.size else cur
        if nxt.shape[0] == cur.shape[0]:
            return Submodule(module, cur)
        cur = nxt


def is_invariant(module: GroupModule, rows: np.ndarray) -> bool:
    p = module.p
    space = linalg.row_space(rows, p)
    for m in module.gen_matrices:
        img = (space @ m.T) % p
        for r in img:
            if not linalg.in_row_space(space, r, p):
                return False
    return True


def restrict_action(module: GroupModule, sub: Submodule) -> GroupModule:
    """The module structure on a submodule, in its own basis coordinates."""
    p = module.p
    b = sub.basis  # (k, dim)
    if sub.dim == 0:
        zero = np.zeros((0, 0), dtype=np.int64)
        return GroupModule(p, 0, module.group, [zero] * len(module.gen_matrices), validate=False)
    mats = []
    for m in module.gen_matrices:
        img = (b @ m.T) % p  # rows are images of basis rows
        sol = linalg.solve(b.T, img.T, p)  # b.T @ sol = img.T, so sol is the matrix
        if sol is None:
            raise ValueError("subspace is not invariant")
        mats.append(sol % p)
    return GroupModule(p, sub.dim, module.group, mats, validate=False)


def quotient_module(
    module: GroupModule, sub: Submodule
) -> Tuple[GroupModule, np.ndarray]:
    """(quotient module on complement coordinates, projection matrix).

    proj has shape (dim_quotient, dim): coordinates of a vector's class.
    """
    p = module.p
    full = linalg.extend_to_basis(sub.basis, p, module.dim)
    inv = linalg.mat_inv(full.T, p)  # columns of full.T are the basis
    k = sub.dim
    proj = inv[k:, :]  # lower coordinate block = complement coordinates
    mats = []
    for m in module.gen_matrices:
        mats.append((proj @ m @ full[k:].T) % p)
    quot = GroupModule(p, module.dim - k, module.group, mats, validate=False)
    return quot, proj


def direct_sum(modules: Sequence[GroupModule]) -> Tuple[GroupModule, List[int]]:
    """Block direct sum; returns (module, starting offsets of each block)."""
    if not modules:
        raise ValueError("empty direct sum")
    p = modules[0].p
    g = modules[0].group
    dim = sum(m.dim for m in modules)
    offsets = []
    mats = [np.zeros((dim, dim), dtype=np.int64) for _ in g.generators]
    pos = 0
    for m in modules:
        if m.p != p or m.group is not g:
            raise ValueError("direct summands must share prime and group")
        offsets.append(pos)
        for i, mm in enumerate(m.gen_matrices):
            mats[i][pos : pos + m.dim, pos : pos + m.dim] = mm
        pos += m.dim
    return GroupModule(p, dim, g, mats, validate=False), offsets


# -- hom spaces and endomorphism machinery --------------------------------------


def hom_space(src: GroupModule, dst: GroupModule) -> List[np.ndarray]:
    """Basis of equivariant matrices X (dst.dim × src.dim): Xρ_src = ρ_dst X."""
    p = src.p
    if src.group is not dst.group:
        raise ValueError("hom spaces need a common acting group")
    d1, d2 = src.dim, dst.dim
    if d1 == 0 or d2 == 0:
        return []
    if not src.gen_matrices:  # trivial group: every matrix is equivariant
        out = []
        for i in range(d2):
            for j in range(d1):
                m = np.zeros((d2, d1), dtype=np.int64)
                m[i, j] = 1
                out.append(m)
        return out
    blocks = []
    eye1 = linalg.identity(d1, p)
    eye2 = linalg.identity(d2, p)
    for ms, md in zip(src.gen_matrices, dst.gen_matrices):
        # row-major vec(X): vec(md @ X) = kron(md, I) v ; vec(X @ ms) = kron(I, ms.T) v
        blocks.append((np.kron(md, eye1) - np.kron(eye2, ms.T)) % p)
    system = np.concatenate(blocks)
    ker = linalg.null_space(system, p)
    return [k.reshape(d2, d1) % p for k in ker]


def end_algebra(module: GroupModule) -> List[np.ndarray]:
    return hom_space(module, module)


def _factor_min_poly(coeffs: List[int], p: int):
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    fl = poly.factor_list()[1]
    out = []
    for fac, mult in fl:
        cs = [int(c) % p for c in reversed(fac.all_coeffs())]
        out.append((cs, mult))
    return out


def _kernel_of_poly(c: np.ndarray, theta: List[int], p: int) -> np.ndarray:
    return linalg.null_space(linalg.poly_eval_matrix(theta, c, p), p)


def find_proper_submodule(module: GroupModule) -> Optional[Submodule]:
    """A proper nonzero invariant subspace, or None if the module is simple.

    Requires the acting group's order to be prime to p (semisimple setting),
    which makes the None answer a certificate: the endomorphism ring of a
    semisimple non-simple module always contains a singular nonzero element.
    """
    p = module.p
    if module.group.order % p == 0:
        raise ValueError("splitting requires |group| prime to p")
    d = module.dim
    if d <= 1:
        return None
    # 1. spins of standard basis vectors
    for i in range(d):
        v = np.zeros((1, d), dtype=np.int64)
        v[0, i] = 1
        s = spin(module, v)
        if 0 < s.dim < d:
            return s
    # 2. line-by-line spins when the field is small enough (complete test)
    n_lines = (p**d - 1) // (p - 1)
    if n_lines <= LINE_SPIN_GUARD:
        for vec in _projective_lines(p, d):
            s = spin(module, vec.reshape(1, -1))
            if 0 < s.dim < d:
                return s
        return None
    # 3. endomorphism algebra: split via a reducible minimal polynomial
    ends = end_algebra(module)
    if len(ends) == 1:
        return None  # End = F_p ⇒ simple
    rng = np.random.default_rng(0)
    candidates = list(ends)
    for _ in range(64):
        coeffs = rng.integers(0, p, size=len(ends))
        c = np.zeros((d, d), dtype=np.int64)
        for a, e in zip(coeffs, ends):
            c = (c + int(a) * e) % p
        if c.any():
            candidates.append(c)
    for c in candidates:
        mu = linalg.min_poly(c, p)
        factors = _factor_min_poly(mu, p)
        if len(factors) == 1 and factors[0][1] == 1:
            continue
        theta = factors[0][0]
        ker = _kernel_of_poly(c, theta, p)
        if 0 < ker.shape[0] < d:
            return spin(module, ker)
    # 4. exhaustive scan of the endomorphism algebra
    if p ** len(ends) <= END_ENUM_GUARD:
        for coeffs in itertools.product(range(p), repeat=len(ends)):
            if not any(coeffs):
                continue
            c = np.zeros((d, d), dtype=np.int64)
            for a, e in zip(coeffs, ends):
                c = (c + a * e) % p
            if linalg.rank(c, p) < d:
                ker = linalg.null_space(c, p)
                if ker.shape[0]:
                    return spin(module, ker)
        return None
    raise RuntimeError("module too large for the certified splitting search")


def _projective_lines(p: int, d: int):
    """All projective-line representatives: first nonzero coordinate 1, lex order."""
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            v = np.zeros(d, dtype=np.int64)
            v[lead] = 1
            v[lead + 1 :] = tail
            yield v


def is_simple(module: GroupModule) -> bool:
    if module.dim == 0:
        return False
    return find_proper_submodule(module) is None


def split_into_simples(module: GroupModule) -> List[Submodule]:
    """Split a module over a prime-to-p group into simple submodules.

    Returned submodules are pairwise-complementary invariant subspaces whose
    direct sum is the whole space; each is certified simple.
    """
    p = module.p
    out: List[Submodule] = []

    def descend(sub: Submodule):
        if sub.dim == 0:
            return
        inner = restrict_action(module, sub)
        w_inner = find_proper_submodule(inner)
        if w_inner is None:
            out.append(sub)
            return
        w_amb = Submodule(module, (w_inner.basis @ sub.basis) % p)
        comp = equivariant_complement(module, w_amb, within=sub)
        descend(w_amb)
        descend(comp)

    descend(Submodule(module, linalg.identity(module.dim, p)))
    total = sum(s.dim for s in out)
    if total != module.dim:
        raise AssertionError("decomposition dimensions do not add up")
    return out


def simple_decomposition(
    module: GroupModule,
) -> List[Tuple[GroupModule, int]]:
    """Decompose a module over a prime-to-p group into pairwise
    non-isomorphic simple constituents with multiplicities.

    The weighted dimension sum is checked against the module dimension, and
    each reported constituent is certified to have no proper nonzero
    invariant subspace.
    """
    if module.group.order % module.p == 0:
        raise ValueError("simple decomposition requires p ∤ |group|")
    pieces = split_into_simples(module)
    reps: List[GroupModule] = []
    counts: List[int] = []
    for piece in sorted(pieces, key=lambda s: (s.dim, s.basis.tolist())):
        mod = restrict_action(module, piece)
        for k, r in enumerate(reps):
            if modules_isomorphic(mod, r):
                counts[k] += 1
                break
        else:
            reps.append(mod)
            counts.append(1)
    if sum(r.dim * c for r, c in zip(reps, counts)) != module.dim:
        raise AssertionError("constituent dimensions do not add up")
    return list(zip(reps, counts))


def equivariant_complement(
    module: GroupModule, sub: Submodule, within: Optional[Submodule] = None
) -> Submodule:
    """A complementary invariant subspace via the averaging projector.

    Works whenever |Γ| is invertible mod p.  If `within` is given, both sub
    and the complement live inside it.  The averaged projector
    π = |Γ|⁻¹ Σ_x ρ(x) π₀ ρ(x)⁻¹ is equivariant with image sub and
    restriction the identity there, so its kernel is the complement.
    """
    p = module.p
    g = module.group
    if g.order % p == 0:
        raise ValueError("averaging needs |group| invertible mod p")
    if within is None:
        within = Submodule(module, linalg.identity(module.dim, p))
    if sub.dim == 0:
        return within
    # work in the coordinates of `within`
    w_mod = restrict_action(module, within)
    inner = linalg.solve(within.basis.T, sub.basis.T, p)
    if inner is None:
        raise ValueError("sub must lie inside the carrier subspace")
    b = linalg.row_space(inner.T, p)  # (k, dim_w)
    full = linalg.extend_to_basis(b, p, within.dim)
    inv = linalg.mat_inv(full.T, p)
    pi0 = (full[: sub.dim].T @ inv[: sub.dim]) % p
    rep = w_mod.rep()
    acc = np.zeros((within.dim, within.dim), dtype=np.int64)
    for x in range(g.order):
        acc = (acc + rep[x] @ pi0 @ rep[g.inv[x]]) % p
    scale = linalg.inv_mod(g.order % p, p)
    proj = (scale * acc) % p
    comp_inner = linalg.null_space(proj, p)
    comp = Submodule(module, (comp_inner @ within.basis) % p)
    if comp.dim + sub.dim != within.dim:
        raise AssertionError("averaging projector failed to split the subspace")
    return comp


def modules_isomorphic(m1: GroupModule, m2: GroupModule) -> bool:
    """Isomorphism test; complete for simple modules (Schur), and decided by
    a seeded invertibility search in the general case."""
    if m1.dim != m2.dim:
        return False
    if m1.dim == 0:
        return True
    homs = hom_space(m1, m2)
    if not homs:
        return False
    for h in homs:
        if linalg.is_invertible(h, m1.p):
            return True
    rng = np.random.default_rng(0)
    for _ in range(128):
        coeffs = rng.integers(0, m1.p, size=len(homs))
        h = np.zeros((m2.dim, m1.dim), dtype=np.int64)
        for a, e in zip(coeffs, homs):
            h = (h + int(a) * e) % m1.p
        if linalg.is_invertible(h, m1.p):
            return True
    return False


def iso_from_simple(m1: GroupModule, m2: GroupModule) -> Optional[np.ndarray]:
    """An explicit isomorphism matrix between simple modules, or None."""
    if m1.dim != m2.dim:
        return None
    homs = hom_space(m1, m2)
    for h in homs:
        if h.any():
            if not linalg.is_invertible(h, m1.p):
                raise AssertionError("nonzero map between simples must be invertible")
            return h
    return None


# -- the simple modules of a prime-to-p group ----------------------------------


def regular_module(group: FiniteGroup, p: int) -> GroupModule:
    """Left-regular representation: ρ(g) permutes basis vectors e_x ↦ e_{gx}."""
    n = group.order
    mats = []
    for s in group.generators:
        m = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            m[group.op(s, x), x] = 1
        mats.append(m)
    return GroupModule(p, n, group, mats, validate=False)


def simple_modules(group: FiniteGroup, p: int) -> List[GroupModule]:
    """All simple F_p[group]-modules (|group| prime to p), up to isomorphism.

    Obtained by fully splitting the regular module; every simple appears
    there.  Results are cached on the group object and ordered by dimension,
    then by the canonical basis found first.
    """
    if group.order % p == 0:
        raise ValueError("simple-module enumeration requires p ∤ |group|")
    cache = getattr(group, "_simple_cache", None)
    if cache is None:
        cache = {}
        setattr(group, "_simple_cache", cache)
    if p in cache:
        return cache[p]
    reg = regular_module(group, p)
    pieces = split_into_simples(reg)
    reps: List[GroupModule] = []
    for piece in sorted(pieces, key=lambda s: (s.dim, s.basis.tolist())):
        mod = restrict_action(reg, piece)
        if not any(modules_isomorphic(mod, r) for r in reps):
            reps.append(mod)
    cache[p] = reps
    return reps


def socle_multiplicities(
    group: FiniteGroup, p: int, module: GroupModule
) -> List[int]:
    """Multiplicity of each simple (per simple_modules order) in a semisimple module."""
    simples = simple_modules(group, p)
    counts = []
    for s in simples:
        homs = hom_space(s, module)
        d_end = len(end_algebra(s))
        if len(homs) % d_end:
            raise AssertionError("hom dimension not divisible by End dimension")
        counts.append(len(homs) // d_end)
    if sum(c * s.dim for c, s in zip(counts, simples)) != module.dim:
        raise AssertionError("semisimple multiplicities do not exhaust the module")
    return counts


# -- isotypic projectors ---------------------------------------------------------


@dataclass
class IsotypicProjector:
    module: GroupModule
    target: GroupModule
    coefficients: Dict[int, int]  # group element -> coefficient in F_p
    matrix: np.ndarray

    @property
    def image_dim(self) -> int:
        return linalg.rank(self.matrix, self.module.p)


def isotypic_projector(module: GroupModule, target: GroupModule) -> IsotypicProjector:
    """Projector onto the target-isotypic component of a semisimple module.

    The group-algebra coefficients are (dim W / (|Γ| · dim End W)) · χ_W(g⁻¹),
    with the leading fraction reduced over the integers before mapping into
    F_p (its reduced denominator divides |Γ| and stays invertible).
    """
    p = module.p
    g = module.group
    if g.order % p == 0:
        raise ValueError("isotypic projectors require p ∤ |group|")
    w_rep = target.rep()
    d_end = len(end_algebra(target))
    frac = Fraction(target.dim, g.order * d_end)
    if gcd(frac.denominator, p) != 1:
        raise ArithmeticError("projector scale is not p-integral")
    scale = (frac.numerator * linalg.inv_mod(frac.denominator % p, p)) % p
    coeffs: Dict[int, int] = {}
    mat = np.zeros((module.dim, module.dim), dtype=np.int64)
    rep = module.rep()
    for x in range(g.order):
        chi = int(np.trace(w_rep[g.inv[x]])) % p
        c = (scale * chi) % p
        coeffs[x] = c
        if c:
            mat = (mat + c * rep[x]) % p
    proj = IsotypicProjector(module, target, coeffs, mat % p)
    if not np.array_equal((proj.matrix @ proj.matrix) % p, proj.matrix):
        raise AssertionError("isotypic projector is not idempotent")
    for m in module.gen_matrices:
        if not np.array_equal((m @ proj.matrix) % p, (proj.matrix @ m) % p):
            raise AssertionError("isotypic projector does not commute with the action")
    return proj


# -- socles, projective modules, hulls ------------------------------------------


def p_radical_elements(group: FiniteGroup, p: int) -> List[int]:
    """Elements of p-power order (the normal Sylow p-subgroup in our setting)."""
    out = []
    for x in range(group.order):
        o = group.element_order(x)
        while o % p == 0:
            o //= p
        if o == 1:
            out.append(x)
    return out


def socle(module: GroupModule) -> Submodule:
    """Largest semisimple submodule, via the fixed space of the p-part.

    For Γ with a normal Sylow p-subgroup G (always the case for the
    semidirect products built here), the socle is the G-fixed subspace,
    which inherits a semisimple action of the prime-to-p quotient.
    """
    p = module.p
    pelems = [x for x in p_radical_elements(module.group, p) if x != module.group.identity]
    if not pelems or module.dim == 0:
        return Submodule(module, linalg.identity(module.dim, p))
    rep = module.rep()
    eye = linalg.identity(module.dim, p)
    stacked = np.concatenate([(rep[x] - eye) % p for x in pelems])
    fixed = linalg.null_space(stacked, p)
    return Submodule(module, fixed)


def radical(module: GroupModule) -> Submodule:
    """Jacobson radical: spanned by (ρ(x) − 1)·v over the p-part."""
    p = module.p
    pelems = [x for x in p_radical_elements(module.group, p) if x != module.group.identity]
    if not pelems or module.dim == 0:
        return Submodule(module, np.zeros((0, module.dim), dtype=np.int64))
    rep = module.rep()
    eye = linalg.identity(module.dim, p)
    cols = np.concatenate([((rep[x] - eye) % p).T for x in pelems])
    return Submodule(module, linalg.row_space(cols, p))


def _semidirect_view(gamma: FiniteGroup, p: int):
    """Uniform coset data for Γ relative to its Sylow-p/prime-to-p split.

    Returns (coset_reps, phi, phi_embed, decompose) with decompose(t)
    giving (rep_index, phi_element) for t = rep · φ.  Three cases: explicit
    semidirect metadata, a group of order prime to p (trivial p-part), or a
    pure p-group (trivial phi).
    """
    sd = getattr(gamma, "semidirect", None)
    if sd is not None:
        nphi = sd.complement.order
        reps = list(sd.normal_embed)
        embed = list(sd.complement_embed)

        def decompose(t: int) -> Tuple[int, int]:
            return divmod(t, nphi)

        return reps, sd.complement, embed, decompose
    if gamma.order % p != 0:
        return [gamma.identity], gamma, list(range(gamma.order)), lambda t: (0, t)
    if gamma.is_p_group(p):
        phi = getattr(gamma, "_trivial_phi", None)
        if phi is None:
            phi = trivial_group()
            setattr(gamma, "_trivial_phi", phi)
        return list(range(gamma.order)), phi, [gamma.identity], lambda t: (t, 0)
    raise ValueError("need semidirect structure to split off the tame part")


def _phi_restriction(module: GroupModule) -> Tuple[FiniteGroup, GroupModule]:
    """View a module over Γ = G ⋊ Φ as a Φ-module through the canonical copy."""
    g = module.group
    if g.order % module.p != 0:
        return g, module
    _, phi, embed, _ = _semidirect_view(g, module.p)
    mats = [module.matrix(embed[f]) for f in phi.generators]
    return phi, GroupModule(module.p, module.dim, phi, mats, validate=False)


def socle_decomposition(module: GroupModule) -> Tuple[Submodule, List[Tuple[Submodule, int]]]:
    """Socle + its simple summands tagged with simple-module indices.

    Returns (socle submodule, [(simple summand as Submodule of `module`,
    index into simple_modules(Φ, p))]).
    """
    p = module.p
    soc = socle(module)
    phi, _ = _phi_restriction(module)
    soc_mod_phi = _submodule_as_phi_module(module, soc)
    pieces = split_into_simples(soc_mod_phi)
    simples = simple_modules(phi, p)
    tagged = []
    for piece in pieces:
        amb_basis = (piece.basis @ soc.basis) % p
        inner = restrict_action(soc_mod_phi, piece)
        idx = None
        for i, s in enumerate(simples):
            if modules_isomorphic(inner, s):
                idx = i
                break
        if idx is None:
            raise AssertionError("socle summand matches no known simple module")
        tagged.append((Submodule(module, amb_basis), idx))
    return soc, tagged


def _submodule_as_phi_module(module: GroupModule, sub: Submodule) -> GroupModule:
    phi, phi_mod = _phi_restriction(module)
    return restrict_action(phi_mod, Submodule(phi_mod, sub.basis))


def projective_indecomposable(gamma: FiniteGroup, simple: GroupModule) -> GroupModule:
    """The projective cover of a simple module, as the induced module
    F_p[Γ] ⊗_{F_p[Φ]} S for Γ = G ⋊ Φ.

    Basis vectors are (coset rep i, simple basis t) ↦ index i·dim(S)+t with
    coset representatives the canonical normal-copy elements.
    """
    p = simple.p
    reps, phi, _, decompose = _semidirect_view(gamma, p)
    if simple.group is not phi:
        raise ValueError("simple module must live over the tame factor group")
    ds = simple.dim
    ng = len(reps)
    dim = ng * ds
    s_rep = simple.rep()
    mats = []
    for s in gamma.generators:
        m = np.zeros((dim, dim), dtype=np.int64)
        for i in range(ng):
            t = gamma.op(s, reps[i])
            a, f = decompose(t)  # t = rep_a · φ_f
            m[a * ds : (a + 1) * ds, i * ds : (i + 1) * ds] = s_rep[f]
        mats.append(m)
    return GroupModule(p, dim, gamma, mats, validate=False)


def _solve_equivariant_with_boundary(
    src: GroupModule,
    dst: GroupModule,
    boundary_in: np.ndarray,
    boundary_out: np.ndarray,
) -> Optional[np.ndarray]:
    """Solve F: src → dst equivariant with F @ boundary_in.T = boundary_out.T.

    boundary_in rows are vectors in src coordinates, boundary_out rows their
    prescribed images.  Returns F (dst.dim × src.dim) or None.
    """
    p = src.p
    d1, d2 = src.dim, dst.dim
    if d1 == 0 or d2 == 0:
        return np.zeros((d2, d1), dtype=np.int64)
    rows = []
    rhs = []
    eye1 = linalg.identity(d1, p)
    eye2 = linalg.identity(d2, p)
    for ms, md in zip(src.gen_matrices, dst.gen_matrices):
        rows.append((np.kron(md, eye1) - np.kron(eye2, ms.T)) % p)
        rhs.append(np.zeros(d2 * d1, dtype=np.int64))
    # boundary: for each prescribed pair (v, w): (I ⊗ v) vec(F) = w
    for v, w in zip(boundary_in, boundary_out):
        block = np.kron(eye2, v.reshape(1, -1)) % p
        rows.append(block)
        rhs.append(w % p)
    system = np.concatenate(rows)
    target = np.concatenate([r.reshape(-1) for r in rhs])
    sol = linalg.solve(system, target, p)
    if sol is None:
        return None
    return sol.reshape(d2, d1) % p


@dataclass
class InjectiveHull:
    """hull ≅ ⊕ P_S^{α_S}; embed maps hull coordinates into the ambient."""

    hull: GroupModule
    embed: np.ndarray  # (ambient.dim, hull.dim), injective
    essential: np.ndarray  # (hull.dim, e.dim): the essential map e → hull
    summand_indices: List[int]  # simple-module index per P_S block


def injective_hull(e: Submodule) -> InjectiveHull:
    """Injective hull of a submodule of a free ambient module.

    The hull is assembled abstractly from projective-indecomposable blocks
    matching the socle of e; the essential map and the ambient embedding are
    found by equivariant extension (the ambient is free, hence injective).
    """
    module = e.module
    p = module.p
    gamma = module.group
    phi, _ = _phi_restriction(module)
    simples = simple_modules(phi, p)
    e_mod = restrict_action(module, e)
    soc_e, tagged = socle_decomposition(e_mod)

    if e.dim == 0:
        hull = GroupModule(p, 0, gamma, [np.zeros((0, 0), dtype=np.int64)] * len(gamma.generators), validate=False)
        return InjectiveHull(hull, np.zeros((module.dim, 0), dtype=np.int64), np.zeros((0, 0), dtype=np.int64), [])

    blocks = []
    block_tags = []
    for _, idx in tagged:
        blocks.append(projective_indecomposable(gamma, simples[idx]))
        block_tags.append(idx)
    hull, offsets = direct_sum(blocks)

    # socle of the hull, block by block, with an explicit iso to socle(e)
    soc_h, tagged_h = socle_decomposition(hull)
    # build σ: soc_e (in e coords) → hull coords by matching summands one-to-one
    used = [False] * len(tagged_h)
    boundary_in = []
    boundary_out = []
    for (piece_e, idx_e) in tagged:
        inner_e = _submodule_as_phi_module(e_mod, piece_e)
        hit = None
        for j, (piece_h, idx_h) in enumerate(tagged_h):
            if used[j] or idx_h != idx_e:
                continue
            inner_h = _submodule_as_phi_module(hull, piece_h)
            iso = iso_from_simple(inner_e, inner_h)
            if iso is not None:
                used[j] = True
                hit = (piece_h, iso)
                break
        if hit is None:
            raise AssertionError("hull socle does not match the socle of e")
        piece_h, iso = hit
        imgs = (iso.T @ piece_h.basis) % p  # rows: images of piece_e basis rows
        boundary_in.append(piece_e.basis)
        boundary_out.append(imgs)
    if any(not u for u in used):
        raise AssertionError("hull socle has summands unmatched by socle(e)")

    f = _solve_equivariant_with_boundary(
        e_mod, hull, np.concatenate(boundary_in), np.concatenate(boundary_out)
    )
    if f is None:
        raise AssertionError("essential map into the hull does not extend")
    if linalg.rank(f, p) != e.dim:
        raise AssertionError("essential map is not injective")

    # extend the inclusion e ↪ ambient along f to g: hull → ambient
    ghom = _solve_equivariant_with_boundary(
        hull, module, f.T, e.basis
    )
    if ghom is None:
        raise AssertionError("hull embedding does not extend; ambient not injective?")
    if linalg.rank(ghom, p) != hull.dim:
        raise AssertionError("hull embedding is not injective")

    out = InjectiveHull(hull, ghom, f, block_tags)
    # the embedding must carry socle(hull) onto the socle of the image
    img_sub = Submodule(module, ghom.T)
    soc_img = socle(restrict_action(module, img_sub))
    soc_img_amb = (soc_img.basis @ img_sub.basis) % p
    soc_h_amb = (socle(hull).basis @ ghom.T) % p
    if linalg.rank(soc_img_amb, p) != linalg.rank(soc_h_amb, p) or not all(
        linalg.in_row_space(soc_img_amb, r, p) for r in soc_h_amb
    ):
        raise AssertionError("embedding does not match socles")
    return out


@dataclass
class FreenessCertificate:
    free: bool
    rank: int
    generators: Optional[np.ndarray]  # (rank, dim) rows, or None
    reason: str = ""


def is_free(module: GroupModule) -> FreenessCertificate:
    """Decide freeness over F_p[Γ] with an explicit generator certificate.

    A module of dimension k·|Γ| whose socle multiplicities are k·n_S embeds
    essentially into the rank-k free module; dimension equality makes that
    embedding an isomorphism, so matching multiplicities already decides the
    question — the generators returned make the isomorphism checkable.
    """
    p = module.p
    gamma = module.group
    n = gamma.order
    if module.dim % n:
        return FreenessCertificate(False, 0, None, "dimension not a multiple of |Γ|")
    k = module.dim // n
    if k == 0:
        return FreenessCertificate(True, 0, np.zeros((0, 0), dtype=np.int64))
    reg = regular_module(gamma, p)
    free_k, offsets = direct_sum([reg] * k)
    phi, _ = _phi_restriction(module)
    _, tagged_m = socle_decomposition(module)
    _, tagged_f = socle_decomposition(free_k)
    counts_m: Dict[int, int] = {}
    counts_f: Dict[int, int] = {}
    for _, i in tagged_m:
        counts_m[i] = counts_m.get(i, 0) + 1
    for _, i in tagged_f:
        counts_f[i] = counts_f.get(i, 0) + 1
    if counts_m != counts_f:
        return FreenessCertificate(False, k, None, "socle multiplicities mismatch")

    # match socle summands and extend to an isomorphism free_k → module
    used = [False] * len(tagged_m)
    b_in, b_out = [], []
    for piece_f, idx_f in tagged_f:
        inner_f = _submodule_as_phi_module(free_k, piece_f)
        for j, (piece_m, idx_m) in enumerate(tagged_m):
            if used[j] or idx_m != idx_f:
                continue
            inner_m = _submodule_as_phi_module(module, piece_m)
            iso = iso_from_simple(inner_f, inner_m)
            if iso is not None:
                used[j] = True
                b_in.append(piece_f.basis)
                b_out.append((iso.T @ piece_m.basis) % p)
                break
        else:
            raise AssertionError("socle matching failed despite equal multiplicities")
    fmap = _solve_equivariant_with_boundary(
        free_k, module, np.concatenate(b_in), np.concatenate(b_out)
    )
    if fmap is None or linalg.rank(fmap, p) != module.dim:
        raise AssertionError("essential extension failed to produce an isomorphism")
    gens = []
    for j in range(k):
        e_vec = np.zeros(free_k.dim, dtype=np.int64)
        e_vec[offsets[j] + gamma.identity] = 1
        gens.append((fmap @ e_vec) % p)
    gens = np.array(gens, dtype=np.int64)
    # verify the certificate outright: translates of the generators form a basis
    rep = module.rep()
    translates = np.concatenate([(gens @ rep[x].T) % p for x in range(n)])
    if linalg.rank(translates, p) != module.dim:
        raise AssertionError("free generator certificate failed the rank check")
    return FreenessCertificate(True, k, gens)


@dataclass
class ThreeWaySplit:
    m_basis: np.ndarray
    n_basis: np.ndarray
    q_basis: np.ndarray
    hull: InjectiveHull
    q_rank: int


class SplitHypothesisError(ValueError):
    """A stated hypothesis of the three-way split fails."""


def three_way_split(module: GroupModule, e: Submodule, n_sub: Submodule) -> ThreeWaySplit:
    """Split a free ambient module as M ⊕ N ⊕ Q with e ⊆ M and Q free.

    M is the injective-hull image of e plus a projective complement, N is
    the given complemented free submodule, Q is free of maximal rank.
    Raises SplitHypothesisError when a hypothesis fails:
      * ambient must be free,
      * socle(e) ∩ n must be zero,
      * n must be free and complemented (the quotient must be free too).
    """
    p = module.p
    amb_cert = is_free(module)
    if not amb_cert.free:
        raise SplitHypothesisError(f"ambient is not free: {amb_cert.reason}")
    e_mod = restrict_action(module, e)
    soc_e = socle(e_mod)
    soc_e_amb = (soc_e.basis @ e.basis) % p if e.dim else np.zeros((0, module.dim), dtype=np.int64)
    meet = linalg.intersect_row_spaces(soc_e_amb, n_sub.basis, p)
    if meet.shape[0]:
        raise SplitHypothesisError("socle(e) meets n; the splitting hypothesis fails")
    n_cert = is_free(restrict_action(module, n_sub))
    if not n_cert.free:
        raise SplitHypothesisError(f"n is not free: {n_cert.reason}")
    quot, _ = quotient_module(module, n_sub)
    q_cert = is_free(quot)
    if not q_cert.free:
        raise SplitHypothesisError("n is not complemented by a free module")

    hull = injective_hull(e)
    m1_basis = linalg.row_space(hull.embed.T, p)
    if linalg.intersect_row_spaces(m1_basis, n_sub.basis, p).shape[0]:
        raise AssertionError("hull image unexpectedly meets n")

    x_basis = linalg.sum_row_spaces(m1_basis, n_sub.basis, p)
    x_sub = Submodule(module, x_basis)
    q1_sub = _injective_internal_complement(module, x_sub)

    # free part of maximal rank inside q1, greedily from lex-least vectors
    q1_mod = restrict_action(module, q1_sub)
    phi, _ = _phi_restriction(module)
    simples = simple_modules(phi, p)
    n_s = [0] * len(simples)
    for _, i in socle_decomposition(regular_module(module.group, p))[1]:
        n_s[i] += 1
    beta = [0] * len(simples)
    for _, i in socle_decomposition(q1_mod)[1]:
        beta[i] += 1
    t = min((b // ns for b, ns in zip(beta, n_s)), default=0) if q1_sub.dim else 0

    gamma_n = module.group.order
    picked: List[np.ndarray] = []
    span = np.zeros((0, q1_sub.dim), dtype=np.int64)
    if t:
        rep = q1_mod.rep()
        for vec in _nonzero_vectors_lex(p, q1_sub.dim):
            translates = np.array([(rep[x] @ vec) % p for x in range(gamma_n)])
            cand = np.concatenate([span, translates])
            if linalg.rank(cand, p) == span.shape[0] + gamma_n:
                picked.append(vec)
                span = linalg.row_space(cand, p)
                if len(picked) == t:
                    break
        if len(picked) != t:
            raise AssertionError("greedy free extraction fell short of the rank bound")
    q_basis_inner = span
    q_amb = (q_basis_inner @ q1_sub.basis) % p if t else np.zeros((0, module.dim), dtype=np.int64)
    # complement of Q inside Q1 (both projective): extend id_Q along Q ↪ Q1
    if t:
        q_sub_inner = Submodule(q1_mod, q_basis_inner)
        p_inner = _injective_internal_complement(q1_mod, q_sub_inner)
        p_amb = (p_inner.basis @ q1_sub.basis) % p
    else:
        p_amb = q1_sub.basis
    m_basis = linalg.sum_row_spaces(m1_basis, p_amb, p)

    if linalg.rank(np.concatenate([m_basis, n_sub.basis, q_amb]), p) != module.dim:
        raise AssertionError("three-way split does not fill the ambient module")
    if m_basis.shape[0] + n_sub.basis.shape[0] + q_amb.shape[0] != module.dim:
        raise AssertionError("three-way split overlaps")
    if not Submodule(module, m_basis).contains_rows(e.basis):
        raise AssertionError("e is not inside M")
    return ThreeWaySplit(m_basis, n_sub.basis, q_amb, hull, t)


def _injective_internal_complement(module: GroupModule, sub: Submodule) -> Submodule:
    """Complement of an injective submodule: extend id along sub ↪ module."""
    p = module.p
    sub_mod = restrict_action(module, sub)
    eye = linalg.identity(sub.dim, p)
    amap = _solve_equivariant_with_boundary(module, sub_mod, sub.basis, eye)
    if amap is None:
        raise AssertionError("identity does not extend; submodule not injective?")
    return Submodule(module, linalg.null_space(amap, p))


def _nonzero_vectors_lex(p: int, d: int):
    for tup in itertools.product(range(p), repeat=d):
        if any(tup):
            yield np.array(tup, dtype=np.int64)


def least_irreducible_submodule(module: GroupModule) -> Submodule:
    """The irreducible invariant subspace with lexicographically least
    canonical basis (used to pick filtration kernels deterministically)."""
    p = module.p
    if module.dim == 0:
        raise ValueError("no irreducible subspace in a zero module")
    if module.group.order % p == 0:
        raise ValueError("acting group must be prime to p")
    if p**module.dim > LINE_SPIN_GUARD:
        raise ValueError("module too large for exhaustive line enumeration")
    best: Optional[Submodule] = None
    best_key = None
    for vec in _projective_lines(p, module.dim):
        s = spin(module, vec.reshape(1, -1))
        inner = restrict_action(module, s)
        if find_proper_submodule(inner) is not None:
            continue
        key = (s.dim, tuple(int(x) for x in s.basis.reshape(-1)))
        if best_key is None or key < best_key:
            best, best_key = s, key
    if best is None:
        raise AssertionError("no irreducible submodule found")
    return best


def head(module: GroupModule) -> Tuple[GroupModule, np.ndarray]:
    """module / radical(module) with the projection matrix."""
    return quotient_module(module, radical(module))
