"""Finite groups given by multiplication tables, semidirect products, and
central filtrations with an auxiliary prime-order action.

Elements are integer indices 0..n-1 into an n×n multiplication table.
Groups built here stay small (tables up to 4096 elements); matrix groups
over finite coefficient rings are closed by breadth-first word enumeration
and then stored the same way.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

MAX_TABLE_ORDER = 4096


class FiniteGroup:
    """A finite group presented by its full multiplication table.

    mul[a, b] is the index of the product a·b.  A small generating set is
    kept alongside the table; several algorithms (associativity checking,
    closure, quotients) iterate over generators rather than all elements.
    """

    def __init__(
        self,
        mul,
        labels: Optional[Sequence[str]] = None,
        generators: Optional[Sequence[int]] = None,
        name: str = "",
        validate: bool = True,
    ):
        self.mul = np.array(mul, dtype=np.int64)
        if self.mul.ndim != 2 or self.mul.shape[0] != self.mul.shape[1]:
            raise ValueError("multiplication table must be square")
        self.order = self.mul.shape[0]
        if self.order > MAX_TABLE_ORDER:
            raise ValueError(
                f"group of order {self.order} exceeds the table bound {MAX_TABLE_ORDER}"
            )
        self.name = name or f"G{self.order}"
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.order)]
        if len(self.labels) != self.order:
            raise ValueError("label count must match group order")
        self.identity = self._find_identity()
        self.inv = self._build_inverses()
        if generators is None:
            generators = self._greedy_generators()
        self.generators = [int(g) for g in generators]
        if validate:
            self.validate()
        self.semidirect: Optional[SemidirectData] = None

    # -- construction helpers -------------------------------------------------

    def _find_identity(self) -> int:
        n = self.order
        idx = np.arange(n)
        for e in range(n):
            if np.array_equal(self.mul[e], idx) and np.array_equal(self.mul[:, e], idx):
                return e
        raise ValueError("multiplication table has no identity element")

    def _build_inverses(self) -> np.ndarray:
        n = self.order
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.flatnonzero(self.mul[a] == self.identity)
            if len(hits) != 1 or self.mul[hits[0], a] != self.identity:
                raise ValueError(f"element {a} has no two-sided inverse")
            inv[a] = hits[0]
        return inv

    def _greedy_generators(self) -> List[int]:
        gens: List[int] = []
        known = {self.identity}
        for x in range(self.order):
            if x not in known:
                gens.append(x)
                known = set(self.subgroup_closure(gens))
                if len(known) == self.order:
                    break
        return gens

    def validate(self) -> None:
        """Table sanity: latin square, valid range, associativity.

        Associativity uses Light's test: it is enough to check
        (a·g)·b = a·(g·b) for every generator g once the table is a latin
        square with identity and the generators generate.
        """
        n = self.order
        if self.mul.min() < 0 or self.mul.max() >= n:
            raise ValueError("table entries out of range")
        idx = np.arange(n)
        for a in range(n):
            if not np.array_equal(np.sort(self.mul[a]), idx):
                raise ValueError(f"row {a} is not a permutation")
            if not np.array_equal(np.sort(self.mul[:, a]), idx):
                raise ValueError(f"column {a} is not a permutation")
        if len(self.subgroup_closure(self.generators)) != n:
            raise ValueError("designated generators do not generate")
        for g in self.generators:
            left = self.mul[self.mul[:, g], :]
            right = self.mul[:, self.mul[g, :]]
            if not np.array_equal(left, right):
                raise ValueError(f"associativity fails through generator {g}")

    # -- basic arithmetic ------------------------------------------------------

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(int(self.inv[a]), -k)
        out = self.identity
        base = a
        while k > 0:
            if k & 1:
                out = int(self.mul[out, base])
            base = int(self.mul[base, base])
            k >>= 1
        return out

    def element_order(self, a: int) -> int:
        k = 1
        x = a
        while x != self.identity:
            x = int(self.mul[x, a])
            k += 1
        return k

    def conjugate(self, a: int, x: int) -> int:
        """x a x⁻¹."""
        return int(self.mul[self.mul[x, a], self.inv[x]])

    def commutator(self, a: int, b: int) -> int:
        """a⁻¹ b⁻¹ a b."""
        return int(self.mul[self.mul[self.inv[a], self.inv[b]], self.mul[a, b]])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def subgroup_closure(self, gens: Iterable[int]) -> List[int]:
        """Sorted list of elements of the subgroup generated by gens."""
        known = {self.identity}
        frontier = [self.identity]
        gens = [int(g) for g in gens]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = int(self.mul[a, g])
                    if b not in known:
                        known.add(b)
                        nxt.append(b)
            frontier = nxt
        return sorted(known)

    def center(self) -> List[int]:
        return [z for z in range(self.order) if np.array_equal(self.mul[z], self.mul[:, z])]

    def element_order_profile(self) -> Dict[int, int]:
        prof: Dict[int, int] = {}
        for a in range(self.order):
            o = self.element_order(a)
            prof[o] = prof.get(o, 0) + 1
        return prof

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "mul": self.mul.tolist(),
            "generators": list(self.generators),
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        if data.get("order") != len(data["mul"]):
            raise ValueError("order field disagrees with table size")
        return cls(data["mul"], labels=data.get("labels"), generators=data.get("generators"))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass
class GroupAction:
    """An action of `actor` on `target` by automorphisms.

    table[f, x] is the image of target element x under actor element f.
    """

    actor: FiniteGroup
    target: FiniteGroup
    table: np.ndarray

    def __post_init__(self):
        self.table = np.array(self.table, dtype=np.int64)
        if self.table.shape != (self.actor.order, self.target.order):
            raise ValueError("action table shape must be |actor| × |target|")

    def validate(self) -> None:
        t = self.target
        a = self.actor
        n = t.order
        idx = np.arange(n)
        if not np.array_equal(self.table[a.identity], idx):
            raise ValueError("identity must act trivially")
        for f in range(a.order):
            row = self.table[f]
            if not np.array_equal(np.sort(row), idx):
                raise ValueError(f"actor element {f} does not act bijectively")
            # automorphism: row[x·y] == row[x]·row[y]
            if not np.array_equal(row[t.mul], t.mul[np.ix_(row, row)]):
                raise ValueError(f"actor element {f} does not act multiplicatively")
        for f in range(a.order):
            for g in range(a.order):
                if not np.array_equal(self.table[a.op(f, g)], self.table[f][self.table[g]]):
                    raise ValueError("action is not a homomorphism from the actor")

    def act(self, f: int, x: int) -> int:
        return int(self.table[f, x])


def trivial_action(actor: FiniteGroup, target: FiniteGroup) -> GroupAction:
    table = np.tile(np.arange(target.order), (actor.order, 1))
    return GroupAction(actor, target, table)


def action_from_generator_maps(
    actor: FiniteGroup, target: FiniteGroup, gen_maps: Dict[int, Sequence[int]]
) -> GroupAction:
    """Build a full action table from images of the actor's generators.

    gen_maps[f] is the permutation of target induced by actor generator f.
    The table is extended by breadth-first words and validated.
    """
    n = actor.order
    table = np.full((n, target.order), -1, dtype=np.int64)
    table[actor.identity] = np.arange(target.order)
    known = {actor.identity}
    frontier = [actor.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g, perm in gen_maps.items():
                b = actor.op(a, g)
                if b not in known:
                    table[b] = table[a][np.array(perm, dtype=np.int64)]
                    known.add(b)
                    nxt.append(b)
        frontier = nxt
    if len(known) != n:
        raise ValueError("generator maps do not cover the actor group")
    act = GroupAction(actor, target, table)
    act.validate()
    return act


@dataclass
class SemidirectData:
    normal: FiniteGroup
    complement: FiniteGroup
    action: GroupAction
    normal_embed: List[int]
    complement_embed: List[int]


def semidirect_product(g: FiniteGroup, phi: FiniteGroup, action: GroupAction) -> FiniteGroup:
    """The semidirect product g ⋊ phi for the given action.

    Elements are pairs (a, f) indexed a·|phi| + f, multiplying by
    (a, f)·(b, h) = (a · f(b), f·h).
    """
    if action.actor is not phi or action.target is not g:
        raise ValueError("action must have actor=phi and target=g")
    action.validate()
    np_, nphi = g.order, phi.order
    n = np_ * nphi
    if n > MAX_TABLE_ORDER:
        raise ValueError(f"product order {n} exceeds the table bound")
    mul = np.zeros((n, n), dtype=np.int64)
    for a in range(np_):
        for f in range(nphi):
            i = a * nphi + f
            acted = action.table[f]  # images of all of g under f
            # (a,f)(b,h) = (a·f(b), f·h)
            left = g.mul[a, acted]  # indexed by b
            row = left[:, None] * nphi + phi.mul[f][None, :]
            mul[i] = row.reshape(-1)
    labels = [f"{g.labels[a]}|{phi.labels[f]}" for a in range(np_) for f in range(nphi)]
    gens = [a * nphi + phi.identity for a in g.generators] + [
        g.identity * nphi + f for f in phi.generators
    ]
    out = FiniteGroup(mul, labels=labels, generators=gens, name=f"{g.name}:{phi.name}")
    out.semidirect = SemidirectData(
        normal=g,
        complement=phi,
        action=action,
        normal_embed=[a * nphi + phi.identity for a in range(np_)],
        complement_embed=[g.identity * nphi + f for f in range(nphi)],
    )
    return out


# -- stock constructions -------------------------------------------------------


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], labels=["e"], generators=[], name="1")


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("order must be positive")
    mul = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(mul, generators=[1] if n > 1 else [], name=f"Z{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    act = trivial_action(b, a)
    out = semidirect_product(a, b, act)
    out.name = f"{a.name}x{b.name}"
    return out


def abelian_group(invariants: Sequence[int]) -> FiniteGroup:
    out = cyclic_group(invariants[0])
    for m in invariants[1:]:
        out = direct_product(out, cyclic_group(m))
    return out


def from_permutations(perms: Sequence[Tuple[int, ...]], name: str = "") -> FiniteGroup:
    """Close a set of permutations (tuples mapping i ↦ perm[i]) into a group."""
    degree = len(perms[0])
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    gens = []
    for pm in perms:
        pm = tuple(pm)
        if pm not in index:
            index[pm] = len(elems)
            elems.append(pm)
            frontier.append(pm)
        gens.append(pm)
    changed = True
    while changed:
        changed = False
        for a in list(elems):
            for b in gens:
                c = tuple(a[b[i]] for i in range(degree))
                if c not in index:
                    index[c] = len(elems)
                    elems.append(c)
                    changed = True
    n = len(elems)
    mul = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = index[tuple(a[b[k]] for k in range(degree))]
    labels = ["".join(map(str, e)) for e in elems]
    return FiniteGroup(
        mul, labels=labels, generators=[index[tuple(pm)] for pm in perms], name=name
    )


def symmetric_group(n: int) -> FiniteGroup:
    if n < 2 or n > 4:
        raise ValueError("only small symmetric groups are table-backed here")
    swap = tuple([1, 0] + list(range(2, n)))
    cycle = tuple(list(range(1, n)) + [0])
    return from_permutations([swap, cycle], name=f"S{n}")


def alternating_group_4() -> FiniteGroup:
    return from_permutations([(1, 0, 3, 2), (1, 2, 0, 3)], name="A4")


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n."""
    rot = tuple(list(range(1, n)) + [0])
    refl = tuple((n - i) % n for i in range(n))
    return from_permutations([rot, refl], name=f"D{n}")


def quaternion_group() -> FiniteGroup:
    # indices: 1, -1, i, -i, j, -j, k, -k
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    def mulq(a, b):
        sa, xa = (1 if a % 2 == 0 else -1), a // 2
        sb, xb = (1 if b % 2 == 0 else -1), b // 2
        # basis products in the quaternion group: 0=1, 1=i, 2=j, 3=k
        tbl = {
            (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
            (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
            (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
        }
        s, x = tbl[(xa, xb)]
        s *= sa * sb
        return 2 * x + (0 if s == 1 else 1)
    mul = [[mulq(a, b) for b in range(8)] for a in range(8)]
    return FiniteGroup(mul, labels=names, generators=[2, 4], name="Q8")


def from_matrix_generators(mats: Sequence[np.ndarray], p: int, name: str = "") -> FiniteGroup:
    """Close matrix generators over F_p into a table-backed group (word BFS)."""
    from . import linalg

    mats = [linalg.as_fp(m, p) for m in mats]
    dim = mats[0].shape[0]
    ident = linalg.identity(dim, p)
    key = lambda m: tuple(int(x) for x in m.reshape(-1))
    elems = [ident]
    index = {key(ident): 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in mats:
                b = (a @ g) % p
                k = key(b)
                if k not in index:
                    if len(elems) >= MAX_TABLE_ORDER:
                        raise ValueError("matrix group exceeds the table bound")
                    index[k] = len(elems)
                    elems.append(b)
                    nxt.append(b)
        frontier = nxt
    n = len(elems)
    mul = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = index[key((a @ b) % p)]
    gens = [index[key(m)] for m in mats]
    grp = FiniteGroup(mul, generators=gens, name=name or f"mat{n}")
    grp.matrices = elems  # type: ignore[attr-defined]
    return grp


def sl2_f3() -> FiniteGroup:
    return from_matrix_generators(
        [np.array([[1, 1], [0, 1]]), np.array([[0, -1], [1, 0]])], 3, name="SL2F3"
    )


# -- structural operations -----------------------------------------------------


@dataclass
class ElementaryAbelianSubgroup:
    """A subgroup of exponent p written additively via a fixed basis."""

    group: FiniteGroup
    p: int
    elements: List[int]
    basis: List[int]
    coords: Dict[int, Tuple[int, ...]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element_of(self, vec: Sequence[int]) -> int:
        g = self.group
        out = g.identity
        for b, c in zip(self.basis, vec):
            out = g.op(out, g.power(b, int(c) % self.p))
        return out


def p_torsion_of_center(g: FiniteGroup, p: int) -> ElementaryAbelianSubgroup:
    """The subgroup {z central : z^p = e}, with an F_p basis and coordinates."""
    tors = [z for z in g.center() if g.power(z, p) == g.identity]
    basis: List[int] = []
    coords: Dict[int, Tuple[int, ...]] = {g.identity: ()}
    for z in sorted(tors):
        if z in coords:
            continue
        basis.append(z)
        new: Dict[int, Tuple[int, ...]] = {}
        for e, vec in coords.items():
            x = e
            for c in range(p):
                new[x] = vec + (c,)
                x = g.op(x, z)
        coords = new
    # pad earlier coordinates to the final dimension
    dim = len(basis)
    coords = {e: tuple(vec) + (0,) * (dim - len(vec)) for e, vec in coords.items()}
    if len(coords) != len(tors):
        raise AssertionError("p-torsion closure mismatch")
    return ElementaryAbelianSubgroup(g, p, sorted(tors), basis, coords)


def commutator_power_subgroup(g: FiniteGroup, p: int) -> List[int]:
    """Elements of the subgroup generated by all commutators and p-th powers."""
    n = g.order
    inv = g.inv
    a = np.arange(n)
    comm = g.mul[g.mul[inv[:, None], inv[None, :]], g.mul[a[:, None], a[None, :]]]
    gens = set(int(x) for x in np.unique(comm))
    gens.update(g.power(x, p) for x in range(n))
    gens.discard(g.identity)
    return g.subgroup_closure(sorted(gens))


def frattini_rank(g: FiniteGroup, p: int) -> int:
    """dim_{F_p} of g modulo commutators and p-th powers, for a p-group."""
    if not g.is_p_group(p):
        raise ValueError(f"group of order {g.order} is not a {p}-group")
    sub = commutator_power_subgroup(g, p)
    quot = g.order // len(sub)
    d = 0
    while quot % p == 0:
        quot //= p
        d += 1
    if quot != 1:
        raise AssertionError("commutator-power subgroup index is not a p-power")
    return d


def quotient_by_normal(
    g: FiniteGroup, normal_elems: Sequence[int]
) -> Tuple[FiniteGroup, np.ndarray]:
    """Quotient g/N for a normal subgroup given by its element list.

    Returns (quotient, proj) where proj[x] is the coset index of x.
    """
    nset = set(int(x) for x in normal_elems)
    if g.identity not in nset:
        raise ValueError("normal subgroup must contain the identity")
    for x in g.generators:
        for m in nset:
            if g.conjugate(m, x) not in nset:
                raise ValueError("subgroup is not normal")
    narr = np.array(sorted(nset), dtype=np.int64)
    rep = np.full(g.order, -1, dtype=np.int64)
    reps: List[int] = []
    for x in range(g.order):
        if rep[x] >= 0:
            continue
        coset = g.mul[x, narr]
        r = len(reps)
        reps.append(x)
        rep[coset] = r
    k = len(reps)
    mul = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(reps):
        mul[i] = rep[g.mul[a, np.array(reps, dtype=np.int64)]]
    labels = [f"{g.labels[a]}~" for a in reps]
    gens = sorted(set(int(rep[x]) for x in g.generators) - {int(rep[g.identity])})
    quot = FiniteGroup(mul, labels=labels, generators=gens, name=f"{g.name}/N{len(nset)}")
    return quot, rep


@dataclass
class FiltrationStep:
    """One layer of a central filtration: the covering group maps onto
    `quotient` with an elementary abelian kernel of dimension kernel_dim,
    on which the auxiliary group acts irreducibly (kernel_action)."""

    quotient: FiniteGroup
    kernel_dim: int
    kernel_action: object  # modrep.GroupModule over the acting group
    kernel_basis: List[int]
    proj: np.ndarray


def central_filtration(
    g: FiniteGroup, p: int, action: Optional[GroupAction] = None
) -> List[FiltrationStep]:
    """Refine g into central layers with irreducible auxiliary action.

    Each step quotients the current group by an irreducible (under the
    acting group) subspace of the p-torsion of its center, chosen as the
    invariant subspace with lexicographically least canonical basis.
    Iterates until the trivial group is reached.
    """
    from . import modrep

    if not g.is_p_group(p):
        raise ValueError("central filtrations are built for p-groups only")
    phi = action.actor if action is not None else trivial_group()
    if action is None:
        action = trivial_action(phi, g)
    action.validate()

    steps: List[FiltrationStep] = []
    cur = g
    act_table = action.table
    total = 0
    while cur.order > 1:
        tors = p_torsion_of_center(cur, p)
        if tors.dim == 0:
            raise AssertionError("p-group has trivial central p-torsion")
        phi_gens = phi.generators or []
        mats = []
        for f in phi_gens:
            m = np.zeros((tors.dim, tors.dim), dtype=np.int64)
            for j, b in enumerate(tors.basis):
                img = int(act_table[f, b])
                m[:, j] = tors.coords[img]
            mats.append(m)
        module = modrep.GroupModule(p, tors.dim, phi, mats)
        sub = modrep.least_irreducible_submodule(module)
        kernel_vecs = sub.basis
        kdim = kernel_vecs.shape[0]
        kernel_elems = sorted(
            tors.element_of(np.array(c, dtype=np.int64) @ kernel_vecs % p)
            for c in itertools.product(range(p), repeat=kdim)
        )
        kernel_action = modrep.restrict_action(module, sub)
        quot, proj = quotient_by_normal(cur, kernel_elems)
        new_table = np.zeros((phi.order, quot.order), dtype=np.int64)
        reps = [int(np.flatnonzero(proj == c)[0]) for c in range(quot.order)]
        for f in range(phi.order):
            new_table[f] = proj[act_table[f, np.array(reps, dtype=np.int64)]]
            # well-definedness: the kernel is stable, so coset images agree
        GroupAction(phi, quot, new_table).validate()
        steps.append(
            FiltrationStep(
                quotient=quot,
                kernel_dim=kdim,
                kernel_action=kernel_action,
                kernel_basis=[
                    tors.element_of(kernel_vecs[i]) for i in range(kdim)
                ],
                proj=proj,
            )
        )
        total += kdim
        cur = quot
        act_table = new_table

    expected = 0
    n = g.order
    while n % p == 0:
        n //= p
        expected += 1
    if total != expected:
        raise AssertionError("kernel dimensions do not sum to log_p |g|")
    return steps


# -- isomorphism testing -------------------------------------------------------


def _extend_iso(g: FiniteGroup, h: FiniteGroup, gen_images: Dict[int, int]) -> Optional[Dict[int, int]]:
    """Extend generator images to a full map by BFS; None if inconsistent."""
    mapping = {g.identity: h.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s, si in gen_images.items():
                b = g.op(a, s)
                bi = h.op(mapping[a], si)
                if b in mapping:
                    if mapping[b] != bi:
                        return None
                else:
                    mapping[b] = bi
                    nxt.append(b)
        frontier = nxt
    if len(mapping) != g.order:
        return None
    # verify homomorphism fully
    for a in range(g.order):
        for b in range(g.order):
            if mapping[g.op(a, b)] != h.op(mapping[a], mapping[b]):
                return None
    if len(set(mapping.values())) != h.order:
        return None
    return mapping


def isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    """Exact isomorphism test by generator-image search, |g| ≤ 100."""
    if g.order != h.order:
        return False
    if g.order > 100:
        raise ValueError("exact isomorphism search is capped at order 100")
    if g.element_order_profile() != h.element_order_profile():
        return False
    gens = g.generators
    orders = [g.element_order(s) for s in gens]
    candidates = [
        [x for x in range(h.order) if h.element_order(x) == o] for o in orders
    ]

    def search(i: int, chosen: List[int]) -> bool:
        if i == len(gens):
            return _extend_iso(g, h, dict(zip(gens, chosen))) is not None
        for c in candidates[i]:
            if search(i + 1, chosen + [c]):
                return True
        return False

    return search(0, [])


def fingerprint(g: FiniteGroup) -> Tuple:
    """A cheap isomorphism-invariant summary for groups too big to search."""
    return (
        g.order,
        tuple(sorted(g.element_order_profile().items())),
        len(g.center()),
        g.is_abelian(),
    )
