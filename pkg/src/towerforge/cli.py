"""Command-line front door.

Parses one `--command`, dispatches to the library modules, and writes a
verification report: deterministic JSON (the machine contract), plus text,
CSV and a PNG figure when `--output` names a base path.  Exit codes: 0 all
checks passed, 1 a verification failed, 2 input/parse errors, 3 a size
guard refused the computation.
"""

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import combinat, families, groups, linalg, localcond, localring, modrep
from .errors import GuardExceeded
from .report import Check, Report, write_reports, render_json

COMMANDS = (
    "filtration",
    "projectors",
    "subgroups",
    "wedge-check",
    "congruence-plans",
    "ring-dichotomy",
    "ring-split",
    "lift-search",
    "property-p",
    "verify-all",
)

# Operation-coverage registry: every public library operation must be
# reachable from at least one command (audited by the test suite).  Values
# are the commands whose handlers reach the operation, directly or through
# the verify-all suites.
COVERAGE: Dict[str, str] = {
    "groups.cyclic_group": "projectors",
    "groups.abelian_group": "projectors",
    "groups.dihedral_group": "filtration",
    "groups.quaternion_group": "filtration",
    "groups.symmetric_group": "projectors",
    "groups.alternating_group_4": "projectors",
    "groups.sl2_f3": "verify-all",
    "groups.from_permutations": "projectors",
    "groups.from_matrix_generators": "filtration",
    "groups.direct_product": "verify-all",
    "groups.semidirect_product": "verify-all",
    "groups.action_from_generator_maps": "verify-all",
    "groups.trivial_action": "filtration",
    "groups.central_filtration": "filtration",
    "groups.p_torsion_of_center": "filtration",
    "groups.commutator_power_subgroup": "filtration",
    "groups.frattini_rank": "filtration",
    "groups.quotient_by_normal": "filtration",
    "groups.isomorphic": "verify-all",
    "groups.fingerprint": "verify-all",
    "modrep.regular_module": "projectors",
    "modrep.simple_modules": "projectors",
    "modrep.isotypic_projector": "projectors",
    "modrep.socle": "verify-all",
    "modrep.radical": "verify-all",
    "modrep.socle_decomposition": "verify-all",
    "modrep.projective_indecomposable": "verify-all",
    "modrep.injective_hull": "verify-all",
    "modrep.is_free": "verify-all",
    "modrep.three_way_split": "verify-all",
    "modrep.head": "verify-all",
    "modrep.least_irreducible_submodule": "filtration",
    "modrep.direct_sum": "verify-all",
    "modrep.modules_isomorphic": "verify-all",
    "combinat.count_rank2_subgroups": "subgroups",
    "combinat.enumerate_rank2_subgroups": "subgroups",
    "combinat.congruence_plan": "congruence-plans",
    "combinat.plans_for_family": "verify-all",
    "combinat.assemble_nu_exponents": "verify-all",
    "combinat.readback_pairs": "verify-all",
    "combinat.project_tables": "verify-all",
    "combinat.verify_projection_stability": "verify-all",
    "combinat.wedge_surjectivity": "wedge-check",
    "combinat.select_spanning_basis": "wedge-check",
    "combinat.pair_index": "wedge-check",
    "localring.ideal_span": "ring-dichotomy",
    "localring.least_socle_line": "ring-dichotomy",
    "localring.quotient": "ring-dichotomy",
    "localring.surjection_onto_quotient_of": "verify-all",
    "localring.cotangent_space": "verify-all",
    "localring.cotangent_image_kernel": "verify-all",
    "localring.subring_closure": "verify-all",
    "localring.subring_lift": "ring-dichotomy",
    "localring.subring_from_carrier": "ring-split",
    "localring.adjoin_square_zero": "ring-dichotomy",
    "localring.adjoin_multi_square_zero": "verify-all",
    "localring.dichotomy": "ring-dichotomy",
    "localring.frattini_subgroup_identity": "verify-all",
    "localring.build_matrix_extension": "lift-search",
    "localring.lift_search": "lift-search",
    "localring.no_lift_certificate": "ring-dichotomy",
    "localring.square_zero_tower": "ring-split",
    "localring.split_surjection": "ring-split",
    "localring.ring_length": "ring-split",
    "localring.ring_to_json": "verify-all",
    "localring.ring_from_json": "ring-dichotomy",
    "localcond.property_p": "property-p",
    "localcond.tame_solvability_criterion": "property-p",
    "localcond.property_p_base_change": "property-p",
    "localring.cotangent_denominator": "ring-dichotomy",
    "localring.frattini_pair_ideal": "ring-dichotomy",
    "localring.ideal_product": "ring-dichotomy",
    "localring.ideal_scale": "ring-dichotomy",
    "localring.ideal_sum": "ring-dichotomy",
    "localring.ideals_equal": "verify-all",
    "localring.zero_ideal": "ring-dichotomy",
    "modrep.spin": "verify-all",
    "modrep.is_invariant": "verify-all",
    "modrep.restrict_action": "verify-all",
    "modrep.quotient_module": "verify-all",
    "modrep.hom_space": "verify-all",
    "modrep.end_algebra": "projectors",
    "modrep.find_proper_submodule": "projectors",
    "modrep.is_simple": "projectors",
    "modrep.split_into_simples": "projectors",
    "modrep.simple_decomposition": "verify-all",
    "modrep.socle_multiplicities": "verify-all",
    "modrep.iso_from_simple": "verify-all",
    "modrep.equivariant_complement": "verify-all",
    "modrep.p_radical_elements": "verify-all",
    "groups.trivial_group": "verify-all",
    "families.shipped_rings": "verify-all",
    "families.frattini_counterexample_rings": "verify-all",
    "families.poly_quotient_ring": "verify-all",
    "families.truncated_coefficient_ring": "verify-all",
    "families.mixed_torsion_ring": "verify-all",
    "families.monomial_ring": "verify-all",
    "families.monomial_rings_up_to": "verify-all",
    "families.socle_line_indices": "verify-all",
    "families.partitions_of": "verify-all",
    "families.staircase_monomials": "verify-all",
}


class InputError(ValueError):
    """Bad input file, fixture name or parameter combination (exit 2)."""


# ---------------------------------------------------------------------------
# input resolution
# ---------------------------------------------------------------------------


def _heisenberg27() -> groups.FiniteGroup:
    a = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]], dtype=np.int64)
    b = np.array([[1, 0, 0], [0, 1, 1], [0, 0, 1]], dtype=np.int64)
    return groups.from_matrix_generators([a, b], 3, name="heis27")


BUILTIN_GROUPS: Dict[str, Callable[[], groups.FiniteGroup]] = {
    "trivial": groups.trivial_group,
    "z2": lambda: groups.cyclic_group(2),
    "z3": lambda: groups.cyclic_group(3),
    "z4": lambda: groups.cyclic_group(4),
    "z5": lambda: groups.cyclic_group(5),
    "z6": lambda: groups.cyclic_group(6),
    "z7": lambda: groups.cyclic_group(7),
    "z8": lambda: groups.cyclic_group(8),
    "klein4": lambda: groups.abelian_group([2, 2]),
    "s3": lambda: groups.symmetric_group(3),
    "s4": lambda: groups.symmetric_group(4),
    "a4": groups.alternating_group_4,
    "dihedral8": lambda: groups.dihedral_group(4),
    "dihedral12": lambda: groups.dihedral_group(6),
    "quaternion": groups.quaternion_group,
    "sl2f3": groups.sl2_f3,
    "heisenberg27": _heisenberg27,
}


def _fixture_json(kind: str, name: str) -> dict:
    ref = resources.files("towerforge").joinpath(f"fixtures/{kind}/{name}.json")
    try:
        with ref.open("rb") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no shipped {kind} fixture named {name!r}")


def _load_json_input(value: str, kind: str) -> dict:
    if os.path.exists(value):
        try:
            with open(value, "rb") as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as ex:
            raise InputError(f"cannot read JSON input {value!r}: {ex}")
    return _fixture_json(kind, value)


def resolve_group(value: str) -> groups.FiniteGroup:
    if value in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[value]()
    data = _load_json_input(value, "groups")
    return groups.FiniteGroup.from_json(data)


def resolve_ring(value: str) -> Tuple[localring.FiniteLocalRing, Optional[np.ndarray]]:
    """A ring plus optional kernel generators from a file, fixture, or wrapper."""
    data = _load_json_input(value, "rings")
    if "ring" in data:
        ring = localring.ring_from_json(data["ring"])
        kernel = data.get("kernel_gens")
        return ring, None if kernel is None else np.asarray(kernel, dtype=np.int64)
    return localring.ring_from_json(data), None


def resolve_family(value: str) -> combinat.SubgroupFamily:
    data = _load_json_input(value, "families")
    return combinat.SubgroupFamily.from_json(data)


def manifest() -> dict:
    return _fixture_json("rings", "manifest")


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def cmd_filtration(args) -> Report:
    if not args.input:
        raise InputError("filtration requires --input (a group fixture, file or builtin)")
    if not args.p:
        raise InputError("filtration requires --p")
    group = resolve_group(args.input)
    rep = Report("filtration", {"input": args.input, "p": args.p})
    t0 = time.perf_counter()
    steps = groups.central_filtration(group, args.p)
    elapsed = time.perf_counter() - t0
    dims = [step.kernel_dim for step in steps]
    total = sum(dims)
    expected = round(math.log(group.order, args.p))
    rep.add(
        "filtration-dims-sum",
        args.p**total == group.order,
        f"layer dims {dims} sum to {total}; |G| = {group.order} = {args.p}^{expected}",
        elapsed,
    )
    for k, step in enumerate(steps):
        rep.add(
            f"filtration-layer-{k}",
            step.kernel_dim >= 1,
            f"kernel dimension {step.kernel_dim}, quotient order {step.quotient.order}",
        )
    rep.results = {"layers": dims, "order": group.order}
    return rep


def _projector_checks(rep: Report, phi: groups.FiniteGroup, p: int, label: str) -> None:
    t0 = time.perf_counter()
    module = modrep.regular_module(phi, p)
    simples = modrep.simple_modules(phi, p)
    projectors = [modrep.isotypic_projector(module, simple) for simple in simples]
    ok_idem = all(
        np.array_equal((proj.matrix @ proj.matrix) % p, proj.matrix) for proj in projectors
    )
    ok_orth = all(
        not np.any((projectors[i].matrix @ projectors[j].matrix) % p)
        for i in range(len(projectors))
        for j in range(len(projectors))
        if i != j
    )
    total = np.zeros_like(projectors[0].matrix)
    for proj in projectors:
        total = (total + proj.matrix) % p
    ok_sum = np.array_equal(total, np.eye(module.dim, dtype=np.int64))
    elapsed = time.perf_counter() - t0
    dims = [s.dim for s in simples]
    rep.add(
        f"projector-suite-{label}",
        ok_idem and ok_orth and ok_sum,
        f"|Φ| = {phi.order}, p = {p}, {len(simples)} simple modules of dims {dims}; "
        f"idempotent={ok_idem}, orthogonal={ok_orth}, sum-to-identity={ok_sum}",
        elapsed,
    )


def cmd_projectors(args) -> Report:
    if not args.input:
        raise InputError("projectors requires --input (a group fixture, file or builtin)")
    if not args.p:
        raise InputError("projectors requires --p")
    phi = resolve_group(args.input)
    if phi.order % args.p == 0:
        raise InputError(f"p = {args.p} divides |Φ| = {phi.order}; projectors need p ∤ |Φ|")
    rep = Report("projectors", {"input": args.input, "p": args.p})
    _projector_checks(rep, phi, args.p, args.input)
    return rep


def cmd_subgroups(args) -> Report:
    if not args.p or not args.n:
        raise InputError("subgroups requires --p and --n")
    rep = Report("subgroups", {"p": args.p, "n": args.n})
    formula = combinat.count_rank2_subgroups(args.p, args.n)
    t0 = time.perf_counter()
    old_guard = combinat.ENUMERATION_GUARD
    if args.guard_max:
        combinat.ENUMERATION_GUARD = args.guard_max
    try:
        family = combinat.enumerate_rank2_subgroups(args.p, args.n)
    finally:
        combinat.ENUMERATION_GUARD = old_guard
    elapsed = time.perf_counter() - t0
    rep.add(
        "subgroup-count-agreement",
        len(family) == formula,
        f"formula {formula} == enumeration {len(family)}",
        elapsed,
    )
    bound = args.n * (2 * args.n - 1)
    rep.add(
        "subgroup-count-lower-bound",
        formula >= bound,
        f"count {formula} ≥ n(2n−1) = {bound}",
    )
    rep.results = {"count": formula, "required_minimum": bound}
    return rep


def _verify_spanning_basis(
    family: combinat.SubgroupFamily, basis: combinat.SpanningBasis
) -> bool:
    """Re-derive surjectivity from the certificates, independently."""
    p = family.ambient.p
    m = family.ambient.rank
    if linalg.rank(basis.basis, p) != m:
        return False
    for cert in basis.certificates:
        member = family.members[cert.member]
        gen_wedges = []
        r = member.shape[0]
        for s_i in range(r):
            for t_i in range(s_i + 1, r):
                gen_wedges.append(combinat._wedge_coords(member[s_i], member[t_i], p))
        combo = np.zeros(m * (m - 1) // 2, dtype=np.int64)
        for coeff, wedge in zip(cert.coefficients, gen_wedges):
            combo = (combo + coeff * wedge) % p
        target = combinat._wedge_coords(
            basis.basis[cert.i - 1], basis.basis[cert.j - 1], p
        )
        if not np.array_equal(combo, target):
            return False
    return True


def _wedge_agreement(family: combinat.SubgroupFamily) -> Tuple[bool, bool, bool, str]:
    """(agree, oracle, constructive, detail) for one family."""
    surjective, achieved, required = combinat.wedge_surjectivity(family)
    try:
        basis = combinat.select_spanning_basis(family)
        constructive = _verify_spanning_basis(family, basis)
    except (ValueError, AssertionError) as ex:
        return surjective is False, surjective, False, f"constructive route failed: {ex}"
    detail = f"rank {achieved}/{required}, {len(basis.certificates)} certificates"
    return constructive == surjective and constructive, surjective, constructive, detail


def cmd_wedge_check(args) -> Report:
    if not args.input:
        raise InputError("wedge-check requires --input (a family fixture or file)")
    family = resolve_family(args.input)
    rep = Report("wedge-check", {"input": args.input})
    t0 = time.perf_counter()
    agree, oracle, constructive, detail = _wedge_agreement(family)
    elapsed = time.perf_counter() - t0
    rep.add(
        "wedge-oracle-agreement",
        agree or (not oracle and not constructive),
        f"rank oracle surjective={oracle}, constructive basis={constructive}; {detail}",
        elapsed,
    )
    rep.results = {"surjective": bool(oracle), "constructive": bool(constructive)}
    return rep


def _random_independent_pair(rng, p: int, m: int) -> Tuple[np.ndarray, np.ndarray]:
    while True:
        u = rng.integers(0, p, size=m)
        if u.any():
            break
    while True:
        w = rng.integers(0, p, size=m)
        if linalg.rank(np.vstack([u, w]), p) == 2:
            return u.astype(np.int64), w.astype(np.int64)


def cmd_congruence_plans(args) -> Report:
    if not args.p or not args.n:
        raise InputError("congruence-plans requires --p and --n")
    samples = args.guard_max or 100
    rep = Report(
        "congruence-plans",
        {"p": args.p, "n": args.n, "seed": args.seed, "samples": samples},
    )
    rng = np.random.default_rng([args.seed, args.p, args.n])
    t0 = time.perf_counter()
    failures: List[int] = []
    first_plan = None
    for k in range(samples):
        u, w = _random_independent_pair(rng, args.p, 2 * args.n)
        try:
            plan = combinat.congruence_plan(u, w, args.p, ell=k)
        except (ValueError, AssertionError):
            failures.append(k)
            continue
        if first_plan is None:
            first_plan = plan.to_json()
    elapsed = time.perf_counter() - t0
    rep.add(
        "congruence-plan-identities",
        not failures,
        f"{samples} random independent pairs, {len(failures)} failures",
        elapsed,
    )
    rep.results = {"samples": samples, "failures": failures, "example_plan": first_plan}
    return rep


def _surjection_for(
    ring: localring.FiniteLocalRing, kernel_gens: Optional[np.ndarray]
) -> localring.RingSurjection:
    if kernel_gens is None:
        kernel = localring.least_socle_line(ring)
    else:
        kernel = localring.ideal_span(ring, kernel_gens)
    _, proj = localring.quotient(ring, kernel)
    return proj


def cmd_ring_dichotomy(args) -> Report:
    if not args.input:
        raise InputError("ring-dichotomy requires --input (a ring fixture or file)")
    ring, kernel_gens = resolve_ring(args.input)
    proj = _surjection_for(ring, kernel_gens)
    rep = Report(
        "ring-dichotomy",
        {"input": args.input, "ring": ring.name, "kernel_size": proj.kernel.size},
    )
    t0 = time.perf_counter()
    branch = localring.dichotomy(ring, proj)
    elapsed = time.perf_counter() - t0
    if isinstance(branch, localring.FrattiniContainment):
        name = "frattini"
        rep.add("dichotomy-branch", True, "kernel lies in the pair ideal (I², pI)", elapsed)
        rep.add(
            "containment-coefficients",
            branch.verify(ring),
            "membership certificate re-multiplies to the witness",
        )
        try:
            guard = args.guard_max or localring.FRATTINI_GUARD
            cert = localring.no_lift_certificate(ring, proj, guard=guard)
            rep.add(
                "no-lift-certificate",
                cert.kernel_in_frattini and cert.order_gap,
                f"kernel congruence group inside the Frattini subgroup "
                f"(order {cert.frattini_order}); congruence orders "
                f"{cert.target_congruence_order} < {cert.source_congruence_order}",
            )
        except ValueError as ex:
            rep.add_skip("no-lift-certificate", f"not certified: {ex}")
        except GuardExceeded as ex:
            rep.add_skip("no-lift-certificate", f"guard: {ex}")
    else:
        name = "square-zero"
        rep.add("dichotomy-branch", True, "source splits as a square-zero extension", elapsed)
        witness = branch.witness
        wsq = ring.mul(witness, witness)
        pw = ring.smul(ring.p, witness)
        rep.add(
            "square-zero-witness",
            not np.any(wsq) and not np.any(pw),
            f"witness {witness.tolist()} squares to zero and is killed by p",
        )
        sec = branch.section.section_matrix
        back = (sec @ proj.matrix) % proj.target.moduli
        rep.add(
            "section-right-inverse",
            np.array_equal(back, np.eye(proj.target.rank, dtype=np.int64) % proj.target.moduli),
            "projection ∘ section = identity on the target",
        )
    rep.results = {"branch": name}
    return rep


def cmd_ring_split(args) -> Report:
    if not args.input:
        raise InputError("ring-split requires --input (a ring fixture or file)")
    ring, kernel_gens = resolve_ring(args.input)
    if kernel_gens is None:
        kernel = ring.designated_ideal()
    else:
        kernel = localring.ideal_span(ring, kernel_gens)
    _, proj = localring.quotient(ring, kernel)
    rep = Report(
        "ring-split",
        {"input": args.input, "ring": ring.name, "kernel_size": proj.kernel.size},
    )
    t0 = time.perf_counter()
    result = localring.split_surjection(ring, proj)
    elapsed = time.perf_counter() - t0
    if isinstance(result, localring.TowerNoLift):
        rep.add(
            "split-outcome",
            True,
            f"no section: layer {result.layer} kernel lies in the pair ideal",
            elapsed,
        )
        rep.results = {"split": False, "layer": result.layer}
        return rep
    sec = result.section_matrix
    target = proj.target
    back = (sec @ proj.matrix) % target.moduli
    ident = np.eye(target.rank, dtype=np.int64) % target.moduli
    rep.add("split-outcome", True, f"section found, recursion depth {result.depth}", elapsed)
    rep.add(
        "section-right-inverse",
        np.array_equal(back, ident),
        "projection ∘ section = identity on the target",
    )
    hom_ok = True
    for i in range(target.rank):
        for j in range(target.rank):
            lhs = (target.mul(target._basis_vector(i), target._basis_vector(j)) @ sec) % ring.moduli
            rhs = ring.mul((target._basis_vector(i) @ sec) % ring.moduli, (target._basis_vector(j) @ sec) % ring.moduli)
            if not np.array_equal(lhs, rhs):
                hom_ok = False
    rep.add("section-multiplicative", hom_ok, "checked on all pairs of target basis elements")
    len_s = localring.ring_length(ring)
    len_r = localring.ring_length(target)
    dim_j = round(math.log(proj.kernel.size, ring.p))
    rep.add(
        "length-additivity",
        len_s == len_r + dim_j,
        f"ℓ(source) = {len_s} = {len_r} + {dim_j} = ℓ(target) + log_p |kernel|",
    )
    rep.results = {
        "split": True,
        "depth": result.depth,
        "tower_layers": result.tower_layers,
        "section_matrix": sec.tolist(),
    }
    return rep


def _build_extension_from_spec(data: dict) -> Tuple[
    localring.FiniteLocalRing, localring.RingSurjection, groups.FiniteGroup
]:
    if "ring" not in data or "kernel_gens" not in data or "complement" not in data:
        raise InputError("lift-search input needs ring, kernel_gens and complement")
    ring = localring.ring_from_json(data["ring"])
    kernel = localring.ideal_span(ring, np.asarray(data["kernel_gens"], dtype=np.int64))
    quotient_ring, proj = localring.quotient(ring, kernel)
    comp = data["complement"]
    order = int(comp["order"])
    phi = groups.cyclic_group(order)
    images = {}
    gen_mats = comp["generator_images"]
    if len(gen_mats) != len(phi.generators):
        raise InputError("one complement image per cyclic generator expected")
    for g, mat in zip(phi.generators, gen_mats):
        rows = []
        for row in mat:
            rows.append([
                (quotient_ring.unit * int(c)) % quotient_ring.moduli if isinstance(c, int)
                else np.asarray(c, dtype=np.int64)
                for c in row
            ])
        images[int(g)] = rows
    gamma = localring.build_matrix_extension(quotient_ring, phi, images)
    return ring, proj, gamma


def cmd_lift_search(args) -> Report:
    if not args.input:
        raise InputError("lift-search requires --input (a lift fixture or file)")
    data = _load_json_input(args.input, "lift")
    ring, proj, gamma = _build_extension_from_spec(data)
    rep = Report(
        "lift-search",
        {
            "input": args.input,
            "ring": ring.name,
            "group_order": gamma.order,
            "kernel_size": proj.kernel.size,
        },
    )
    guard = args.guard_max or localring.LIFT_SEARCH_GUARD
    t0 = time.perf_counter()
    result = localring.lift_search(gamma, ring, proj, guard=guard)
    elapsed = time.perf_counter() - t0
    if isinstance(result, localring.LiftResult):
        rep.add(
            "lift-search-outcome",
            True,
            f"lift found after {result.combos_enumerated} of {result.search_space} combos",
            elapsed,
        )
        rep.results = {
            "found": True,
            "search_space": result.search_space,
            "combos_enumerated": result.combos_enumerated,
        }
    else:
        fiber = proj.kernel.size**4
        accounted = (
            sum(fiber - c for c in result.candidates_per_generator)
            == result.pruned_by_order
            and result.search_space == fiber ** len(result.candidates_per_generator)
        )
        rep.add(
            "lift-search-outcome",
            True,
            f"no lift; exhausted {result.search_space} coset corrections "
            f"({result.combos_enumerated} enumerated, {result.pruned_by_order} excluded by order)",
            elapsed,
        )
        rep.add(
            "lift-search-accounting",
            accounted,
            f"per-generator fibers of size {fiber} fully covered: "
            f"candidates {result.candidates_per_generator}",
        )
        rep.results = {
            "found": False,
            "search_space": result.search_space,
            "combos_enumerated": result.combos_enumerated,
            "pruned_by_order": result.pruned_by_order,
            "candidates_per_generator": result.candidates_per_generator,
        }
    return rep


def _parse_datum(text: str) -> localcond.LocalExtensionDatum:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) not in (3, 4):
        raise InputError(f"datum {text!r} is not of the form e,q,tame[,n]")
    try:
        e, q = int(parts[0]), int(parts[1])
        tame_raw = parts[2].lower()
        if tame_raw in ("tame", "true", "1"):
            tame = True
        elif tame_raw in ("wild", "false", "0"):
            tame = False
        else:
            raise ValueError(f"unknown tameness flag {parts[2]!r}")
        n = int(parts[3]) if len(parts) == 4 else 1
        return localcond.LocalExtensionDatum(e=e, q=q, tame=tame, n=n)
    except ValueError as ex:
        raise InputError(f"bad datum {text!r}: {ex}")


def cmd_property_p(args) -> Report:
    data: List[localcond.LocalExtensionDatum] = []
    if args.input:
        raw = _load_json_input(args.input, "localcond")
        if not isinstance(raw, list):
            raise InputError("property-p JSON input must be a list of datum objects")
        for entry in raw:
            try:
                data.append(
                    localcond.LocalExtensionDatum(
                        e=int(entry["e"]),
                        q=int(entry["q"]),
                        tame=bool(entry["tame"]),
                        n=int(entry.get("n", 1)),
                    )
                )
            except (KeyError, ValueError) as ex:
                raise InputError(f"bad datum {entry!r}: {ex}")
    for text in args.data:
        data.append(_parse_datum(text))
    if not data:
        raise InputError("property-p needs datum tuples e,q,tame[,n] or --input JSON")
    rep = Report("property-p", {"count": len(data)})
    results = []
    for idx, datum in enumerate(data):
        has_p = localcond.property_p(datum)
        try:
            criterion = localcond.tame_solvability_criterion(datum)
            crit_repr = bool(criterion)
        except localcond.CriterionNotApplicable:
            crit_repr = "not-applicable"
        rep.add(
            f"property-p-{idx}",
            True,
            f"e={datum.e}, q={datum.q}, tame={datum.tame}, n={datum.n}: "
            f"property_p={has_p}, solvability_criterion={crit_repr}",
        )
        results.append(
            {
                "e": datum.e,
                "q": datum.q,
                "tame": datum.tame,
                "n": datum.n,
                "property_p": has_p,
                "criterion": crit_repr,
            }
        )
    rep.results = {"data": results}
    return rep


# ---------------------------------------------------------------------------
# verify-all suites
# ---------------------------------------------------------------------------


def _suite_subgroups(seed: int) -> List[Check]:
    checks: List[Check] = []
    for p, n in ((2, 1), (2, 2), (3, 1), (3, 2), (5, 1)):
        t0 = time.perf_counter()
        formula = combinat.count_rank2_subgroups(p, n)
        family = combinat.enumerate_rank2_subgroups(p, n)
        checks.append(
            Check(
                f"subgroup-count-p{p}-n{n}",
                "pass" if len(family) == formula else "fail",
                f"formula {formula} == enumeration {len(family)}",
                time.perf_counter() - t0,
            )
        )
    for p in (2, 3, 5, 7):
        for n in range(1, 5):
            count = combinat.count_rank2_subgroups(p, n)
            bound = n * (2 * n - 1)
            checks.append(
                Check(
                    f"subgroup-bound-p{p}-n{n}",
                    "pass" if count >= bound else "fail",
                    f"{count} ≥ {bound}",
                )
            )
    return checks


_PROJECTOR_PAIRS: Tuple[Tuple[str, int], ...] = (
    ("z3", 2), ("z3", 5), ("z3", 7),
    ("z4", 3), ("z4", 5),
    ("z5", 2), ("z5", 3), ("z5", 7),
    ("z6", 5), ("z6", 7),
    ("z7", 2), ("z7", 3), ("z7", 5),
    ("klein4", 3), ("klein4", 5),
    ("s3", 5), ("s3", 7),
    ("dihedral8", 3), ("dihedral8", 5),
    ("quaternion", 3), ("quaternion", 7),
    ("a4", 5), ("a4", 7),
    ("s4", 5), ("dihedral12", 5),
)


def _suite_projectors(seed: int) -> List[Check]:
    rep = Report("projectors", {})
    for name, p in _PROJECTOR_PAIRS:
        phi = BUILTIN_GROUPS[name]()
        _projector_checks(rep, phi, p, f"{name}-p{p}")
    return rep.checks


def _suite_plans(seed: int) -> List[Check]:
    checks: List[Check] = []
    per_combo = 112
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            rng = np.random.default_rng([seed, 101, p, n])
            t0 = time.perf_counter()
            bad = 0
            for k in range(per_combo):
                u, w = _random_independent_pair(rng, p, 2 * n)
                try:
                    combinat.congruence_plan(u, w, p, ell=k)
                except (ValueError, AssertionError):
                    bad += 1
            checks.append(
                Check(
                    f"congruence-plans-p{p}-n{n}",
                    "pass" if bad == 0 else "fail",
                    f"{per_combo} random pairs, {bad} failures",
                    time.perf_counter() - t0,
                )
            )
    # table assembly, readback, and projection stability on a small family
    t0 = time.perf_counter()
    family = combinat.enumerate_rank2_subgroups(2, 1)
    plans = combinat.plans_for_family(family)
    phi = groups.cyclic_group(3)
    designated = [1]
    tables = combinat.assemble_nu_exponents(plans, family, phi, designated)
    reads = combinat.readback_pairs(tables, plans, designated)
    module = modrep.regular_module(phi, 2)
    simples = modrep.simple_modules(phi, 2)
    projector = modrep.isotypic_projector(module, simples[0])
    stable, matches = combinat.verify_projection_stability(tables, projector, family, designated)
    checks.append(
        Check(
            "plan-tables-roundtrip",
            "pass" if all(reads) and stable else "fail",
            f"{len(plans)} labels read back; projection stability matches {matches}",
            time.perf_counter() - t0,
        )
    )
    return checks


def _random_pairwise_family(rng, p: int, n: int) -> combinat.SubgroupFamily:
    """A pair-indexed family span(x_i, x_j) from a random basis."""
    m = 2 * n
    while True:
        basis = rng.integers(0, p, size=(m, m)).astype(np.int64)
        if linalg.rank(basis, p) == m:
            break
    members = []
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            members.append(np.vstack([basis[i - 1], basis[j - 1]]))
    ordered = [None] * (n * (2 * n - 1))
    k = 0
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            ordered[combinat.pair_index(i, j, m)] = members[k]
            k += 1
    return combinat.SubgroupFamily(combinat.ElementaryAbelian(p, m), ordered)


def _shared_line_family(rng, p: int, n: int) -> combinat.SubgroupFamily:
    """A degenerate family whose members all contain one common line."""
    m = 2 * n
    count = n * (2 * n - 1)
    common = np.zeros(m, dtype=np.int64)
    common[0] = 1
    members = []
    seen = set()
    while len(members) < count:
        v = rng.integers(0, p, size=m).astype(np.int64)
        mat = np.vstack([common, v])
        if linalg.rank(mat, p) != 2:
            continue
        key = tuple(linalg.row_space(mat, p).reshape(-1).tolist())
        if key in seen:
            continue
        seen.add(key)
        members.append(mat)
    return combinat.SubgroupFamily(combinat.ElementaryAbelian(p, m), members)


def _suite_wedge(seed: int) -> List[Check]:
    checks: List[Check] = []
    rng = np.random.default_rng([seed, 202])
    t0 = time.perf_counter()
    disagreements = []
    for k in range(100):
        p = (2, 3, 5)[k % 3]
        n = 2 if k % 4 else 1
        if k % 5 == 4:
            family = _shared_line_family(rng, p, n)
            agree, oracle, constructive, _ = _wedge_agreement(family)
            if n > 1 and (oracle or constructive):
                disagreements.append((k, "degenerate family declared surjective"))
        else:
            family = _random_pairwise_family(rng, p, n)
            agree, oracle, constructive, _ = _wedge_agreement(family)
            if not (agree and oracle and constructive):
                disagreements.append((k, f"oracle={oracle} constructive={constructive}"))
    checks.append(
        Check(
            "wedge-random-suite",
            "pass" if not disagreements else "fail",
            f"100 random families; disagreements: {disagreements}",
            time.perf_counter() - t0,
        )
    )
    coord = resolve_family("coordinate_z2_4")
    agree, oracle, constructive, detail = _wedge_agreement(coord)
    checks.append(
        Check(
            "wedge-coordinate-family",
            "pass" if agree and oracle and constructive else "fail",
            f"coordinate family in (Z/2)^4: {detail}",
        )
    )
    cyc = resolve_family("cyclic_z2_4")
    _, oracle, constructive, detail = _wedge_agreement(cyc)
    checks.append(
        Check(
            "wedge-cyclic-counterexample",
            "pass" if not oracle and not constructive else "fail",
            f"shared-line family: both routes reject ({detail})",
        )
    )
    return checks


def _suite_frattini(seed: int) -> List[Check]:
    checks: List[Check] = []
    for name in manifest()["shipped"]:
        ring = localring.ring_from_json(_fixture_json("rings", name))
        ideal = ring.designated_ideal()
        if ring.p not in (2, 3) or ideal.size > 32:
            checks.append(Check(f"frattini-pair-identity-{name}", "skip", "outside audit scope"))
            continue
        t0 = time.perf_counter()
        report = localring.frattini_subgroup_identity(ring)
        checks.append(
            Check(
                f"frattini-pair-identity-{name}",
                "pass" if report.holds else "fail",
                f"group order {report.group_order}: closure {report.frattini_order} "
                f"== pair-ideal side {report.pair_ideal_order}",
                time.perf_counter() - t0,
            )
        )
    for name, ring in families.frattini_counterexample_rings().items():
        t0 = time.perf_counter()
        report = localring.frattini_subgroup_identity(ring)
        checks.append(
            Check(
                f"frattini-counterexample-{name}",
                "pass" if not report.holds else "fail",
                f"documented refutation: closure {report.frattini_order} "
                f"< pair-ideal side {report.pair_ideal_order}",
                time.perf_counter() - t0,
            )
        )
    return checks


def _suite_dichotomy(seed: int) -> List[Check]:
    checks: List[Check] = []
    for p in (2, 3):
        t0 = time.perf_counter()
        outcomes = {"frattini": 0, "square-zero": 0}
        problems = []
        for ring in families.monomial_rings_up_to(p, 4):
            for idx in families.socle_line_indices(ring):
                gens = np.zeros((1, ring.rank), dtype=np.int64)
                gens[0, idx] = 1
                kernel = localring.ideal_span(ring, gens)
                if kernel.size != p:
                    problems.append((ring.name, idx, "socle line has wrong size"))
                    continue
                _, proj = localring.quotient(ring, kernel)
                pair = localring.frattini_pair_ideal(ring.designated_ideal())
                in_pair = all(pair.contains(v) for v in kernel.elements_coords())
                branch = localring.dichotomy(ring, proj)
                if isinstance(branch, localring.FrattiniContainment):
                    outcomes["frattini"] += 1
                    if not in_pair or not branch.verify(ring):
                        problems.append((ring.name, idx, "containment badge mismatch"))
                else:
                    outcomes["square-zero"] += 1
                    if in_pair:
                        problems.append((ring.name, idx, "both branch tests held"))
        checks.append(
            Check(
                f"dichotomy-sweep-p{p}",
                "pass" if not problems else "fail",
                f"socle-line kernels over all monomial rings of dim ≤ 4: {outcomes}; "
                f"problems: {problems}",
                time.perf_counter() - t0,
            )
        )
    return checks


def _suite_lift(seed: int) -> List[Check]:
    checks: List[Check] = []
    data = _fixture_json("lift", "f2y3_z3")
    ring, proj, gamma = _build_extension_from_spec(data)
    branch = localring.dichotomy(ring, proj)
    checks.append(
        Check(
            "lift-fixture-branch",
            "pass" if isinstance(branch, localring.FrattiniContainment) else "fail",
            "dichotomy puts the kernel in the pair ideal",
        )
    )
    t0 = time.perf_counter()
    pruned = localring.lift_search(gamma, ring, proj)
    checks.append(
        Check(
            "lift-nolift-pruned",
            "pass" if isinstance(pruned, localring.NoLiftResult) else "fail",
            f"space {pruned.search_space}, candidates {getattr(pruned, 'candidates_per_generator', None)}",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    literal = localring.lift_search(gamma, ring, proj, prune_orders=False)
    literal_ok = (
        isinstance(literal, localring.NoLiftResult)
        and literal.combos_enumerated == literal.search_space
    )
    checks.append(
        Check(
            "lift-nolift-literal",
            "pass" if literal_ok else "fail",
            f"all {literal.search_space} coset corrections tried one by one",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    cert = localring.no_lift_certificate(ring, proj)
    cert_ok = cert.kernel_in_frattini and cert.order_gap
    checks.append(
        Check(
            "no-lift-certificate",
            "pass" if cert_ok else "fail",
            f"congruence orders {cert.target_congruence_order} < {cert.source_congruence_order}, "
            f"Frattini order {cert.frattini_order}",
            time.perf_counter() - t0,
        )
    )
    return checks


def _tower_ring(p: int) -> Tuple[localring.FiniteLocalRing, localring.RingSurjection]:
    base = families.truncated_coefficient_ring(p, 2)
    tower = localring.adjoin_multi_square_zero(base, 3)
    gens = np.eye(tower.rank, dtype=np.int64)[1:4]
    kernel = localring.ideal_span(tower, gens)
    _, proj = localring.quotient(tower, kernel)
    return tower, proj


def _suite_towers(seed: int) -> List[Check]:
    checks: List[Check] = []
    for p in (2, 3):
        t0 = time.perf_counter()
        tower, proj = _tower_ring(p)
        result = localring.split_surjection(tower, proj)
        ok = isinstance(result, localring.SplitSection)
        details = f"three adjoined square-zero generators over Z/{p**2}"
        if ok:
            target = proj.target
            back = (result.section_matrix @ proj.matrix) % target.moduli
            ident = np.zeros((target.rank, target.rank), dtype=np.int64)
            np.fill_diagonal(ident, 1)
            ok = np.array_equal(back, ident % target.moduli)
            len_s = localring.ring_length(tower)
            len_r = localring.ring_length(target)
            ok = ok and (len_s == len_r + 3)
            details += f"; ℓ = {len_s} = {len_r} + 3"
        checks.append(
            Check(
                f"tower-split-p{p}",
                "pass" if ok else "fail",
                details,
                time.perf_counter() - t0,
            )
        )
        # nested two-step tower: adjoin one generator twice
        t0 = time.perf_counter()
        base = families.truncated_coefficient_ring(p, 2)
        mid = localring.adjoin_square_zero(base)
        top = localring.adjoin_square_zero(mid)
        kernel = localring.ideal_span(
            top, np.array([[0, 1, 0], [0, 0, 1]], dtype=np.int64)
        )
        _, proj2 = localring.quotient(top, kernel)
        result2 = localring.split_surjection(top, proj2)
        ok2 = isinstance(result2, localring.SplitSection)
        if ok2:
            len_top, len_base = localring.ring_length(top), localring.ring_length(base)
            ok2 = len_top == len_base + 2
        checks.append(
            Check(
                f"tower-nested-p{p}",
                "pass" if ok2 else "fail",
                "iterated single-generator extensions split back to the base",
                time.perf_counter() - t0,
            )
        )
    for name in ("mixed4", "mixed9"):
        ring = (
            families.mixed_torsion_ring(2) if name == "mixed4" else families.mixed_torsion_ring(3)
        )
        t0 = time.perf_counter()
        _, proj = localring.quotient(ring, ring.designated_ideal())
        result = localring.split_surjection(ring, proj)
        ok = isinstance(result, localring.SplitSection) and result.tower_layers >= 2
        checks.append(
            Check(
                f"split-deep-{name}",
                "pass" if ok else "fail",
                f"maximal-kernel split exercises the m·J ≠ 0 recursion "
                f"(tower layers {getattr(result, 'tower_layers', None)})",
                time.perf_counter() - t0,
            )
        )
    return checks


def _suite_localcond(seed: int) -> List[Check]:
    checks: List[Check] = []
    t0 = time.perf_counter()
    spot = [
        (localcond.property_p(localcond.LocalExtensionDatum(e=1, q=8, tame=True)), True),
        (localcond.property_p(localcond.LocalExtensionDatum(e=3, q=7, tame=True)), True),
        (localcond.property_p(localcond.LocalExtensionDatum(e=3, q=5, tame=True)), False),
        (
            localcond.tame_solvability_criterion(
                localcond.LocalExtensionDatum(e=2, q=17, tame=True, n=4)
            ),
            True,
        ),
        (
            localcond.tame_solvability_criterion(
                localcond.LocalExtensionDatum(e=2, q=5, tame=True, n=4)
            ),
            False,
        ),
    ]
    checks.append(
        Check(
            "localcond-spot-values",
            "pass" if all(got == want for got, want in spot) else "fail",
            f"fixed evaluation table: {[got for got, _ in spot]}",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    prime_powers = [
        (q, localcond._prime_factors(q)[0])
        for q in range(2, 10_001)
        if localcond._is_prime_power(q)
    ]
    bad = 0
    scanned = 0
    for q, _ in prime_powers:
        for e in range(1, 101):
            datum = localcond.LocalExtensionDatum(e=e, q=q, tame=True)
            if not localcond.property_p(datum):
                continue
            scanned += 1
            out = localcond.property_p_base_change(datum, 1)
            if not localcond.property_p(out):
                bad += 1
    grown = 0
    for q, _ in prime_powers:
        if q > 500:
            break
        for e in range(1, 101):
            datum = localcond.LocalExtensionDatum(e=e, q=q, tame=True)
            if not localcond.property_p(datum):
                continue
            for growth in (2, 3):
                out = localcond.property_p_base_change(datum, growth)
                grown += 1
                if not localcond.property_p(out):
                    bad += 1
    checks.append(
        Check(
            "base-change-scan",
            "pass" if bad == 0 else "fail",
            f"{scanned} data at trivial growth plus {grown} residue-degree extensions "
            f"by 2 and 3: {bad} regressions",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    mismatches = 0
    compared = 0
    for e in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16):
        for q, _ in prime_powers:
            if q > 2000:
                break
            datum = localcond.LocalExtensionDatum(e=e, q=q, tame=True, n=e)
            got = localcond.tame_solvability_criterion(datum)
            want = (q - 1) % (e * e) == 0
            compared += 1
            if got != want:
                mismatches += 1
    checks.append(
        Check(
            "criterion-prime-power-square",
            "pass" if mismatches == 0 else "fail",
            f"n = e with e a prime power reduces to e² | (q−1): "
            f"{compared} cases, {mismatches} mismatches",
            time.perf_counter() - t0,
        )
    )
    return checks


def _suite_groups(seed: int) -> List[Check]:
    checks: List[Check] = []
    t0 = time.perf_counter()
    z3 = groups.cyclic_group(3)
    z2 = groups.cyclic_group(2)
    inv_perm = [int(z3.inv[x]) for x in range(3)]
    action = groups.action_from_generator_maps(z2, z3, {z2.generators[0]: inv_perm})
    s3_built = groups.semidirect_product(z3, z2, action)
    ok_s3 = groups.isomorphic(s3_built, groups.symmetric_group(3))
    z6 = groups.direct_product(z2, z3)
    ok_z6 = groups.isomorphic(z6, groups.cyclic_group(6))
    s3_perm = groups.from_permutations([(1, 0, 2), (1, 2, 0)], name="s3-perm")
    ok_perm = groups.isomorphic(s3_perm, s3_built)
    checks.append(
        Check(
            "group-products",
            "pass" if ok_s3 and ok_z6 and ok_perm else "fail",
            f"inversion semidirect product matches S3 ({ok_s3}); "
            f"Z/2 × Z/3 is cyclic of order 6 ({ok_z6}); permutation copy agrees ({ok_perm})",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    q8 = groups.quaternion_group()
    tors = groups.p_torsion_of_center(q8, 2)
    comm = groups.commutator_power_subgroup(q8, 2)
    rank = groups.frattini_rank(q8, 2)
    quot, _ = groups.quotient_by_normal(q8, comm)
    klein = groups.abelian_group([2, 2])
    ok_struct = (
        tors.dim == 1
        and len(comm) == 2
        and rank == 2
        and groups.isomorphic(quot, klein)
        and groups.fingerprint(quot) == groups.fingerprint(klein)
    )
    checks.append(
        Check(
            "group-p-structure",
            "pass" if ok_struct else "fail",
            f"quaternion group: central 2-torsion dim {tors.dim}, "
            f"commutator/square subgroup order {len(comm)}, generator rank {rank}, "
            f"quotient is Klein four",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    sl2 = groups.sl2_f3()
    triv = groups.trivial_group()
    steps = groups.central_filtration(q8, 2, groups.trivial_action(triv, q8))
    ok_filt = sum(s.kernel_dim for s in steps) == 3 and sl2.order == 24
    checks.append(
        Check(
            "group-filtration-aux",
            "pass" if ok_filt else "fail",
            f"quaternion filtration exhausts 2^3 under the trivial auxiliary action; "
            f"|SL2(F3)| = {sl2.order}",
            time.perf_counter() - t0,
        )
    )
    return checks


def _suite_modules(seed: int) -> List[Check]:
    checks: List[Check] = []
    t0 = time.perf_counter()
    z3 = groups.cyclic_group(3)
    z2a = groups.cyclic_group(2)
    inv_perm = [int(z3.inv[x]) for x in range(3)]
    action = groups.action_from_generator_maps(z2a, z3, {z2a.generators[0]: inv_perm})
    s3 = groups.semidirect_product(z3, z2a, action)
    reg = modrep.regular_module(s3, 3)
    soc = modrep.socle(reg)
    rad = modrep.radical(reg)
    hd, _ = modrep.head(reg)
    soc_all, parts = modrep.socle_decomposition(reg)
    ok_layers = (
        soc.dim == 2
        and rad.dim == 4
        and hd.dim == 2
        and soc_all.dim == 2
        and sorted(sub.dim for sub, _ in parts) == [1, 1]
        and sorted(idx for _, idx in parts) == [0, 1]
    )
    checks.append(
        Check(
            "module-radical-layers",
            "pass" if ok_layers else "fail",
            f"regular module of the order-6 group at p=3: socle dim {soc.dim}, "
            f"radical dim {rad.dim}, head dim {hd.dim}, "
            f"socle splits into {len(parts)} isotypic pieces",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    z2 = groups.cyclic_group(2)
    reg2 = modrep.regular_module(z2, 2)
    e = modrep.socle(reg2)
    hull = modrep.injective_hull(e)
    cert = modrep.is_free(reg2)
    lis = modrep.least_irreducible_submodule(modrep.regular_module(z3, 2))
    ok_hull = (
        hull.hull.dim == 2
        and cert.free
        and cert.rank == 1
        and lis.dim in (1, 2)
        and modrep.modules_isomorphic(reg2, reg2)
    )
    checks.append(
        Check(
            "module-hull-freeness",
            "pass" if ok_hull else "fail",
            f"socle of the rank-1 free module has the whole module as hull "
            f"(dim {hull.hull.dim}); freeness certificate rank {cert.rank}",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    amb, offsets = modrep.direct_sum([reg2, reg2])
    e_line = modrep.spin(amb, np.array([[1, 1, 0, 0]], dtype=np.int64))
    n_sub = modrep.spin(amb, np.array([[0, 0, 1, 0], [0, 0, 0, 1]], dtype=np.int64))
    split = modrep.three_way_split(amb, e_line, n_sub)
    dims = (
        split.m_basis.shape[0],
        split.n_basis.shape[0],
        split.q_basis.shape[0],
    )
    ok_split = sum(dims) == amb.dim and dims[1] == 2 and split.q_rank == 0
    checks.append(
        Check(
            "module-three-way-split",
            "pass" if ok_split else "fail",
            f"free rank-2 ambient splits as M ⊕ N ⊕ Q with dims {dims}, free part rank "
            f"{split.q_rank}",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    sign = [s for s in modrep.simple_modules(z2a, 3) if s.gen_matrices[0][0, 0] == 2]
    pim = modrep.projective_indecomposable(s3, sign[0])
    pim_soc = modrep.socle(pim)
    pim_hd, _ = modrep.head(pim)
    ok_pim = pim.dim == 3 and pim_soc.dim == 1 and pim_hd.dim == 1
    checks.append(
        Check(
            "module-projective-cover",
            "pass" if ok_pim else "fail",
            f"induced module of the sign character has dim {pim.dim} with simple "
            f"socle and head",
            time.perf_counter() - t0,
        )
    )
    return checks


def _suite_fixture_roundtrip(seed: int) -> List[Check]:
    checks: List[Check] = []
    t0 = time.perf_counter()
    names = manifest()["shipped"]
    catalogue = families.shipped_rings()
    bad = []
    if sorted(catalogue) != sorted(names):
        bad.append("manifest does not match the constructor catalogue")
    for name in names:
        data = _fixture_json("rings", name)
        ring = localring.ring_from_json(data)
        again = localring.ring_to_json(ring)
        if localring.ring_from_json(again).size != ring.size or again["p"] != data["p"]:
            bad.append(name)
        if name in catalogue and localring.ring_to_json(catalogue[name]) != data:
            bad.append(f"{name}: fixture file drifted from its constructor")
        try:
            ring.validate()
        except ValueError as ex:
            bad.append(f"{name}: {ex}")
    checks.append(
        Check(
            "ring-fixture-roundtrip",
            "pass" if not bad else "fail",
            f"{len(names)} shipped ring fixtures load, validate and round-trip; bad: {bad}",
            time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    problems = []
    for name in ("quaternion", "dihedral8", "heisenberg27"):
        group = resolve_group(name)
        p = 2 if name != "heisenberg27" else 3
        steps = groups.central_filtration(group, p)
        total = sum(step.kernel_dim for step in steps)
        if p**total != group.order:
            problems.append(name)
    checks.append(
        Check(
            "filtration-fixtures",
            "pass" if not problems else "fail",
            f"central filtrations exhaust quaternion, dihedral8, heisenberg27; bad: {problems}",
            time.perf_counter() - t0,
        )
    )
    return checks


_SUITES: Tuple[Tuple[str, Callable[[int], List[Check]]], ...] = (
    ("groups", _suite_groups),
    ("modules", _suite_modules),
    ("subgroups", _suite_subgroups),
    ("projectors", _suite_projectors),
    ("congruence-plans", _suite_plans),
    ("wedge", _suite_wedge),
    ("frattini", _suite_frattini),
    ("dichotomy", _suite_dichotomy),
    ("lift", _suite_lift),
    ("towers", _suite_towers),
    ("localcond", _suite_localcond),
    ("fixtures", _suite_fixture_roundtrip),
)


def cmd_verify_all(args) -> Report:
    rep = Report("verify-all", {"seed": args.seed})
    threads = int(os.environ.get("TOWERFORGE_THREADS", "1") or "1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [(name, pool.submit(fn, args.seed)) for name, fn in _SUITES]
            for _, future in futures:
                rep.checks.extend(future.result())
    else:
        for _, fn in _SUITES:
            rep.checks.extend(fn(args.seed))
    return rep


HANDLERS: Dict[str, Callable] = {
    "filtration": cmd_filtration,
    "projectors": cmd_projectors,
    "subgroups": cmd_subgroups,
    "wedge-check": cmd_wedge_check,
    "congruence-plans": cmd_congruence_plans,
    "ring-dichotomy": cmd_ring_dichotomy,
    "ring-split": cmd_ring_split,
    "lift-search": cmd_lift_search,
    "property-p": cmd_property_p,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="towerforge",
        description="Exact finite-algebra verification toolkit",
    )
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument("--input", help="fixture name, builtin name, or JSON file path")
    parser.add_argument("--output", help="base path for the report files (.json/.txt/.csv/.png)")
    parser.add_argument("--p", type=int, help="prime parameter")
    parser.add_argument("--n", type=int, help="rank parameter")
    parser.add_argument("--e", type=int, help="exponent parameter")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--guard-max", type=int, dest="guard_max",
                        help="override the command's size guard (or sample count)")
    parser.add_argument("data", nargs="*", help="property-p datum tuples e,q,tame[,n]")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = HANDLERS[args.command](args)
    except InputError as ex:
        print(f"input error: {ex}", file=sys.stderr)
        return 2
    except GuardExceeded as ex:
        print(f"guard exceeded: {ex}", file=sys.stderr)
        return 3
    except ValueError as ex:
        print(f"input error: {ex}", file=sys.stderr)
        return 2
    if args.output:
        paths = write_reports(report, args.output)
        print(f"wrote {', '.join(paths)}; verdict: {report.verdict()}")
    else:
        sys.stdout.write(render_json(report))
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
