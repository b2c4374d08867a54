"""Rank-2 subgroup families: counting, enumeration, congruence plans,
exponent tables, and the wedge spanning criterion."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from towerforge import combinat, groups, linalg, modrep
from towerforge.errors import GuardExceeded


def brute_span_size(rows, p):
    """Size of the F_p-span of the rows, by closure under addition/scaling."""
    seen = {tuple(np.zeros(rows.shape[1], dtype=np.int64))}
    frontier = list(seen)
    for r in rows:
        r = tuple(int(x) % p for x in r)
        if r not in seen:
            seen.add(r)
            frontier.append(r)
    changed = True
    while changed:
        changed = False
        for a in list(seen):
            for b in rows:
                for c in range(1, p):
                    v = tuple((x + c * int(y)) % p for x, y in zip(a, b))
                    if v not in seen:
                        seen.add(v)
                        changed = True
    return len(seen)


def wedge_rows_oracle(family):
    """All pairwise 2x2-minor vectors of the members, computed from scratch."""
    p = family.ambient.p
    m = family.ambient.rank
    rows = []
    for member in family.members:
        for v1, v2 in itertools.combinations(member, 2):
            coords = []
            for i in range(m):
                for j in range(i + 1, m):
                    coords.append((int(v1[i]) * int(v2[j]) - int(v1[j]) * int(v2[i])) % p)
            rows.append(coords)
    return np.array(rows, dtype=np.int64) if rows else np.zeros((0, m * (m - 1) // 2), dtype=np.int64)


def random_pair(rng, p, dim):
    while True:
        cand = rng.integers(0, p, size=(2, dim)).astype(np.int64)
        if linalg.rank(cand, p) == 2:
            return cand


class TestCounting:
    def test_small_counts(self):
        assert combinat.count_rank2_subgroups(2, 1) == 1
        assert combinat.count_rank2_subgroups(3, 1) == 1
        assert combinat.count_rank2_subgroups(5, 1) == 1
        assert combinat.count_rank2_subgroups(2, 2) == 35
        assert combinat.count_rank2_subgroups(3, 2) == 130

    def test_count_matches_brute_force_orbit_count(self):
        # count distinct rank-2 row spaces of (Z/p)^{2n} directly
        for p, n in ((2, 1), (3, 1), (2, 2)):
            dim = 2 * n
            seen = set()
            vecs = list(itertools.product(range(p), repeat=dim))
            for a, b in itertools.combinations(vecs, 2):
                m = np.array([a, b], dtype=np.int64)
                if linalg.rank(m, p) != 2:
                    continue
                seen.add(linalg.row_space(m, p).tobytes())
            assert len(seen) == combinat.count_rank2_subgroups(p, n)

    def test_enumeration_agrees_with_formula(self):
        for p, n in ((2, 1), (2, 2), (3, 1), (3, 2), (5, 1)):
            fam = combinat.enumerate_rank2_subgroups(p, n)
            assert len(fam) == combinat.count_rank2_subgroups(p, n)

    def test_enumeration_members_distinct_echelon_and_sorted(self):
        fam = combinat.enumerate_rank2_subgroups(2, 2)
        keys = [m.reshape(-1).tolist() for m in fam.members]
        assert keys == sorted(keys)
        canon = {linalg.row_space(m, 2).tobytes() for m in fam.members}
        assert len(canon) == len(fam)
        for m in fam.members:
            assert np.array_equal(linalg.row_space(m, 2), m)

    def test_enumeration_guard_trips(self):
        with pytest.raises(GuardExceeded):
            combinat.enumerate_rank2_subgroups(2, 30)

    def test_family_rejects_dependent_rows(self):
        amb = combinat.ElementaryAbelian(2, 4)
        with pytest.raises(ValueError):
            combinat.SubgroupFamily(amb, [np.array([[1, 0, 0, 0], [1, 0, 0, 0]])])

    def test_family_json_round_trip(self):
        fam = combinat.enumerate_rank2_subgroups(2, 2)
        back = combinat.SubgroupFamily.from_json(fam.to_json())
        assert len(back) == len(fam)
        assert all(np.array_equal(a, b) for a, b in zip(back.members, fam.members))


class TestCongruencePlan:
    def test_first_half_pivot_with_vanishing_offside_goes_1b(self):
        plan = combinat.congruence_plan([1, 0], [0, 1], 3)
        assert plan.case_tag == "1b"
        assert plan.i == 1 and plan.j == 1
        assert plan.c.tolist() == [0] and plan.d.tolist() == [1]
        assert plan.a_exp.tolist() == [0] and plan.b_exp.tolist() == [1]

    def test_second_half_pivot_with_vanishing_offside_goes_2b(self):
        plan = combinat.congruence_plan([0, 1], [1, 0], 3)
        assert plan.case_tag == "2b"
        assert plan.c.tolist() == [1] and plan.d.tolist() == [0]
        assert plan.a_exp.tolist() == [1] and plan.b_exp.tolist() == [0]

    def test_case_1a_when_offside_survives(self):
        # u = (1,0 | 0,0), w = (0,1 | 0,0): c = (0,1), nonzero off the pivot
        plan = combinat.congruence_plan([1, 0, 0, 0], [0, 1, 0, 0], 2)
        assert plan.case_tag == "1a"
        assert plan.i == 1 and plan.j == 2

    def test_case_2a_when_offside_survives(self):
        plan = combinat.congruence_plan([0, 0, 1, 0], [0, 0, 0, 1], 2)
        assert plan.case_tag == "2a"

    def test_auxiliary_vectors_satisfy_cross_identity(self):
        # (c | d) is the cross combination coef1*w - coef2*u at the pivot
        rng = np.random.default_rng(7)
        for _ in range(300):
            p = int(rng.choice([2, 3, 5]))
            n = int(rng.integers(1, 4))
            u, w = random_pair(rng, p, 2 * n)
            plan = combinat.congruence_plan(u, w, p)
            idx = (plan.i - 1) if plan.case_tag.startswith("1") else (n + plan.i - 1)
            coef1, coef2 = int(plan.u[idx]), int(plan.w[idx])
            expect = (coef1 * plan.w - coef2 * plan.u) % p
            got = np.concatenate([plan.c, plan.d]) % p
            assert np.array_equal(got, expect)

    def test_exponent_vector_rebuilds_the_plane(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            p = int(rng.choice([2, 3, 5]))
            n = int(rng.integers(1, 4))
            u, w = random_pair(rng, p, 2 * n)
            plan = combinat.congruence_plan(u, w, p)
            v = np.concatenate([plan.a_exp, plan.b_exp])
            assert v.any()
            span_uv = linalg.row_space(np.vstack([plan.u, v]), p)
            span_uw = linalg.row_space(np.vstack([plan.u, plan.w]), p)
            assert np.array_equal(span_uv, span_uw)
            assert plan.case_tag in ("1a", "1b", "2a", "2b")

    def test_normalization_pins_exponent_one_at_j(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            p = int(rng.choice([3, 5]))
            n = int(rng.integers(1, 4))
            u, w = random_pair(rng, p, 2 * n)
            plan = combinat.congruence_plan(u, w, p)
            if plan.case_tag in ("1a", "2b"):
                assert int(plan.a_exp[plan.j - 1]) == 1
            else:
                assert int(plan.b_exp[plan.j - 1]) == 1

    def test_rejects_dependent_or_odd_input(self):
        with pytest.raises(ValueError):
            combinat.congruence_plan([1, 0], [2, 0], 3)
        with pytest.raises(ValueError):
            combinat.congruence_plan([1, 0, 0], [0, 1, 0], 2)

    def test_plans_for_family_covers_every_member(self):
        fam = combinat.enumerate_rank2_subgroups(2, 2)
        plans = combinat.plans_for_family(fam)
        assert len(plans) == 35
        for k, (plan, member) in enumerate(zip(plans, fam.members)):
            assert plan.ell == k
            assert np.array_equal(plan.u, member[0] % 2)
            assert np.array_equal(plan.w, member[1] % 2)
            plan.validate()

    @given(st.integers(0, 2**16 - 1), st.sampled_from([2, 3, 5]), st.integers(1, 3))
    @settings(max_examples=60, deadline=None)
    def test_plan_validates_for_random_pairs(self, seed, p, n):
        rng = np.random.default_rng([seed, p, n])
        u, w = random_pair(rng, p, 2 * n)
        plan = combinat.congruence_plan(u, w, p)
        plan.validate()  # raises on any broken invariant


class TestExponentTables:
    def phi_and_family(self):
        phi = groups.cyclic_group(3)
        fam = combinat.enumerate_rank2_subgroups(2, 2)
        designated = [0, 1]
        return phi, fam, designated

    def test_assemble_then_readback_round_trips(self):
        phi, fam, designated = self.phi_and_family()
        plans = combinat.plans_for_family(fam)
        tables = combinat.assemble_nu_exponents(plans, fam, phi, designated)
        assert tables.s.shape == (phi.order, len(fam))
        assert all(combinat.readback_pairs(tables, plans, designated))

    def test_assemble_rejects_colliding_designations(self):
        phi, fam, _ = self.phi_and_family()
        plans = combinat.plans_for_family(fam)
        with pytest.raises(ValueError):
            combinat.assemble_nu_exponents(plans, fam, phi, [0, 0])
        with pytest.raises(ValueError):
            combinat.assemble_nu_exponents(plans, fam, phi, [0])
        with pytest.raises(ValueError):
            combinat.assemble_nu_exponents(plans[:-1], fam, phi, [0, 1])

    def test_readback_fails_after_tampering(self):
        phi, fam, designated = self.phi_and_family()
        plans = combinat.plans_for_family(fam)
        tables = combinat.assemble_nu_exponents(plans, fam, phi, designated)
        tampered = tables.copy()
        ell = 3
        g = designated[0]
        h = int(phi.inv[g])
        tampered.s[h, ell] = (tampered.s[h, ell] + 1) % tampered.p
        flags = combinat.readback_pairs(tampered, plans, designated)
        assert not flags[ell]
        assert all(f for k, f in enumerate(flags) if k != ell)

    def test_identity_projection_is_stable(self):
        phi, fam, designated = self.phi_and_family()
        plans = combinat.plans_for_family(fam)
        tables = combinat.assemble_nu_exponents(plans, fam, phi, designated)
        reg = modrep.regular_module(phi, fam.ambient.p)
        identity_proj = modrep.IsotypicProjector(
            module=reg,
            target=reg,
            coefficients={phi.identity: 1},
            matrix=np.eye(phi.order, dtype=np.int64),
        )
        ok, matches = combinat.verify_projection_stability(
            tables, identity_proj, fam, designated
        )
        assert ok and all(m is not None for m in matches)

    def test_sign_piece_projection_is_stable_for_order_two_group(self):
        phi = groups.cyclic_group(2)
        fam = combinat.enumerate_rank2_subgroups(3, 1)
        designated = [1]
        plans = combinat.plans_for_family(fam)
        tables = combinat.assemble_nu_exponents(plans, fam, phi, designated)
        reg = modrep.regular_module(phi, 3)
        simples = modrep.simple_modules(phi, 3)
        sign = [s for s in simples if int(s.gen_matrices[0][0, 0]) == 2][0]
        proj = modrep.isotypic_projector(reg, sign)
        ok, matches = combinat.verify_projection_stability(tables, proj, fam, designated)
        assert ok and all(m is not None for m in matches)

    def test_project_tables_matches_direct_coefficient_sum(self):
        phi, fam, designated = self.phi_and_family()
        plans = combinat.plans_for_family(fam)
        tables = combinat.assemble_nu_exponents(plans, fam, phi, designated)
        reg = modrep.regular_module(phi, fam.ambient.p)
        simples = modrep.simple_modules(phi, fam.ambient.p)
        proj = modrep.isotypic_projector(reg, simples[0])
        out = combinat.project_tables(tables, proj)
        p = tables.p
        for g in range(phi.order):
            for ell in range(tables.num_labels):
                want = 0
                for h, coeff in proj.coefficients.items():
                    want += coeff * int(tables.s[phi.op(int(phi.inv[h]), g), ell])
                assert int(out.s[g, ell]) == want % p


class TestWedge:
    def coordinate_family(self, p=2, n=2):
        two_n = 2 * n
        members = [None] * (n * (2 * n - 1))
        eye = np.eye(two_n, dtype=np.int64)
        for i in range(1, two_n + 1):
            for j in range(i + 1, two_n + 1):
                k = combinat.pair_index(i, j, two_n)
                members[k] = np.vstack([eye[i - 1], eye[j - 1]])
        return combinat.SubgroupFamily(combinat.ElementaryAbelian(p, two_n), members)

    def cyclic_family(self, p=2):
        # six rank-2 members of (Z/2)^4 that all contain e_1
        e = np.eye(4, dtype=np.int64)
        others = [e[1], e[2], e[3], (e[1] + e[2]) % p, (e[1] + e[3]) % p, (e[2] + e[3]) % p]
        members = [np.vstack([e[0], v]) for v in others]
        return combinat.SubgroupFamily(combinat.ElementaryAbelian(p, 4), members)

    def test_coordinate_family_is_surjective_with_rank_six(self):
        ok, achieved, required = combinat.wedge_surjectivity(self.coordinate_family())
        assert ok and achieved == 6 and required == 6

    def test_common_line_family_is_not_surjective(self):
        ok, achieved, required = combinat.wedge_surjectivity(self.cyclic_family())
        assert not ok and achieved == 3 and required == 6

    def test_surjectivity_matches_brute_rank_on_random_families(self):
        rng = np.random.default_rng(23)
        for trial in range(100):
            p = int(rng.choice([2, 3]))
            k = int(rng.integers(2, 7))
            if trial % 5 == 4:
                # degenerate: everyone shares a line
                shared = random_pair(rng, p, 4)[0]
                members = []
                while len(members) < k:
                    v = rng.integers(0, p, size=4).astype(np.int64)
                    m = np.vstack([shared, v])
                    if linalg.rank(m, p) == 2:
                        members.append(m)
            else:
                members = [random_pair(rng, p, 4) for _ in range(k)]
            fam = combinat.SubgroupFamily(combinat.ElementaryAbelian(p, 4), members)
            ok, achieved, required = combinat.wedge_surjectivity(fam)
            assert required == 6
            span = brute_span_size(wedge_rows_oracle(fam), p)
            assert p**achieved == span
            assert ok == (achieved == 6)

    def test_empty_family_is_not_surjective(self):
        fam = combinat.SubgroupFamily(combinat.ElementaryAbelian(2, 4), [])
        ok, achieved, required = combinat.wedge_surjectivity(fam)
        assert not ok and achieved == 0 and required == 6


class TestPairIndex:
    def test_enumerates_pairs_in_declared_order(self):
        order = []
        for i in range(1, 5):
            for j in range(i + 1, 5):
                order.append((i, j))
        for k, (i, j) in enumerate(order):
            assert combinat.pair_index(i, j, 4) == k

    def test_rejects_bad_pairs(self):
        with pytest.raises(ValueError):
            combinat.pair_index(2, 2, 4)
        with pytest.raises(ValueError):
            combinat.pair_index(0, 1, 4)
        with pytest.raises(ValueError):
            combinat.pair_index(1, 5, 4)


class TestSpanningBasis:
    def test_coordinate_family_recovers_coordinate_lines(self):
        fam = TestWedge().coordinate_family()
        sb = combinat.select_spanning_basis(fam)
        assert np.array_equal(sb.basis, np.eye(4, dtype=np.int64))
        assert len(sb.certificates) == 6

    def test_certificates_reconstruct_each_wedge(self):
        fam = TestWedge().coordinate_family(p=3, n=2)
        sb = combinat.select_spanning_basis(fam)
        p = 3
        for cert in sb.certificates:
            mem = fam.members[cert.member]
            target = wedge_rows_oracle(
                combinat.SubgroupFamily(
                    fam.ambient,
                    [np.vstack([sb.basis[cert.i - 1], sb.basis[cert.j - 1]])],
                )
            )[0]
            gen_wedges = wedge_rows_oracle(
                combinat.SubgroupFamily(fam.ambient, [mem])
            )
            combo = (np.array(cert.coefficients, dtype=np.int64) @ gen_wedges) % p
            assert np.array_equal(combo, target % p)

    def test_change_of_basis_equivariance(self):
        rng = np.random.default_rng(31)
        p = 3
        base = TestWedge().coordinate_family(p=p, n=2)
        for _ in range(5):
            while True:
                g = rng.integers(0, p, size=(4, 4)).astype(np.int64)
                if linalg.rank(g, p) == 4:
                    break
            members = [(m @ g) % p for m in base.members]
            fam = combinat.SubgroupFamily(combinat.ElementaryAbelian(p, 4), members)
            sb = combinat.select_spanning_basis(fam)
            for m_idx in range(4):
                line = linalg.row_space(g[m_idx].reshape(1, -1), p)
                assert np.array_equal(linalg.row_space(sb.basis[m_idx].reshape(1, -1), p), line)

    def test_common_line_family_has_no_spanning_basis(self):
        fam = TestWedge().cyclic_family()
        with pytest.raises(ValueError):
            combinat.select_spanning_basis(fam)

    def test_wrong_member_count_is_rejected(self):
        fam = TestWedge().coordinate_family()
        short = combinat.SubgroupFamily(fam.ambient, fam.members[:-1])
        with pytest.raises(ValueError):
            combinat.select_spanning_basis(short)

    def test_single_pair_case(self):
        fam = combinat.enumerate_rank2_subgroups(3, 1)
        sb = combinat.select_spanning_basis(fam)
        assert sb.basis.shape == (2, 2)
        assert linalg.rank(sb.basis, 3) == 2
