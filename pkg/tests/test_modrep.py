"""Modular representation theory: socles, projectors, hulls, and the
three-way ambient-module split."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from towerforge import groups, linalg, modrep


def s3_semidirect():
    z3 = groups.cyclic_group(3)
    z2 = groups.cyclic_group(2)
    inv_perm = [int(z3.inv[x]) for x in range(3)]
    action = groups.action_from_generator_maps(z2, z3, {z2.generators[0]: inv_perm})
    return groups.semidirect_product(z3, z2, action)


def trivial_module(group, p, dim=1):
    eye = np.eye(dim, dtype=np.int64)
    return modrep.GroupModule(p, dim, group, [eye for _ in group.generators])


class TestSimpleDecomposition:
    def test_trivial_group_gives_trivial_isotypic(self):
        triv = groups.trivial_group()
        m = trivial_module(triv, 5, dim=3)
        decomp = modrep.simple_decomposition(m)
        assert len(decomp) == 1
        simple, mult = decomp[0]
        assert simple.dim == 1 and mult == 3

    def test_regular_z2_at_p3_splits_into_trivial_and_sign(self):
        reg = modrep.regular_module(groups.cyclic_group(2), 3)
        decomp = modrep.simple_decomposition(reg)
        dims = sorted(s.dim for s, _ in decomp)
        mults = [m for _, m in decomp]
        assert dims == [1, 1] and mults == [1, 1]
        traces = sorted(int(s.gen_matrices[0][0, 0]) for s, _ in decomp)
        assert traces == [1, 2]  # +1 (trivial) and −1 (sign) mod 3

    def test_regular_z3_at_p2_has_a_two_dimensional_simple(self):
        reg = modrep.regular_module(groups.cyclic_group(3), 2)
        decomp = modrep.simple_decomposition(reg)
        dims = sorted(s.dim for s, _ in decomp)
        assert dims == [1, 2]
        two_dim = [s for s, _ in decomp if s.dim == 2][0]
        # simple because x² + x + 1 is irreducible over F_2
        assert modrep.is_simple(two_dim)

    def test_rejects_p_dividing_group_order(self):
        reg = modrep.regular_module(groups.cyclic_group(2), 2)
        with pytest.raises(ValueError):
            modrep.simple_decomposition(reg)


class TestIsotypicProjector:
    def test_trivial_group_gives_identity(self):
        triv = groups.trivial_group()
        m = trivial_module(triv, 3, dim=2)
        s = trivial_module(triv, 3, dim=1)
        proj = modrep.isotypic_projector(m, s)
        assert np.array_equal(proj.matrix, np.eye(2, dtype=np.int64))

    def test_z2_regular_at_p3_trivial_component(self):
        reg = modrep.regular_module(groups.cyclic_group(2), 3)
        trivial = [
            s for s, _ in modrep.simple_decomposition(reg) if s.gen_matrices[0][0, 0] == 1
        ][0]
        proj = modrep.isotypic_projector(reg, trivial)
        # (1/2)(1 + g) = 2(1 + g) over F_3, i.e. [[2,2],[2,2]] in the basis {1, g}
        assert np.array_equal(proj.matrix % 3, np.array([[2, 2], [2, 2]]))
        assert np.array_equal((proj.matrix @ proj.matrix) % 3, proj.matrix % 3)

    def test_z3_regular_at_p2_projectors_sum_to_identity(self):
        reg = modrep.regular_module(groups.cyclic_group(3), 2)
        simples = modrep.simple_modules(groups.cyclic_group(3), 2)
        mats = [modrep.isotypic_projector(reg, s).matrix for s in simples]
        total = sum(mats) % 2
        assert np.array_equal(total, np.eye(3, dtype=np.int64))
        for a, b in itertools.combinations(range(len(mats)), 2):
            assert not ((mats[a] @ mats[b]) % 2).any()

    def test_identity_coefficient_nonzero_for_absolutely_irreducible(self):
        # for every simple with End = F_p, the identity's coefficient is nonzero
        cases = [
            (groups.cyclic_group(2), 3),
            (groups.cyclic_group(2), 5),
            (groups.symmetric_group(3), 5),
            (groups.cyclic_group(4), 5),
        ]
        seen = 0
        for phi, p in cases:
            reg = modrep.regular_module(phi, p)
            for s in modrep.simple_modules(phi, p):
                if len(modrep.end_algebra(s)) != 1:
                    continue  # not absolutely irreducible
                proj = modrep.isotypic_projector(reg, s)
                assert proj.coefficients[phi.identity] != 0
                seen += 1
        assert seen >= 5

    def test_projector_algebra_on_twenty_random_cases(self):
        groups_pool = [
            groups.cyclic_group(2),
            groups.cyclic_group(3),
            groups.cyclic_group(4),
            groups.cyclic_group(6),
            groups.abelian_group([2, 2]),
            groups.symmetric_group(3),
            groups.dihedral_group(4),
            groups.quaternion_group(),
            groups.alternating_group_4(),
            groups.symmetric_group(4),
        ]
        primes = (2, 3, 5, 7)
        done = 0
        for phi in groups_pool:
            for p in primes:
                if phi.order % p == 0:
                    continue
                reg = modrep.regular_module(phi, p)
                simples = modrep.simple_modules(phi, p)
                mats = [modrep.isotypic_projector(reg, s).matrix for s in simples]
                for m in mats:
                    assert np.array_equal((m @ m) % p, m % p)
                for a, b in itertools.permutations(range(len(mats)), 2):
                    assert not ((mats[a] @ mats[b]) % p).any()
                assert np.array_equal(
                    sum(mats) % p, np.eye(phi.order, dtype=np.int64)
                )
                done += 1
        assert done >= 20


class TestSocle:
    def test_semisimple_module_is_its_own_socle(self):
        reg = modrep.regular_module(groups.cyclic_group(3), 2)
        assert modrep.socle(reg).dim == 3

    def test_regular_module_of_cyclic_p_has_norm_line(self):
        for p in (2, 3, 5):
            reg = modrep.regular_module(groups.cyclic_group(p), p)
            soc = modrep.socle(reg)
            assert soc.dim == 1
            assert np.array_equal(soc.basis[0] % p, np.ones(p, dtype=np.int64))

    def test_regular_s3_at_p3_socle_is_two_dimensional(self):
        soc = modrep.socle(modrep.regular_module(s3_semidirect(), 3))
        assert soc.dim == 2

    def cyclic_closure(self, module, v):
        p = module.p
        cur = linalg.row_space(v.reshape(1, -1) % p, p)
        while True:
            images = [cur] + [(cur @ m.T) % p for m in module.gen_matrices]
            nxt = linalg.row_space(np.concatenate(images), p)
            if nxt.shape[0] == cur.shape[0]:
                return nxt
            cur = nxt

    def brute_socle(self, module):
        """Sum of all minimal submodules.  A cyclic submodule is minimal
        exactly when every nonzero vector inside it regenerates it, so this
        needs no semisimplicity assumption on the acting group."""
        p, d = module.p, module.dim
        minimal = []
        for combo in itertools.product(range(p), repeat=d):
            v = np.array(combo, dtype=np.int64)
            if not v.any():
                continue
            sub = self.cyclic_closure(module, v)
            k = sub.shape[0]
            simple = True
            for coeffs in itertools.product(range(p), repeat=k):
                w = (np.array(coeffs, dtype=np.int64) @ sub) % p
                if not w.any():
                    continue
                if self.cyclic_closure(module, w).shape[0] != k:
                    simple = False
                    break
            if simple:
                minimal.append(sub)
        if not minimal:
            return np.zeros((0, d), dtype=np.int64)
        return linalg.row_space(np.vstack(minimal), p)

    def test_socle_shortcut_matches_exhaustive_search(self):
        z2 = groups.cyclic_group(2)
        cases = [
            modrep.regular_module(groups.cyclic_group(2), 2),
            modrep.regular_module(groups.cyclic_group(3), 3),
            modrep.regular_module(groups.cyclic_group(4), 2),
            modrep.regular_module(s3_semidirect(), 3),
            trivial_module(z2, 2, dim=2),
        ]
        for module in cases:
            got = modrep.socle(module)
            want = self.brute_socle(module)
            assert np.array_equal(got.basis, want), module.dim


class TestProjectiveAndHull:
    def test_pim_of_trivial_normal_part_is_the_simple(self):
        z2 = groups.cyclic_group(2)
        triv = groups.trivial_group()
        gamma = groups.semidirect_product(
            triv, z2, groups.trivial_action(z2, triv)
        )
        simples = modrep.simple_modules(z2, 3)
        for s in simples:
            pim = modrep.projective_indecomposable(gamma, s)
            assert pim.dim == s.dim

    def test_pim_over_pure_p_group_is_regular(self):
        z3 = groups.cyclic_group(3)
        triv = groups.trivial_group()
        gamma = groups.semidirect_product(
            z3, triv, groups.trivial_action(triv, z3)
        )
        s = trivial_module(triv, 3, dim=1)
        pim = modrep.projective_indecomposable(gamma, s)
        assert pim.dim == 3

    def test_pim_of_sign_for_s3_at_p3(self):
        gamma = s3_semidirect()
        z2 = gamma.semidirect.complement
        sign = [
            s
            for s in modrep.simple_modules(z2, 3)
            if int(s.gen_matrices[0][0, 0]) == 2
        ][0]
        pim = modrep.projective_indecomposable(gamma, sign)
        assert pim.dim == 3
        assert modrep.socle(pim).dim == 1
        head, _ = modrep.head(pim)
        assert head.dim == 1

    def test_hull_of_regular_socle_is_whole_module(self):
        for p in (2, 3):
            reg = modrep.regular_module(groups.cyclic_group(p), p)
            hull = modrep.injective_hull(modrep.socle(reg))
            assert hull.hull.dim == p
            assert linalg.rank(hull.embed, p) == p

    def test_hull_of_semisimple_over_trivial_normal_part_is_itself(self):
        reg = modrep.regular_module(groups.cyclic_group(3), 2)
        e = modrep.spin(reg, np.array([[1, 1, 1]], dtype=np.int64))
        hull = modrep.injective_hull(e)
        assert hull.hull.dim == e.dim

    def test_hull_embedding_is_essential(self):
        # every nonzero invariant subspace of the hull meets the image of e
        reg = modrep.regular_module(groups.cyclic_group(2), 2)
        e = modrep.socle(reg)
        hull = modrep.injective_hull(e)
        p = 2
        hull_mod = hull.hull
        d = hull_mod.dim
        # composing the essential map with the ambient embedding recovers e
        assert np.array_equal((hull.essential.T @ hull.embed.T) % p, e.basis % p)
        e_img = linalg.row_space(hull.essential.T % p, p)
        for k in (1, 2):
            for combo in itertools.product(range(p), repeat=k * d):
                cand = np.array(combo, dtype=np.int64).reshape(k, d)
                if linalg.rank(cand, p) != k:
                    continue
                if not modrep.is_invariant(hull_mod, cand):
                    continue
                meet = linalg.intersect_row_spaces(cand, e_img, p)
                assert meet.shape[0] > 0


class TestFreeness:
    def test_regular_module_is_free_of_rank_one(self):
        for gamma in (groups.cyclic_group(2), s3_semidirect()):
            p = 2 if gamma.order == 2 else 3
            cert = modrep.is_free(modrep.regular_module(gamma, p))
            assert cert.free and cert.rank == 1
            assert cert.generators is not None

    def test_trivial_module_is_not_free(self):
        cert = modrep.is_free(trivial_module(groups.cyclic_group(2), 2))
        assert not cert.free

    def test_dimension_obstruction(self):
        z2 = groups.cyclic_group(2)
        reg = modrep.regular_module(z2, 2)
        odd, _ = modrep.direct_sum([reg, trivial_module(z2, 2)])
        cert = modrep.is_free(odd)
        assert not cert.free

    def test_double_regular_is_free_of_rank_two(self):
        reg = modrep.regular_module(groups.cyclic_group(3), 3)
        double, _ = modrep.direct_sum([reg, reg])
        cert = modrep.is_free(double)
        assert cert.free and cert.rank == 2


class TestThreeWaySplit:
    def test_trivial_group_coordinate_split(self):
        triv = groups.trivial_group()
        amb = trivial_module(triv, 5, dim=2)
        e = modrep.spin(amb, np.array([[1, 0]], dtype=np.int64))
        n = modrep.Submodule(amb, np.zeros((0, 2), dtype=np.int64))
        split = modrep.three_way_split(amb, e, n)
        assert split.m_basis.shape[0] == 1
        assert split.n_basis.shape[0] == 0
        assert split.q_basis.shape[0] == 1

    def test_socle_of_regular_absorbs_everything(self):
        for p in (2, 3):
            reg = modrep.regular_module(groups.cyclic_group(p), p)
            e = modrep.socle(reg)
            n = modrep.Submodule(reg, np.zeros((0, p), dtype=np.int64))
            split = modrep.three_way_split(reg, e, n)
            assert split.m_basis.shape[0] == p
            assert split.q_rank == 0

    def test_free_complement_becomes_n(self):
        z2 = groups.cyclic_group(2)
        reg = modrep.regular_module(z2, 3)
        amb, offs = modrep.direct_sum([reg, reg])
        # trivial-isotypic line of the first summand
        e = modrep.spin(amb, np.array([[1, 1, 0, 0]], dtype=np.int64))
        n = modrep.spin(amb, np.array([[0, 0, 1, 0], [0, 0, 0, 1]], dtype=np.int64))
        split = modrep.three_way_split(amb, e, n)
        dims = (
            split.m_basis.shape[0],
            split.n_basis.shape[0],
            split.q_basis.shape[0],
        )
        assert sum(dims) == 4
        assert dims[1] == 2
        # pairwise zero intersections
        p = 3
        for a, b in itertools.combinations(
            (split.m_basis, split.n_basis, split.q_basis), 2
        ):
            if a.shape[0] and b.shape[0]:
                assert linalg.intersect_row_spaces(a, b, p).shape[0] == 0

    def test_rejects_socle_meeting_n(self):
        z2 = groups.cyclic_group(2)
        reg = modrep.regular_module(z2, 3)
        amb, _ = modrep.direct_sum([reg, reg])
        e = modrep.spin(amb, np.array([[1, 1, 0, 0]], dtype=np.int64))
        bad_n = modrep.spin(amb, np.array([[1, 1, 0, 0], [0, 0, 1, 1]], dtype=np.int64))
        with pytest.raises(modrep.SplitHypothesisError):
            modrep.three_way_split(amb, e, bad_n)

    def test_rejects_non_free_ambient(self):
        z2 = groups.cyclic_group(2)
        amb = trivial_module(z2, 2, dim=2)
        e = modrep.spin(amb, np.array([[1, 0]], dtype=np.int64))
        n = modrep.Submodule(amb, np.zeros((0, 2), dtype=np.int64))
        with pytest.raises(modrep.SplitHypothesisError):
            modrep.three_way_split(amb, e, n)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(2, 3), (2, 5), (3, 2), (4, 3), (6, 5)]), st.data())
def test_random_line_splits_cleanly(case, data):
    """Any line inside a double regular module splits with N = 0."""
    order, p = case
    phi = groups.cyclic_group(order)
    reg = modrep.regular_module(phi, p)
    amb, _ = modrep.direct_sum([reg, reg])
    vec = np.array(
        data.draw(
            st.lists(
                st.integers(0, p - 1), min_size=amb.dim, max_size=amb.dim
            ).filter(lambda v: any(v))
        ),
        dtype=np.int64,
    )
    e = modrep.spin(amb, vec.reshape(1, -1))
    n = modrep.Submodule(amb, np.zeros((0, amb.dim), dtype=np.int64))
    split = modrep.three_way_split(amb, e, n)
    total = split.m_basis.shape[0] + split.n_basis.shape[0] + split.q_basis.shape[0]
    assert total == amb.dim
    assert modrep.Submodule(amb, split.m_basis).contains_rows(e.basis)
