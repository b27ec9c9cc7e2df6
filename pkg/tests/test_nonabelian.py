"""Finite groups, representations, intertwiners, cancellation, dense complement."""

import itertools

import numpy as np
import pytest

import wandergen as wg
from wandergen import nonabelian as na
from wandergen import _linalg
from conftest import (
    compress,
    haar_unitary,
    random_commutant_unitary,
    random_invariant_splitting,
    random_orthonormal_family,
    random_wandering_subfamily,
)


def s3_permutation_matrices():
    """Permutation matrices in the same element order as symmetric_3()."""
    ordered = sorted(itertools.permutations(range(3)))
    mats = np.zeros((6, 3, 3), dtype=np.complex128)
    for g, p in enumerate(ordered):
        for i in range(3):
            mats[g, p[i], i] = 1.0
    return ordered, mats


def s3_irreps():
    group = na.symmetric_3()
    ordered, perm = s3_permutation_matrices()

    def parity(p):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    sign = -sign
        return sign

    triv = na.Representation(group, np.ones((6, 1, 1), dtype=np.complex128))
    sign = na.Representation(
        group, np.array([[[parity(p)]] for p in ordered], dtype=np.complex128)
    )
    # standard rep: permutation action restricted to the sum-zero plane
    B = np.linalg.svd(np.eye(3) - np.ones((3, 3)) / 3)[0][:, :2]
    std = na.Representation(group, B.conj().T @ perm @ B)
    return group, triv, sign, std


class TestFiniteGroup:
    def test_builtin_orders(self):
        assert na.symmetric_3().order == 6
        assert na.dihedral_4().order == 8
        assert na.quaternion_8().order == 8
        assert na.cyclic_group(5).order == 5
        assert na.direct_product(na.cyclic_group(2), na.cyclic_group(3)).order == 6

    def test_s3_classes(self):
        classes = na.symmetric_3().conjugacy_classes()
        assert sorted(len(c) for c in classes) == [1, 2, 3]
        assert classes[0] == (na.symmetric_3().identity,)

    def test_q8_classes(self):
        # 1, -1, {i,-i}, {j,-j}, {k,-k}
        sizes = sorted(len(c) for c in na.quaternion_8().conjugacy_classes())
        assert sizes == [1, 1, 2, 2, 2]

    def test_bad_table_rejected(self):
        with pytest.raises(ValueError):
            na.FiniteGroup([[0, 1], [0, 1]])  # rows not permutations
        with pytest.raises(ValueError):
            # Latin square whose only row-identity is not a column identity
            na.FiniteGroup([[0, 1, 2], [2, 0, 1], [1, 2, 0]])

    def test_non_associative_rejected(self):
        # a Latin square with two-sided identity that is not a group law
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        with pytest.raises(ValueError):
            na.FiniteGroup(table)

    def test_generators_generate(self):
        for group in (na.symmetric_3(), na.dihedral_4(), na.quaternion_8()):
            gens = group.generators()
            assert len(group._closure(gens)) == group.order

    def test_from_abelian_matches_indexing(self):
        spec = wg.FiniteAbelian((2, 3))
        group = na.from_abelian(spec)
        els = spec.elements()
        for a in range(6):
            for b in range(6):
                assert group.compose(a, b) == spec.index_of(spec.compose(els[a], els[b]))


class TestRegularRepresentation:
    def test_trivial_group_multiple(self):
        group = na.cyclic_group(1)
        rep = na.regular_representation(group, 3)
        np.testing.assert_allclose(rep.matrices[0], np.eye(3), atol=1e-15)

    def test_s3_character(self):
        chi = na.character(na.regular_representation(na.symmetric_3(), 1))
        np.testing.assert_allclose(chi.values, [6, 0, 0], atol=1e-12)

    def test_z2_double_character(self):
        chi = na.character(na.regular_representation(na.cyclic_group(2), 2))
        np.testing.assert_allclose(chi.values, [4, 0], atol=1e-12)


class TestCharacter:
    def test_trivial_all_ones(self):
        group, triv, _, _ = s3_irreps()
        np.testing.assert_allclose(na.character(triv).values, [1, 1, 1], atol=1e-15)

    def test_standard_rep_values(self):
        group, _, _, std = s3_irreps()
        # class order: identity, transpositions, 3-cycles
        np.testing.assert_allclose(na.character(std).values, [2, 0, -1], atol=1e-12)

    def test_inner_products_orthonormal(self):
        group, triv, sign, std = s3_irreps()
        for a in (triv, sign, std):
            assert na.character_inner(na.character(a), na.character(a)) == pytest.approx(1.0, abs=1e-12)
        assert na.character_inner(na.character(triv), na.character(sign)) == pytest.approx(0.0, abs=1e-12)
        assert na.character_inner(na.character(std), na.character(sign)) == pytest.approx(0.0, abs=1e-12)


class TestIntertwinerBasis:
    def test_irreducible_self_schur(self):
        _, _, _, std = s3_irreps()
        basis = na.intertwiner_basis(std, std)
        assert len(basis) == 1
        # the single intertwiner is a scalar multiple of the identity
        T = basis[0].matrix
        off = T - np.trace(T) / 2 * np.eye(2)
        assert np.max(np.abs(off)) <= 1e-9

    def test_distinct_irreducibles_empty(self):
        _, triv, sign, _ = s3_irreps()
        assert na.intertwiner_basis(triv, sign) == []

    def test_regular_self_dimension(self):
        lam = na.regular_representation(na.symmetric_3(), 1)
        basis = na.intertwiner_basis(lam, lam)
        assert len(basis) == 6  # 1^2 + 1^2 + 2^2
        assert max(b.residual for b in basis) <= 1e-9

    def test_q8_regular_self_dimension(self):
        lam = na.regular_representation(na.quaternion_8(), 1)
        assert len(na.intertwiner_basis(lam, lam)) == 8  # 4 * 1^2 + 2^2


class TestAreEquivalent:
    def test_same_object_identity(self):
        lam = na.regular_representation(na.symmetric_3(), 1)
        wit = na.are_equivalent(lam, lam)
        np.testing.assert_allclose(wit.matrix, np.eye(6), atol=1e-15)
        assert wit.residual == 0.0

    def test_block_swap(self):
        _, triv, sign, std = s3_irreps()
        a = na.direct_sum(std, triv)
        b = na.direct_sum(triv, std)
        wit = na.are_equivalent(a, b)
        assert wit is not None and wit.unitary
        assert wit.residual <= 1e-9
        eye = np.eye(3)
        assert np.max(np.abs(wit.matrix.conj().T @ wit.matrix - eye)) <= 1e-9
        # explicit block swap is itself a witness (oracle)
        swap = np.zeros((3, 3), dtype=np.complex128)
        swap[0, 2] = 1.0
        swap[1, 0] = 1.0
        swap[2, 1] = 1.0
        assert np.max(np.abs(swap @ a.matrices - b.matrices @ swap)) <= 1e-12

    def test_distinct_characters_none(self):
        _, triv, sign, _ = s3_irreps()
        assert na.are_equivalent(triv, sign) is None

    def test_zero_dimensional(self):
        group = na.symmetric_3()
        z = na.Representation(group, np.zeros((6, 0, 0), dtype=np.complex128))
        wit = na.are_equivalent(z, z)
        assert wit is not None and wit.matrix.shape == (0, 0)

    def test_witness_composition_transitive(self):
        rng = np.random.default_rng(80)
        for group in (na.symmetric_3(), na.dihedral_4(), na.quaternion_8()):
            lam = na.regular_representation(group, 1)
            d = lam.dim
            Q1, Q2 = haar_unitary(rng, d), haar_unitary(rng, d)
            rho = compress(lam, Q1)
            sigma = compress(lam, Q2)
            w1 = na.are_equivalent(lam, rho)
            w2 = na.are_equivalent(rho, sigma)
            w21 = w2.matrix @ w1.matrix
            assert np.max(np.abs(w21 @ lam.matrices - sigma.matrices @ w21)) <= 1e-8
            # symmetry at the witness level: the adjoint reverses direction
            back = w1.matrix.conj().T
            assert np.max(np.abs(back @ rho.matrices - lam.matrices @ back)) <= 1e-8

    def test_polar_factor_of_invertible_intertwiner(self):
        rng = np.random.default_rng(81)
        lam = na.regular_representation(na.dihedral_4(), 1)
        Q = haar_unitary(rng, 8)
        sigma = compress(lam, Q)
        # generic invertible (non-unitary) intertwiner lam -> sigma
        inv = [lam.group.inverse(g) for g in lam.group.elements()]
        R = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        T = np.mean(sigma.matrices @ R @ lam.matrices[inv], axis=0)
        assert np.max(np.abs(T @ lam.matrices - sigma.matrices @ T)) <= 1e-12
        W, s, Vh = np.linalg.svd(T)
        assert s[-1] > 1e-6  # invertible draw
        U = W @ Vh
        assert np.max(np.abs(U @ lam.matrices - sigma.matrices @ U)) <= 1e-9


class TestCancel:
    def test_zero_dimensional_sigma1(self):
        rng = np.random.default_rng(82)
        group = na.symmetric_3()
        lam = na.regular_representation(group, 1)
        z = na.Representation(group, np.zeros((6, 0, 0), dtype=np.complex128))
        Q1, Q2 = haar_unitary(rng, 6), haar_unitary(rng, 6)
        wit = na.cancel(lam, z, compress(lam, Q1), compress(lam, Q2))
        assert wit.residual <= 1e-9

    def test_s3_standard_complements(self):
        rng = np.random.default_rng(83)
        group = na.symmetric_3()
        lam = na.regular_representation(group, 1)
        # invariant 2-dim subspace carrying the standard character from a
        # commutant Hermitian eigenspace
        for attempt in range(20):
            BS, BP = random_invariant_splitting(rng, lam)
            if BS.shape[1] == 2:
                sigma1 = compress(lam, BS)
                if na.character(sigma1).agrees(
                    na.ClassFunction(group, (2 + 0j, 0j, -1 + 0j)), 1e-9
                ):
                    break
        else:
            pytest.fail("no standard-character eigenspace found")
        np.testing.assert_allclose(na.character(sigma1).values, [2, 0, -1], atol=1e-9)
        sigma2 = compress(lam, BP @ haar_unitary(rng, 4))
        sigma3 = compress(lam, BP @ haar_unitary(rng, 4))
        np.testing.assert_allclose(na.character(sigma2).values, [4, 0, 1], atol=1e-9)
        wit = na.cancel(lam, sigma1, sigma2, sigma3)
        assert wit.residual <= 1e-9
        assert na.character(sigma2).agrees(na.character(sigma3), 1e-9)

    def test_mismatched_characters_rejected(self):
        rng = np.random.default_rng(84)
        group, triv, sign, std = s3_irreps()
        lam = na.regular_representation(group, 1)
        BS, BP = random_invariant_splitting(rng, lam)
        sigma1 = compress(lam, BS)
        sigma2 = compress(lam, BP)
        with pytest.raises(wg.HypothesisFailure):
            na.cancel(lam, sigma1, sigma2, na.direct_sum(triv, sign))

    def test_rho_must_be_regular_multiple(self):
        _, triv, sign, std = s3_irreps()
        rho = na.direct_sum(triv, std)
        with pytest.raises(wg.HypothesisFailure):
            na.cancel(rho, triv, std, std)


class TestWanderingComplementGeneral:
    def _standard_columns(self, group, multiplicity, count):
        dim = group.order * multiplicity
        cols = np.zeros((dim, count), dtype=np.complex128)
        for b in range(count):
            cols[group.identity * multiplicity + b, b] = 1.0
        return cols

    def test_x_equals_y_empty(self):
        group = na.symmetric_3()
        Y = self._standard_columns(group, 2, 2)
        out = na.wandering_complement_general(Y, Y, group, 2)
        assert out.shape == (12, 0)

    def test_s3_sizes_and_union_gram(self):
        rng = np.random.default_rng(85)
        group = na.symmetric_3()
        lam = na.regular_representation(group, 2)
        U1 = random_commutant_unitary(rng, lam)
        U2 = random_commutant_unitary(rng, lam)
        Y = U1 @ self._standard_columns(group, 2, 2)
        X = U2 @ self._standard_columns(group, 2, 1)
        Xp = na.wandering_complement_general(X, Y, group, 2)
        assert Xp.shape[1] == 1
        union = na._orbit_matrix(lam, np.hstack([X, Xp]))
        assert np.max(np.abs(union.conj().T @ union - np.eye(12))) <= 1e-9

    def test_abelian_matches_wandering_complement(self):
        rng = np.random.default_rng(86)
        spec = wg.FiniteAbelian((4,))
        sp = wg.SystemSpace(spec, 2)
        Y = random_orthonormal_family(rng, sp, 2)
        X = random_wandering_subfamily(rng, Y, 1)
        Xp_fam = wg.complement_wandering(X, Y)
        group = na.from_abelian(spec)
        lam = na.regular_representation(group, 2)
        to_cols = lambda fam: np.stack([v.dense().reshape(-1) for v in fam.members], axis=1)
        Xp_cols = na.wandering_complement_general(to_cols(X), to_cols(Y), group, 2)
        orbit_a = na._orbit_matrix(lam, to_cols(Xp_fam))
        orbit_b = na._orbit_matrix(lam, Xp_cols)
        assert _linalg.max_principal_angle(orbit_a, orbit_b) <= 1e-8

    def test_bad_inputs_rejected(self):
        group = na.symmetric_3()
        Y = self._standard_columns(group, 2, 2)
        with pytest.raises(wg.HypothesisFailure):
            na.wandering_complement_general(0.5 * Y[:, :1], Y, group, 2)
        with pytest.raises(wg.HypothesisFailure):
            na.wandering_complement_general(Y[:, :1], 0.5 * Y, group, 2)
