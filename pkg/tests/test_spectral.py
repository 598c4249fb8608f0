import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moikit import (
    DimensionMismatch,
    Kernel,
    NonSquare,
    NotNormal,
    WeightedSpectrum,
    diagonal_operator,
    hs_norm,
    kernel_to_operator,
    norms_and_pairing,
    op_norm,
    operator_to_kernel,
    spectral_decompose,
    trace_pairing,
)
from conftest import random_spectrum, random_unitary


class TestSpectralDecompose:
    def test_identity(self):
        op = spectral_decompose(np.eye(3))
        assert len(op.spectrum) == 1
        assert op.spectrum.atoms[0] == pytest.approx(1.0)
        assert op.spectrum.weights[0] == 3.0
        np.testing.assert_allclose(op.projections[0], np.eye(3), atol=1e-14)

    def test_diagonal_with_multiplicity(self):
        op = spectral_decompose(np.diag([1.0, 2.0, 2.0]))
        np.testing.assert_allclose(op.spectrum.atoms, [1.0, 2.0], atol=1e-14)
        np.testing.assert_allclose(op.spectrum.weights, [1.0, 2.0])
        np.testing.assert_allclose(op.projections[0], np.diag([1.0, 0, 0]), atol=1e-13)
        np.testing.assert_allclose(op.projections[1], np.diag([0, 1.0, 1.0]), atol=1e-13)

    def test_random_hermitian_reconstruction(self, rng):
        for _ in range(10):
            z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            h = (z + z.conj().T) / 2
            op = spectral_decompose(h)
            recon = sum(a * p for a, p in zip(op.spectrum.atoms, op.projections))
            assert np.linalg.norm(recon - h) <= 1e-12 * np.linalg.norm(h)

    def test_invariants_on_every_decomposition(self, rng):
        for _ in range(5):
            u = random_unitary(rng, 5)
            a = u @ np.diag(rng.standard_normal(5) + 1j * rng.standard_normal(5)) @ u.conj().T
            op = spectral_decompose(a)
            op.validate(tol=1e-12)

    def test_clustering_merges_split_eigenvalues(self):
        a = np.diag([1.0, 1.0 + 1e-12, 5.0])
        op = spectral_decompose(a, cluster_tol=1e-9)
        assert len(op.spectrum) == 2
        assert op.spectrum.weights[0] == 2.0

    def test_rejects_non_square(self):
        with pytest.raises(NonSquare):
            spectral_decompose(np.zeros((2, 3)))

    def test_rejects_non_normal(self):
        with pytest.raises(NotNormal):
            spectral_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_with_weights_override(self):
        op = spectral_decompose(np.diag([1.0, 2.0, 2.0]))
        op2 = op.with_weights([0.3, 0.7])
        np.testing.assert_allclose(op2.spectrum.weights, [0.3, 0.7])
        with pytest.raises(ValueError):
            op.with_weights([0.0, 1.0])


class TestWeightedSpectrum:
    def test_rejects_zero_weight(self):
        with pytest.raises(ValueError):
            WeightedSpectrum([1.0, 2.0], [1.0, 0.0])

    def test_rejects_duplicate_atoms(self):
        with pytest.raises(ValueError):
            WeightedSpectrum([1.0, 1.0], [1.0, 1.0])

    def test_rejects_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            WeightedSpectrum([1.0, 2.0], [1.0])


class TestKernelOperator:
    def test_zero_kernel(self, rng):
        dom = random_spectrum(rng, 3)
        cod = random_spectrum(rng, 2)
        k = Kernel(dom, cod, np.zeros((3, 2)))
        np.testing.assert_array_equal(kernel_to_operator(k), np.zeros((2, 3)))

    def test_point_mass_unit_weights_gives_elementary_matrix(self):
        dom = WeightedSpectrum([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
        cod = WeightedSpectrum([5.0, 6.0], [1.0, 1.0])
        v = np.zeros((3, 2))
        v[1, 0] = 1.0  # delta at (a=atom 1 of domain, b=atom 0 of codomain)
        x = kernel_to_operator(Kernel(dom, cod, v))
        expected = np.zeros((2, 3))
        expected[0, 1] = 1.0
        np.testing.assert_allclose(x, expected)

    def test_isometry_with_weights(self, rng):
        dom = WeightedSpectrum([0.0, 1.0], [2.0, 1.0])
        cod = WeightedSpectrum([0.0, 1.0], [1.0, 3.0])
        v = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        k = Kernel(dom, cod, v)
        assert hs_norm(kernel_to_operator(k)) == pytest.approx(
            k.l2_norm(), abs=1e-13
        )

    def test_zero_operator_gives_zero_kernel(self, rng):
        dom = random_spectrum(rng, 3)
        cod = random_spectrum(rng, 2)
        k = operator_to_kernel(np.zeros((2, 3)), dom, cod)
        np.testing.assert_array_equal(k.values, np.zeros((3, 2)))

    def test_round_trip_both_ways(self, rng):
        dom = random_spectrum(rng, 3)
        cod = random_spectrum(rng, 2)
        v = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        k = Kernel(dom, cod, v)
        back = operator_to_kernel(kernel_to_operator(k), dom, cod)
        np.testing.assert_allclose(back.values, k.values, rtol=1e-14, atol=1e-14)
        x = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        again = kernel_to_operator(operator_to_kernel(x, dom, cod))
        np.testing.assert_allclose(again, x, rtol=1e-14, atol=1e-14)

    def test_operator_to_kernel_dim_check(self, rng):
        dom = random_spectrum(rng, 3)
        cod = random_spectrum(rng, 2)
        with pytest.raises(DimensionMismatch):
            operator_to_kernel(np.zeros((3, 2)), dom, cod)

    @settings(max_examples=20, deadline=None, derandomize=True)
    @given(st.integers(0, 2**31 - 1))
    def test_isometry_property(self, seed):
        rng = np.random.default_rng(seed)
        m1 = int(rng.integers(1, 5))
        m2 = int(rng.integers(1, 5))
        dom = random_spectrum(rng, m1)
        cod = random_spectrum(rng, m2)
        v = rng.standard_normal((m1, m2)) + 1j * rng.standard_normal((m1, m2))
        k = Kernel(dom, cod, v)
        assert abs(hs_norm(kernel_to_operator(k)) - k.l2_norm()) <= 1e-13 * max(
            1.0, k.l2_norm()
        )


class TestNormsAndPairing:
    def test_identity_pair(self):
        o, h, p = norms_and_pairing(np.eye(2), np.eye(2))
        assert o == pytest.approx(1.0)
        assert h == pytest.approx(np.sqrt(2.0))
        assert p == pytest.approx(2.0)

    def test_rank_one_operator_norm(self, rng):
        u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        m = np.outer(u, v.conj())
        assert op_norm(m) == pytest.approx(
            np.linalg.norm(u) * np.linalg.norm(v), rel=1e-12
        )

    def test_cauchy_schwarz_for_pairing(self, rng):
        for _ in range(10):
            s = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            t = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            assert abs(trace_pairing(s, t)) <= hs_norm(s) * hs_norm(t) + 1e-12

    def test_pairing_dim_check(self):
        with pytest.raises(DimensionMismatch):
            trace_pairing(np.zeros((2, 3)), np.zeros((2, 3)))


def test_diagonal_operator_is_canonical():
    op = diagonal_operator([1.0, 2.0, 3.0])
    op.validate(tol=1e-14)
    assert op.multiplicity_one()
    np.testing.assert_array_equal(op.matrix, np.diag([1.0, 2.0, 3.0]))
