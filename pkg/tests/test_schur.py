import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moikit import (
    ChainMismatch,
    Kernel,
    OrderMismatch,
    SymbolTensor,
    WeightedSpectrum,
    apply_multiplier,
    argmax_atoms,
    constant_symbol,
    delta_witness_kernels,
    elementary_symbol,
    multiplier_s2_norm,
)
from conftest import (
    random_kernel,
    random_kernel_chain,
    random_spectrum,
    random_symbol,
    schur_oracle,
)


def test_constant_symbol_composes_kernels(rng):
    spectra = [random_spectrum(rng, m, unit_weights=True) for m in (2, 3, 2)]
    phi = constant_symbol(1.0, spectra)
    k1 = random_kernel(rng, spectra[0], spectra[1])
    k2 = random_kernel(rng, spectra[1], spectra[2])
    out = apply_multiplier(phi, [k1, k2])
    np.testing.assert_allclose(out.values, k1.values @ k2.values, atol=1e-14)


def test_elementary_bilinear_is_weighted_schur_product(rng):
    spectra = [random_spectrum(rng, 3), random_spectrum(rng, 4)]
    f1 = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    f2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    phi = elementary_symbol([f1, f2], spectra)
    k = random_kernel(rng, spectra[0], spectra[1])
    out = apply_multiplier(phi, [k])
    expected = f1[:, None] * k.values * f2[None, :]
    np.testing.assert_allclose(out.values, expected, atol=1e-14)


def test_matches_summation_oracle_with_weights(rng):
    spectra = (
        WeightedSpectrum([0.0, 1.0], [1.0, 2.0]),
        WeightedSpectrum([0.0, 1.0, 2.0], [1.0, 1.0, 1.0]),
        WeightedSpectrum([0.0, 1.0], [3.0, 1.0]),
    )
    phi = random_symbol(rng, spectra)
    kernels = random_kernel_chain(rng, spectra)
    out = apply_multiplier(phi, kernels)
    expected = schur_oracle(phi, kernels)
    err = np.max(np.abs(out.values - expected.values))
    assert err <= 1e-13 * max(1.0, np.max(np.abs(expected.values)))


def test_oracle_agreement_various_orders(rng):
    for sizes in [(2, 2), (3, 2, 4), (2, 3, 2, 2)]:
        spectra = [random_spectrum(rng, m) for m in sizes]
        phi = random_symbol(rng, spectra)
        kernels = random_kernel_chain(rng, spectra)
        out = apply_multiplier(phi, kernels)
        expected = schur_oracle(phi, kernels)
        np.testing.assert_allclose(out.values, expected.values, atol=1e-12)


def test_contraction_bound(rng):
    for _ in range(10):
        spectra = [random_spectrum(rng, m) for m in (3, 2, 3)]
        phi = random_symbol(rng, spectra)
        kernels = random_kernel_chain(rng, spectra)
        out = apply_multiplier(phi, kernels)
        bound = phi.sup_norm * np.prod([k.l2_norm() for k in kernels])
        assert out.l2_norm() <= bound * (1 + 1e-12)


def test_linearity_in_symbol(rng):
    spectra = [random_spectrum(rng, m) for m in (3, 3)]
    phi = random_symbol(rng, spectra)
    psi = random_symbol(rng, spectra)
    kernels = random_kernel_chain(rng, spectra)
    a, b = 1.3 - 0.2j, -0.7 + 2.1j
    combo = SymbolTensor(phi.spectra, a * phi.values + b * psi.values)
    lhs = apply_multiplier(combo, kernels).values
    rhs = (
        a * apply_multiplier(phi, kernels).values
        + b * apply_multiplier(psi, kernels).values
    )
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_multilinearity_in_each_kernel_slot(rng):
    spectra = [random_spectrum(rng, m) for m in (2, 3, 2)]
    phi = random_symbol(rng, spectra)
    base = random_kernel_chain(rng, spectra)
    for slot in range(2):
        other = random_kernel(
            rng, spectra[slot], spectra[slot + 1]
        )
        a, b = 0.4 + 1.1j, -2.0 + 0.3j
        mixed = list(base)
        mixed[slot] = Kernel(
            spectra[slot],
            spectra[slot + 1],
            a * base[slot].values + b * other.values,
        )
        alt = list(base)
        alt[slot] = other
        lhs = apply_multiplier(phi, mixed).values
        rhs = (
            a * apply_multiplier(phi, base).values
            + b * apply_multiplier(phi, alt).values
        )
        np.testing.assert_allclose(lhs, rhs, atol=1e-13)


@settings(max_examples=20, deadline=None, derandomize=True)
@given(st.integers(0, 2**31 - 1))
def test_linearity_property(seed):
    rng = np.random.default_rng(seed)
    sizes = tuple(int(rng.integers(1, 4)) for _ in range(int(rng.integers(2, 5))))
    spectra = [random_spectrum(rng, m) for m in sizes]
    phi = random_symbol(rng, spectra)
    psi = random_symbol(rng, spectra)
    kernels = random_kernel_chain(rng, spectra)
    a = complex(rng.standard_normal(), rng.standard_normal())
    combo = SymbolTensor(phi.spectra, a * phi.values + psi.values)
    lhs = apply_multiplier(combo, kernels).values
    rhs = a * apply_multiplier(phi, kernels).values + apply_multiplier(
        psi, kernels
    ).values
    scale = max(1.0, np.max(np.abs(rhs)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


class TestMultiplierNorm:
    def test_zero_symbol(self, rng):
        spectra = [random_spectrum(rng, 3) for _ in range(2)]
        assert multiplier_s2_norm(constant_symbol(0.0, spectra)) == 0.0

    def test_constant_symbol(self, rng):
        spectra = [random_spectrum(rng, m) for m in (2, 3)]
        assert multiplier_s2_norm(constant_symbol(2.5 - 1j, spectra)) == (
            pytest.approx(abs(2.5 - 1j))
        )

    def test_witness_attains_norm(self, rng):
        for sizes in [(3, 3), (2, 3, 4), (2, 2, 2, 2)]:
            spectra = [random_spectrum(rng, m) for m in sizes]
            phi = random_symbol(rng, spectra)
            norm = multiplier_s2_norm(phi)
            assert norm == np.max(np.abs(phi.values))
            witness = delta_witness_kernels(phi)
            for k in witness:
                assert k.l2_norm() == pytest.approx(1.0, abs=1e-13)
            attained = apply_multiplier(phi, witness).l2_norm()
            assert abs(attained - norm) <= 1e-12 * max(1.0, norm)

    def test_argmax_atoms_indexes_the_max(self, rng):
        spectra = [random_spectrum(rng, m) for m in (3, 2, 3)]
        phi = random_symbol(rng, spectra)
        idx = argmax_atoms(phi)
        mags = np.abs(phi.values)
        assert mags[idx] == np.max(mags)


class TestValidation:
    def test_order_mismatch(self, rng):
        spectra = [random_spectrum(rng, 2) for _ in range(3)]
        phi = random_symbol(rng, spectra)
        kernels = random_kernel_chain(rng, spectra)
        with pytest.raises(OrderMismatch):
            apply_multiplier(phi, kernels[:1])

    def test_chain_mismatch(self, rng):
        spectra = [random_spectrum(rng, 2) for _ in range(3)]
        phi = random_symbol(rng, spectra)
        kernels = random_kernel_chain(rng, spectra)
        kernels[1] = random_kernel(rng, spectra[0], spectra[2])
        with pytest.raises(ChainMismatch):
            apply_multiplier(phi, kernels)

    def test_symbol_shape_check(self, rng):
        spectra = [random_spectrum(rng, 2), random_spectrum(rng, 3)]
        from moikit import DimensionMismatch

        with pytest.raises(DimensionMismatch):
            SymbolTensor(tuple(spectra), np.zeros((2, 2)))
