"""Shared fixtures: random instance factories and brute-force oracles.

The oracles here deliberately use plain nested loops and full products so
they stay independent of the library's contraction paths.
"""

import itertools

import numpy as np
import pytest

from moikit import (
    FactorizationData,
    Kernel,
    NormalOperator,
    SymbolTensor,
    WeightedSpectrum,
)


def distinct_points(rng, m, min_sep=0.2, complex_atoms=True):
    """m random points with pairwise separation at least min_sep."""
    while True:
        if complex_atoms:
            pts = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        else:
            pts = rng.standard_normal(m) + 0j
        ok = all(
            abs(pts[i] - pts[j]) > min_sep
            for i in range(m)
            for j in range(i + 1, m)
        )
        if ok:
            return pts


def random_spectrum(rng, m, unit_weights=False):
    atoms = distinct_points(rng, m)
    weights = np.ones(m) if unit_weights else rng.uniform(0.5, 2.0, size=m)
    return WeightedSpectrum(atoms, weights)


def random_symbol(rng, spectra):
    shape = tuple(len(s) for s in spectra)
    vals = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return SymbolTensor(tuple(spectra), vals)


def random_kernel(rng, dom, cod):
    vals = rng.standard_normal((len(dom), len(cod))) + 1j * rng.standard_normal(
        (len(dom), len(cod))
    )
    return Kernel(dom, cod, vals)


def random_kernel_chain(rng, spectra):
    return [
        random_kernel(rng, spectra[i], spectra[i + 1])
        for i in range(len(spectra) - 1)
    ]


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :].conj()


def random_hermitian(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (z + z.conj().T) / 2.0


def random_normal_operator(rng, multiplicities, unit_weights=False):
    """Normal operator with prescribed eigenspace dimensions, built directly
    from a random unitary so tests do not depend on the decomposition route."""
    m = len(multiplicities)
    d = int(sum(multiplicities))
    atoms = distinct_points(rng, m)
    u = random_unitary(rng, d)
    projs = []
    start = 0
    diag = np.zeros(d, dtype=complex)
    for i, k in enumerate(multiplicities):
        cols = u[:, start : start + k]
        projs.append(cols @ cols.conj().T)
        diag[start : start + k] = atoms[i]
        start += k
    matrix = u @ np.diag(diag) @ u.conj().T
    weights = (
        np.ones(m) if unit_weights else np.asarray(multiplicities, dtype=float)
    )
    spectrum = WeightedSpectrum(atoms, weights)
    return NormalOperator(matrix, spectrum, tuple(projs))


def random_contraction(rng, shape):
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    u, s, vh = np.linalg.svd(z, full_matrices=False)
    return u @ (np.minimum(s, 1.0)[:, None] * vh)


def random_factorization(rng, atom_counts, dims):
    n = len(atom_counts)
    first = rng.standard_normal((atom_counts[0], dims[0])) + 1j * rng.standard_normal(
        (atom_counts[0], dims[0])
    )
    mids = []
    for k in range(1, n - 1):
        mids.append(
            rng.standard_normal((atom_counts[k], dims[k - 1], dims[k]))
            + 1j * rng.standard_normal((atom_counts[k], dims[k - 1], dims[k]))
        )
    last = rng.standard_normal((atom_counts[-1], dims[-1])) + 1j * rng.standard_normal(
        (atom_counts[-1], dims[-1])
    )
    return FactorizationData(first, tuple(mids), last)


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def schur_oracle(phi, kernels):
    """Direct nested-loop evaluation of the multiplier with middle weights."""
    n = phi.order
    sizes = phi.shape
    out = np.zeros((sizes[0], sizes[-1]), dtype=complex)
    for idx in itertools.product(*[range(m) for m in sizes]):
        term = phi.values[idx]
        for i, k in enumerate(kernels):
            term = term * k.values[idx[i], idx[i + 1]]
        for i in range(1, n - 1):
            term = term * phi.spectra[i].weights[idx[i]]
        out[idx[0], idx[-1]] += term
    return Kernel(phi.spectra[0], phi.spectra[-1], out)


def moi_oracle(phi, ops, xs):
    """Full index-sum evaluation with complete projection products."""
    n = phi.order
    d = ops[0].dim
    out = np.zeros((d, d), dtype=complex)
    for idx in itertools.product(*[range(len(op.spectrum)) for op in ops]):
        term = ops[0].projections[idx[0]].copy()
        for k in range(n - 1):
            term = term @ xs[k] @ ops[k + 1].projections[idx[k + 1]]
        out += phi.values[idx] * term
    return out


def synth_oracle(fact, spectra):
    """Pointwise chained-product evaluation of the synthesized symbol."""
    counts = fact.atom_counts
    out = np.zeros(counts, dtype=complex)
    for idx in itertools.product(*[range(m) for m in counts]):
        vec = fact.a_first[idx[0]]
        for k, mid in enumerate(fact.a_mid):
            vec = vec @ mid[idx[k + 1]]
        out[idx] = vec @ fact.a_last[idx[-1]]
    return SymbolTensor(tuple(spectra), out)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
