"""Continuous multilinear Schur multipliers on weighted discrete spectra.

A symbol couples n spectra; applied to a chain of n-1 kernels it integrates
out the middle variables against their weights. On weighted Hilbert-Schmidt
classes the induced multilinear map has norm exactly max |symbol|, attained
by normalized point-mass kernels at the argmax atom tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ChainMismatch, DimensionMismatch, OrderMismatch
from .spectral import Kernel, WeightedSpectrum

__all__ = [
    "SymbolTensor",
    "constant_symbol",
    "elementary_symbol",
    "apply_multiplier",
    "multiplier_s2_norm",
    "argmax_atoms",
    "delta_witness_kernels",
]

_INDEX_LETTERS = "abcdefghijkl"


@dataclass(eq=False)
class SymbolTensor:
    """Order-n complex tensor over a product of weighted spectra."""

    spectra: tuple
    values: np.ndarray

    def __post_init__(self):
        spectra = tuple(self.spectra)
        if len(spectra) < 2:
            raise OrderMismatch("a symbol needs order >= 2")
        if len(spectra) > len(_INDEX_LETTERS):
            raise OrderMismatch(f"order > {len(_INDEX_LETTERS)} not supported")
        v = np.asarray(self.values, dtype=complex)
        want = tuple(len(s) for s in spectra)
        if v.shape != want:
            raise DimensionMismatch(
                f"symbol values shape {v.shape} does not match spectra sizes {want}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("symbol values must be finite")
        v = np.array(v)
        v.flags.writeable = False
        self.spectra = spectra
        self.values = v

    @property
    def order(self) -> int:
        return len(self.spectra)

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @cached_property
    def sup_norm(self) -> float:
        """max |values| over all atom tuples (all weights are positive)."""
        return float(np.max(np.abs(self.values)))

    def scaled(self, c: complex) -> "SymbolTensor":
        return SymbolTensor(self.spectra, c * self.values)


def constant_symbol(c, spectra) -> SymbolTensor:
    """Symbol identically equal to ``c``."""
    spectra = tuple(spectra)
    shape = tuple(len(s) for s in spectra)
    return SymbolTensor(spectra, np.full(shape, complex(c)))


def elementary_symbol(factors, spectra) -> SymbolTensor:
    """Tensor product of per-spectrum value vectors: f1 x f2 x ... x fn."""
    spectra = tuple(spectra)
    if len(factors) != len(spectra):
        raise OrderMismatch(
            f"{len(factors)} factors for {len(spectra)} spectra"
        )
    values = np.array(1.0, dtype=complex)
    for f in factors:
        f = np.asarray(f, dtype=complex).reshape(-1)
        values = np.multiply.outer(values, f)
    return SymbolTensor(spectra, values)


def _check_chain(phi: SymbolTensor, kernels) -> None:
    n = phi.order
    if len(kernels) != n - 1:
        raise OrderMismatch(
            f"order-{n} symbol needs {n - 1} kernels, got {len(kernels)}"
        )
    for i, k in enumerate(kernels):
        if not k.domain.matches(phi.spectra[i]):
            raise ChainMismatch(f"kernel {i} domain differs from spectrum {i}")
        if not k.codomain.matches(phi.spectra[i + 1]):
            raise ChainMismatch(
                f"kernel {i} codomain differs from spectrum {i + 1}"
            )


def apply_multiplier(phi: SymbolTensor, kernels) -> Kernel:
    """Apply the multilinear multiplier to a chain of kernels.

    Kernel i lives on (spectrum i, spectrum i+1). The output kernel on
    (spectrum 1, spectrum n) is

        out(t1, tn) = sum over middle atoms of
            phi(t1,..,tn) K1(t1,t2) ... K_{n-1}(t_{n-1},tn) w2(t2)...w_{n-1}(t_{n-1}),

    i.e. the middle variables are integrated against their weights. The
    contraction is a single einsum over the middle indices, so summation
    order is fixed and results are reproducible bit for bit.
    """
    _check_chain(phi, kernels)
    n = phi.order
    letters = _INDEX_LETTERS[:n]
    operands = [phi.values]
    subs = [letters]
    for i, k in enumerate(kernels):
        operands.append(k.values)
        subs.append(letters[i : i + 2])
    for i in range(1, n - 1):
        operands.append(phi.spectra[i].weights)
        subs.append(letters[i])
    out = np.einsum(
        ",".join(subs) + "->" + letters[0] + letters[-1], *operands
    )
    return Kernel(phi.spectra[0], phi.spectra[-1], out)


def multiplier_s2_norm(phi: SymbolTensor) -> float:
    """Exact norm of the multiplier on weighted Hilbert-Schmidt classes.

    Equals sup |phi| over the atoms; see :func:`delta_witness_kernels` for
    the kernel tuple attaining it.
    """
    return phi.sup_norm


def argmax_atoms(phi: SymbolTensor) -> tuple:
    """Index tuple of the first atom tuple attaining max |phi|."""
    flat = int(np.argmax(np.abs(phi.values)))
    return tuple(int(i) for i in np.unravel_index(flat, phi.shape))


def delta_witness_kernels(phi: SymbolTensor, index: tuple | None = None) -> list:
    """Unit-norm point-mass kernels concentrated at an atom tuple.

    Kernel i is supported at (index[i], index[i+1]) with value
    1/sqrt(w_i(t_i) w_{i+1}(t_{i+1})), so each has weighted L2 norm one and
    the multiplier applied to the tuple has L2 norm |phi(index)|.
    """
    if index is None:
        index = argmax_atoms(phi)
    kernels = []
    for i in range(phi.order - 1):
        dom, cod = phi.spectra[i], phi.spectra[i + 1]
        v = np.zeros((len(dom), len(cod)), dtype=complex)
        ti, tj = index[i], index[i + 1]
        v[ti, tj] = 1.0 / np.sqrt(dom.weights[ti] * cod.weights[tj])
        kernels.append(Kernel(dom, cod, v))
    return kernels
