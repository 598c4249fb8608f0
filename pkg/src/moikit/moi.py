"""Multiple operator integrals for normal matrices.

Evaluates the multilinear map that inserts matrices between spectral
projections of normal operators, weighting each projection tuple by a symbol
value. Also verifies the structural identities the construction satisfies:
the bimodule property with respect to the end operators' commutants, the
eigenbasis connection to the multilinear Schur multiplier, and stability
under symbol truncation.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimensionMismatch,
    MultiplicityNotOne,
    NotInCommutant,
    OrderMismatch,
    SpectrumMismatch,
)
from .schur import SymbolTensor, apply_multiplier
from .spectral import Kernel, NormalOperator, hs_norm

__all__ = [
    "functional_calculus",
    "moi_apply",
    "bimodule_check",
    "connection_check",
    "truncation_stability",
    "divided_difference_symbol",
]


def functional_calculus(f, op: NormalOperator) -> np.ndarray:
    """sum f(atom_i) P_i for f given on the atoms (array) or as a callable."""
    if callable(f):
        vals = np.asarray([f(a) for a in op.spectrum.atoms], dtype=complex)
    else:
        vals = np.asarray(f, dtype=complex).reshape(-1)
    if vals.size != len(op.spectrum):
        raise SpectrumMismatch(
            f"{vals.size} symbol values for {len(op.spectrum)} atoms"
        )
    proj = np.stack(op.projections)
    return np.einsum("i,irc->rc", vals, proj)


def _check_moi_args(phi: SymbolTensor, ops, xs) -> int:
    n = phi.order
    if len(ops) != n:
        raise OrderMismatch(f"order-{n} symbol needs {n} operators, got {len(ops)}")
    if len(xs) != n - 1:
        raise OrderMismatch(
            f"order-{n} symbol needs {n - 1} middle matrices, got {len(xs)}"
        )
    d = ops[0].dim
    for op in ops:
        if op.dim != d:
            raise DimensionMismatch("operators act on different spaces")
    for i, op in enumerate(ops):
        if not phi.spectra[i].matches(op.spectrum):
            raise SpectrumMismatch(
                f"symbol spectrum {i} differs from operator {i} spectrum "
                "(atoms and weights must match exactly, order included)"
            )
    for x in xs:
        x = np.asarray(x)
        if x.shape != (d, d):
            raise DimensionMismatch(
                f"middle matrix shape {x.shape}, expected ({d}, {d})"
            )
    return d


def moi_apply(phi: SymbolTensor, ops, xs) -> np.ndarray:
    """Evaluate the operator integral of ``phi`` on middle matrices ``xs``.

    Returns sum over atom tuples (i1,..,in) of
    phi[i1,..,in] P^1_{i1} X1 P^2_{i2} ... X_{n-1} P^n_{in}.

    The left partial products P^1_{i1} X1 ... P^k_{ik} X_k are built once per
    index prefix and shared across the inner loops; the innermost sum is a
    functional-calculus contraction against the last operator's projections.
    Loop order is ascending in every index, so results are deterministic.

    For an elementary-tensor symbol this equals
    f1(A1) X1 f2(A2) ... X_{n-1} fn(An) exactly, and in general
    ||result||_HS <= sup|phi| * prod ||X_i||_HS.
    """
    d = _check_moi_args(phi, ops, xs)
    n = phi.order
    xs = [np.asarray(x, dtype=complex) for x in xs]
    proj_stacks = [np.stack(op.projections) for op in ops]
    vals = phi.values
    out = np.zeros((d, d), dtype=complex)

    def _accumulate(slot: int, prefix: np.ndarray, index: tuple):
        if slot == n - 1:
            tail = np.einsum("i,irc->rc", vals[index], proj_stacks[-1])
            nonlocal out
            out = out + prefix @ tail
            return
        for i in range(proj_stacks[slot].shape[0]):
            _accumulate(
                slot + 1,
                prefix @ proj_stacks[slot][i] @ xs[slot],
                index + (i,),
            )

    _accumulate(0, np.eye(d, dtype=complex), ())
    return out


def _commutant_defect(m: np.ndarray, op: NormalOperator) -> float:
    return max(
        float(np.linalg.norm(m @ p - p @ m)) for p in op.projections
    )


def bimodule_check(
    phi: SymbolTensor, ops, xs, d_left, c_right, tol: float = 1e-12
) -> bool:
    """Check the module identity against the end operators' commutants.

    For d commuting with every spectral projection of the first operator and
    c with those of the last,

        Gamma(phi)(d X1, ..., X_{n-1} c) == d Gamma(phi)(X1, ..., X_{n-1}) c

    must hold. Returns whether it does to ``tol`` (relative to the
    right-hand side's scale). Raises NotInCommutant when the commutation
    precondition itself fails, measured as max_i ||[m, P_i]||_F <= tol.
    """
    d_left = np.asarray(d_left, dtype=complex)
    c_right = np.asarray(c_right, dtype=complex)
    defect_d = _commutant_defect(d_left, ops[0])
    if defect_d > tol:
        raise NotInCommutant(
            f"left factor does not commute with the first operator's "
            f"projections (defect {defect_d:.3e})"
        )
    defect_c = _commutant_defect(c_right, ops[-1])
    if defect_c > tol:
        raise NotInCommutant(
            f"right factor does not commute with the last operator's "
            f"projections (defect {defect_c:.3e})"
        )
    xs_mod = [np.asarray(x, dtype=complex) for x in xs]
    xs_mod[0] = d_left @ xs_mod[0]
    xs_mod[-1] = xs_mod[-1] @ c_right
    lhs = moi_apply(phi, ops, xs_mod)
    rhs = d_left @ moi_apply(phi, ops, xs) @ c_right
    return float(np.linalg.norm(lhs - rhs)) <= tol * max(
        1.0, float(np.linalg.norm(rhs))
    )


def connection_check(
    phi: SymbolTensor, ops, kernels, tol: float = 1e-12
) -> bool:
    """Check that the operator integral restricted to eigenbases equals the
    multiplier (multiplicity-one spectra only).

    Each operator must have rank-one spectral projections, so the map
    sending the weighted indicator basis of L2(spectrum) to the unit
    eigenvectors is a unitary rho_i onto the whole space. Kernels are moved
    to operators between eigenspaces (with the sqrt-weight normalization of
    the weighted bases), fed through the operator integral, and mapped back;
    the result must equal applying the multiplier directly, to ``tol``.
    """
    n = phi.order
    if len(kernels) != n - 1:
        raise OrderMismatch(
            f"order-{n} symbol needs {n - 1} kernels, got {len(kernels)}"
        )
    for i, op in enumerate(ops):
        if not op.multiplicity_one():
            raise MultiplicityNotOne(
                f"operator {i} has a projection of rank > 1; only the cyclic "
                "(multiplicity-one) case is supported"
            )
    vmats = [op.eigenvector_matrix() for op in ops]
    lifted = []
    for i, k in enumerate(kernels):
        sd = np.sqrt(k.domain.weights)
        sc = np.sqrt(k.codomain.weights)
        m = sd[:, None] * k.values * sc[None, :]  # maps L2(spectrum i+1) -> L2(spectrum i)
        lifted.append(vmats[i] @ m @ vmats[i + 1].conj().T)
    gamma = moi_apply(phi, ops, lifted)
    back = vmats[0].conj().T @ gamma @ vmats[-1]
    direct = apply_multiplier(phi, kernels)
    sd = np.sqrt(direct.domain.weights)
    sc = np.sqrt(direct.codomain.weights)
    direct_m = sd[:, None] * direct.values * sc[None, :]
    return float(np.linalg.norm(back - direct_m)) <= tol * max(
        1.0, float(np.linalg.norm(direct_m))
    )


def truncation_stability(phi_seq, phi: SymbolTensor, ops, xs) -> np.ndarray:
    """HS deviations of the operator integral along a symbol sequence.

    Returns ||Gamma(phi_k)(xs) - Gamma(phi)(xs)||_HS for each member. Each
    deviation is bounded by sup|phi_k - phi| * prod ||X_i||_HS, so the
    sequence tends to zero whenever phi_k -> phi uniformly on the atoms.
    """
    base = moi_apply(phi, ops, xs)
    devs = []
    for phi_k in phi_seq:
        for i in range(phi.order):
            if not phi_k.spectra[i].matches(phi.spectra[i]):
                raise SpectrumMismatch(
                    "truncation sequence member lives on different spectra"
                )
        devs.append(hs_norm(moi_apply(phi_k, ops, xs) - base))
    return np.asarray(devs)


def divided_difference_symbol(
    f,
    fprime,
    spectrum,
    rel_tol: float = 1e-12,
) -> SymbolTensor:
    """Order-2 symbol of the first divided difference of ``f``.

    values[i, j] = (f(a_i) - f(a_j)) / (a_i - a_j); when
    |a_i - a_j| <= rel_tol * max(|a_i|, |a_j|, 1) the removable singularity
    is filled with f'((a_i + a_j)/2).
    """
    atoms = spectrum.atoms
    m = atoms.size
    out = np.zeros((m, m), dtype=complex)
    fa = np.asarray([f(a) for a in atoms], dtype=complex)
    for i in range(m):
        for j in range(m):
            gap = abs(atoms[i] - atoms[j])
            if gap <= rel_tol * max(abs(atoms[i]), abs(atoms[j]), 1.0):
                out[i, j] = fprime((atoms[i] + atoms[j]) / 2.0)
            else:
                out[i, j] = (fa[i] - fa[j]) / (atoms[i] - atoms[j])
    return SymbolTensor((spectrum, spectrum), out)
