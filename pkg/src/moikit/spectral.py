"""Complex dense linear-algebra substrate.

Weighted discrete measure spaces, spectral decomposition of normal matrices,
the kernel <-> Hilbert-Schmidt-operator identification in weighted
orthonormal bases, and the basic norms / trace pairing.

Matrices are plain complex ``numpy.ndarray`` of shape (rows, cols). All
operations are pure functions on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    MultiplicityNotOne,
    NonSquare,
    NotNormal,
)

__all__ = [
    "WeightedSpectrum",
    "NormalOperator",
    "Kernel",
    "spectral_decompose",
    "diagonal_operator",
    "kernel_to_operator",
    "operator_to_kernel",
    "op_norm",
    "hs_norm",
    "trace_pairing",
    "norms_and_pairing",
]

#: Default relative eigenvalue clustering tolerance (times ||A||_F).
DEFAULT_CLUSTER_TOL = 1e-8

#: Default normality tolerance: ||AA* - A*A||_F <= tol * max(1, ||A||_F^2).
DEFAULT_NORMALITY_TOL = 1e-12


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class WeightedSpectrum:
    """Finite discrete measure space: complex atoms with positive weights.

    Stands in for a spectrum together with a scalar-valued spectral measure;
    any strictly positive weights define the same measure class.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=complex).reshape(-1)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if atoms.size == 0:
            raise ValueError("a spectrum needs at least one atom")
        if atoms.size != weights.size:
            raise DimensionMismatch(
                f"{atoms.size} atoms but {weights.size} weights"
            )
        if not np.all(np.isfinite(atoms)) or not np.all(np.isfinite(weights)):
            raise ValueError("atoms and weights must be finite")
        if np.any(weights <= 0.0):
            raise ValueError("weights must be strictly positive")
        if len(set(atoms.tolist())) != atoms.size:
            raise ValueError("atoms must be pairwise distinct")
        object.__setattr__(self, "atoms", _readonly(atoms))
        object.__setattr__(self, "weights", _readonly(weights))

    def __len__(self) -> int:
        return self.atoms.size

    def matches(self, other: "WeightedSpectrum") -> bool:
        """Exact equality of atoms and weights, order included."""
        return np.array_equal(self.atoms, other.atoms) and np.array_equal(
            self.weights, other.weights
        )


@dataclass(frozen=True, eq=False)
class Kernel:
    """A function on the product of two weighted spectra.

    ``values[s, t]`` is the kernel at (domain atom s, codomain atom t).
    """

    domain: WeightedSpectrum
    codomain: WeightedSpectrum
    values: np.ndarray

    def __post_init__(self):
        v = _as_matrix(self.values)
        if v.shape != (len(self.domain), len(self.codomain)):
            raise DimensionMismatch(
                f"kernel values {v.shape} do not match spectra "
                f"({len(self.domain)}, {len(self.codomain)})"
            )
        object.__setattr__(self, "values", _readonly(v))

    def l2_norm(self) -> float:
        """Weighted L2 norm: sqrt(sum_{s,t} w_dom(s) w_cod(t) |K(s,t)|^2)."""
        w = np.outer(self.domain.weights, self.codomain.weights)
        return float(np.sqrt(np.sum(w * np.abs(self.values) ** 2)))


@dataclass(frozen=True, eq=False)
class NormalOperator:
    """A normal matrix with its grouped spectral decomposition.

    ``projections[i]`` is the orthogonal projection onto the eigenspace of
    ``spectrum.atoms[i]``; they resolve the identity and reconstruct the
    matrix as sum(atom_i * P_i).
    """

    matrix: np.ndarray
    spectrum: WeightedSpectrum
    projections: tuple

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise NonSquare(f"operator matrix must be square, got {m.shape}")
        projs = tuple(_readonly(_as_matrix(p)) for p in self.projections)
        if len(projs) != len(self.spectrum):
            raise DimensionMismatch(
                f"{len(projs)} projections for {len(self.spectrum)} atoms"
            )
        for p in projs:
            if p.shape != m.shape:
                raise DimensionMismatch("projection shape differs from matrix")
        object.__setattr__(self, "matrix", _readonly(m))
        object.__setattr__(self, "projections", projs)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, tol: float = 1e-10) -> None:
        """Check the spectral-decomposition invariants to tolerance ``tol``.

        Raises ValueError on the first violated invariant: resolution of the
        identity, mutual orthogonality, self-adjointness, reconstruction.
        """
        d = self.dim
        projs = self.projections
        if np.linalg.norm(sum(projs) - np.eye(d)) > tol * max(1.0, d):
            raise ValueError("projections do not resolve the identity")
        for i, p in enumerate(projs):
            if np.linalg.norm(p - p.conj().T) > tol:
                raise ValueError(f"projection {i} is not self-adjoint")
            for j, q in enumerate(projs):
                want = p if i == j else 0.0
                if np.linalg.norm(p @ q - want) > tol:
                    raise ValueError(f"projections {i},{j} are not orthogonal")
        recon = sum(a * p for a, p in zip(self.spectrum.atoms, projs))
        scale = max(1.0, float(np.linalg.norm(self.matrix)))
        if np.linalg.norm(recon - self.matrix) > tol * scale:
            raise ValueError("spectral reconstruction does not match matrix")

    def with_weights(self, weights) -> "NormalOperator":
        """Same operator with a different (equivalent) spectral measure."""
        spec = WeightedSpectrum(self.spectrum.atoms, weights)
        return NormalOperator(self.matrix, spec, self.projections)

    def multiplicity_one(self, tol: float = 1e-10) -> bool:
        """True when every spectral projection has rank one."""
        return all(
            abs(np.trace(p).real - 1.0) <= tol for p in self.projections
        )

    def eigenvector_matrix(self, tol: float = 1e-10) -> np.ndarray:
        """Unit eigenvectors as columns, one per atom (multiplicity one only).

        The phase is fixed so the largest-modulus entry of each vector is
        real positive, making the result deterministic.
        """
        if not self.multiplicity_one(tol):
            raise MultiplicityNotOne(
                "eigenvector matrix requires rank-one spectral projections"
            )
        cols = []
        for p in self.projections:
            j = int(np.argmax(np.linalg.norm(p, axis=0)))
            v = p[:, j]
            v = v / np.linalg.norm(v)
            k = int(np.argmax(np.abs(v)))
            phase = v[k] / abs(v[k])
            cols.append(v / phase)
        return np.column_stack(cols)


def _cluster_eigenvalues(eigs: np.ndarray, tol: float) -> list:
    """Group eigenvalues whose pairwise-linkage distance is within tol.

    Connected components of the graph |e_i - e_j| <= tol (single linkage),
    returned as lists of indices.
    """
    n = eigs.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def spectral_decompose(
    a,
    cluster_tol: float | None = None,
    normality_tol: float = DEFAULT_NORMALITY_TOL,
) -> NormalOperator:
    """Spectral decomposition of a normal matrix into atoms and projections.

    Eigenvalues within ``cluster_tol`` of each other (single linkage;
    default 1e-8 * ||A||_F) are merged into one atom whose projection spans
    the combined eigenspace. Atom weights default to the eigenspace
    dimension; use :meth:`NormalOperator.with_weights` to override. Atoms are
    sorted by (real, imag) so the result is deterministic.

    Raises NonSquare, or NotNormal when
    ||AA* - A*A||_F > normality_tol * max(1, ||A||_F^2).
    """
    m = _as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"spectral decomposition needs a square matrix, got {m.shape}")
    norm = float(np.linalg.norm(m))
    defect = float(np.linalg.norm(m @ m.conj().T - m.conj().T @ m))
    if defect > normality_tol * max(1.0, norm**2):
        raise NotNormal(
            f"normality defect {defect:.3e} exceeds "
            f"{normality_tol:.1e} * max(1, ||A||^2)"
        )
    if cluster_tol is None:
        cluster_tol = DEFAULT_CLUSTER_TOL * norm
    t, z = scipy.linalg.schur(m, output="complex")
    eigs = np.diag(t).copy()
    groups = _cluster_eigenvalues(eigs, cluster_tol)
    groups.sort(key=lambda g: (np.mean(eigs[g]).real, np.mean(eigs[g]).imag))
    atoms, weights, projs = [], [], []
    for g in groups:
        atoms.append(complex(np.mean(eigs[g])))
        weights.append(float(len(g)))
        cols = z[:, g]
        projs.append(cols @ cols.conj().T)
    spectrum = WeightedSpectrum(np.array(atoms), np.array(weights))
    return NormalOperator(m, spectrum, tuple(projs))


def diagonal_operator(atoms, weights=None) -> NormalOperator:
    """Canonical diagonal operator: diag(atoms) with standard-basis projections."""
    atoms = np.asarray(atoms, dtype=complex).reshape(-1)
    if weights is None:
        weights = np.ones(atoms.size)
    spec = WeightedSpectrum(atoms, weights)
    d = atoms.size
    projs = []
    for i in range(d):
        p = np.zeros((d, d), dtype=complex)
        p[i, i] = 1.0
        projs.append(p)
    return NormalOperator(np.diag(atoms), spec, tuple(projs))


def kernel_to_operator(k: Kernel) -> np.ndarray:
    """Matrix of the integral operator of ``k`` in weighted orthonormal bases.

    The operator maps L2(domain) to L2(codomain) by integrating the kernel
    against its first variable; in the orthonormal bases e_t / sqrt(w_t) its
    matrix is sqrt(w_cod) K^T sqrt(w_dom), so the weighted L2 norm of the
    kernel equals the Hilbert-Schmidt (Frobenius) norm of the output.
    """
    sd = np.sqrt(k.domain.weights)
    sc = np.sqrt(k.codomain.weights)
    return sc[:, None] * k.values.T * sd[None, :]


def operator_to_kernel(
    x, dom: WeightedSpectrum, cod: WeightedSpectrum
) -> Kernel:
    """Inverse of :func:`kernel_to_operator` (exact round trip)."""
    m = _as_matrix(x)
    if m.shape != (len(cod), len(dom)):
        raise DimensionMismatch(
            f"operator shape {m.shape} does not match (|cod|, |dom|) = "
            f"({len(cod)}, {len(dom)})"
        )
    sd = np.sqrt(dom.weights)
    sc = np.sqrt(cod.weights)
    values = (m / sc[:, None] / sd[None, :]).T
    return Kernel(dom, cod, values)


def op_norm(x) -> float:
    """Operator norm (largest singular value)."""
    return float(np.linalg.norm(_as_matrix(x), ord=2))


def hs_norm(x) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(_as_matrix(x)))


def trace_pairing(s, t) -> complex:
    """Trace duality pairing tr(S T)."""
    s = _as_matrix(s)
    t = _as_matrix(t)
    if s.shape[1] != t.shape[0] or s.shape[0] != t.shape[1]:
        raise DimensionMismatch(
            f"cannot trace the product of {s.shape} and {t.shape}"
        )
    return complex(np.trace(s @ t))


def norms_and_pairing(s, t) -> tuple[float, float, complex]:
    """(operator norm of S, HS norm of S, trace pairing tr(S T))."""
    return op_norm(s), hs_norm(s), trace_pairing(s, t)
