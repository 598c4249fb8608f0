"""Pointwise Hilbert-space factorizations of symbols.

A factorization stores, per atom of each spectrum, a vector (first and last
slots) or a matrix (middle slots) over auxiliary coordinate spaces. The
synthesized symbol is the chained pairing

    phi(t1,..,tn) = a_first[t1]^T a_mid[0][t2] ... a_mid[n-3][t_{n-1}] a_last[tn],

so every pointwise value is bounded by the product of pointwise norms and
the product of sup norms is an upper-bound certificate for the symbol's
completely bounded multiplier norm. The block realization materializes the
same data as structured operator blocks whose product reproduces the
operator integral of the synthesized symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    OrderMismatch,
    RankTooLarge,
    RankTooSmall,
    SpectrumMismatch,
)
from .moi import functional_calculus
from .schur import SymbolTensor, _INDEX_LETTERS

__all__ = [
    "FactorizationData",
    "synthesize_symbol",
    "sup_norm_product",
    "block_realization",
    "truncate",
]

_RANK_LETTERS = "mnopqrstuv"


@dataclass(eq=False)
class FactorizationData:
    """Per-atom factor tables of an order-n symbol factorization.

    a_first: (m1, r1) vectors per atom of the first spectrum.
    a_mid:   tuple of n-2 arrays, entry k of shape (m_{k+2}, r_{k+1}, r_{k+2})
             holding a matrix per atom of the (k+2)-nd spectrum.
    a_last:  (mn, r_{n-1}) vectors per atom of the last spectrum.
    """

    a_first: np.ndarray
    a_mid: tuple
    a_last: np.ndarray

    def __post_init__(self):
        first = np.asarray(self.a_first, dtype=complex)
        last = np.asarray(self.a_last, dtype=complex)
        mids = tuple(np.asarray(m, dtype=complex) for m in self.a_mid)
        if first.ndim != 2 or last.ndim != 2:
            raise DimensionMismatch("end factor tables must be 2-d (atoms, rank)")
        if first.shape[1] < 1 or last.shape[1] < 1:
            raise RankTooSmall("coordinate spaces must have dimension >= 1")
        rank = first.shape[1]
        for k, m in enumerate(mids):
            if m.ndim != 3:
                raise DimensionMismatch(
                    "middle factor tables must be 3-d (atoms, rank, rank)"
                )
            if m.shape[1] != rank:
                raise DimensionMismatch(
                    f"middle table {k} left rank {m.shape[1]} != {rank}"
                )
            if m.shape[2] < 1:
                raise RankTooSmall("coordinate spaces must have dimension >= 1")
            rank = m.shape[2]
        if last.shape[1] != rank:
            raise DimensionMismatch(
                f"last table rank {last.shape[1]} != {rank}"
            )
        for t in (first, last, *mids):
            if not np.all(np.isfinite(t)):
                raise ValueError("factor tables must be finite")
        self.a_first = first
        self.a_mid = mids
        self.a_last = last

    @property
    def order(self) -> int:
        return len(self.a_mid) + 2

    @property
    def hilbert_dims(self) -> tuple:
        return (self.a_first.shape[1],) + tuple(m.shape[2] for m in self.a_mid)

    @property
    def atom_counts(self) -> tuple:
        return (
            (self.a_first.shape[0],)
            + tuple(m.shape[0] for m in self.a_mid)
            + (self.a_last.shape[0],)
        )

    def factor_sup_norms(self) -> tuple:
        """Per-slot sup norms: pointwise Euclidean for the vector-valued ends,
        pointwise operator norm for the middles."""
        norms = [float(np.max(np.linalg.norm(self.a_first, axis=1)))]
        for m in self.a_mid:
            norms.append(float(np.max(np.linalg.svd(m, compute_uv=False)[:, 0])))
        norms.append(float(np.max(np.linalg.norm(self.a_last, axis=1))))
        return tuple(norms)

    def scaled(self, c: complex) -> "FactorizationData":
        """Scale the synthesized symbol by c (carried by the first factor)."""
        return FactorizationData(c * self.a_first, self.a_mid, self.a_last)

    def padded(self, hilbert_dims) -> "FactorizationData":
        """Embed into larger coordinate spaces by zero-padding the tables."""
        dims = tuple(int(r) for r in hilbert_dims)
        cur = self.hilbert_dims
        if len(dims) != len(cur):
            raise DimensionMismatch("padding must keep the order")
        if any(d < c for d, c in zip(dims, cur)):
            raise RankTooLarge("padding cannot shrink a coordinate space")
        first = np.zeros((self.a_first.shape[0], dims[0]), dtype=complex)
        first[:, : cur[0]] = self.a_first
        mids = []
        for k, m in enumerate(self.a_mid):
            out = np.zeros((m.shape[0], dims[k], dims[k + 1]), dtype=complex)
            out[:, : cur[k], : cur[k + 1]] = m
            mids.append(out)
        last = np.zeros((self.a_last.shape[0], dims[-1]), dtype=complex)
        last[:, : cur[-1]] = self.a_last
        return FactorizationData(first, tuple(mids), last)


def synthesize_symbol(fact: FactorizationData, spectra) -> SymbolTensor:
    """Symbol synthesized pointwise from the factor tables.

    Entry (t1,..,tn) is the scalar a_first[t1]^T (chained middles) a_last[tn];
    sup|result| <= sup_norm_product(fact).
    """
    spectra = tuple(spectra)
    n = fact.order
    if len(spectra) != n:
        raise OrderMismatch(f"{len(spectra)} spectra for an order-{n} factorization")
    for i, s in enumerate(spectra):
        if len(s) != fact.atom_counts[i]:
            raise DimensionMismatch(
                f"spectrum {i} has {len(s)} atoms, table has {fact.atom_counts[i]}"
            )
    atom = _INDEX_LETTERS[:n]
    rank = _RANK_LETTERS[: n - 1]
    subs = [atom[0] + rank[0]]
    operands = [fact.a_first]
    for k, m in enumerate(fact.a_mid):
        subs.append(atom[k + 1] + rank[k] + rank[k + 1])
        operands.append(m)
    subs.append(atom[-1] + rank[-1])
    operands.append(fact.a_last)
    values = np.einsum(",".join(subs) + "->" + atom, *operands)
    return SymbolTensor(spectra, values)


def sup_norm_product(fact: FactorizationData) -> float:
    """Product of the per-slot sup norms: the upper-bound certificate value."""
    return float(np.prod(fact.factor_sup_norms()))


def block_realization(fact: FactorizationData, ops, xs) -> np.ndarray:
    """Structured-block evaluation of the synthesized symbol's operator integral.

    Each factor table is fed coordinate-wise through the functional calculus
    of its operator and assembled into a row block (first), square block
    matrices (middles) and a column block (last); the middle matrices are
    interleaved block-diagonally as diag(X_i,..,X_i). The product equals
    moi_apply(synthesize_symbol(fact), ops, xs) and its operator norm is at
    most sup_norm_product(fact) * prod ||X_i||_op.
    """
    n = fact.order
    if len(ops) != n:
        raise OrderMismatch(f"{len(ops)} operators for an order-{n} factorization")
    if len(xs) != n - 1:
        raise OrderMismatch(f"{len(xs)} middle matrices for order {n}")
    for i, op in enumerate(ops):
        if len(op.spectrum) != fact.atom_counts[i]:
            raise SpectrumMismatch(
                f"operator {i} has {len(op.spectrum)} atoms, table has "
                f"{fact.atom_counts[i]}"
            )
    d = ops[0].dim
    xs = [np.asarray(x, dtype=complex) for x in xs]
    dims = fact.hilbert_dims
    row = np.hstack(
        [functional_calculus(fact.a_first[:, k], ops[0]) for k in range(dims[0])]
    )
    out = row @ np.kron(np.eye(dims[0]), xs[0])
    for slot, m in enumerate(fact.a_mid):
        rl, rr = dims[slot], dims[slot + 1]
        block = np.zeros((d * rl, d * rr), dtype=complex)
        for k in range(rl):
            for left in range(rr):
                block[k * d : (k + 1) * d, left * d : (left + 1) * d] = (
                    functional_calculus(m[:, k, left], ops[slot + 1])
                )
        out = out @ block @ np.kron(np.eye(rr), xs[slot + 1])
    col = np.vstack(
        [functional_calculus(fact.a_last[:, k], ops[-1]) for k in range(dims[-1])]
    )
    return out @ col


def truncate(fact: FactorizationData, ranks) -> FactorizationData:
    """Compress every coordinate space to its first ``ranks[i]`` coordinates.

    The synthesized symbol converges entrywise to the full one as the ranks
    grow back to the Hilbert dimensions, and the sup-norm product never
    increases under truncation.
    """
    ranks = tuple(int(r) for r in ranks)
    dims = fact.hilbert_dims
    if len(ranks) != len(dims):
        raise DimensionMismatch(
            f"{len(ranks)} ranks for {len(dims)} coordinate spaces"
        )
    for r, dmax in zip(ranks, dims):
        if r < 1:
            raise RankTooSmall(f"rank {r} < 1")
        if r > dmax:
            raise RankTooLarge(f"rank {r} exceeds dimension {dmax}")
    first = fact.a_first[:, : ranks[0]]
    mids = tuple(
        m[:, : ranks[k], : ranks[k + 1]] for k, m in enumerate(fact.a_mid)
    )
    last = fact.a_last[:, : ranks[-1]]
    return FactorizationData(first, mids, last)
