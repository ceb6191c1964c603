"""Tight approximation sets (finite frames) over a subspace.

A frame is stored as a ``k x n`` matrix whose columns are the frame vectors,
together with a ``k x l`` matrix of orthonormal columns spanning the subspace
they live in.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegenerateFrameError
from .linalg import as_matrix, is_orthonormal, projector, svd

SPAN_TOL = 1e-9
TIGHT_TOL = 1e-9


@dataclass(frozen=True)
class FrameSet:
    vectors: np.ndarray
    subspace_basis: np.ndarray

    def __post_init__(self):
        vecs = as_matrix(self.vectors, "vectors").copy()
        basis = as_matrix(self.subspace_basis, "subspace_basis").copy()
        if vecs.shape[0] != basis.shape[0]:
            raise ContractError(
                f"frame vectors live in C^{vecs.shape[0]} but the basis in C^{basis.shape[0]}"
            )
        if not is_orthonormal(basis):
            raise ContractError("subspace_basis columns are not orthonormal")
        residual = vecs - basis @ (basis.conj().T @ vecs)
        worst = float(np.max(np.linalg.norm(residual, axis=0)))
        if worst > SPAN_TOL:
            raise ContractError(f"frame vector leaves the subspace (residual {worst:.3g})")
        for arr in (vecs, basis):
            arr.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "subspace_basis", basis)

    @classmethod
    def spanning(cls, vectors, rel_tol=1e-10):
        """Frame over the span of its own vectors."""
        vecs = as_matrix(vectors, "vectors")
        f = svd(vecs, rel_tol=rel_tol)
        return cls(vecs, f.U[:, : max(f.rank, 1)])

    @property
    def k(self):
        return self.vectors.shape[0]

    @property
    def n(self):
        return self.vectors.shape[1]

    @property
    def l(self):
        return self.subspace_basis.shape[1]

    def coordinates(self):
        """Frame vectors expressed in the subspace basis (``l x n``)."""
        return self.subspace_basis.conj().T @ self.vectors


@dataclass(frozen=True)
class FrameAnalysis:
    alpha: float
    beta: float
    redundancy: float
    tight: bool
    beta_if_tight: float


def frame_operator(f):
    """``sum_i |psi_i><psi_i|``."""
    S = f.vectors @ f.vectors.conj().T
    return 0.5 * (S + S.conj().T)


def frame_bounds(f, tol=TIGHT_TOL):
    """Optimal frame bounds from the singular values of the coordinate matrix.

    ``alpha`` and ``beta`` are the smallest and largest singular values, so
    ``alpha^2 |x|^2 <= sum |<x|psi_i>|^2 <= beta^2 |x|^2`` on the subspace.
    """
    sv = svd(f.coordinates()).singular_values
    if sv.size < f.l:
        raise DegenerateFrameError(f"{f.n} vectors cannot span a {f.l}-dimensional subspace")
    alpha, beta = float(sv[-1]), float(sv[0])
    if beta == 0.0 or alpha <= 1e-12 * beta:
        raise DegenerateFrameError("frame vectors do not span the subspace (alpha = 0)")
    tight = abs(beta / alpha - 1.0) <= tol
    return FrameAnalysis(
        alpha=alpha,
        beta=beta,
        redundancy=f.n / f.l,
        tight=bool(tight),
        beta_if_tight=0.5 * (alpha + beta),
    )


def tight_bound_squared(f):
    """``beta^2 = sum_i <psi_i|psi_i> / l``, the only candidate tight bound."""
    return float(np.sum(np.abs(f.vectors) ** 2)) / f.l


def is_tight(f, tol=TIGHT_TOL):
    beta2 = tight_bound_squared(f)
    P = projector(f.subspace_basis)
    return bool(np.linalg.norm(frame_operator(f) - beta2 * P) <= tol * beta2)


def scaled_povm(f):
    """Measurement vectors ``psi_i / beta`` of the rank-one POVM on the subspace."""
    return f.vectors / np.sqrt(tight_bound_squared(f))


def _embed(B):
    k, n = B.shape
    if k >= n:
        return B
    return np.vstack([B, np.zeros((n - k, n), dtype=complex)])


def _fix_phases(U, V):
    """Make the largest-magnitude entry of each ``u_i`` real positive."""
    idx = np.argmax(np.abs(U), axis=0)
    ph = U[idx, np.arange(U.shape[1])]
    ph = np.where(np.abs(ph) > 0, ph / np.abs(ph), 1.0)
    return U * ph.conj(), V * ph.conj()


def orthogonalize_frame(B):
    """Orthogonal approximation matrix ``sum_i u_i v_i^dagger`` built from ``B``.

    ``B`` is ``k x n``. When ``k < n`` it is first padded with ``n - k`` zero
    rows. The result has orthonormal columns and, projected onto the span of
    ``B``, reproduces the partial-isometry part of ``B`` (``B`` itself for a
    normalized tight frame).
    """
    B = as_matrix(B, "B")
    k, n = B.shape
    f = svd(_embed(B), rel_tol=1e-10)
    if f.rank < min(k, n):
        raise DegenerateFrameError(f"approximation matrix has rank {f.rank} < {min(k, n)}")
    U, V = _fix_phases(f.U, f.V)
    return U @ V.conj().T


def range_projector(B, rel_tol=1e-10):
    """Projector onto the column span of the (embedded) approximation matrix."""
    f = svd(_embed(as_matrix(B, "B")), rel_tol=rel_tol)
    Ur = f.U[:, : f.rank]
    return Ur @ Ur.conj().T


def partial_isometry(B, rel_tol=1e-10):
    """``sum u_i v_i^dagger`` over the non-negligible singular triples of ``B``."""
    f = svd(_embed(as_matrix(B, "B")), rel_tol=rel_tol)
    r = f.rank
    return f.U[:, :r] @ f.V[:, :r].conj().T
