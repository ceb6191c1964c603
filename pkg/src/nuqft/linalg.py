"""Dense complex vectors and matrices, and a one-sided Jacobi SVD.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128``.
The helpers here validate shape and finiteness at the boundary and then
stay out of the way.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ConvergenceError, DimensionError

ATOL = 1e-12
RTOL = 1e-9

_EPS = np.finfo(float).eps


def as_vector(x, name="vector"):
    """Return ``x`` as a finite, non-empty 1-D complex array."""
    v = np.asarray(x, dtype=complex)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {v.shape}")
    if v.size == 0:
        raise DimensionError(f"{name} is empty")
    if not np.all(np.isfinite(v)):
        raise ContractError(f"{name} has non-finite entries")
    return v


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite, non-empty 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {m.shape}")
    if m.size == 0:
        raise DimensionError(f"{name} is empty")
    if not np.all(np.isfinite(m)):
        raise ContractError(f"{name} has non-finite entries")
    return m


def isclose(a, b, atol=ATOL, rtol=RTOL):
    """Elementwise ``|a - b| <= atol + rtol * max(|a|, |b|)`` for complex input."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.abs(a - b) <= atol + rtol * np.maximum(np.abs(a), np.abs(b))


def tensor_product(A, B):
    """Kronecker product; block ``(i, j)`` of the result is ``A[i, j] * B``.

    1-D operands are treated as column vectors and a 1-D result is returned
    when both operands are 1-D.
    """
    vec = np.ndim(A) == 1 and np.ndim(B) == 1
    a = as_matrix(np.reshape(A, (-1, 1)) if np.ndim(A) == 1 else A, "A")
    b = as_matrix(np.reshape(B, (-1, 1)) if np.ndim(B) == 1 else B, "B")
    (ma, na), (mb, nb) = a.shape, b.shape
    out = (a[:, None, :, None] * b[None, :, None, :]).reshape(ma * mb, na * nb)
    return out[:, 0] if vec else out


def inner_product(phi, psi):
    """``<phi|psi>``, conjugate-linear in the first argument."""
    phi = as_vector(phi, "phi")
    psi = as_vector(psi, "psi")
    if phi.shape != psi.shape:
        raise DimensionError(f"length mismatch: {phi.size} vs {psi.size}")
    return complex(np.vdot(phi, psi))


def outer_product(phi, psi):
    """``|phi><psi|`` with entries ``phi[i] * conj(psi[j])``."""
    phi = as_vector(phi, "phi")
    psi = as_vector(psi, "psi")
    return np.outer(phi, psi.conj())


def matmul(A, B):
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape[-1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def adjoint(A):
    return np.conj(np.asarray(A, dtype=complex)).T


def frobenius_norm(A):
    return float(np.linalg.norm(np.asarray(A, dtype=complex)))


def is_orthonormal(cols, tol=1e-10):
    cols = np.asarray(cols, dtype=complex)
    gram = cols.conj().T @ cols
    return bool(np.max(np.abs(gram - np.eye(cols.shape[1])), initial=0.0) <= tol)


def projector(basis_cols, tol=1e-10):
    """Orthogonal projector ``B B^dagger`` onto the span of orthonormal columns."""
    b = as_matrix(basis_cols, "basis_cols")
    if not is_orthonormal(b, tol):
        raise ContractError("projector needs orthonormal columns")
    return b @ b.conj().T


@dataclass(frozen=True)
class SvdFactorization:
    """``A = U @ diag(singular_values) @ V^dagger`` with ``r = min(m, n)``.

    ``negligible`` flags singular values below ``rel_tol * sigma_max``; they
    are kept at their computed values.
    """

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray
    negligible: np.ndarray
    sweeps: int

    def __post_init__(self):
        for arr in (self.U, self.singular_values, self.V, self.negligible):
            arr.setflags(write=False)

    @property
    def r(self):
        return self.singular_values.size

    @property
    def rank(self):
        """Number of singular values that are not flagged negligible."""
        return int(np.count_nonzero(~self.negligible))

    def reconstruct(self, L=None):
        L = self.r if L is None else L
        return (self.U[:, :L] * self.singular_values[:L]) @ self.V[:, :L].conj().T


def _round_robin(n):
    """Rounds of disjoint column pairs covering every pair once per sweep."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[j], players[m - 1 - j]) for j in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0]
        if pairs:
            p, q = np.array(pairs).T
            rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _complete_columns(Q, keep):
    """Replace the columns of ``Q`` not in ``keep`` by an orthonormal completion."""
    m, r = Q.shape
    basis = [Q[:, j] for j in range(r) if keep[j]]
    fill = [j for j in range(r) if not keep[j]]
    candidates = iter(range(m))
    for j in fill:
        for e in candidates:
            v = np.zeros(m, dtype=complex)
            v[e] = 1.0
            for _ in range(2):
                for b in basis:
                    v -= np.vdot(b, v) * b
            norm = np.linalg.norm(v)
            if norm > 0.5:
                v /= norm
                basis.append(v)
                Q[:, j] = v
                break
    return Q


def _jacobi_columns(A, tol, max_sweeps):
    """Orthogonalize the columns of ``A`` (m >= n) by complex plane rotations."""
    G = A.copy()
    n = G.shape[1]
    V = np.eye(n, dtype=complex)
    floor = (_EPS * max(np.linalg.norm(A), np.finfo(float).tiny)) ** 2
    rounds = _round_robin(n)
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p, q in rounds:
            gp, gq = G[:, p], G[:, q]
            alpha = np.einsum("ij,ij->j", gp.conj(), gp).real
            beta = np.einsum("ij,ij->j", gq.conj(), gq).real
            gamma = np.einsum("ij,ij->j", gp.conj(), gq)
            mag = np.abs(gamma)
            todo = (mag > tol * np.sqrt(alpha * beta)) & (mag > floor)
            if not np.any(todo):
                continue
            rotated = True
            p, q = p[todo], q[todo]
            alpha, beta, gamma, mag = alpha[todo], beta[todo], gamma[todo], mag[todo]
            phase = gamma / mag
            zeta = (beta - alpha) / (2.0 * mag)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            for M in (G, V):
                mp, mq = M[:, p], M[:, q]
                M[:, p] = c * mp - s * phase.conj() * mq
                M[:, q] = s * phase * mp + c * mq
        if not rotated:
            return G, V, sweep
    raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps", max_sweeps)


def _polish(Q, steps=2):
    """Newton-Schulz steps towards the nearest matrix with orthonormal columns.

    Both Jacobi factors are orthonormal only to roughly the rotation
    tolerance times the sweep count; this brings them to working precision.
    """
    eye = np.eye(Q.shape[1])
    for _ in range(steps):
        Q = Q @ (1.5 * eye - 0.5 * (Q.conj().T @ Q))
    return Q


def svd(A, rel_tol=0.0, tol=1e-14, max_sweeps=60):
    """Thin SVD by one-sided Jacobi rotations.

    Parameters
    ----------
    A : array_like, shape (m, n)
    rel_tol : float
        Singular values below ``rel_tol * sigma_max`` are flagged negligible.
    tol : float
        A column pair is rotated while ``|g_pq| > tol * sqrt(g_pp g_qq)``.
    max_sweeps : int

    Returns
    -------
    SvdFactorization
        With ``r = min(m, n)`` columns in ``U`` (m x r) and ``V`` (n x r).
    """
    A = as_matrix(A, "A")
    if not 0.0 <= rel_tol < 1.0:
        raise ContractError(f"rel_tol must lie in [0, 1), got {rel_tol}")
    m, n = A.shape
    wide = m < n
    work = A.conj().T if wide else A
    G, R, sweeps = _jacobi_columns(work, tol, max_sweeps)

    sigma = np.linalg.norm(G, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, G, R = sigma[order], G[:, order], R[:, order]
    smax = sigma[0] if sigma.size else 0.0
    keep = sigma > max(work.shape) * _EPS * smax
    W = np.zeros_like(G)
    W[:, keep] = G[:, keep] / sigma[keep]
    W = _complete_columns(W, keep)
    W, R = _polish(W), _polish(R)

    U, V = (R, W) if wide else (W, R)
    negligible = sigma < rel_tol * smax if smax > 0 else np.ones_like(sigma, dtype=bool)
    return SvdFactorization(U, sigma, V, negligible, sweeps)
