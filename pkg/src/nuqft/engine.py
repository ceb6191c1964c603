"""Nonuniform QFT by truncated-SVD interpolation.

The nonuniform coefficients of an input ``x`` (length ``N``) at angles
``phi_k`` in ``[0, N)`` are ``X = M^dagger x`` where
``M[n, k] = exp(2 pi i (n - N/2) phi_k / N)``.

Angles are grouped into ``2N`` half-unit intervals ``l = floor(2 phi)``.
Every interval is a modulated (and, for odd ``l``, conjugated) copy of the
reference interval ``[0, 1/2)``. After an inverse QFT this modulation
becomes a circular shift, and the reference columns are numerically low
rank, so a handful of left singular vectors ``U_L`` of the reference matrix
serve all intervals. The transform then runs in four stages:

1. ``precompute_interpolators`` - least-squares coefficients ``P_l`` of each
   interval's aligned columns on ``U_L``;
2. ``scale`` - ``Delta = diag(x) @ iqft(U_L)``;
3. ``transform_scaled`` - ``Q = qft(Delta)``;
4. ``interpolate`` - combine one row of ``Q`` per interval with ``P_l``.

Row 0 of ``M`` is split as ``M = E + e_0 D`` with ``D = i Im M[0, :]`` so that
``iqft(E)`` is real for the reference interval; the ``D^dagger x_0`` term is
added exactly.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractError, NumericError, PartitionError
from .linalg import as_vector, svd
from .transform import iqft_columns, n_qubits_for, qft_columns

REAL_TOL = 1e-10


@dataclass(frozen=True)
class NonuniformAngleSet:
    """``K`` angles in ``[0, N)`` with their half-unit interval partition."""

    N: int
    angles: np.ndarray

    def __post_init__(self):
        n_qubits_for(self.N)
        phi = np.asarray(self.angles, dtype=float).reshape(-1).copy()
        if not np.all(np.isfinite(phi)):
            raise ContractError("angles must be finite")
        bad = np.flatnonzero((phi < 0) | (phi >= self.N))
        if bad.size:
            raise ContractError(f"angle {phi[bad[0]]!r} (index {bad[0]}) outside [0, {self.N})")
        phi.setflags(write=False)
        object.__setattr__(self, "angles", phi)

    @classmethod
    def random(cls, N, K, rng):
        """``K`` sorted uniform angles in ``[0, N)``."""
        return cls(N, np.sort(rng.uniform(0.0, N, K)))

    @property
    def K(self):
        return self.angles.size

    @property
    def partition(self):
        """Interval index ``l = floor(2 phi)`` of every angle."""
        return np.floor(2.0 * self.angles).astype(int)

    @property
    def cardinalities(self):
        return np.bincount(self.partition, minlength=2 * self.N)

    def intervals(self):
        """``{l: indices}`` for every nonempty interval, ``l`` ascending."""
        part = self.partition
        order = np.argsort(part, kind="stable")
        ls, starts = np.unique(part[order], return_index=True)
        chunks = np.split(order, starts[1:]) if order.size else []
        return {int(l): idx for l, idx in zip(ls, chunks)}

    def check_partition(self, partition=None):
        part = self.partition if partition is None else np.asarray(partition)
        lo = part / 2.0
        bad = np.flatnonzero((self.angles < lo) | (self.angles >= lo + 0.5))
        if bad.size:
            k = bad[0]
            raise PartitionError(f"angle {self.angles[k]!r} is not in interval {part[k]}")


@dataclass(frozen=True)
class ExponentialMatrix:
    matrix: np.ndarray
    tau: float


@dataclass(frozen=True)
class ExponentialFactorization:
    """``M = E_tilde + e_0 D``; hence ``M^dagger x = E_tilde^dagger x + conj(D) x_0``."""

    E_tilde: np.ndarray
    D: np.ndarray

    def apply_adjoint(self, x):
        x = np.asarray(x, dtype=complex)
        return self.E_tilde.conj().T @ x + self.D.conj() * x[0]


def _exponentials(N, n, phi):
    # phase in turns, reduced mod 1 before scaling: the integer part of phi
    # contributes an exact integer product
    m = (np.asarray(n) - N // 2).astype(np.int64)
    whole = np.floor(phi)
    frac = phi - whole
    turns = (np.outer(m, whole.astype(np.int64)) % N) / N + np.outer(m, frac) / N
    turns -= np.round(turns)
    return np.exp(2j * np.pi * turns)


def build_exponential_matrix(a):
    """``N x K`` matrix with entries ``exp(2 pi i (n - N/2) phi_k / N)``."""
    return ExponentialMatrix(_exponentials(a.N, np.arange(a.N), a.angles), tau=a.N / 2.0)


def factor_edge(m, part="real"):
    """Split row 0 of the exponential matrix into ``E_tilde`` and ``D``.

    ``part="real"`` gives ``D = i Re M[0, :]``. ``part="imag"`` gives
    ``D = i Im M[0, :]``, which leaves row 0 of ``E_tilde`` real; that is the
    split under which ``iqft(E_tilde)`` of the reference interval is a real
    matrix, and the one the transform pipeline uses.
    """
    M = m.matrix if isinstance(m, ExponentialMatrix) else np.asarray(m, dtype=complex)
    row0 = M[0]
    if part == "real":
        D = 1j * row0.real
    elif part == "imag":
        D = 1j * row0.imag
    else:
        raise ContractError(f"part must be 'real' or 'imag', got {part!r}")
    E = M.copy()
    E[0] = row0 - D
    return ExponentialFactorization(E, D)


def edge_term(a):
    """``D = i Im M[0, :]`` for the pipeline split, without building ``M``."""
    return 1j * np.imag(_exponentials(a.N, np.zeros(1), a.angles)[0])


def direct_nudft(x, a):
    """Exact ``O(NK)`` nonuniform coefficients ``X[k] = sum_n conj(M[n, k]) x[n]``."""
    x = as_vector(x, "x")
    if x.size != a.N:
        raise ContractError(f"x has length {x.size}, angle set expects N = {a.N}")
    if a.K == 0:
        return np.zeros(0, dtype=complex)
    return build_exponential_matrix(a).matrix.conj().T @ x


@dataclass(frozen=True)
class SvdBasis:
    """Truncated SVD of the inverse-QFT'd reference interval matrix."""

    N: int
    L: int
    U: np.ndarray = field(repr=False)
    singular_values: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    rel_threshold: float
    training_seed: int
    training_K: int
    max_imag: float

    @property
    def U_L(self):
        return self.U[:, : self.L]

    @property
    def S_L(self):
        return self.singular_values[: self.L]

    @property
    def V_L(self):
        return self.V[:, : self.L]

    def truncate(self, L):
        """Same factorization, ``L`` retained columns."""
        if not 1 <= L <= self.singular_values.size:
            raise ContractError(f"L must lie in [1, {self.singular_values.size}], got {L}")
        return SvdBasis(
            self.N, int(L), self.U, self.singular_values, self.V,
            self.rel_threshold, self.training_seed, self.training_K, self.max_imag,
        )


def select_rank(singular_values, rel_threshold):
    """Smallest ``L`` with ``sigma_{L+1} / sigma_1 < rel_threshold`` (else all)."""
    s = np.asarray(singular_values)
    below = np.flatnonzero(s[1:] < rel_threshold * s[0])
    return int(below[0]) + 1 if below.size else s.size


def reference_basis(N, training_K, rel_threshold=1e-8, seed=0, rank=None):
    """Build ``U_L`` from ``training_K`` random angles in ``[0, 1/2)``.

    ``rank`` overrides the threshold-based choice of ``L``.
    """
    if not 0.0 < rel_threshold <= 1.0:
        raise ContractError(f"rel_threshold must lie in (0, 1], got {rel_threshold}")
    if training_K < 1:
        raise ContractError("training_K must be positive")
    rng = np.random.default_rng(seed)
    train = NonuniformAngleSet(N, rng.uniform(0.0, 0.5, training_K))
    E0 = factor_edge(build_exponential_matrix(train), part="imag").E_tilde
    B = iqft_columns(E0)
    scale_ = float(np.max(np.abs(B)))
    max_imag = float(np.max(np.abs(B.imag))) / scale_ if scale_ > 0 else 0.0
    if max_imag > REAL_TOL:
        raise NumericError(f"reference matrix is not real (relative imaginary part {max_imag:.3g})")
    f = svd(B.real)
    s = f.singular_values
    if s[0] == 0.0:
        raise NumericError("degenerate training set: reference matrix has rank 0")
    L = select_rank(s, rel_threshold) if rank is None else int(rank)
    if not 1 <= L <= s.size:
        raise ContractError(f"rank must lie in [1, {s.size}], got {rank}")
    U = np.ascontiguousarray(f.U.real)
    V = np.ascontiguousarray(f.V.real)
    for arr in (U, s, V):
        arr.setflags(write=False)
    return SvdBasis(N, L, U, s, V, float(rel_threshold), int(seed), int(training_K), max_imag)


def circular_shift(v, k):
    """Rotate entries down by ``k`` positions along axis 0: ``out[y] = v[y - k]``."""
    return np.roll(v, k, axis=0)


def _half_index(l):
    """``i`` with ``l = 2i`` (even) or ``l = 2i - 1`` (odd)."""
    return (l + 1) // 2


def modulate_columns(cols, l):
    """Map reference-interval columns to interval ``l``.

    Even ``l = 2i``: ``(-1)^i qft(shift_i(iqft(c)))``, i.e. modulation by
    ``exp(2 pi i n i / N)``. Odd ``l = 2i - 1``: the same applied to ``conj(c)``.
    """
    cols = np.asarray(cols, dtype=complex)
    i = _half_index(l)
    if l % 2:
        cols = cols.conj()
    return (-1) ** i * qft_columns(circular_shift(iqft_columns(cols), i))


def modulate_basis(b, l):
    """Columns whose combinations approximate interval ``l``'s ``E_tilde`` columns."""
    if not 0 <= l < 2 * b.N:
        raise ContractError(f"interval index must lie in [0, {2 * b.N}), got {l}")
    return modulate_columns(qft_columns(b.U_L), l)


def align_interval(E_l, l, odd_mode="conjugate"):
    """Bring interval-``l`` columns back to the reference interval, in the iqft domain.

    This undoes ``modulate_columns``. For odd ``l`` the conjugation is applied
    before the inverse QFT (``odd_mode="conjugate"``) or, equivalently for a
    real reference matrix, as an index reversal after it (``"reverse"``).
    """
    E_l = np.asarray(E_l, dtype=complex)
    N = E_l.shape[0]
    i = _half_index(l)
    if l % 2 == 0:
        return (-1) ** i * circular_shift(iqft_columns(E_l), -i)
    if odd_mode == "conjugate":
        ramp = np.exp(-2j * np.pi * np.arange(N) * i / N)
        return iqft_columns(((-1) ** i * ramp[:, None] * E_l).conj())
    if odd_mode == "reverse":
        r = (-1) ** i * circular_shift(iqft_columns(E_l), -i)
        return r[(-np.arange(N)) % N]
    raise ContractError(f"odd_mode must be 'conjugate' or 'reverse', got {odd_mode!r}")


@dataclass(frozen=True)
class Interpolator:
    """Per-interval coefficient matrices ``P_l`` (``K_l x L``)."""

    N: int
    L: int
    P: dict = field(repr=False)
    members: dict = field(repr=False)
    max_imag: float
    real: bool


def precompute_interpolators(b, a, odd_mode="conjugate"):
    if a.N != b.N:
        raise ConfigurationError(f"basis built for N = {b.N}, angles for N = {a.N}")
    a.check_partition()
    groups = a.intervals()
    P, worst = {}, 0.0
    if groups:
        E = factor_edge(build_exponential_matrix(a), part="imag").E_tilde
        U_L = b.U_L
        for l, idx in groups.items():
            target = align_interval(E[:, idx], l, odd_mode)
            P_l = target.T @ U_L
            P[l] = P_l
            mag = float(np.max(np.abs(P_l)))
            if mag > 0:
                worst = max(worst, float(np.max(np.abs(P_l.imag))) / mag)
    return Interpolator(b.N, b.L, P, groups, worst, worst <= REAL_TOL)


def scale(x, b):
    """``Delta = diag(x) @ iqft(U_L)`` (``N x L``)."""
    x = as_vector(x, "x")
    if x.size != b.N:
        raise ContractError(f"x has length {x.size}, basis expects N = {b.N}")
    return x[:, None] * iqft_columns(b.U_L)


def transform_scaled(delta):
    """``Q = qft(Delta)`` column by column."""
    return qft_columns(np.asarray(delta, dtype=complex))


def interpolate(q, interp, a):
    """Combine rows of ``Q`` with the interval coefficients.

    Valid for ``Q`` computed from a real input. Interval ``l = 2i`` reads row
    ``-i mod N`` of ``Q`` as is; interval ``l = 2i - 1`` reads the conjugate of
    row ``i mod N``. Both carry the factor ``(-1)^i sqrt(N)``.
    """
    q = np.asarray(q, dtype=complex)
    N = interp.N
    if q.shape != (N, interp.L):
        raise ConfigurationError(f"Q has shape {q.shape}, expected {(N, interp.L)}")
    out = np.zeros(a.K, dtype=complex)
    root = np.sqrt(N)
    for l, idx in a.intervals().items():
        if l not in interp.P:
            raise ConfigurationError(f"no interpolator for nonempty interval {l}")
        i = _half_index(l)
        row = q[(-i) % N] if l % 2 == 0 else q[i % N].conj()
        out[idx] = (-1) ** i * root * (interp.P[l] @ row)
    return out


def qsvd_nudft(x, a, b, interp=None):
    """Nonuniform coefficients through the four-stage truncated-SVD pipeline.

    Complex inputs are processed as two real passes; the edge term
    ``conj(D) x_0`` is added exactly.
    """
    x = as_vector(x, "x")
    if x.size != a.N or b.N != a.N:
        raise ContractError(f"inconsistent sizes: len(x) = {x.size}, N = {a.N}, basis N = {b.N}")
    if interp is None:
        interp = precompute_interpolators(b, a)
    if a.K == 0:
        return np.zeros(0, dtype=complex)

    def real_pass(v):
        return interpolate(transform_scaled(scale(v, b)), interp, a)

    out = real_pass(x.real)
    if np.any(x.imag):
        out = out + 1j * real_pass(x.imag)
    return out + edge_term(a).conj() * x[0]


def uniform_coefficients(x):
    """Coefficients at the integer angles ``0..N-1``: ``(-1)^m sqrt(N) iqft(x)[m]``."""
    x = as_vector(x, "x")
    N = x.size
    sign = 1.0 - 2.0 * (np.arange(N) % 2)
    return sign * np.sqrt(N) * iqft_columns(x)


def interp_nudft_baseline(x, a, order):
    """Lagrange interpolation of the uniform coefficients at the nonuniform angles.

    Each angle uses its ``order`` nearest integer grid points, wrapped
    cyclically (the coefficients are ``N``-periodic in the angle).
    """
    if order < 1:
        raise ContractError(f"order must be >= 1, got {order}")
    x = as_vector(x, "x")
    if x.size != a.N:
        raise ContractError(f"x has length {x.size}, angle set expects N = {a.N}")
    grid = uniform_coefficients(x)
    phi = a.angles
    start = np.ceil(phi - order / 2.0).astype(int)
    nodes = start[:, None] + np.arange(order)[None, :]
    d = phi[:, None] - nodes
    w = np.ones_like(d)
    for j in range(order):
        for m in range(order):
            if m != j:
                w[:, j] *= d[:, m] / (j - m)
    return np.sum(w * grid[nodes % a.N], axis=1)


def relative_error(approx, exact):
    """``|approx - exact| / |exact|`` in the 2-norm."""
    exact = np.asarray(exact)
    err = np.linalg.norm(np.asarray(approx) - exact)
    ref = np.linalg.norm(exact)
    return float(err / ref) if ref > 0 else float(err)
