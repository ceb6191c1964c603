"""Uniform QFT and inverse QFT on register states, phase states, measurement.

Sign convention: the forward transform uses ``exp(+2 pi i x y / N)`` and the
inverse the negative sign. Everything else in the package inherits this.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractError, DimensionError
from .linalg import as_vector

NORM_TOL = 1e-10


def n_qubits_for(length):
    """log2 of ``length``; raises unless ``length`` is a power of two."""
    length = int(length)
    if length < 1 or length & (length - 1):
        raise DimensionError(f"length {length} is not a power of two")
    return length.bit_length() - 1


@lru_cache(maxsize=32)
def _bit_reversal(n):
    idx = np.arange(1 << n)
    rev = np.zeros_like(idx)
    for b in range(n):
        rev |= ((idx >> b) & 1) << (n - 1 - b)
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=64)
def _twiddles(m, sign):
    w = np.exp(sign * 2j * np.pi * np.arange(m // 2) / m)
    w.setflags(write=False)
    return w


def _radix2(a, sign):
    """Unitary radix-2 DIT transform along axis 0 with kernel ``exp(sign 2 pi i x y/N)``."""
    a = np.asarray(a, dtype=complex)
    N = a.shape[0]
    n = n_qubits_for(N)
    rest = a.shape[1:]
    x = a[_bit_reversal(n)].reshape(N, -1)
    m = 2
    while m <= N:
        half = m // 2
        blocks = x.reshape(N // m, m, -1)
        even = blocks[:, :half]
        odd = blocks[:, half:] * _twiddles(m, sign)[None, :, None]
        x = np.concatenate((even + odd, even - odd), axis=1).reshape(N, -1)
        m *= 2
    return (x / np.sqrt(N)).reshape((N,) + rest)


def qft_columns(a):
    """Forward QFT of a vector, or of every column of a matrix (axis 0)."""
    return _radix2(a, +1)


def iqft_columns(a):
    """Inverse QFT of a vector, or of every column of a matrix (axis 0)."""
    return _radix2(a, -1)


def qft_matrix(n, inverse=False):
    """Dense ``2**n x 2**n`` matrix with entries ``exp(+-2 pi i x y/N)/sqrt(N)``."""
    N = 1 << n
    k = np.arange(N)
    sign = -1.0 if inverse else 1.0
    return np.exp(sign * 2j * np.pi * (np.outer(k, k) % N) / N) / np.sqrt(N)


@dataclass(frozen=True)
class RegisterState:
    """Normalized amplitude vector of an n-qubit register."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = as_vector(self.amplitudes, "amplitudes")
        n_qubits_for(amps.size)
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ContractError(f"register state is not normalized (sum |a|^2 = {norm2!r})")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self):
        return n_qubits_for(self.amplitudes.size)

    @property
    def N(self):
        return self.amplitudes.size

    @classmethod
    def from_vector(cls, v):
        """Normalize ``v`` and wrap it."""
        v = as_vector(v)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ContractError("cannot normalize the zero vector")
        return cls(v / norm)

    @classmethod
    def basis(cls, n, k):
        v = np.zeros(1 << n, dtype=complex)
        v[k] = 1.0
        return cls(v)

    @classmethod
    def uniform(cls, n):
        N = 1 << n
        return cls(np.full(N, 1.0 / np.sqrt(N), dtype=complex))

    @classmethod
    def random(cls, n, rng):
        N = 1 << n
        return cls.from_vector(rng.normal(size=N) + 1j * rng.normal(size=N))


@dataclass(frozen=True)
class PhaseParameter:
    """Phase ``theta`` in [0, 1) read out on an ``n_qubits`` register."""

    theta: float
    n_qubits: int

    def __post_init__(self):
        if not 0.0 <= self.theta < 1.0:
            raise ContractError(f"theta must lie in [0, 1), got {self.theta!r}")
        if self.n_qubits < 0:
            raise ContractError("n_qubits must be non-negative")

    @property
    def nearest(self):
        """Grid index ``y'`` closest to ``theta * 2**n`` (cyclic)."""
        N = 1 << self.n_qubits
        return int(np.floor(self.theta * N + 0.5)) % N

    @property
    def epsilon(self):
        """Signed deviation ``theta - y'/2**n`` for the nearest ``y'``."""
        return deviation(self.theta, self.nearest, self.n_qubits)


def deviation(theta, y_prime, n):
    """``theta - y'/2**n`` wrapped into [-1/2, 1/2)."""
    d = np.asarray(theta) - np.asarray(y_prime) / float(1 << n)
    return (d + 0.5) % 1.0 - 0.5


def qft(state):
    return RegisterState(qft_columns(state.amplitudes))


def iqft(state):
    return RegisterState(iqft_columns(state.amplitudes))


def phase_state(p):
    """State with amplitudes ``exp(2 pi i x theta)/sqrt(N)``."""
    N = 1 << p.n_qubits
    x = np.arange(N)
    return RegisterState(np.exp(2j * np.pi * x * p.theta) / np.sqrt(N))


def measure_distribution(state):
    """Exact outcome probabilities ``|amplitude|^2``."""
    a = state.amplitudes if isinstance(state, RegisterState) else np.asarray(state)
    return np.abs(a) ** 2


def phase_estimate_distribution(theta, n):
    """Closed-form readout probabilities for every ``y'``.

    ``theta`` may be an array; the result then has shape ``theta.shape + (N,)``.
    Uses the geometric-sum ratio with the ``e^{i 2 pi eps} = 1`` limit.
    """
    N = 1 << n
    theta = np.asarray(theta, dtype=float)[..., None]
    y = np.arange(N)
    num = np.sin(np.pi * (N * theta - y)) ** 2
    den = np.sin(np.pi * (theta - y / N)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        p = num / (N * N * den)
    return np.where(den == 0.0, 1.0, p)


def phase_estimate_prob(p, y_prime):
    N = 1 << p.n_qubits
    if not 0 <= y_prime < N:
        raise ContractError(f"y' must lie in [0, {N}), got {y_prime}")
    return float(phase_estimate_distribution(p.theta, p.n_qubits)[y_prime])
