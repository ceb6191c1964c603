"""Exact state-vector simulation of amplitude amplification (Grover search).

The loading, matching and judging oracles are modeled by their net effect:
a phase flip on every index whose record satisfies a predicate.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .linalg import as_vector
from .transform import n_qubits_for

NORM_TOL = 1e-10


@dataclass(frozen=True)
class SearchProblem:
    """``N`` items, ``marked`` a non-empty proper subset of ``range(N)``."""

    N: int
    marked: frozenset

    def __post_init__(self):
        n_qubits_for(self.N)
        marked = frozenset(int(i) for i in self.marked)
        if not marked:
            raise ContractError("at least one item must be marked")
        if len(marked) >= self.N:
            raise ContractError(f"M = {len(marked)} must be smaller than N = {self.N}")
        bad = [i for i in marked if not 0 <= i < self.N]
        if bad:
            raise ContractError(f"marked indices outside [0, {self.N}): {sorted(bad)}")
        object.__setattr__(self, "marked", marked)

    @classmethod
    def from_predicate(cls, records, predicate):
        """Mark ``i`` wherever ``predicate(records[i])`` holds.

        E.g. ``from_predicate(np.abs(X), lambda v: v > 0.5)`` marks the
        coefficients above a magnitude threshold.
        """
        records = list(records)
        return cls(len(records), frozenset(i for i, r in enumerate(records) if predicate(r)))

    @property
    def M(self):
        return len(self.marked)

    @property
    def mask(self):
        m = np.zeros(self.N, dtype=bool)
        m[list(self.marked)] = True
        return m


@dataclass(frozen=True)
class SearchState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = as_vector(self.amplitudes, "amplitudes").copy()
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ContractError(f"search state is not normalized (sum |a|^2 = {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def uniform(cls, N):
        return cls(np.full(N, 1.0 / np.sqrt(N), dtype=complex))

    @property
    def N(self):
        return self.amplitudes.size

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


def apply_oracle(amps, p):
    """Phase flip on the marked indices."""
    return np.where(p.mask, -amps, amps)


def diffusion(amps):
    """Reflection ``2|psi><psi| - I`` about the uniform superposition."""
    return 2.0 * np.mean(amps) - amps


def grover_iteration(s, p):
    if s.N != p.N:
        raise ContractError(f"state has {s.N} amplitudes, problem has N = {p.N}")
    return SearchState(diffusion(apply_oracle(s.amplitudes, p)))


def rotation_angle(N, M):
    """``asin(sqrt(M/N))``."""
    return float(np.arcsin(np.sqrt(M / N)))


def optimal_iterations(N, M):
    if not 1 <= M < N:
        raise ContractError(f"need 1 <= M < N, got M = {M}, N = {N}")
    k = int(np.round(np.pi / (4.0 * rotation_angle(N, M)) - 0.5))
    return max(k, 1)


def marked_probability(s, p):
    return float(np.sum(s.probabilities()[p.mask]))


def predicted_marked_probability(N, M, k):
    """``sin^2((2k + 1) theta)`` after ``k`` iterations."""
    return float(np.sin((2 * k + 1) * rotation_angle(N, M)) ** 2)


def grover_trajectory(p, iterations=None):
    """States after 0, 1, ..., ``iterations`` applications."""
    iterations = optimal_iterations(p.N, p.M) if iterations is None else iterations
    s = SearchState.uniform(p.N)
    out = [s]
    for _ in range(iterations):
        s = grover_iteration(s, p)
        out.append(s)
    return out


def grover_search(p):
    """Run the optimal number of iterations from the uniform state.

    Returns
    -------
    (index, probability, iterations)
        The most likely index, the total probability of the marked set and
        the iteration count. ``N = 2`` is a degenerate regime where the
        single iteration leaves the probability at 1/2.
    """
    k = optimal_iterations(p.N, p.M)
    s = grover_trajectory(p, k)[-1]
    probs = s.probabilities()
    return int(np.argmax(probs)), marked_probability(s, p), k
