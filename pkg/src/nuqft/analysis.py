"""Phase-estimation probability bounds, cost models and the effectiveness measurement.

Chord quantities: with ``eps = theta - y'/2**n`` the readout probability is
``p = a**2 / (2**(2n) b**2)`` where ``a = |e^{2 pi i 2^{n+delta} eps} - 1|``
and ``b = |e^{2 pi i eps} - 1|``. Only ``delta = 0`` describes a register
that exists; for ``delta > 0`` the bounds are evaluated as a model.
"""

from dataclasses import dataclass, field

import numpy as np

from . import engine
from ._parallel import pmap
from .errors import ContractError, OutOfRegimeError
from .transform import deviation, iqft_columns

SLACK = 1e-9


def chord_lengths(epsilon, n, delta=0.0):
    """``a = 2|sin(pi 2^{n+delta} eps)|`` and ``b = 2|sin(pi eps)|``."""
    eps = np.asarray(epsilon, dtype=float)
    if np.any(np.abs(eps) > 0.5):
        raise ContractError("|epsilon| must not exceed 1/2")
    a = 2.0 * np.abs(np.sin(np.pi * 2.0 ** (n + delta) * eps))
    b = 2.0 * np.abs(np.sin(np.pi * eps))
    if a.ndim == 0:
        return float(a), float(b)
    return a, b


def bound_a_lower(epsilon, n, delta=0.0):
    """``4|eps| 2^{n+delta}``, a lower bound on ``a`` while the arc is minor.

    Raises
    ------
    OutOfRegimeError
        If ``|eps| 2^{n+delta} > 1/2``.
    """
    scaled = np.abs(np.asarray(epsilon, dtype=float)) * 2.0 ** (n + delta)
    if np.any(scaled > 0.5):
        raise OutOfRegimeError(
            f"|eps| 2^(n+delta) = {float(np.max(scaled)):.6g} exceeds 1/2 (minor-arc domain)"
        )
    out = 4.0 * scaled
    return float(out) if out.ndim == 0 else out


def bound_b_upper(epsilon):
    """``2 pi |eps|``, an upper bound on ``b``."""
    eps = np.asarray(epsilon, dtype=float)
    if np.any(np.abs(eps) > 0.5):
        raise ContractError("|epsilon| must not exceed 1/2")
    out = 2.0 * np.pi * np.abs(eps)
    return float(out) if out.ndim == 0 else out


def success_lower_bound(delta=0.0):
    """``4 * 4**delta / pi**2``; only ``delta = 0`` is checked against simulation."""
    if delta < 0:
        raise ContractError("delta must be non-negative")
    return 4.0 * 4.0**delta / np.pi**2


def failure_upper_bound(gamma):
    """``1 / (4 gamma**2)`` for outcomes at least ``gamma / 2**n`` away."""
    if gamma <= 0:
        raise ContractError("gamma must be positive")
    return 1.0 / (4.0 * gamma * gamma)


@dataclass(frozen=True)
class BoundsReport:
    """One grid point of a bounds sweep.

    ``p_exact`` is the chord-ratio value for the nearest outcome, ``p_sim``
    the simulated readout probability of the same outcome and ``max_out_p``
    the largest simulated probability over outcomes with
    ``|eps| >= gamma / 2**n``.
    """

    n: int
    theta: float
    best_y: int
    delta: float
    epsilon: float
    a_exact: float
    b_exact: float
    a_lower_bound: float
    b_upper_bound: float
    p_exact: float
    p_sim: float
    p_lower: float
    max_out_p: float
    p_upper: float
    gamma: float
    violations: tuple = field(default=())

    @property
    def ok(self):
        return not self.violations


def _simulated_distribution(thetas, n):
    N = 1 << n
    x = np.arange(N)
    states = np.exp(2j * np.pi * np.outer(x, thetas)) / np.sqrt(N)
    return (np.abs(iqft_columns(states)) ** 2).T


def verify_bounds(n, theta_grid_size, gamma=1.0, chunk=512):
    """Check the success and failure bounds on the grid ``theta = j / grid``.

    Probabilities come from simulating the phase state and its inverse QFT.
    Violations are recorded on each report rather than raised.
    """
    if not 2 <= n <= 12:
        raise ContractError(f"n must lie in [2, 12], got {n}")
    if theta_grid_size < 1:
        raise ContractError("theta_grid_size must be positive")
    N = 1 << n
    p_lo = success_lower_bound(0.0)
    p_hi = failure_upper_bound(gamma)
    thetas = np.arange(theta_grid_size) / theta_grid_size
    y = np.arange(N)
    reports = []
    for start in range(0, theta_grid_size, chunk):
        th = thetas[start : start + chunk]
        probs = _simulated_distribution(th, n)
        eps_all = deviation(th[:, None], y[None, :], n)
        far = np.abs(eps_all) >= gamma / N
        max_out = np.max(np.where(far, probs, 0.0), axis=1)
        best = (np.floor(th * N + 0.5).astype(int)) % N
        for j, theta in enumerate(th):
            yb = int(best[j])
            eps = float(eps_all[j, yb])
            a, b = chord_lengths(eps, n)
            p_exact = 1.0 if b == 0.0 else a * a / (N * N * b * b)
            p_sim = float(probs[j, yb])
            bad = []
            if abs(eps) <= 2.0 ** -(n + 1) and p_sim < p_lo - SLACK:
                bad.append(f"theta={theta!r}: p_best={p_sim!r} < {p_lo!r}")
            if max_out[j] > p_hi + SLACK:
                bad.append(f"theta={theta!r}: p_out={max_out[j]!r} > {p_hi!r}")
            reports.append(
                BoundsReport(
                    n=n,
                    theta=float(theta),
                    best_y=yb,
                    delta=0.0,
                    epsilon=eps,
                    a_exact=a,
                    b_exact=b,
                    a_lower_bound=bound_a_lower(eps, n),
                    b_upper_bound=bound_b_upper(eps),
                    p_exact=float(p_exact),
                    p_sim=p_sim,
                    p_lower=p_lo,
                    max_out_p=float(max_out[j]),
                    p_upper=p_hi,
                    gamma=float(gamma),
                    violations=tuple(bad),
                )
            )
    return reports


def complexity_model(N, K, L, method="svd", lam=1.0):
    """Operation-count models, ``log`` in base 2.

    ``svd``: ``sqrt(2LN) + 4LN log N + sqrt(2LN K/N)``.
    ``interpolation``: ``sqrt(N) + 8N log N + sqrt(4LN K/N) sqrt(lam)``.
    """
    if min(N, K, L) <= 0 or lam <= 0:
        raise ContractError("complexity_model needs positive arguments")
    logN = np.log2(N)
    if method == "svd":
        return float(np.sqrt(2 * L * N) + 4 * L * N * logN + np.sqrt(2 * L * N * (K / N)))
    if method == "interpolation":
        return float(np.sqrt(N) + 8 * N * logN + np.sqrt(4 * L * N * (K / N)) * np.sqrt(lam))
    raise ContractError(f"method must be 'svd' or 'interpolation', got {method!r}")


@dataclass(frozen=True)
class EffectivenessReport:
    lambda_measured: float
    delta_measured: float
    L_list: tuple
    svd_errors: np.ndarray  # (len(L_list), len(seeds))
    baseline_errors: np.ndarray
    N: int
    K: int
    seeds: tuple

    @property
    def win_fraction(self):
        """Share of (L, seed) cells where the SVD error does not exceed the baseline's."""
        return float(np.mean(self.svd_errors <= self.baseline_errors))


def effectiveness(svd_errors, baseline_errors):
    """``(lambda, delta)``: median error ratio baseline/SVD and ``log2 sqrt(lambda)``."""
    s = np.asarray(svd_errors, dtype=float).ravel()
    t = np.asarray(baseline_errors, dtype=float).ravel()
    if s.size == 0 or s.shape != t.shape:
        raise ContractError("error arrays must be non-empty and of equal size")
    tiny = np.finfo(float).tiny
    ratio = np.where((s == 0) & (t == 0), 1.0, t / np.maximum(s, tiny))
    lam = float(np.median(ratio))
    delta = float(np.log2(np.sqrt(lam))) if lam > 0 else float("-inf")
    return lam, delta


def instance(N, K, seed):
    """Seeded sorted angle set and complex input vector."""
    rng = np.random.default_rng(seed)
    a = engine.NonuniformAngleSet.random(N, K, rng)
    x = rng.normal(size=N) + 1j * rng.normal(size=N)
    return a, x


def measure_lambda(N, K, L_list, seeds, training_K=None, basis_seed=0):
    """SVD pipeline against Lagrange interpolation at a matched budget.

    For each retained rank ``L`` the baseline uses ``L`` grid neighbours.
    Errors are relative to the direct sum.
    """
    L_list = tuple(int(L) for L in L_list)
    seeds = tuple(int(s) for s in seeds)
    if not L_list or not seeds:
        raise ContractError("L_list and seeds must be non-empty")
    training_K = 2 * N if training_K is None else training_K
    full = engine.reference_basis(N, training_K, seed=basis_seed, rank=max(L_list))

    def cell(args):
        L, seed = args
        a, x = instance(N, K, seed)
        exact = engine.direct_nudft(x, a)
        e_svd = engine.relative_error(engine.qsvd_nudft(x, a, full.truncate(L)), exact)
        e_base = engine.relative_error(engine.interp_nudft_baseline(x, a, L), exact)
        return e_svd, e_base

    cells = pmap(cell, [(L, s) for L in L_list for s in seeds])
    arr = np.array(cells).reshape(len(L_list), len(seeds), 2)
    lam, delta = effectiveness(arr[..., 0], arr[..., 1])
    return EffectivenessReport(
        lambda_measured=lam,
        delta_measured=delta,
        L_list=L_list,
        svd_errors=arr[..., 0],
        baseline_errors=arr[..., 1],
        N=N,
        K=K,
        seeds=seeds,
    )
