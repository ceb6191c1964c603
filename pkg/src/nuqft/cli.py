"""``nuqft`` command line: experiments that write CSV to a file or stdout.

Exit status is 0 on success, 1 for invalid arguments or input files and 2
when a numeric routine fails or a checked bound is violated.
"""

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, bench, engine, frames, search, transform
from .errors import ContractError, DimensionError, InputFormatError, NumericError
from .files import load_angles, load_vector

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    subcommand: str
    n: int = None
    N: int = None
    K: int = None
    L: list = field(default_factory=list)
    threshold: float = 1e-8
    seeds: list = field(default_factory=list)
    gamma: float = 1.0
    angles_path: str = None
    vector_path: str = None
    out: str = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        for name in ("n", "N", "K"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ContractError(f"--{name} must be positive, got {v}")
        if self.N is not None:
            transform.n_qubits_for(self.N)
        if self.subcommand in ("nuqft", "lambda", "frames", "qft") and not self.seeds:
            raise ContractError("at least one seed is required")
        return self


def _write(config, header, rows):
    if config.out:
        with open(config.out, "w", newline="", encoding="utf-8") as fh:
            bench.write_csv(fh, header, rows)
    else:
        bench.write_csv(sys.stdout, header, rows)


def _run_qft(c):
    n = c.n if c.n is not None else 3
    if c.vector_path:
        x = load_vector(c.vector_path)
        n = transform.n_qubits_for(x.size)
    else:
        x = transform.RegisterState.random(n, np.random.default_rng(c.seeds[0])).amplitudes
    y = transform.iqft_columns(x) if c.extra.get("inverse") else transform.qft_columns(x)
    rows = [[k, x[k].real, x[k].imag, y[k].real, y[k].imag] for k in range(x.size)]
    _write(c, ["index", "in_re", "in_im", "out_re", "out_im"], rows)
    return EXIT_OK


def _angles_and_vector(c):
    N = c.N or 64
    rng = np.random.default_rng(c.seeds[0])
    if c.angles_path:
        a = load_angles(c.angles_path, N)
    else:
        a = engine.NonuniformAngleSet.random(N, c.K or 2 * N, rng)
    if c.vector_path:
        x = load_vector(c.vector_path)
        if x.size != N:
            raise ContractError(f"vector has {x.size} entries, expected N = {N}")
    else:
        x = rng.normal(size=N) + 1j * rng.normal(size=N)
    return a, x


def _run_nuqft(c):
    a, x = _angles_and_vector(c)
    N = a.N
    method = c.extra.get("method", "svd")
    training_K = c.extra.get("training_K") or 2 * N
    ranks = c.L or [None]
    outputs = []
    for L in ranks:
        if method == "svd":
            b = engine.reference_basis(N, training_K, c.threshold, seed=c.extra.get("basis_seed", 0), rank=L)
            interp = engine.precompute_interpolators(b, a, c.extra.get("odd_mode", "conjugate"))
            X = engine.qsvd_nudft(x, a, b, interp)
            L = b.L
        elif method == "interpolation":
            L = L or 8
            X = engine.interp_nudft_baseline(x, a, L)
        else:
            X, L = engine.direct_nudft(x, a), N
        outputs.append((L, X))
    if c.extra.get("compare_direct"):
        exact = engine.direct_nudft(x, a)
        rows = [[method, N, a.K, L, engine.relative_error(X, exact)] for L, X in outputs]
        _write(c, ["method", "N", "K", "L", "rel_err"], rows)
    else:
        part = a.partition
        rows = [
            [L, k, a.angles[k], part[k], X[k].real, X[k].imag]
            for L, X in outputs
            for k in range(a.K)
        ]
        _write(c, ["L", "k", "angle", "interval", "re", "im"], rows)
    return EXIT_OK


def _run_bounds(c):
    reps = analysis.verify_bounds(c.n if c.n is not None else 8, c.extra.get("grid", 1024), c.gamma)
    rows = [[r.theta, r.best_y, r.p_sim, r.p_lower, r.max_out_p, r.p_upper] for r in reps]
    _write(c, ["theta", "best_y", "p_best", "p_lower", "max_out_p", "p_upper"], rows)
    bad = [v for r in reps for v in r.violations]
    if bad:
        print(f"{len(bad)} bound violations; first: {bad[0]}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _run_grover(c):
    n = c.n if c.n is not None else 10
    marked = c.extra.get("marked") or [0]
    p = search.SearchProblem(1 << n, frozenset(marked))
    idx, prob, iters = search.grover_search(p)
    _write(c, ["index", "probability", "iterations", "N", "M"], [[idx, prob, iters, p.N, p.M]])
    return EXIT_OK


def _run_frames(c):
    k = c.extra.get("k", 3)
    n = c.extra.get("vectors", 5)
    if k > n:
        raise ContractError(f"--k {k} exceeds the number of vectors {n}")
    rows = []
    for s in c.seeds:
        rng = np.random.default_rng(s)
        if c.extra.get("kind", "unitary") == "unitary":
            B = bench.random_unitary(n, rng)[:k]
        else:
            B = rng.normal(size=(k, n)) + 1j * rng.normal(size=(k, n))
        f = frames.FrameSet(B, np.eye(k))
        fa = frames.frame_bounds(f)
        Bt = frames.orthogonalize_frame(B)
        iso = float(np.max(np.abs(Bt.conj().T @ Bt - np.eye(n))))
        rows.append([s, k, n, fa.alpha, fa.beta, fa.redundancy, fa.tight, iso])
    _write(c, ["seed", "k", "n", "alpha", "beta", "redundancy", "tight", "isometry_err"], rows)
    return EXIT_OK


def _run_lambda(c):
    N = c.N or 64
    rep = analysis.measure_lambda(N, c.K or 2 * N, c.L or [4, 8, 16], c.seeds)
    rows = [
        [L, s, rep.svd_errors[i, j], rep.baseline_errors[i, j], rep.lambda_measured, rep.delta_measured]
        for i, L in enumerate(rep.L_list)
        for j, s in enumerate(rep.seeds)
    ]
    _write(c, ["L", "seed", "svd_err", "baseline_err", "lambda", "delta"], rows)
    return EXIT_OK


def _run_bench(c):
    out = c.out or "bench_out"
    results = bench.run_bench(c.seeds[0] if c.seeds else 7, out)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} {r.metric}={bench.format_value(r.value)} {r.note}".rstrip(), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


RUNNERS = {
    "qft": _run_qft,
    "nuqft": _run_nuqft,
    "bounds": _run_bounds,
    "grover": _run_grover,
    "frames": _run_frames,
    "lambda": _run_lambda,
    "bench": _run_bench,
}


def run(config):
    """Execute ``config`` and return the exit status."""
    try:
        return RUNNERS[config.validate().subcommand](config)
    except (InputFormatError, ContractError, DimensionError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, AssertionError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def build_parser():
    p = _Parser(prog="nuqft", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, seed=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        if seed:
            sp.add_argument("--seed", type=int, nargs="+", default=[0], help="one or more seeds")

    sp = sub.add_parser("qft", help="QFT of a register state")
    sp.add_argument("--n", type=int)
    sp.add_argument("--vector", help="file of 're,im' lines")
    sp.add_argument("--inverse", action="store_true")
    common(sp)

    sp = sub.add_parser("nuqft", help="nonuniform transform by SVD, interpolation or direct sum")
    sp.add_argument("--N", type=int, default=64)
    sp.add_argument("--K", type=int)
    sp.add_argument("--method", choices=["svd", "interpolation", "direct"], default="svd")
    sp.add_argument("--L", type=int, nargs="+", help="retained rank(s) or interpolation order(s)")
    sp.add_argument("--threshold", type=float, default=1e-8)
    sp.add_argument("--training-K", type=int)
    sp.add_argument("--basis-seed", type=int, default=0)
    sp.add_argument("--odd-mode", choices=["conjugate", "reverse"], default="conjugate")
    sp.add_argument("--angles", help="file of angles in [0, N)")
    sp.add_argument("--vector", help="file of 're,im' lines")
    sp.add_argument("--compare-direct", action="store_true")
    common(sp)

    sp = sub.add_parser("bounds", help="verify the phase-estimation bounds on a theta grid")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--grid", type=int, default=1024)
    sp.add_argument("--gamma", type=float, default=1.0)
    common(sp, seed=False)

    sp = sub.add_parser("grover", help="Grover search on 2**n items")
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--marked", type=int, nargs="+", default=[0])
    common(sp, seed=False)

    sp = sub.add_parser("frames", help="frame bounds and orthogonal completion of random frames")
    sp.add_argument("--k", type=int, default=3, help="ambient dimension")
    sp.add_argument("--vectors", type=int, default=5, help="number of frame vectors")
    sp.add_argument("--kind", choices=["unitary", "gaussian"], default="unitary")
    common(sp)

    sp = sub.add_parser("lambda", help="SVD pipeline against interpolation at matched budget")
    sp.add_argument("--N", type=int, default=64)
    sp.add_argument("--K", type=int)
    sp.add_argument("--L", type=int, nargs="+", default=[4, 8, 16])
    common(sp)

    sp = sub.add_parser("bench", help="full acceptance sweep, one CSV per experiment")
    sp.add_argument("--out", help="output directory (default: bench_out)")
    sp.add_argument("--seed", type=int, nargs="+", default=[7])
    return p


def config_from_args(ns):
    extra = {
        k: getattr(ns, k)
        for k in ("inverse", "method", "training_K", "basis_seed", "odd_mode", "compare_direct",
                  "grid", "marked", "k", "vectors", "kind")
        if hasattr(ns, k)
    }
    return RunConfig(
        subcommand=ns.subcommand,
        n=getattr(ns, "n", None),
        N=getattr(ns, "N", None),
        K=getattr(ns, "K", None),
        L=list(getattr(ns, "L", None) or []),
        threshold=getattr(ns, "threshold", 1e-8),
        seeds=list(getattr(ns, "seed", None) or []),
        gamma=getattr(ns, "gamma", 1.0),
        angles_path=getattr(ns, "angles", None),
        vector_path=getattr(ns, "vector", None),
        out=ns.out,
        extra=extra,
    )


def main(argv=None):
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code = run(config_from_args(ns))
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
