"""Acceptance sweep: one experiment per criterion, each producing CSV rows.

All randomness comes from ``numpy.random.SeedSequence`` children of the run
seed, so a given seed yields byte-identical output. Timings are not
recorded for the same reason.
"""

import csv
import io
import os
from dataclasses import dataclass, field

import numpy as np

from . import analysis, engine, frames, search, transform
from ._parallel import pmap

EXPERIMENTS = (
    "qft_roundtrip",
    "phase_exact",
    "phase_closed_form",
    "phase_bounds",
    "chord_bounds",
    "edge_identity",
    "full_rank",
    "truncation",
    "svd_vs_baseline",
    "grover",
    "frames",
    "odd_alignment",
)

# acceptance criterion number of each experiment; odd_alignment is a report
CRITERION = {name: i + 1 for i, name in enumerate(EXPERIMENTS[:11])}


@dataclass
class Experiment:
    name: str
    passed: bool
    metric: str
    value: float
    header: list
    rows: list = field(default_factory=list)
    note: str = ""


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(stream, header, rows):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])


def csv_text(header, rows):
    buf = io.StringIO()
    write_csv(buf, header, rows)
    return buf.getvalue()


def child_seeds(seed, tag, count):
    """``count`` integer seeds for experiment ``tag``, derived from ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tag),))
    return [int(s) for s in ss.generate_state(count, dtype=np.uint32)]


def _qft_roundtrip(seed):
    rows, worst_rt, worst_norm, worst_mat = [], 0.0, 0.0, 0.0
    for n in range(1, 11):
        rng = np.random.default_rng(child_seeds(seed, 1, 10)[n - 1])
        N = 1 << n
        X = rng.normal(size=(N, 50)) + 1j * rng.normal(size=(N, 50))
        X /= np.linalg.norm(X, axis=0)
        Y = transform.qft_columns(X)
        rt = float(np.max(np.linalg.norm(transform.iqft_columns(Y) - X, axis=0)))
        nd = float(np.max(np.abs(np.linalg.norm(Y, axis=0) - 1.0)))
        md = float("nan")
        if n <= 8:
            md = max(
                float(np.max(np.abs(Y - transform.qft_matrix(n) @ X))),
                float(np.max(np.abs(transform.iqft_columns(X) - transform.qft_matrix(n, True) @ X))),
            )
            worst_mat = max(worst_mat, md)
        worst_rt, worst_norm = max(worst_rt, rt), max(worst_norm, nd)
        rows.append([n, rt, nd, md])
    ok = worst_rt <= 1e-10 and worst_norm <= 1e-10 and worst_mat <= 1e-12
    return Experiment(
        "qft_roundtrip", ok, "max_matrix_dev", worst_mat,
        ["n", "max_roundtrip_err", "max_norm_dev", "max_matrix_dev"], rows,
    )


def _simulated(theta, n):
    return transform.measure_distribution(
        transform.iqft(transform.phase_state(transform.PhaseParameter(theta, n)))
    )


def _phase_exact(seed):
    rows, worst = [], 0.0
    for n in range(2, 9):
        N = 1 << n
        dev_peak, dev_off = 0.0, 0.0
        for y in range(N):
            p = _simulated(y / N, n)
            dev_peak = max(dev_peak, abs(p[y] - 1.0))
            dev_off = max(dev_off, float(np.max(np.delete(p, y))))
        worst = max(worst, dev_peak, dev_off)
        rows.append([n, dev_peak, dev_off])
    return Experiment(
        "phase_exact", worst <= 1e-12, "max_dev", worst,
        ["n", "max_peak_dev", "max_off_peak_p"], rows,
    )


def _phase_closed_form(seed):
    n, grid = 6, 512
    thetas = np.arange(grid) / grid
    closed = transform.phase_estimate_distribution(thetas, n)
    rows, worst = [], 0.0
    for j, th in enumerate(thetas):
        d = float(np.max(np.abs(closed[j] - _simulated(th, n))))
        worst = max(worst, d)
        rows.append([th, d])
    return Experiment("phase_closed_form", worst <= 1e-9, "max_abs_diff", worst, ["theta", "max_abs_diff"], rows)


def _phase_bounds(seed):
    rows, ok = [], True
    worst_margin = np.inf
    for gamma in (1.0, float(np.sqrt(1.4))):
        for n in range(3, 11):
            reps = analysis.verify_bounds(n, 4096, gamma)
            p_best = min(r.p_sim for r in reps)
            p_out = max(r.max_out_p for r in reps)
            bad = sum(len(r.violations) for r in reps)
            ok = ok and bad == 0
            worst_margin = min(
                worst_margin, p_best - reps[0].p_lower, reps[0].p_upper - p_out
            )
            rows.append([n, gamma, p_best, reps[0].p_lower, p_out, reps[0].p_upper, bad])
    return Experiment(
        "phase_bounds", ok, "min_margin", float(worst_margin),
        ["n", "gamma", "min_p_best", "p_lower", "max_out_p", "p_upper", "violations"], rows,
    )


def _chord_bounds(seed):
    rows, total = [], 0
    eps_b = np.linspace(-0.5, 0.5, 10_000)
    _, b = analysis.chord_lengths(eps_b, 0)
    bad_b = int(np.count_nonzero(b > analysis.bound_b_upper(eps_b)))
    for n in range(1, 11):
        lim = 2.0 ** -(n + 1)
        eps = np.linspace(-lim, lim, 10_000)
        a, _ = analysis.chord_lengths(eps, n)
        lower = analysis.bound_a_lower(eps, n)
        bad_a = int(np.count_nonzero(lower > a))
        total += bad_a
        rows.append([n, bad_a, float(np.min(a - lower)), bad_b])
    total += bad_b
    return Experiment(
        "chord_bounds", total == 0, "violations", float(total),
        ["n", "a_violations", "min_a_margin", "b_violations"], rows,
    )


def _edge_identity(seed):
    rows, worst = [], 0.0
    for s in child_seeds(seed, 6, 100):
        a, x = analysis.instance(64, 128, s)
        m = engine.build_exponential_matrix(a)
        ref = m.matrix.conj().T @ x
        d = max(
            float(np.max(np.abs(engine.factor_edge(m, part).apply_adjoint(x) - ref)))
            for part in ("real", "imag")
        )
        worst = max(worst, d)
        rows.append([s, d])
    return Experiment("edge_identity", worst <= 1e-12, "max_abs_diff", worst, ["seed", "max_abs_diff"], rows)


def _full_rank(seed):
    rows, worst = [], 0.0
    for N in (16, 32, 64):
        b = engine.reference_basis(N, 2 * N, seed=child_seeds(seed, 7, 1)[0] % 2**16, rank=N)

        def one(s, N=N, b=b):
            a, x = analysis.instance(N, 2 * N, s)
            return engine.relative_error(engine.qsvd_nudft(x, a, b), engine.direct_nudft(x, a))

        seeds = child_seeds(seed, 70 + N, 20)
        for s, e in zip(seeds, pmap(one, seeds)):
            worst = max(worst, e)
            rows.append([N, s, e])
    return Experiment("full_rank", worst <= 1e-9, "max_rel_err", worst, ["N", "seed", "rel_err"], rows)


TRUNCATION_L = (2, 4, 8, 16, 32)


def truncation_sweep(seed, N=64, K=128, L_list=TRUNCATION_L, count=20):
    """Per-(L, seed) errors and the reference singular values."""
    full = engine.reference_basis(N, 2 * N, seed=child_seeds(seed, 8, 1)[0] % 2**16, rank=max(L_list))
    seeds = child_seeds(seed, 80, count)

    def one(args):
        L, s = args
        a, x = analysis.instance(N, K, s)
        return engine.relative_error(engine.qsvd_nudft(x, a, full.truncate(L)), engine.direct_nudft(x, a))

    errs = np.array(pmap(one, [(L, s) for L in L_list for s in seeds])).reshape(len(L_list), count)
    return errs, seeds, full.singular_values


def _truncation(seed):
    N = 64
    errs, seeds, sv = truncation_sweep(seed, N=N)
    med = np.median(errs, axis=1)
    monotone = bool(np.all(np.diff(med) <= 0))
    drop = float(med[0] / med[-1])
    m = min(N, 40)
    decay = float(sv[0] / sv[m - 1]) if sv[m - 1] > 0 else float("inf")
    ok = monotone and drop >= 10.0 and decay >= 1e6
    rows = [[L, float(med[i]), float(np.max(errs[i]))] for i, L in enumerate(TRUNCATION_L)]
    note = (
        f"monotone={monotone} drop={format_value(drop)} sigma_decay={format_value(decay)}"
    )
    return Experiment(
        "truncation", ok, "drop_L2_to_L32", drop, ["L", "median_rel_err", "max_rel_err"], rows, note
    )


def _svd_vs_baseline(seed):
    rep = analysis.measure_lambda(64, 128, (4, 8, 16), child_seeds(seed, 9, 20))
    rows = [
        [L, s, rep.svd_errors[i, j], rep.baseline_errors[i, j]]
        for i, L in enumerate(rep.L_list)
        for j, s in enumerate(rep.seeds)
    ]
    note = f"lambda={format_value(rep.lambda_measured)} delta={format_value(rep.delta_measured)}"
    return Experiment(
        "svd_vs_baseline", rep.win_fraction >= 0.9, "win_fraction", rep.win_fraction,
        ["L", "seed", "svd_err", "baseline_err"], rows, note,
    )


def _grover(seed):
    rows, ok = [], True
    rng = np.random.default_rng(child_seeds(seed, 10, 1)[0])
    for k in range(2, 11):
        N = 1 << k
        p = search.SearchProblem(N, frozenset({int(rng.integers(N))}))
        traj = search.grover_trajectory(p)
        dev = max(
            abs(search.marked_probability(s, p) - search.predicted_marked_probability(N, 1, i))
            for i, s in enumerate(traj)
        )
        idx, prob, iters = search.grover_search(p)
        good = prob >= 0.8 and dev <= 1e-10 and idx in p.marked
        if N == 4:
            good = good and abs(prob - 1.0) <= 1e-12
        ok = ok and good
        rows.append([N, iters, prob, dev])
    return Experiment("grover", ok, "min_probability", min(r[2] for r in rows),
                      ["N", "iterations", "marked_probability", "max_trajectory_dev"], rows)


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _frames(seed):
    rows, ok = [], True
    rng = np.random.default_rng(child_seeds(seed, 11, 1)[0])
    for t in range(50):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n + 1)) if t % 2 == 0 else n
        if t % 5 == 4:
            B = rng.normal(size=(k, n)) + 1j * rng.normal(size=(k, n))
            target = frames.partial_isometry(B)
            beta_err = float("nan")
        else:
            B = random_unitary(n, rng)[:k]
            target = frames._embed(B)
            fa = frames.frame_bounds(frames.FrameSet(B, np.eye(k)))
            beta_err = max(abs(fa.beta - 1.0), abs(fa.alpha - 1.0))
            ok = ok and fa.tight and beta_err <= 1e-9
        Bt = frames.orthogonalize_frame(B)
        iso = float(np.max(np.abs(Bt.conj().T @ Bt - np.eye(n))))
        P = frames.range_projector(B)
        proj = float(np.max(np.abs(P @ Bt - target)))
        ok = ok and iso <= 1e-9 and proj <= 1e-9
        rows.append([k, n, "tight" if t % 5 != 4 else "gaussian", beta_err, iso, proj])
    return Experiment("frames", ok, "rows", float(len(rows)),
                      ["k", "n", "kind", "beta_err", "isometry_err", "projection_err"], rows)


def _odd_alignment(seed):
    """Conjugate-before-iqft against index-reversal-after-iqft for odd intervals."""
    rows, worst = [], 0.0
    b = engine.reference_basis(64, 128, seed=child_seeds(seed, 12, 1)[0] % 2**16, rank=16)
    for s in child_seeds(seed, 120, 5):
        a, x = analysis.instance(64, 128, s)
        pc = engine.precompute_interpolators(b, a, "conjugate")
        pr = engine.precompute_interpolators(b, a, "reverse")
        d = max(float(np.max(np.abs(pc.P[l] - pr.P[l]))) for l in pc.P)
        exact = engine.direct_nudft(x, a)
        ec = engine.relative_error(engine.qsvd_nudft(x, a, b, pc), exact)
        er = engine.relative_error(engine.qsvd_nudft(x, a, b, pr), exact)
        worst = max(worst, d)
        rows.append([s, d, ec, er])
    return Experiment("odd_alignment", worst <= 1e-12, "max_P_diff", worst,
                      ["seed", "max_P_diff", "rel_err_conjugate", "rel_err_reverse"], rows)


RUNNERS = {
    "qft_roundtrip": _qft_roundtrip,
    "phase_exact": _phase_exact,
    "phase_closed_form": _phase_closed_form,
    "phase_bounds": _phase_bounds,
    "chord_bounds": _chord_bounds,
    "edge_identity": _edge_identity,
    "full_rank": _full_rank,
    "truncation": _truncation,
    "svd_vs_baseline": _svd_vs_baseline,
    "grover": _grover,
    "frames": _frames,
    "odd_alignment": _odd_alignment,
}


def run_experiment(name, seed):
    return RUNNERS[name](seed)


def run_bench(seed, out_dir, names=EXPERIMENTS):
    """Run the experiments, write ``<name>.csv`` and ``summary.csv``; return results."""
    os.makedirs(out_dir, exist_ok=True)
    results = [run_experiment(name, seed) for name in names]
    for r in results:
        with open(os.path.join(out_dir, f"{r.name}.csv"), "w", newline="", encoding="utf-8") as fh:
            write_csv(fh, r.header, r.rows)
    summary = [[CRITERION.get(r.name, ""), r.name, r.passed, r.metric, r.value, r.note] for r in results]
    with open(os.path.join(out_dir, "summary.csv"), "w", newline="", encoding="utf-8") as fh:
        write_csv(fh, ["criterion", "experiment", "passed", "metric", "value", "note"], summary)
    return results
