"""Seeded Monte Carlo experiments on random tiled surfaces.

Samples are drawn in fixed-size shards. Shard ``i`` uses the substream
``make_rng(seed, i)`` and shards are merged in index order, so a report
depends only on ``(n, k, samples, seed, shard_size, options)`` and never on
the number of worker threads. Statistics are accumulated as exact integer
sums wherever the sampled quantity is an integer.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import exact, kernels
from .exact import INV_E
from .perm import Permutation, make_rng
from .surface import TiledSurface, genus_statistic, stratum_label

DEFAULT_SHARD = 2000

# named slack constants (added to the 3-SE tolerance where the target is asymptotic)
HOLONOMY_SLACK = 0.005
PD_STICK_SLACK = 0.01
VARIANCE_REL_TOL = 0.15
LCLT_WINDOW_SD = 3.0
LCLT_GAP_TOL = 0.05
STICK_PARTS = 1000
STICK_REMAINDER_TOL = 1e-9
SPOT_CHECK_FRACTION = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int = 2
    samples: int = 10_000
    seed: int = 0
    workers: int = 1
    shard_size: int = DEFAULT_SHARD
    options: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.samples < 1 or self.workers < 1 or self.shard_size < 1:
            raise ValueError("samples, workers and shard_size must be positive")

    def option(self, name, default):
        return self.options.get(name, default)

    def to_dict(self) -> dict:
        # workers is deliberately left out: it must not change the result
        return {
            "n": self.n,
            "k": self.k,
            "samples": self.samples,
            "seed": self.seed,
            "shard_size": self.shard_size,
            "options": {key: self.options[key] for key in sorted(self.options)},
        }


@dataclass
class EstimateReport:
    experiment: str
    config: ExperimentConfig
    mean: float
    variance: float
    se: float
    histogram: dict[int, int]
    theory: dict
    extra: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    def to_dict(self) -> dict:
        """Serializable view; runtime is omitted so reports compare byte-for-byte."""
        return {
            "experiment": self.experiment,
            "config": self.config.to_dict(),
            "mean": self.mean,
            "variance": self.variance,
            "se": self.se,
            "histogram": {str(v): c for v, c in sorted(self.histogram.items())},
            "theory": self.theory,
            "extra": self.extra,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "count"])
        for v, c in sorted(self.histogram.items()):
            w.writerow([v, c])
        return buf.getvalue()


# ---------------------------------------------------------------- sampling


def sample_gluings(rng: np.random.Generator, k: int, batch: int, n: int) -> np.ndarray:
    """Stack of shape ``(k, batch, n)`` with independent uniform rows."""
    base = np.broadcast_to(np.arange(n, dtype=np.int64), (batch, n))
    return np.stack([rng.permuted(base, axis=1) for _ in range(k)])


def sample_alternating(rng: np.random.Generator, batch: int, n: int) -> np.ndarray:
    """Uniform rows of A_n: odd draws are multiplied on the right by (0 1)."""
    rows = sample_gluings(rng, 1, batch, n)[0]
    if n < 2:
        return rows
    odd = (n - kernels.cycle_stats(rows)[:, kernels.NCYCLES]) % 2 == 1
    rows[odd, 0], rows[odd, 1] = rows[odd, 1].copy(), rows[odd, 0].copy()
    return rows


def stick_breaking(rng: np.random.Generator, batch: int, parts: int = STICK_PARTS, top: int = 0):
    """Poisson-Dirichlet(1) sticks, truncated after ``parts`` breaks.

    Returns ``(sticks, remainder)``: each row sorted descending, the leftover
    mass folded into the last break before sorting, and the per-row leftover.
    With ``top > 0`` only the ``top`` largest sticks of each row are returned.
    """
    u = rng.random((batch, parts))
    left = np.cumprod(1.0 - u, axis=1)
    before = np.concatenate([np.ones((batch, 1)), left[:, :-1]], axis=1)
    sticks = u * before
    remainder = left[:, -1].copy()
    sticks[:, -1] += remainder
    if 0 < top < parts:
        sticks = np.partition(sticks, parts - top, axis=1)[:, parts - top :]
    return -np.sort(-sticks, axis=1), remainder


def _shards(cfg: ExperimentConfig) -> list[tuple[int, int]]:
    full, rest = divmod(cfg.samples, cfg.shard_size)
    sizes = [cfg.shard_size] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _run_shards(cfg: ExperimentConfig, work: Callable[[np.random.Generator, int], dict]) -> dict:
    """Apply ``work(rng, batch)`` to each shard and concatenate columns in shard order."""
    jobs = _shards(cfg)

    def one(job):
        idx, size = job
        return work(make_rng(cfg.seed, idx), size)

    if cfg.workers == 1 or len(jobs) == 1:
        parts = [one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(one, jobs))
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


def _int_moments(values: np.ndarray) -> tuple[float, float, float]:
    """Mean, unbiased variance and standard error from exact integer sums."""
    v = values.astype(np.int64)
    N = len(v)
    s1 = int(v.sum())
    s2 = int((v * v).sum())
    mean = Fraction(s1, N)
    var = Fraction(N * s2 - s1 * s1, N * (N - 1)) if N > 1 else Fraction(0)
    return float(mean), float(var), math.sqrt(float(var) / N)


def _float_moments(values: np.ndarray) -> tuple[float, float, float]:
    N = len(values)
    mean = math.fsum(values.tolist()) / N
    var = math.fsum(((values - mean) ** 2).tolist()) / (N - 1) if N > 1 else 0.0
    return mean, var, math.sqrt(var / N)


def _bool_fraction(mask: np.ndarray) -> tuple[float, float]:
    N = len(mask)
    p = int(mask.sum()) / N
    return p, math.sqrt(p * (1 - p) / N)


def _histogram(values: np.ndarray) -> dict[int, int]:
    vals, counts = np.unique(values, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def _comparison(estimate: float, se: float, prediction: float, slack: float = 0.0) -> dict:
    gap = abs(estimate - prediction)
    return {
        "prediction": prediction,
        "gap": gap,
        "gap_over_se": gap / se if se > 0 else (0.0 if gap == 0 else math.inf),
        "slack": slack,
        "within_3se": gap <= 3 * se + slack,
    }


def _spot_check(stack: np.ndarray, k: int, values: np.ndarray, fraction: float):
    """Recompute the genus of a few samples with the reference surface code."""
    if fraction <= 0:
        return
    count = max(1, int(round(stack.shape[1] * fraction)))
    for b in range(count):
        S = TiledSurface(k, tuple(Permutation.from_array(stack[j, b]) for j in range(k)))
        if genus_statistic(S) != int(values[b]):
            raise AssertionError("kernel genus disagrees with the reference surface code")


def _vertex_data(stack: np.ndarray, k: int) -> dict:
    """Vertex count, cone-point count and genus for a stack of gluing tuples."""
    n = stack.shape[2]
    if k % 2 == 0:
        st = kernels.cycle_stats(kernels.word_rows(stack, "c"))
        V = st[:, kernels.NCYCLES]
        regular = st[:, kernels.NFIXED] if k == 2 else 0
        fixed = st[:, kernels.NFIXED]
    else:
        sa = kernels.cycle_stats(kernels.word_rows(stack, "a"))
        sb = kernels.cycle_stats(kernels.word_rows(stack, "b"))
        V = sa[:, kernels.NCYCLES] + sb[:, kernels.NCYCLES]
        regular = sa[:, kernels.NFIXED] + sb[:, kernels.NFIXED] if k == 3 else 0
        fixed = None
    twice = (k - 1) * n - V + 2
    return {"V": V, "cones": V - regular, "genus": twice // 2, "fixed": fixed}


# ---------------------------------------------------------------- experiments


def lclt_gap(histogram_C: dict[int, int], n: int, samples: int, window: float = LCLT_WINDOW_SD) -> dict:
    """Total and maximum absolute gap between the empirical law of C and ``lclt_density``.

    Only values with ``n - l`` even inside ``A +- window * sqrt(B)`` are compared.
    """
    A = exact.harmonic_float(n)
    B = A - exact.harmonic2_float(n)
    lo, hi = A - window * math.sqrt(B), A + window * math.sqrt(B)
    total, worst = 0.0, 0.0
    for l in range(max(1, math.ceil(lo)), math.floor(hi) + 1):
        if (n - l) % 2:
            continue
        d = abs(histogram_C.get(l, 0) / samples - exact.lclt_density(l, n))
        total += d
        worst = max(worst, d)
    return {"window": [lo, hi], "total_gap": total, "max_gap": worst, "tolerance": LCLT_GAP_TOL}


def run_genus(cfg: ExperimentConfig) -> EstimateReport:
    t0 = time.perf_counter()
    frac = cfg.option("spot_check", SPOT_CHECK_FRACTION)

    def work(rng, batch):
        stack = sample_gluings(rng, cfg.k, batch, cfg.n)
        d = _vertex_data(stack, cfg.k)
        _spot_check(stack, cfg.k, d["genus"], frac)
        return {"genus": d["genus"], "V": d["V"]}

    cols = _run_shards(cfg, work)
    mean, var, se = _int_moments(cols["genus"])
    th = exact.theory(cfg.n, cfg.k)
    extra = {
        "variance_prediction": th.var_genus,
        "variance_rel_gap": abs(var - th.var_genus) / th.var_genus,
        "variance_rel_tol": VARIANCE_REL_TOL,
    }
    if cfg.k == 2:
        extra["lclt"] = lclt_gap(_histogram(cols["V"]), cfg.n, cfg.samples)
    return EstimateReport(
        "genus",
        cfg,
        mean,
        var,
        se,
        _histogram(cols["genus"]),
        _comparison(mean, se, th.expected_genus),
        extra,
        time.perf_counter() - t0,
    )


def _require_k2(cfg):
    if cfg.k != 2:
        raise ValueError("this experiment is defined for square-tiled surfaces (k = 2)")


def run_holonomy(cfg: ExperimentConfig) -> EstimateReport:
    _require_k2(cfg)
    t0 = time.perf_counter()
    n = cfg.n

    def work(rng, batch):
        stack = sample_gluings(rng, 2, batch, n)
        c = kernels.word_rows(stack, "c")
        hol = kernels.holonomy_mask(stack[0], stack[1], c)
        st = kernels.cycle_stats(c)
        V = st[:, kernels.NCYCLES]
        g = (n - V + 2) // 2
        s = V - st[:, kernels.NFIXED]
        vis = 4 * g + 2 * s - 4 > n
        return {"hol": hol.astype(np.int64), "vis": vis.astype(np.int64)}

    cols = _run_shards(cfg, work)
    mean, var, se = _int_moments(cols["hol"])
    vis, vis_se = _bool_fraction(cols["vis"])
    return EstimateReport(
        "holonomy",
        cfg,
        mean,
        var,
        se,
        _histogram(cols["hol"]),
        _comparison(mean, se, INV_E, cfg.option("slack", HOLONOMY_SLACK)),
        {"visibility_fraction": vis, "visibility_se": vis_se},
        time.perf_counter() - t0,
    )


def run_strata(cfg: ExperimentConfig) -> EstimateReport:
    """Stratum frequencies; principal and minimal fractions are over all samples.

    A sample counts as principal (minimal) when its surface is connected and
    every cone point has order 1 (there is exactly one cone point).
    """
    _require_k2(cfg)
    t0 = time.perf_counter()

    def work(rng, batch):
        stack = sample_gluings(rng, 2, batch, cfg.n)
        c = kernels.word_rows(stack, "c")
        lengths = kernels.cycle_lengths(c)
        conn = kernels.orbit_counts(stack) == 1
        cones = (lengths >= 2).sum(axis=1)
        twos = (lengths == 2).sum(axis=1)
        principal = conn & (cones >= 1) & (twos == cones)
        minimal = conn & (cones == 1)
        labels = np.array(
            [stratum_label([int(x) - 1 for x in row[row >= 2]]) for row in lengths], dtype=object
        )
        return {
            "label": labels,
            "principal": principal.astype(np.int64),
            "minimal": minimal.astype(np.int64),
            "connected": conn.astype(np.int64),
        }

    jobs_cols = _run_shards(cfg, work)
    table: dict[str, int] = {}
    for label in jobs_cols["label"]:
        table[label] = table.get(label, 0) + 1
    mean, var, se = _int_moments(jobs_cols["principal"])
    mfrac, mse = _bool_fraction(jobs_cols["minimal"])
    cfrac, _ = _bool_fraction(jobs_cols["connected"])
    return EstimateReport(
        "strata",
        cfg,
        mean,
        var,
        se,
        _histogram(jobs_cols["principal"]),
        {},
        {
            "principal_fraction": mean,
            "principal_se": se,
            "minimal_fraction": mfrac,
            "minimal_se": mse,
            "connected_fraction": cfrac,
            "strata": {key: table[key] for key in sorted(table, key=lambda s: (-table[s], s))},
        },
        time.perf_counter() - t0,
    )


def run_cone_points(cfg: ExperimentConfig) -> EstimateReport:
    t0 = time.perf_counter()

    def work(rng, batch):
        return {"cones": _vertex_data(sample_gluings(rng, cfg.k, batch, cfg.n), cfg.k)["cones"]}

    cols = _run_shards(cfg, work)
    mean, var, se = _int_moments(cols["cones"])
    th = exact.theory(cfg.n, cfg.k)
    return EstimateReport(
        "cone_points",
        cfg,
        mean,
        var,
        se,
        _histogram(cols["cones"]),
        _comparison(mean, se, th.expected_cone_points),
        {},
        time.perf_counter() - t0,
    )


def run_fixed_points(cfg: ExperimentConfig) -> EstimateReport:
    if cfg.n <= 4:
        raise ValueError("the closed form 1 + 1/(n-1) holds for n > 4")
    _require_k2(cfg)
    t0 = time.perf_counter()

    def work(rng, batch):
        c = kernels.word_rows(sample_gluings(rng, 2, batch, cfg.n), "c")
        return {"fixed": kernels.cycle_stats(c)[:, kernels.NFIXED]}

    cols = _run_shards(cfg, work)
    mean, var, se = _int_moments(cols["fixed"])
    target = exact.nica_fixed_points(cfg.n)
    extra: dict = {"exact_target": f"{target.numerator}/{target.denominator}"}
    budget = cfg.option("budget", exact.budget_from_env())
    try:
        bf = exact.brute_force_fixed_point_mean(cfg.n, budget)
        extra["brute_force"] = f"{bf.numerator}/{bf.denominator}"
        extra["brute_force_matches"] = bf == target
    except exact.BudgetExceeded:
        extra["brute_force"] = None
    return EstimateReport(
        "fixed_points",
        cfg,
        mean,
        var,
        se,
        _histogram(cols["fixed"]),
        _comparison(mean, se, float(target)),
        extra,
        time.perf_counter() - t0,
    )


def run_transitivity(cfg: ExperimentConfig) -> EstimateReport:
    """Fraction of gluing tuples generating a non-transitive group."""
    t0 = time.perf_counter()

    def work(rng, batch):
        stack = sample_gluings(rng, cfg.k, batch, cfg.n)
        return {"split": (kernels.orbit_counts(stack) > 1).astype(np.int64)}

    cols = _run_shards(cfg, work)
    mean, var, se = _int_moments(cols["split"])
    return EstimateReport(
        "transitivity",
        cfg,
        mean,
        var,
        se,
        _histogram(cols["split"]),
        {"bound": 2 / cfg.n, "within_bound": mean <= 2 / cfg.n},
        {},
        time.perf_counter() - t0,
    )


def run_pd_comparison(cfg: ExperimentConfig) -> EstimateReport:
    """Largest normalized parts of commutator cycles, A_n cycles and PD(1) sticks.

    The headline mean and SE belong to the commutator sample; the other two
    samples and the pairwise comparisons are in ``extra``.
    """
    _require_k2(cfg)
    t0 = time.perf_counter()
    n = cfg.n
    parts = cfg.option("stick_parts", STICK_PARTS)

    def work(rng, batch):
        c = kernels.word_rows(sample_gluings(rng, 2, batch, n), "c")
        sc = kernels.cycle_stats(c)
        sa = kernels.cycle_stats(sample_alternating(rng, batch, n))
        sticks, rem = stick_breaking(rng, batch, parts, top=2)
        return {
            "c1": sc[:, kernels.LARGEST],
            "c2": sc[:, kernels.LARGEST] + sc[:, kernels.SECOND],
            "a1": sa[:, kernels.LARGEST],
            "a2": sa[:, kernels.LARGEST] + sa[:, kernels.SECOND],
            "s1": sticks[:, 0],
            "s2": sticks[:, 0] + sticks[:, 1],
            "rem": rem,
        }

    cols = _run_shards(cfg, work)
    stats = {}
    for name, key in (("commutator", "c"), ("alternating", "a")):
        m1, _, se1 = _int_moments(cols[key + "1"])
        m2, _, se2 = _int_moments(cols[key + "2"])
        stats[name] = {"largest": m1 / n, "largest_se": se1 / n, "two_largest": m2 / n, "two_largest_se": se2 / n}
    m1, _, se1 = _float_moments(cols["s1"])
    m2, _, se2 = _float_moments(cols["s2"])
    stats["sticks"] = {"largest": m1, "largest_se": se1, "two_largest": m2, "two_largest_se": se2}

    slack = cfg.option("stick_slack", PD_STICK_SLACK)
    pairs = {}
    for a, b, sl in (
        ("commutator", "alternating", 0.0),
        ("commutator", "sticks", slack),
        ("alternating", "sticks", slack),
    ):
        gap = abs(stats[a]["largest"] - stats[b]["largest"])
        comb = math.hypot(stats[a]["largest_se"], stats[b]["largest_se"])
        pairs[f"{a}-{b}"] = {"gap": gap, "combined_se": comb, "slack": sl, "within": gap <= 3 * comb + sl}
    c = stats["commutator"]
    return EstimateReport(
        "pd_comparison",
        cfg,
        c["largest"],
        (c["largest_se"] ** 2) * cfg.samples,
        c["largest_se"],
        _histogram(cols["c1"]),
        pairs,
        {"samples": stats, "max_stick_remainder": float(cols["rem"].max()), "stick_parts": parts},
        time.perf_counter() - t0,
    )


EXPERIMENTS = {
    "genus": run_genus,
    "holonomy": run_holonomy,
    "strata": run_strata,
    "cone_points": run_cone_points,
    "fixed_points": run_fixed_points,
    "transitivity": run_transitivity,
    "pd": run_pd_comparison,
}
