import json
import math

import numpy as np
import pytest

from tiledsurf import exact, kernels, mc
from tiledsurf.mc import ExperimentConfig
from tiledsurf.perm import make_rng


def cfg(**kw):
    base = dict(n=30, k=2, samples=4000, seed=7, shard_size=900)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(n=0)
    with pytest.raises(ValueError):
        ExperimentConfig(n=5, k=1)
    with pytest.raises(ValueError):
        ExperimentConfig(n=5, samples=0)
    assert "workers" not in cfg(workers=3).to_dict()


@pytest.mark.parametrize("name", sorted(mc.EXPERIMENTS))
def test_report_invariants(name):
    r = mc.EXPERIMENTS[name](cfg())
    assert sum(r.histogram.values()) == 4000
    if name != "pd":
        assert r.se == pytest.approx(math.sqrt(r.variance / 4000))
    d = json.loads(r.to_json())
    assert "runtime_s" not in d and d["experiment"] == r.experiment
    lines = r.to_csv().splitlines()
    assert lines[0] == "value,count" and len(lines) == len(r.histogram) + 1


@pytest.mark.parametrize("name", ["genus", "strata", "pd", "holonomy"])
def test_reports_independent_of_workers(name):
    outs = {w: mc.EXPERIMENTS[name](cfg(workers=w)).to_json() for w in (1, 4, 8)}
    assert outs[1] == outs[4] == outs[8]


def test_seed_controls_output():
    a = mc.run_genus(cfg(seed=1)).to_json()
    assert a == mc.run_genus(cfg(seed=1)).to_json()
    assert a != mc.run_genus(cfg(seed=2)).to_json()


def test_sample_alternating_is_even_and_uniform():
    rows = mc.sample_alternating(make_rng(3), 60_000, 4)
    cyc = kernels.cycle_stats(rows)[:, kernels.NCYCLES]
    assert ((4 - cyc) % 2 == 0).all()
    _, counts = np.unique(rows, axis=0, return_counts=True)
    assert len(counts) == 12
    chi2 = float(((counts - 5000) ** 2 / 5000).sum())
    assert chi2 < 38.1  # chi-square 0.9999 quantile, 11 degrees of freedom


def test_stick_breaking():
    sticks, rem = mc.stick_breaking(make_rng(0), 200, 1000)
    assert (np.diff(sticks, axis=1) <= 0).all()
    assert np.allclose(sticks.sum(axis=1), 1.0)
    assert (sticks.sum(axis=1) <= 1 + 1e-12).all()
    assert rem.max() < mc.STICK_REMAINDER_TOL
    top, _ = mc.stick_breaking(make_rng(0), 200, 1000, top=2)
    assert np.array_equal(top, sticks[:, :2])


def test_holonomy_degenerate_small_n():
    # S_2 is abelian: the commutator fixes both squares, so only (id, id) qualifies
    r = mc.run_holonomy(cfg(n=2, samples=20_000))
    assert abs(r.mean - 0.25) <= 4 * r.se
    assert r.extra["visibility_fraction"] == 0.0
    with pytest.raises(ValueError):
        mc.run_holonomy(cfg(k=3))


def test_strata_small_n_contains_genus2_stratum():
    r = mc.run_strata(cfg(n=6, samples=20_000))
    assert r.extra["strata"].get("H(1,1)", 0) > 0
    assert sum(r.extra["strata"].values()) == 20_000


def test_fixed_points_brute_force_and_errors():
    r = mc.run_fixed_points(cfg(n=5, samples=20_000))
    assert r.extra["brute_force"] == "5/4" and r.extra["brute_force_matches"]
    assert r.theory["within_3se"]
    with pytest.raises(ValueError):
        mc.run_fixed_points(cfg(n=4))
    r = mc.run_fixed_points(cfg(n=7, samples=1000, options={"budget": 10}))
    assert r.extra["brute_force"] is None


def test_fixed_points_n100():
    r = mc.run_fixed_points(ExperimentConfig(n=100, samples=100_000, seed=42))
    assert abs(r.mean - 100 / 99) <= 3 * r.se


def test_transitivity_density():
    r = mc.run_transitivity(ExperimentConfig(n=100, samples=50_000, seed=42))
    assert r.mean <= 2 / 100 and r.theory["within_bound"]


def test_genus_odd_k_mean():
    r = mc.run_genus(ExperimentConfig(n=1000, k=3, samples=100_000, seed=42))
    assert abs(r.mean - (1000 - math.log(1000) - exact.EULER_GAMMA + 1)) <= 3 * r.se


def test_genus_matches_exact_law_small_n():
    # n = 5: exact law of C gives the exact mean genus
    r = mc.run_genus(cfg(n=5, samples=50_000))
    d = exact.exact_dist(5, 2)
    mean_genus = float(1 + (5 - d.mean()) / 2)
    assert abs(r.mean - mean_genus) <= 4 * r.se


def test_lclt_gap_helper():
    n, N = 1000, 10**9
    hist = {l: round(exact.lclt_density(l, n) * N) for l in range(0, 20, 2)}
    out = mc.lclt_gap(hist, n, samples=N)
    assert out["total_gap"] < 1e-7
    lo, hi = out["window"]
    assert hi - lo == pytest.approx(6 * math.sqrt(float(exact.theory(n, 2).B)))
    shifted = mc.lclt_gap({l + 2: c for l, c in hist.items()}, n, samples=N)
    assert shifted["total_gap"] > 0.1 and shifted["max_gap"] <= shifted["total_gap"]
