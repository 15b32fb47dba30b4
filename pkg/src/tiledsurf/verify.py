"""Acceptance checks, runnable at two levels.

``fast`` runs the exact oracles and invariants. ``full`` adds the Monte Carlo
checks. Every check returns a ``CriterionResult`` whose serialized form holds
no timings, so two runs with the same seed print identical summaries.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import exact, mc
from .holonomy import holonomy_report
from .partitions import class_size, dim_irrep, hook_product, mn_character, partitions_of
from .perm import Permutation, WordKind, evaluate_word, format_cycles, make_rng, parse_cycles
from .surface import TiledSurface, from_cycles, topology

# worked examples, 1-based cycle notation
SQUARES6 = ("(1,2,3,4)(5,6)", "(2,4,5,6,3)", 6)
SQUARES8 = ("(1,2)(3,4,5,6,7,8)", "(1,3,2,6)(4,7,5,8)", 8)
GENUS2_SQUARES6 = ("(1,2,3,4)(5,6)", "(1,5)(2,6)(3,4)", 6)
HEXAGONS5 = (3, ("(2,3)", "(1,5,4,3,2)", "(1,5,4,2)"), 5)
OCTAGONS4 = (4, ("(1,3,4)", "(2,3)", "(1,3,4)", "(1,2)(3,4)"), 4)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed_s: float = 0.0
    reports: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number:2d}: {self.title}"

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "details": self.details,
            "reports": [r.to_dict() for r in self.reports],
        }


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- exact checks


def check_genfun_oracle(seed: int = 0, workers: int = 1) -> CriterionResult:
    t0 = time.perf_counter()
    bad = []
    for k, sizes in ((2, range(2, 6)), (3, range(2, 5))):
        for n in sizes:
            if exact.exact_dist(n, k) != exact.brute_force_dist(n, k, budget=10**9):
                bad.append([n, k])
    elapsed = time.perf_counter() - t0
    return CriterionResult(
        1,
        "generating function equals exhaustive enumeration (k=2, n<=5; k=3, n<=4)",
        not bad and elapsed < 120,
        {"mismatches": bad},
        elapsed,
    )


def check_worked_examples(seed: int = 0, workers: int = 1) -> CriterionResult:
    got = {}
    for name, (s, t, n), want in (
        ("squares6", SQUARES6, "(1,6,4,2)(3,5)"),
        ("squares8", SQUARES8, "(1,3,7)(2,5)(4,6)(8)"),
    ):
        c = evaluate_word(WordKind.chain_c, (parse_cycles(s, n), parse_cycles(t, n)))
        canon = format_cycles(parse_cycles(want, n))
        got[name] = {"commutator": format_cycles(c), "expected": canon, "ok": format_cycles(c) == canon}
    strata = {
        "squares6": (2, SQUARES6[:2], 6, "H(3,1)"),
        "squares8": (2, SQUARES8[:2], 8, "H(2,1,1)"),
        "genus2_squares6": (2, GENUS2_SQUARES6[:2], 6, "H(1,1)"),
        "hexagons5": (HEXAGONS5[0], HEXAGONS5[1], HEXAGONS5[2], "H(4,1,1)"),
        "octagons4": (OCTAGONS4[0], OCTAGONS4[1], OCTAGONS4[2], "H(5,5)"),
    }
    for name, (k, texts, n, want) in strata.items():
        label = topology(from_cycles(k, texts, n)).stratum_label
        got.setdefault(name, {}).update({"stratum": label, "expected_stratum": want})
        got[name]["ok"] = got[name].get("ok", True) and label == want
    return CriterionResult(
        2,
        "worked-example commutators and strata reproduced",
        all(v["ok"] for v in got.values()),
        got,
    )


def check_character_identities(seed: int = 0, workers: int = 1) -> CriterionResult:
    burnside = all(sum(dim_irrep(l) ** 2 for l in partitions_of(n)) == factorial(n) for n in range(1, 11))
    degree = all(
        mn_character(l, (1,) * n) == factorial(n) // hook_product(l.parts) == dim_irrep(l)
        for n in range(1, 13)
        for l in partitions_of(n)
    )
    ortho = True
    for n in range(1, 9):
        P = partitions_of(n)
        table = {(l, m): mn_character(l, m) for l in P for m in P}
        sizes = {m: class_size(m) for m in P}
        for i, l1 in enumerate(P):
            for l2 in P[i:]:
                s = sum(sizes[m] * table[l1, m] * table[l2, m] for m in P)
                if s != (factorial(n) if l1 == l2 else 0):
                    ortho = False
    return CriterionResult(
        3,
        "character identities (sum of squared degrees, degree formula, orthogonality)",
        burnside and degree and ortho,
        {"sum_dim_squared": burnside, "degree_formula": degree, "orthogonality": ortho},
    )


def check_class_sum_consistency(seed: int = 0, workers: int = 1) -> CriterionResult:
    bad = [[n, k] for k in (2, 3, 4) for n in range(1, 9) if exact.class_law(n, k) != exact.exact_dist(n, k)]
    return CriterionResult(
        4, "class-sum law of C equals the generating function (n<=8, k=2,3,4)", not bad, {"mismatches": bad}
    )


def check_fixed_point_mean(seed: int = 0, workers: int = 1) -> CriterionResult:
    got = {}
    for n in (5, 6):
        bf = exact.brute_force_fixed_point_mean(n, budget=10**9)
        got[str(n)] = {"brute_force": _frac(bf), "target": _frac(exact.nica_fixed_points(n))}
    return CriterionResult(
        5,
        "mean fixed points of a random commutator equals 1 + 1/(n-1) at n=5,6",
        all(v["brute_force"] == v["target"] for v in got.values()),
        got,
    )


def tv_brute_force(n: int) -> Fraction:
    """TV distance to uniform on A_n by enumerating all pairs and all even permutations."""
    from collections import Counter
    from itertools import permutations

    from . import kernels

    counts: Counter = Counter()
    for stack in exact._iter_tuples(n, 2):
        counts.update(map(tuple, kernels.word_rows(stack, "c").tolist()))
    total = factorial(n) ** 2
    u = Fraction(2, factorial(n)) if n > 1 else Fraction(1)
    even = [p for p in permutations(range(n)) if Permutation(p).is_even()]
    return sum((abs(Fraction(counts.get(p, 0), total) - u) for p in even), Fraction(0)) / 2


def check_tv_decay(seed: int = 0, workers: int = 1) -> CriterionResult:
    values = {n: exact.tv_distance(n, 2) for n in range(5, 10)}
    decreasing = all(values[n + 1] < values[n] for n in range(5, 9))
    tv3, bf3 = exact.tv_distance(3, 2), tv_brute_force(3)
    return CriterionResult(
        6,
        "TV distance strictly decreasing over n=5..9; n=3 matches enumeration",
        decreasing and tv3 == bf3,
        {
            "tv": {str(n): _frac(v) for n, v in values.items()},
            "tv_float": {str(n): float(v) for n, v in values.items()},
            "strictly_decreasing": decreasing,
            "tv3": _frac(tv3),
            "tv3_brute_force": _frac(bf3),
        },
    )


def check_holonomy_oracle(seed: int = 0, workers: int = 1, count: int = 500) -> CriterionResult:
    rng = make_rng(seed, 9)
    disagreements = []
    for i in range(count):
        n = int(rng.integers(1, 6))
        S = TiledSurface(2, (Permutation.from_array(rng.permutation(n)), Permutation.from_array(rng.permutation(n))))
        rep = holonomy_report(S, radius=2 * n + 2)
        if not (rep.oracle_holonomy_consistent and rep.oracle_visibility_consistent):
            disagreements.append(S.to_dict())
    return CriterionResult(
        9,
        f"holonomy predicate and tracer agree on {count} random surfaces (n<=5, R=2n+2)",
        not disagreements,
        {"surfaces": count, "disagreements": disagreements},
    )


# ---------------------------------------------------------------- Monte Carlo checks


def _cfg(n, k, samples, seed, workers, **options):
    return mc.ExperimentConfig(n=n, k=k, samples=samples, seed=seed, workers=workers, options=options)


def check_genus_mc(seed: int = 42, workers: int = 1, samples: int = 100_000) -> CriterionResult:
    t0 = time.perf_counter()
    r = mc.run_genus(_cfg(1000, 2, samples, seed, workers))
    elapsed = time.perf_counter() - t0
    mean_ok = r.theory["within_3se"]
    var_ok = r.extra["variance_rel_gap"] <= mc.VARIANCE_REL_TOL
    lclt_ok = r.extra["lclt"]["total_gap"] <= mc.LCLT_GAP_TOL
    return CriterionResult(
        7,
        "genus mean, variance and local CLT shape (k=2, n=1000)",
        mean_ok and var_ok and lclt_ok and elapsed < 600,
        {"mean_ok": mean_ok, "variance_ok": var_ok, "lclt_ok": lclt_ok},
        elapsed,
        [r],
    )


def check_holonomy_mc(seed: int = 42, workers: int = 1, samples: int = 100_000) -> CriterionResult:
    r500 = mc.run_holonomy(_cfg(500, 2, samples, seed, workers))
    r100 = mc.run_holonomy(_cfg(100, 2, samples, seed, workers))
    hol_ok = r500.theory["within_3se"]
    vis_ok = r100.extra["visibility_fraction"] >= 0.999
    return CriterionResult(
        8,
        "holonomy-torus fraction near 1/e (n=500); visibility criterion holds (n=100)",
        hol_ok and vis_ok,
        {"holonomy_ok": hol_ok, "visibility_ok": vis_ok},
        reports=[r500, r100],
    )


def check_strata_mc(seed: int = 42, workers: int = 1, samples: int = 100_000) -> CriterionResult:
    a = mc.run_strata(_cfg(200, 2, samples, seed, workers))
    b = mc.run_strata(_cfg(800, 2, samples, seed, workers))
    pa, pb = a.extra["principal_fraction"], b.extra["principal_fraction"]
    ma, mb = a.extra["minimal_fraction"], b.extra["minimal_fraction"]
    d = {
        "principal_decreases": pb < pa,
        "minimal_decreases": mb < ma,
        "minimal_above_principal": ma > pa and mb > pb,
        "principal": [pa, pb],
        "minimal": [ma, mb],
    }
    return CriterionResult(
        10,
        "principal and minimal fractions decrease from n=200 to n=800; minimal > principal",
        d["principal_decreases"] and d["minimal_decreases"] and d["minimal_above_principal"],
        d,
        reports=[a, b],
    )


def check_cone_points_mc(seed: int = 42, workers: int = 1, samples: int = 100_000) -> CriterionResult:
    reports = [mc.run_cone_points(_cfg(1000, k, samples, seed, workers)) for k in (2, 3, 4, 5)]
    ok = {str(r.config.k): r.theory["within_3se"] for r in reports}
    return CriterionResult(
        11, "mean cone points match the four-branch table (k=2..5, n=1000)", all(ok.values()), ok, reports=reports
    )


def check_pd_mc(seed: int = 42, workers: int = 1, samples: int = 100_000) -> CriterionResult:
    r = mc.run_pd_comparison(_cfg(2000, 2, samples, seed, workers))
    within = {key: v["within"] for key, v in r.theory.items()}
    sticks_ok = r.extra["max_stick_remainder"] < mc.STICK_REMAINDER_TOL
    return CriterionResult(
        12,
        "largest-part means of commutator, A_n and stick-breaking samples agree (n=2000)",
        all(within.values()) and sticks_ok,
        {"pairs": within, "stick_remainder_ok": sticks_ok},
        reports=[r],
    )


def check_determinism(seed: int = 42, workers: int = 1, samples: int = 20_000) -> CriterionResult:
    """Small-size self-check: identical reports for worker counts 1, 4 and 8."""
    outputs = {}
    for w in (1, 4, 8):
        reps = [
            mc.run_genus(_cfg(200, 2, samples, seed, w)),
            mc.run_strata(_cfg(60, 2, samples, seed, w)),
            mc.run_pd_comparison(_cfg(200, 2, samples // 4, seed, w)),
        ]
        outputs[w] = json.dumps([r.to_dict() for r in reps])
    same = len(set(outputs.values())) == 1
    return CriterionResult(13, "reports byte-identical across worker counts 1, 4, 8", same, {"identical": same})


FAST = {
    1: check_genfun_oracle,
    2: check_worked_examples,
    3: check_character_identities,
    4: check_class_sum_consistency,
    5: check_fixed_point_mean,
    6: check_tv_decay,
    9: check_holonomy_oracle,
}
FULL = {
    7: check_genus_mc,
    8: check_holonomy_mc,
    10: check_strata_mc,
    11: check_cone_points_mc,
    12: check_pd_mc,
    13: check_determinism,
}


def criteria(level: str) -> dict:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    chosen = dict(FAST)
    if level == "full":
        chosen.update(FULL)
    return dict(sorted(chosen.items()))


def run(level: str = "fast", seed: int = 42, workers: int = 1, only=None, echo=None) -> list[CriterionResult]:
    results = []
    for number, fn in criteria(level).items():
        if only and number not in only:
            continue
        t0 = time.perf_counter()
        res = fn(seed=seed, workers=workers)
        res.elapsed_s = time.perf_counter() - t0
        results.append(res)
        if echo:
            echo(res)
    return results


def summary(results: list[CriterionResult]) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines)


def results_json(results: list[CriterionResult], level: str, seed: int) -> str:
    return json.dumps(
        {"level": level, "seed": seed, "criteria": [r.to_dict() for r in results]}, indent=2
    )

