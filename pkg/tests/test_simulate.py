"""Monte Carlo simulation: determinism, substream partitioning, convergence."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from retesting import (
    Category,
    EmptyPopulation,
    ModelParams,
    SimConfig,
    construct_first_score_equilibrium,
    fairness_report,
    outcome_distribution,
    report_max_separating,
    seq_str,
    simulate,
)
from retesting.model import COHORTS

PARAMS = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)


def first_score_config(n=200_000, seed=7) -> SimConfig:
    return SimConfig(
        n=n, seed=seed, params=PARAMS, profile=construct_first_score_equilibrium(PARAMS)
    )


class TestDeterminism:
    def test_identical_config_identical_bytes(self):
        a = simulate(first_score_config()).to_json()
        b = simulate(first_score_config()).to_json()
        assert a == b

    def test_seed_changes_report(self):
        a = simulate(first_score_config(seed=1)).to_json()
        b = simulate(first_score_config(seed=2)).to_json()
        assert a != b

    def test_partition_independent_aggregation(self):
        whole = simulate(first_score_config(n=50_000), chunks=1).to_json()
        split = simulate(first_score_config(n=50_000), chunks=7).to_json()
        assert whole == split

    def test_empty_population_rejected(self):
        with pytest.raises(EmptyPopulation):
            SimConfig(n=0, seed=1, params=PARAMS,
                      profile=construct_first_score_equilibrium(PARAMS))


class TestConvergence:
    def test_first_score_rates_concentrate(self):
        report = simulate(first_score_config())
        analytic = fairness_report(PARAMS, construct_first_score_equilibrium(PARAMS))
        for cat, key in ((Category.CAT1, "cat1"), (Category.CAT2, "cat2")):
            want = float(analytic.fnr[cat])
            count = report.cohort_totals["(1,H)" if key == "cat1" else "(2,H)"]
            tol = 4 * math.sqrt(want * (1 - want) / count)
            assert abs(report.fnr[key] - want) <= tol
            want = float(analytic.fpr[cat])
            count = report.cohort_totals["(1,L)" if key == "cat1" else "(2,L)"]
            tol = 4 * math.sqrt(want * (1 - want) / count)
            assert abs(report.fpr[key] - want) <= tol

    def test_separating_rates_concentrate(self):
        profile = report_max_separating(PARAMS)
        config = SimConfig(n=200_000, seed=11, params=PARAMS, profile=profile)
        report = simulate(config)
        analytic = fairness_report(PARAMS, profile)
        count = report.cohort_totals["(2,H)"]
        want = float(analytic.fnr[Category.CAT2])  # 0.04
        tol = 4 * math.sqrt(want * (1 - want) / count)
        assert abs(report.fnr["cat2"] - want) <= tol

    def test_sequence_frequencies_match_distribution(self):
        profile = report_max_separating(PARAMS)
        config = SimConfig(n=200_000, seed=3, params=PARAMS, profile=profile)
        report = simulate(config)
        dist = outcome_distribution(PARAMS, profile.strategy)
        names = {"(1,H)": COHORTS[0], "(1,L)": COHORTS[1],
                 "(2,H)": COHORTS[2], "(2,L)": COHORTS[3]}
        for name, cohort in names.items():
            total = report.cohort_totals[name]
            if total == 0:
                continue
            expected = {seq_str(s): float(m) for s, m in dist.conditional[cohort].items()}
            for s, want in expected.items():
                got = report.seq_counts[name].get(s, 0) / total
                tol = 4 * math.sqrt(max(want * (1 - want), 1e-12) / total)
                assert abs(got - want) <= tol, (name, s, got, want)
            # nothing outside the support
            assert set(report.seq_counts[name]) <= set(expected)

    def test_noiseless_has_exactly_zero_errors(self):
        params = ModelParams(p=0.3, alpha=1, phi=0.5, k=2)
        profile = report_max_separating(params)
        report = simulate(SimConfig(n=50_000, seed=5, params=params, profile=profile))
        assert report.fnr == {"cat1": 0.0, "cat2": 0.0}
        assert report.fpr == {"cat1": 0.0, "cat2": 0.0}
        assert report.ppv == 1.0 and report.npv == 1.0

    def test_payoff_tracks_closed_form(self):
        report = simulate(first_score_config())
        assert abs(report.college_payoff - 0.1) < 0.01


class TestSeedBattery:
    def test_hundred_seed_concentration(self):
        # 4-sigma bound per metric; at least 99 of 100 seeds must pass all
        profile = report_max_separating(PARAMS)
        analytic = fairness_report(PARAMS, profile)
        targets = {
            ("fnr", "cat1", "(1,H)"): float(analytic.fnr[Category.CAT1]),
            ("fnr", "cat2", "(2,H)"): float(analytic.fnr[Category.CAT2]),
            ("fpr", "cat1", "(1,L)"): float(analytic.fpr[Category.CAT1]),
            ("fpr", "cat2", "(2,L)"): float(analytic.fpr[Category.CAT2]),
        }
        ok = 0
        for seed in range(100):
            report = simulate(SimConfig(n=100_000, seed=seed, params=PARAMS,
                                        profile=profile))
            good = True
            for (metric, cat, cohort), want in targets.items():
                got = getattr(report, metric)[cat]
                count = report.cohort_totals[cohort]
                tol = 4 * math.sqrt(want * (1 - want) / count)
                good &= abs(got - want) <= tol
            ok += good
        assert ok >= 99


class TestK3Paths:
    def test_three_test_histories_exercised(self):
        from retesting import construct_non_first_score_equilibrium, seq

        params = ModelParams(p=0.45, alpha=0.8, phi=0.5, k=3)
        profile = construct_non_first_score_equilibrium(params, 3)
        report = simulate(SimConfig(n=100_000, seed=9, params=params, profile=profile))
        # students chasing the BAA run produce three-score sequences
        assert any(len(s) == 3 for s in report.seq_counts["(2,H)"])
        dist = outcome_distribution(params, profile.strategy)
        want = float(dist.conditional[COHORTS[2]][seq("BAA")])
        got = report.seq_counts["(2,H)"].get("BAA", 0) / report.cohort_totals["(2,H)"]
        tol = 4 * math.sqrt(want * (1 - want) / report.cohort_totals["(2,H)"])
        assert abs(got - want) <= tol
