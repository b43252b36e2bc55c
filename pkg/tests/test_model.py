"""Core model: parameters, strategies, and outcome distributions."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from retesting import (
    COHORTS,
    Category,
    Cohort,
    MissingStrategyEntry,
    ModelParams,
    Score,
    StudentStrategy,
    StudentType,
    as_fraction,
    best_score_projection,
    max_score_distribution,
    outcome_distribution,
    seq,
    seq_str,
)
from retesting.model import all_sequences


def brute_force_cat2(alpha: Fraction, k: int, stops: dict) -> dict:
    """Independent oracle: compute every sequence's mass from scratch as
    emissions times survival times the stop probability, with no recursion."""
    out: dict = {"H": {}, "L": {}}
    for t in ("H", "L"):
        for length in range(1, k + 1):
            for word in product("AB", repeat=length):
                w = "".join(word)
                path_p = Fraction(1)
                for ch in w:
                    is_a = ch == "A"
                    path_p *= alpha if (t == "H") == is_a else 1 - alpha
                alive = Fraction(1)
                for j in range(1, length):
                    alive *= 1 - stops[(t, w[:j])]
                stop = stops[(t, w)] if length < k else Fraction(1)
                mass = path_p * alive * stop
                if mass:
                    out[t][w] = mass
    return out


def to_stop_dict(strategy: StudentStrategy) -> dict:
    return {
        (t.value, seq_str(h)): f for (t, h), f in strategy.stop.items()
    }


class TestModelParams:
    def test_decimal_floats_become_exact(self):
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)
        assert params.alpha == Fraction(4, 5)
        assert params.p == Fraction(3, 10)
        assert params.alpha_bar == Fraction(1, 5)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(p=0, alpha=0.8, phi=0.5, k=2),
            dict(p=1, alpha=0.8, phi=0.5, k=2),
            dict(p=0.3, alpha=0.5, phi=0.5, k=2),
            dict(p=0.3, alpha=1.2, phi=0.5, k=2),
            dict(p=0.3, alpha=0.8, phi=-0.1, k=2),
            dict(p=0.3, alpha=0.8, phi=0.5, k=0),
        ],
    )
    def test_invalid_params_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ModelParams(**kwargs)

    def test_alpha_one_allowed(self):
        ModelParams(p=0.3, alpha=1, phi=0.5, k=2)

    def test_emissions(self):
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)
        assert params.emit(StudentType.HIGH, Score.A) == Fraction(4, 5)
        assert params.emit(StudentType.LOW, Score.B) == Fraction(4, 5)
        assert params.emit(StudentType.LOW, Score.A) == Fraction(1, 5)

    def test_as_fraction_string(self):
        assert as_fraction("0.55") == Fraction(11, 20)


class TestOutcomeDistribution:
    def test_stop_always_degenerates_to_one_test(self):
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)
        dist = outcome_distribution(params, StudentStrategy.always_stop(2))
        row = dist.conditional[Cohort(Category.CAT2, StudentType.HIGH)]
        assert row[seq("A")] == Fraction(4, 5)
        assert row[seq("B")] == Fraction(1, 5)
        assert all(len(s) == 1 for s in row)

    def test_low_type_always_retakes_matches_oracle(self):
        # frozen from the exhaustive oracle: AA 1/25, AB 4/25, BA 4/25, BB 16/25
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)
        strategy = StudentStrategy.from_first_score(2, f_h_a=1, f_h_b=1, f_l_a=0, f_l_b=0)
        dist = outcome_distribution(params, strategy)
        row = dist.conditional[Cohort(Category.CAT2, StudentType.LOW)]
        assert row[seq("AA")] == Fraction(1, 25)
        assert row[seq("AB")] == Fraction(4, 25)
        assert row[seq("BA")] == Fraction(4, 25)
        assert row[seq("BB")] == Fraction(16, 25)

    @pytest.mark.parametrize("k", [2, 3])
    def test_matches_brute_force_on_random_strategies(self, k):
        rng = random.Random(20240 + k)
        for _ in range(8):
            alpha = Fraction(rng.randint(51, 99), 100)
            params = ModelParams(p=0.3, alpha=alpha, phi=0.5, k=k)
            stops = {
                (t, h): Fraction(rng.randint(0, 4), 4)
                for t in StudentType
                for h in all_sequences(k - 1)
            }
            strategy = StudentStrategy(stops)
            dist = outcome_distribution(params, strategy)
            oracle = brute_force_cat2(
                alpha, k, {(t.value, seq_str(h)): f for (t, h), f in stops.items()}
            )
            for t in StudentType:
                row = dist.conditional[Cohort(Category.CAT2, t)]
                got = {seq_str(s): m for s, m in row.items() if m > 0}
                want = {s: m for s, m in oracle[t.value].items() if m > 0}
                assert got == want

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_each_cohort_sums_to_one(self, k):
        rng = random.Random(7 + k)
        for _ in range(10):
            params = ModelParams(
                p=Fraction(rng.randint(1, 99), 100),
                alpha=Fraction(rng.randint(51, 100), 100),
                phi=Fraction(rng.randint(0, 100), 100),
                k=k,
            )
            stops = {
                (t, h): Fraction(rng.randint(0, 10), 10)
                for t in StudentType
                for h in all_sequences(k - 1)
            }
            dist = outcome_distribution(params, StudentStrategy(stops))
            for cohort in COHORTS:
                assert sum(dist.conditional[cohort].values()) == 1

    def test_cat1_matches_cat2_when_everyone_stops(self):
        params = ModelParams(p=0.3, alpha=0.7, phi=0.4, k=3)
        dist = outcome_distribution(params, StudentStrategy.always_stop(3))
        for t in StudentType:
            assert dist.conditional[Cohort(Category.CAT1, t)] == dict(
                dist.conditional[Cohort(Category.CAT2, t)]
            )

    def test_missing_history_raises(self):
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)
        partial = StudentStrategy({(StudentType.HIGH, seq("A")): 1})
        with pytest.raises(MissingStrategyEntry):
            outcome_distribution(params, partial)

    def test_unreachable_history_not_required(self):
        # stop==1 after the first test makes depth-2 histories unreachable,
        # so k=3 entries of length 2 may be omitted
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=3)
        stops = {(t, h): Fraction(1) for t in StudentType for h in all_sequences(1)}
        dist = outcome_distribution(params, StudentStrategy(stops))
        for t in StudentType:
            assert set(dist.conditional[Cohort(Category.CAT2, t)]) == {seq("A"), seq("B")}

    def test_strategy_validates_probability_range(self):
        with pytest.raises(ValueError):
            StudentStrategy({(StudentType.HIGH, seq("A")): Fraction(3, 2)})


class TestMaxScoreDistribution:
    def test_retake_until_a_probabilities(self):
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)
        dist = max_score_distribution(params)
        assert dist.mass(Cohort(Category.CAT2, StudentType.HIGH), seq("A")) == Fraction(24, 25)
        assert dist.mass(Cohort(Category.CAT2, StudentType.LOW), seq("B")) == Fraction(16, 25)

    def test_k_one_equals_single_test(self):
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=1)
        dist = max_score_distribution(params)
        for t in StudentType:
            assert dist.conditional[Cohort(Category.CAT2, t)] == dict(
                dist.conditional[Cohort(Category.CAT1, t)]
            )

    def test_noiseless_test(self):
        params = ModelParams(p=0.3, alpha=1, phi=0.5, k=3)
        dist = max_score_distribution(params)
        assert dist.mass(Cohort(Category.CAT2, StudentType.HIGH), seq("A")) == 1
        assert dist.mass(Cohort(Category.CAT2, StudentType.LOW), seq("B")) == 1

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_equals_projected_outcome_distribution(self, k):
        # retake-after-B chaining projected to best scores must reproduce the
        # closed-form best-score table
        params = ModelParams(p=0.35, alpha=0.75, phi=0.6, k=k)
        chained = best_score_projection(
            outcome_distribution(params, StudentStrategy.stop_after_a(k))
        )
        closed = max_score_distribution(params)
        for cohort in COHORTS:
            for s in (seq("A"), seq("B")):
                assert chained.mass(cohort, s) == closed.mass(cohort, s)

    def test_weighted_view(self):
        params = ModelParams(p=0.3, alpha=0.8, phi=0.5, k=2)
        dist = max_score_distribution(params)
        cohort = Cohort(Category.CAT2, StudentType.HIGH)
        assert cohort.mass(params) == Fraction(1, 2) * Fraction(3, 10)
        assert dist.weighted(cohort, seq("A")) == Fraction(24, 25) * Fraction(3, 20)
