"""Domain primitives: game parameters, score sequences, cohorts, student
strategies, and the exact distribution over reported score histories.

All probabilities are kept as exact ``fractions.Fraction`` values so that
downstream equilibrium checks can detect posterior ties (probability exactly
one half) without tolerances. Floats passed to constructors are interpreted
through their decimal representation, so ``alpha=0.8`` means exactly 4/5.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .errors import MissingStrategyEntry

Numeric = Union[int, float, str, Fraction]


def as_fraction(x: Numeric) -> Fraction:
    """Coerce a number to an exact Fraction.

    Floats are converted via their shortest decimal repr, so a literal like
    0.8 becomes 4/5 rather than the nearest binary float.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a probability")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


class Score(Enum):
    A = "A"  # above the bar
    B = "B"  # below the bar

    def __repr__(self) -> str:
        return self.value


ScoreSeq = tuple[Score, ...]


def seq(text: str) -> ScoreSeq:
    """Parse a score sequence from a string like ``"BAA"``."""
    return tuple(Score(ch) for ch in text)


def seq_str(s: ScoreSeq) -> str:
    return "".join(x.value for x in s)


def all_sequences(k: int) -> Iterator[ScoreSeq]:
    """Every reportable score sequence of length 1..k, shortest first."""
    frontier: list[ScoreSeq] = [()]
    for _ in range(k):
        frontier = [h + (s,) for h in frontier for s in Score]
        yield from frontier


def best_score(s: ScoreSeq) -> Score:
    return Score.A if Score.A in s else Score.B


class Category(Enum):
    CAT1 = 1  # may test once
    CAT2 = 2  # may test up to k times, adaptively


class StudentType(Enum):
    HIGH = "H"
    LOW = "L"


@dataclass(frozen=True, order=True)
class Cohort:
    """A (category, type) population cell."""

    category: Category
    type_: StudentType

    def mass(self, params: "ModelParams") -> Fraction:
        cat = params.phi if self.category is Category.CAT1 else params.phi_bar
        typ = params.p if self.type_ is StudentType.HIGH else params.p_bar
        return cat * typ

    def __str__(self) -> str:
        return f"({self.category.value},{self.type_.value})"


COHORTS: tuple[Cohort, ...] = (
    Cohort(Category.CAT1, StudentType.HIGH),
    Cohort(Category.CAT1, StudentType.LOW),
    Cohort(Category.CAT2, StudentType.HIGH),
    Cohort(Category.CAT2, StudentType.LOW),
)


@dataclass(frozen=True)
class ModelParams:
    """Primitives of the testing game.

    p      share of High-type students, in (0, 1)
    alpha  per-test accuracy (High scores A, Low scores B, each w.p. alpha),
           in (1/2, 1]
    phi    share of Category 1 (single-test) students, in [0, 1]
    k      maximum number of tests for Category 2 students, >= 1
    """

    p: Fraction
    alpha: Fraction
    phi: Fraction
    k: int

    def __init__(self, p: Numeric, alpha: Numeric, phi: Numeric, k: int):
        object.__setattr__(self, "p", as_fraction(p))
        object.__setattr__(self, "alpha", as_fraction(alpha))
        object.__setattr__(self, "phi", as_fraction(phi))
        object.__setattr__(self, "k", int(k))
        if not (0 < self.p < 1):
            raise ValueError(f"p must lie in (0,1), got {self.p}")
        if not (Fraction(1, 2) < self.alpha <= 1):
            raise ValueError(f"alpha must lie in (1/2,1], got {self.alpha}")
        if not (0 <= self.phi <= 1):
            raise ValueError(f"phi must lie in [0,1], got {self.phi}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")

    # convenience complements, x_bar == 1 - x
    @property
    def p_bar(self) -> Fraction:
        return 1 - self.p

    @property
    def alpha_bar(self) -> Fraction:
        return 1 - self.alpha

    @property
    def phi_bar(self) -> Fraction:
        return 1 - self.phi

    def emit(self, type_: StudentType, score: Score) -> Fraction:
        """Probability a student of this type produces the given score."""
        if type_ is StudentType.HIGH:
            return self.alpha if score is Score.A else self.alpha_bar
        return self.alpha_bar if score is Score.A else self.alpha


StopKey = tuple[StudentType, ScoreSeq]


@dataclass(frozen=True)
class StudentStrategy:
    """History-dependent stop probabilities for Category 2 students.

    ``stop[(type_, history)]`` is the probability of stopping (and reporting
    the history) after observing it; histories of length k stop implicitly
    and carry no entry. Category 1 students have no choices.
    """

    stop: Mapping[StopKey, Fraction]

    def __init__(self, stop: Mapping[StopKey, Numeric]):
        frozen = {}
        for key, value in stop.items():
            f = as_fraction(value)
            if not (0 <= f <= 1):
                raise ValueError(f"stop probability {f} for {key} not in [0,1]")
            frozen[key] = f
        object.__setattr__(self, "stop", frozen)

    def stop_prob(self, type_: StudentType, history: ScoreSeq, k: int) -> Fraction:
        if len(history) >= k:
            return Fraction(1)
        try:
            return self.stop[(type_, history)]
        except KeyError:
            raise MissingStrategyEntry(
                f"no stop probability for type {type_.value} after {seq_str(history)}"
            ) from None

    @classmethod
    def always_stop(cls, k: int) -> "StudentStrategy":
        """Everyone reports their first score."""
        return cls({(t, h): 1 for t in StudentType for h in _histories(k)})

    @classmethod
    def stop_after_a(cls, k: int) -> "StudentStrategy":
        """Retake until the first A (or the k-th test); stop once an A is seen."""
        return cls(
            {(t, h): (1 if Score.A in h else 0) for t in StudentType for h in _histories(k)}
        )

    @classmethod
    def from_first_score(
        cls,
        k: int,
        f_h_a: Numeric,
        f_h_b: Numeric,
        f_l_a: Numeric,
        f_l_b: Numeric,
    ) -> "StudentStrategy":
        """Stop probabilities that depend only on the most recent first score.

        Deeper histories (k > 2) reuse the entry of their first score, which
        reproduces first-score-indexed strategies exactly at k = 2.
        """
        table = {
            (StudentType.HIGH, Score.A): as_fraction(f_h_a),
            (StudentType.HIGH, Score.B): as_fraction(f_h_b),
            (StudentType.LOW, Score.A): as_fraction(f_l_a),
            (StudentType.LOW, Score.B): as_fraction(f_l_b),
        }
        return cls({(t, h): table[(t, h[0])] for t in StudentType for h in _histories(k)})


def _histories(k: int) -> Iterator[ScoreSeq]:
    """All decision histories: sequences of length 1..k-1."""
    for s in all_sequences(k - 1) if k > 1 else ():
        yield s


@dataclass(frozen=True)
class OutcomeDistribution:
    """Per-cohort probabilities of every reported score sequence.

    ``conditional[cohort][sequence]`` is the within-cohort probability that a
    student of that cohort ends up reporting the sequence. Category 1 mass
    sits on single scores only. Entries of each cohort sum to one exactly.
    """

    params: ModelParams
    conditional: Mapping[Cohort, Mapping[ScoreSeq, Fraction]]

    def mass(self, cohort: Cohort, s: ScoreSeq) -> Fraction:
        return self.conditional[cohort].get(s, Fraction(0))

    def weighted(self, cohort: Cohort, s: ScoreSeq) -> Fraction:
        """Unconditional mass: within-cohort probability times cohort mass."""
        return self.mass(cohort, s) * cohort.mass(self.params)

    def sequences(self) -> list[ScoreSeq]:
        seen: set[ScoreSeq] = set()
        for row in self.conditional.values():
            seen.update(row)
        return sorted(seen, key=lambda s: (len(s), seq_str(s)))

    def type_mass(self, type_: StudentType, s: ScoreSeq) -> Fraction:
        """Unconditional mass of the given type reporting ``s`` (both categories)."""
        total = Fraction(0)
        for cohort in COHORTS:
            if cohort.type_ is type_:
                total += self.weighted(cohort, s)
        return total


def outcome_distribution(params: ModelParams, strategy: StudentStrategy) -> OutcomeDistribution:
    """Distribution over reported sequences induced by a stopping strategy.

    Category 1 students report their single test. Category 2 students chain
    per-test emissions with the strategy's stop probabilities; a sequence's
    mass is the product of emissions and continue factors along its prefixes
    times the stop probability at the sequence itself (length k stops).
    """
    out: dict[Cohort, dict[ScoreSeq, Fraction]] = {}
    for type_ in StudentType:
        single = {(s,): params.emit(type_, s) for s in Score}
        out[Cohort(Category.CAT1, type_)] = single
        out[Cohort(Category.CAT2, type_)] = _cat2_conditional(params, strategy, type_)
    return OutcomeDistribution(params=params, conditional=out)


def _cat2_conditional(
    params: ModelParams, strategy: StudentStrategy, type_: StudentType
) -> dict[ScoreSeq, Fraction]:
    masses: dict[ScoreSeq, Fraction] = {}
    # reach[h]: probability of arriving at history h without having stopped
    reach: dict[ScoreSeq, Fraction] = {
        (s,): params.emit(type_, s) for s in Score
    }
    for length in range(1, params.k + 1):
        next_reach: dict[ScoreSeq, Fraction] = {}
        for h, r in reach.items():
            if r == 0:
                continue
            f = strategy.stop_prob(type_, h, params.k)
            masses[h] = masses.get(h, Fraction(0)) + r * f
            if length < params.k and f < 1:
                for s in Score:
                    next_reach[h + (s,)] = r * (1 - f) * params.emit(type_, s)
        reach = next_reach
    return masses


def max_score_distribution(params: ModelParams) -> OutcomeDistribution:
    """Two-outcome (best score) distribution under retake-until-A behavior.

    Category 2 High reports a best score of A with probability 1 - (1-alpha)^k
    and Low reports B with probability alpha^k; Category 1 reports its single
    test. Keys are the length-1 sequences (A,) and (B,).
    """
    a, ab, k = params.alpha, params.alpha_bar, params.k
    out: dict[Cohort, dict[ScoreSeq, Fraction]] = {}
    for type_ in StudentType:
        out[Cohort(Category.CAT1, type_)] = {(s,): params.emit(type_, s) for s in Score}
    out[Cohort(Category.CAT2, StudentType.HIGH)] = {
        (Score.A,): 1 - ab**k,
        (Score.B,): ab**k,
    }
    out[Cohort(Category.CAT2, StudentType.LOW)] = {
        (Score.A,): 1 - a**k,
        (Score.B,): a**k,
    }
    return OutcomeDistribution(params=params, conditional=out)


def best_score_projection(dist: OutcomeDistribution) -> OutcomeDistribution:
    """Collapse a sequence distribution onto best scores (A beats B)."""
    out: dict[Cohort, dict[ScoreSeq, Fraction]] = {}
    for cohort, row in dist.conditional.items():
        proj: dict[ScoreSeq, Fraction] = {(Score.A,): Fraction(0), (Score.B,): Fraction(0)}
        for s, m in row.items():
            proj[(best_score(s),)] += m
        out[cohort] = proj
    return OutcomeDistribution(params=dist.params, conditional=out)
