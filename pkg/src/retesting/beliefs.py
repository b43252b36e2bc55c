"""Bayesian beliefs for the College: per-sequence posteriors, prefix
aggregates, and best-score posteriors under retake-until-A behavior."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .model import (
    ModelParams,
    OutcomeDistribution,
    Score,
    ScoreSeq,
    StudentStrategy,
    StudentType,
    max_score_distribution,
    outcome_distribution,
    seq_str,
)


class OffPath:
    """Marker for a sequence with zero mass: the posterior is unconstrained."""

    _instance: Optional["OffPath"] = None

    def __new__(cls) -> "OffPath":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OffPath"


OFF_PATH = OffPath()

Belief = Union[Fraction, OffPath]


@dataclass(frozen=True)
class PrefixBelief:
    """Share of High types among students whose report starts with ``prefix``.

    ``value`` is 0 by convention when nothing starts with the prefix; the
    ``empty`` flag records that case explicitly.
    """

    prefix: ScoreSeq
    value: Fraction
    empty: bool = False


@dataclass(frozen=True)
class Beliefs:
    """The College's posterior map, with off-path sequences marked.

    ``off_path_assignment`` optionally supplies the beliefs used to support
    an admission policy at zero-mass sequences.
    """

    per_seq: Mapping[ScoreSeq, Belief]
    off_path_assignment: Optional[Mapping[ScoreSeq, Fraction]] = None

    def at(self, s: ScoreSeq) -> Belief:
        return self.per_seq[s]

    def supported(self, s: ScoreSeq) -> Fraction:
        """The belief actually in force at ``s`` (posterior or assignment)."""
        b = self.per_seq[s]
        if isinstance(b, OffPath):
            if self.off_path_assignment is None or s not in self.off_path_assignment:
                raise KeyError(f"no off-path belief assigned at {seq_str(s)}")
            return self.off_path_assignment[s]
        return b


def posterior_from_distribution(dist: OutcomeDistribution, s: ScoreSeq) -> Belief:
    high = dist.type_mass(StudentType.HIGH, s)
    low = dist.type_mass(StudentType.LOW, s)
    total = high + low
    if total == 0:
        return OFF_PATH
    return high / total


def posterior(params: ModelParams, strategy: StudentStrategy, s: ScoreSeq) -> Belief:
    """Pr(High | reported sequence s), or OFF_PATH when s has zero mass."""
    return posterior_from_distribution(outcome_distribution(params, strategy), s)


def prefix_belief(params: ModelParams, strategy: StudentStrategy, prefix: ScoreSeq) -> PrefixBelief:
    """Mass-weighted share of High among reports extending ``prefix``.

    The prefix itself counts as one of its extensions. Because every report
    starts with its first test score, a length-1 prefix always aggregates to
    pure first-emission odds regardless of stopping behavior.
    """
    dist = outcome_distribution(params, strategy)
    high = Fraction(0)
    low = Fraction(0)
    for s in dist.sequences():
        if len(s) >= len(prefix) and s[: len(prefix)] == prefix:
            high += dist.type_mass(StudentType.HIGH, s)
            low += dist.type_mass(StudentType.LOW, s)
    total = high + low
    if total == 0:
        return PrefixBelief(prefix=prefix, value=Fraction(0), empty=True)
    return PrefixBelief(prefix=prefix, value=high / total, empty=False)


def posterior_max(params: ModelParams, best: Score) -> Fraction:
    """Pr(High | best score) when Category 2 retakes until an A (up to k)."""
    dist = max_score_distribution(params)
    high = dist.type_mass(StudentType.HIGH, (best,))
    low = dist.type_mass(StudentType.LOW, (best,))
    return high / (high + low)


def compute_beliefs(
    params: ModelParams,
    strategy: StudentStrategy,
    sequences: list[ScoreSeq],
    off_path_assignment: Optional[Mapping[ScoreSeq, Fraction]] = None,
) -> Beliefs:
    """Posteriors for every sequence in ``sequences`` under the strategy."""
    dist = outcome_distribution(params, strategy)
    per_seq = {s: posterior_from_distribution(dist, s) for s in sequences}
    return Beliefs(per_seq=per_seq, off_path_assignment=off_path_assignment)
