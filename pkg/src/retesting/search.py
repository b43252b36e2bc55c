"""Independent equilibrium oracle: best responses by backward induction,
profile verification, and exhaustive enumeration of equilibrium outcomes.

Enumeration reduces each candidate admission policy to an exact linear
feasibility problem over stop/continue mass flows: a stopping strategy is an
equilibrium iff the flows respect the best-response structure and, for every
report, the accepted side carries at least as much High mass as Low mass.
Free (indifferent) stop probabilities therefore form polytopes, which are
decided exactly with rational arithmetic rather than sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from . import _simplex
from .beliefs import Beliefs, OFF_PATH, OffPath, posterior_from_distribution
from .equilibria import (
    ACCEPT_ALL,
    FIRST_SCORE,
    NON_FIRST_SCORE,
    REJECT_ALL,
    SEPARATING,
    AdmissionPolicy,
    EquilibriumProfile,
    Reporting,
    is_boundary,
)
from .errors import MalformedProfile, MissingStrategyEntry, ScopeTooLarge
from .model import (
    COHORTS,
    Category,
    Cohort,
    ModelParams,
    Score,
    ScoreSeq,
    StudentStrategy,
    StudentType,
    all_sequences,
    best_score,
    outcome_distribution,
    seq_str,
)

STOP = "stop"
CONTINUE = "continue"
ANY = "any"

ExactOrTol = Union[str, float]


@dataclass(frozen=True)
class BestResponseSet:
    """Admissible stop sets per (type, history), from backward induction.

    ``rules`` maps to "stop" ({1}), "continue" ({0}) or "any" ([0,1]);
    ``values`` holds the optimal admission probability from each history on.
    """

    rules: Mapping[tuple[StudentType, ScoreSeq], str]
    values: Mapping[tuple[StudentType, ScoreSeq], Fraction]

    def admissible(self, type_: StudentType, history: ScoreSeq) -> tuple[Fraction, Fraction]:
        rule = self.rules[(type_, history)]
        if rule == STOP:
            return Fraction(1), Fraction(1)
        if rule == CONTINUE:
            return Fraction(0), Fraction(0)
        return Fraction(0), Fraction(1)

    def allows(self, type_: StudentType, history: ScoreSeq, f: Fraction) -> bool:
        lo, hi = self.admissible(type_, history)
        return lo <= f <= hi


def best_response(params: ModelParams, policy: AdmissionPolicy) -> BestResponseSet:
    """Optimal stopping sets for Category 2 students facing a policy.

    At each history, stopping yields the accept indicator of the current
    sequence; continuing yields the expected optimal value over the next
    score. Strict comparisons force the decision, ties leave it free.
    """
    k = params.k
    rules: dict[tuple[StudentType, ScoreSeq], str] = {}
    values: dict[tuple[StudentType, ScoreSeq], Fraction] = {}
    for type_ in StudentType:
        for length in range(k, 0, -1):
            for h in _sequences_of_length(length):
                u = Fraction(1) if policy.accepts(h) else Fraction(0)
                if length == k:
                    values[(type_, h)] = u
                    continue
                cont = sum(
                    (params.emit(type_, s) * values[(type_, h + (s,))] for s in Score),
                    Fraction(0),
                )
                values[(type_, h)] = max(u, cont)
                if u > cont:
                    rules[(type_, h)] = STOP
                elif u < cont:
                    rules[(type_, h)] = CONTINUE
                else:
                    rules[(type_, h)] = ANY
    return BestResponseSet(rules=rules, values=values)


def _sequences_of_length(length: int) -> list[ScoreSeq]:
    seqs: list[ScoreSeq] = [()]
    for _ in range(length):
        seqs = [s + (x,) for s in seqs for x in Score]
    return seqs


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str  # "best_response" | "posterior_rule"
    where: str
    detail: str


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple[Violation, ...]
    off_path: tuple[ScoreSeq, ...]  # zero-mass reports, beliefs there are free

    def __bool__(self) -> bool:
        return self.ok


def _labels(policy_k: int, reporting: Reporting) -> list[ScoreSeq]:
    if reporting is Reporting.MAX:
        return [(Score.A,), (Score.B,)]
    return list(all_sequences(policy_k))


def _label_of(s: ScoreSeq, reporting: Reporting) -> ScoreSeq:
    return (best_score(s),) if reporting is Reporting.MAX else s


def verify_equilibrium(
    params: ModelParams, profile: EquilibriumProfile, mode: ExactOrTol = "exact"
) -> Verdict:
    """Check a profile against the best-response and posterior conditions.

    Passing requires (a) every stop probability to lie in the admissible
    best-response set, and (b) every positive-mass report to satisfy the
    acceptance rule: accepted reports carry posterior >= 1/2, rejected ones
    <= 1/2 (ties may go either way). Zero-mass reports are recorded, never
    failed: any supporting belief is allowed there.

    ``mode`` is "exact" for rational comparison or a float tolerance on the
    posterior distance from 1/2.
    """
    if mode != "exact" and not isinstance(mode, float):
        raise ValueError("mode must be 'exact' or a float tolerance")
    if profile.reporting is Reporting.MAX and not profile.policy.is_max_measurable():
        raise MalformedProfile("best-score reporting requires a max-measurable policy")
    try:
        br = best_response(params, profile.policy)
        violations: list[Violation] = []
        for type_ in StudentType:
            for h in all_sequences(params.k - 1) if params.k > 1 else ():
                f = profile.strategy.stop_prob(type_, h, params.k)
                if not br.allows(type_, h, f):
                    lo, hi = br.admissible(type_, h)
                    violations.append(
                        Violation(
                            kind="best_response",
                            where=f"{type_.value} after {seq_str(h)}",
                            detail=f"stop={f} outside admissible [{lo}, {hi}]",
                        )
                    )
        dist = outcome_distribution(params, profile.strategy)
    except MissingStrategyEntry as exc:
        raise MalformedProfile(str(exc)) from exc

    high: dict[ScoreSeq, Fraction] = {}
    low: dict[ScoreSeq, Fraction] = {}
    for s in dist.sequences():
        lab = _label_of(s, profile.reporting)
        high[lab] = high.get(lab, Fraction(0)) + dist.type_mass(StudentType.HIGH, s)
        low[lab] = low.get(lab, Fraction(0)) + dist.type_mass(StudentType.LOW, s)

    off_path: list[ScoreSeq] = []
    for lab in _labels(params.k, profile.reporting):
        h_mass = high.get(lab, Fraction(0))
        l_mass = low.get(lab, Fraction(0))
        total = h_mass + l_mass
        if total == 0:
            off_path.append(lab)
            continue
        accepts = profile.policy.accepts(lab)
        if mode == "exact":
            bad = (accepts and h_mass < l_mass) or (not accepts and h_mass > l_mass)
        else:
            post = float(h_mass) / float(total)
            bad = (accepts and post < 0.5 - mode) or (not accepts and post > 0.5 + mode)
        if bad:
            post_f = h_mass / total
            want = ">= 1/2" if accepts else "<= 1/2"
            violations.append(
                Violation(
                    kind="posterior_rule",
                    where=seq_str(lab),
                    detail=f"posterior {post_f} ({float(post_f):.6f}) must be {want}",
                )
            )
    return Verdict(ok=not violations, violations=tuple(violations), off_path=tuple(off_path))


# ---------------------------------------------------------------------------
# Flow feasibility
# ---------------------------------------------------------------------------

# A linear expression in the free continue-mass variables: const + sum coeff*x.
_Expr = tuple[Fraction, dict[int, Fraction]]


def _scale(expr: _Expr, factor: Fraction) -> _Expr:
    const, coeffs = expr
    return const * factor, {i: v * factor for i, v in coeffs.items()}


def _add(a: _Expr, b: _Expr, sign: int = 1) -> _Expr:
    const = a[0] + sign * b[0]
    coeffs = dict(a[1])
    for i, v in b[1].items():
        coeffs[i] = coeffs.get(i, Fraction(0)) + sign * v
    return const, coeffs


def _evaluate(expr: _Expr, x: Sequence[Fraction]) -> Fraction:
    const, coeffs = expr
    return const + sum(v * x[i] for i, v in coeffs.items())


class _FlowSystem:
    """Linear feasibility system over free continue masses within a scope.

    Forced nodes (strict best responses) are substituted symbolically, so the
    only variables are the continue masses at indifferent nodes. A policy has
    an equilibrium iff the system admits a nonnegative solution.
    """

    def __init__(
        self,
        params: ModelParams,
        rules: Mapping[tuple[StudentType, ScoreSeq], str],
        histories: Sequence[ScoreSeq],
        sequences: Sequence[ScoreSeq],
        reporting: Reporting,
        policy: AdmissionPolicy,
    ):
        self.params = params
        self.rules = rules
        self.histories = list(histories)
        self.sequences = sorted(sequences, key=lambda s: (len(s), seq_str(s)))
        self.reporting = reporting
        self.policy = policy
        weights = {
            StudentType.HIGH: params.phi_bar * params.p,
            StudentType.LOW: params.phi_bar * params.p_bar,
        }
        self.var_index: dict[tuple[StudentType, ScoreSeq], int] = {}
        self.reach_expr: dict[tuple[StudentType, ScoreSeq], _Expr] = {}
        self.c_expr: dict[tuple[StudentType, ScoreSeq], _Expr] = {}
        hist_set = set(self.histories)
        for s in self.sequences:
            for t in StudentType:
                if len(s) == 1:
                    r: _Expr = (weights[t] * params.emit(t, s[0]), {})
                else:
                    r = _scale(self.c_expr[(t, s[:-1])], params.emit(t, s[-1]))
                self.reach_expr[(t, s)] = r
                if s in hist_set:
                    rule = rules[(t, s)]
                    if rule == STOP:
                        self.c_expr[(t, s)] = (Fraction(0), {})
                    elif rule == CONTINUE:
                        self.c_expr[(t, s)] = r
                    else:
                        idx = len(self.var_index)
                        self.var_index[(t, s)] = idx
                        self.c_expr[(t, s)] = (Fraction(0), {idx: Fraction(1)})
        self.n = len(self.var_index)

    def stop_mass(self, t: StudentType, s: ScoreSeq) -> _Expr:
        r = self.reach_expr[(t, s)]
        if len(s) < self.params.k:
            return _add(r, self.c_expr[(t, s)], sign=-1)
        return r

    def cat1_mass(self, t: StudentType, s: ScoreSeq) -> Fraction:
        if len(s) != 1:
            return Fraction(0)
        cat = self.params.phi * (self.params.p if t is StudentType.HIGH else self.params.p_bar)
        return cat * self.params.emit(t, s[0])

    def constraints(self) -> tuple[list, list]:
        """Rows (A_ub, b_ub) of the equilibrium polytope over free variables."""
        a_ub: list[list[Fraction]] = []
        b_ub: list[Fraction] = []

        def push(expr: _Expr) -> None:
            # expr <= 0
            const, coeffs = expr
            row = [Fraction(0)] * self.n
            for i, v in coeffs.items():
                row[i] += v
            a_ub.append(row)
            b_ub.append(-const)

        for (t, h), idx in self.var_index.items():
            push(_add(self.c_expr[(t, h)], self.reach_expr[(t, h)], sign=-1))  # c <= reach

        groups: dict[ScoreSeq, list[ScoreSeq]] = {}
        for s in self.sequences:
            groups.setdefault(_label_of(s, self.reporting), []).append(s)
        for lab in sorted(groups, key=lambda s: (len(s), seq_str(s))):
            diff: _Expr = (Fraction(0), {})
            for s in groups[lab]:
                for t, sign in ((StudentType.HIGH, 1), (StudentType.LOW, -1)):
                    member = _add(self.stop_mass(t, s), (self.cat1_mass(t, s), {}))
                    diff = _add(diff, member, sign=sign)
            # accepted labels need High - Low >= 0, rejected ones <= 0
            push(_scale(diff, Fraction(-1)) if self.policy.accepts(lab) else diff)
        return a_ub, b_ub

    def feasible(self) -> Optional[list[Fraction]]:
        a_ub, b_ub = self.constraints()
        if self.n == 0:
            return [] if all(b >= 0 for b in b_ub) else None
        return _simplex.feasible_point(a_ub, b_ub, [], [], self.n)

    def stops_from_point(self, x: Sequence[Fraction]) -> dict[tuple[StudentType, ScoreSeq], Fraction]:
        """Stop probabilities at reachable nodes; canonical values elsewhere."""
        stops: dict[tuple[StudentType, ScoreSeq], Fraction] = {}
        for t in StudentType:
            for h in self.histories:
                r = _evaluate(self.reach_expr[(t, h)], x)
                rule = self.rules[(t, h)]
                if r > 0:
                    stops[(t, h)] = 1 - _evaluate(self.c_expr[(t, h)], x) / r
                else:
                    stops[(t, h)] = Fraction(0) if rule == CONTINUE else Fraction(1)
        return stops

    def free_nodes(self) -> list[tuple[StudentType, ScoreSeq]]:
        return list(self.var_index)

    def stop_interval(
        self, t: StudentType, h: ScoreSeq, grid: int = 200
    ) -> Optional[tuple[Fraction, Fraction]]:
        """Range of stop probabilities at a free node across the polytope.

        Exact via LP when the node's reach is a known constant; nodes fed by
        other free nodes are bracketed by feasibility probes at 1/grid.
        """
        a_ub, b_ub = self.constraints()
        idx = self.var_index[(t, h)]
        r_const, r_coeffs = self.reach_expr[(t, h)]
        if not r_coeffs:
            if r_const == 0:
                return None
            obj = [Fraction(0)] * self.n
            obj[idx] = Fraction(1)
            lo = _simplex.minimize(obj, a_ub, b_ub, [], [], self.n)
            hi = _simplex.minimize([-v for v in obj], a_ub, b_ub, [], [], self.n)
            if lo.status != _simplex.OPTIMAL or hi.status != _simplex.OPTIMAL:
                return None
            return 1 - (-hi.value) / r_const, 1 - lo.value / r_const

        def probe(theta: Fraction, upper: bool) -> bool:
            # upper: exists a point with stop >= theta, i.e. c <= (1-theta)*reach
            row = [Fraction(0)] * self.n
            row[idx] = Fraction(1)
            for i, v in r_coeffs.items():
                row[i] -= (1 - theta) * v
            rhs = (1 - theta) * r_const
            if not upper:
                row = [-v for v in row]
                rhs = -rhs
            return _simplex.feasible_point(a_ub + [row], b_ub + [rhs], [], [], self.n) is not None

        def search(upper: bool) -> Fraction:
            lo_i, hi_i = 0, grid
            if upper:
                while lo_i < hi_i:
                    mid = (lo_i + hi_i + 1) // 2
                    if probe(Fraction(mid, grid), True):
                        lo_i = mid
                    else:
                        hi_i = mid - 1
                return Fraction(lo_i, grid)
            while lo_i < hi_i:
                mid = (lo_i + hi_i) // 2
                if probe(Fraction(mid, grid), False):
                    hi_i = mid
                else:
                    lo_i = mid + 1
            return Fraction(lo_i, grid)

        return search(False), search(True)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

EXHAUSTIVE_MAX_K = 3

SCOPE_REPORT_MAX = "report-max"
SCOPE_REPORT_ALL = "report-all"
SCOPE_FIRST_SCORE = "report-all:first-score"
SCOPE_B_THEN_A = "report-all:b-then-a-run"
SCOPE_ALL_B_REJECT = "report-all:all-b-reject"
SCOPES = (
    SCOPE_REPORT_MAX,
    SCOPE_REPORT_ALL,
    SCOPE_FIRST_SCORE,
    SCOPE_B_THEN_A,
    SCOPE_ALL_B_REJECT,
)


@dataclass
class OutcomeClass:
    """An equilibrium outcome: per-cohort admission probabilities.

    Cohorts with zero mass are omitted (their conditional behavior is not an
    observable outcome). ``policies`` lists every deterministic policy in
    scope that supports the class; ``witness`` is one fully specified profile.
    """

    admit_prob: dict[Cohort, Fraction]
    label: str
    witness: EquilibriumProfile
    policies: list[AdmissionPolicy]
    verified: bool

    def key(self) -> tuple:
        return tuple(sorted((str(c), v) for c, v in self.admit_prob.items()))


@dataclass
class Enumeration:
    params: ModelParams
    scope: str
    boundary: bool
    policies_considered: int
    classes: list[OutcomeClass]


def _positive_cohorts(params: ModelParams) -> list[Cohort]:
    return [c for c in COHORTS if c.mass(params) > 0]


def _classify(
    params: ModelParams,
    admit: dict[Cohort, Fraction],
    reporting: Reporting,
) -> str:
    probs = set(admit.values())
    if probs == {Fraction(0)}:
        return REJECT_ALL
    if probs == {Fraction(1)}:
        return ACCEPT_ALL
    first = {
        c: (params.alpha if c.type_ is StudentType.HIGH else params.alpha_bar)
        for c in admit
    }
    if admit == first:
        return FIRST_SCORE
    return SEPARATING if reporting is Reporting.MAX else NON_FIRST_SCORE


def _cat1_admit(params: ModelParams, policy: AdmissionPolicy, t: StudentType) -> Fraction:
    return sum(
        (params.emit(t, s) for s in Score if policy.accepts((s,))),
        Fraction(0),
    )


def _witness_profile(
    params: ModelParams,
    policy: AdmissionPolicy,
    stops: Mapping[tuple[StudentType, ScoreSeq], Fraction],
    reporting: Reporting,
    label: str,
) -> EquilibriumProfile:
    strategy = StudentStrategy(dict(stops))
    dist = outcome_distribution(params, strategy)
    per_seq = {}
    assignment = {}
    for lab in _labels(params.k, reporting):
        if reporting is Reporting.MAX:
            h = sum(
                (dist.type_mass(StudentType.HIGH, s) for s in dist.sequences()
                 if best_score(s) == lab[0]),
                Fraction(0),
            )
            l = sum(
                (dist.type_mass(StudentType.LOW, s) for s in dist.sequences()
                 if best_score(s) == lab[0]),
                Fraction(0),
            )
            b = OFF_PATH if h + l == 0 else h / (h + l)
        else:
            b = posterior_from_distribution(dist, lab)
        per_seq[lab] = b
        if isinstance(b, OffPath):
            assignment[lab] = Fraction(1) if policy.accepts(lab) else Fraction(0)
    beliefs = Beliefs(per_seq=per_seq, off_path_assignment=assignment)
    return EquilibriumProfile(
        policy=policy, strategy=strategy, beliefs=beliefs, label=label, reporting=reporting
    )


def _subtree(first: Score, k: int) -> tuple[list[ScoreSeq], list[ScoreSeq]]:
    seqs = [s for s in all_sequences(k) if s[0] is first]
    hists = [s for s in seqs if len(s) < k]
    return hists, seqs


@dataclass
class _SubtreeSolution:
    accepted: frozenset[ScoreSeq]
    values: dict[StudentType, Fraction]  # admission prob conditional on first score
    stops: dict[tuple[StudentType, ScoreSeq], Fraction]


from functools import lru_cache


@lru_cache(maxsize=4096)
def _subtree_induction(alpha: Fraction, k: int, first: Score, bits: int):
    """Backward induction on one subtree policy; depends only on alpha."""
    _, seqs = _subtree(first, k)
    accepted = frozenset(s for i, s in enumerate(seqs) if bits >> i & 1)
    emit = {
        (StudentType.HIGH, Score.A): alpha,
        (StudentType.HIGH, Score.B): 1 - alpha,
        (StudentType.LOW, Score.A): 1 - alpha,
        (StudentType.LOW, Score.B): alpha,
    }
    rules: dict[tuple[StudentType, ScoreSeq], str] = {}
    values: dict[tuple[StudentType, ScoreSeq], Fraction] = {}
    for t in StudentType:
        for h in sorted(seqs, key=len, reverse=True):
            u = Fraction(1) if h in accepted else Fraction(0)
            if len(h) == k:
                values[(t, h)] = u
                continue
            cont = sum((emit[(t, s)] * values[(t, h + (s,))] for s in Score), Fraction(0))
            values[(t, h)] = max(u, cont)
            rules[(t, h)] = STOP if u > cont else CONTINUE if u < cont else ANY
    return accepted, rules, values


def _solve_subtrees(params: ModelParams, first: Score) -> list[_SubtreeSolution]:
    """All consistent acceptance patterns on one first-score subtree."""
    hists, seqs = _subtree(first, params.k)
    solutions = []
    for bits in range(1 << len(seqs)):
        accepted, rules, values = _subtree_induction(params.alpha, params.k, first, bits)
        policy = AdmissionPolicy(k=params.k, accepted=accepted)
        system = _FlowSystem(params, rules, hists, seqs, Reporting.ALL, policy)
        x = system.feasible()
        if x is None:
            continue
        solutions.append(
            _SubtreeSolution(
                accepted=accepted,
                values={t: values[(t, (first,))] for t in StudentType},
                stops=system.stops_from_point(x),
            )
        )
    return solutions


def _enumerate_report_all(params: ModelParams) -> Enumeration:
    by_first = {first: _solve_subtrees(params, first) for first in Score}
    classes: dict[tuple, OutcomeClass] = {}
    positive = _positive_cohorts(params)
    considered = (1 << (2**params.k - 1)) ** 2
    for sol_a in by_first[Score.A]:
        for sol_b in by_first[Score.B]:
            policy = AdmissionPolicy(k=params.k, accepted=sol_a.accepted | sol_b.accepted)
            admit: dict[Cohort, Fraction] = {}
            for cohort in positive:
                t = cohort.type_
                if cohort.category is Category.CAT1:
                    admit[cohort] = _cat1_admit(params, policy, t)
                else:
                    admit[cohort] = (
                        params.emit(t, Score.A) * sol_a.values[t]
                        + params.emit(t, Score.B) * sol_b.values[t]
                    )
            key = tuple(sorted((str(c), v) for c, v in admit.items()))
            if key in classes:
                classes[key].policies.append(policy)
                continue
            stops = {**sol_a.stops, **sol_b.stops}
            label = _classify(params, admit, Reporting.ALL)
            witness = _witness_profile(params, policy, stops, Reporting.ALL, label)
            verdict = verify_equilibrium(params, witness, mode="exact")
            classes[key] = OutcomeClass(
                admit_prob=admit,
                label=label,
                witness=witness,
                policies=[policy],
                verified=verdict.ok,
            )
    return Enumeration(
        params=params,
        scope=SCOPE_REPORT_ALL,
        boundary=is_boundary(params),
        policies_considered=considered,
        classes=sorted(classes.values(), key=lambda c: c.key()),
    )


def _enumerate_policy_list(
    params: ModelParams, policies: list[AdmissionPolicy], reporting: Reporting, scope: str
) -> Enumeration:
    hists = list(all_sequences(params.k - 1)) if params.k > 1 else []
    seqs = list(all_sequences(params.k))
    classes: dict[tuple, OutcomeClass] = {}
    positive = _positive_cohorts(params)
    for policy in policies:
        br = best_response(params, policy)
        system = _FlowSystem(params, br.rules, hists, seqs, reporting, policy)
        x = system.feasible()
        if x is None:
            continue
        admit: dict[Cohort, Fraction] = {}
        for cohort in positive:
            t = cohort.type_
            if cohort.category is Category.CAT1:
                admit[cohort] = _cat1_admit(params, policy, t)
            else:
                admit[cohort] = sum(
                    (params.emit(t, s) * br.values[(t, (s,))] for s in Score), Fraction(0)
                )
        key = tuple(sorted((str(c), v) for c, v in admit.items()))
        if key in classes:
            classes[key].policies.append(policy)
            continue
        stops = system.stops_from_point(x)
        label = _classify(params, admit, reporting)
        witness = _witness_profile(params, policy, stops, reporting, label)
        verdict = verify_equilibrium(params, witness, mode="exact")
        classes[key] = OutcomeClass(
            admit_prob=admit,
            label=label,
            witness=witness,
            policies=[policy],
            verified=verdict.ok,
        )
    return Enumeration(
        params=params,
        scope=scope,
        boundary=is_boundary(params),
        policies_considered=len(policies),
        classes=sorted(classes.values(), key=lambda c: c.key()),
    )


def _family_policies(params: ModelParams, scope: str) -> list[AdmissionPolicy]:
    k = params.k
    if scope == SCOPE_FIRST_SCORE:
        return [
            AdmissionPolicy.first_score(k),
            AdmissionPolicy.from_predicate(k, lambda s: s[0] is Score.B),
            AdmissionPolicy.accept_all(k),
            AdmissionPolicy.reject_all(k),
        ]
    if scope == SCOPE_B_THEN_A:
        return [AdmissionPolicy.b_then_a_run(k, n) for n in range(2, k + 1)]
    if scope == SCOPE_ALL_B_REJECT:
        return [AdmissionPolicy.from_predicate(k, lambda s: Score.A in s)]
    raise ValueError(f"unknown scope {scope!r}")


def enumerate_outcomes(params: ModelParams, scope: str = SCOPE_REPORT_ALL) -> Enumeration:
    """Search a policy scope for equilibria, quotiented by admission outcome.

    "report-all" is exhaustive over all deterministic sequence policies
    (64 at k=2, 16384 at k=3) and refuses k >= 4; named families remain
    available there. "report-max" covers the four best-score policies.
    """
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; expected one of {SCOPES}")
    if scope == SCOPE_REPORT_ALL:
        if params.k > EXHAUSTIVE_MAX_K:
            raise ScopeTooLarge(
                f"exhaustive enumeration at k={params.k} means 2^{2**(params.k+1)-2} "
                f"policies; restrict to a named family scope: "
                f"{SCOPE_FIRST_SCORE}, {SCOPE_B_THEN_A}, {SCOPE_ALL_B_REJECT}"
            )
        return _enumerate_report_all(params)
    if scope == SCOPE_REPORT_MAX:
        policies = [
            AdmissionPolicy.best_score_a(params.k),
            AdmissionPolicy.from_predicate(params.k, lambda s: best_score(s) is Score.B),
            AdmissionPolicy.accept_all(params.k),
            AdmissionPolicy.reject_all(params.k),
        ]
        return _enumerate_policy_list(params, policies, Reporting.MAX, scope)
    return _enumerate_policy_list(params, _family_policies(params, scope), Reporting.ALL, scope)


def free_stop_intervals(
    params: ModelParams, policy: AdmissionPolicy, reporting: Reporting = Reporting.ALL
) -> dict[tuple[StudentType, ScoreSeq], tuple[Fraction, Fraction]]:
    """Per free node, the stop-probability range supporting the policy.

    Depth-one entries are exact; deeper entries are resolved to 1/200.
    Returns an empty dict when the policy has no equilibrium.
    """
    br = best_response(params, policy)
    hists = list(all_sequences(params.k - 1)) if params.k > 1 else []
    seqs = list(all_sequences(params.k))
    system = _FlowSystem(params, br.rules, hists, seqs, reporting, policy)
    if system.feasible() is None:
        return {}
    out = {}
    for t, h in system.free_nodes():
        interval = system.stop_interval(t, h)
        if interval is not None:
            out[(t, h)] = interval
    return out
