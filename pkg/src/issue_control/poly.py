"""Polynomial-time algorithms for binary issues with few voters or two candidates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from issue_control.election import (
    TARGET,
    Domain,
    Election,
    SolveOutcome,
    TieRule,
    evaluate,
)
from issue_control.errors import UsageError
from issue_control.exact import supports_of


@dataclass(frozen=True)
class PolyAnswer:
    """Decision of a polynomial algorithm; ``witness`` is set when it says yes."""

    decision: bool
    witness: tuple | None = None


def _require(election: Election, voters: int) -> None:
    if election.domain is not Domain.BINARY:
        raise UsageError("this algorithm requires a binary election")
    if election.num_voters != voters:
        raise UsageError(f"this algorithm requires exactly {voters} voter(s), got {election.num_voters}")


def _first_single_issue(target, rivals, voter):
    for k in range(len(voter)):
        if target[k] == voter[k] or all(c[k] != voter[k] for c in rivals):
            return k
    return None


def single_issue_win(election: Election) -> PolyAnswer:
    """Single voter, best-case ties.

    The target wins iff some single issue does: one where the target agrees
    with the voter, or where no rival does (then everyone is at distance 1).
    """
    _require(election, 1)
    k = _first_single_issue(election.candidates[TARGET], election.candidates[1:], election.voters[0])
    return PolyAnswer(False) if k is None else PolyAnswer(True, (k,))


def _strictly_preferred(target, rivals, voter, issues) -> bool:
    own = sum(target[k] != voter[k] for k in issues)
    return all(sum(c[k] != voter[k] for k in issues) > own for c in rivals)


def agree_on_issues(election: Election) -> PolyAnswer:
    """Single voter, worst-case ties.

    Highlights every issue on which the target agrees with the voter; no
    other issue set does better against any rival.
    """
    _require(election, 1)
    v = election.voters[0]
    target = election.candidates[TARGET]
    agree = tuple(k for k in range(election.num_issues) if target[k] == v[k])
    if not agree:
        return PolyAnswer(False)
    if _strictly_preferred(target, election.candidates[1:], v, agree):
        return PolyAnswer(True, agree)
    return PolyAnswer(False)


def two_voter_best_case(election: Election) -> PolyAnswer:
    # winning one voter is enough: a 1-1 split goes to the target
    _require(election, 2)
    target, rivals = election.candidates[TARGET], election.candidates[1:]
    for v in election.voters:
        k = _first_single_issue(target, rivals, v)
        if k is not None:
            return PolyAnswer(True, (k,))
    return PolyAnswer(False)


def _pair_worst_case(target, rivals, v1, v2) -> PolyAnswer:
    # after normalize_binary the target is all ones, so "both voters hold 1"
    # is the same as "both voters agree with the target"; no flip is needed
    agree = tuple(k for k in range(len(target)) if v1[k] == target[k] == v2[k])
    if not agree:
        return PolyAnswer(False)
    if all(_strictly_preferred(target, rivals, v, agree) for v in (v1, v2)):
        return PolyAnswer(True, agree)
    return PolyAnswer(False)


def two_voter_worst_case(election: Election) -> PolyAnswer:
    """Two voters, worst-case ties: both voters must strictly prefer the target.

    After flipping issues so the target holds 1 everywhere, the only
    candidate set is the issues where both voters hold 1.
    """
    _require(election, 2)
    v1, v2 = election.voters
    return _pair_worst_case(election.candidates[TARGET], election.candidates[1:], v1, v2)


def three_voter_worst_case(election: Election) -> PolyAnswer:
    """Three voters, worst-case ties: the target needs two strict supporters."""
    _require(election, 3)
    target, rivals = election.candidates[TARGET], election.candidates[1:]
    for a, b in itertools.combinations(range(3), 2):
        answer = _pair_worst_case(target, rivals, election.voters[a], election.voters[b])
        if answer.decision:
            return answer
    return PolyAnswer(False)


def best_single_issue(election: Election, tie: TieRule) -> SolveOutcome:
    """Highlight the one issue that captures the most voters (lowest index on ties).

    On a single issue every l_p distance is a monotone function of
    ``|c_k - v_k|``, so the result does not depend on the norm order.
    """
    tie = TieRule.parse(tie)
    singles = [(k,) for k in range(election.num_issues)]
    counts = supports_of(election, 1, tie, singles)
    return evaluate(election, singles[counts.index(max(counts))], 1, tie)


ALGORITHMS = {
    "siw": (single_issue_win, 1, TieRule.BEST_CASE),
    "aoi": (agree_on_issues, 1, TieRule.WORST_CASE),
    "2v-bc": (two_voter_best_case, 2, TieRule.BEST_CASE),
    "2v-wc": (two_voter_worst_case, 2, TieRule.WORST_CASE),
    "3v-wc": (three_voter_worst_case, 3, TieRule.WORST_CASE),
}
