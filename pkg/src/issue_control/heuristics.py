"""Greedy issue selection for Max Support."""

from __future__ import annotations

from issue_control.election import Election, SolveOutcome, TieRule, check_norm, evaluate
from issue_control.exact import supports_of
from issue_control.poly import best_single_issue


def greedy_max_support(election: Election, p: int, tie: TieRule, trace: list | None = None) -> SolveOutcome:
    """Grow an issue set one issue at a time while support strictly increases.

    Starts from the best single issue.  Each round adds the unchosen issue
    giving the largest support (lowest index on ties) and stops as soon as no
    addition strictly improves on the current support.  When ``trace`` is a
    list, the support after every accepted step is appended to it.
    """
    p = check_norm(p)
    tie = TieRule.parse(tie)
    current = best_single_issue(election, tie)
    chosen = current.issue_set
    value = current.target_support
    if trace is not None:
        trace.append(value)
    while len(chosen) < election.num_issues:
        options = [k for k in range(election.num_issues) if k not in chosen]
        candidates = [tuple(sorted(chosen + (k,))) for k in options]
        gains = supports_of(election, p, tie, candidates)
        top = max(gains)
        if top <= value:
            break
        chosen = candidates[gains.index(top)]
        value = top
        if trace is not None:
            trace.append(value)
    return evaluate(election, chosen, p, tie)
