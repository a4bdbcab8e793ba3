"""Brute-force reference implementations used as test oracles."""

from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import strategies as st

from issue_control.election import Domain, Election, TieRule


def oracle_votes(election: Election, issues, p: int, tie: TieRule) -> tuple:
    """Votes per candidate computed straight from the definitions."""
    counts = [0] * election.num_candidates
    for v in election.voters:
        dist = [sum(abs(c[k] - v[k]) ** p for k in issues) for c in election.candidates]
        best = min(dist)
        if dist[0] == best and (tie is TieRule.BEST_CASE or dist.count(best) == 1):
            counts[0] += 1
        else:
            counts[min(i for i in range(1, len(dist)) if dist[i] == best)] += 1
    return tuple(counts)


def oracle_wins(counts, tie: TieRule) -> bool:
    if tie is TieRule.BEST_CASE:
        return all(counts[0] >= c for c in counts[1:])
    return all(counts[0] > c for c in counts[1:])


def all_subsets(num_issues: int):
    for size in range(1, num_issues + 1):
        yield from itertools.combinations(range(num_issues), size)


def oracle_isc(election, p, tie):
    for s in all_subsets(election.num_issues):
        if oracle_wins(oracle_votes(election, s, p, tie), tie):
            return s
    return None


def oracle_max_support(election, p, tie) -> int:
    return max(oracle_votes(election, s, p, tie)[0] for s in all_subsets(election.num_issues))


small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def elections(draw, binary=None, max_m=4, max_n=5, max_l=4, values=small_rationals):
    if binary is None:
        binary = draw(st.booleans())
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(1, max_n))
    l = draw(st.integers(1, max_l))
    entry = st.integers(0, 1) if binary else values
    rows = lambda k: draw(st.lists(st.lists(entry, min_size=l, max_size=l), min_size=k, max_size=k))
    return Election(rows(m), rows(n), Domain.BINARY if binary else Domain.REAL)


def frac(text) -> Fraction:
    return Fraction(text)
