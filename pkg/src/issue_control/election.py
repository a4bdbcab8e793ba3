"""Spatial plurality elections restricted to a set of salient issues.

Candidates and voters are points in issue space.  A voter supports the
candidate closest to it under an l_p norm restricted to the salient issues.
Distances are compared through their p-th powers, so every comparison stays
exact on rational positions.

Indices are 0-based throughout the Python API: candidate 0 is the target and
issue sets are sorted tuples of 0-based issue indices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from issue_control.errors import UsageError

TARGET = 0


class Domain(enum.Enum):
    REAL = "real"
    BINARY = "binary"


class TieRule(enum.Enum):
    """How ties are resolved, both for a single voter and for the winner."""

    BEST_CASE = "best"
    WORST_CASE = "worst"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UsageError(f"unknown tie rule {value!r}; expected 'best' or 'worst'") from None


def _as_rational(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value if value.denominator != 1 else value.numerator
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise UsageError(f"non-finite position {value!r}")
        return Fraction(float(value))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, str):
        try:
            return _as_rational(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse {value!r} as a rational number") from None
    raise UsageError(f"unsupported position value {value!r}")


def _as_matrix(rows, name):
    try:
        matrix = tuple(tuple(_as_rational(x) for x in row) for row in rows)
    except TypeError:
        raise UsageError(f"{name} must be a matrix") from None
    return matrix


@dataclass(frozen=True)
class Election:
    """Candidate and voter positions over a common set of issues.

    Parameters
    ----------
    candidates : sequence of sequences
        One position vector per candidate.  Row 0 is the target candidate.
    voters : sequence of sequences
        One position vector per voter.
    domain : Domain
        ``Domain.BINARY`` requires every position to be 0 or 1.

    Positions are converted to exact rationals (``int`` or ``Fraction``);
    floats are converted exactly, decimal strings such as ``"0.1"`` or
    ``"1/3"`` are parsed exactly.
    """

    candidates: tuple
    voters: tuple
    domain: Domain = Domain.REAL

    def __post_init__(self):
        domain = Domain(self.domain)
        candidates = _as_matrix(self.candidates, "candidates")
        voters = _as_matrix(self.voters, "voters")
        if len(candidates) < 2:
            raise UsageError("an election needs at least two candidates")
        if len(voters) < 1:
            raise UsageError("an election needs at least one voter")
        width = len(candidates[0])
        if width < 1:
            raise UsageError("an election needs at least one issue")
        for row in candidates + voters:
            if len(row) != width:
                raise UsageError("all position vectors must have the same number of issues")
        if domain is Domain.BINARY:
            for row in candidates + voters:
                if any(x != 0 and x != 1 for x in row):
                    raise UsageError("binary elections only admit positions 0 and 1")
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "voters", voters)
        object.__setattr__(self, "domain", domain)

    @property
    def num_candidates(self) -> int:
        return len(self.candidates)

    @property
    def num_voters(self) -> int:
        return len(self.voters)

    @property
    def num_issues(self) -> int:
        return len(self.candidates[0])

    @property
    def target(self) -> int:
        return TARGET

    def with_voters(self, voter_indices: Iterable[int]) -> "Election":
        """Sub-election keeping only the given voters (in the given order)."""
        return Election(self.candidates, [self.voters[j] for j in voter_indices], self.domain)


@dataclass(frozen=True)
class SolveOutcome:
    """Issue set chosen by a solver together with the election it induces."""

    issue_set: tuple
    votes: tuple
    target_support: int
    target_wins: bool


def check_norm(p) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 1:
        raise UsageError(f"norm order must be an integer >= 1, got {p!r}")
    return int(p)


def issue_set(issues: Iterable[int], num_issues: int) -> tuple:
    """Validate and canonicalize an issue set (sorted, distinct, nonempty)."""
    members = tuple(sorted(set(int(k) for k in issues)))
    if not members:
        raise UsageError("issue set must be nonempty")
    if members[0] < 0 or members[-1] >= num_issues:
        raise UsageError(f"issue indices must lie in [0, {num_issues - 1}]")
    return members


def wins_from_counts(votes: Sequence[int], tie: TieRule) -> bool:
    """Plurality win test for the target given per-candidate vote counts."""
    own = votes[TARGET]
    rivals = votes[1:]
    if TieRule.parse(tie) is TieRule.BEST_CASE:
        return all(own >= v for v in rivals)
    return all(own > v for v in rivals)


def restricted_distance(election: Election, voter: int, candidate: int, issues, p: int):
    """p-th power of the l_p distance between a voter and a candidate on ``issues``."""
    p = check_norm(p)
    if not 0 <= voter < election.num_voters:
        raise UsageError(f"voter index {voter} out of range")
    if not 0 <= candidate < election.num_candidates:
        raise UsageError(f"candidate index {candidate} out of range")
    s = issue_set(issues, election.num_issues)
    v = election.voters[voter]
    c = election.candidates[candidate]
    return sum(abs(c[k] - v[k]) ** p for k in s)


def _choose(distances, tie):
    """Candidate a voter supports, given its distance to every candidate."""
    best = min(distances)
    if distances[TARGET] == best:
        if tie is TieRule.BEST_CASE:
            return TARGET
        for i in range(1, len(distances)):
            if distances[i] == best:
                return i
        return TARGET
    return distances.index(best)


def cast_votes(election: Election, issues, p: int, tie: TieRule) -> tuple:
    """Candidate index chosen by every voter when only ``issues`` are salient.

    A voter whose closest candidates include the target votes for the target
    under ``BEST_CASE``; under ``WORST_CASE`` it votes for the lowest-index
    rival that is equally close.  Ties among rivals alone go to the lowest
    index.
    """
    p = check_norm(p)
    tie = TieRule.parse(tie)
    s = issue_set(issues, election.num_issues)
    choices = []
    for v in election.voters:
        distances = [sum(abs(c[k] - v[k]) ** p for k in s) for c in election.candidates]
        choices.append(_choose(distances, tie))
    return tuple(choices)


def vote_counts(election: Election, issues, p: int, tie: TieRule) -> tuple:
    counts = [0] * election.num_candidates
    for i in cast_votes(election, issues, p, tie):
        counts[i] += 1
    return tuple(counts)


def support(election: Election, issues, p: int, tie: TieRule) -> int:
    """Number of voters voting for the target."""
    return vote_counts(election, issues, p, tie)[TARGET]


def target_wins(election: Election, issues, p: int, tie: TieRule) -> bool:
    return wins_from_counts(vote_counts(election, issues, p, tie), tie)


def evaluate(election: Election, issues, p: int, tie: TieRule) -> SolveOutcome:
    """Full outcome (votes, support, win flag) of highlighting ``issues``."""
    s = issue_set(issues, election.num_issues)
    votes = vote_counts(election, s, p, tie)
    return SolveOutcome(s, votes, votes[TARGET], wins_from_counts(votes, tie))


def distance_tensor(election: Election, p: int) -> np.ndarray:
    """Object array ``D[i, j, k] = |c_ik - v_jk|^p`` of exact rationals."""
    p = check_norm(p)
    m, n, l = election.num_candidates, election.num_voters, election.num_issues
    out = np.empty((m, n, l), dtype=object)
    for i, c in enumerate(election.candidates):
        for j, v in enumerate(election.voters):
            for k in range(l):
                out[i, j, k] = abs(c[k] - v[k]) ** p
    return out


def margin_tensor(election: Election, p: int) -> np.ndarray:
    """Rival-minus-target distance terms, shape ``(m - 1, n, l)``.

    Entry ``[i - 1, j, k]`` is ``|c_ik - v_jk|^p - |c_0k - v_jk|^p``; the
    target keeps voter ``j`` against rival ``i`` on issue set ``S`` exactly
    when the entries over ``S`` sum to a nonnegative value.
    """
    d = distance_tensor(election, p)
    return d[1:] - d[0][None, :, :]


def normalize_binary(election: Election) -> Election:
    """Flip every issue on which the target holds 0, so the target is all ones.

    Agreement between any two position vectors is unchanged on every issue,
    so votes and support are unchanged for every issue set.
    """
    if election.domain is not Domain.BINARY:
        raise UsageError("normalize_binary requires a binary election")
    flip = [c == 0 for c in election.candidates[TARGET]]

    def apply(row):
        return [1 - x if f else x for x, f in zip(row, flip)]

    return Election(
        [apply(c) for c in election.candidates],
        [apply(v) for v in election.voters],
        Domain.BINARY,
    )
