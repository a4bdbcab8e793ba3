"""Exact solvers: exhaustive search over every nonempty issue subset.

Subsets are visited in canonical order (increasing size, then
lexicographic), so the first winning subset and the first maximizer found
are the canonical representatives returned to the caller.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from issue_control.election import (
    TARGET,
    Domain,
    Election,
    SolveOutcome,
    TieRule,
    check_norm,
    distance_tensor,
    wins_from_counts,
)
from issue_control.errors import CapacityError, UsageError

DEFAULT_MAX_ISSUES = 25
_CHUNK = 2048


def canonical_subsets(num_items: int):
    """All nonempty subsets of ``range(num_items)``, by size then lexicographically."""
    for size in range(1, num_items + 1):
        yield from itertools.combinations(range(num_items), size)


@functools.lru_cache(maxsize=None)
def _small_enumeration(num_items: int) -> tuple:
    # the whole enumeration fits in one batch; reused across many tiny solves
    batch = list(canonical_subsets(num_items))
    picks = np.zeros((len(batch), num_items), dtype=np.int64)
    for r, subset in enumerate(batch):
        picks[r, list(subset)] = 1
    picks.setflags(write=False)
    return batch, picks


def check_capacity(num_items: int, max_items: int = DEFAULT_MAX_ISSUES) -> None:
    if num_items > max_items:
        raise CapacityError(
            f"exhaustive search over {num_items} issues exceeds the cap of {max_items} "
            f"({2 ** num_items - 1} subsets)"
        )


def integer_scaled(values: np.ndarray, num_items: int) -> np.ndarray:
    """Multiply rationals by their common denominator.

    Uses ``int64`` when no subset sum along the leading axis can overflow and
    Python integers (object dtype) otherwise.  Sign and order of every subset
    sum are preserved.
    """
    flat = [x for x in values.ravel()]
    denom = lcm(*(x.denominator for x in flat)) if flat else 1
    ints = [x.numerator * (denom // x.denominator) for x in flat]
    bound = max((abs(x) for x in ints), default=0) * max(num_items, 1)
    dtype = np.int64 if bound < 2**62 else object
    out = np.empty(len(ints), dtype=dtype)
    out[:] = ints
    return out.reshape(values.shape)


def subset_sums(columns: np.ndarray, subsets=None, chunk: int = _CHUNK):
    """Yield ``(batch, sums)`` for consecutive batches of column subsets.

    ``columns`` has the item axis first; ``sums[r]`` is the sum of
    ``columns[batch[r]]`` over that axis.
    """
    num_items = columns.shape[0]
    if subsets is None and columns.dtype != object and 2**num_items - 1 <= chunk:
        batch, picks = _small_enumeration(num_items)
        yield list(batch), np.tensordot(picks, columns, axes=1)
        return
    source = canonical_subsets(num_items) if subsets is None else iter(subsets)
    while True:
        batch = list(itertools.islice(source, chunk))
        if not batch:
            return
        if columns.dtype == object:
            sums = np.stack([columns[list(s)].sum(axis=0) for s in batch])
        else:
            picks = np.zeros((len(batch), num_items), dtype=np.int64)
            for r, s in enumerate(batch):
                picks[r, list(s)] = 1
            sums = np.tensordot(picks, columns, axes=1)
        yield batch, sums


def distance_columns(election: Election, p: int) -> np.ndarray:
    """Integer-scaled distance powers with layout ``(issue, candidate, voter)``."""
    if election.domain is Domain.BINARY:
        # |a - b|^p is the disagreement indicator for every p
        c = np.array(election.candidates, dtype=np.int64)
        v = np.array(election.voters, dtype=np.int64)
        return np.ascontiguousarray((c.T[:, :, None] != v.T[:, None, :]).astype(np.int64))
    d = distance_tensor(election, p)
    return integer_scaled(np.ascontiguousarray(d.transpose(2, 0, 1)), election.num_issues)


@dataclass(frozen=True)
class _DistanceData:
    exact: np.ndarray  # integer-scaled, (issue, candidate, voter)
    approx: np.ndarray | None  # float64 image of the unscaled distances, same layout


def _distance_data(election: Election, p: int) -> _DistanceData:
    # elections are immutable, so the tables are cached on the instance
    cache = election.__dict__.setdefault("_distance_cache", {})
    if p not in cache:
        cache[p] = _build_distance_data(election, p)
    return cache[p]


def _build_distance_data(election: Election, p: int) -> _DistanceData:
    if election.domain is Domain.BINARY:
        return _DistanceData(distance_columns(election, p), None)
    d = np.ascontiguousarray(distance_tensor(election, p).transpose(2, 0, 1))
    exact = integer_scaled(d, election.num_issues)
    if exact.dtype != object:
        return _DistanceData(exact, None)
    with np.errstate(over="ignore"):
        approx = np.ascontiguousarray(d.astype(np.float64))
    if not np.all(np.isfinite(approx)):
        return _DistanceData(exact, None)
    return _DistanceData(exact, approx)


def _dense_rank(values) -> list:
    order = sorted(set(values))
    return [order.index(v) for v in values]


def distance_keys(data: _DistanceData, subsets=None, chunk: int = _CHUNK):
    """Yield ``(batch, keys)`` where ``keys[r, :, j]`` orders candidates for voter ``j``
    exactly as the true distances restricted to ``batch[r]`` do, as far as the
    nearest candidates are concerned.

    With Python-integer columns the sums are first taken in floating point.
    Each float sum of ``k`` nonnegative terms is within a relative ``(k + 1)``
    units of roundoff of the exact value, so a voter whose nearest candidate
    is separated from all others by more than that bound is decided by the
    float sums.  Every other voter is re-evaluated exactly and its candidates
    replaced by their exact dense ranks.
    """
    if data.approx is None:
        yield from subset_sums(data.exact, subsets, chunk)
        return
    num_items = data.exact.shape[0]
    rel = 4.0 * (num_items + 2) * np.finfo(np.float64).eps
    for batch, sums in subset_sums(data.approx, subsets, chunk):
        nearest = sums.min(axis=1, keepdims=True)
        close = sums <= nearest + rel * (sums + nearest) + 1e-300
        doubtful = np.argwhere(close.sum(axis=1) > 1)
        for r, j in doubtful:
            exact = data.exact[list(batch[r]), :, j].sum(axis=0)
            sums[r, :, j] = _dense_rank(list(exact))
        yield batch, sums


def batch_vote_counts(sums: np.ndarray, tie: TieRule) -> np.ndarray:
    """Vote counts per candidate for a batch of distance sums ``(batch, m, n)``."""
    target = sums[:, TARGET, :]
    rivals = sums[:, 1:, :]
    nearest = rivals.min(axis=1)
    if tie is TieRule.BEST_CASE:
        to_target = np.asarray(target <= nearest, dtype=bool)
    else:
        to_target = np.asarray(target < nearest, dtype=bool)
    choice = np.where(to_target, TARGET, rivals.argmin(axis=1).astype(np.int64) + 1)
    m = sums.shape[1]
    return (choice[:, None, :] == np.arange(m)[None, :, None]).sum(axis=2)


def _batch_wins(counts: np.ndarray, tie: TieRule) -> np.ndarray:
    own = counts[:, TARGET]
    best_rival = counts[:, 1:].max(axis=1)
    return own >= best_rival if tie is TieRule.BEST_CASE else own > best_rival


def solve_isc_exhaustive(
    election: Election, p: int, tie: TieRule, max_issues: int = DEFAULT_MAX_ISSUES
):
    """Smallest (canonical order) issue set on which the target wins, or ``None``."""
    p = check_norm(p)
    tie = TieRule.parse(tie)
    check_capacity(election.num_issues, max_issues)
    for batch, sums in distance_keys(_distance_data(election, p)):
        wins = _batch_wins(batch_vote_counts(sums, tie), tie)
        hits = np.flatnonzero(wins)
        if hits.size:
            return batch[hits[0]]
    return None


def solve_maxsupport_exhaustive(
    election: Election, p: int, tie: TieRule, max_issues: int = DEFAULT_MAX_ISSUES
) -> SolveOutcome:
    """Issue set maximizing the target's support; canonical-first among maximizers."""
    p = check_norm(p)
    tie = TieRule.parse(tie)
    check_capacity(election.num_issues, max_issues)
    best_support, best_set, best_votes = -1, None, None
    for batch, sums in distance_keys(_distance_data(election, p)):
        counts = batch_vote_counts(sums, tie)
        r = int(np.argmax(counts[:, TARGET]))
        if counts[r, TARGET] > best_support:
            best_support = int(counts[r, TARGET])
            best_set = batch[r]
            best_votes = tuple(int(x) for x in counts[r])
    return SolveOutcome(best_set, best_votes, best_support, wins_from_counts(best_votes, tie))


def supports_of(election: Election, p: int, tie: TieRule, subsets) -> list:
    """Target support for each of the given issue subsets."""
    tie = TieRule.parse(tie)
    data = _distance_data(election, check_norm(p))
    out = []
    for _, sums in distance_keys(data, subsets):
        out.extend(int(x) for x in batch_vote_counts(sums, tie)[:, TARGET])
    return out


class Satisfaction(enum.Enum):
    WEAK = "weak"  # row sum >= 0
    STRICT = "strict"  # row sum > 0


class WinRule(enum.Enum):
    ALL_ROWS = "all_rows"
    COUNT_ROWS = "count_rows"


@dataclass(frozen=True)
class MarginInstance:
    """Rational matrix whose row sums over a column subset encode win conditions.

    A row is satisfied by a column subset when its sum over those columns is
    nonnegative (``WEAK``) or positive (``STRICT``).  ``ALL_ROWS`` asks for a
    subset satisfying every row; ``COUNT_ROWS`` maximizes the number of
    satisfied rows, and as a two-candidate decision problem asks whether the
    satisfied rows form a plurality.
    """

    entries: tuple
    satisfaction: Satisfaction = Satisfaction.WEAK
    win_rule: WinRule = WinRule.ALL_ROWS

    def __post_init__(self):
        try:
            entries = tuple(tuple(_rational(x) for x in row) for row in self.entries)
        except TypeError:
            raise UsageError("margin entries must be a matrix") from None
        if not entries or not entries[0]:
            raise UsageError("a margin instance needs at least one row and one column")
        if any(len(row) != len(entries[0]) for row in entries):
            raise UsageError("margin matrix rows must have equal length")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "satisfaction", Satisfaction(self.satisfaction))
        object.__setattr__(self, "win_rule", WinRule(self.win_rule))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def row_sums(self, columns) -> tuple:
        return tuple(sum(row[k] for k in columns) for row in self.entries)

    def satisfied_rows(self, columns) -> int:
        sums = self.row_sums(columns)
        if self.satisfaction is Satisfaction.WEAK:
            return sum(1 for s in sums if s >= 0)
        return sum(1 for s in sums if s > 0)

    def with_mode(self, satisfaction=None, win_rule=None) -> "MarginInstance":
        return MarginInstance(
            self.entries,
            self.satisfaction if satisfaction is None else satisfaction,
            self.win_rule if win_rule is None else win_rule,
        )


def _rational(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, float):
        return _rational(Fraction(x))
    if isinstance(x, str):
        return _rational(Fraction(x.strip()))
    raise TypeError(f"unsupported margin entry {x!r}")


@dataclass(frozen=True)
class MarginSolution:
    """Best column subset of a margin instance.

    ``columns`` is ``None`` only for ``ALL_ROWS`` instances with no satisfying
    subset.  ``satisfied`` is the number of satisfied rows for ``columns``
    (or the best count seen when no subset satisfies all rows).
    """

    columns: tuple | None
    satisfied: int
    all_rows: bool


def solve_margin(mi: MarginInstance, max_cols: int = DEFAULT_MAX_ISSUES) -> MarginSolution:
    """Exhaustive search over the nonempty column subsets of a margin instance."""
    check_capacity(mi.cols, max_cols)
    matrix = np.empty((mi.rows, mi.cols), dtype=object)
    matrix[:] = [list(row) for row in mi.entries]
    columns = integer_scaled(np.ascontiguousarray(matrix.T), mi.cols)
    best_count, best_cols = -1, None
    for batch, sums in subset_sums(columns):
        if mi.satisfaction is Satisfaction.WEAK:
            ok = np.asarray(sums >= 0, dtype=bool)
        else:
            ok = np.asarray(sums > 0, dtype=bool)
        counts = ok.sum(axis=1)
        r = int(np.argmax(counts))
        if mi.win_rule is WinRule.ALL_ROWS and counts[r] == mi.rows:
            return MarginSolution(batch[r], mi.rows, True)
        if counts[r] > best_count:
            best_count, best_cols = int(counts[r]), batch[r]
    if mi.win_rule is WinRule.ALL_ROWS:
        return MarginSolution(None, best_count, False)
    return MarginSolution(best_cols, best_count, best_count == mi.rows)


def margin_controllable(mi: MarginInstance, max_cols: int = DEFAULT_MAX_ISSUES) -> bool:
    """Decision answer: every row satisfiable at once, or a two-candidate plurality."""
    sol = solve_margin(mi, max_cols)
    if mi.win_rule is WinRule.ALL_ROWS:
        return sol.columns is not None
    if mi.satisfaction is Satisfaction.WEAK:
        return sol.satisfied >= mi.rows - sol.satisfied
    return sol.satisfied > mi.rows - sol.satisfied
