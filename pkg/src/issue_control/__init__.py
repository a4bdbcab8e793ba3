"""Constructive election control by issue selection in the spatial voting model."""

from issue_control.election import (
    TARGET,
    Domain,
    Election,
    SolveOutcome,
    TieRule,
    evaluate,
    support,
    target_wins,
    vote_counts,
)
from issue_control.errors import (
    CapacityError,
    InstanceParseError,
    IssueControlError,
    RealizationError,
    UsageError,
)
from issue_control.exact import (
    MarginInstance,
    Satisfaction,
    WinRule,
    solve_isc_exhaustive,
    solve_margin,
    solve_maxsupport_exhaustive,
)
from issue_control.heuristics import greedy_max_support
from issue_control.poly import best_single_issue

__version__ = "0.1.0"

__all__ = [
    "TARGET", "Domain", "Election", "SolveOutcome", "TieRule", "evaluate", "support",
    "target_wins", "vote_counts", "CapacityError", "InstanceParseError", "IssueControlError",
    "RealizationError", "UsageError", "MarginInstance", "Satisfaction", "WinRule",
    "solve_isc_exhaustive", "solve_margin", "solve_maxsupport_exhaustive",
    "greedy_max_support", "best_single_issue",
]
