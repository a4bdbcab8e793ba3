from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import all_subsets, elections, oracle_votes, oracle_wins
from issue_control.election import (
    Domain,
    Election,
    TieRule,
    cast_votes,
    evaluate,
    margin_tensor,
    normalize_binary,
    restricted_distance,
    support,
    target_wins,
    vote_counts,
)
from issue_control.errors import UsageError

# issues: healthcare, environment, restrict-immigration; target B listed first
INTRO = Election(
    [[0, 0, 1], [1, 1, 0]],
    [[1, 1, 1]] * 3 + [[1, 1, 0]] * 2,
    Domain.BINARY,
)
BEST, WORST = TieRule.BEST_CASE, TieRule.WORST_CASE


class TestConstruction:
    def test_needs_two_candidates(self):
        with pytest.raises(UsageError):
            Election([[0]], [[0]])

    def test_needs_a_voter_and_an_issue(self):
        with pytest.raises(UsageError):
            Election([[0], [1]], [])
        with pytest.raises(UsageError):
            Election([[], []], [[]])

    def test_ragged_rows_rejected(self):
        with pytest.raises(UsageError):
            Election([[0, 1], [1]], [[0, 0]])

    def test_binary_domain_checks_entries(self):
        with pytest.raises(UsageError):
            Election([[0, 2], [1, 1]], [[0, 0]], Domain.BINARY)

    def test_positions_become_exact(self):
        e = Election([["0.1", "1/3"], [0.5, 2]], [[Fraction(1, 7), 1]])
        assert e.candidates[0] == (Fraction(1, 10), Fraction(1, 3))
        assert e.candidates[1] == (Fraction(1, 2), 2)
        assert isinstance(e.candidates[1][1], int)

    def test_bad_string_rejected(self):
        with pytest.raises(UsageError):
            Election([["abc"], [0]], [[0]])

    def test_nan_rejected(self):
        with pytest.raises(UsageError):
            Election([[float("nan")], [0]], [[0]])

    def test_shape_properties(self):
        assert (INTRO.num_candidates, INTRO.num_voters, INTRO.num_issues) == (2, 5, 3)
        assert INTRO.target == 0


class TestRestrictedDistance:
    def test_identity_is_zero(self):
        e = Election([[1, 2, 3], [0, 0, 0]], [[1, 2, 3]])
        for s in all_subsets(3):
            assert restricted_distance(e, 0, 0, s, 2) == 0

    def test_direct_power_sum(self):
        e = Election([[0, 0], [5, 5]], [[1, 1]])
        assert restricted_distance(e, 0, 0, (0, 1), 2) == 2

    def test_single_term(self):
        e = Election([[0, 0, 0], [1, 1, 1]], [[1, 0, 1]])
        assert restricted_distance(e, 0, 0, (2,), 1) == 1

    @pytest.mark.parametrize("voter,candidate,issues", [(1, 0, (0,)), (0, 2, (0,)), (0, 0, (3,)), (0, 0, ())])
    def test_out_of_range(self, voter, candidate, issues):
        e = Election([[0, 0, 0], [1, 1, 1]], [[1, 0, 1]])
        with pytest.raises(UsageError):
            restricted_distance(e, voter, candidate, issues, 1)

    def test_bad_norm(self):
        with pytest.raises(UsageError):
            restricted_distance(INTRO, 0, 0, (0,), 0)

    @given(elections(binary=False), st.integers(1, 3), st.data())
    def test_additive_over_disjoint_sets(self, e, p, data):
        issues = list(range(e.num_issues))
        left = data.draw(st.lists(st.sampled_from(issues), min_size=1, unique=True))
        rest = [k for k in issues if k not in left]
        if not rest:
            return
        j = data.draw(st.integers(0, e.num_voters - 1))
        i = data.draw(st.integers(0, e.num_candidates - 1))
        whole = restricted_distance(e, j, i, left + rest, p)
        assert whole == restricted_distance(e, j, i, left, p) + restricted_distance(e, j, i, rest, p)


class TestVoting:
    def test_strict_preference(self):
        e = Election([[1], [0]], [[1]])
        assert cast_votes(e, (0,), 1, BEST) == (0,)
        assert cast_votes(e, (0,), 1, WORST) == (0,)

    def test_exact_tie(self):
        e = Election([[1], [0]], [["1/2"]])
        assert cast_votes(e, (0,), 1, BEST) == (0,)
        assert cast_votes(e, (0,), 1, WORST) == (1,)

    def test_rival_ties_go_to_lowest_index(self):
        e = Election([[5], [0], [0]], [[0]])
        assert cast_votes(e, (0,), 1, BEST) == (1,)

    def test_worst_case_gives_tie_to_lowest_tied_rival(self):
        e = Election([[0], [3], [0], [0]], [[0]])
        assert cast_votes(e, (0,), 2, WORST) == (2,)

    def test_intro_majority_votes_target(self):
        votes = cast_votes(INTRO, (2,), 1, BEST)
        assert votes[:3] == (0, 0, 0)
        assert support(INTRO, (2,), 1, BEST) == 3

    def test_intro_target_wins_either_rule(self):
        assert target_wins(INTRO, (2,), 1, BEST)
        assert target_wins(INTRO, (2,), 1, WORST)

    def test_two_candidate_binary_support(self):
        e = Election([[1, 1], [0, 0]], [[1, 0], [1, 0], [0, 1]], Domain.BINARY)
        assert support(e, (0,), 1, WORST) == 2

    def test_all_voters_at_target(self):
        e = Election([[1, 2], [0, 0]], [[1, 2]] * 4)
        assert support(e, (0, 1), 2, WORST) == 4

    def test_winner_ties(self):
        e = Election([[0], [1]], [[0], [1]])
        assert target_wins(e, (0,), 1, BEST)
        assert not target_wins(e, (0,), 1, WORST)

    def test_single_voter_for_target(self):
        e = Election([[0], [1]], [[0]])
        assert target_wins(e, (0,), 1, BEST)

    def test_evaluate_matches_parts(self):
        out = evaluate(INTRO, [2], 1, BEST)
        assert out.issue_set == (2,)
        assert out.votes == (3, 2)
        assert out.target_support == 3 and out.target_wins

    def test_tie_rule_parse(self):
        assert TieRule.parse("BEST") is BEST
        assert TieRule.parse(WORST) is WORST
        with pytest.raises(UsageError):
            TieRule.parse("median")

    @given(elections(), st.integers(1, 3), st.sampled_from(list(TieRule)), st.data())
    def test_matches_oracle(self, e, p, tie, data):
        s = tuple(sorted(data.draw(st.sets(st.integers(0, e.num_issues - 1), min_size=1))))
        counts = vote_counts(e, s, p, tie)
        assert counts == oracle_votes(e, s, p, tie)
        assert sum(counts) == e.num_voters
        assert target_wins(e, s, p, tie) == oracle_wins(counts, tie)

    @given(elections(), st.integers(1, 3), st.sampled_from(list(TieRule)))
    def test_voted_candidate_is_nearest(self, e, p, tie):
        for s in all_subsets(e.num_issues):
            for j, i in enumerate(cast_votes(e, s, p, tie)):
                dist = [restricted_distance(e, j, c, s, p) for c in range(e.num_candidates)]
                assert dist[i] == min(dist)

    @given(elections(), st.integers(1, 3))
    def test_best_case_support_dominates(self, e, p):
        for s in all_subsets(e.num_issues):
            assert support(e, s, p, BEST) >= support(e, s, p, WORST)

    @given(elections(binary=False), st.integers(1, 3), st.sampled_from(list(TieRule)),
           st.fractions(min_value=Fraction(1, 8), max_value=8))
    def test_scaling_invariance(self, e, p, tie, factor):
        scaled = Election(
            [[x * factor for x in row] for row in e.candidates],
            [[x * factor for x in row] for row in e.voters],
        )
        for s in all_subsets(e.num_issues):
            assert cast_votes(e, s, p, tie) == cast_votes(scaled, s, p, tie)

    @given(elections(binary=True), st.integers(1, 4), st.integers(1, 4), st.sampled_from(list(TieRule)))
    def test_binary_votes_independent_of_norm(self, e, p, q, tie):
        for s in all_subsets(e.num_issues):
            assert cast_votes(e, s, p, tie) == cast_votes(e, s, q, tie)


class TestMarginTensor:
    def test_identical_candidates_give_zero(self):
        e = Election([[1, 2], [1, 2], [1, 2]], [[0, 5], [3, 3]])
        assert all(x == 0 for x in margin_tensor(e, 2).ravel())

    def test_direct_formula(self):
        assert margin_tensor(Election([[0], [1]], [[0]]), 1).tolist() == [[[1]]]

    def test_equidistant_voter(self):
        assert margin_tensor(Election([[0], [2]], [[1]]), 2).tolist() == [[[0]]]

    def test_shape(self):
        e = Election([[0, 0]] * 4, [[1, 1]] * 3)
        assert margin_tensor(e, 1).shape == (3, 3, 2)

    @given(elections(), st.integers(1, 3), st.sampled_from(list(TieRule)))
    def test_target_preferred_iff_margins_nonnegative(self, e, p, tie):
        a = margin_tensor(e, p)
        for s in all_subsets(e.num_issues):
            sums = a[:, :, list(s)].sum(axis=2)
            votes = cast_votes(e, s, p, tie)
            for j in range(e.num_voters):
                col = sums[:, j]
                expected = all(x >= 0 for x in col) if tie is BEST else all(x > 0 for x in col)
                assert (votes[j] == 0) == expected


class TestNormalizeBinary:
    def test_already_normal(self):
        e = Election([[1, 1], [0, 1]], [[0, 1]], Domain.BINARY)
        assert normalize_binary(e) == e

    def test_column_flip(self):
        e = Election([[0, 1], [1, 0]], [[0, 0]], Domain.BINARY)
        n = normalize_binary(e)
        assert n.candidates == ((1, 1), (0, 0))
        assert n.voters == ((1, 0),)

    def test_requires_binary(self):
        with pytest.raises(UsageError):
            normalize_binary(Election([[0], [1]], [[0]]))

    @given(elections(binary=True), st.sampled_from(list(TieRule)))
    def test_support_preserved(self, e, tie):
        n = normalize_binary(e)
        assert all(x == 1 for x in n.candidates[0])
        for s in all_subsets(e.num_issues):
            assert support(e, s, 1, tie) == support(n, s, 1, tie)


def test_float_input_is_exact():
    e = Election([[0.1], [np.float64(0.2)]], [[0.15]])
    assert e.candidates[0][0] == Fraction(0.1)
    assert e.candidates[0][0] != Fraction(1, 10)
