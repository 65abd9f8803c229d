"""Tests for ranked ballots: lexicographic equal shares, utility conversions and PSC."""
from fractions import Fraction

import pytest

from axioms.psc import check_psc, guaranteed_seats, solid_coalitions
from data.errors import ParameterError, StructuralError
from data.models import Outcome, RankedElection, TieBreak, UtilityScheme
from generators import random_ranked, seeded
from rules.ordinal import run_equal_shares_lex, to_cardinal, water_fill

F = Fraction

RANKED = seeded(random_ranked, 1000)


@pytest.fixture
def two_blocks():
    return RankedElection(
        candidates=("a", "b", "c", "d"),
        k=2,
        rankings=(("a", "b", "c", "d"), ("a", "b", "c", "d"), ("c", "d", "a", "b"), ("c", "d", "a", "b")),
    )


class TestWaterFill:
    def test_capped_payer(self):
        charges = water_fill({1: F(1, 10), 2: F(1, 2), 3: F(1, 2)}, F(1, 2))
        assert charges == {1: F(1, 10), 2: F(1, 5), 3: F(1, 5)}

    def test_equal_split(self):
        assert water_fill({1: F(1), 2: F(1)}, F(1)) == {1: F(1, 2), 2: F(1, 2)}

    def test_not_enough_money(self):
        with pytest.raises(ParameterError):
            water_fill({1: F(1, 4)}, F(1, 2))


class TestConversions:
    def test_lex_exponential(self, two_blocks):
        e = to_cardinal(two_blocks)
        assert e.u(1, "a") == F(1, 4)
        assert e.u(1, "d") == F(1, 256)
        assert e.cost["a"] == F(1, 2)

    @pytest.mark.parametrize("re", RANKED[:200])
    def test_lex_dominance(self, re):
        e = to_cardinal(re, UtilityScheme.LEX_EXPONENTIAL)
        for i in re.voters:
            ranking = re.rankings[i - 1]
            for position, c in enumerate(ranking):
                assert e.u(i, c) > sum((e.u(i, below) for below in ranking[position + 1:]), F(0))

    def test_borda(self):
        re = RankedElection(candidates=("a", "b", "c"), k=1, rankings=(("a", "b", "c"), ("c", "b", "a")))
        e = to_cardinal(re, UtilityScheme.BORDA)
        assert e.u(1, "a") == 1
        assert e.u(1, "b") == F(1, 2)
        assert e.u(1, "c") == 0

    def test_borda_rejects_unanimous_last(self):
        re = RankedElection(candidates=("a", "b"), k=1, rankings=(("a", "b"), ("a", "b")))
        with pytest.raises(StructuralError):
            to_cardinal(re, UtilityScheme.BORDA)


class TestEqualSharesLex:
    def test_two_blocks(self, two_blocks):
        W, ledger, trace = run_equal_shares_lex(two_blocks)
        assert W.selected == {"a", "c"}
        assert [step.rho for step in trace.steps] == [1, 1]
        assert trace.steps[0].tie_set == ["a", "c"]
        assert all(value == 0 for value in ledger.remaining.values())

    def test_second_preferences(self):
        re = RankedElection(
            candidates=("a", "b", "c"),
            k=2,
            rankings=(("a", "b", "c"), ("b", "a", "c"), ("c", "a", "b"), ("c", "b", "a")),
        )
        _, _, trace = run_equal_shares_lex(re)
        # nobody's top choice is backed by two voters except c
        assert trace.sequence() == ["c", "a"]
        assert [step.rho for step in trace.steps] == [1, 2]

    def test_all_tie_break_refused(self, two_blocks):
        with pytest.raises(ParameterError):
            run_equal_shares_lex(two_blocks, TieBreak.ALL)

    @pytest.mark.parametrize("re", RANKED)
    def test_properties(self, re):
        W, ledger, trace = run_equal_shares_lex(re)
        assert len(W) <= re.k
        for step in trace.steps:
            assert sum(step.payments.values(), F(0)) == F(1, re.k)
            assert all(re.pos(i, step.candidate) <= step.rho for i in step.payments)
        assert all(value >= 0 for value in ledger.remaining.values())
        assert check_psc(re, W).satisfied


class TestPsc:
    @pytest.mark.parametrize(
        "size, strict, seats",
        [(3, False, 1), (6, False, 2), (2, False, 0), (3, True, 0), (4, True, 1), (6, True, 1)],
    )
    def test_guaranteed_seats(self, size, strict, seats):
        re = RankedElection(candidates=("a", "b"), k=2, rankings=(("a", "b"),) * 6)
        assert guaranteed_seats(size, re, strict_quota=strict) == seats

    def test_solid_coalitions(self, two_blocks):
        coalitions = solid_coalitions(two_blocks)
        assert coalitions[0] == (frozenset({"a"}), [1, 2])
        assert coalitions[1] == (frozenset({"c"}), [3, 4])
        assert coalitions[-1] == (frozenset({"a", "b", "c", "d"}), [1, 2, 3, 4])

    def test_violation(self, two_blocks):
        verdict = check_psc(two_blocks, Outcome(selected=frozenset({"a", "b"})))
        assert verdict.violated
        assert verdict.witness.voters == [3, 4]
        assert verdict.witness.candidates == ["c"]
        assert verdict.witness.ell == 1

    def test_satisfied(self, two_blocks):
        assert check_psc(two_blocks, Outcome(selected=frozenset({"a", "c"}))).satisfied

    def test_committee_too_large(self, two_blocks):
        with pytest.raises(ParameterError):
            check_psc(two_blocks, Outcome(selected=frozenset({"a", "b", "c"})))
