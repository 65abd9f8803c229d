"""Tests for the Method of Equal Shares and its exhaustive ε-limit variant."""
import itertools
from fractions import Fraction

import pytest

from axioms.ejr import check_ejr, check_ejr_approval
from axioms.exhaustive import check_exhaustive
from axioms.priceability import verify_price_system
from data.election import approval_election, build_election, is_feasible
from data.errors import ParameterError, StabilizationError
from data.models import PaymentLedger, PriceSystem, TieBreak
from generators import random_approval, random_cardinal, seeded
from rules.equal_shares import initial_eps, min_rho, perturb, run_equal_shares, run_equal_shares_branches, run_equal_shares_eps, run_equal_shares_exhaustive

F = Fraction

APPROVAL = seeded(random_approval, 1000)
CARDINAL = seeded(random_cardinal, 1000)
SAMPLE_POINTS = 1000


def brute_force_min_rho(c, ledger, e):
    """Scan every breakpoint segment of Σ min(r_i, u_i·ρ) directly."""
    supporters = [i for i in e.supporters(c) if ledger.remaining[i] > 0]
    points = sorted({ledger.remaining[i] / e.u(i, c) for i in supporters})

    def paid(rho):
        return sum((min(ledger.remaining[i], e.u(i, c) * rho) for i in supporters), F(0))

    if paid(points[-1] if points else F(0)) < e.cost[c]:
        return None
    for point in points:
        if paid(point) >= e.cost[c]:
            capped = [i for i in supporters if ledger.remaining[i] / e.u(i, c) < point]
            free = [i for i in supporters if i not in capped]
            left = e.cost[c] - sum((ledger.remaining[i] for i in capped), F(0))
            return left / sum((e.u(i, c) for i in free), F(0))


# ── min_rho ───────────────────────────────────────────────────────


class TestMinRho:
    def test_approval_equal_split(self):
        e = approval_election({"a": F(1, 2)}, [["a"], ["a"]])
        assert min_rho("a", PaymentLedger.fresh(2), e) == F(1, 4)

    def test_capped_voter(self):
        e = build_election({"a": F(1, 2)}, [{"a": 1}, {"a": F(1, 4)}])
        ledger = PaymentLedger.fresh(2)
        ledger.remaining[1] = F(1, 10)
        # voter 1 is capped at 1/10, voter 2 pays the other 2/5 at rate 1/4
        assert min_rho("a", ledger, e) == F(8, 5)

    def test_unaffordable(self):
        e = approval_election({"a": F(1)}, [["a"], []])
        assert min_rho("a", PaymentLedger.fresh(2), e) is None

    @pytest.mark.parametrize("index", range(0, 1000, 5))
    def test_matches_brute_force(self, index):
        e = CARDINAL[index]
        ledger = PaymentLedger.fresh(e.n)
        for i in e.voters:
            ledger.remaining[i] = F(1, e.n) * F((i * 7) % 5 + 1, 5)
        for c in e.candidates:
            rho = min_rho(c, ledger, e)
            assert rho == brute_force_min_rho(c, ledger, e)
            if rho is not None:
                assert sum((min(ledger.remaining[i], e.u(i, c) * rho) for i in e.supporters(c)), F(0)) == e.cost[c]

    @pytest.mark.parametrize("index", range(50))
    def test_sampled_and_bisected(self, index):
        e = CARDINAL[index]
        ledger = PaymentLedger.fresh(e.n)
        for i in e.voters:
            ledger.remaining[i] = F(1, e.n) * F((i * 3) % 4 + 1, 4)

        for c in e.candidates:
            supporters = [i for i in e.supporters(c) if ledger.remaining[i] > 0]

            def paid(rho):
                return sum((min(ledger.remaining[i], e.u(i, c) * rho) for i in supporters), F(0))

            rho = min_rho(c, ledger, e)
            top = max((ledger.remaining[i] / e.u(i, c) for i in supporters), default=F(1))
            if rho is None:
                assert paid(top) < e.cost[c]
                continue
            assert paid(rho) == e.cost[c]
            for k in range(SAMPLE_POINTS):
                point = 2 * top * k / SAMPLE_POINTS
                assert (paid(point) >= e.cost[c]) == (point >= rho), point
            low, high = F(0), top
            for _ in range(60):
                middle = (low + high) / 2
                if paid(middle) >= e.cost[c]:
                    high = middle
                else:
                    low = middle
            assert low < rho <= high
            assert high - low <= top / 2**60


# ── Worked instances ──────────────────────────────────────────────


class TestRunEqualShares:
    def test_unit_cost_approval(self):
        e = approval_election({c: F(1, 3) for c in ("a", "b", "c")}, [["a", "b"], ["a", "b"], ["c"]])
        W, ledger, trace = run_equal_shares(e)
        assert W.selected == {"a", "b", "c"}
        assert trace.sequence() == ["a", "b", "c"]
        assert [step.rho for step in trace.steps] == [F(1, 6), F(1, 6), F(1, 3)]
        assert all(value == 0 for value in ledger.remaining.values())

    def test_tie_set_recorded(self):
        e = approval_election({"a": F(1, 2), "b": F(1, 2)}, [["a", "b"], ["a", "b"]])
        _, _, trace = run_equal_shares(e)
        assert trace.steps[0].tie_set == ["a", "b"]
        assert trace.steps[0].candidate == "a"

    def test_min_cost_tie_break(self):
        e = approval_election({"a": F(1, 2), "b": F(1, 4)}, [["a", "b"], ["a"]])
        # both are affordable at ρ = 1/4
        _, _, trace = run_equal_shares(e, TieBreak.MIN_COST)
        assert trace.steps[0].tie_set == ["a", "b"]
        assert trace.sequence() == ["b", "a"]
        _, _, trace = run_equal_shares(e, TieBreak.INDEX)
        assert trace.sequence() == ["a", "b"]

    def test_all_policy_refused_by_single_run(self):
        e = approval_election({"a": F(1)}, [["a"]])
        with pytest.raises(ParameterError):
            run_equal_shares(e, TieBreak.ALL)

    def test_branches(self):
        e = approval_election({"a": F(1, 2), "b": F(1, 2), "c": F(1, 2)}, [["a", "b"], ["a", "b"], ["c"], ["c"]])
        outcomes = {W.selected for W, _, _ in run_equal_shares_branches(e)}
        assert outcomes == {frozenset({"a", "c"}), frozenset({"b", "c"})}


# ── Properties over seeded instances ──────────────────────────────


class TestEqualSharesProperties:
    @pytest.mark.parametrize("e", APPROVAL + CARDINAL)
    def test_budget_and_ledger(self, e):
        W, ledger, trace = run_equal_shares(e)
        assert is_feasible(W.selected, e)
        for c in W:
            assert ledger.paid_for(c) == e.cost[c]
        for i in e.voters:
            assert ledger.remaining[i] >= 0
            assert ledger.paid_by(i) + ledger.remaining[i] == F(1, e.n)
            assert all(e.u(i, c) > 0 for c in ledger.payments.get(i, {}))
        rhos = [step.rho for step in trace.steps]
        assert rhos == sorted(rhos)

    @pytest.mark.parametrize("e", CARDINAL)
    def test_payments_proportional_to_utility(self, e):
        _, _, trace = run_equal_shares(e)
        remaining = {i: F(1, e.n) for i in e.voters}
        for step in trace.steps:
            for i, amount in step.payments.items():
                remaining[i] -= amount
            free = [i for i in e.supporters(step.candidate) if remaining[i] > 0]
            for i in free:
                assert step.payments[i] == step.rho * e.u(i, step.candidate)
            for i, j in itertools.combinations(free, 2):
                assert step.payments[i] * e.u(j, step.candidate) == step.payments[j] * e.u(i, step.candidate)
            capped = [i for i in step.payments if i not in free]
            assert all(step.payments[i] <= step.rho * e.u(i, step.candidate) for i in capped)

    @pytest.mark.parametrize("e", APPROVAL + CARDINAL)
    def test_ledger_is_a_price_system(self, e):
        W, ledger, _ = run_equal_shares(e)
        assert verify_price_system(e, W, PriceSystem(b=F(1), payments=ledger.payments)).satisfied

    @pytest.mark.parametrize("e", APPROVAL)
    def test_ejr_on_approval(self, e):
        W, _, _ = run_equal_shares(e)
        assert check_ejr_approval(e, W).satisfied

    @pytest.mark.parametrize("e", CARDINAL)
    def test_ejr_up_to_one(self, e):
        W, _, _ = run_equal_shares(e)
        assert check_ejr(e, W).satisfied


# ── ε-perturbation and the exhaustive limit ───────────────────────


class TestExhaustiveLimit:
    def test_perturb_fills_zeros(self):
        e = approval_election({"a": F(1, 2), "b": F(1, 2)}, [["a"], ["b"]])
        perturbed = perturb(e, F(1, 100))
        assert perturbed.u(1, "b") == F(1, 100)
        assert perturbed.u(1, "a") == 1

    @pytest.mark.parametrize("eps", [F(0), F(1), F(-1, 10)])
    def test_eps_range(self, eps):
        e = approval_election({"a": F(1, 2), "b": F(1, 2)}, [["a"], ["b"]])
        with pytest.raises(ParameterError):
            run_equal_shares_eps(e, eps)

    def test_zero_utility_payers_flagged(self):
        e = approval_election({"a": F(1, 3), "b": F(1, 3), "c": F(1, 3)}, [["a"], ["a"], ["b", "c"]])
        W, ledger, trace, eps = run_equal_shares_exhaustive(e)
        assert len(W) == 3
        assert eps <= initial_eps(e)
        assert ledger.zero_utility
        flagged = {(i, step.candidate) for step in trace.steps for i in step.zero_utility_payers}
        assert flagged == ledger.zero_utility

    def test_no_zero_utilities_runs_plain_rule(self):
        e = build_election({"a": F(1, 2), "b": F(1, 2)}, [{"a": 1, "b": F(1, 2)}, {"a": F(1, 2), "b": 1}])
        W, _, trace, _ = run_equal_shares_exhaustive(e)
        assert trace.rule == "equal-shares"
        assert W.selected == {"a", "b"}

    def test_stabilization_failure(self, monkeypatch):
        e = approval_election({"a": F(1, 3), "b": F(1, 3), "c": F(1, 3)}, [["a"], ["a"], ["b", "c"]])
        runs = iter(range(1000))

        def alternating(election, eps, tie_break=TieBreak.INDEX):
            W, ledger, trace = run_equal_shares(election)
            trace.steps = trace.steps[: next(runs) % 2 + 1]
            return W, ledger, trace

        monkeypatch.setattr("rules.equal_shares.run_equal_shares_eps", alternating)
        monkeypatch.setenv("PB_EPS_HALVINGS", "4")
        with pytest.raises(StabilizationError) as info:
            run_equal_shares_exhaustive(e)
        assert info.value.previous_trace is not None
        assert info.value.current_trace is not None

    @pytest.mark.parametrize("e", APPROVAL[::2] + CARDINAL[::2])
    def test_limit_outcome_is_exhaustive(self, e):
        W, ledger, _, _ = run_equal_shares_exhaustive(e)
        assert check_exhaustive(e, W).satisfied
        for c in W:
            assert ledger.paid_for(c) == e.cost[c]
