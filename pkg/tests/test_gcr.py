"""Tests for the Greedy Cohesive Rule, its flow-based payments and the priceable completion."""
import itertools
from fractions import Fraction

import pytest

from axioms.fjr import check_fjr
from axioms.priceability import price_system_violation, verify_price_system
from data.election import approval_election, build_election, is_feasible, total_cost, voter_utility
from data.errors import ParameterError, SearchBoundExceeded
from data.models import PaymentLedger, PriceSystem
from data.rational import ceil_fraction
from generators import random_approval, random_cardinal, seeded
from rules.gcr import best_beta_for_bundle, gcr_payment_construction, gcr_priceable_completion, run_gcr, run_gcr_all
from utils.progress import progress

F = Fraction

INSTANCES = seeded(random_approval, 500) + seeded(random_cardinal, 500)


def enumerate_beta(T, active, e):
    """Largest min-utility over every affordable group, by listing all groups."""
    r = ceil_fraction(total_cost(T, e) * e.n)
    best = None
    for size in range(r, len(active) + 1):
        for group in itertools.combinations(active, size):
            beta = min(voter_utility(i, T, e) for i in group)
            if beta > 0 and (best is None or beta > best):
                best = beta
    return best


def all_bundles(candidates):
    for size in range(1, len(candidates) + 1):
        yield from itertools.combinations(candidates, size)


@pytest.fixture
def laminar():
    # three voters share X and Y, one voter has X and Z
    x = {f"x{j}": F(1, 8) for j in range(1, 5)}
    y = {f"y{j}": F(1, 8) for j in range(1, 3)}
    z = {f"z{j}": F(1, 8) for j in range(1, 3)}
    return approval_election({**x, **y, **z}, [list(x) + list(y)] * 3 + [list(x) + list(z)])


# ── best_beta_for_bundle ──────────────────────────────────────────


class TestBestBeta:
    @pytest.mark.parametrize("e", INSTANCES[::4])
    def test_matches_group_enumeration(self, e):
        active = list(e.voters)
        for T in all_bundles(e.candidates):
            found = best_beta_for_bundle(T, active, e)
            expected = enumerate_beta(T, active, e)
            if expected is None:
                assert found is None
                continue
            beta, group = found
            assert beta == expected
            assert len(group) == ceil_fraction(total_cost(T, e) * e.n)
            assert all(voter_utility(i, T, e) >= beta for i in group)

    def test_unaffordable_bundle(self):
        e = approval_election({"a": F(1)}, [["a"], []])
        assert best_beta_for_bundle(["a"], [1], e) is None


# ── run_gcr ───────────────────────────────────────────────────────


class TestRunGcr:
    def test_laminar_rounds(self, laminar):
        W, rounds = run_gcr(laminar)
        assert W.selected == {"x1", "x2", "x3", "x4", "y1", "y2", "z1", "z2"}
        assert [round_.beta for round_ in rounds] == [F(6), F(2)]
        assert [round_.group for round_ in rounds] == [[1, 2, 3], [4]]
        assert rounds[1].bundle == ["z1", "z2"]

    def test_larger_beta_beats_cheaper_bundle(self):
        e = approval_election({"a": F(1, 2), "b": F(1, 4)}, [["a", "b"]])
        _, rounds = run_gcr(e)
        assert rounds[0].bundle == ["a", "b"]
        assert rounds[0].beta == 2

    def test_cheapest_bundle_wins_ties(self):
        e = approval_election({"a": F(1, 2), "b": F(1, 4), "c": F(1, 2)}, [["a", "b"], ["c"]])
        _, rounds = run_gcr(e)
        # every affordable bundle reaches β = 1
        assert rounds[0].bundle == ["b"]

    @pytest.mark.parametrize("e", INSTANCES[::3])
    def test_first_round_is_the_global_best(self, e):
        _, rounds = run_gcr(e)
        scores = [found[0] for T in all_bundles(e.candidates) if (found := best_beta_for_bundle(T, list(e.voters), e))]
        if not scores:
            assert rounds == []
        else:
            assert rounds[0].beta == max(scores)

    @pytest.mark.parametrize("e", INSTANCES)
    def test_feasible_and_fjr(self, e):
        W, rounds = run_gcr(e)
        assert is_feasible(W.selected, e)
        groups = [set(round_.group) for round_ in rounds]
        assert all(not a & b for a, b in itertools.combinations(groups, 2))
        assert check_fjr(e, W).satisfied

    @pytest.mark.parametrize("e", INSTANCES)
    def test_beta_never_increases(self, e):
        _, rounds = run_gcr(e)
        betas = [round_.beta for round_ in rounds]
        assert betas == sorted(betas, reverse=True)
        assert all(beta > 0 for beta in betas)

    def test_candidate_bound(self):
        e = approval_election({c: F(1, 3) for c in "abc"}, [["a", "b", "c"]])
        with pytest.raises(SearchBoundExceeded) as info:
            run_gcr(e, max_candidates=2)
        assert info.value.name == "gcr_candidates"
        assert info.value.actual == 3

    def test_reports_progress(self, laminar):
        seen = []

        def listen(task, instance, status):
            seen.append((task, status))

        progress.subscribe(listen)
        try:
            run_gcr(laminar)
        finally:
            progress.unsubscribe(listen)
        assert any(task == "gcr" and status.startswith("Round 2") for task, status in seen)
        assert seen[-1] == ("gcr", "Done")


class TestRunGcrAll:
    def test_contains_the_deterministic_outcome(self):
        for e in INSTANCES[::10]:
            W, _ = run_gcr(e)
            assert W.selected in {outcome.selected for outcome in run_gcr_all(e)}

    def test_alternative_groups(self):
        e = approval_election({"a": F(1, 3), "b": F(1, 3), "c": F(1, 3)}, [["a", "b"], ["a"], ["c"]])
        # a, b and c tie; a may be paid by voter 1, who is then gone for b
        outcomes = {outcome.selected for outcome in run_gcr_all(e)}
        assert outcomes == {frozenset({"a", "c"}), frozenset({"a", "b", "c"})}
        W, _ = run_gcr(e)
        assert W.selected == {"a", "c"}


# ── Payments through maximum flow ─────────────────────────────────


class TestPaymentConstruction:
    @pytest.mark.parametrize("e", INSTANCES)
    def test_ledger_satisfies_budget_conditions(self, e):
        W, rounds = run_gcr(e)
        ledger = gcr_payment_construction(rounds, e)
        system = PriceSystem(b=F(1), payments=ledger.payments)
        assert price_system_violation(e, W, system, conditions=("C1", "C2", "C3", "C4")) is None
        for round_ in rounds:
            members = set(round_.group)
            for c in round_.bundle:
                assert {i for i, row in ledger.payments.items() if row.get(c)} <= members

    def test_mixed_denominators(self):
        e = build_election({"a": F(1, 3), "b": F(1, 4)}, [{"a": 1, "b": F(1, 2)}, {"a": F(1, 2), "b": 1}])
        W, rounds = run_gcr(e)
        ledger = gcr_payment_construction(rounds, e)
        for c in W:
            assert ledger.paid_for(c) == e.cost[c]

    def test_node_budget(self, laminar):
        _, rounds = run_gcr(laminar)
        with pytest.raises(SearchBoundExceeded):
            gcr_payment_construction(rounds, laminar, node_budget=1)


class TestPriceableCompletion:
    @pytest.mark.parametrize("e", INSTANCES)
    def test_completion_is_priceable(self, e):
        W, rounds = run_gcr(e)
        ledger = gcr_payment_construction(rounds, e)
        completed, final = gcr_priceable_completion(e, W, ledger)
        assert W.selected <= completed.selected
        assert is_feasible(completed.selected, e)
        assert verify_price_system(e, completed, PriceSystem(b=F(1), payments=final.payments)).satisfied

    def test_leftover_money_is_spent(self):
        e = approval_election({"a": F(1, 2), "c": F(1, 6)}, [["a", "c"], ["a"], ["c"]])
        W, rounds = run_gcr(e)
        assert W.selected == {"c"}
        completed, ledger = gcr_priceable_completion(e, W, gcr_payment_construction(rounds, e))
        # voter 1 kept 1/6 after paying for c, voter 2 still holds 1/3
        assert completed.selected == {"a", "c"}
        assert ledger.payments[1] == {"c": F(1, 6), "a": F(1, 6)}
        assert ledger.payments[2] == {"a": F(1, 3)}

    def test_rejects_ledger_that_does_not_pay_for_the_outcome(self, laminar):
        W, _ = run_gcr(laminar)
        with pytest.raises(ParameterError, match="C3"):
            gcr_priceable_completion(laminar, W, PaymentLedger.fresh(laminar.n))
