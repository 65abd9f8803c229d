"""Greedy Cohesive Rule.

Each round finds the bundle T and group S maximizing β such that S can afford T
with its share of the budget (|S| ≥ cost(T)·n) and every member gets at least β
from T. The bundle is elected, S and T are removed, and the search repeats.
"""
import itertools
import logging
from fractions import Fraction

from axioms.priceability import price_system_violation
from data.election import total_cost, voter_classes, voter_utility
from data.errors import InternalConsistencyError, ParameterError, SearchBoundExceeded
from data.models import ZERO, CohesiveRound, Election, Outcome, PaymentLedger, PriceSystem
from data.rational import ceil_fraction, lcm_of_denominators
from rules.equal_shares import resume_equal_shares
from tools import flow
from utils.config import get_limit
from utils.progress import progress

logger = logging.getLogger(__name__)


def best_beta_for_bundle(T, active, e: Election) -> tuple[Fraction, list[int]] | None:
    """Largest β for which some affordable group gets β from T, and the r voters realizing it.

    With r = ceil(cost(T)·n), the best β is the r-th largest bundle utility among
    the active voters.
    """
    T = list(T)
    active = sorted(active)
    r = ceil_fraction(total_cost(T, e) * e.n)
    if r > len(active):
        return None
    ranked = sorted(active, key=lambda i: (-voter_utility(i, T, e), i))
    beta = voter_utility(ranked[r - 1], T, e)
    if beta <= 0:
        return None
    return beta, sorted(ranked[:r])


def _order_statistic(sums: list[Fraction], counts: list[int], r: int) -> Fraction:
    seen = 0
    for value, count in sorted(zip(sums, counts), key=lambda item: item[0], reverse=True):
        seen += count
        if seen >= r:
            return value
    return ZERO


def _best_bundle(e: Election, candidates: list[str], active: list[int]) -> tuple[Fraction, list[str]] | None:
    """Branch and bound over bundles of the remaining candidates.

    Winner key: largest β, then smallest cost, then lexicographically smallest
    bundle by candidate position.
    """
    classes = voter_classes(e, active)
    rows = [row for row, _ in classes]
    counts = [len(members) for _, members in classes]
    best_utility = [max((row.get(c, ZERO) for row in rows), default=ZERO) for c in candidates]
    suffix = [ZERO] * (len(candidates) + 1)
    for position in range(len(candidates) - 1, -1, -1):
        suffix[position] = suffix[position + 1] + best_utility[position]

    best: list = [None]

    def better(beta: Fraction, cost: Fraction, bundle: tuple[int, ...]) -> bool:
        if best[0] is None:
            return True
        best_beta, best_cost, best_bundle = best[0]
        if beta != best_beta:
            return beta > best_beta
        if cost != best_cost:
            return cost < best_cost
        return bundle < best_bundle

    def search(start: int, bundle: tuple[int, ...], cost: Fraction, sums: list[Fraction]) -> None:
        for position in range(start, len(candidates)):
            c = candidates[position]
            new_cost = cost + e.cost[c]
            r = ceil_fraction(new_cost * e.n)
            if r > len(active):
                continue
            new_sums = [value + row.get(c, ZERO) for value, row in zip(sums, rows)]
            new_bundle = bundle + (position,)
            beta = _order_statistic(new_sums, counts, r)
            if beta > 0 and better(beta, new_cost, new_bundle):
                best[0] = (beta, new_cost, new_bundle)
            if best[0] is None or beta + suffix[position + 1] >= best[0][0]:
                search(position + 1, new_bundle, new_cost, new_sums)

    search(0, (), ZERO, [ZERO] * len(rows))
    if best[0] is None:
        return None
    beta, _, bundle = best[0]
    return beta, [candidates[position] for position in bundle]


def run_gcr(e: Election, max_candidates: int | None = None) -> tuple[Outcome, list[CohesiveRound]]:
    limit = max_candidates or get_limit("PB_GCR_MAX_CANDIDATES")
    if e.m > limit:
        raise SearchBoundExceeded("gcr_candidates", limit, e.m)

    remaining = list(e.candidates)
    active = list(e.voters)
    elected: list[str] = []
    rounds: list[CohesiveRound] = []
    while active and remaining:
        progress.update_status("gcr", e.title, f"Round {len(rounds) + 1}: searching {2 ** len(remaining) - 1} bundles")
        found = _best_bundle(e, remaining, active)
        if found is None:
            break
        _, bundle = found
        beta, group = best_beta_for_bundle(bundle, active, e)
        rounds.append(CohesiveRound(beta=beta, group=group, bundle=bundle, removed_voters=group))
        logger.debug("round %d: beta=%s, |S|=%d, T=%s", len(rounds), beta, len(group), bundle)
        elected.extend(bundle)
        removed = set(group)
        active = [i for i in active if i not in removed]
        remaining = [c for c in remaining if c not in bundle]

    progress.update_status("gcr", e.title, "Done")
    return Outcome(selected=frozenset(elected)), rounds


def run_gcr_all(e: Election, max_candidates: int = 12) -> list[Outcome]:
    """Every outcome GCR can reach when any tied bundle and any qualifying group of minimum size may be chosen."""
    if e.m > max_candidates:
        raise SearchBoundExceeded("gcr_all_candidates", max_candidates, e.m)

    outcomes: set[frozenset[str]] = set()
    seen: set[tuple] = set()

    def explore(active: frozenset[int], remaining: tuple[str, ...], elected: frozenset[str]) -> None:
        state = (active, remaining, elected)
        if state in seen:
            return
        seen.add(state)
        scored = []
        for size in range(1, len(remaining) + 1):
            for bundle in itertools.combinations(remaining, size):
                found = best_beta_for_bundle(bundle, active, e)
                if found is not None:
                    scored.append((found[0], total_cost(bundle, e), bundle))
        if not scored:
            outcomes.add(elected)
            return
        top_beta = max(beta for beta, _, _ in scored)
        top_cost = min(cost for beta, cost, _ in scored if beta == top_beta)
        for beta, cost, bundle in scored:
            if beta != top_beta or cost != top_cost:
                continue
            r = ceil_fraction(cost * e.n)
            qualifying = sorted(i for i in active if voter_utility(i, bundle, e) >= beta)
            for group in itertools.combinations(qualifying, r):
                explore(active - set(group), tuple(c for c in remaining if c not in bundle), elected | set(bundle))

    explore(frozenset(e.voters), tuple(e.candidates), frozenset())
    return [Outcome(selected=selected) for selected in sorted(outcomes, key=lambda s: sorted(map(e.index, s)))]


def gcr_payment_construction(rounds: list[CohesiveRound], e: Election, node_budget: int | None = None) -> PaymentLedger:
    """Split every elected bundle among its group so that (C1)-(C4) hold with b = 1.

    Per round, with d the lcm of the bundle's cost denominators: candidate c needs
    cost(c)·d·n coins, every group member owns d coins worth 1/(d·n), and coins go
    only to candidates their owner values. A maximum flow saturating all demand
    always exists for a round produced by GCR.
    """
    budget = node_budget or get_limit("PB_FLOW_NODE_BUDGET")
    ledger = PaymentLedger.fresh(e.n)
    for number, cohesive in enumerate(rounds, start=1):
        d = lcm_of_denominators(e.cost[c] for c in cohesive.bundle)
        parts = sum(e.cost[c] * d for c in cohesive.bundle)
        required = d * e.n * parts
        if required > budget:
            raise SearchBoundExceeded(f"flow_nodes (d={d})", budget, int(required))

        demand = {c: int(e.cost[c] * d * e.n) for c in cohesive.bundle}
        supply = {i: d for i in cohesive.group}
        edges = {c: [i for i in cohesive.group if e.u(i, c) > 0] for c in cohesive.bundle}
        value, assignment = flow.solve(demand, supply, edges)
        if value != sum(demand.values()):
            raise InternalConsistencyError(f"round {number}: flow {value} does not cover demand {sum(demand.values())}")

        for c, coins in assignment.items():
            for i, count in coins.items():
                ledger.charge(i, c, Fraction(count, d * e.n))
        progress.update_status("gcr_payments", e.title, f"Round {number} paid")
    return ledger


def gcr_priceable_completion(e: Election, gcr_out: Outcome, ledger: PaymentLedger) -> tuple[Outcome, PaymentLedger]:
    """Extend a GCR outcome by running equal shares on the voters' unspent money."""
    system = PriceSystem(b=Fraction(1), payments=ledger.payments)
    violation = price_system_violation(e, gcr_out, system, conditions=("C1", "C2", "C3", "C4"))
    if violation is not None:
        raise ParameterError(f"ledger does not satisfy {violation.condition} for the given outcome: {violation.detail}")

    start = ledger.copy_ledger()
    start.remaining = {i: Fraction(1, e.n) - ledger.paid_by(i) for i in e.voters}
    outcome, completed, _ = resume_equal_shares(e, e.ordered(gcr_out.selected), start, rule="gcr-completion")
    return outcome, completed
