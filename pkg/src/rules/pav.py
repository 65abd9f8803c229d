"""Proportional Approval Voting, solved exactly by branch and bound."""
import logging
from fractions import Fraction
from functools import lru_cache

from data.election import approval_set, require_approval
from data.errors import SearchBoundExceeded
from data.models import ONE, ZERO, Election, Outcome
from utils.config import get_limit
from utils.progress import progress

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def harmonic(r: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, r + 1)), ZERO)


def pav_score(W, e: Election) -> Fraction:
    require_approval(e, "pav_score")
    selected = W.selected if isinstance(W, Outcome) else frozenset(W)
    return sum((harmonic(len(approval_set(i, e) & selected)) for i in e.voters), ZERO)


def _knapsack_bound(gains: list[tuple[Fraction, Fraction]], capacity: Fraction) -> Fraction:
    """Fractional knapsack over (gain, weight) pairs."""
    bound = ZERO
    for gain, weight in sorted(gains, key=lambda item: item[0] / item[1], reverse=True):
        if gain <= 0:
            continue
        if weight <= capacity:
            bound += gain
            capacity -= weight
        else:
            bound += gain * capacity / weight
            break
    return bound


def run_pav(e: Election, max_candidates: int | None = None) -> list[Outcome]:
    """All feasible outcomes with the maximal PAV score.

    Inclusion/exclusion branching in candidate order. Marginal gains only shrink
    as the outcome grows, so today's gains packed into the leftover budget as a
    fractional knapsack bound every completion.
    """
    require_approval(e, "run_pav")
    limit = max_candidates or get_limit("PB_PAV_MAX_CANDIDATES")
    if e.m > limit:
        raise SearchBoundExceeded("pav_candidates", limit, e.m)

    candidates = list(e.candidates)
    best_score = [Fraction(-1)]
    winners: list[frozenset[str]] = []
    counts = {i: 0 for i in e.voters}

    def gain(c: str) -> Fraction:
        return sum((Fraction(1, counts[i] + 1) for i in e.supporters(c)), ZERO)

    def search(position: int, chosen: list[str], score: Fraction, cost: Fraction) -> None:
        rest = [(gain(c), e.cost[c]) for c in candidates[position:] if cost + e.cost[c] <= ONE]
        if score + _knapsack_bound(rest, ONE - cost) < best_score[0]:
            return
        if position == len(candidates):
            if score > best_score[0]:
                best_score[0] = score
                winners.clear()
            if score == best_score[0]:
                winners.append(frozenset(chosen))
            return
        c = candidates[position]
        if cost + e.cost[c] <= ONE:
            added = gain(c)
            for i in e.supporters(c):
                counts[i] += 1
            search(position + 1, chosen + [c], score + added, cost + e.cost[c])
            for i in e.supporters(c):
                counts[i] -= 1
        search(position + 1, chosen, score, cost)

    search(0, [], ZERO, ZERO)
    logger.debug("PAV optimum %s reached by %d outcomes", best_score[0], len(winners))
    progress.update_status("pav", e.title, "Done")
    return [Outcome(selected=w) for w in sorted(winners, key=lambda w: sorted(map(e.index, w)))]
