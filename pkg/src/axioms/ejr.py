"""Extended justified representation checkers (approval and general additive utilities).

Both report, among all violations, the one with the largest guaranteed utility,
then the cheapest bundle, then the lexicographically smallest bundle.
"""
import itertools
from fractions import Fraction

from data.election import approval_set, require_approval, total_cost, voter_utility
from data.models import ZERO, AxiomVerdict, Election, Outcome, SearchBounds, VerdictStatus, Witness
from data.rational import ceil_fraction

APPROVAL_MAX_CANDIDATES = 20


def _bundles(e: Election, keep_going):
    """Pre-order walk over bundles in lexicographic order of candidate positions.

    keep_going(bundle, cost) decides whether supersets of bundle are visited.
    """
    candidates = e.candidates

    def walk(start: int, bundle: tuple[str, ...], cost: Fraction):
        for position in range(start, len(candidates)):
            c = candidates[position]
            extended = bundle + (c,)
            extended_cost = cost + e.cost[c]
            yield extended, extended_cost
            if keep_going(extended, extended_cost):
                yield from walk(position + 1, extended, extended_cost)

    yield from walk(0, (), ZERO)


def _better(found, best) -> bool:
    # found/best: (guarantee, cost, positions, ...)
    if best is None:
        return True
    if found[0] != best[0]:
        return found[0] > best[0]
    if found[1] != best[1]:
        return found[1] < best[1]
    return found[2] < best[2]


def check_ejr_approval(e: Election, W: Outcome, bounds: SearchBounds | None = None) -> AxiomVerdict:
    """EJR for approval ballots.

    Only the candidate bound applies; it is APPROVAL_MAX_CANDIDATES unless
    bounds.max_candidates was set explicitly.
    """
    require_approval(e, "check_ejr_approval")
    max_candidates = APPROVAL_MAX_CANDIDATES
    if bounds is not None and "max_candidates" in bounds.model_fields_set:
        max_candidates = bounds.max_candidates
    if e.m > max_candidates:
        return AxiomVerdict(axiom="ejr", status=VerdictStatus.INCONCLUSIVE, bounds=SearchBounds(max_voters=e.n, max_candidates=max_candidates))

    approvals = {i: approval_set(i, e) for i in e.voters}
    represented = {i: len(approvals[i] & W.selected) for i in e.voters}
    best = None

    def cohesive_enough(bundle, cost):
        return sum(1 for i in e.voters if approvals[i].issuperset(bundle)) >= cost * e.n

    for bundle, cost in _bundles(e, cohesive_enough):
        deprived = [i for i in e.voters if approvals[i].issuperset(bundle) and represented[i] < len(bundle)]
        if deprived and len(deprived) >= cost * e.n:
            found = (len(bundle), cost, tuple(map(e.index, bundle)), deprived, bundle)
            if _better(found, best):
                best = found

    if best is None:
        return AxiomVerdict(axiom="ejr", status=VerdictStatus.SATISFIED)
    size, _, _, deprived, bundle = best
    witness = Witness(voters=deprived, candidates=list(bundle), theta=Fraction(size), alpha={c: Fraction(1) for c in bundle})
    return AxiomVerdict(axiom="ejr", status=VerdictStatus.VIOLATED, witness=witness)


def _deprived(utility_w: Fraction, extra: Fraction, theta: Fraction, up_to_one: bool) -> bool:
    if utility_w >= theta:
        return False
    return not up_to_one or utility_w + extra <= theta


def best_extra_candidate(i: int, W: Outcome, e: Election) -> Fraction:
    """max over a ∉ W of u_i(a); adding an already elected candidate changes nothing."""
    return max((e.u(i, a) for a in e.candidates if a not in W), default=ZERO)


def is_ejr_violation(e: Election, W: Outcome, S, T, up_to_one: bool = True) -> bool:
    """Direct evaluation of the EJR condition for one group and one bundle."""
    S, T = list(S), list(T)
    if not S or not T or len(S) < total_cost(T, e) * e.n:
        return False
    theta = sum((min(e.u(i, c) for i in S) for c in T), ZERO)
    if theta <= 0:
        return False
    return all(_deprived(voter_utility(i, W.selected, e), best_extra_candidate(i, W, e), theta, up_to_one) for i in S)


def check_ejr(e: Election, W: Outcome, bounds: SearchBounds | None = None, up_to_one: bool = True) -> AxiomVerdict:
    """Search every bundle T and every group S of exactly ceil(cost(T)·n) voters.

    Only voters who value every candidate of T and could still be deprived
    (u_i(W) < u_i(T), and with the up-to-one clause u_i(W) + max u_i(a) ≤ u_i(T))
    are considered for S. Bundles beyond bounds.max_candidates, or voter pools
    beyond bounds.max_voters, make the verdict inconclusive unless a violation
    is found elsewhere.
    """
    bounds = bounds or SearchBounds()
    axiom = "ejr" if up_to_one else "strong-ejr"
    if e.m > bounds.max_candidates:
        return AxiomVerdict(axiom=axiom, status=VerdictStatus.INCONCLUSIVE, bounds=bounds)

    utility_w = {i: voter_utility(i, W.selected, e) for i in e.voters}
    extra = {i: best_extra_candidate(i, W, e) for i in e.voters}
    bound_hit = False
    best = None

    def pool_for(bundle):
        return [i for i in e.voters if all(e.u(i, c) > 0 for c in bundle)]

    def large_enough(bundle, cost):
        return len(pool_for(bundle)) >= cost * e.n

    for bundle, cost in _bundles(e, large_enough):
        r = ceil_fraction(cost * e.n)
        pool = []
        for i in pool_for(bundle):
            value = voter_utility(i, bundle, e)
            if _deprived(utility_w[i], extra[i], value, up_to_one):
                pool.append(i)
        if len(pool) < r:
            continue
        if len(pool) > bounds.max_voters:
            bound_hit = True
            continue
        for group in itertools.combinations(pool, r):
            alpha = {c: min(e.u(i, c) for i in group) for c in bundle}
            theta = sum(alpha.values(), ZERO)
            if all(_deprived(utility_w[i], extra[i], theta, up_to_one) for i in group):
                found = (theta, cost, tuple(map(e.index, bundle)), list(group), bundle, alpha)
                if _better(found, best):
                    best = found

    if best is not None:
        theta, _, _, group, bundle, alpha = best
        witness = Witness(voters=group, candidates=list(bundle), alpha=alpha, theta=theta)
        return AxiomVerdict(axiom=axiom, status=VerdictStatus.VIOLATED, witness=witness, bounds=bounds)
    status = VerdictStatus.INCONCLUSIVE if bound_hit else VerdictStatus.SATISFIED
    return AxiomVerdict(axiom=axiom, status=status, bounds=bounds)
