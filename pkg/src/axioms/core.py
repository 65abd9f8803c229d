"""Core and α-core checkers; both report the lexicographically first blocking bundle."""
import itertools
import math
from fractions import Fraction

from data.election import min_positive_utility, total_cost, voter_utility
from data.errors import ParameterError, SearchBoundExceeded
from data.models import ONE, ZERO, AxiomVerdict, Election, Outcome, SearchBounds, VerdictStatus, Witness
from data.rational import ceil_fraction


def _blocking_bundle(e: Election, blocks) -> tuple[list[int], list[str]] | None:
    """First bundle (lexicographic by position) whose blocking voters can afford it."""
    candidates = e.candidates

    def walk(start: int, bundle: tuple[str, ...], cost: Fraction):
        for position in range(start, len(candidates)):
            c = candidates[position]
            extended = bundle + (c,)
            extended_cost = cost + e.cost[c]
            r = ceil_fraction(extended_cost * e.n)
            if r > e.n:
                continue
            group = [i for i in e.voters if blocks(i, extended)]
            if len(group) >= r:
                return group, list(extended)
            found = walk(position + 1, extended, extended_cost)
            if found is not None:
                return found
        return None

    return walk(0, (), ZERO)


def is_core_violation(e: Election, W: Outcome, S, T) -> bool:
    S, T = list(S), list(T)
    if not S or not T or len(S) < total_cost(T, e) * e.n:
        return False
    return all(voter_utility(i, T, e) > voter_utility(i, W.selected, e) for i in S)


def check_core(e: Election, W: Outcome, bounds: SearchBounds | None = None) -> AxiomVerdict:
    bounds = bounds or SearchBounds()
    if e.m > bounds.max_candidates:
        return AxiomVerdict(axiom="core", status=VerdictStatus.INCONCLUSIVE, bounds=bounds)
    utility_w = {i: voter_utility(i, W.selected, e) for i in e.voters}
    found = _blocking_bundle(e, lambda i, bundle: voter_utility(i, bundle, e) > utility_w[i])
    if found is None:
        return AxiomVerdict(axiom="core", status=VerdictStatus.SATISFIED, bounds=bounds)
    group, bundle = found
    return AxiomVerdict(axiom="core", status=VerdictStatus.VIOLATED, witness=Witness(voters=group, candidates=bundle), bounds=bounds)


def _alpha_blocks(e: Election, W: Outcome, alpha: Fraction, i: int, bundle, utility_w: Fraction) -> bool:
    best_addition = max((e.u(i, c) for c in bundle if c not in W), default=ZERO)
    return utility_w + best_addition < voter_utility(i, bundle, e) / alpha


def is_alpha_core_violation(e: Election, W: Outcome, alpha: Fraction, S, T) -> bool:
    S, T = list(S), list(T)
    if not S or not T or len(S) < total_cost(T, e) * e.n:
        return False
    return all(_alpha_blocks(e, W, alpha, i, T, voter_utility(i, W.selected, e)) for i in S)


def check_alpha_core(e: Election, W: Outcome, alpha: Fraction, bounds: SearchBounds | None = None) -> AxiomVerdict:
    """Blocking voters: u_i(W ∪ {c}) < u_i(T)/α for every c in T."""
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ParameterError(f"alpha must be at least 1, got {alpha}")
    bounds = bounds or SearchBounds()
    if e.m > bounds.max_candidates:
        return AxiomVerdict(axiom="alpha-core", status=VerdictStatus.INCONCLUSIVE, bounds=bounds)
    utility_w = {i: voter_utility(i, W.selected, e) for i in e.voters}
    found = _blocking_bundle(e, lambda i, bundle: _alpha_blocks(e, W, alpha, i, bundle, utility_w[i]))
    if found is None:
        return AxiomVerdict(axiom="alpha-core", status=VerdictStatus.SATISFIED, bounds=bounds)
    group, bundle = found
    witness = Witness(voters=group, candidates=bundle, detail=f"alpha={alpha}")
    return AxiomVerdict(axiom="alpha-core", status=VerdictStatus.VIOLATED, witness=witness, bounds=bounds)


def max_feasible_utility(i: int, e: Election, max_candidates: int = 20) -> Fraction:
    """Largest u_i(W) over budget-feasible W, by enumerating the voter's valued candidates."""
    valued = [c for c in e.candidates if e.u(i, c) > 0]
    if len(valued) > max_candidates:
        raise SearchBoundExceeded("alpha_core_candidates", max_candidates, len(valued))
    best = ZERO
    for size in range(1, len(valued) + 1):
        for bundle in itertools.combinations(valued, size):
            if total_cost(bundle, e) <= ONE:
                best = max(best, voter_utility(i, bundle, e))
    return best


def alpha_core_bound(e: Election) -> Fraction:
    """Rational upper bound of 4·ln(2·u_max/u_min).

    u_max is the best utility any voter gets from a feasible outcome, u_min the
    smallest positive utility of a single candidate. The float logarithm is
    pushed outward by a relative and an absolute margin of 2^-40 before
    rationalizing.
    """
    u_max = max(max_feasible_utility(i, e) for i in e.voters)
    u_min = min_positive_utility(e)
    value = 4 * math.log(float(2 * u_max / u_min))
    bound = Fraction(math.nextafter(value, math.inf))
    margin = Fraction(1, 2**40)
    return max(ONE, bound * (1 + margin) + margin)
