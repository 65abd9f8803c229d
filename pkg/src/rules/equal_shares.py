"""Method of Equal Shares for arbitrary costs and additive utilities.

Every voter starts with an equal share 1/n of the budget. A candidate c is
ρ-affordable when Σ_i min(remaining_i, u_i(c)·ρ) = cost(c); the rule keeps
buying the candidate affordable at the smallest ρ and charges each voter
min(remaining_i, u_i(c)·ρ).
"""
import logging
from fractions import Fraction

from data.errors import InternalConsistencyError, ParameterError, StabilizationError
from data.election import min_positive_utility
from data.models import ZERO, Election, Outcome, PaymentLedger, RuleTrace, TieBreak, TraceStep
from data.rational import lcm_of_denominators
from utils.config import get_limit
from utils.progress import progress

logger = logging.getLogger(__name__)


def min_rho(c: str, ledger: PaymentLedger, e: Election) -> Fraction | None:
    """Smallest ρ with Σ_i min(remaining_i, u_i(c)·ρ) = cost(c), or None if unaffordable.

    f(ρ) is piecewise linear with a breakpoint at remaining_i / u_i(c) for each
    supporter; we walk the breakpoints in order and solve on the crossing segment.
    """
    cost = e.cost[c]
    breakpoints = []
    for i in e.supporters(c):
        left = ledger.remaining[i]
        if left > 0:
            utility = e.u(i, c)
            breakpoints.append((left / utility, left, utility))
    if sum((left for _, left, _ in breakpoints), ZERO) < cost:
        return None
    breakpoints.sort(key=lambda item: item[0])

    capped = ZERO
    slope = sum((utility for _, _, utility in breakpoints), ZERO)
    for point, left, utility in breakpoints:
        if capped + point * slope >= cost:
            return (cost - capped) / slope
        capped += left
        slope -= utility
    raise InternalConsistencyError(f"no crossing segment found for {c} although supporters can afford it")


def _affordable(e: Election, ledger: PaymentLedger, elected: set[str]) -> dict[str, Fraction]:
    rhos = {}
    for c in e.candidates:
        if c in elected:
            continue
        rho = min_rho(c, ledger, e)
        if rho is not None:
            rhos[c] = rho
    return rhos


def _tied(e: Election, rhos: dict[str, Fraction]) -> tuple[Fraction, list[str]]:
    best = min(rhos.values())
    return best, [c for c in e.candidates if rhos.get(c) == best]


def _pick(e: Election, tied: list[str], tie_break: TieBreak) -> str:
    if tie_break == TieBreak.MIN_COST:
        return min(tied, key=lambda c: (e.cost[c], e.index(c)))
    return min(tied, key=e.index)


def _buy(e: Election, ledger: PaymentLedger, c: str, rho: Fraction, tie_set: list[str], zero_utility_of=None) -> TraceStep:
    step = TraceStep(candidate=c, rho=rho, tie_set=tie_set)
    for i in e.supporters(c):
        amount = min(ledger.remaining[i], e.u(i, c) * rho)
        if amount <= 0:
            continue
        flagged = zero_utility_of is not None and zero_utility_of(i, c)
        ledger.charge(i, c, amount, zero_utility=flagged)
        step.payments[i] = amount
        if flagged:
            step.zero_utility_payers.append(i)
    if sum(step.payments.values(), ZERO) != e.cost[c]:
        raise InternalConsistencyError(f"payments for {c} do not sum to its cost")
    return step


def resume_equal_shares(
    e: Election,
    elected: list[str],
    ledger: PaymentLedger,
    tie_break: TieBreak = TieBreak.INDEX,
    rule: str = "equal-shares",
    zero_utility_of=None,
) -> tuple[Outcome, PaymentLedger, RuleTrace]:
    """Continue buying candidates from a given outcome and ledger until nothing is affordable."""
    if tie_break == TieBreak.ALL:
        raise ParameterError("the 'all' tie-break returns several outcomes; use run_equal_shares_branches")
    elected = list(elected)
    trace = RuleTrace(rule=rule)
    while True:
        rhos = _affordable(e, ledger, set(elected))
        if not rhos:
            break
        rho, tied = _tied(e, rhos)
        c = _pick(e, tied, tie_break)
        trace.steps.append(_buy(e, ledger, c, rho, tied, zero_utility_of))
        elected.append(c)
        logger.debug("elected %s at rho=%s (tied: %s)", c, rho, tied)
        progress.update_status(rule, e.title, f"Elected {c} at ρ={rho}")
    progress.update_status(rule, e.title, "Done")
    return Outcome(selected=frozenset(elected)), ledger, trace


def run_equal_shares(e: Election, tie_break: TieBreak = TieBreak.INDEX) -> tuple[Outcome, PaymentLedger, RuleTrace]:
    return resume_equal_shares(e, [], PaymentLedger.fresh(e.n), tie_break)


def run_equal_shares_branches(e: Election) -> list[tuple[Outcome, PaymentLedger, RuleTrace]]:
    """Follow every tie-broken branch; one entry per distinct outcome, in discovery order."""
    results: dict[frozenset[str], tuple[Outcome, PaymentLedger, RuleTrace]] = {}
    seen_states: set[tuple] = set()

    def explore(elected: list[str], ledger: PaymentLedger, steps: list[TraceStep]) -> None:
        state = (frozenset(elected), tuple(sorted(ledger.remaining.items())))
        if state in seen_states:
            return
        seen_states.add(state)
        rhos = _affordable(e, ledger, set(elected))
        if not rhos:
            selected = frozenset(elected)
            if selected not in results:
                results[selected] = (Outcome(selected=selected), ledger, RuleTrace(rule="equal-shares", steps=steps))
            return
        rho, tied = _tied(e, rhos)
        for c in tied:
            branch = ledger.copy_ledger()
            step = _buy(e, branch, c, rho, tied)
            explore(elected + [c], branch, steps + [step])

    explore([], PaymentLedger.fresh(e.n), [])
    return list(results.values())


def perturb(e: Election, eps: Fraction) -> Election:
    """Replace every zero utility by eps."""
    rows = tuple({c: row.get(c, ZERO) or eps for c in e.candidates} for row in e.utilities)
    return Election(candidates=e.candidates, cost=e.cost, utilities=rows, title=e.title)


def run_equal_shares_eps(e: Election, eps: Fraction, tie_break: TieBreak = TieBreak.INDEX) -> tuple[Outcome, PaymentLedger, RuleTrace]:
    """Run on the instance where zero utilities become eps; payments by zero-utility voters are flagged."""
    eps = Fraction(eps)
    if not ZERO < eps < min_positive_utility(e):
        raise ParameterError(f"eps must lie strictly between 0 and the smallest positive utility, got {eps}")
    perturbed = perturb(e, eps)
    return resume_equal_shares(
        perturbed,
        [],
        PaymentLedger.fresh(e.n),
        tie_break,
        rule="equal-shares-eps",
        zero_utility_of=lambda i, c: e.u(i, c) == 0,
    )


def initial_eps(e: Election) -> Fraction:
    denominators = lcm_of_denominators(e.cost.values())
    return min_positive_utility(e) / (e.n * e.m * denominators)


def run_equal_shares_exhaustive(e: Election, tie_break: TieBreak = TieBreak.INDEX) -> tuple[Outcome, PaymentLedger, RuleTrace, Fraction]:
    """Limit outcome of the eps-perturbed runs as eps goes to 0.

    Halves eps until two consecutive runs elect the same sequence and returns the
    first run of that pair together with its eps.
    """
    eps = initial_eps(e)
    if all(e.u(i, c) > 0 for i in e.voters for c in e.candidates):
        outcome, ledger, trace = run_equal_shares(e, tie_break)
        return outcome, ledger, trace, eps

    previous = run_equal_shares_eps(e, eps, tie_break)
    for _ in range(get_limit("PB_EPS_HALVINGS")):
        current = run_equal_shares_eps(e, eps / 2, tie_break)
        if current[2].sequence() == previous[2].sequence():
            return (*previous, eps)
        logger.debug("eps=%s and eps=%s disagree, halving again", eps, eps / 2)
        previous, eps = current, eps / 2
    raise StabilizationError(
        f"limit outcome did not stabilize after {get_limit('PB_EPS_HALVINGS')} halvings (last eps {eps})",
        previous_trace=previous[2],
        current_trace=current[2],
    )
