"""Ranked ballots: equal shares with lexicographic preferences and cardinal conversions."""
import logging
from fractions import Fraction

from data.errors import ParameterError
from data.models import ONE, ZERO, Election, Outcome, PaymentLedger, RankedElection, RuleTrace, TieBreak, TraceStep, UtilityScheme
from utils.progress import progress

logger = logging.getLogger(__name__)


def water_fill(budgets: dict[int, Fraction], amount: Fraction) -> dict[int, Fraction]:
    """Equal charge per payer, capped by each payer's budget, summing to amount."""
    ordered = sorted(budgets.items(), key=lambda item: (item[1], item[0]))
    left = amount
    threshold = None
    for position, (_, budget) in enumerate(ordered):
        payers = len(ordered) - position
        if budget * payers >= left:
            threshold = left / payers
            break
        left -= budget
    if threshold is None:
        raise ParameterError(f"budgets {sum(budgets.values(), ZERO)} cannot cover {amount}")
    return {i: min(budget, threshold) for i, budget in budgets.items()}


def run_equal_shares_lex(re: RankedElection, tie_break: TieBreak = TieBreak.INDEX) -> tuple[Outcome, PaymentLedger, RuleTrace]:
    """Equal shares where ρ is a rank: at ρ a voter backs every candidate in their top ρ.

    A candidate is affordable at ρ once its backers' money reaches 1/k; the one
    affordable at the smallest ρ is bought and the cost is water-filled among
    its backers.
    """
    if tie_break == TieBreak.ALL:
        raise ParameterError("the 'all' tie-break is only available for cardinal instances")
    price = Fraction(1, re.k)
    ledger = PaymentLedger.fresh(re.n)
    trace = RuleTrace(rule="equal-shares-lex")
    elected: list[str] = []

    while len(elected) < re.k:
        choice = None
        for rho in range(1, re.m + 1):
            affordable = []
            for c in re.candidates:
                if c in elected:
                    continue
                backing = sum((ledger.remaining[i] for i in re.voters if re.pos(i, c) <= rho), ZERO)
                if backing >= price:
                    affordable.append(c)
            if affordable:
                # unit costs, so min-cost-then-index is plain index order
                choice = (rho, min(affordable, key=re.index), affordable)
                break
        if choice is None:
            break
        rho, c, tied = choice
        backers = {i: ledger.remaining[i] for i in re.voters if re.pos(i, c) <= rho and ledger.remaining[i] > 0}
        charges = water_fill(backers, price)
        step = TraceStep(candidate=c, rho=rho, tie_set=tied)
        for i, amount in charges.items():
            if amount > 0:
                ledger.charge(i, c, amount)
                step.payments[i] = amount
        trace.steps.append(step)
        elected.append(c)
        logger.debug("elected %s at rank %d", c, rho)
        progress.update_status("equal-shares-lex", re.title, f"Elected {c} at ρ={rho}")

    progress.update_status("equal-shares-lex", re.title, "Done")
    return Outcome(selected=frozenset(elected)), ledger, trace


def to_cardinal(re: RankedElection, scheme: UtilityScheme = UtilityScheme.LEX_EXPONENTIAL) -> Election:
    """Additive utilities from rankings; every candidate costs 1/k.

    lex-exponential: m^(-pos), so a candidate outweighs everything ranked below it.
    borda: (m - pos)/(m - 1); a candidate ranked last by everybody has no
    supporter and is rejected by the Election model.
    """
    m = re.m
    rows = []
    for i in re.voters:
        row = {}
        for c in re.candidates:
            position = re.pos(i, c)
            if scheme == UtilityScheme.LEX_EXPONENTIAL:
                value = Fraction(1, m**position)
            elif m == 1:
                value = ONE
            else:
                value = Fraction(m - position, m - 1)
            if value > 0:
                row[c] = value
        rows.append(row)
    return Election(
        candidates=re.candidates,
        cost={c: Fraction(1, re.k) for c in re.candidates},
        utilities=tuple(rows),
        title=re.title,
    )
