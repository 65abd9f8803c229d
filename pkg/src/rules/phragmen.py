"""Continuous Phragmén for approval instances.

Every voter's account fills at rate 1/n per unit of time, so the whole budget
has been handed out at time 1. A candidate is bought as soon as its supporters
hold its cost together; their accounts are then emptied.
"""
import logging
from fractions import Fraction

from data.election import require_approval
from data.errors import ParameterError
from data.models import ONE, ZERO, Election, Outcome, RuleTrace, TieBreak, TraceStep
from utils.progress import progress

logger = logging.getLogger(__name__)


def run_phragmen(e: Election, tie_break: TieBreak = TieBreak.INDEX, skip: bool = False) -> tuple[Outcome, RuleTrace]:
    """Stops at the first candidate that would overshoot the budget; with skip=True
    that candidate is dropped and the process goes on."""
    require_approval(e, "run_phragmen")
    if tie_break == TieBreak.ALL:
        raise ParameterError("the 'all' tie-break is not available for Phragmén")

    balance = {i: ZERO for i in e.voters}
    now = ZERO
    spent = ZERO
    elected: list[str] = []
    dropped: set[str] = set()
    trace = RuleTrace(rule="phragmen-skip" if skip else "phragmen")

    while True:
        events = {}
        for c in e.candidates:
            if c in elected or c in dropped:
                continue
            supporters = e.supporters(c)
            held = sum((balance[i] for i in supporters), ZERO)
            events[c] = now + max(ZERO, e.cost[c] - held) * e.n / len(supporters)
        if not events:
            break
        moment = min(events.values())
        tied = [c for c in e.candidates if events.get(c) == moment]
        if tie_break == TieBreak.MIN_COST:
            c = min(tied, key=lambda x: (e.cost[x], e.index(x)))
        else:
            c = tied[0]
        if spent + e.cost[c] > ONE:
            if not skip:
                logger.debug("%s would overshoot the budget at t=%s, stopping", c, moment)
                break
            dropped.add(c)
            continue

        for i in e.voters:
            balance[i] += (moment - now) / e.n
        now = moment
        step = TraceStep(candidate=c, rho=moment, tie_set=tied)
        for i in e.supporters(c):
            if balance[i] > 0:
                step.payments[i] = balance[i]
            balance[i] = ZERO
        trace.steps.append(step)
        elected.append(c)
        spent += e.cost[c]
        progress.update_status(trace.rule, e.title, f"Elected {c} at t={moment}")

    progress.update_status(trace.rule, e.title, "Done")
    return Outcome(selected=frozenset(elected)), trace
