"""Rules and axioms reachable from the command line."""
import logging
from fractions import Fraction

from pydantic import BaseModel, ConfigDict

from axioms.core import alpha_core_bound, check_alpha_core, check_core
from axioms.ejr import check_ejr, check_ejr_approval
from axioms.exhaustive import check_exhaustive
from axioms.fjr import check_fjr
from axioms.priceability import find_price_system, verify_price_system
from axioms.psc import check_psc
from data.election import classify
from data.errors import ParameterError, SearchBoundExceeded
from data.models import (
    AxiomVerdict,
    Election,
    Outcome,
    PaymentLedger,
    RankedElection,
    RuleTrace,
    SearchBounds,
    TieBreak,
    UtilityScheme,
    VerdictStatus,
    Witness,
)
from rules.equal_shares import run_equal_shares, run_equal_shares_branches, run_equal_shares_exhaustive
from rules.gcr import gcr_payment_construction, run_gcr
from rules.ordinal import run_equal_shares_lex, to_cardinal
from rules.pav import run_pav
from rules.phragmen import run_phragmen
from utils.progress import progress

logger = logging.getLogger(__name__)

# Define rule order - single source of truth
RULE_ORDER = [
    ("Method of Equal Shares", "equal-shares"),
    ("Equal Shares, exhaustive limit", "equal-shares-exhaustive"),
    ("Greedy Cohesive Rule", "gcr"),
    ("Proportional Approval Voting", "pav"),
    ("Phragmén", "phragmen"),
    ("Equal Shares, ranked ballots", "equal-shares-lex"),
]

AXIOM_ORDER = [
    ("Extended Justified Representation", "ejr"),
    ("Full Justified Representation", "fjr"),
    ("Core", "core"),
    ("Alpha-core", "alpha-core"),
    ("Proportionality for Solid Coalitions", "psc"),
    ("Priceability", "priceable"),
    ("Exhaustiveness", "exhaustive"),
]


class RunResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    rule: str
    election: Election | RankedElection
    outcomes: list[Outcome]
    trace: RuleTrace | None = None
    ledger: PaymentLedger | None = None
    eps: Fraction | None = None

    @property
    def outcome(self) -> Outcome:
        return self.outcomes[0]


def as_cardinal(instance: Election | RankedElection, scheme: UtilityScheme = UtilityScheme.LEX_EXPONENTIAL) -> Election:
    if isinstance(instance, RankedElection):
        return to_cardinal(instance, scheme)
    return instance


def run_rule(
    rule: str,
    instance: Election | RankedElection,
    tie_break: TieBreak = TieBreak.INDEX,
    phragmen_skip: bool = False,
    scheme: UtilityScheme = UtilityScheme.LEX_EXPONENTIAL,
    with_ledger: bool = False,
) -> RunResult:
    """Run one rule; ranked instances go through `scheme` for every cardinal rule."""
    if rule == "equal-shares-lex":
        if not isinstance(instance, RankedElection):
            raise ParameterError("equal-shares-lex needs an instance with rankings")
        W, ledger, trace = run_equal_shares_lex(instance, tie_break)
        return RunResult(rule=rule, election=instance, outcomes=[W], trace=trace, ledger=ledger)

    e = as_cardinal(instance, scheme)
    if rule == "equal-shares" and tie_break == TieBreak.ALL:
        branches = run_equal_shares_branches(e)
        _, ledger, trace = branches[0]
        return RunResult(rule=rule, election=e, outcomes=[W for W, _, _ in branches], trace=trace, ledger=ledger)
    if rule == "equal-shares":
        W, ledger, trace = run_equal_shares(e, tie_break)
        return RunResult(rule=rule, election=e, outcomes=[W], trace=trace, ledger=ledger)
    if rule == "equal-shares-exhaustive":
        W, ledger, trace, eps = run_equal_shares_exhaustive(e, tie_break)
        return RunResult(rule=rule, election=e, outcomes=[W], trace=trace, ledger=ledger, eps=eps)
    if rule == "gcr":
        W, rounds = run_gcr(e)
        ledger = gcr_payment_construction(rounds, e) if with_ledger else None
        trace = RuleTrace(rule="gcr", rounds=rounds)
        return RunResult(rule=rule, election=e, outcomes=[W], trace=trace, ledger=ledger)
    if rule == "pav":
        return RunResult(rule=rule, election=e, outcomes=run_pav(e))
    if rule == "phragmen":
        W, trace = run_phragmen(e, tie_break, skip=phragmen_skip)
        return RunResult(rule=rule, election=e, outcomes=[W], trace=trace)
    raise ParameterError(f"unknown rule '{rule}'")


def _check(
    axiom: str,
    instance: Election | RankedElection,
    W: Outcome,
    bounds: SearchBounds | None = None,
    alpha: Fraction | None = None,
    scheme: UtilityScheme = UtilityScheme.LEX_EXPONENTIAL,
    strict_quota: bool = False,
    up_to_one: bool = True,
) -> AxiomVerdict:
    if axiom == "psc":
        if not isinstance(instance, RankedElection):
            raise ParameterError("psc needs an instance with rankings")
        return check_psc(instance, W, strict_quota=strict_quota)

    e = as_cardinal(instance, scheme)
    if axiom == "ejr":
        if up_to_one and classify(e).is_approval:
            return check_ejr_approval(e, W, bounds)
        return check_ejr(e, W, bounds, up_to_one=up_to_one)
    if axiom == "fjr":
        return check_fjr(e, W, bounds)
    if axiom == "core":
        return check_core(e, W, bounds)
    if axiom == "alpha-core":
        if alpha is None:
            alpha = alpha_core_bound(e)
            logger.debug("alpha defaults to the equal-shares guarantee %s", alpha)
        return check_alpha_core(e, W, alpha, bounds)
    if axiom == "exhaustive":
        return check_exhaustive(e, W)
    if axiom == "priceable":
        try:
            system = find_price_system(e, W)
        except SearchBoundExceeded as error:
            logger.debug("price system search refused: %s", error)
            return AxiomVerdict(axiom="priceable", status=VerdictStatus.INCONCLUSIVE)
        if system is None:
            witness = Witness(candidates=e.ordered(W.selected), detail="no price system supports this outcome")
            return AxiomVerdict(axiom="priceable", status=VerdictStatus.VIOLATED, witness=witness)
        return verify_price_system(e, W, system)
    raise ParameterError(f"unknown axiom '{axiom}'")


def check_axiom(
    axiom: str,
    instance: Election | RankedElection,
    W: Outcome,
    bounds: SearchBounds | None = None,
    alpha: Fraction | None = None,
    scheme: UtilityScheme = UtilityScheme.LEX_EXPONENTIAL,
    strict_quota: bool = False,
    up_to_one: bool = True,
) -> AxiomVerdict:
    """Check one axiom and report the verdict on the progress display."""
    progress.update_status(axiom, instance.title, f"Checking {len(W)} selected of {instance.m}")
    try:
        verdict = _check(axiom, instance, W, bounds, alpha, scheme, strict_quota, up_to_one)
    except Exception:
        progress.update_status(axiom, instance.title, "Error")
        raise
    progress.update_status(axiom, instance.title, verdict.status.value.title())
    return verdict
