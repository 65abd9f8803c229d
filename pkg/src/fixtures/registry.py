"""Named instances with their expected results.

Each fixture is an instance document under `instances/` with an extra
`expectations` list. An expectation names an operation, its arguments and the
part of the result it pins down; `evaluate` runs the operation and returns the
same keys so the two can be compared directly.
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from axioms.core import check_alpha_core, check_core
from axioms.ejr import check_ejr
from axioms.exhaustive import check_exhaustive
from axioms.fjr import check_fjr
from axioms.priceability import find_price_system
from axioms.psc import check_psc
from data.cache import get_cache
from data.election import outcome_of
from data.errors import ParameterError, StructuralError, UnknownFixtureError
from data.models import AxiomVerdict, Election, Outcome, RankedElection, TieBreak, UtilityScheme
from data.rational import format_rational, parse_rational
from rules.equal_shares import run_equal_shares, run_equal_shares_exhaustive
from rules.gcr import run_gcr
from rules.ordinal import run_equal_shares_lex, to_cardinal
from rules.pav import run_pav
from rules.phragmen import run_phragmen
from tools.io import parse_instance, voter_blocks

INSTANCES_DIR = Path(__file__).parent / "instances"
ANCHOR_WORDS = (3, 6)

_cache = get_cache()


class Expectation(BaseModel):
    """One pinned result; `anchor` is a short verbatim quote locating where the result is stated."""

    operation: str
    arguments: dict[str, Any] = Field(default_factory=dict)
    expected: dict[str, Any]
    anchor: str
    note: str = ""

    @field_validator("anchor")
    @classmethod
    def _three_to_six_words(cls, anchor: str) -> str:
        if not ANCHOR_WORDS[0] <= len(anchor.split()) <= ANCHOR_WORDS[1]:
            raise ValueError(f"anchor must have {ANCHOR_WORDS[0]} to {ANCHOR_WORDS[1]} words, got {anchor!r}")
        return anchor


class Fixture(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    id: str
    election: Election | RankedElection
    expectations: list[Expectation] = Field(default_factory=list)


def list_fixtures() -> list[str]:
    return sorted(path.stem for path in INSTANCES_DIR.glob("*.json"))


def load_document(fixture_id: str) -> dict:
    if cached := _cache.get_document(fixture_id):
        return cached
    path = INSTANCES_DIR / f"{fixture_id}.json"
    if not path.is_file():
        raise UnknownFixtureError(fixture_id)
    document = json.loads(path.read_text(encoding="utf-8"))
    _cache.set_document(fixture_id, document)
    return document


def load_fixture(fixture_id: str) -> Fixture:
    document = load_document(fixture_id)
    election = _cache.get_instance(fixture_id)
    if election is None:
        election = parse_instance(document)
        _cache.set_instance(fixture_id, election)
    try:
        expectations = [Expectation(**item) for item in document.get("expectations", [])]
    except ValidationError as error:
        raise StructuralError(str(error), f"{fixture_id}.expectations") from None
    return Fixture(id=fixture_id, election=election, expectations=expectations)


##### Population scaling #####

def scale_population(e: Election | RankedElection, factor: int | Fraction) -> Election | RankedElection:
    """Multiply every block of consecutive identical voters by an integer, or divide it by t for factor 1/t."""
    factor = Fraction(factor)
    if factor <= 0 or (factor.denominator != 1 and factor.numerator != 1):
        raise ParameterError(f"scaling factor must be a positive integer or 1/t, got {factor}")
    if factor == 1:
        return e

    ballots = e.rankings if isinstance(e, RankedElection) else e.utilities
    scaled = []
    for ballot, count in voter_blocks(ballots):
        size = count * factor
        if size.denominator != 1:
            raise ParameterError(f"block of {count} identical voters is not divisible by {factor.denominator}")
        scaled.extend([ballot] * int(size))
    if isinstance(e, RankedElection):
        return RankedElection(candidates=e.candidates, k=e.k, rankings=tuple(scaled), title=e.title)
    return Election(candidates=e.candidates, cost=e.cost, utilities=tuple(scaled), title=e.title)


##### Expectation evaluation #####

def _instance(fixture: Fixture, arguments: dict) -> Election | RankedElection:
    instance = fixture.election
    if "scale" in arguments:
        variant = f"scale={arguments['scale']}"
        cached = _cache.get_instance(fixture.id, variant)
        if cached is None:
            cached = scale_population(instance, parse_rational(arguments["scale"], "scale"))
            _cache.set_instance(fixture.id, cached, variant)
        instance = cached
    return instance


def _cardinal(instance: Election | RankedElection, arguments: dict) -> Election:
    if isinstance(instance, RankedElection):
        return to_cardinal(instance, UtilityScheme(arguments.get("utilities", UtilityScheme.LEX_EXPONENTIAL.value)))
    return instance


def _outcome(instance: Election | RankedElection, arguments: dict) -> Outcome:
    ids = arguments.get("outcome")
    if ids is None:
        raise StructuralError("expectation needs an 'outcome' argument", "arguments")
    if isinstance(instance, RankedElection):
        return Outcome(selected=frozenset(ids))
    return outcome_of(instance, ids)


def _ids(e: Election | RankedElection, W: Outcome) -> list[str]:
    return sorted(W.selected, key=e.index)


def _verdict_result(verdict: AxiomVerdict) -> dict:
    result = {"status": verdict.status.value}
    if witness := verdict.witness:
        result["voters"] = list(witness.voters)
        result["candidates"] = list(witness.candidates)
        for name in ("theta", "beta"):
            if (value := getattr(witness, name)) is not None:
                result[name] = format_rational(value)
        if witness.ell is not None:
            result["ell"] = witness.ell
        if witness.condition is not None:
            result["condition"] = witness.condition
    return result


def _equal_shares(fixture, arguments):
    e = _cardinal(_instance(fixture, arguments), arguments)
    W, ledger, trace = run_equal_shares(e, TieBreak(arguments.get("tie_break", TieBreak.INDEX.value)))
    return {
        "outcome": _ids(e, W),
        "rho": [format_rational(step.rho) for step in trace.steps],
        "remaining": {str(i): format_rational(value) for i, value in ledger.remaining.items() if value > 0},
    }


def _equal_shares_exhaustive(fixture, arguments):
    e = _cardinal(_instance(fixture, arguments), arguments)
    W, _, trace, eps = run_equal_shares_exhaustive(e)
    return {"outcome": _ids(e, W), "eps": format_rational(eps), "sequence": trace.sequence()}


def _equal_shares_lex(fixture, arguments):
    re = _instance(fixture, arguments)
    W, _, trace = run_equal_shares_lex(re)
    return {"outcome": _ids(re, W), "rho": [step.rho for step in trace.steps]}


def _gcr(fixture, arguments):
    e = _cardinal(_instance(fixture, arguments), arguments)
    W, rounds = run_gcr(e)
    return {
        "outcome": _ids(e, W),
        "betas": [format_rational(round_.beta) for round_ in rounds],
        "bundles": [list(round_.bundle) for round_ in rounds],
        "group_sizes": [len(round_.group) for round_ in rounds],
    }


def _pav(fixture, arguments):
    e = _instance(fixture, arguments)
    return {"outcomes": [_ids(e, W) for W in run_pav(e)]}


def _phragmen(fixture, arguments):
    e = _instance(fixture, arguments)
    W, trace = run_phragmen(e, skip=arguments.get("skip", False))
    return {"outcome": _ids(e, W), "times": [format_rational(step.rho) for step in trace.steps]}


def _checker(check: Callable[[Election | RankedElection, Outcome, dict], AxiomVerdict], ranked: bool = False):
    def evaluate_check(fixture, arguments):
        instance = _instance(fixture, arguments)
        if not ranked:
            instance = _cardinal(instance, arguments)
        return _verdict_result(check(instance, _outcome(instance, arguments), arguments))

    return evaluate_check


def _price_system(fixture, arguments):
    e = _cardinal(_instance(fixture, arguments), arguments)
    found = find_price_system(e, _outcome(e, arguments))
    return {"priceable": found is not None}


OPERATIONS: dict[str, Callable[[Fixture, dict], dict]] = {
    "run_equal_shares": _equal_shares,
    "run_equal_shares_exhaustive": _equal_shares_exhaustive,
    "run_equal_shares_lex": _equal_shares_lex,
    "run_gcr": _gcr,
    "run_pav": _pav,
    "run_phragmen": _phragmen,
    "check_ejr": _checker(lambda e, W, args: check_ejr(e, W, up_to_one=args.get("up_to_one", True))),
    "check_fjr": _checker(lambda e, W, args: check_fjr(e, W)),
    "check_core": _checker(lambda e, W, args: check_core(e, W)),
    "check_alpha_core": _checker(lambda e, W, args: check_alpha_core(e, W, parse_rational(args["alpha"], "alpha"))),
    "check_exhaustive": _checker(lambda e, W, args: check_exhaustive(e, W)),
    "check_psc": _checker(lambda re, W, args: check_psc(re, W, strict_quota=args.get("strict_quota", False)), ranked=True),
    "find_price_system": _price_system,
}


def evaluate(fixture: Fixture, expectation: Expectation) -> dict:
    """Run the expectation's operation; returns only the keys the expectation pins."""
    try:
        operation = OPERATIONS[expectation.operation]
    except KeyError:
        raise StructuralError(f"unknown operation '{expectation.operation}'", "operation") from None
    result = operation(fixture, expectation.arguments)
    return {key: result.get(key) for key in expectation.expected}
