"""Instance, outcome, price-system and trace documents.

Every rational travels as a "p/q" string. Documents are written with sorted
keys so identical runs produce identical bytes.
"""
import json
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from data.election import classify, outcome_of, total_cost
from data.errors import StructuralError
from data.models import (
    ONE,
    AxiomVerdict,
    Election,
    Outcome,
    PaymentLedger,
    PriceSystem,
    RankedElection,
    RuleTrace,
)
from data.rational import format_rational, parse_rational

FORMAT_VERSION = 1
BALLOT_KINDS = ("utilities", "approves", "ranking")


def _load_json(data: bytes | str | dict) -> dict:
    if isinstance(data, dict):
        return data
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        document = json.loads(data)
    except json.JSONDecodeError as error:
        raise StructuralError(f"malformed JSON at line {error.lineno}, column {error.colno}: {error.msg}") from None
    if not isinstance(document, dict):
        raise StructuralError("top-level value must be an object")
    return document


def _require(mapping: dict, key: str, field: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise StructuralError(f"missing '{key}'", field)
    return mapping[key]


def _ballot_kind(voter: dict, field: str) -> str:
    if not isinstance(voter, dict):
        raise StructuralError("voter must be an object", field)
    kinds = [kind for kind in BALLOT_KINDS if kind in voter]
    if len(kinds) != 1:
        raise StructuralError(f"exactly one of {', '.join(BALLOT_KINDS)} is required", field)
    return kinds[0]


def _count(voter: dict, field: str) -> int:
    count = voter.get("count", 1)
    if isinstance(count, bool) or not isinstance(count, int) or count <= 0:
        raise StructuralError(f"count must be a positive integer, got {count!r}", f"{field}.count")
    return count


def parse_instance(data: bytes | str | dict) -> Election | RankedElection:
    """Parse an instance document and normalize the budget to 1.

    Ballots are uniform across the document: sparse `utilities`, `approves`
    lists, or full `ranking`s. A voter entry with `count: t` stands for t
    identical voters.
    """
    document = _load_json(data)
    version = document.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise StructuralError(f"unsupported format_version {version!r}", "format_version")
    title = (document.get("meta") or {}).get("title")

    raw_candidates = _require(document, "candidates", "")
    raw_voters = _require(document, "voters", "")
    if not isinstance(raw_candidates, list) or not raw_candidates:
        raise StructuralError("expected a non-empty list", "candidates")
    if not isinstance(raw_voters, list) or not raw_voters:
        raise StructuralError("expected a non-empty list", "voters")

    ids = []
    for position, candidate in enumerate(raw_candidates):
        cid = _require(candidate, "id", f"candidates[{position}]")
        if not isinstance(cid, str) or not cid:
            raise StructuralError("candidate id must be a non-empty string", f"candidates[{position}].id")
        ids.append(cid)

    kinds = {_ballot_kind(voter, f"voters[{position}]") for position, voter in enumerate(raw_voters)}
    if len(kinds) != 1:
        raise StructuralError(f"ballot kinds are mixed: {sorted(kinds)}", "voters")
    (kind,) = kinds

    try:
        if kind == "ranking":
            return _parse_ranked(document, ids, raw_voters, title)
        return _parse_cardinal(document, ids, raw_candidates, raw_voters, kind, title)
    except ValidationError as error:
        raise StructuralError(str(error)) from None


def _parse_ranked(document: dict, ids: list[str], raw_voters: list, title: str | None) -> RankedElection:
    k = _require(document, "committee_size", "")
    if isinstance(k, bool) or not isinstance(k, int) or k <= 0:
        raise StructuralError(f"committee_size must be a positive integer, got {k!r}", "committee_size")
    rankings = []
    for position, voter in enumerate(raw_voters):
        field = f"voters[{position}]"
        ranking = voter["ranking"]
        if not isinstance(ranking, list) or not all(isinstance(c, str) for c in ranking):
            raise StructuralError("ranking must be a list of candidate ids", f"{field}.ranking")
        if sorted(ranking) != sorted(ids):
            raise StructuralError("ranking is not a permutation of all candidates", f"{field}.ranking")
        rankings.extend([tuple(ranking)] * _count(voter, field))
    return RankedElection(candidates=tuple(ids), k=k, rankings=tuple(rankings), title=title)


def _parse_cardinal(document: dict, ids: list[str], raw_candidates: list, raw_voters: list, kind: str, title: str | None) -> Election:
    budget = parse_rational(_require(document, "budget", ""), "budget")
    if budget <= 0:
        raise StructuralError(f"budget must be positive, got {budget}", "budget")
    cost = {}
    for position, candidate in enumerate(raw_candidates):
        field = f"candidates[{position}].cost"
        value = parse_rational(_require(candidate, "cost", f"candidates[{position}]"), field)
        if not 0 < value <= budget:
            raise StructuralError(f"cost {value} outside (0, budget]", field)
        cost[candidate["id"]] = value / budget

    known = set(ids)
    rows = []
    for position, voter in enumerate(raw_voters):
        field = f"voters[{position}]"
        row = {}
        if kind == "approves":
            approved = voter["approves"]
            if not isinstance(approved, list) or not all(isinstance(c, str) for c in approved):
                raise StructuralError("approves must be a list of candidate ids", f"{field}.approves")
            for c in approved:
                if c not in known:
                    raise StructuralError(f"unknown candidate '{c}'", f"{field}.approves")
                row[c] = ONE
        else:
            ballot = voter["utilities"]
            if not isinstance(ballot, dict):
                raise StructuralError("utilities must be an object", f"{field}.utilities")
            for c, raw in ballot.items():
                if c not in known:
                    raise StructuralError(f"unknown candidate '{c}'", f"{field}.utilities")
                value = parse_rational(raw, f"{field}.utilities.{c}")
                if value != 0:
                    row[c] = value
        rows.extend([row] * _count(voter, field))

    for c in ids:
        if not any(row.get(c, 0) > 0 for row in rows):
            raise StructuralError(f"candidate '{c}' has no voter with positive utility", f"candidates.{c}")
    return Election(candidates=tuple(ids), cost=cost, utilities=tuple(rows), title=title)


def voter_blocks(ballots) -> list[tuple[object, int]]:
    """Run-length encoding of consecutive identical ballots."""
    blocks: list[tuple[object, int]] = []
    for ballot in ballots:
        if blocks and blocks[-1][0] == ballot:
            blocks[-1] = (ballot, blocks[-1][1] + 1)
        else:
            blocks.append((ballot, 1))
    return blocks


def _voter_entry(key: str, ballot, count: int, number: int) -> dict:
    entry = {"id": number, key: ballot}
    if count > 1:
        entry["count"] = count
    return entry


def serialize_instance(e: Election | RankedElection) -> dict:
    document = {"format_version": FORMAT_VERSION, "meta": {"title": e.title} if e.title else {}}
    voters = []
    number = 1
    if isinstance(e, RankedElection):
        document["committee_size"] = e.k
        document["candidates"] = [{"id": c} for c in e.candidates]
        for ranking, count in voter_blocks(list(e.rankings)):
            voters.append(_voter_entry("ranking", list(ranking), count, number))
            number += count
    else:
        document["budget"] = "1"
        document["candidates"] = [{"id": c, "cost": format_rational(e.cost[c])} for c in e.candidates]
        approval = classify(e).is_approval
        for row, count in voter_blocks(list(e.utilities)):
            if approval:
                ballot = e.ordered(row)
                voters.append(_voter_entry("approves", ballot, count, number))
            else:
                ballot = {c: format_rational(row[c]) for c in e.ordered(row)}
                voters.append(_voter_entry("utilities", ballot, count, number))
            number += count
    document["voters"] = voters
    return document


def dumps(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


def _read_reference(reference: str) -> str:
    path = Path(reference)
    if not path.is_file():
        raise StructuralError(f"no such file '{reference}'")
    return path.read_text(encoding="utf-8")


def parse_outcome(reference: str, e: Election | RankedElection) -> Outcome:
    """`outcome:{c1,c2}` inline, or a file with a list of ids or an object holding `outcome`."""
    if reference.startswith("outcome:"):
        body = reference[len("outcome:"):].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise StructuralError(f"expected outcome:{{ids}}, got {reference!r}")
        ids = [part.strip() for part in body[1:-1].split(",") if part.strip()]
    else:
        try:
            document = json.loads(_read_reference(reference))
        except json.JSONDecodeError as error:
            raise StructuralError(f"malformed JSON at line {error.lineno}, column {error.colno}: {error.msg}") from None
        ids = document.get("outcome") if isinstance(document, dict) else document
        if not isinstance(ids, list):
            raise StructuralError("expected a list of candidate ids", "outcome")
    if isinstance(e, RankedElection):
        for c in ids:
            if c not in e.candidates:
                raise StructuralError(f"unknown candidate '{c}'")
        return Outcome(selected=frozenset(ids))
    return outcome_of(e, ids)


def parse_price_system(data: bytes | str | dict, e: Election) -> PriceSystem:
    """A price-system document ({b, payments}) or a trace document carrying a `ledger`."""
    document = _load_json(data)
    if "ledger" in document:
        document = document["ledger"]
    b = parse_rational(document.get("b", "1"), "b")
    raw = _require(document, "payments", "")
    if not isinstance(raw, dict):
        raise StructuralError("payments must be an object keyed by voter", "payments")
    payments: dict[int, dict[str, Fraction]] = {}
    for key, row in raw.items():
        field = f"payments.{key}"
        try:
            voter = int(key)
        except ValueError:
            raise StructuralError("voter keys must be integers", field) from None
        if not 1 <= voter <= e.n:
            raise StructuralError(f"unknown voter {voter}", field)
        if not isinstance(row, dict):
            raise StructuralError("expected an object keyed by candidate", field)
        payments[voter] = {}
        for c, value in row.items():
            if c not in e.cost:
                raise StructuralError(f"unknown candidate '{c}'", field)
            payments[voter][c] = parse_rational(value, f"{field}.{c}")
    return PriceSystem(b=b, payments=payments)


def _rational_map(values: dict) -> dict:
    return {str(key): format_rational(value) for key, value in values.items()}


def outcome_to_document(e: Election | RankedElection, W: Outcome) -> dict:
    ids = sorted(W.selected, key=e.index)
    document = {"outcome": ids}
    if isinstance(e, Election):
        document["total_cost"] = format_rational(total_cost(ids, e))
    return document


def ledger_to_document(ledger: PaymentLedger) -> dict:
    return {
        "b": "1",
        "payments": {str(i): _rational_map(row) for i, row in sorted(ledger.payments.items()) if row},
        "remaining": _rational_map(dict(sorted(ledger.remaining.items()))),
        "zero_utility": [[i, c] for i, c in sorted(ledger.zero_utility)],
    }


def trace_to_document(e: Election | RankedElection, W: Outcome, trace: RuleTrace, ledger: PaymentLedger | None = None) -> dict:
    document = {"rule": trace.rule, **outcome_to_document(e, W)}
    document["steps"] = [
        {
            "candidate": step.candidate,
            "rho": step.rho if isinstance(step.rho, int) else format_rational(step.rho),
            "payments": _rational_map(step.payments),
            "tie_set": list(step.tie_set),
            "zero_utility_payers": list(step.zero_utility_payers),
        }
        for step in trace.steps
    ]
    if trace.rounds:
        document["rounds"] = [
            {
                "beta": format_rational(round_.beta),
                "group": list(round_.group),
                "bundle": list(round_.bundle),
                "removed_voters": len(round_.removed_voters),
            }
            for round_ in trace.rounds
        ]
    if ledger is not None:
        document["ledger"] = ledger_to_document(ledger)
    return document


def verdict_to_document(verdict: AxiomVerdict) -> dict:
    document = {"axiom": verdict.axiom, "status": verdict.status.value}
    if verdict.bounds is not None:
        document["bounds"] = verdict.bounds.model_dump()
    if verdict.witness is not None:
        w = verdict.witness
        witness = {"voters": list(w.voters), "candidates": list(w.candidates)}
        if w.alpha is not None:
            witness["alpha"] = _rational_map(w.alpha)
        for name in ("theta", "beta"):
            value = getattr(w, name)
            if value is not None:
                witness[name] = format_rational(value)
        for name in ("ell", "condition", "detail"):
            value = getattr(w, name)
            if value is not None:
                witness[name] = value
        document["witness"] = witness
    return document
