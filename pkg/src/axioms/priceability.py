"""Priceability: verifying a given price system and searching for one."""
import logging
from fractions import Fraction

from data.errors import SearchBoundExceeded, StructuralError
from data.models import ZERO, AxiomVerdict, Election, Outcome, PriceSystem, VerdictStatus, Witness
from tools.simplex import feasible_point
from utils.config import get_limit

logger = logging.getLogger(__name__)

CONDITIONS = ("C1", "C2", "C3", "C4", "C5")


def _check_ids(e: Election, ps: PriceSystem) -> None:
    for i, row in ps.payments.items():
        if not 1 <= i <= e.n:
            raise StructuralError(f"payment by unknown voter {i}", "payments")
        for c in row:
            if c not in e.cost:
                raise StructuralError(f"payment for unknown candidate '{c}'", f"payments.{i}")


def price_system_violation(e: Election, W: Outcome, ps: PriceSystem, conditions=CONDITIONS) -> Witness | None:
    """First violated condition among the requested ones, checked in order C1..C5."""
    _check_ids(e, ps)
    share = ps.b / e.n
    outside = [c for c in e.candidates if c not in W]

    if "C1" in conditions:
        for i in sorted(ps.payments):
            for c in e.ordered(ps.payments[i]):
                amount = ps.payments[i][c]
                if amount < 0:
                    return Witness(voters=[i], candidates=[c], condition="C1", detail=f"negative payment {amount}")
                if amount > 0 and e.u(i, c) == 0:
                    return Witness(voters=[i], candidates=[c], condition="C1", detail=f"voter {i} pays {amount} for a candidate they do not value")
    if "C2" in conditions:
        for i in e.voters:
            if ps.paid_by(i) > share:
                return Witness(voters=[i], condition="C2", detail=f"voter {i} pays {ps.paid_by(i)} > b/n = {share}")
    if "C3" in conditions:
        for c in e.ordered(W.selected):
            if ps.paid_for(c) != e.cost[c]:
                return Witness(candidates=[c], condition="C3", detail=f"{c} receives {ps.paid_for(c)} but costs {e.cost[c]}")
    if "C4" in conditions:
        for c in outside:
            if ps.paid_for(c) != 0:
                return Witness(candidates=[c], condition="C4", detail=f"unelected {c} receives {ps.paid_for(c)}")
    if "C5" in conditions:
        for c in outside:
            unspent = sum((share - sum((ps.payments.get(i, {}).get(w, ZERO) for w in W.selected), ZERO) for i in e.supporters(c)), ZERO)
            if unspent > e.cost[c]:
                return Witness(voters=list(e.supporters(c)), candidates=[c], condition="C5", detail=f"supporters of {c} hold {unspent} > cost {e.cost[c]}")
    return None


def verify_price_system(e: Election, W: Outcome, ps: PriceSystem) -> AxiomVerdict:
    witness = price_system_violation(e, W, ps)
    if witness is None:
        return AxiomVerdict(axiom="priceable", status=VerdictStatus.SATISFIED)
    return AxiomVerdict(axiom="priceable", status=VerdictStatus.VIOLATED, witness=witness)


def find_price_system(e: Election, W: Outcome, max_variables: int | None = None) -> PriceSystem | None:
    """Search for (b, p) supporting W by solving the C1-C5 system exactly.

    Unknowns are p_i(c) for c in W with u_i(c) > 0, plus the surplus b - 1 ≥ 0.
    """
    limit = max_variables or get_limit("PB_SIMPLEX_MAX_VARIABLES")
    elected = e.ordered(W.selected)
    variables = [(i, c) for c in elected for i in e.supporters(c)]
    surplus = len(variables)
    n_vars = len(variables) + 1
    if n_vars > limit:
        raise SearchBoundExceeded("simplex_variables", limit, n_vars)
    column = {key: j for j, key in enumerate(variables)}
    by_voter: dict[int, list[int]] = {}
    for (i, c), j in column.items():
        by_voter.setdefault(i, []).append(j)

    equalities = [({column[(i, c)]: Fraction(1) for i in e.supporters(c)}, e.cost[c]) for c in elected]
    inequalities = []
    share = Fraction(1, e.n)
    for i, columns in sorted(by_voter.items()):
        row = {j: Fraction(1) for j in columns}
        row[surplus] = -share
        inequalities.append((row, share))
    for c in e.candidates:
        if c in W:
            continue
        supporters = e.supporters(c)
        row = {surplus: len(supporters) * share}
        for i in supporters:
            for j in by_voter.get(i, []):
                row[j] = row.get(j, ZERO) - 1
        inequalities.append((row, e.cost[c] - len(supporters) * share))

    point = feasible_point(n_vars, equalities, inequalities)
    if point is None:
        logger.debug("no price system supports %s", elected)
        return None
    payments: dict[int, dict[str, Fraction]] = {}
    for (i, c), j in column.items():
        if point[j] != 0:
            payments.setdefault(i, {})[c] = point[j]
    return PriceSystem(b=1 + point[surplus], payments=payments)
