from data.election import total_cost
from data.models import ONE, AxiomVerdict, Election, Outcome, VerdictStatus, Witness


def check_exhaustive(e: Election, W: Outcome) -> AxiomVerdict:
    """Violated iff some unelected candidate still fits in the budget."""
    spent = total_cost(W.selected, e)
    for c in e.candidates:
        if c not in W and spent + e.cost[c] <= ONE:
            return AxiomVerdict(
                axiom="exhaustive",
                status=VerdictStatus.VIOLATED,
                witness=Witness(candidates=[c], detail=f"cost(W ∪ {{{c}}}) = {spent + e.cost[c]} ≤ 1"),
            )
    return AxiomVerdict(axiom="exhaustive", status=VerdictStatus.SATISFIED)
