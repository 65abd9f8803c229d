from fractions import Fraction

from data.election import total_cost, voter_classes, voter_utility
from data.models import ZERO, AxiomVerdict, Election, Outcome, SearchBounds, VerdictStatus, Witness
from data.rational import ceil_fraction


def is_fjr_violation(e: Election, W: Outcome, S, T, beta: Fraction) -> bool:
    """S is weakly (β, T)-cohesive and nobody in S reaches β in W."""
    S, T = list(S), list(T)
    if beta <= 0 or not S or not T or len(S) < total_cost(T, e) * e.n:
        return False
    return all(voter_utility(i, T, e) >= beta > voter_utility(i, W.selected, e) for i in S)


def _max_violating_beta(sums, utility_w, counts, r) -> Fraction | None:
    for beta in sorted({value for value in sums if value > 0}, reverse=True):
        blocking = sum(count for value, own, count in zip(sums, utility_w, counts) if value >= beta > own)
        if blocking >= r:
            return beta
    return None


def check_fjr(e: Election, W: Outcome, bounds: SearchBounds | None = None) -> AxiomVerdict:
    """Enumerate bundles T; for each, scan the threshold β over the values u_i(T).

    Reports the violation with the largest β, then cheapest T, then the
    lexicographically smallest T.
    """
    bounds = bounds or SearchBounds()
    if e.m > bounds.max_candidates:
        return AxiomVerdict(axiom="fjr", status=VerdictStatus.INCONCLUSIVE, bounds=bounds)

    classes = voter_classes(e, e.voters)
    rows = [row for row, _ in classes]
    counts = [len(members) for _, members in classes]
    utility_w = [sum((row.get(c, ZERO) for c in W.selected), ZERO) for row in rows]
    candidates = e.candidates
    best_single = [max((row.get(c, ZERO) for row in rows), default=ZERO) for c in candidates]
    suffix = [ZERO] * (len(candidates) + 1)
    for position in range(len(candidates) - 1, -1, -1):
        suffix[position] = suffix[position + 1] + best_single[position]
    best: list = [None]

    def search(start: int, bundle: tuple[int, ...], cost: Fraction, sums: list[Fraction]) -> None:
        for position in range(start, len(candidates)):
            c = candidates[position]
            new_cost = cost + e.cost[c]
            r = ceil_fraction(new_cost * e.n)
            if r > e.n:
                continue
            new_sums = [value + row.get(c, ZERO) for value, row in zip(sums, rows)]
            new_bundle = bundle + (position,)
            beta = _max_violating_beta(new_sums, utility_w, counts, r)
            if beta is not None:
                found = (beta, new_cost, new_bundle)
                current = best[0]
                if current is None or (beta, -new_cost) > (current[0], -current[1]) or ((beta, new_cost) == current[:2] and new_bundle < current[2]):
                    best[0] = found
            if best[0] is None or max(new_sums) + suffix[position + 1] >= best[0][0]:
                search(position + 1, new_bundle, new_cost, new_sums)

    search(0, (), ZERO, [ZERO] * len(rows))

    if best[0] is None:
        return AxiomVerdict(axiom="fjr", status=VerdictStatus.SATISFIED, bounds=bounds)
    beta, _, positions = best[0]
    bundle = [candidates[position] for position in positions]
    group = [i for i in e.voters if voter_utility(i, bundle, e) >= beta > voter_utility(i, W.selected, e)]
    witness = Witness(voters=group, candidates=bundle, beta=beta)
    return AxiomVerdict(axiom="fjr", status=VerdictStatus.VIOLATED, witness=witness, bounds=bounds)
