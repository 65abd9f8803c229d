from data.errors import ParameterError
from data.models import AxiomVerdict, Outcome, RankedElection, VerdictStatus, Witness


def solid_coalitions(re: RankedElection) -> list[tuple[frozenset[str], list[int]]]:
    """Every rank-prefix set T with the voters whose top-|T| set is exactly T.

    Ordered by |T|, then by the sorted candidate positions of T.
    """
    groups: dict[frozenset[str], list[int]] = {}
    for length in range(1, re.m + 1):
        for i in re.voters:
            groups.setdefault(re.top(i, length), []).append(i)
    return sorted(groups.items(), key=lambda item: (len(item[0]), sorted(map(re.index, item[0]))))


def guaranteed_seats(group_size: int, re: RankedElection, strict_quota: bool = False) -> int:
    """Largest ℓ ≤ k with |S| ≥ n·ℓ/k (or |S| > n·ℓ/k with the strict quota)."""
    if strict_quota:
        seats = -(-(group_size * re.k) // re.n) - 1
    else:
        seats = group_size * re.k // re.n
    return min(max(seats, 0), re.k)


def check_psc(re: RankedElection, W: Outcome, strict_quota: bool = False) -> AxiomVerdict:
    if len(W) > re.k:
        raise ParameterError(f"outcome has {len(W)} candidates but the committee size is {re.k}")
    for prefix, group in solid_coalitions(re):
        seats = guaranteed_seats(len(group), re, strict_quota)
        if seats == 0:
            continue
        if len(W.selected & prefix) < min(seats, len(prefix)):
            witness = Witness(
                voters=group,
                candidates=sorted(prefix, key=re.index),
                ell=seats,
                detail=f"{len(W.selected & prefix)} of {min(seats, len(prefix))} required candidates elected",
            )
            return AxiomVerdict(axiom="psc", status=VerdictStatus.VIOLATED, witness=witness)
    return AxiomVerdict(axiom="psc", status=VerdictStatus.SATISFIED)
