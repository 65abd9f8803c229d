"""Feasibility predicates and utility arithmetic shared by rules and checkers."""
from collections.abc import Iterable
from fractions import Fraction

from data.errors import DomainError, StructuralError
from data.models import ONE, ZERO, Election, ElectionKind, Outcome


def _check_candidates(T: Iterable[str], e: Election) -> list[str]:
    T = list(T)
    for c in T:
        if c not in e.cost:
            raise StructuralError(f"unknown candidate '{c}'")
    return T


def _check_voters(S: Iterable[int], e: Election) -> list[int]:
    S = list(S)
    for i in S:
        if not 1 <= i <= e.n:
            raise StructuralError(f"unknown voter {i}")
    return S


def total_cost(T: Iterable[str], e: Election) -> Fraction:
    return sum((e.cost[c] for c in _check_candidates(T, e)), ZERO)


def group_utility(S: Iterable[int], T: Iterable[str], e: Election) -> Fraction:
    T = _check_candidates(T, e)
    return sum((voter_utility(i, T, e) for i in _check_voters(S, e)), ZERO)


def voter_utility(voter: int, T: Iterable[str], e: Election) -> Fraction:
    row = e.utilities[voter - 1]
    return sum((row.get(c, ZERO) for c in T), ZERO)


def is_feasible(T: Iterable[str], e: Election) -> bool:
    return total_cost(T, e) <= ONE


def outcome_of(e: Election, candidates: Iterable[str]) -> Outcome:
    """Build an Outcome after checking ids and the budget."""
    selected = frozenset(_check_candidates(candidates, e))
    if not is_feasible(selected, e):
        raise StructuralError(f"outcome {sorted(selected)} costs {total_cost(selected, e)} > 1")
    return Outcome(selected=selected)


def classify(e: Election) -> ElectionKind:
    is_approval = all(value in (ZERO, ONE) for row in e.utilities for value in row.values())
    costs = {e.cost[c] for c in e.candidates}
    k = None
    if len(costs) == 1:
        (unit,) = costs
        if unit.numerator == 1:
            k = unit.denominator
    return ElectionKind(is_approval=is_approval, is_unit_cost=k is not None, k=k)


def require_approval(e: Election, operation: str) -> None:
    if not classify(e).is_approval:
        raise DomainError(f"{operation} is only defined for approval instances")


def approval_set(voter: int, e: Election) -> frozenset[str]:
    return frozenset(c for c, value in e.utilities[voter - 1].items() if value == ONE)


def min_positive_utility(e: Election) -> Fraction:
    return min(value for row in e.utilities for value in row.values() if value > 0)


def voter_classes(e: Election, voters: Iterable[int]) -> list[tuple[dict[str, Fraction], list[int]]]:
    """Group voters with identical utility rows, keeping first-appearance order."""
    classes: dict[tuple, tuple[dict[str, Fraction], list[int]]] = {}
    for i in voters:
        row = e.utilities[i - 1]
        key = tuple(sorted((c, value) for c, value in row.items() if value > 0))
        if key not in classes:
            classes[key] = (row, [])
        classes[key][1].append(i)
    return list(classes.values())


def build_election(candidates: dict[str, Fraction], utilities: list[dict[str, Fraction]], title: str | None = None) -> Election:
    """Convenience constructor; drops explicit zero utilities."""
    rows = tuple({c: Fraction(v) for c, v in row.items() if Fraction(v) != 0} for row in utilities)
    return Election(
        candidates=tuple(candidates),
        cost={c: Fraction(cost) for c, cost in candidates.items()},
        utilities=rows,
        title=title,
    )


def approval_election(costs: dict[str, Fraction], approvals: list[Iterable[str]], title: str | None = None) -> Election:
    return build_election(costs, [{c: ONE for c in approved} for approved in approvals], title=title)
