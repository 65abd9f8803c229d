from enum import Enum
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from data.errors import ParameterError, StructuralError

ZERO = Fraction(0)
ONE = Fraction(1)


class TieBreak(str, Enum):
    """How a rule picks among candidates tied at the same ρ (or event time)."""

    INDEX = "index"
    MIN_COST = "min-cost-then-index"
    ALL = "all"


class VerdictStatus(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive-bound-hit"


class UtilityScheme(str, Enum):
    LEX_EXPONENTIAL = "lex-exponential"
    BORDA = "borda"


class Election(BaseModel):
    """A participatory budgeting instance with the budget normalized to 1.

    Voters are numbered 1..n. Utilities are stored sparsely, one dict per voter;
    a candidate missing from a voter's dict has utility 0 for that voter.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    candidates: tuple[str, ...]
    cost: dict[str, Fraction]
    utilities: tuple[dict[str, Fraction], ...]
    title: str | None = None

    _index: dict[str, int] = PrivateAttr(default_factory=dict)
    _supporters: dict[str, tuple[int, ...]] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_invariants(self) -> "Election":
        if len(set(self.candidates)) != len(self.candidates):
            raise StructuralError("duplicate candidate ids", "candidates")
        if set(self.cost) != set(self.candidates):
            raise StructuralError("every candidate needs exactly one cost", "cost")
        for c in self.candidates:
            if not ZERO < self.cost[c] <= ONE:
                raise StructuralError(f"cost {self.cost[c]} outside (0, 1]", f"cost.{c}")
        known = set(self.candidates)
        for i, row in enumerate(self.utilities, start=1):
            for c, value in row.items():
                if c not in known:
                    raise StructuralError(f"unknown candidate '{c}'", f"voters[{i}]")
                if not ZERO <= value <= ONE:
                    raise StructuralError(f"utility {value} outside [0, 1]", f"voters[{i}].{c}")
        # caches are built only once every ballot names a known candidate
        self._index = {c: position for position, c in enumerate(self.candidates)}
        supporters: dict[str, list[int]] = {c: [] for c in self.candidates}
        for i, row in enumerate(self.utilities, start=1):
            for c, value in row.items():
                if value > 0:
                    supporters[c].append(i)
        self._supporters = {c: tuple(voters) for c, voters in supporters.items()}
        for c, voters in self._supporters.items():
            if not voters:
                raise StructuralError(f"candidate '{c}' has no voter with positive utility", f"candidates.{c}")
        return self

    @property
    def n(self) -> int:
        return len(self.utilities)

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def voters(self) -> range:
        return range(1, self.n + 1)

    def u(self, voter: int, candidate: str) -> Fraction:
        return self.utilities[voter - 1].get(candidate, ZERO)

    def index(self, candidate: str) -> int:
        try:
            return self._index[candidate]
        except KeyError:
            raise StructuralError(f"unknown candidate '{candidate}'") from None

    def supporters(self, candidate: str) -> tuple[int, ...]:
        """Voters with positive utility for the candidate, in index order."""
        return self._supporters[candidate]

    def ordered(self, candidates) -> list[str]:
        """Candidates sorted by their position in the election."""
        return sorted(candidates, key=self.index)


class RankedElection(BaseModel):
    """Strict rankings over m candidates with a committee size k (unit costs 1/k)."""

    model_config = ConfigDict(frozen=True)

    candidates: tuple[str, ...]
    k: int = Field(gt=0)
    rankings: tuple[tuple[str, ...], ...]
    title: str | None = None

    _pos: tuple[dict[str, int], ...] = PrivateAttr(default_factory=tuple)

    @model_validator(mode="after")
    def _check_rankings(self) -> "RankedElection":
        expected = sorted(self.candidates)
        if len(set(self.candidates)) != len(self.candidates):
            raise StructuralError("duplicate candidate ids", "candidates")
        for i, ranking in enumerate(self.rankings, start=1):
            if sorted(ranking) != expected:
                raise StructuralError("ranking is not a permutation of all candidates", f"voters[{i}].ranking")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._pos = tuple({c: position for position, c in enumerate(ranking, start=1)} for ranking in self.rankings)

    @property
    def n(self) -> int:
        return len(self.rankings)

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def voters(self) -> range:
        return range(1, self.n + 1)

    def pos(self, voter: int, candidate: str) -> int:
        return self._pos[voter - 1][candidate]

    def top(self, voter: int, length: int) -> frozenset[str]:
        return frozenset(self.rankings[voter - 1][:length])

    def index(self, candidate: str) -> int:
        return self.candidates.index(candidate)


class ElectionKind(BaseModel):
    is_approval: bool
    is_unit_cost: bool
    k: int | None = None


class Outcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    selected: frozenset[str] = frozenset()

    def __contains__(self, candidate: str) -> bool:
        return candidate in self.selected

    def __iter__(self):
        return iter(self.selected)

    def __len__(self) -> int:
        return len(self.selected)


class PaymentLedger(BaseModel):
    """Who paid how much for which candidate, plus what every voter has left."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    payments: dict[int, dict[str, Fraction]] = Field(default_factory=dict)
    remaining: dict[int, Fraction] = Field(default_factory=dict)
    zero_utility: set[tuple[int, str]] = Field(default_factory=set)

    @classmethod
    def fresh(cls, n: int, endowment: Fraction | None = None) -> "PaymentLedger":
        share = endowment if endowment is not None else Fraction(1, n)
        return cls(payments={i: {} for i in range(1, n + 1)}, remaining={i: share for i in range(1, n + 1)})

    def charge(self, voter: int, candidate: str, amount: Fraction, zero_utility: bool = False) -> None:
        if amount <= 0:
            return
        self.payments.setdefault(voter, {})
        self.payments[voter][candidate] = self.payments[voter].get(candidate, ZERO) + amount
        self.remaining[voter] = self.remaining[voter] - amount
        if zero_utility:
            self.zero_utility.add((voter, candidate))

    def paid_by(self, voter: int) -> Fraction:
        return sum(self.payments.get(voter, {}).values(), ZERO)

    def paid_for(self, candidate: str) -> Fraction:
        return sum((row.get(candidate, ZERO) for row in self.payments.values()), ZERO)

    def copy_ledger(self) -> "PaymentLedger":
        return PaymentLedger(
            payments={i: dict(row) for i, row in self.payments.items()},
            remaining=dict(self.remaining),
            zero_utility=set(self.zero_utility),
        )


class TraceStep(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    candidate: str
    rho: Fraction | int
    payments: dict[int, Fraction] = Field(default_factory=dict)
    tie_set: list[str] = Field(default_factory=list)
    zero_utility_payers: list[int] = Field(default_factory=list)


class CohesiveRound(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    beta: Fraction
    group: list[int]
    bundle: list[str]
    removed_voters: list[int]


class RuleTrace(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    rule: str
    steps: list[TraceStep] = Field(default_factory=list)
    rounds: list[CohesiveRound] = Field(default_factory=list)

    def sequence(self) -> list[str]:
        return [step.candidate for step in self.steps]


class SearchBounds(BaseModel):
    """Brute-force limits: voter-pool size for S enumeration and candidate count for T enumeration."""

    max_voters: int = Field(default=12, gt=0)
    max_candidates: int = Field(default=16, gt=0)


class Witness(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    voters: list[int] = Field(default_factory=list)
    candidates: list[str] = Field(default_factory=list)
    alpha: dict[str, Fraction] | None = None
    theta: Fraction | None = None
    beta: Fraction | None = None
    ell: int | None = None
    condition: str | None = None
    detail: str | None = None


class AxiomVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    axiom: str
    status: VerdictStatus
    witness: Witness | None = None
    bounds: SearchBounds | None = None

    @property
    def satisfied(self) -> bool:
        return self.status == VerdictStatus.SATISFIED

    @property
    def violated(self) -> bool:
        return self.status == VerdictStatus.VIOLATED


class PriceSystem(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    b: Fraction
    payments: dict[int, dict[str, Fraction]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_b(self) -> "PriceSystem":
        if self.b < 1:
            raise ParameterError(f"price system needs b >= 1, got {self.b}")
        return self

    def paid_by(self, voter: int) -> Fraction:
        return sum(self.payments.get(voter, {}).values(), ZERO)

    def paid_for(self, candidate: str) -> Fraction:
        return sum((row.get(candidate, ZERO) for row in self.payments.values()), ZERO)
