"""Search limits read from the environment (a .env file is honoured by the CLI)."""
import os

from pydantic import ValidationError

from data.errors import ParameterError
from data.models import SearchBounds

DEFAULT_LIMITS = {
    "PB_GCR_MAX_CANDIDATES": 20,
    "PB_PAV_MAX_CANDIDATES": 24,
    "PB_FLOW_NODE_BUDGET": 10**7,
    "PB_SIMPLEX_MAX_VARIABLES": 200,
    "PB_EPS_HALVINGS": 64,
}


def _positive_int(name: str, raw: str) -> int:
    try:
        value = int(raw.strip())
    except ValueError:
        raise ParameterError(f"{name} must be a positive integer, got {raw!r}") from None
    if value <= 0:
        raise ParameterError(f"{name} must be a positive integer, got {raw!r}")
    return value


def get_limit(name: str) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return DEFAULT_LIMITS[name]
    return _positive_int(name, raw)


def get_search_bounds(max_voters: int | None = None, max_candidates: int | None = None) -> SearchBounds:
    """Checker bounds: explicit arguments win over PB_SEARCH_BOUND ("N,M" or "N").

    Only bounds that were actually configured are passed on, so
    `model_fields_set` tells the checkers which limits the user chose.
    """
    chosen: dict[str, int] = {}
    raw = os.getenv("PB_SEARCH_BOUND")
    if raw:
        parts = raw.split(",")
        if len(parts) > 2:
            raise ParameterError(f"PB_SEARCH_BOUND must be 'N' or 'N,M', got {raw!r}")
        chosen["max_voters"] = _positive_int("PB_SEARCH_BOUND", parts[0])
        if len(parts) == 2:
            chosen["max_candidates"] = _positive_int("PB_SEARCH_BOUND", parts[1])
    if max_voters is not None:
        chosen["max_voters"] = max_voters
    if max_candidates is not None:
        chosen["max_candidates"] = max_candidates
    try:
        return SearchBounds(**chosen)
    except ValidationError:
        raise ParameterError(f"search bounds must be positive integers, got {chosen}") from None
