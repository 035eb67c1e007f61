import os

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    """State budget for exhaustive enumerations; ``POSETDYN_BUDGET`` overrides."""
    raw = os.environ.get("POSETDYN_BUDGET")
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    return int(raw)
