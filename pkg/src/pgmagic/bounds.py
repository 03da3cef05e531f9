"""Size limits shared by the enumeration and elimination routines."""

from __future__ import annotations

import os

DEFAULT_MAX_CELLS = 4_000_000
DEFAULT_SNF_SHAPE = (2000, 500)
DEFAULT_SNF_BITS = 4096
DEFAULT_SEARCH_EXHAUSTIVE = 2**24


class BoundExceededError(RuntimeError):
    """A configured size limit would be exceeded."""


def max_cells() -> int:
    """Enumeration bound; ``PG_MAGIC_MAX_CELLS`` overrides the default."""
    env = os.environ.get("PG_MAGIC_MAX_CELLS")
    return int(env) if env else DEFAULT_MAX_CELLS


def check_cells(count: int, what: str) -> None:
    limit = max_cells()
    if count > limit:
        raise BoundExceededError(f"{what}: {count} exceeds the enumeration bound {limit}")
