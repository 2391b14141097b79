"""Error types and the global dimension cap."""

import os

DEFAULT_MAX_DIM = 4096
MAX_DIM_ENV_VAR = "SEALSIM_MAX_DIM"

NORM_ATOL = 1e-12


class UsageError(ValueError):
    """A caller passed arguments outside an operation's contract."""


class ValidationError(ValueError):
    """Input data violates a structural invariant (e.g. a non-unit row)."""


class ResourceError(RuntimeError):
    """The requested problem size exceeds the configured dense-algebra cap."""


def max_dim() -> int:
    """Current dense-dimension cap (overridable via SEALSIM_MAX_DIM)."""
    raw = os.environ.get(MAX_DIM_ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise ResourceError(f"{MAX_DIM_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 2:
        raise ResourceError(f"{MAX_DIM_ENV_VAR} must be at least 2, got {value}")
    return value


def check_dim(n: int) -> int:
    """Raise ResourceError if an N-dimensional dense problem exceeds the cap."""
    cap = max_dim()
    if n > cap:
        raise ResourceError(
            f"dimension {n} exceeds the cap of {cap}; "
            f"set {MAX_DIM_ENV_VAR} to raise it"
        )
    return n
