"""Size limits shared by the algebra and the simulator.

Defaults can be overridden per process through environment variables:

``BOOLPATTERN_MAX_RANK``
    largest pattern arity (pattern length ``2**rank``), default 24
``BOOLPATTERN_MAX_QUBITS``
    largest state vector, default 24 qubits (128 MiB of float64)
``BOOLPATTERN_MAX_BASIS_RANK``
    largest basis that may be fully materialized, default 16
"""

from __future__ import annotations

import os

DEFAULT_MAX_RANK = 24
DEFAULT_MAX_QUBITS = 24
DEFAULT_MAX_BASIS_RANK = 16
MAX_DENSE_HALF_RANK = 5
MAX_ENUMERATION_RANK = 12


class SizeLimitError(ValueError):
    """Raised when a request would exceed a configured size limit."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_rank() -> int:
    return _env_int("BOOLPATTERN_MAX_RANK", DEFAULT_MAX_RANK)


def max_qubits() -> int:
    return _env_int("BOOLPATTERN_MAX_QUBITS", DEFAULT_MAX_QUBITS)


def max_basis_rank() -> int:
    return _env_int("BOOLPATTERN_MAX_BASIS_RANK", DEFAULT_MAX_BASIS_RANK)


def check_rank(rank: int, what: str = "pattern") -> None:
    limit = max_rank()
    if rank > limit:
        raise SizeLimitError(f"{what} rank {rank} exceeds limit {limit}")


def check_qubits(k: int) -> None:
    limit = max_qubits()
    if k > limit:
        raise SizeLimitError(f"{k} qubits exceeds simulator limit {limit}")
