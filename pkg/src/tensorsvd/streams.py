"""Deterministic random stream derivation for parallel Monte Carlo runs.

Every random draw in the experiment harness comes from a counter-based
Philox generator keyed by (base_seed, stream_id), where

    stream_id = (cell_index << 40) | (rep << 8) | role

This packing is injective for cell_index < 2**24, rep < 2**32, and
role < 2**8, so replication `rep` of grid cell `cell_index` reads the same
stream no matter how many workers run or in which order tasks complete.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import ContractViolationError

__all__ = [
    "RngStream",
    "derive_stream",
    "ROLE_FACTORS",
    "ROLE_CORE",
    "ROLE_NOISE",
    "ROLE_WARMSTART",
    "ROLE_GRAPH",
    "ROLE_REDUCTION",
]

ROLE_NONE = 0
ROLE_FACTORS = 1
ROLE_CORE = 2
ROLE_NOISE = 3
ROLE_WARMSTART = 4
ROLE_GRAPH = 5
ROLE_REDUCTION = 6

_MASK64 = (1 << 64) - 1
_REP_SHIFT = 8
_CELL_SHIFT = 40


@dataclass(frozen=True)
class RngStream:
    """Value object naming one reproducible random stream."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.seed & _MASK64, self.stream_id & _MASK64], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))

    def with_role(self, role: int) -> "RngStream":
        """Return the sibling stream carrying `role` in the low byte."""
        if not 0 <= role < 256:
            raise ContractViolationError(f"role must be in [0, 255], got {role}")
        return RngStream(self.seed, (self.stream_id & ~0xFF) | role)

    @property
    def role(self) -> int:
        return self.stream_id & 0xFF


def derive_stream(base_seed: int, cell_index: int = 0, rep: int = 0,
                  role: int = ROLE_NONE) -> RngStream:
    if not 0 <= cell_index < (1 << 24):
        raise ContractViolationError(f"cell_index out of range: {cell_index}")
    if not 0 <= rep < (1 << 32):
        raise ContractViolationError(f"rep out of range: {rep}")
    if not 0 <= role < 256:
        raise ContractViolationError(f"role out of range: {role}")
    stream_id = (cell_index << _CELL_SHIFT) | (rep << _REP_SHIFT) | role
    return RngStream(int(base_seed) & _MASK64, stream_id)
