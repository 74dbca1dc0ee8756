"""Input validation helpers shared by every public entry point.

Tensors, matrices, and orthonormal bases are plain float64 numpy arrays;
these helpers enforce the construction invariants (shape, finiteness,
orthonormality) at API boundaries.
"""

from __future__ import annotations

import numbers

import numpy as np

ORTHO_TOL = 1e-10


class ContractViolationError(ValueError):
    """A documented precondition of an operation was violated."""


class NumericalFailureError(RuntimeError):
    """An underlying numerical routine failed to converge."""


def as_tensor3(X, name: str = "X") -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 3:
        raise ContractViolationError(
            f"{name} must be an order-3 tensor, got ndim={X.ndim}"
        )
    if min(X.shape) < 1:
        raise ContractViolationError(f"{name} has an empty mode: shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ContractViolationError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(X)


def as_matrix(A, name: str = "A") -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ContractViolationError(f"{name} must be a matrix, got ndim={A.ndim}")
    if min(A.shape) < 1:
        raise ContractViolationError(f"{name} has an empty axis: shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractViolationError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(A)


def check_mode(mode: int) -> int:
    if mode not in (0, 1, 2):
        raise ContractViolationError(f"mode must be 0, 1, or 2, got {mode!r}")
    return int(mode)


def check_orthonormal(U, name: str = "U", tol: float = ORTHO_TOL) -> np.ndarray:
    """Validate a p-by-r orthonormal-columns matrix (1 <= r <= p)."""
    U = as_matrix(U, name)
    p, r = U.shape
    if r > p:
        raise ContractViolationError(
            f"{name}: subspace dimension {r} exceeds ambient dimension {p}"
        )
    gram = U.T @ U
    err = np.max(np.abs(gram - np.eye(r)))
    if err > tol:
        raise ContractViolationError(
            f"{name} is not orthonormal: max |U^T U - I| = {err:.3e} > {tol:g}"
        )
    return U


def check_ranks(ranks, dims=None) -> tuple[int, int, int]:
    try:
        ranks = tuple(int(r) for r in ranks)
    except TypeError as exc:
        raise ContractViolationError(f"ranks must be a triple, got {ranks!r}") from exc
    if len(ranks) != 3:
        raise ContractViolationError(f"ranks must have length 3, got {ranks!r}")
    if any(r < 1 for r in ranks):
        raise ContractViolationError(f"ranks must be >= 1, got {ranks!r}")
    if dims is not None:
        for k, (r, p) in enumerate(zip(ranks, dims)):
            if r > p:
                raise ContractViolationError(
                    f"rank {r} exceeds dimension {p} in mode {k}"
                )
    return ranks


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, numbers.Integral) or value < 1:
        raise ContractViolationError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_nonnegative(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise ContractViolationError(f"{name} must be finite and >= 0, got {value!r}")
    return value
