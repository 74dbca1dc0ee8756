"""Order-3 tensor algebra primitives.

A tensor is a float64 numpy array of shape (p1, p2, p3) in C order, i.e.
stored in mode-0 matricization layout. Matricizations follow the cyclic
convention: mode k unfolds to a (p_k, p_{k+1}·p_{k+2}) matrix whose column
index is built with mode k+1 (cyclic) as the major axis. Under this
convention

    matricize(mode_product(mode_product(X, k+1, A.T), k+2, B.T), k)
        = matricize(X, k) @ kronecker(A, B)

which is the identity every spectral step in this package relies on.
"""

from __future__ import annotations

import numpy as np

from .validation import ContractViolationError, as_matrix, as_tensor3, check_mode

__all__ = [
    "matricize",
    "mode_product",
    "kronecker",
    "tucker_compose",
    "frobenius_norm",
    "subtensor",
]


def matricize(X, mode: int) -> np.ndarray:
    """Unfold X along `mode` (0, 1, or 2) into a matrix.

    Mode 0 is a zero-copy reshape of the C-order storage; modes 1 and 2
    transpose cyclically first and therefore copy.
    """
    X = as_tensor3(X)
    m = check_mode(mode)
    return np.transpose(X, (m, (m + 1) % 3, (m + 2) % 3)).reshape(X.shape[m], -1)


def mode_product(X, mode: int, A) -> np.ndarray:
    """Contract mode `mode` of X with the columns of A.

    Satisfies matricize(result, mode) == A @ matricize(X, mode); the result
    has dims[mode] replaced by A.shape[0].
    """
    X = as_tensor3(X)
    m = check_mode(mode)
    A = as_matrix(A)
    if A.shape[1] != X.shape[m]:
        raise ContractViolationError(
            f"mode {m} product: matrix has {A.shape[1]} columns but the tensor "
            f"mode has size {X.shape[m]}"
        )
    out = np.tensordot(A, X, axes=(1, m))
    return np.ascontiguousarray(np.moveaxis(out, 0, m))


def kronecker(A, B) -> np.ndarray:
    """Kronecker product with A's indices as the major (block) axes."""
    return np.kron(as_matrix(A), as_matrix(B))


def tucker_compose(S, U1, U2, U3) -> np.ndarray:
    """Multiply core S by U1, U2, U3 along modes 0, 1, 2 respectively."""
    S = as_tensor3(S, "S")
    factors = (as_matrix(U1, "U1"), as_matrix(U2, "U2"), as_matrix(U3, "U3"))
    for k, U in enumerate(factors):
        if U.shape[1] != S.shape[k]:
            raise ContractViolationError(
                f"factor {k} has {U.shape[1]} columns but the core mode has "
                f"size {S.shape[k]}"
            )
    out = S
    for k, U in enumerate(factors):
        out = mode_product(out, k, U)
    return out


def frobenius_norm(X) -> float:
    return float(np.linalg.norm(as_tensor3(X)))


def subtensor(X, ranges) -> np.ndarray:
    """Copy the block X[ranges[0], ranges[1], ranges[2]].

    Each range is a (start, stop) pair or a slice with 0 <= start < stop <=
    dim (half-open, step 1).
    """
    X = as_tensor3(X)
    slices = []
    for k, rng in enumerate(ranges):
        if isinstance(rng, slice):
            if rng.step not in (None, 1):
                raise ContractViolationError(f"mode {k} range must have step 1")
            start = 0 if rng.start is None else rng.start
            stop = X.shape[k] if rng.stop is None else rng.stop
        else:
            start, stop = rng
        start, stop = int(start), int(stop)
        if not (0 <= start < stop <= X.shape[k]):
            raise ContractViolationError(
                f"mode {k} range [{start}, {stop}) is out of bounds for "
                f"dimension {X.shape[k]}"
            )
        slices.append(slice(start, stop))
    return X[tuple(slices)].copy()
