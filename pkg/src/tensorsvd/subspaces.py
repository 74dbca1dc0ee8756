"""Spectral subspace primitives and sin-theta distances."""

from __future__ import annotations

import numpy as np

from .tensor import matricize
from .validation import (
    ContractViolationError,
    NumericalFailureError,
    as_matrix,
    as_tensor3,
    check_orthonormal,
    check_ranks,
)

__all__ = [
    "svd_leading",
    "singular_values",
    "principal_angles",
    "sin_theta_norm",
    "projector",
    "orthonormal_complement",
    "signal_strength",
]

# Above this aspect ratio a QR factorization of A.T (R factor only) is taken
# first and the SVD runs on the small square R.T; same left subspace, much
# cheaper than gesdd on very wide inputs.
_WIDE_RATIO = 3


def _left_svd(A: np.ndarray, want_vectors: bool = True):
    n, m = A.shape
    try:
        if m > _WIDE_RATIO * n:
            R = np.linalg.qr(A.T, mode="r")
            U, s, _ = np.linalg.svd(R.T, full_matrices=False)
        else:
            U, s, _ = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD did not converge: {exc}") from exc
    return (U, s) if want_vectors else s


def svd_leading(A, r: int) -> np.ndarray:
    """Orthonormal basis of the top-r left singular subspace of A."""
    A = as_matrix(A)
    r = int(r)
    if not 1 <= r <= min(A.shape):
        raise ContractViolationError(
            f"r={r} out of range for a {A.shape[0]}x{A.shape[1]} matrix"
        )
    U, _ = _left_svd(A)
    return np.ascontiguousarray(U[:, :r])


def singular_values(A) -> np.ndarray:
    """All singular values of A, descending (wide inputs take the QR path)."""
    return _left_svd(as_matrix(A), want_vectors=False)


def principal_angles(U, V) -> np.ndarray:
    """Cosines of the principal angles between span(U) and span(V).

    Returned nonincreasing and clamped to [0, 1].
    """
    U = check_orthonormal(U, "U")
    V = check_orthonormal(V, "V")
    if U.shape != V.shape:
        raise ContractViolationError(
            f"shape mismatch: U is {U.shape}, V is {V.shape}"
        )
    s = np.linalg.svd(U.T @ V, compute_uv=False)
    return np.clip(s, 0.0, 1.0)


def sin_theta_norm(U, V, q) -> float:
    """Schatten-q norm of sin Theta(U, V); q = numpy.inf gives the max sine.

    The sines are the singular values of U - V(V^T U), i.e. of the residual
    of U against span(V). This evaluates the same quantity as
    (1 - cos^2)^{1/2} over the principal cosines but keeps full precision
    near zero angle, where the cosine route bottoms out around sqrt(eps).
    """
    U = check_orthonormal(U, "U")
    V = check_orthonormal(V, "V")
    if U.shape != V.shape:
        raise ContractViolationError(
            f"shape mismatch: U is {U.shape}, V is {V.shape}"
        )
    sin = np.clip(np.linalg.svd(U - V @ (V.T @ U), compute_uv=False), 0.0, 1.0)
    if np.isinf(q):
        return float(sin.max())
    q = float(q)
    if q < 1:
        raise ContractViolationError(f"q must be >= 1 or inf, got {q}")
    return float(np.sum(sin**q) ** (1.0 / q))


def projector(U) -> np.ndarray:
    U = check_orthonormal(U, "U")
    return U @ U.T


def orthonormal_complement(U) -> np.ndarray:
    """Orthonormal basis of span(U)^perp (requires r < p)."""
    U = check_orthonormal(U, "U")
    p, r = U.shape
    if r >= p:
        raise ContractViolationError(f"no complement: subspace fills R^{p}")
    Q = np.linalg.qr(U, mode="complete")[0]
    comp = Q[:, r:]
    # Householder QR can flip orientation; re-orthogonalize against U exactly
    # once to absorb roundoff from the complete factorization.
    comp = comp - U @ (U.T @ comp)
    comp, _ = np.linalg.qr(comp)
    return np.ascontiguousarray(comp)


def signal_strength(X, ranks) -> float:
    """min over modes k of the ranks[k]-th singular value of matricize(X, k)."""
    X = as_tensor3(X)
    ranks = check_ranks(ranks, X.shape)
    out = np.inf
    for k, r in enumerate(ranks):
        s = singular_values(matricize(X, k))
        out = min(out, float(s[r - 1]))
    return max(out, 0.0)
