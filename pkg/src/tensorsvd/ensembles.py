"""Randomized instance generation for the Monte Carlo experiments.

An instance is Y = X + Z with X = S x_0 U1 x_1 U2 x_2 U3: Haar factors U_k,
a core S that is either a rescaled standard-Gaussian draw (smallest
matricization singular value pinned to lambda) or a fixed superdiagonal
tensor, and i.i.d. noise Z that is N(0, sigma^2) or Unif[-sqrt(3), sqrt(3)]
(mean 0, variance 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .streams import ROLE_CORE, ROLE_FACTORS, ROLE_NOISE, RngStream
from .subspaces import signal_strength
from .tensor import tucker_compose
from .validation import (
    ContractViolationError,
    NumericalFailureError,
    check_positive_int,
    check_ranks,
)

__all__ = [
    "Instance",
    "haar_orthonormal",
    "rescaled_core",
    "diagonal_core",
    "noise_tensor",
    "make_instance",
]

SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class Instance:
    Y: np.ndarray
    X: np.ndarray
    core: np.ndarray
    factors: tuple[np.ndarray, np.ndarray, np.ndarray]
    lambda_actual: float
    noise_kind: str
    sigma: float


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise ContractViolationError(
        f"rng must be an RngStream or numpy Generator, got {type(rng).__name__}"
    )


def haar_orthonormal(p: int, r: int, rng) -> np.ndarray:
    """Haar-distributed p-by-r orthonormal matrix.

    QR of an i.i.d. standard Gaussian draw, with R's diagonal signs fixed
    nonnegative so the factorization (and hence the draw) is unique.
    """
    p = check_positive_int(p, "p")
    r = check_positive_int(r, "r")
    if r > p:
        raise ContractViolationError(f"r={r} exceeds p={p}")
    gen = _generator(rng)
    Q, R = np.linalg.qr(gen.standard_normal((p, r)))
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def rescaled_core(ranks, lambda_target: float, rng) -> np.ndarray:
    """Standard Gaussian core rescaled so min_k sigma_{r_k}(M_k(S)) = lambda."""
    ranks = check_ranks(ranks)
    r1, r2, r3 = ranks
    for k, (r, a, b) in enumerate(((r1, r2, r3), (r2, r3, r1), (r3, r1, r2))):
        if r > a * b:
            raise ContractViolationError(
                f"mode {k} rank {r} exceeds the matricization width {a * b}"
            )
    lambda_target = float(lambda_target)
    if lambda_target <= 0:
        raise ContractViolationError(f"lambda_target must be > 0, got {lambda_target}")
    gen = _generator(rng)
    for _ in range(2):  # a zero smallest singular value has probability zero
        S = gen.standard_normal(ranks)
        smin = signal_strength(S, ranks)
        if smin > 0:
            return S * (lambda_target / smin)
    raise NumericalFailureError("rank-deficient Gaussian core drawn twice")


def diagonal_core(r: int, strength: float) -> np.ndarray:
    """r x r x r tensor with `strength` on the superdiagonal, zero elsewhere."""
    r = check_positive_int(r, "r")
    strength = float(strength)
    if strength <= 0:
        raise ContractViolationError(f"strength must be > 0, got {strength}")
    S = np.zeros((r, r, r))
    idx = np.arange(r)
    S[idx, idx, idx] = strength
    return S


def noise_tensor(dims, kind: str, rng, sigma: float = 1.0) -> np.ndarray:
    """i.i.d. noise tensor: kind 'gauss' is N(0, sigma^2), 'unif' is
    Unif[-sqrt(3), sqrt(3)] (unit variance; sigma must stay 1)."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or any(d < 1 for d in dims):
        raise ContractViolationError(f"dims must be three positive ints, got {dims}")
    gen = _generator(rng)
    if kind == "gauss":
        sigma = float(sigma)
        if sigma <= 0:
            raise ContractViolationError(f"sigma must be > 0, got {sigma}")
        return sigma * gen.standard_normal(dims)
    if kind == "unif":
        if sigma != 1.0:
            raise ContractViolationError("uniform noise has fixed unit variance")
        return gen.uniform(-SQRT3, SQRT3, dims)
    raise ContractViolationError(f"unknown noise kind {kind!r}")


def make_instance(dims, ranks, lambda_target: float, core_kind: str,
                  noise_kind: str, rng: RngStream, sigma: float = 1.0) -> Instance:
    """Draw a full (Y, X, truth) instance.

    `rng` must be a role-free RngStream; factors, core, and noise each read
    their own role-tagged sibling stream, so the draws are independent and
    individually reproducible.
    """
    dims = tuple(int(d) for d in dims)
    ranks = check_ranks(ranks, dims)
    if not isinstance(rng, RngStream):
        raise ContractViolationError("make_instance requires an RngStream")

    factors_gen = rng.with_role(ROLE_FACTORS).generator()
    factors = tuple(haar_orthonormal(p, r, factors_gen) for p, r in zip(dims, ranks))

    if core_kind == "gaussian":
        S = rescaled_core(ranks, lambda_target, rng.with_role(ROLE_CORE))
    elif core_kind == "diagonal":
        if not (ranks[0] == ranks[1] == ranks[2]):
            raise ContractViolationError("diagonal cores need equal ranks")
        S = diagonal_core(ranks[0], lambda_target)
    else:
        raise ContractViolationError(f"unknown core kind {core_kind!r}")

    X = tucker_compose(S, *factors)
    Z = noise_tensor(dims, noise_kind, rng.with_role(ROLE_NOISE), sigma)
    # Orthonormal factors preserve every matricization singular value, so the
    # core's signal strength is the tensor's (avoids SVDs of wide unfoldings).
    lam = signal_strength(S, ranks)
    return Instance(
        Y=X + Z,
        X=X,
        core=S,
        factors=factors,
        lambda_actual=lam,
        noise_kind=noise_kind,
        sigma=float(sigma),
    )
