"""Higher-order orthogonal iteration and related estimators.

The estimator alternates exact block maximizations of the projection
objective ||Y x_0 V1' x_1 V2' x_2 V3'||_F^2: each sweep refreshes U1 from
the current (U2, U3), then U2 from the fresh U1 and current U3, then U3
from both fresh bases. Initialization is either per-mode truncated SVDs of
the matricizations (spectral) or caller-provided bases. The sweep objective
trace records the Frobenius norm (not its square) and the iteration stops
once its increment falls to eps or max_iter is reached.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .streams import RngStream
from .subspaces import orthonormal_complement, svd_leading
from .tensor import matricize, mode_product, tucker_compose
from .validation import (
    ContractViolationError,
    as_tensor3,
    check_orthonormal,
    check_positive_int,
    check_ranks,
)

__all__ = [
    "TuckerFactors",
    "HooiResult",
    "hosvd_init",
    "hooi",
    "objective",
    "project_estimate",
    "warm_start",
]

STOP_TOLERANCE = "tolerance_met"
STOP_MAX_ITERS = "max_iters"

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class TuckerFactors:
    core: np.ndarray
    bases: tuple[np.ndarray, np.ndarray, np.ndarray]

    def compose(self) -> np.ndarray:
        return tucker_compose(self.core, *self.bases)


@dataclass(frozen=True)
class HooiResult:
    factors: TuckerFactors
    reconstruction: np.ndarray
    objective_trace: np.ndarray = field(repr=False)
    iters_run: int
    stop_reason: str

    @property
    def bases(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.factors.bases

    @property
    def core(self) -> np.ndarray:
        return self.factors.core


def _validate_init(bases, dims, ranks):
    if len(bases) != 3:
        raise ContractViolationError("init must provide three bases")
    out = []
    for k, U in enumerate(bases):
        U = check_orthonormal(U, f"init[{k}]")
        if U.shape != (dims[k], ranks[k]):
            raise ContractViolationError(
                f"init[{k}] has shape {U.shape}, expected {(dims[k], ranks[k])}"
            )
        out.append(U)
    return tuple(out)


def hosvd_init(Y, ranks) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-mode truncated SVDs of the matricizations of Y."""
    Y = as_tensor3(Y, "Y")
    ranks = check_ranks(ranks, Y.shape)
    for k, r in enumerate(ranks):
        M = Y.shape[k], Y.shape[(k + 1) % 3] * Y.shape[(k + 2) % 3]
        if r > min(M):
            raise ContractViolationError(
                f"rank {r} infeasible for the mode-{k} matricization {M}"
            )
    return tuple(svd_leading(matricize(Y, k), ranks[k]) for k in range(3))


def _shrink(Y, U, skip):
    """Project Y onto the bases of every mode except `skip`.

    The largest remaining mode is contracted first to shrink the working
    tensor as early as possible.
    """
    modes = sorted((m for m in range(3) if m != skip),
                   key=lambda m: Y.shape[m], reverse=True)
    Z = Y
    for m in modes:
        Z = np.moveaxis(np.tensordot(U[m].T, Z, axes=(1, m)), 0, m)
    return Z


def _sweep_objective(Y, U) -> float:
    S = _shrink(Y, U, skip=-1)
    return float(np.linalg.norm(S))


def hooi(Y, ranks, *, eps: float | None = None, max_iter: int = 50,
         init="spectral") -> HooiResult:
    """Run HOOI on Y at the given Tucker ranks.

    eps is the stopping tolerance on the objective-norm increment between
    consecutive sweeps; None selects 1e-6 * ||Y||_F. init is "spectral" or a
    sequence of three orthonormal bases.
    """
    Y = as_tensor3(Y, "Y")
    ranks = check_ranks(ranks, Y.shape)
    max_iter = check_positive_int(max_iter, "max_iter")
    Y_norm = float(np.linalg.norm(Y))
    if eps is None:
        eps = 1e-6 * Y_norm
    eps = float(eps)
    if eps < 0 or not np.isfinite(eps):
        raise ContractViolationError(f"eps must be finite and >= 0, got {eps}")

    if isinstance(init, str):
        if init != "spectral":
            raise ContractViolationError(f"unknown init {init!r}")
        U = list(hosvd_init(Y, ranks))
    else:
        U = list(_validate_init(init, Y.shape, ranks))

    trace = [_sweep_objective(Y, U)]
    stop_reason = STOP_MAX_ITERS
    iters = 0
    for _ in range(max_iter):
        for k in range(3):
            Z = _shrink(Y, U, skip=k)
            U[k] = svd_leading(matricize(Z, k), ranks[k])
        iters += 1
        trace.append(_sweep_objective(Y, U))
        if trace[-1] - trace[-2] <= eps:
            stop_reason = STOP_TOLERANCE
            break

    core, Xhat = project_estimate(Y, *U)
    return HooiResult(
        factors=TuckerFactors(core=core, bases=tuple(U)),
        reconstruction=Xhat,
        objective_trace=np.asarray(trace),
        iters_run=iters,
        stop_reason=stop_reason,
    )


def objective(Y, V1, V2, V3) -> float:
    """Squared projection objective ||Y x_0 V1' x_1 V2' x_2 V3'||_F^2."""
    Y = as_tensor3(Y, "Y")
    V = []
    for k, Vk in enumerate((V1, V2, V3)):
        Vk = check_orthonormal(Vk, f"V{k + 1}")
        if Vk.shape[0] != Y.shape[k]:
            raise ContractViolationError(
                f"V{k + 1} has {Vk.shape[0]} rows, expected {Y.shape[k]}"
            )
        V.append(Vk)
    return float(_sweep_objective(Y, V)) ** 2


def project_estimate(Y, U1, U2, U3) -> tuple[np.ndarray, np.ndarray]:
    """Core S = Y x_k U_k' and reconstruction Xhat = Y x_k P_{U_k}."""
    Y = as_tensor3(Y, "Y")
    U = []
    for k, Uk in enumerate((U1, U2, U3)):
        Uk = check_orthonormal(Uk, f"U{k + 1}")
        if Uk.shape[0] != Y.shape[k]:
            raise ContractViolationError(
                f"U{k + 1} has {Uk.shape[0]} rows, expected {Y.shape[k]}"
            )
        U.append(Uk)
    core = _shrink(Y, U, skip=-1)
    Xhat = tucker_compose(core, *U)
    return core, Xhat


def warm_start(U, rng) -> np.ndarray:
    """Rotate U halfway into its orthogonal complement.

    Returns W = U/sqrt(2) + U_perp O / sqrt(2) with O Haar on the complement;
    every principal cosine between W and U is exactly 1/sqrt(2). Requires
    r <= p - r so a rank-r complement rotation exists.
    """
    U = check_orthonormal(U, "U")
    p, r = U.shape
    if r > p - r:
        raise ContractViolationError(
            f"warm start needs r <= p - r, got p={p}, r={r}"
        )
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    if not isinstance(gen, np.random.Generator):
        raise ContractViolationError("rng must be an RngStream or numpy Generator")
    comp = orthonormal_complement(U)
    G = gen.standard_normal((p - r, r))
    O, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    O = O * signs
    return SQRT_HALF * U + SQRT_HALF * (comp @ O)
