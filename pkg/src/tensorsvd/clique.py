"""3-uniform hypergraph planted-clique toolkit.

A PC3(N, kappa) instance hides a kappa-clique of forced hyperedges in one
half of the vertex set of an Erdos-Renyi 3-uniform hypergraph with edge
probability 1/2. The adjacency tensor is symmetric under all six index
permutations and zero whenever an index repeats; it is stored bit-packed
along the third mode (N^3 bits), with dense blocks materialized on demand.

The spectral estimator splits the first half into three consecutive
equal blocks D1, D2, D3, recenters the D1 x D2 x D3 adjacency block to
+/-1, and reads each block's clique coordinates off the leading left
singular vector of the corresponding matricization.

The Gaussianization map converts an instance into a p = N/3 cube whose
entries are truncated shifted normals: +mu shift where the corner block
A[V1, V2, V3] (interleaved index sets defined below) carries an edge, -mu
elsewhere, truncated at level M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .streams import RngStream
from .tensor import matricize
from .validation import (
    ContractViolationError,
    as_tensor3,
    check_positive_int,
)

__all__ = [
    "CliqueInstance",
    "ReductionParams",
    "CliqueSpectralResult",
    "sample_hypergraph",
    "spectral_clique_estimate",
    "recover_clique",
    "detect_half",
    "gaussianize",
    "xi_field",
    "embed",
    "clique_block_supports",
    "default_reduction_params",
    "half_blocks",
]

FIRST = 1
SECOND = 2


@dataclass(frozen=True)
class CliqueInstance:
    """Sampled PC3 instance; adjacency bit-packed along mode 2."""

    N: int
    kappa: int
    half: int
    clique: np.ndarray  # sorted 0-based vertex ids
    packed: np.ndarray  # (N, N, ceil(N/8)) uint8, big-endian bit order

    def block(self, I, J, K) -> np.ndarray:
        """Dense float64 {0,1} copy of A[I, J, K]."""
        I = np.asarray(I, dtype=np.intp)
        J = np.asarray(J, dtype=np.intp)
        K = np.asarray(K, dtype=np.intp)
        sub = self.packed[np.ix_(I, J)]
        bits = np.unpackbits(sub, axis=2, count=self.N)
        return bits[:, :, K].astype(np.float64)

    def adjacency_dense(self) -> np.ndarray:
        """Full dense uint8 adjacency (N^3 bytes; small N only)."""
        return np.unpackbits(self.packed, axis=2, count=self.N)


@dataclass(frozen=True)
class CliqueSpectralResult:
    vectors: tuple[np.ndarray, np.ndarray, np.ndarray]
    supports: tuple[np.ndarray, np.ndarray, np.ndarray]  # global vertex ids


@dataclass(frozen=True)
class ReductionParams:
    """Truncation level M and shift mu of the Gaussianization map."""

    M: float
    mu: float

    def __post_init__(self):
        if self.M < 4:
            raise ContractViolationError(f"M must be >= 4, got {self.M}")
        if not 0 < self.mu <= 1.0 / (2.0 * self.M):
            raise ContractViolationError(
                f"mu must lie in (0, 1/(2M)], got mu={self.mu}, M={self.M}"
            )


def default_reduction_params(N: int) -> ReductionParams:
    """M = sqrt(8 log N), mu = 1/(2M)."""
    M = math.sqrt(8.0 * math.log(N))
    return ReductionParams(M=M, mu=1.0 / (2.0 * M))


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise ContractViolationError(
        f"rng must be an RngStream or numpy Generator, got {type(rng).__name__}"
    )


def half_vertices(N: int, half: int) -> np.ndarray:
    """0-based vertex ids of half 1 ({0..floor(N/2)-1}) or half 2 (the rest)."""
    if half == FIRST:
        return np.arange(N // 2)
    if half == SECOND:
        return np.arange(N // 2, N)
    raise ContractViolationError(f"half must be 1 or 2, got {half!r}")


def half_blocks(N: int, half: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split a half into three consecutive equal blocks D1, D2, D3.

    Block k covers positions [floor((k-1)m/3), floor(km/3)) of the half,
    m being the half size; any remainder vertices at the tail are unused.
    """
    vertices = half_vertices(N, half)
    m = len(vertices)
    bounds = [m // 3 * k for k in range(4)]
    if bounds[1] < 1:
        raise ContractViolationError(f"N={N} too small for three nonempty blocks")
    return tuple(vertices[bounds[k]:bounds[k + 1]] for k in range(3))


def sample_hypergraph(N: int, kappa: int, half: int, rng) -> CliqueInstance:
    """Sample a PC3(N, kappa) instance with the clique in the given half.

    Draw order (fixed for reproducibility): clique vertices first, then one
    Bernoulli(1/2) bit per canonical triple i < j < k, symmetrized to all
    six orderings; entries with a repeated index stay 0; all distinct
    triples inside the clique are forced to 1.
    """
    N = check_positive_int(N, "N")
    kappa = check_positive_int(kappa, "kappa")
    if N < 6:
        raise ContractViolationError(f"N must be >= 6, got {N}")
    if kappa > N // 2:
        raise ContractViolationError(f"kappa={kappa} exceeds half size {N // 2}")
    gen = _generator(rng)

    hosts = half_vertices(N, half)
    clique = np.sort(gen.choice(hosts, size=kappa, replace=False))

    A = gen.integers(0, 2, size=(N, N, N), dtype=np.uint8)
    idx = np.arange(N)
    canonical = (idx[:, None, None] < idx[None, :, None]) & (
        idx[None, :, None] < idx[None, None, :]
    )
    A &= canonical
    del canonical
    for perm in list(permutations((0, 1, 2)))[1:]:
        A |= np.transpose(A, perm)

    block = A[np.ix_(clique, clique, clique)]
    ii = np.arange(kappa)
    distinct = (
        (ii[:, None, None] != ii[None, :, None])
        & (ii[:, None, None] != ii[None, None, :])
        & (ii[None, :, None] != ii[None, None, :])
    )
    block[distinct] = 1
    A[np.ix_(clique, clique, clique)] = block

    packed = np.packbits(A, axis=2)
    return CliqueInstance(N=N, kappa=kappa, half=int(half), clique=clique,
                          packed=packed)


def _recentred_block(inst: CliqueInstance, D) -> np.ndarray:
    return 2.0 * inst.block(D[0], D[1], D[2]) - 1.0


def spectral_clique_estimate(inst: CliqueInstance) -> CliqueSpectralResult:
    """Leading left singular vectors of the recentred D1 x D2 x D3 block.

    Requires the clique half to be the first one (the blocks live there).
    Each vector's sign is fixed so its coordinate sum is nonnegative.
    """
    if inst.half != FIRST:
        raise ContractViolationError("spectral estimate expects the clique in half 1")
    D = half_blocks(inst.N, FIRST)
    B = _recentred_block(inst, D)
    vectors = []
    for k in range(3):
        U, _, _ = np.linalg.svd(matricize(B, k), full_matrices=False)
        u = U[:, 0]
        if u.sum() < 0:
            u = -u
        vectors.append(u)
    return CliqueSpectralResult(vectors=tuple(vectors), supports=D)


def recover_clique(result: CliqueSpectralResult, kappa: int) -> np.ndarray:
    """Union over blocks of the ceil(kappa/3) largest |coordinate| vertices."""
    kappa = check_positive_int(kappa, "kappa")
    m = -(-kappa // 3)
    picked = []
    for u, support in zip(result.vectors, result.supports):
        take = min(m, len(u))
        order = np.argsort(-np.abs(u), kind="stable")[:take]
        picked.append(np.asarray(support)[order])
    return np.unique(np.concatenate(picked))


def detect_half(inst, N: int | None = None, kappa: int | None = None) -> int:
    """Guess which half hosts the clique.

    Scores each half by the top singular value of the mode-0 matricization
    of its recentred D-block and returns the larger (ties go to half 1).
    Accepts a CliqueInstance or a dense {0,1} adjacency tensor. kappa is
    accepted for signature parity but the score does not use it.
    """
    if not isinstance(inst, CliqueInstance):
        A = as_tensor3(inst, "adjacency")
        if N is None:
            N = A.shape[0]
        if A.shape != (N, N, N):
            raise ContractViolationError(
                f"adjacency shape {A.shape} does not match N={N}"
            )
        packed = np.packbits(A.astype(np.uint8), axis=2)
        inst = CliqueInstance(N=int(N), kappa=int(kappa or 1), half=FIRST,
                              clique=np.empty(0, dtype=np.intp), packed=packed)
    scores = []
    for half in (FIRST, SECOND):
        D = half_blocks(inst.N, half)
        B = _recentred_block(inst, D)
        scores.append(np.linalg.svd(matricize(B, 0), compute_uv=False)[0])
    return FIRST if scores[0] >= scores[1] else SECOND


def reduction_vertex_sets(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three interleaved disjoint vertex sets of the reduction.

    With p = N/3 (N divisible by 6), in 0-based terms:
      V1 = [0, p/2)      union [3p/2, 2p)
      V2 = [p/2, p)      union [2p, 5p/2)
      V3 = [p, 3p/2)     union [5p/2, 3p)
    so each V_j takes one block from the first half of the vertices and one
    from the second, and position a < p/2 within V_j lies in the first half.
    """
    if N % 6 != 0:
        raise ContractViolationError(f"N must be divisible by 6, got {N}")
    p = N // 3
    h = p // 2
    V1 = np.concatenate([np.arange(0, h), np.arange(3 * h, 4 * h)])
    V2 = np.concatenate([np.arange(h, 2 * h), np.arange(4 * h, 5 * h)])
    V3 = np.concatenate([np.arange(2 * h, 3 * h), np.arange(5 * h, 6 * h)])
    return V1, V2, V3


def xi_field(A0, params: ReductionParams, rng) -> np.ndarray:
    """Truncated shifted normal field driven by a {0,1} block A0.

    Entries with A0 = 1 draw (Z + mu) * 1{|Z| <= M}; entries with A0 = 0
    draw (Z' - mu) * 1{|Z'| <= M}, with Z, Z' independent standard normal
    tensors (drawn in that order).
    """
    A0 = as_tensor3(A0, "A0")
    if np.any((A0 != 0.0) & (A0 != 1.0)):
        raise ContractViolationError("A0 must be a {0,1} tensor")
    gen = _generator(rng)
    M, mu = params.M, params.mu
    Zp = gen.standard_normal(A0.shape)
    Zm = gen.standard_normal(A0.shape)
    xi_plus = (Zp + mu) * (np.abs(Zp) <= M)
    xi_minus = (Zm - mu) * (np.abs(Zm) <= M)
    return A0 * xi_plus + (1.0 - A0) * xi_minus


def gaussianize(inst: CliqueInstance, params: ReductionParams | None, rng) -> np.ndarray:
    """Map an instance to a p x p x p near-Gaussian tensor, p = N/3.

    Extracts the corner block A0 = A[V1, V2, V3] over the interleaved
    vertex sets and applies the xi field; every output entry has magnitude
    at most M + mu.
    """
    if params is None:
        params = default_reduction_params(inst.N)
    V1, V2, V3 = reduction_vertex_sets(inst.N)
    A0 = inst.block(V1, V2, V3)
    return xi_field(A0, params, rng)


def embed(Y_small, target_dims) -> np.ndarray:
    """Zero-pad a tensor into the (0, 0, 0) corner of a larger one."""
    Y_small = as_tensor3(Y_small, "Y_small")
    target_dims = tuple(int(d) for d in target_dims)
    if len(target_dims) != 3:
        raise ContractViolationError(f"target_dims must be a triple, got {target_dims}")
    if any(t < s for t, s in zip(target_dims, Y_small.shape)):
        raise ContractViolationError(
            f"target dims {target_dims} smaller than source {Y_small.shape}"
        )
    out = np.zeros(target_dims)
    out[: Y_small.shape[0], : Y_small.shape[1], : Y_small.shape[2]] = Y_small
    return out


def clique_block_supports(inst: CliqueInstance, params: ReductionParams | None = None
                          ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Positions of clique vertices inside each reduction set V_j.

    Returns, for j = 1, 2, 3, the sorted 0-based positions a with
    V_j[a] in the clique; for a clique planted in the first half these all
    lie in [0, p/2).  `params` is accepted for call-site symmetry with
    gaussianize but the supports do not depend on it.
    """
    sets = reduction_vertex_sets(inst.N)
    clique = set(inst.clique.tolist())
    out = []
    for Vj in sets:
        out.append(np.flatnonzero(np.isin(Vj, list(clique))))
    return tuple(out)
