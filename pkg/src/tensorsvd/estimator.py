"""scikit-learn style facade over the HOOI estimator."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .hooi import hooi, project_estimate
from .tensor import tucker_compose
from .validation import ContractViolationError, as_tensor3

__all__ = ["TuckerSVD"]


class TuckerSVD(TransformerMixin, BaseEstimator):
    """Best rank-(r1, r2, r3) Tucker approximation fitted by HOOI.

    Unlike most scikit-learn transformers this estimator consumes a single
    order-3 tensor, not a samples-by-features matrix. transform() maps a
    tensor to its core coordinates under the fitted bases; inverse_transform()
    lifts core coordinates back to a full tensor.

    Parameters
    ----------
    ranks : tuple of three ints
        Target Tucker ranks.
    eps : float or None
        Stopping tolerance on the sweep objective increment;
        None means 1e-6 * ||Y||_F.
    max_iter : int
        Maximum number of sweeps.
    init : "spectral" or sequence of three arrays
        Spectral initialization or explicit starting bases.

    Attributes
    ----------
    bases_ : tuple of three orthonormal arrays
    core_ : ndarray of shape ranks
    reconstruction_ : ndarray, the fitted low-rank approximation of the input
    objective_trace_ : ndarray of per-sweep objective norms
    n_iter_ : int
    stop_reason_ : str
    """

    def __init__(self, ranks=(1, 1, 1), eps=None, max_iter=50, init="spectral"):
        self.ranks = ranks
        self.eps = eps
        self.max_iter = max_iter
        self.init = init

    def fit(self, X, y=None):
        result = hooi(X, self.ranks, eps=self.eps, max_iter=self.max_iter,
                      init=self.init)
        self.bases_ = result.bases
        self.core_ = result.core
        self.reconstruction_ = result.reconstruction
        self.objective_trace_ = result.objective_trace
        self.n_iter_ = result.iters_run
        self.stop_reason_ = result.stop_reason
        return self

    def _check_fitted(self):
        if not hasattr(self, "bases_"):
            raise ContractViolationError("TuckerSVD instance is not fitted yet")

    def transform(self, X):
        """Core coordinates of X under the fitted bases."""
        self._check_fitted()
        core, _ = project_estimate(X, *self.bases_)
        return core

    def inverse_transform(self, core):
        """Lift core coordinates back to the ambient tensor space."""
        self._check_fitted()
        core = as_tensor3(core, "core")
        expected = tuple(U.shape[1] for U in self.bases_)
        if core.shape != expected:
            raise ContractViolationError(
                f"core has shape {core.shape}, expected {expected}"
            )
        return tucker_compose(core, *self.bases_)

    def score(self, X, y=None):
        """Negative relative squared reconstruction error of X."""
        self._check_fitted()
        X = as_tensor3(X, "X")
        _, Xhat = project_estimate(X, *self.bases_)
        denom = float(np.linalg.norm(X)) ** 2
        if denom == 0.0:
            return 0.0
        return -float(np.linalg.norm(X - Xhat)) ** 2 / denom
