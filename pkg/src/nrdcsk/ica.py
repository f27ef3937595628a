"""Two-channel FastICA (deflation, cubic contrast) and its inverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._validation import check_same_length, check_signal

__all__ = [
    "WhiteningModel",
    "UnmixingModel",
    "fit_whitening",
    "fit_ica",
    "separate",
    "inverse_ica",
    "FastICA2",
]

MAX_CONDITION = 1e12


@dataclass
class WhiteningModel:
    mean: np.ndarray
    whitener: np.ndarray
    dewhitener: np.ndarray


@dataclass
class UnmixingModel:
    w_rows: np.ndarray
    w_inv: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray


def _stack(v1, v2) -> np.ndarray:
    a = check_signal(v1, name="v1")
    b = check_signal(v2, name="v2")
    check_same_length(a, b, ("v1", "v2"))
    return np.vstack([a, b])


def fit_whitening(R: np.ndarray) -> WhiteningModel:
    """Centre ``R`` (channels x samples) and derive symmetric ``C**(-1/2)``."""
    mean = R.mean(axis=1)
    R1 = R - mean[:, None]
    C = R1 @ R1.T / R1.shape[1]
    evals, evecs = np.linalg.eigh(C)
    if evals[0] <= 0 or evals[-1] / evals[0] > MAX_CONDITION:
        raise np.linalg.LinAlgError(
            f"degenerate covariance (eigenvalues {evals}); inputs are collinear"
        )
    whitener = evecs @ np.diag(evals**-0.5) @ evecs.T
    dewhitener = evecs @ np.diag(evals**0.5) @ evecs.T
    return WhiteningModel(mean=mean, whitener=whitener, dewhitener=dewhitener)


def _deflation(Z: np.ndarray, tol: float, max_iter: int, rng) -> UnmixingModel:
    n = Z.shape[0]
    W = np.zeros((n, n))
    iterations = np.zeros(n, dtype=int)
    converged = np.zeros(n, dtype=bool)
    for p in range(n):
        w = rng.standard_normal(n)
        w /= np.linalg.norm(w)
        for it in range(1, max_iter + 1):
            y = w @ Z
            # g(y) = y**3, g'(y) = 3 y**2
            w_new = (Z * y**3).mean(axis=1) - 3.0 * np.mean(y**2) * w
            w_new -= W[:p].T @ (W[:p] @ w_new)
            w_new /= np.linalg.norm(w_new)
            done = abs(w_new @ w) > 1.0 - tol
            w = w_new
            if done:
                converged[p] = True
                break
        iterations[p] = it
        W[p] = w
    return UnmixingModel(
        w_rows=W, w_inv=np.linalg.inv(W), iterations=iterations, converged=converged
    )


def fit_ica(v1, v2, tol: float = 1e-6, max_iter: int = 200, rng=None):
    """Fit whitening and unmixing models to the pair ``(v1, v2)``.

    Rows of the unmixing matrix are found one at a time with the cubic
    fixed-point iteration and Gram-Schmidt decorrelated against the rows
    already found.  A row that does not converge keeps its last iterate and
    is flagged in ``UnmixingModel.converged``.
    """
    R = _stack(v1, v2)
    if R.shape[1] < 2:
        raise ValueError("need at least 2 samples per channel")
    white = fit_whitening(R)
    Z = white.whitener @ (R - white.mean[:, None])
    unmix = _deflation(Z, tol, max_iter, np.random.default_rng(rng))
    return white, unmix


def separate(model, v1, v2) -> tuple[np.ndarray, np.ndarray]:
    """Centre, whiten and unmix a channel pair."""
    white, unmix = model
    R = _stack(v1, v2)
    S = unmix.w_rows @ (white.whitener @ (R - white.mean[:, None]))
    return S[0], S[1]


def inverse_ica(model, w1, w2) -> np.ndarray:
    """Map (possibly modified) components back to the input scale and sum channels."""
    white, unmix = model
    S = _stack(w1, w2)
    R = white.dewhitener @ (unmix.w_inv @ S) + white.mean[:, None]
    return R.sum(axis=0)


class FastICA2(TransformerMixin, BaseEstimator):
    """Two-channel FastICA with an ``inverse_transform`` that sums the channels.

    ``X`` is laid out as ``(2, n_samples)``, i.e. one signal per row, which is
    the natural shape for a pair of time series.
    """

    def __init__(self, tol=1e-6, max_iter=200, random_state=None):
        self.tol = tol
        self.max_iter = max_iter
        self.random_state = random_state

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] != 2:
            raise ValueError(f"expected X with 2 rows, got shape {X.shape}")
        self.whitening_, self.unmixing_ = fit_ica(
            X[0], X[1], self.tol, self.max_iter, self.random_state
        )
        self.components_ = self.unmixing_.w_rows @ self.whitening_.whitener
        return self

    def _check(self):
        if not hasattr(self, "unmixing_"):
            raise NotFittedError("FastICA2 instance is not fitted yet")

    def transform(self, X):
        self._check()
        X = np.asarray(X, dtype=np.float64)
        return np.stack(separate((self.whitening_, self.unmixing_), X[0], X[1]))

    def inverse_transform(self, S):
        """Return the single recombined signal ``II``."""
        self._check()
        S = np.asarray(S, dtype=np.float64)
        return inverse_ica((self.whitening_, self.unmixing_), S[0], S[1])
