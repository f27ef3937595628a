"""Periodic wavelet packet transform and universal-threshold jamming estimation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_positive_int, check_signal

__all__ = [
    "WaveletBasis",
    "WpdCoefficients",
    "get_basis",
    "wpd_decompose",
    "wpd_reconstruct",
    "mad",
    "universal_threshold",
    "universal_threshold_value",
    "threshold_coefficients",
    "estimate_jamming",
    "dejam",
    "WPDJammingFilter",
    "POLARITIES",
]

POLARITIES = ("keep-large", "paper-literal", "off")

# Scaling (low-pass) taps, normalized so that sum(h) == sqrt(2).
_SCALING_TAPS = {
    "haar": [0.7071067811865476, 0.7071067811865476],
    "db4": [
        0.2303778133088965, 0.7148465705529157, 0.6308807679298589,
        -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
        0.0328830116668852, -0.010597401785069032,
    ],
    "db8": [
        0.05441584224310401, 0.31287159091429995, 0.6756307362972898,
        0.5853546836542067, -0.015829105256349306, -0.2840155429615469,
        0.0004724845739132828, 0.12874742662047847, -0.017369301001807547,
        -0.044088253930794755, 0.013981027917398282, 0.008746094047405777,
        -0.004870352993451574, -0.00039174037337694705, 0.0006754494064505693,
        -0.00011747678412476953,
    ],
}


@dataclass(frozen=True)
class WaveletBasis:
    name: str
    h: np.ndarray = field(repr=False)

    @property
    def g(self) -> np.ndarray:
        """Wavelet (high-pass) taps ``g[k] = (-1)**k h[L-1-k]``."""
        L = self.h.size
        return ((-1.0) ** np.arange(L)) * self.h[::-1]

    def __len__(self):
        return self.h.size


def get_basis(basis) -> WaveletBasis:
    if isinstance(basis, WaveletBasis):
        return basis
    try:
        taps = _SCALING_TAPS[basis]
    except KeyError:
        raise ValueError(
            f"unknown wavelet basis {basis!r}; choose from {sorted(_SCALING_TAPS)}"
        ) from None
    return WaveletBasis(name=basis, h=np.array(taps))


@dataclass
class WpdCoefficients:
    """Leaves of a depth-``level`` packet tree in frequency order.

    ``nodes`` has shape ``(2**level, padded_len / 2**level)``; row ``i``
    covers the band ``[i, i + 1] / 2**(level + 1)`` cycles/sample.
    """

    level: int
    nodes: np.ndarray
    original_len: int
    basis: WaveletBasis

    def values(self) -> np.ndarray:
        return self.nodes.ravel()


def _gray(n: np.ndarray) -> np.ndarray:
    return n ^ (n >> 1)


def _freq_to_natural(level: int) -> np.ndarray:
    # Natural (Paley) index of the node at each frequency position.
    return _gray(np.arange(2**level))


def _support(M: int, L: int) -> np.ndarray:
    # Input positions feeding each output; the taps are centred on 2n + 1.
    return (2 * np.arange(M // 2)[:, None] + np.arange(L)[None, :] - (L // 2 - 1)) % M


def _analysis(x: np.ndarray, h: np.ndarray, g: np.ndarray):
    # x: (nodes, M) -> approximation/detail of shape (nodes, M/2), periodic.
    M = x.shape[1]
    idx = _support(M, h.size)
    seg = x[:, idx]
    return seg @ h, seg @ g


def _synthesis(a: np.ndarray, d: np.ndarray, h: np.ndarray, g: np.ndarray):
    nodes, half = a.shape
    M = 2 * half
    out = np.zeros((nodes, M))
    pos = _support(M, h.size)
    contrib = a[:, :, None] * h[None, None, :] + d[:, :, None] * g[None, None, :]
    flat = (np.arange(nodes)[:, None] * M + pos.ravel()[None, :]).ravel()
    np.add.at(out.ravel(), flat, contrib.reshape(nodes, -1).ravel())
    return out


def wpd_decompose(signal, basis="db4", level: int = 4) -> WpdCoefficients:
    """Full packet tree to depth ``level`` with periodic boundary handling.

    Inputs whose length is not a multiple of ``2**level`` are zero-padded at
    the end, which keeps the transform orthonormal.
    """
    basis = get_basis(basis)
    level = check_positive_int(level, "level")
    x = check_signal(signal, min_len=1)
    if x.size < len(basis):
        raise ValueError(
            f"signal length {x.size} is shorter than the {basis.name} filter ({len(basis)})"
        )
    block = 2**level
    padded = -(-x.size // block) * block
    cur = np.zeros((1, padded))
    cur[0, : x.size] = x
    h, g = basis.h, basis.g
    for _ in range(level):
        a, d = _analysis(cur, h, g)
        cur = np.stack([a, d], axis=1).reshape(-1, a.shape[1])
    nodes = cur[_freq_to_natural(level)]
    return WpdCoefficients(level=level, nodes=nodes, original_len=x.size, basis=basis)


def wpd_reconstruct(coeffs: WpdCoefficients) -> np.ndarray:
    h, g = coeffs.basis.h, coeffs.basis.g
    cur = np.empty_like(coeffs.nodes)
    cur[_freq_to_natural(coeffs.level)] = coeffs.nodes
    for _ in range(coeffs.level):
        cur = _synthesis(cur[0::2], cur[1::2], h, g)
    return cur[0, : coeffs.original_len]


def mad(values) -> float:
    """Median absolute deviation about the median."""
    v = np.asarray(values, dtype=np.float64).ravel()
    return float(np.median(np.abs(v - np.median(v))))


def universal_threshold_value(values, n: int) -> float:
    """``(MAD / 0.675) * sqrt(2 ln(n ln n) / ln 2)`` over the pooled ``values``."""
    if n < 3:
        raise ValueError(f"universal threshold needs n >= 3, got {n}")
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size < 2:
        raise ValueError("universal threshold needs at least 2 coefficients")
    delta = mad(v) / 0.675
    return delta * np.sqrt(2.0 * np.log(n * np.log(n)) / np.log(2.0))


def universal_threshold(coeffs: WpdCoefficients) -> float:
    return universal_threshold_value(coeffs.values(), coeffs.original_len)


def threshold_coefficients(nodes: np.ndarray, gamma: float, polarity: str) -> np.ndarray:
    """Hard-threshold ``nodes`` and return the coefficients kept as jamming."""
    if polarity == "keep-large":
        return np.where(np.abs(nodes) > gamma, nodes, 0.0)
    if polarity == "paper-literal":
        return np.where(np.abs(nodes) > gamma, 0.0, nodes)
    if polarity == "off":
        return np.zeros_like(nodes)
    raise ValueError(f"unknown polarity {polarity!r}; choose from {POLARITIES}")


def estimate_jamming(signal, basis="db4", level: int = 4, polarity: str = "keep-large"):
    """Reconstruct the jamming estimate from thresholded packet coefficients.

    ``keep-large`` keeps coefficients above the universal threshold (the
    narrowband, high-energy part).  ``paper-literal`` keeps those at or below
    it.  ``off`` returns zeros.
    """
    if polarity not in POLARITIES:
        raise ValueError(f"unknown polarity {polarity!r}; choose from {POLARITIES}")
    coeffs = wpd_decompose(signal, basis, level)
    if polarity == "off":
        return np.zeros(coeffs.original_len)
    gamma = universal_threshold(coeffs)
    kept = threshold_coefficients(coeffs.nodes, gamma, polarity)
    return wpd_reconstruct(
        WpdCoefficients(coeffs.level, kept, coeffs.original_len, coeffs.basis)
    )


def dejam(signal, basis="db4", level: int = 4, polarity: str = "keep-large"):
    """Subtract the WPD jamming estimate from ``signal``."""
    x = check_signal(signal)
    return x - estimate_jamming(x, basis, level, polarity)


class WPDJammingFilter(TransformerMixin, BaseEstimator):
    """Stateless transformer removing the WPD jamming estimate from 1-D signals.

    ``transform`` accepts a single signal or a 2-D array with one signal per
    row; each row is processed independently.
    """

    def __init__(self, basis="db4", level=4, polarity="keep-large"):
        self.basis = basis
        self.level = level
        self.polarity = polarity

    def fit(self, X, y=None):
        get_basis(self.basis)
        check_positive_int(self.level, "level")
        if self.polarity not in POLARITIES:
            raise ValueError(f"unknown polarity {self.polarity!r}")
        return self

    def estimate(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            return estimate_jamming(X, self.basis, self.level, self.polarity)
        return np.stack(
            [estimate_jamming(row, self.basis, self.level, self.polarity) for row in X]
        )

    def transform(self, X):
        X = np.asarray(X, dtype=np.float64)
        return X - self.estimate(X)
