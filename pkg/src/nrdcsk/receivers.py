"""Correlation receivers for NR-DCSK: plain, WPD-assisted and VMD-ICA-WPD."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ._validation import check_signal
from .ica import fit_ica, inverse_ica, separate
from .vmd import VmdParams, split_modes, vmd_decompose
from .wavelets import dejam

__all__ = [
    "DecisionRecord",
    "FrameLayout",
    "maf",
    "correlate_decide",
    "decision_statistics",
    "rx_plain",
    "rx_wpd",
    "rx_vmd_ica_wpd",
    "vmd_ica_wpd_clean",
    "PipelineTrace",
    "PlainReceiver",
    "WPDReceiver",
    "VMDICAWPDReceiver",
    "RECEIVERS",
    "make_receiver",
]


@dataclass(frozen=True)
class DecisionRecord:
    bit_index: int
    statistic: float
    decision: int


@dataclass(frozen=True)
class FrameLayout:
    """Frame geometry: ``beta`` samples per half-bit, ``p`` copies per chip."""

    beta: int = 200
    p: int = 20

    def __post_init__(self):
        if self.beta <= 0 or self.p <= 0 or self.beta % self.p:
            raise ValueError(f"invalid layout beta={self.beta}, p={self.p}")

    @property
    def frame_len(self) -> int:
        return 2 * self.beta


def maf(signal, p: int) -> np.ndarray:
    """Replace every length-``p`` block by its mean."""
    x = np.asarray(signal, dtype=np.float64)
    if p < 1 or x.size % p:
        raise ValueError(f"signal length {x.size} is not divisible by block size {p}")
    return np.repeat(x.reshape(-1, p).mean(axis=1), p)


def decision_statistics(received, layout: FrameLayout) -> np.ndarray:
    """Correlator output ``B_l`` for every frame of the stream.

    Each frame's reference and information halves are averaged over
    ``p``-sample blocks and the ``beta / p`` block means are correlated.
    """
    r = np.asarray(received, dtype=np.float64)
    if r.ndim != 1 or r.size % layout.frame_len:
        raise ValueError(
            f"stream length {r.size} is not a multiple of the frame length {layout.frame_len}"
        )
    chips = layout.beta // layout.p
    means = r.reshape(-1, 2, chips, layout.p).mean(axis=3)
    return np.einsum("lk,lk->l", means[:, 0], means[:, 1])


def _decide(stat: np.ndarray) -> np.ndarray:
    return np.where(stat >= 0, 1, -1)


def correlate_decide(frame_samples, beta: int, p: int, bit_index: int = 0) -> DecisionRecord:
    layout = FrameLayout(beta, p)
    x = np.asarray(frame_samples, dtype=np.float64)
    if x.shape != (layout.frame_len,):
        raise ValueError(f"frame must have {layout.frame_len} samples, got {x.size}")
    stat = float(decision_statistics(x, layout)[0])
    return DecisionRecord(bit_index=bit_index, statistic=stat, decision=1 if stat >= 0 else -1)


def rx_plain(received, layout: FrameLayout = FrameLayout()) -> np.ndarray:
    return _decide(decision_statistics(received, layout))


def rx_wpd(received, layout: FrameLayout = FrameLayout(), basis="db8", level=6,
           polarity="keep-large") -> np.ndarray:
    r = check_signal(received)
    return rx_plain(dejam(r, basis, level, polarity), layout)


@dataclass
class PipelineTrace:
    """Intermediate signals of one pass through the VMD-ICA-WPD chain."""

    v1: np.ndarray = field(repr=False)
    v2: np.ndarray = field(repr=False)
    cleaned: np.ndarray = field(repr=False)
    vmd_converged: bool = True
    vmd_residual: float = 0.0
    ica_converged: bool = True
    center_freqs: np.ndarray = field(default_factory=lambda: np.zeros(0))


def vmd_ica_wpd_clean(
    received,
    vmd_params: VmdParams | None = None,
    ica_tol: float = 1e-6,
    ica_max_iter: int = 200,
    basis="db8",
    level: int = 6,
    polarity: str = "keep-large",
    rng=None,
) -> PipelineTrace:
    """Run VMD, ICA, per-component WPD jamming removal and the inverse ICA."""
    r = check_signal(received)
    modes = vmd_decompose(r, vmd_params or VmdParams())
    v1, v2 = split_modes(modes)
    try:
        model = fit_ica(v1, v2, ica_tol, ica_max_iter, rng)
    except np.linalg.LinAlgError:
        # Collinear channels leave nothing to unmix; clean the recombined block directly.
        cleaned = dejam(v1 + v2, basis, level, polarity)
        return PipelineTrace(v1, v2, cleaned, modes.converged, modes.residual, False,
                             modes.center_freqs)
    i1, i2 = separate(model, v1, v2)
    w1 = dejam(i1, basis, level, polarity)
    w2 = dejam(i2, basis, level, polarity)
    cleaned = inverse_ica(model, w1, w2)
    return PipelineTrace(
        v1, v2, cleaned, modes.converged, modes.residual,
        bool(model[1].converged.all()), modes.center_freqs,
    )


def rx_vmd_ica_wpd(received, layout: FrameLayout = FrameLayout(), **kwargs) -> np.ndarray:
    return rx_plain(vmd_ica_wpd_clean(received, **kwargs).cleaned, layout)


class _CorrelationReceiver(ClassifierMixin, BaseEstimator):
    """Shared ``predict``/``decision_function`` plumbing.

    Receivers hold no learned state, so ``fit`` only validates parameters.
    ``X`` is one received block (1-D); ``predict`` returns one +/-1 decision
    per frame and ``score`` the fraction of correct bits.
    """

    def fit(self, X=None, y=None):
        FrameLayout(self.beta, self.p)
        self.classes_ = np.array([-1, 1])
        return self

    @property
    def layout(self) -> FrameLayout:
        return FrameLayout(self.beta, self.p)

    def clean(self, X) -> np.ndarray:
        return check_signal(X)

    def decision_function(self, X) -> np.ndarray:
        return decision_statistics(self.clean(X), self.layout)

    def predict(self, X) -> np.ndarray:
        return _decide(self.decision_function(X))


class PlainReceiver(_CorrelationReceiver):
    def __init__(self, beta=200, p=20):
        self.beta = beta
        self.p = p


class WPDReceiver(_CorrelationReceiver):
    def __init__(self, beta=200, p=20, basis="db8", level=6, polarity="keep-large"):
        self.beta = beta
        self.p = p
        self.basis = basis
        self.level = level
        self.polarity = polarity

    def clean(self, X):
        return dejam(X, self.basis, self.level, self.polarity)


class VMDICAWPDReceiver(_CorrelationReceiver):
    """The VMD-ICA-WPD chain followed by the plain correlator.

    After each ``clean``/``predict`` call the intermediate signals are kept in
    ``trace_`` for inspection.
    """

    def __init__(self, beta=200, p=20, n_modes=10, alpha=2000.0, tau=0.0, vmd_tol=1e-6,
                 vmd_max_iter=500, ica_tol=1e-6, ica_max_iter=200, basis="db8", level=6,
                 polarity="keep-large", random_state=None):
        self.beta = beta
        self.p = p
        self.n_modes = n_modes
        self.alpha = alpha
        self.tau = tau
        self.vmd_tol = vmd_tol
        self.vmd_max_iter = vmd_max_iter
        self.ica_tol = ica_tol
        self.ica_max_iter = ica_max_iter
        self.basis = basis
        self.level = level
        self.polarity = polarity
        self.random_state = random_state

    def vmd_params(self) -> VmdParams:
        return VmdParams(n_modes=self.n_modes, alpha=self.alpha, tau=self.tau,
                         tol=self.vmd_tol, max_iter=self.vmd_max_iter)

    def clean(self, X, rng=None):
        self.trace_ = vmd_ica_wpd_clean(
            X, self.vmd_params(), self.ica_tol, self.ica_max_iter, self.basis,
            self.level, self.polarity, self.random_state if rng is None else rng,
        )
        return self.trace_.cleaned


RECEIVERS = {
    "plain": PlainReceiver,
    "wpd": WPDReceiver,
    "vmd-ica-wpd": VMDICAWPDReceiver,
}


def make_receiver(name: str, **params):
    try:
        cls = RECEIVERS[name]
    except KeyError:
        raise ValueError(f"unknown receiver {name!r}; choose from {sorted(RECEIVERS)}") from None
    return cls(**params).fit()
