"""Short-time power spectra and the tx/rx/cleaned block snapshots."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import get_window

from .._validation import check_signal
from ..receivers import VMDICAWPDReceiver
from .config import SimConfig
from .harness import draw_trial, received_block

__all__ = ["SpectrogramMatrix", "spectrogram", "stage_signal", "ridge_energy_db", "STAGES"]

FLOOR_DB = -120.0
STAGES = ("tx", "rx", "cleaned")


@dataclass
class SpectrogramMatrix:
    """Power in dB, one row per frame and one column per rfft bin."""

    window: int
    hop: int
    db: np.ndarray = field(repr=False)

    @property
    def shape(self):
        return self.db.shape

    @property
    def freqs(self) -> np.ndarray:
        """Bin centres in cycles/sample."""
        return np.fft.rfftfreq(self.window)

    def frame_centres(self) -> np.ndarray:
        """Sample index at the centre of each frame."""
        return np.arange(self.db.shape[0]) * self.hop + self.window / 2.0


def spectrogram(signal, window: int = 256, hop: int = 64) -> SpectrogramMatrix:
    """Hann-windowed short-time power spectrum in dB, floored at -120 dB.

    Frames start every ``hop`` samples and only whole frames are kept, so
    there are ``(N - window) // hop + 1`` rows.  Power is ``|X|**2 /
    sum(w**2)``, which makes a unit-variance white signal sit near 0 dB.
    """
    x = check_signal(signal)
    if window < 1 or hop < 1:
        raise ValueError(f"window and hop must be >= 1, got {window}, {hop}")
    if window > x.size:
        raise ValueError(f"window {window} exceeds signal length {x.size}")
    w = get_window("hann", window)
    frames = sliding_window_view(x, window)[::hop] * w
    power = np.abs(np.fft.rfft(frames, axis=1)) ** 2 / np.sum(w**2)
    db = 10.0 * np.log10(np.maximum(power, 10.0 ** (FLOOR_DB / 10.0)))
    return SpectrogramMatrix(window=window, hop=hop, db=db)


def stage_signal(cfg: SimConfig, stage: str, trial: int | None = None,
                 ebn0_db: float | None = None, jsr_db: float | None = None) -> np.ndarray:
    """Transmitted, received or VMD-ICA-WPD-cleaned block of one trial."""
    if stage not in STAGES:
        raise ValueError(f"stage must be one of {STAGES}, got {stage!r}")
    draw = draw_trial(cfg, cfg.spec_trial if trial is None else trial)
    if stage == "tx":
        return draw.tx
    r = received_block(cfg, draw, cfg.spec_jsr_db if jsr_db is None else jsr_db,
                       cfg.spec_ebn0_db if ebn0_db is None else ebn0_db)
    if stage == "rx":
        return r
    rx = VMDICAWPDReceiver(**cfg.receiver_params("vmd-ica-wpd"), random_state=draw.ica_seed)
    return rx.fit().clean(r)


def ridge_energy_db(spec: SpectrogramMatrix, ridge_freq, halfwidth: int = 2) -> float:
    """Total power (dB) within ``halfwidth`` bins of a per-frame ridge frequency.

    ``ridge_freq`` holds one frequency (cycles/sample) per spectrogram row,
    e.g. the jammer's instantaneous frequency at each frame centre.
    """
    f = np.asarray(ridge_freq, dtype=np.float64)
    if f.shape != (spec.shape[0],):
        raise ValueError(f"need one ridge frequency per row ({spec.shape[0]}), got {f.shape}")
    centre = np.rint(f * spec.window).astype(int)
    cols = centre[:, None] + np.arange(-halfwidth, halfwidth + 1)[None, :]
    valid = (cols >= 0) & (cols < spec.shape[1])
    rows = np.broadcast_to(np.arange(spec.shape[0])[:, None], cols.shape)
    lin = 10.0 ** (spec.db[rows[valid], cols[valid]] / 10.0)
    return float(10.0 * np.log10(max(lin.sum(), 1e-300)))
