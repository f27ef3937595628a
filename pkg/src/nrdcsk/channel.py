"""Block Nakagami-m fading, AWGN and the discrete linear sweep jammer.

Frequencies are expressed in the normalized units of the discrete jammer
model: ``f_start_norm = f_start * T_b`` and ``delta_f_norm = delta_f * T_b**2``
where ``T_b = 2 * beta`` samples.  The instantaneous jammer frequency at
sample ``k`` is therefore ``f_start_norm / (2 beta) + k * delta_f_norm /
(4 beta**2)`` cycles per sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaos import frames_to_stream

__all__ = [
    "SweepJammerParams",
    "ChannelRealization",
    "sweep_sample",
    "sweep_waveform",
    "linear_sweep",
    "draw_fading",
    "apply_channel",
    "noise_variance",
    "jamming_power",
]


@dataclass(frozen=True)
class SweepJammerParams:
    p_j: float = 0.0
    f_start_norm: float = 0.0
    delta_f_norm: float = 0.0
    theta_sw: float = 0.0
    sweep_len: int = 8000

    def __post_init__(self):
        if self.p_j < 0:
            raise ValueError(f"jamming power must be >= 0, got {self.p_j}")
        if int(self.sweep_len) != self.sweep_len or self.sweep_len <= 0:
            raise ValueError(f"sweep_len must be a positive integer, got {self.sweep_len}")

    def instantaneous_frequency(self, k, beta: int) -> np.ndarray:
        """Jammer frequency in cycles/sample at sample indices ``k``."""
        kk = np.mod(np.asarray(k), self.sweep_len)
        return self.f_start_norm / (2.0 * beta) + kk * self.delta_f_norm / (4.0 * beta**2)


def linear_sweep(
    f_start: float, f_stop: float, sweep_len: int, beta: int, **kwargs
) -> SweepJammerParams:
    """Jammer sweeping ``f_start -> f_stop`` (cycles/sample) over ``sweep_len`` samples."""
    return SweepJammerParams(
        f_start_norm=2.0 * beta * f_start,
        delta_f_norm=4.0 * beta**2 * (f_stop - f_start) / sweep_len,
        sweep_len=sweep_len,
        **kwargs,
    )


def sweep_sample(k: int, params: SweepJammerParams, beta: int) -> float:
    """Jammer value at sample ``k``; the sweep restarts every ``sweep_len`` samples."""
    if k < 0:
        raise ValueError(f"sample index must be >= 0, got {k}")
    return float(sweep_waveform(np.array([k]), params, beta)[0])


def sweep_waveform(k, params: SweepJammerParams, beta: int) -> np.ndarray:
    kk = np.mod(np.asarray(k, dtype=np.float64), params.sweep_len)
    phase = (
        np.pi * kk * params.f_start_norm / beta
        + np.pi * kk**2 * params.delta_f_norm / (4.0 * beta**2)
        + params.theta_sw
    )
    return np.sqrt(2.0 * params.p_j) * np.sin(phase)


@dataclass(frozen=True)
class ChannelRealization:
    """Fading gains and noise level of one fading block."""

    h_sd: float = 1.0
    h_jd: float = 1.0
    n0: float = 0.0
    m_sd: float = 1.0
    m_jd: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if self.h_sd < 0 or self.h_jd < 0:
            raise ValueError("fading gains must be non-negative")
        if self.n0 < 0:
            raise ValueError(f"noise variance must be >= 0, got {self.n0}")
        if self.m_sd < 0.5 or self.m_jd < 0.5:
            raise ValueError("Nakagami shape parameter must be >= 0.5")
        if self.omega <= 0:
            raise ValueError("Nakagami spread must be > 0")

    @classmethod
    def draw(cls, rng, n0: float, m_sd=1.0, m_jd=1.0, omega=1.0) -> "ChannelRealization":
        return cls(
            h_sd=draw_fading(m_sd, omega, rng),
            h_jd=draw_fading(m_jd, omega, rng),
            n0=n0,
            m_sd=m_sd,
            m_jd=m_jd,
            omega=omega,
        )


def draw_fading(m: float, omega: float, rng, size=None):
    """Nakagami-m amplitude: ``sqrt(G)`` with ``G ~ Gamma(m, omega / m)``."""
    if not m >= 0.5:
        raise ValueError(f"Nakagami m must be >= 0.5, got {m}")
    if not omega > 0:
        raise ValueError(f"Nakagami omega must be > 0, got {omega}")
    g = rng.gamma(shape=m, scale=omega / m, size=size)
    return np.sqrt(g) if size is not None else float(np.sqrt(g))


def apply_channel(
    frames,
    realization: ChannelRealization,
    jam: SweepJammerParams,
    rng,
    beta: int | None = None,
    start: int = 0,
) -> np.ndarray:
    """Received stream ``h_sd * s + h_jd * j + n`` for a sequence of frames.

    ``frames`` may also be a precomputed transmit stream.  ``start`` offsets
    the jammer sample index, for blocks that do not begin at time zero.
    """
    if isinstance(frames, np.ndarray):
        s = np.asarray(frames, dtype=np.float64)
    else:
        frames = list(frames)
        s = frames_to_stream(frames)
        if beta is None and frames:
            beta = len(frames[0].samples) // 2
    if beta is None:
        raise ValueError("beta is required when passing a raw transmit stream")
    k = np.arange(start, start + s.size)
    j = sweep_waveform(k, jam, beta)
    r = realization.h_sd * s + realization.h_jd * j
    if realization.n0 > 0:
        r = r + np.sqrt(realization.n0) * rng.standard_normal(s.size)
    return r


def noise_variance(ebn0_db: float, beta: int, signal_power: float) -> float:
    """Per-sample noise variance for a bit energy of ``2 beta * signal_power``."""
    eb = 2.0 * beta * signal_power
    return eb / (2.0 * 10.0 ** (ebn0_db / 10.0))


def jamming_power(jsr_db: float, signal_power: float) -> float:
    return signal_power * 10.0 ** (jsr_db / 10.0)
