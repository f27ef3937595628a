"""Logistic-map chaos generation and NR-DCSK framing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ChaosParams",
    "ChaoticFrame",
    "logistic_next",
    "generate_chaos",
    "modulate",
    "frames_to_stream",
]


def logistic_next(x: float) -> float:
    """One step of the logistic map ``x -> 1 - 2 x**2`` on [-1, 1]."""
    if not abs(x) <= 1.0:
        raise ValueError(f"logistic map is defined on [-1, 1], got {x!r}")
    return 1.0 - 2.0 * x * x


@dataclass(frozen=True)
class ChaosParams:
    """Spreading factor ``beta``, replication factor ``p`` and seed state ``x0``.

    ``chain`` controls whether the chaotic state carries over from one bit to
    the next (default) or restarts from ``x0`` for every bit.
    """

    beta: int = 200
    p: int = 20
    x0: float = 0.3
    chain: bool = True

    def __post_init__(self):
        if int(self.beta) != self.beta or self.beta <= 0:
            raise ValueError(f"beta must be a positive integer, got {self.beta!r}")
        if int(self.p) != self.p or self.p <= 0:
            raise ValueError(f"p must be a positive integer, got {self.p!r}")
        if self.beta % self.p:
            raise ValueError(f"beta ({self.beta}) must be a multiple of p ({self.p})")
        if not abs(self.x0) < 1.0:
            raise ValueError(f"x0 must lie in (-1, 1), got {self.x0!r}")
        if self.x0 == 0.5:
            raise ValueError("x0 = 0.5 is a fixed point of the logistic map")

    @property
    def chips(self) -> int:
        """Number of distinct chaotic values per half-bit."""
        return self.beta // self.p


@dataclass(frozen=True)
class ChaoticFrame:
    """Transmit block of one bit: ``2 * beta`` samples, reference half first."""

    bit: int
    samples: np.ndarray = field(repr=False)
    raw_chaos: np.ndarray = field(repr=False)


def generate_chaos(params: ChaosParams, n: int, x0: float | None = None) -> np.ndarray:
    """Return ``n`` successive logistic-map iterates, the first being ``f(x0)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = params.x0 if x0 is None else x0
    out = np.empty(n)
    for i in range(n):
        x = logistic_next(x)
        out[i] = x
    return out


def modulate(bits, params: ChaosParams, x0: float | None = None) -> list[ChaoticFrame]:
    """Build one NR-DCSK frame per bit.

    Each of the ``beta / p`` chaotic values is held for ``p`` samples to form
    the reference half; the information-bearing half is the reference
    multiplied by the bit.
    """
    bits = np.asarray(bits)
    if bits.ndim != 1 or not np.all(np.isin(bits, (-1, 1))):
        raise ValueError("bits must be a 1-D sequence of -1/+1 values")
    chips = params.chips
    start = params.x0 if x0 is None else x0
    if params.chain:
        chaos = generate_chaos(params, chips * len(bits), x0=start).reshape(-1, chips)
    else:
        one = generate_chaos(params, chips, x0=start)
        chaos = np.tile(one, (len(bits), 1))

    frames = []
    for bit, raw in zip(bits, chaos):
        ref = np.repeat(raw, params.p)
        samples = np.concatenate([ref, bit * ref])
        frames.append(ChaoticFrame(bit=int(bit), samples=samples, raw_chaos=raw.copy()))
    return frames


def frames_to_stream(frames) -> np.ndarray:
    """Concatenate frame samples into the transmit stream."""
    if not frames:
        return np.zeros(0)
    return np.concatenate([f.samples for f in frames])
