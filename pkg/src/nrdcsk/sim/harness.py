"""Seeded Monte-Carlo BER sweeps over (JSR, Eb/N0, receiver) cells.

Randomness is organised around trials.  Trial ``t`` owns a counter-based
Philox stream keyed by ``(seed, t)``; it supplies the bits, the chaos seed,
the fading gains, the jammer phase, a unit-variance noise vector and the
ICA initialisation.  Every cell reuses these draws (only the noise and
jamming powers change), and every receiver in a cell decodes the very same
received array, so receiver comparisons are paired and trial order cannot
change the result.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np

from ..channel import (
    ChannelRealization,
    apply_channel,
    draw_fading,
    jamming_power,
    linear_sweep,
    noise_variance,
)
from ..chaos import ChaosParams, frames_to_stream, modulate
from ..receivers import make_receiver
from .config import SimConfig

__all__ = [
    "BerPoint",
    "TrialDraw",
    "wilson_halfwidth",
    "trial_rng",
    "draw_trial",
    "received_block",
    "run_sweep",
]

Z95 = 1.959963984540054


def wilson_halfwidth(errors: int, bits: int, z: float = Z95) -> float:
    """Half-width of the Wilson score interval for ``errors / bits``."""
    if bits <= 0:
        return 0.0
    p = errors / bits
    denom = 1.0 + z * z / bits
    return z / denom * np.sqrt(p * (1.0 - p) / bits + z * z / (4.0 * bits * bits))


@dataclass(frozen=True)
class BerPoint:
    jsr_db: float
    ebn0_db: float
    receiver: str
    bits: int
    errors: int

    def __post_init__(self):
        if not 0 <= self.errors <= self.bits:
            raise ValueError(f"errors ({self.errors}) must lie in [0, bits={self.bits}]")

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else 0.0

    @property
    def ci95(self) -> float:
        return wilson_halfwidth(self.errors, self.bits)

    def sort_key(self):
        return (self.receiver, self.ebn0_db, self.jsr_db)


@dataclass
class TrialDraw:
    """All random quantities of one trial, shared by every cell."""

    trial: int
    bits: np.ndarray
    tx: np.ndarray = field(repr=False)
    signal_power: float
    h_sd: float
    h_jd: float
    theta: float
    unit_noise: np.ndarray = field(repr=False)
    ica_seed: int


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def draw_trial(cfg: SimConfig, trial: int) -> TrialDraw:
    rng = trial_rng(cfg.seed, trial)
    bits = rng.choice(np.array([-1, 1]), size=cfg.bits_per_block)
    # Stay clear of the +-1 boundary; the map's fixed points have measure zero.
    x0 = rng.uniform(-0.99, 0.99)
    chaos = ChaosParams(beta=cfg.beta, p=cfg.p, x0=x0, chain=cfg.chain_chaos)
    tx = frames_to_stream(modulate(bits, chaos))
    if cfg.fading == "nakagami":
        h_sd = draw_fading(cfg.m_sd, cfg.omega, rng)
        h_jd = draw_fading(cfg.m_jd, cfg.omega, rng)
    else:
        h_sd = h_jd = 1.0
    theta = rng.uniform(0.0, 2.0 * np.pi) if cfg.theta == "random" else float(cfg.theta)
    unit_noise = rng.standard_normal(tx.size)
    ica_seed = int(rng.integers(2**32))
    return TrialDraw(trial, bits, tx, float(np.mean(tx**2)), h_sd, h_jd, theta,
                     unit_noise, ica_seed)


def received_block(cfg: SimConfig, draw: TrialDraw, jsr_db: float, ebn0_db: float):
    """Received stream of one trial at the given operating point."""
    n0 = noise_variance(ebn0_db, cfg.beta, draw.signal_power) if cfg.noise else 0.0
    p_j = jamming_power(jsr_db, draw.signal_power) if cfg.jammer else 0.0
    jam = linear_sweep(cfg.f_start, cfg.f_stop, cfg.sweep_len, cfg.beta, p_j=p_j,
                       theta_sw=draw.theta)
    chan = ChannelRealization(h_sd=draw.h_sd, h_jd=draw.h_jd, n0=0.0,
                              m_sd=cfg.m_sd, m_jd=cfg.m_jd, omega=cfg.omega)
    r = apply_channel(draw.tx, chan, jam, None, beta=cfg.beta)
    return r + np.sqrt(n0) * draw.unit_noise


def _stream_hash(x: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(x).tobytes()).hexdigest()[:16]


def _run_trials(cfg: SimConfig, trials) -> tuple[dict, list]:
    receivers = {name: make_receiver(name, **cfg.receiver_params(name))
                 for name in cfg.receivers}
    errors = {(j, e, n): 0 for j in cfg.jsr_db for e in cfg.ebn0_db for n in cfg.receivers}
    meta_out = []
    for t in trials:
        draw = draw_trial(cfg, t)
        for ebn0 in cfg.ebn0_db:
            for jsr in cfg.jsr_db:
                r = received_block(cfg, draw, jsr, ebn0)
                meta = {"trial": t, "jsr_db": jsr, "ebn0_db": ebn0, "stream": {}, "errors": {}}
                for name, rx in receivers.items():
                    if "random_state" in rx.get_params():
                        rx.set_params(random_state=draw.ica_seed)
                    meta["stream"][name] = _stream_hash(r)
                    decisions = rx.predict(r)
                    n_err = int(np.sum(decisions != draw.bits))
                    errors[(jsr, ebn0, name)] += n_err
                    meta["errors"][name] = n_err
                    trace = getattr(rx, "trace_", None)
                    if trace is not None:
                        meta.update(vmd_converged=bool(trace.vmd_converged),
                                    vmd_residual=float(trace.vmd_residual),
                                    ica_converged=bool(trace.ica_converged))
                meta_out.append(meta)
    return errors, meta_out


def run_sweep(cfg: SimConfig, metadata: list | None = None, progress=None,
              n_jobs: int = 1) -> list[BerPoint]:
    """Count bit errors for every (jsr, ebn0, receiver) cell.

    Parameters
    ----------
    cfg : SimConfig
    metadata : list, optional
        If given, one dict per (trial, cell) is appended, in trial order,
        with the hash of the stream each receiver decoded, each receiver's
        error count and the convergence flags of the VMD-ICA-WPD chain.
    progress : callable, optional
        Called as ``progress(done_trials, n_trials)``.
    n_jobs : int
        Worker processes.  Trials are independent, so the result does not
        depend on this value.

    Returns
    -------
    list of BerPoint, sorted by (receiver, ebn0_db, jsr_db).
    """
    chunk = max(1, min(50, cfg.n_trials // max(1, 4 * n_jobs)))
    chunks = [range(a, min(a + chunk, cfg.n_trials)) for a in range(0, cfg.n_trials, chunk)]
    total = {(j, e, n): 0 for j in cfg.jsr_db for e in cfg.ebn0_db for n in cfg.receivers}
    all_meta = []
    done = 0

    def collect(result, n_done):
        errs, meta = result
        for key, c in errs.items():
            total[key] += c
        all_meta.extend(meta)
        if progress is not None:
            progress(n_done, cfg.n_trials)

    if n_jobs <= 1:
        for trials in chunks:
            done += len(trials)
            collect(_run_trials(cfg, trials), done)
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            futures = {pool.submit(_run_trials, cfg, trials): len(trials) for trials in chunks}
            for fut in as_completed(futures):
                done += futures[fut]
                collect(fut.result(), done)

    if metadata is not None:
        metadata.extend(sorted(all_meta, key=lambda m: m["trial"]))
    bits = cfg.n_trials * cfg.bits_per_block
    points = [BerPoint(float(j), float(e), n, bits, c) for (j, e, n), c in total.items()]
    return sorted(points, key=BerPoint.sort_key)
