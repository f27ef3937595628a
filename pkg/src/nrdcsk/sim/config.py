"""Simulation configuration: INI-style file <-> validated ``SimConfig``.

Example file::

    [sim]
    n_trials = 200
    ebn0_db = 15, 20
    jsr_db = -20, -15, 0, 5, 10, 15
    receivers = plain, wpd, vmd-ica-wpd
    seed = 7

    [jammer]
    f_stop = 0.05

Every section and key is optional; unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass

from ..receivers import RECEIVERS
from ..vmd import VmdParams
from ..wavelets import POLARITIES, _SCALING_TAPS

__all__ = ["SimConfig", "ConfigError", "load_config", "parse_config", "config_to_text"]


class ConfigError(ValueError):
    """Invalid configuration; ``problems`` lists one message per offending field."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))


@dataclass(frozen=True)
class SimConfig:
    """Everything a BER sweep or spectrogram run depends on.

    Jammer frequencies are in cycles/sample; the sweep runs from ``f_start``
    to ``f_stop`` and repeats ``sweeps_per_block`` times per fading block.
    ``fading = "none"`` fixes both gains at 1, ``noise = false`` removes the
    AWGN and ``jammer = false`` the jammer, which together give a noiseless
    reference channel.
    """

    # [sim]
    beta: int = 200
    p: int = 20
    bits_per_block: int = 100
    n_trials: int = 1000
    ebn0_db: tuple = (15.0, 20.0)
    jsr_db: tuple = (-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    receivers: tuple = ("plain", "wpd", "vmd-ica-wpd")
    seed: int = 0
    chain_chaos: bool = True
    # [channel]
    fading: str = "nakagami"
    m_sd: float = 1.0
    m_jd: float = 1.0
    omega: float = 1.0
    noise: bool = True
    # [jammer]
    jammer: bool = True
    f_start: float = 0.0
    f_stop: float = 0.05
    sweeps_per_block: int = 5
    theta: str = "random"
    # [vmd]
    n_modes: int = 10
    alpha: float = 2000.0
    tau: float = 0.0
    vmd_tol: float = 1e-6
    vmd_max_iter: int = 500
    vmd_init: str = "uniform"
    # [ica]
    ica_tol: float = 1e-6
    ica_max_iter: int = 200
    # [wpd]
    basis: str = "db8"
    level: int = 6
    polarity: str = "keep-large"
    # [spectrogram]
    window: int = 256
    hop: int = 64
    spec_ebn0_db: float = 15.0
    spec_jsr_db: float = 5.0
    spec_trial: int = 0

    def __post_init__(self):
        problems = validate(self)
        if problems:
            raise ConfigError(problems)

    @property
    def block_samples(self) -> int:
        return 2 * self.beta * self.bits_per_block

    @property
    def sweep_len(self) -> int:
        return self.block_samples // self.sweeps_per_block

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def vmd_params(self) -> VmdParams:
        return VmdParams(n_modes=self.n_modes, alpha=self.alpha, tau=self.tau,
                         tol=self.vmd_tol, max_iter=self.vmd_max_iter, init=self.vmd_init)

    def receiver_params(self, name: str) -> dict:
        """Constructor arguments for the receiver class registered as ``name``."""
        params = {"beta": self.beta, "p": self.p}
        if name in ("wpd", "vmd-ica-wpd"):
            params.update(basis=self.basis, level=self.level, polarity=self.polarity)
        if name == "vmd-ica-wpd":
            params.update(n_modes=self.n_modes, alpha=self.alpha, tau=self.tau,
                          vmd_tol=self.vmd_tol, vmd_max_iter=self.vmd_max_iter,
                          ica_tol=self.ica_tol, ica_max_iter=self.ica_max_iter)
        return params


# Which section each field lives in.
SECTIONS = {
    "sim": ["beta", "p", "bits_per_block", "n_trials", "ebn0_db", "jsr_db", "receivers",
            "seed", "chain_chaos"],
    "channel": ["fading", "m_sd", "m_jd", "omega", "noise"],
    "jammer": ["jammer", "f_start", "f_stop", "sweeps_per_block", "theta"],
    "vmd": ["n_modes", "alpha", "tau", "vmd_tol", "vmd_max_iter", "vmd_init"],
    "ica": ["ica_tol", "ica_max_iter"],
    "wpd": ["basis", "level", "polarity"],
    "spectrogram": ["window", "hop", "spec_ebn0_db", "spec_jsr_db", "spec_trial"],
}
# Keys as written in the file; inside [vmd]/[ica]/[spectrogram] the prefix is dropped.
_PREFIX = {"vmd": "vmd_", "ica": "ica_", "spectrogram": "spec_"}
_FIELDS = {f.name: f for f in dataclasses.fields(SimConfig)}


def _file_key(section: str, name: str) -> str:
    prefix = _PREFIX.get(section, "")
    return name[len(prefix):] if prefix and name.startswith(prefix) else name


def validate(cfg: SimConfig) -> list[str]:
    """Return a list of problems (empty when ``cfg`` is valid)."""
    bad = []

    def need(cond, name, msg):
        if not cond:
            bad.append(f"{name}: {msg} (got {getattr(cfg, name)!r})")

    def is_int(v):
        return isinstance(v, int) and not isinstance(v, bool)

    for name in ("beta", "p", "bits_per_block", "n_trials", "sweeps_per_block", "n_modes",
                 "vmd_max_iter", "ica_max_iter", "level", "window", "hop"):
        need(is_int(getattr(cfg, name)) and getattr(cfg, name) >= 1, name,
             "must be an integer >= 1")
    need(is_int(cfg.seed) and cfg.seed >= 0, "seed", "must be an integer >= 0")
    need(is_int(cfg.spec_trial) and cfg.spec_trial >= 0, "spec_trial",
         "must be an integer >= 0")
    if is_int(cfg.beta) and is_int(cfg.p) and cfg.p >= 1:
        need(cfg.beta % cfg.p == 0, "p", f"must divide beta={cfg.beta}")
    for name in ("ebn0_db", "jsr_db", "receivers"):
        need(len(getattr(cfg, name)) > 0, name, "must be a non-empty list")
    for r in cfg.receivers:
        if r not in RECEIVERS:
            bad.append(f"receivers: unknown receiver {r!r}; choose from {sorted(RECEIVERS)}")
    need(len(set(cfg.receivers)) == len(cfg.receivers), "receivers", "contains duplicates")
    need(cfg.fading in ("nakagami", "none"), "fading", "must be 'nakagami' or 'none'")
    need(cfg.m_sd >= 0.5, "m_sd", "must be >= 0.5")
    need(cfg.m_jd >= 0.5, "m_jd", "must be >= 0.5")
    need(cfg.omega > 0, "omega", "must be > 0")
    need(0.0 <= cfg.f_start <= 0.5, "f_start", "must lie in [0, 0.5] cycles/sample")
    need(0.0 <= cfg.f_stop <= 0.5, "f_stop", "must lie in [0, 0.5] cycles/sample")
    if is_int(cfg.sweeps_per_block) and is_int(cfg.beta) and is_int(cfg.bits_per_block):
        if cfg.sweeps_per_block >= 1:
            need(cfg.block_samples % cfg.sweeps_per_block == 0, "sweeps_per_block",
                 f"must divide the block length {cfg.block_samples}")
    if cfg.theta != "random":
        try:
            float(cfg.theta)
        except (TypeError, ValueError):
            bad.append(f"theta: must be 'random' or a phase in radians (got {cfg.theta!r})")
    need(cfg.alpha > 0, "alpha", "must be > 0")
    need(cfg.tau >= 0, "tau", "must be >= 0")
    need(cfg.vmd_tol > 0, "vmd_tol", "must be > 0")
    need(cfg.vmd_init in ("uniform", "zero"), "vmd_init", "must be 'uniform' or 'zero'")
    need(cfg.ica_tol > 0, "ica_tol", "must be > 0")
    need(cfg.basis in _SCALING_TAPS, "basis", f"must be one of {sorted(_SCALING_TAPS)}")
    need(cfg.polarity in POLARITIES, "polarity", f"must be one of {list(POLARITIES)}")
    if is_int(cfg.n_modes):
        need(cfg.n_modes >= 2, "n_modes", "must be >= 2 so the modes can be split in two")
    return bad


def _convert(name: str, raw: str):
    f = _FIELDS[name]
    default = f.default
    raw = raw.strip()
    if isinstance(default, bool):
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError("expected a boolean")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, tuple):
        items = [s.strip() for s in raw.split(",") if s.strip()]
        if name == "receivers":
            return tuple(items)
        return tuple(float(s) for s in items)
    return raw


def parse_config(text: str, **overrides) -> SimConfig:
    """Parse INI text into a validated ``SimConfig``.

    All problems (unknown keys, unparsable values, invalid values) are
    collected and raised together as one ``ConfigError``.
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__",
                                       inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc}"]) from None

    values, problems = {}, []
    for section in parser.sections():
        if section not in SECTIONS:
            problems.append(f"[{section}]: unknown section; expected one of {list(SECTIONS)}")
            continue
        known = {_file_key(section, n): n for n in SECTIONS[section]}
        for key, raw in parser.items(section):
            if key not in known:
                problems.append(f"[{section}] {key}: unknown key; expected one of {list(known)}")
                continue
            name = known[key]
            try:
                values[name] = _convert(name, raw)
            except ValueError as exc:
                problems.append(f"[{section}] {key}: cannot parse {raw!r} ({exc})")
    if problems:
        raise ConfigError(problems)
    values.update(overrides)
    return SimConfig(**values)


def load_config(path, **overrides) -> SimConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), **overrides)


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_to_text(cfg: SimConfig) -> str:
    """Serialize every field; ``parse_config(config_to_text(c)) == c``."""
    lines = []
    for section, names in SECTIONS.items():
        lines.append(f"[{section}]")
        for name in names:
            lines.append(f"{_file_key(section, name)} = {_format(getattr(cfg, name))}")
        lines.append("")
    return "\n".join(lines)
