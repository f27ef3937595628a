"""Configuration, Monte-Carlo sweeps, spectrograms and file outputs."""

from .config import ConfigError, SimConfig, config_to_text, load_config, parse_config
from .harness import BerPoint, draw_trial, received_block, run_sweep, wilson_halfwidth
from .io import CSV_HEADER, csv_text, read_matrix, write_csv, write_matrix
from .spectrogram import SpectrogramMatrix, ridge_energy_db, spectrogram, stage_signal

__all__ = [
    "SimConfig", "ConfigError", "load_config", "parse_config", "config_to_text",
    "BerPoint", "run_sweep", "draw_trial", "received_block", "wilson_halfwidth",
    "CSV_HEADER", "csv_text", "write_csv", "write_matrix", "read_matrix",
    "SpectrogramMatrix", "spectrogram", "stage_signal", "ridge_energy_db",
]
