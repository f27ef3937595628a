import math

import numpy as np
import pytest

from nrdcsk.channel import linear_sweep, sweep_waveform
from nrdcsk.sim import (
    BerPoint,
    ConfigError,
    SimConfig,
    config_to_text,
    csv_text,
    draw_trial,
    parse_config,
    read_matrix,
    received_block,
    ridge_energy_db,
    run_sweep,
    spectrogram,
    stage_signal,
    wilson_halfwidth,
    write_csv,
    write_matrix,
)
from nrdcsk.sim.io import CSV_HEADER, format_float

# Small blocks keep the sweeps fast: 10 bits -> 4000 samples, sweep length 800.
SMALL = dict(bits_per_block=10, n_trials=4, ebn0_db=(10.0, 20.0), jsr_db=(-10.0, 0.0, 10.0),
             receivers=("plain",), seed=3)


# --- configuration ----------------------------------------------------------

def test_defaults_are_valid():
    cfg = SimConfig()
    assert cfg.block_samples == 40_000 and cfg.sweep_len == 8000
    assert cfg.vmd_params().n_modes == 10


def test_parse_example_and_round_trip():
    text = """
[sim]
n_trials = 20
ebn0_db = 15, 20
jsr_db = -5, 0, 5
receivers = plain, wpd
seed = 7

[jammer]
f_stop = 0.04

[vmd]
max_iter = 300

[spectrogram]
jsr_db = 10
"""
    cfg = parse_config(text)
    assert cfg.n_trials == 20 and cfg.jsr_db == (-5.0, 0.0, 5.0)
    assert cfg.receivers == ("plain", "wpd") and cfg.f_stop == 0.04
    assert cfg.vmd_max_iter == 300 and cfg.spec_jsr_db == 10.0
    assert parse_config(config_to_text(cfg)) == cfg
    assert parse_config(config_to_text(SimConfig())) == SimConfig()


def test_overrides_win():
    assert parse_config("[sim]\nseed = 1\n", seed=9).seed == 9


@pytest.mark.parametrize("text, fragment", [
    ("[sim]\nseeds = 1\n", "seeds: unknown key"),
    ("[radio]\nx = 1\n", "[radio]: unknown section"),
    ("[vmd]\nvmd_tol = 1e-6\n", "vmd_tol: unknown key"),  # prefix is dropped in-section
    ("[sim]\nn_trials = many\n", "cannot parse"),
    ("[channel]\nnoise = maybe\n", "cannot parse"),
    ("not an ini file", "syntax"),
    ("[sim]\nseed = 1 ; inline\nbogus = 2 # too\n", "bogus: unknown key"),
])
def test_parse_rejects(text, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert any(fragment in p for p in info.value.problems)


def test_all_problems_are_listed():
    with pytest.raises(ConfigError) as info:
        SimConfig(p=7, receivers=("plain", "notch"), f_stop=0.7, n_modes=1, polarity="x")
    names = {p.split(":")[0] for p in info.value.problems}
    assert {"p", "receivers", "f_stop", "n_modes", "polarity"} <= names
    assert isinstance(info.value, ValueError)


@pytest.mark.parametrize("kw", [dict(n_trials=0), dict(seed=-1), dict(jsr_db=()),
                                dict(receivers=("plain", "plain")), dict(sweeps_per_block=7),
                                dict(theta="east"), dict(fading="rician"), dict(window=0)])
def test_invalid_fields(kw):
    with pytest.raises(ConfigError):
        SimConfig(**kw)


def test_receiver_params_construct_receivers():
    from nrdcsk.receivers import make_receiver

    cfg = SimConfig(level=4, n_modes=6)
    for name in cfg.receivers:
        rx = make_receiver(name, **cfg.receiver_params(name))
        assert rx.get_params()["beta"] == 200
    assert make_receiver("vmd-ica-wpd", **cfg.receiver_params("vmd-ica-wpd")).n_modes == 6


# --- statistics ---------------------------------------------------------------

def _wilson_oracle(k, n, z=1.959963984540054):
    # Endpoints are the roots of (p_hat - p)^2 = z^2 p (1 - p) / n.
    p_hat = k / n
    a = 1 + z * z / n
    b = -(2 * p_hat + z * z / n)
    c = p_hat * p_hat
    disc = math.sqrt(b * b - 4 * a * c)
    return disc / (2 * a)


@pytest.mark.parametrize("k, n", [(0, 100), (1, 100), (37, 100), (100, 100), (5, 200_000)])
def test_wilson_matches_quadratic_roots(k, n):
    assert wilson_halfwidth(k, n) == pytest.approx(_wilson_oracle(k, n), rel=1e-12, abs=1e-15)


def test_ber_point():
    p = BerPoint(5.0, 20.0, "wpd", 1000, 25)
    assert p.ber == 0.025 and p.ci95 == pytest.approx(wilson_halfwidth(25, 1000))
    with pytest.raises(ValueError):
        BerPoint(0.0, 0.0, "plain", 10, 11)
    with pytest.raises(ValueError):
        BerPoint(0.0, 0.0, "plain", 10, -1)


# --- trial draws and sweeps ---------------------------------------------------

def test_trial_draws_are_keyed_by_seed_and_trial():
    cfg = SimConfig(**SMALL)
    a, b = draw_trial(cfg, 2), draw_trial(cfg, 2)
    np.testing.assert_array_equal(a.tx, b.tx)
    assert a.ica_seed == b.ica_seed and a.theta == b.theta
    c = draw_trial(cfg, 3)
    assert not np.array_equal(a.unit_noise, c.unit_noise)
    d = draw_trial(cfg.replace(seed=4), 2)
    assert not np.array_equal(a.unit_noise, d.unit_noise)


def test_received_block_power_bookkeeping():
    cfg = SimConfig(**SMALL).replace(fading="none", jammer=False)
    draw = draw_trial(cfg, 0)
    r = received_block(cfg, draw, 0.0, 10.0)
    n0 = (2 * cfg.beta * draw.signal_power) / (2 * 10.0)
    assert np.var(r - draw.tx) == pytest.approx(n0, rel=0.1)
    cfg = cfg.replace(noise=False, jammer=True)
    jam = received_block(cfg, draw, 10.0, 10.0) - draw.tx
    ref = linear_sweep(0.0, 0.05, 800, 200, p_j=10.0 * draw.signal_power, theta_sw=draw.theta)
    np.testing.assert_allclose(jam, sweep_waveform(np.arange(4000), ref, 200), atol=1e-12)


def test_noiseless_plain_sweep_is_error_free():
    cfg = SimConfig(**SMALL).replace(fading="none", noise=False, jammer=False)
    points = run_sweep(cfg)
    assert len(points) == 6 and all(p.errors == 0 for p in points)
    assert all(p.bits == 40 for p in points)


def test_plain_ber_grows_with_jamming():
    cfg = SimConfig(**SMALL).replace(n_trials=30, ebn0_db=(20.0,), jsr_db=(0.0, 10.0, 20.0))
    ber = [p.ber for p in run_sweep(cfg)]
    assert ber == sorted(ber) and ber[-1] > ber[0]


def test_sweep_sorted_and_paired():
    cfg = SimConfig(**SMALL).replace(receivers=("wpd", "plain"))
    meta = []
    points = run_sweep(cfg, metadata=meta)
    assert [p.sort_key() for p in points] == sorted(p.sort_key() for p in points)
    assert len(points) == 3 * 2 * 2
    assert len(meta) == cfg.n_trials * 6
    assert [m["trial"] for m in meta] == sorted(m["trial"] for m in meta)
    for m in meta:
        assert m["stream"]["plain"] == m["stream"]["wpd"]
    for p in points:
        cell = [m for m in meta if m["jsr_db"] == p.jsr_db and m["ebn0_db"] == p.ebn0_db]
        assert sum(m["errors"][p.receiver] for m in cell) == p.errors


def test_progress_and_repeatability():
    cfg = SimConfig(**SMALL)
    calls = []
    full = run_sweep(cfg, progress=lambda d, n: calls.append((d, n)))
    assert calls[-1] == (cfg.n_trials, cfg.n_trials)
    assert run_sweep(cfg) == full


# --- CSV ----------------------------------------------------------------------

def test_format_float():
    assert format_float(0.1234567) == "0.123457"
    assert format_float(-20.0) == "-20"
    assert format_float(1.5e-7) == "1.5e-07"


def test_csv_layout():
    assert csv_text([]) == CSV_HEADER + "\n"
    one = csv_text([BerPoint(0.0, 15.0, "plain", 3, 1)]).splitlines()
    assert one == [CSV_HEADER, f"0,15,plain,3,1,0.333333,{format_float(wilson_halfwidth(1, 3))}"]
    pts = [BerPoint(j, e, r, 100, 1) for r in ("wpd", "plain") for e in (20.0, 15.0)
           for j in (5.0, -5.0)]
    rows = [line.split(",") for line in csv_text(pts).splitlines()[1:]]
    keys = [(r[2], float(r[1]), float(r[0])) for r in rows]
    assert keys == sorted(keys) and len(rows) == 8


def test_write_csv_row_count(tmp_path):
    cfg = SimConfig(**SMALL)
    path = tmp_path / "ber.csv"
    write_csv(run_sweep(cfg), path)
    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) - 1 == len(cfg.jsr_db) * len(cfg.ebn0_db) * len(cfg.receivers)


# --- spectrogram --------------------------------------------------------------

@pytest.mark.parametrize("n, window, hop", [(1000, 256, 64), (256, 256, 64), (4000, 128, 100)])
def test_spectrogram_shape(n, window, hop):
    spec = spectrogram(np.random.default_rng(0).standard_normal(n), window, hop)
    assert spec.shape == ((n - window) // hop + 1, window // 2 + 1)


def test_spectrogram_tone_peak():
    f0 = 0.1234
    spec = spectrogram(np.cos(2 * np.pi * f0 * np.arange(4096)))
    peak = spec.freqs[np.argmax(spec.db, axis=1)]
    assert np.all(np.abs(peak - f0) <= 1.0 / 256)


def test_spectrogram_tracks_chirp():
    n = np.arange(20_000)
    x = np.sin(2 * np.pi * (0.01 * n + 0.5 * (0.3 / n.size) * n**2))
    peak = np.argmax(spectrogram(x).db, axis=1)
    assert np.all(np.diff(peak) >= 0) and peak[-1] > peak[0]


def test_spectrogram_white_noise_level_and_floor():
    spec = spectrogram(np.random.default_rng(1).standard_normal(50_000))
    assert abs(np.mean(10 ** (spec.db[:, 1:-1] / 10)) - 1.0) < 0.05
    assert np.all(spectrogram(np.zeros(512)).db == -120.0)
    with pytest.raises(ValueError):
        spectrogram(np.zeros(100), window=256)


def test_ridge_energy():
    spec = spectrogram(np.cos(2 * np.pi * 0.1 * np.arange(4096)))
    rows = spec.shape[0]
    on = ridge_energy_db(spec, np.full(rows, 0.1))
    off = ridge_energy_db(spec, np.full(rows, 0.3))
    assert on - off > 60
    with pytest.raises(ValueError):
        ridge_energy_db(spec, np.zeros(rows + 1))


def test_matrix_round_trip(tmp_path):
    spec = spectrogram(np.random.default_rng(2).standard_normal(2000), 128, 32)
    path = tmp_path / "s.txt"
    write_matrix(spec, path)
    first = path.read_text().splitlines()[0]
    assert first == f"{spec.shape[0]} {spec.shape[1]} 128 32"
    db, window, hop = read_matrix(path)
    assert (window, hop) == (128, 32)
    np.testing.assert_allclose(db, spec.db, rtol=1e-5, atol=1e-4)


def test_stage_signals():
    cfg = SimConfig(bits_per_block=10, spec_jsr_db=10.0, n_modes=4, vmd_max_iter=50)
    tx = stage_signal(cfg, "tx")
    rx = stage_signal(cfg, "rx")
    assert tx.shape == rx.shape == (4000,)
    np.testing.assert_array_equal(tx, draw_trial(cfg, 0).tx)
    cleaned = stage_signal(cfg, "cleaned")
    assert cleaned.shape == (4000,) and np.all(np.isfinite(cleaned))
    np.testing.assert_array_equal(stage_signal(cfg, "cleaned"), cleaned)
    with pytest.raises(ValueError):
        stage_signal(cfg, "raw")


def test_readme_config_lists_the_defaults():
    import pathlib
    import re

    readme = pathlib.Path(__file__).resolve().parents[1] / "README.md"
    ini = re.search(r"```ini\n(.*?)```", readme.read_text(), re.S).group(1)
    assert parse_config(ini) == SimConfig()
