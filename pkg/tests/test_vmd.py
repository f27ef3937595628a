import numpy as np
import pytest
from sklearn.base import clone

from nrdcsk.vmd import VMD, ModeSet, VmdParams, split_modes, vmd_decompose


def _tones(n=4000, freqs=(0.05, 0.20), amps=(1.0, 0.8), noise=0.0, seed=0):
    k = np.arange(n)
    x = sum(a * np.cos(2 * np.pi * f * k + 0.3 * i) for i, (f, a) in enumerate(zip(freqs, amps)))
    return x + noise * np.random.default_rng(seed).standard_normal(n)


def test_zero_signal():
    res = vmd_decompose(np.zeros(200), VmdParams(n_modes=3))
    assert np.all(res.modes == 0) and res.residual == 0.0
    assert res.modes.shape == (3, 200)


def test_single_tone():
    x = np.cos(2 * np.pi * 0.1 * np.arange(2000))
    res = vmd_decompose(x, VmdParams(n_modes=1))
    assert 0.098 <= res.center_freqs[0] <= 0.102
    assert np.linalg.norm(res.modes[0] - x) <= 0.05 * np.linalg.norm(x)


def test_two_tones_are_separated():
    x = _tones()
    res = vmd_decompose(x, VmdParams(n_modes=2, alpha=2000.0))
    np.testing.assert_allclose(res.center_freqs, [0.05, 0.20], rtol=0.02)
    f = np.fft.rfftfreq(x.size)
    for mode, f0 in zip(res.modes, (0.05, 0.20)):
        p = np.abs(np.fft.rfft(mode)) ** 2
        assert p[np.abs(f - f0) <= 0.01].sum() >= 0.9 * p.sum()


def test_modes_are_band_limited():
    x = _tones(freqs=(0.03, 0.15, 0.33), amps=(1.0, 0.7, 0.5), noise=0.05)
    alpha = 2000.0
    res = vmd_decompose(x, VmdParams(n_modes=3, alpha=alpha))
    f = np.fft.rfftfreq(x.size)
    # Half-power band of the mode filter 1 / (1 + 2 alpha (f - w)^2).
    half = np.sqrt((np.sqrt(2) - 1) / (2 * alpha))
    for mode, w in zip(res.modes, res.center_freqs):
        p = np.abs(np.fft.rfft(mode)) ** 2
        assert p[np.abs(f - w) <= half].sum() >= 0.8 * p.sum()


@pytest.mark.parametrize("tau", [0.1, 1.0])
@pytest.mark.parametrize("freqs", [(0.05, 0.20), (0.03, 0.15, 0.33)])
def test_dual_ascent_reconstructs_and_violation_settles(tau, freqs):
    x = _tones(freqs=freqs, amps=(1.0,) * len(freqs))
    res = vmd_decompose(x, VmdParams(n_modes=len(freqs), tau=tau, tol=1e-9, max_iter=2000))
    assert res.converged
    assert res.residual <= 0.05
    assert np.all(np.diff(res.history[-11:]) <= 0)


def test_dual_ascent_on_noise_may_not_converge():
    # A spare mode chasing noise keeps the multiplier moving; the run is
    # returned and flagged rather than raising.
    x = _tones(noise=0.1)
    res = vmd_decompose(x, VmdParams(n_modes=3, tau=1.0, tol=1e-9, max_iter=200))
    assert not res.converged and res.n_iter == 200
    assert np.all(np.isfinite(res.modes))


def test_output_sorted_and_flagged():
    x = np.random.default_rng(1).standard_normal(1000)
    res = vmd_decompose(x, VmdParams(n_modes=4, max_iter=3))
    assert not res.converged and res.n_iter == 3
    assert np.all(np.diff(res.center_freqs) >= 0)
    assert np.all((res.center_freqs >= 0) & (res.center_freqs <= 0.5))
    assert isinstance(res, ModeSet) and res.n_modes == 4


def test_compiled_kernel_matches_numpy_reference():
    x = _tones(n=3000, noise=0.5, seed=3)
    for tau in (0.0, 0.5):
        p = VmdParams(n_modes=5, tau=tau, max_iter=60)
        a = vmd_decompose(x, p, compiled=True)
        b = vmd_decompose(x, p, compiled=False)
        assert a.n_iter == b.n_iter
        np.testing.assert_allclose(a.modes, b.modes, atol=1e-9)
        np.testing.assert_allclose(a.center_freqs, b.center_freqs, atol=1e-11)


def test_zero_init_runs():
    res = vmd_decompose(_tones(), VmdParams(n_modes=2, init="zero"))
    assert res.modes.shape == (2, 4000)


@pytest.mark.parametrize("kw", [dict(n_modes=0), dict(alpha=0.0), dict(tau=-1.0),
                                dict(tol=0.0), dict(max_iter=0), dict(init="random")])
def test_params_invariants(kw):
    with pytest.raises(ValueError):
        VmdParams(**kw)


def test_input_errors():
    with pytest.raises(ValueError):
        vmd_decompose([1.0, np.nan] * 20)
    with pytest.raises(ValueError):
        vmd_decompose(np.ones(15), VmdParams(n_modes=10))


def test_split_modes_examples():
    a, b = np.arange(5.0), -np.ones(5)
    v1, v2 = split_modes(np.stack([a, b]))
    np.testing.assert_array_equal(v1, a)
    np.testing.assert_array_equal(v2, b)
    z1, z2 = split_modes(np.zeros((10, 7)))
    assert not z1.any() and not z2.any()
    with pytest.raises(ValueError):
        split_modes(np.zeros((1, 7)))


def test_split_modes_ten_modes_exact_and_by_frequency():
    x = np.random.default_rng(2).standard_normal(2000)
    res = vmd_decompose(x, VmdParams(n_modes=10, max_iter=50))
    v1, v2 = split_modes(res)
    np.testing.assert_array_equal(v1, res.modes[:5].sum(axis=0))
    np.testing.assert_array_equal(v2, res.modes[5:].sum(axis=0))
    np.testing.assert_allclose(v1 + v2, res.modes.sum(axis=0), rtol=0, atol=1e-12)
    # Odd counts give the extra mode to the low set.
    odd_low, _ = split_modes(res.modes[:5])
    np.testing.assert_allclose(odd_low, res.modes[:3].sum(axis=0), atol=1e-12)


def test_estimator():
    est = VMD(n_modes=2)
    assert clone(est).get_params()["n_modes"] == 2
    x = _tones()
    X = est.fit(x).transform(x)
    assert X.shape == (2, 4000)
    np.testing.assert_array_equal(X, np.stack(split_modes(vmd_decompose(x, est._params()))))
    y = _tones(freqs=(0.1, 0.3))
    np.testing.assert_allclose(est.transform(y).sum(axis=0), y, atol=1e-2 * np.abs(y).max())
    assert est.converged_ and est.center_freqs_.shape == (2,)
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        VMD().transform(x)
