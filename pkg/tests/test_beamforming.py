import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mimo_bands.array_geometry import ula_matrix, ula_response
from mimo_bands.beamforming import (AN, CM_FD, Beamformers, RankDeficiencyError,
                                    SingularCombinerError, an_beamformers, cm_fd_beamformers,
                                    spectral_efficiency)
from mimo_bands.channel_models import ClusterConfig, flatten_paths, gen_mm_wave, gen_mu_wave
from mimo_bands.propagation import LosModel


def rank_one(aoa=0.3, aod=-0.6, n_r=8, n_t=16, c=1.0):
    a_r = ula_response(aoa, n_r).elements
    a_t = ula_response(aod, n_t).elements
    return c * np.outer(a_r, a_t.conj())


def test_cm_rank_one():
    h = rank_one(c=2.5)
    bf = cm_fd_beamformers(h, 1)
    assert abs((bf.combiner.conj().T @ h @ bf.precoder)[0, 0]) == pytest.approx(2.5)
    assert abs(np.vdot(bf.precoder[:, 0], ula_response(-0.6, 16).elements)) == pytest.approx(1)
    assert abs(np.vdot(bf.combiner[:, 0], ula_response(0.3, 8).elements)) == pytest.approx(1)


def test_cm_diagonal():
    bf = cm_fd_beamformers(np.diag([3.0, 2.0, 1.0]), 2)
    np.testing.assert_allclose(np.abs(bf.precoder), np.eye(3)[:, :2], atol=1e-12)
    np.testing.assert_allclose(np.abs(bf.combiner), np.eye(3)[:, :2], atol=1e-12)


def test_cm_orthonormal(rng):
    for _ in range(20):
        h = gen_mu_wave(8, 12, 1.0, rng)
        bf = cm_fd_beamformers(h, 5)
        np.testing.assert_allclose(bf.precoder.conj().T @ bf.precoder, np.eye(5), atol=1e-10)
        np.testing.assert_allclose(bf.combiner.conj().T @ bf.combiner, np.eye(5), atol=1e-10)
        assert bf.method == CM_FD


def test_cm_rank_error():
    with pytest.raises(RankDeficiencyError):
        cm_fd_beamformers(rank_one(), 2)
    with pytest.raises(RankDeficiencyError):
        cm_fd_beamformers(np.eye(3), 4)
    bf = cm_fd_beamformers(rank_one(), 2, strict_rank=False)
    assert bf.m == 2


def test_an_single_path():
    paths = [(1.0 + 0j, 0.2, -0.4)]
    bf = an_beamformers(paths, 1, 16, 8)
    np.testing.assert_allclose(bf.precoder[:, 0], ula_response(-0.4, 16).elements)
    np.testing.assert_allclose(bf.combiner[:, 0], ula_response(0.2, 8).elements)
    assert bf.method == AN


def test_an_picks_strongest():
    paths = [(0.1, 0.0, 0.0), (2.0, 0.5, -0.5), (1.0, -0.3, 0.3)]
    bf = an_beamformers(paths, 2, 8, 8)
    np.testing.assert_allclose(bf.precoder, ula_matrix([-0.5, 0.3], 8))


def test_an_columns_unit_not_orthogonal():
    bf = an_beamformers([(1, 0.1, 0.1), (0.9, 0.2, 0.25)], 2, 8, 8)
    np.testing.assert_allclose(np.linalg.norm(bf.precoder, axis=0), 1.0, atol=1e-12)
    assert abs(np.vdot(bf.precoder[:, 0], bf.precoder[:, 1])) > 1e-3


def test_an_errors():
    with pytest.raises(RankDeficiencyError):
        an_beamformers([(1, 0.1, 0.1)], 2, 8, 8)
    with pytest.raises(RankDeficiencyError):
        an_beamformers([(1, 0.1, 0.1), (0.5, 0.1, 0.1)], 2, 8, 8)


def test_an_asymptotic_orthogonality():
    r = np.random.default_rng(7)
    angles = r.uniform(-1.2, 1.2, (4, 2))
    paths = [(1.0 / (k + 1), a, d) for k, (a, d) in enumerate(angles)]
    worst = []
    for n in (16, 64, 256, 1024):
        f = an_beamformers(paths, 4, n, n).precoder
        worst.append(np.abs(f.conj().T @ f - np.eye(4)).max())
    assert worst[-1] < worst[0]
    assert worst[-1] < 0.05


def test_se_rank_one_unit():
    h = rank_one()
    for snr in (0.01, 1.0, 100.0):
        cm = spectral_efficiency(h, cm_fd_beamformers(h, 1), snr)
        an = spectral_efficiency(h, an_beamformers([(1.0, 0.3, -0.6)], 1, 16, 8), snr)
        assert cm == pytest.approx(np.log2(1 + snr), abs=1e-12)
        assert an == pytest.approx(cm, abs=1e-12)


def test_se_monotone(rng):
    h = gen_mu_wave(4, 6, 1.0, rng)
    bf = cm_fd_beamformers(h, 3)
    snrs = np.geomspace(1e-8, 1e3, 40)
    se = [spectral_efficiency(h, bf, s) for s in snrs]
    assert se[0] < 1e-6
    assert np.all(np.diff(se) > 0)


def test_se_uses_large_scale_gain(rng):
    h = gen_mu_wave(4, 4, 1e-9, rng)
    bf = cm_fd_beamformers(h, 2)
    assert spectral_efficiency(h, bf, 10.0) == pytest.approx(
        spectral_efficiency(h.normalized(), bf, 10.0))


def test_se_errors():
    h = rank_one(n_r=4, n_t=4)
    w = np.tile(ula_response(0.1, 4).elements[:, None], (1, 2))
    f = ula_matrix([0.1, 0.2], 4)
    with pytest.raises(SingularCombinerError):
        spectral_efficiency(h, Beamformers(f, w, AN, 2), 1.0)
    with pytest.raises(ValueError):
        spectral_efficiency(h, cm_fd_beamformers(h, 1), 0.0)
    with pytest.raises(ValueError):
        spectral_efficiency(np.ones((3, 4)), cm_fd_beamformers(h, 1), 1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2, 3]), st.floats(-20, 30))
def test_cm_dominates_an(seed, m, snr_db):
    r = np.random.default_rng(seed)
    cfg = ClusterConfig(n_cl=2, n_ray=3, los_model=LosModel("bernoulli"))
    d = gen_mm_wave(16, 32, cfg, r)
    h = d.matrix.normalized()
    snr = 10 ** (snr_db / 10)
    cm = spectral_efficiency(h, cm_fd_beamformers(h, m), snr)
    an = spectral_efficiency(h, an_beamformers(flatten_paths(d), m, 32, 16), snr)
    assert cm >= an - 1e-9


def test_power_scaling_single_path():
    # one path with |alpha|^2 L = 1: the M=1 rate is log2(1 + snr N_T N_R)
    snr = 100.0
    se = []
    for n_r, n_t in ((8, 16), (16, 32)):
        cfg = ClusterConfig(n_cl=1, n_ray=1, los_model=LosModel("never"), unit_attenuation=True,
                            unit_gains=True)
        d = gen_mm_wave(n_r, n_t, cfg, np.random.default_rng(3))
        h = d.matrix
        se.append(spectral_efficiency(h, cm_fd_beamformers(h, 1), snr))
        assert se[-1] == pytest.approx(np.log2(1 + snr * n_r * n_t), abs=1e-9)
    assert se[1] - se[0] == pytest.approx(2.0, abs=0.01)
