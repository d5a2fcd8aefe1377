import numpy as np
import pytest

from hybridbeam.channel import ArrayGeometry, ClusterParams, draw_channel
from hybridbeam.metrics import (
    energy_efficiency,
    mutual_information,
    r_eta,
    spectral_efficiency,
)
from hybridbeam.quant import delta_of_bits, noise_cov


def _random_link(rng, n_tx=8, n_rx=4, l_tx=3, l_rx=3, n_streams=2):
    ch = draw_channel(rng, ArrayGeometry(n_tx), ArrayGeometry(n_rx), ClusterParams())
    f_rf = np.exp(1j * rng.uniform(0, 2 * np.pi, (n_tx, l_tx)))
    w_rf = np.exp(1j * rng.uniform(0, 2 * np.pi, (n_rx, l_rx)))
    f_bb = (rng.standard_normal((l_tx, n_streams)) + 1j * rng.standard_normal((l_tx, n_streams))) / 4
    w_bb = (rng.standard_normal((l_rx, n_streams)) + 1j * rng.standard_normal((l_rx, n_streams))) / 4
    d_t = rng.uniform(0.6, 0.99, l_tx)
    d_r = rng.uniform(0.6, 0.99, l_rx)
    return ch.h, f_rf, d_t, f_bb, w_rf, d_r, w_bb


def test_r_eta_awgn_only():
    # no quantization noise and an orthonormal combiner leaves noise_var * I
    n_rx, n_s = 4, 2
    w_rf = np.eye(n_rx, dtype=complex)
    w_bb = np.zeros((n_rx, n_s), dtype=complex)
    w_bb[0, 0] = w_bb[1, 1] = 1.0
    h = np.zeros((n_rx, 6), dtype=complex)
    out = r_eta(w_rf, np.ones(n_rx), w_bb, np.ones((6, 3), dtype=complex),
                np.zeros(3), np.zeros(n_rx), h, 0.25)
    np.testing.assert_allclose(out, 0.25 * np.eye(n_s), atol=1e-14)


def test_r_eta_scalar_chain():
    # one of everything: three nonnegative contributions add up
    h = np.array([[2.0 + 0j]])
    f_rf = np.array([[1.0 + 0j]])
    w_rf = np.array([[1.0 + 0j]])
    w_bb = np.array([[1.0 + 0j]])
    out = r_eta(w_rf, [1.0], w_bb, f_rf, [0.1], [0.2], h, 0.3)
    assert out.shape == (1, 1)
    assert out[0, 0].real == pytest.approx(4 * 0.1 + 0.2 + 0.3, abs=1e-12)


def test_r_eta_monte_carlo_oracle():
    # sample the noise bundle eta = W^H H F_rf e_t + W_bb^H e_r + W^H n
    rng = np.random.default_rng(77)
    h, f_rf, d_t, f_bb, w_rf, d_r, w_bb = _random_link(rng)
    c_t = noise_cov(np.array([2, 4, 6]))
    c_r = noise_cov(np.array([3, 5, 7]))
    noise_var = 0.5
    analytic = r_eta(w_rf, d_r, w_bb, f_rf, c_t, c_r, h, noise_var)

    w = w_rf @ (d_r[:, None] * w_bb)
    a = w.conj().T @ h @ f_rf
    b = w_bb.conj().T
    c = w.conj().T
    n_draws = 100_000
    def crandn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    e_t = np.sqrt(c_t)[:, None] * crandn(3, n_draws)
    e_r = np.sqrt(c_r)[:, None] * crandn(3, n_draws)
    n = np.sqrt(noise_var) * crandn(h.shape[0], n_draws)
    eta = a @ e_t + b @ e_r + c @ n
    sampled = (eta @ eta.conj().T) / n_draws
    err = np.linalg.norm(sampled - analytic) / np.linalg.norm(analytic)
    assert err < 0.02


def test_r_eta_hermitian_positive_definite():
    rng = np.random.default_rng(5)
    for _ in range(10):
        h, f_rf, d_t, f_bb, w_rf, d_r, w_bb = _random_link(rng)
        out = r_eta(w_rf, d_r, w_bb, f_rf, noise_cov([3] * 3), noise_cov([3] * 3), h, 0.1)
        assert np.linalg.norm(out - out.conj().T) <= 1e-12 * np.linalg.norm(out)
        assert np.linalg.eigvalsh(out)[0] > 0


def test_r_eta_degenerate_combiner():
    h = np.zeros((2, 2), dtype=complex)
    w_rf = np.ones((2, 2), dtype=complex)  # rank one
    w_bb = np.ones((2, 2), dtype=complex)
    with pytest.raises(ValueError, match="degenerate"):
        r_eta(w_rf, np.ones(2), w_bb, np.eye(2, dtype=complex), np.zeros(2), np.zeros(2), h, 0.1)


def test_spectral_efficiency_zero_channel():
    rng = np.random.default_rng(1)
    _, f_rf, d_t, f_bb, w_rf, d_r, w_bb = _random_link(rng)
    h = np.zeros((4, 8), dtype=complex)
    se = spectral_efficiency(h, f_rf, d_t, f_bb, w_rf, d_r, w_bb,
                             noise_cov([3] * 3), noise_cov([3] * 3), 0.1, 2)
    assert se == 0.0


def test_spectral_efficiency_scalar_capacity():
    # single stream, no quantization: log2(1 + |h|^2 p / noise)
    h = np.array([[1.5 + 0j]])
    one = np.array([[1.0 + 0j]])
    p = 2.0
    f_bb = np.array([[np.sqrt(p) + 0j]])
    se = spectral_efficiency(h, one, [1.0], f_bb, one, [1.0], one,
                             [0.0], [0.0], 1.0, 1)
    assert se == pytest.approx(np.log2(1 + 1.5**2 * p), rel=1e-12)


def test_spectral_efficiency_eigenvalue_oracle():
    rng = np.random.default_rng(33)
    for _ in range(5):
        h, f_rf, d_t, f_bb, w_rf, d_r, w_bb = _random_link(rng)
        c_t, c_r = noise_cov([2, 3, 4]), noise_cov([5, 3, 2])
        se = spectral_efficiency(h, f_rf, d_t, f_bb, w_rf, d_r, w_bb, c_t, c_r, 0.2, 2)
        cov = r_eta(w_rf, d_r, w_bb, f_rf, c_t, c_r, h, 0.2)
        f = f_rf @ (d_t[:, None] * f_bb)
        w = w_rf @ (d_r[:, None] * w_bb)
        g = w.conj().T @ h @ f
        lam = np.linalg.eigvals(np.linalg.solve(cov, g @ g.conj().T) / 2)
        oracle = float(np.sum(np.log2(np.abs(1 + lam))))
        assert se == pytest.approx(oracle, rel=1e-8)


def test_spectral_efficiency_unitary_rotation_invariance():
    rng = np.random.default_rng(8)
    h, f_rf, d_t, f_bb, w_rf, d_r, w_bb = _random_link(rng)
    c_t, c_r = noise_cov([3] * 3), noise_cov([4] * 3)
    se = spectral_efficiency(h, f_rf, d_t, f_bb, w_rf, d_r, w_bb, c_t, c_r, 0.1, 2)
    q, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    se_rot = spectral_efficiency(h, f_rf, d_t, f_bb @ q, w_rf, d_r, w_bb @ q, c_t, c_r, 0.1, 2)
    assert abs(se - se_rot) <= 1e-8


def test_mutual_information_classic_form():
    rng = np.random.default_rng(4)
    h, f_rf, d_t, f_bb, *_ = _random_link(rng)
    noise_var, n_s = 0.3, 2
    mi = mutual_information(h, f_rf, d_t, f_bb, np.zeros(3), noise_var, n_s)
    f = f_rf @ (d_t[:, None] * f_bb)
    m = np.eye(h.shape[0]) + (h @ f) @ (h @ f).conj().T / (noise_var * n_s)
    classic = float(np.linalg.slogdet(m)[1] / np.log(2))
    assert mi == pytest.approx(classic, rel=1e-10)


def test_mutual_information_zero_precoder():
    rng = np.random.default_rng(4)
    h, f_rf, d_t, f_bb, *_ = _random_link(rng)
    mi = mutual_information(h, f_rf, d_t, np.zeros_like(f_bb), noise_cov([2] * 3), 0.3, 2)
    assert mi == 0.0


def test_mutual_information_resolution_continuity():
    # the b=8 value sits within 1e-3 of the quantization-free limit (b=30)
    rng = np.random.default_rng(6)
    h = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / 2
    f_rf = np.exp(1j * rng.uniform(0, 2 * np.pi, (4, 2)))
    f_bb = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / 4
    d_t = rng.uniform(0.9, 0.99, 2)
    vals = {b: mutual_information(h, f_rf, d_t, f_bb, noise_cov([b] * 2), 1.0, 2)
            for b in (1, 4, 8, 30)}
    assert abs(vals[8] - vals[30]) < 1e-3
    # the gap to the ideal shrinks monotonically with resolution
    assert abs(vals[1] - vals[30]) > abs(vals[4] - vals[30]) > abs(vals[8] - vals[30])


def test_mutual_information_monotone_in_bits():
    rng = np.random.default_rng(10)
    h, f_rf, d_t, f_bb, *_ = _random_link(rng)
    values = [
        mutual_information(h, f_rf, delta_of_bits(np.full(3, b)), f_bb,
                           noise_cov(np.full(3, b)), 0.1, 2)
        for b in range(1, 9)
    ]
    assert all(values[i] <= values[i + 1] + 1e-12 for i in range(7))


def test_energy_efficiency():
    assert energy_efficiency(0.0, 10.0, 5.0) == 0.0
    assert energy_efficiency(14.78, 147.8, 138.75) == pytest.approx(0.0516, abs=2e-4)
    assert energy_efficiency(10.0, 20.0, 30.0) == 2 * energy_efficiency(10.0, 40.0, 60.0)
    with pytest.raises(ValueError):
        energy_efficiency(1.0, 0.0, 0.0)
