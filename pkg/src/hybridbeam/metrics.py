"""Link-quality metrics: combined noise covariance, spectral efficiency,
TX-side mutual information, and energy efficiency."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LinkMetrics:
    """Evaluated link figures. ee is exactly se / (p_tx + p_rx)."""

    se: float
    p_tx: float
    p_rx: float
    ee: float
    r_eta_cond: float

    @property
    def power(self) -> float:
        return self.p_tx + self.p_rx


def _combined(rf, delta, bb) -> np.ndarray:
    return rf @ (np.asarray(delta)[:, None] * bb)


def _logdet_hermitian(a: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(a)
    if sign.real <= 0:
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return float(logdet)


def r_eta(w_rf, delta_rx, w_bb, f_rf, c_eps_tx, c_eps_rx, h, noise_var: float) -> np.ndarray:
    """Covariance of the combined noise at the combiner output.

    Sums the transmit quantization noise propagated through the channel and
    combiner, the receive quantization noise through the baseband combiner,
    and the AWGN term noise_var * W^H W. Hermitian positive definite whenever
    the combiner W = W_rf diag(delta_rx) W_bb has full column rank.
    """
    w = _combined(w_rf, delta_rx, w_bb)
    sv = np.linalg.svd(w, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= sv[0] * max(w.shape) * np.finfo(float).eps:
        raise ValueError("degenerate combiner: W is rank deficient")
    wh_h_frf = w.conj().T @ h @ f_rf
    tx_term = (wh_h_frf * np.asarray(c_eps_tx)[None, :]) @ wh_h_frf.conj().T
    rx_term = (w_bb.conj().T * np.asarray(c_eps_rx)[None, :]) @ w_bb
    awgn = noise_var * (w.conj().T @ w)
    out = tx_term + rx_term + awgn
    return 0.5 * (out + out.conj().T)


def spectral_efficiency(
    h,
    f_rf, delta_tx, f_bb,
    w_rf, delta_rx, w_bb,
    c_eps_tx, c_eps_rx,
    noise_var: float,
    n_streams: int,
) -> float:
    """Achievable rate log2 |I + R_eta^{-1} (W^H H F)(W^H H F)^H / n_streams|.

    Evaluated as a difference of Hermitian log-determinants, which avoids
    forming R_eta^{-1} when the covariance is ill conditioned.
    """
    cov = r_eta(w_rf, delta_rx, w_bb, f_rf, c_eps_tx, c_eps_rx, h, noise_var)
    f = _combined(f_rf, delta_tx, f_bb)
    w = _combined(w_rf, delta_rx, w_bb)
    g = w.conj().T @ h @ f
    signal = g @ g.conj().T
    se = (_logdet_hermitian(cov + signal / n_streams) - _logdet_hermitian(cov)) / np.log(2.0)
    return float(max(se, 0.0))


def r_eta_condition(w_rf, delta_rx, w_bb, f_rf, c_eps_tx, c_eps_rx, h, noise_var: float) -> float:
    """Condition number of the combined noise covariance (diagnostic)."""
    cov = r_eta(w_rf, delta_rx, w_bb, f_rf, c_eps_tx, c_eps_rx, h, noise_var)
    w = np.linalg.eigvalsh(cov)
    return float(w[-1] / w[0])


def mutual_information(
    h, f_rf, delta_tx, f_bb, c_eps_tx, noise_var: float, n_streams: int
) -> float:
    """TX-side rate log2 |I + Q^{-1} (H F)(H F)^H / n_streams| where Q is the
    receive-side covariance of transmit quantization noise plus AWGN:
    Q = (H F_rf) diag(c_eps_tx) (H F_rf)^H + noise_var I. The quantization
    term rides through the channel exactly as in the combined-noise
    covariance; without H the two noise contributions live in different
    spaces whenever the arrays differ in size."""
    n_rx = h.shape[0]
    hf = h @ f_rf
    q = (hf * np.asarray(c_eps_tx)[None, :]) @ hf.conj().T + noise_var * np.eye(n_rx)
    q = 0.5 * (q + q.conj().T)
    t = h @ _combined(f_rf, delta_tx, f_bb)
    signal = t @ t.conj().T
    mi = (_logdet_hermitian(q + signal / n_streams) - _logdet_hermitian(q)) / np.log(2.0)
    return float(max(mi, 0.0))


def energy_efficiency(se: float, p_tx: float, p_rx: float) -> float:
    """Rate per consumed watt, bits/Hz/J."""
    total = p_tx + p_rx
    if total <= 0.0:
        raise ValueError("total power must be > 0")
    return float(se / total)
