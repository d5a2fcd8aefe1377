"""End-to-end link design: digital targets, both ADMM factorizations, and the
final rate/power/efficiency evaluation with quantized resolutions."""

from dataclasses import dataclass

import numpy as np

from .admm import AdmmConfig, FactorizationResult, design_rx, design_tx, digital_combiner, effective_channel
from .channel import ChannelRealization, digital_precoder
from .metrics import LinkMetrics, energy_efficiency, r_eta_condition, spectral_efficiency
from .power import PowerModel, rx_power, tx_power
from .quant import delta_of_bits, noise_cov


@dataclass
class LinkDesign:
    """Result of one link design: metrics plus the selected converter bits."""

    metrics: LinkMetrics
    bits_tx: np.ndarray
    bits_rx: np.ndarray
    iters_tx: int
    iters_rx: int
    trace_tx: np.ndarray | None = None
    trace_rx: np.ndarray | None = None


def _seed_list(seed, *extra) -> list:
    parts = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    return parts + list(extra)


def evaluate_hybrid_link(
    ch: ChannelRealization,
    tx: FactorizationResult,
    rx: FactorizationResult,
    noise_var: float,
    n_streams: int,
    model: PowerModel,
) -> LinkMetrics:
    """Rate, powers and efficiency of a designed hybrid link at its integer bits."""
    c_t = noise_cov(tx.bits)
    c_r = noise_cov(rx.bits)
    se = spectral_efficiency(
        ch.h, tx.rf, tx.delta, tx.bb, rx.rf, rx.delta, rx.bb,
        c_t, c_r, noise_var, n_streams,
    )
    p_t = tx_power(tx.rf, tx.delta, tx.bb, tx.bits, model)
    n_rx, l_rx = rx.rf.shape
    p_r = rx_power(rx.bits, n_rx, l_rx, model)
    cond = r_eta_condition(rx.rf, rx.delta, rx.bb, tx.rf, c_t, c_r, ch.h, noise_var)
    return LinkMetrics(
        se=se, p_tx=p_t, p_rx=p_r, ee=energy_efficiency(se, p_t, p_r), r_eta_cond=cond
    )


def design_link(
    ch: ChannelRealization,
    n_streams: int,
    l_tx: int,
    l_rx: int,
    noise_var: float,
    gamma_tx: float,
    gamma_rx: float,
    cfg: AdmmConfig,
    model: PowerModel,
    seed,
    frozen_bits: int | None = None,
) -> LinkDesign:
    """Design the transmit side, then the receive side on the resulting
    effective channel, and evaluate the link.

    frozen_bits pins every DAC/ADC to one resolution (the fixed-bit baselines);
    otherwise the distortion diagonals are optimized and rounded to integers.
    """
    f_dbf = digital_precoder(ch, n_streams, noise_var)
    frozen_tx = frozen_rx = None
    if frozen_bits is not None:
        frozen_tx = np.full(l_tx, delta_of_bits(frozen_bits))
        frozen_rx = np.full(l_rx, delta_of_bits(frozen_bits))

    rng_tx = np.random.default_rng(_seed_list(seed, 0))
    tx = design_tx(f_dbf, l_tx, cfg, rng_tx, gamma_tx, model, frozen_delta=frozen_tx)

    eff = effective_channel(ch.h, tx.product)
    w_dbf = digital_combiner(eff, n_streams, noise_var)
    rng_rx = np.random.default_rng(_seed_list(seed, 1))
    rx = design_rx(w_dbf, l_rx, cfg, rng_rx, gamma_rx, model, frozen_delta=frozen_rx)

    metrics = evaluate_hybrid_link(ch, tx, rx, noise_var, n_streams, model)
    return LinkDesign(
        metrics=metrics,
        bits_tx=tx.bits,
        bits_rx=rx.bits,
        iters_tx=tx.iterations,
        iters_rx=rx.iterations,
        trace_tx=tx.trace,
        trace_rx=rx.trace,
    )
