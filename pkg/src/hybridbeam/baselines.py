"""Comparison schemes: fully digital full-resolution beamforming, hybrid
beamforming with fixed converter resolutions, and the exhaustive per-converter
bit search used as the energy-efficiency upper bound."""

import itertools

import numpy as np

from .admm import AdmmConfig, design_rx, design_tx, digital_combiner, effective_channel, fixed_resolution_config
from .channel import ChannelRealization, digital_precoder
from .designer import LinkDesign, _seed_list, design_link, evaluate_hybrid_link
from .metrics import LinkMetrics, energy_efficiency, mutual_information, r_eta_condition, spectral_efficiency
from .power import PowerModel, rx_power, rx_power_digital, tx_power, tx_power_digital
from .quant import BitRange, delta_of_bits, noise_cov


def digital_fullbit(
    ch: ChannelRealization,
    n_streams: int,
    noise_var: float,
    model: PowerModel,
    bit_range: BitRange = BitRange(),
) -> LinkDesign:
    """Fully digital beamforming with one full-resolution converter per antenna.

    The beamformers equal the digital water-filling solutions exactly (the
    baseband factor absorbs the distortion scaling); quantization enters only
    through the per-antenna noise covariances and the converter power, which
    is counted per antenna with no phase-shifter network.

    Dead streams (zero water-filled combiner power) are dropped from the rate
    evaluation; they carry no signal and would make the exact combiner
    singular. The stream normalization keeps the full n_streams.
    """
    n_rx, n_tx = ch.h.shape
    b = bit_range.max_bits
    d = float(delta_of_bits(b))

    f_dbf = digital_precoder(ch, n_streams, noise_var)
    eff = effective_channel(ch.h, f_dbf)
    w_dbf = digital_combiner(eff, n_streams, noise_var)
    active = np.linalg.norm(w_dbf, axis=0) > 0.0
    w_act = w_dbf[:, active]

    bits_tx = np.full(n_tx, b)
    bits_rx = np.full(n_rx, b)
    c_t = noise_cov(bits_tx)
    c_r = noise_cov(bits_rx)
    f_rf = np.eye(n_tx, dtype=complex)
    w_rf = np.eye(n_rx, dtype=complex)
    delta_t = np.full(n_tx, d)
    delta_r = np.full(n_rx, d)
    f_bb = f_dbf / d
    w_bb = w_act / d

    se = spectral_efficiency(
        ch.h, f_rf, delta_t, f_bb, w_rf, delta_r, w_bb, c_t, c_r, noise_var, n_streams
    )
    p_t = tx_power_digital(f_dbf, bits_tx, model)
    p_r = rx_power_digital(bits_rx, n_rx, model)
    cond = r_eta_condition(w_rf, delta_r, w_bb, f_rf, c_t, c_r, ch.h, noise_var)
    metrics = LinkMetrics(
        se=se, p_tx=p_t, p_rx=p_r, ee=energy_efficiency(se, p_t, p_r), r_eta_cond=cond
    )
    return LinkDesign(metrics=metrics, bits_tx=bits_tx, bits_rx=bits_rx, iters_tx=0, iters_rx=0)


def hybrid_fixedbit(
    ch: ChannelRealization,
    fixed_bits: int,
    n_streams: int,
    l_tx: int,
    l_rx: int,
    noise_var: float,
    cfg: AdmmConfig,
    model: PowerModel,
    seed,
) -> LinkDesign:
    """Hybrid beamforming with every DAC/ADC pinned to one resolution.

    The factor design runs the same alternating updates with the distortion
    step skipped; the trade-off weights are irrelevant with the diagonal fixed.
    """
    if not (cfg.bit_range.min_bits <= fixed_bits <= cfg.bit_range.max_bits):
        raise ValueError("fixed_bits outside the configured bit range")
    return design_link(
        ch, n_streams, l_tx, l_rx, noise_var,
        gamma_tx=0.0, gamma_rx=0.0,
        cfg=cfg, model=model, seed=seed, frozen_bits=fixed_bits,
    )


def brute_force(
    ch: ChannelRealization,
    n_streams: int,
    l_tx: int,
    l_rx: int,
    noise_var: float,
    cfg: AdmmConfig,
    model: PowerModel,
    seed,
    design_iters: int = 10,
    max_combos: int = 1_000_000,
) -> LinkDesign:
    """Exhaustive search over per-converter bit combinations, decoupled into a
    transmit stage and a receive stage.

    The transmit stage scores each DAC combination by its channel mutual
    information over transmit power plus a nominal receiver power (bottom of
    the bit range); the receive stage then searches ADC combinations on the
    effective channel of the winning precoder, maximizing the realized energy
    efficiency. Every combination gets its own factor design with the
    distortion diagonal frozen, from identical random initial values.
    """
    rng = cfg.bit_range
    levels = list(range(rng.min_bits, rng.max_bits + 1))
    combos_tx = len(levels) ** l_tx
    combos_rx = len(levels) ** l_rx
    if combos_tx > max_combos or combos_rx > max_combos:
        raise ValueError(
            f"search space too large: {combos_tx} TX / {combos_rx} RX combinations "
            f"exceed the budget of {max_combos}"
        )

    design_cfg = fixed_resolution_config(cfg, design_iters)
    n_rx = ch.h.shape[0]
    f_dbf = digital_precoder(ch, n_streams, noise_var)
    p_rx_nominal = rx_power(np.full(l_rx, rng.min_bits), n_rx, l_rx, model)

    best_tx = None
    for combo in itertools.product(levels, repeat=l_tx):
        bits_t = np.array(combo)
        frozen = np.asarray(delta_of_bits(bits_t), dtype=float)
        tx = design_tx(
            f_dbf, l_tx, design_cfg, np.random.default_rng(_seed_list(seed, 0)),
            0.0, model, frozen_delta=frozen,
        )
        mi = mutual_information(ch.h, tx.rf, tx.delta, tx.bb, noise_cov(bits_t), noise_var, n_streams)
        p_t = tx_power(tx.rf, tx.delta, tx.bb, bits_t, model)
        score = mi / (p_t + p_rx_nominal)
        if best_tx is None or score > best_tx[0]:
            best_tx = (score, bits_t, tx, p_t)

    _, bits_t, tx, p_t = best_tx
    eff = effective_channel(ch.h, tx.product)
    w_dbf = digital_combiner(eff, n_streams, noise_var)
    c_t = noise_cov(bits_t)

    best_rx = None
    for combo in itertools.product(levels, repeat=l_rx):
        bits_r = np.array(combo)
        frozen = np.asarray(delta_of_bits(bits_r), dtype=float)
        rx = design_rx(
            w_dbf, l_rx, design_cfg, np.random.default_rng(_seed_list(seed, 1)),
            0.0, model, frozen_delta=frozen,
        )
        se = spectral_efficiency(
            ch.h, tx.rf, tx.delta, tx.bb, rx.rf, rx.delta, rx.bb,
            c_t, noise_cov(bits_r), noise_var, n_streams,
        )
        p_r = rx_power(bits_r, n_rx, l_rx, model)
        ee = energy_efficiency(se, p_t, p_r)
        if best_rx is None or ee > best_rx[0]:
            best_rx = (ee, bits_r, rx)

    _, bits_r, rx = best_rx
    metrics = evaluate_hybrid_link(ch, tx, rx, noise_var, n_streams, model)
    return LinkDesign(
        metrics=metrics,
        bits_tx=bits_t,
        bits_rx=bits_r,
        iters_tx=tx.iterations,
        iters_rx=rx.iterations,
    )
