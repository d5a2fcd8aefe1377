"""Transceiver power-consumption model for the hybrid and fully digital architectures."""

from dataclasses import dataclass

import numpy as np

from .quant import QUANT_COEFF


@dataclass(frozen=True)
class PowerModel:
    """Circuit power constants (W). Converter power scales as per_bit * 2^bits."""

    p_dac: float = 0.1
    p_adc: float = 0.1
    p_circuit_tx: float = 10.0
    p_circuit_rx: float = 10.0
    p_shifter_tx: float = 0.01
    p_shifter_rx: float = 0.01
    p_antenna_tx: float = 0.1
    p_antenna_rx: float = 0.1

    def __post_init__(self):
        for name, value in vars(self).items():
            if value <= 0.0:
                raise ValueError(f"power constant {name} must be > 0")


def converter_power(bits, per_bit_power: float) -> float:
    """Total DAC/ADC power: per_bit_power * sum_i 2^(b_i). Accepts an empty vector."""
    b = np.atleast_1d(np.asarray(bits, dtype=float))
    if b.size == 0:
        return 0.0
    return float(per_bit_power * np.sum(np.exp2(b)))


def converter_power_from_delta(delta, per_bit_power: float) -> float:
    """Converter power evaluated from distortion values via 2^b = sqrt(pi*sqrt(3) / (2(1-d^2)))."""
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    if d.size == 0:
        return 0.0
    if np.any(d >= 1.0):
        raise ValueError("distortion parameter must be < 1")
    return float(per_bit_power * np.sum(np.sqrt(QUANT_COEFF / (1.0 - d * d))))


def tx_power(f_rf, delta_tx, f_bb, bits, model: PowerModel) -> float:
    """Hybrid transmitter power: radiated + converters + antennas + phase shifters + circuit.

    Radiated power is tr(F F^H) with F = F_rf diag(delta_tx) F_bb.
    """
    n_tx, l_tx = f_rf.shape
    f = f_rf @ (np.asarray(delta_tx)[:, None] * f_bb)
    radiated = float(np.sum(np.abs(f) ** 2))
    return (
        radiated
        + converter_power(bits, model.p_dac)
        + n_tx * model.p_antenna_tx
        + n_tx * l_tx * model.p_shifter_tx
        + model.p_circuit_tx
    )


def rx_power(bits, n_rx: int, l_rx: int, model: PowerModel) -> float:
    """Hybrid receiver power: converters + antennas + phase shifters + circuit."""
    if n_rx < 1 or l_rx < 1:
        raise ValueError("antenna and chain counts must be >= 1")
    return (
        converter_power(bits, model.p_adc)
        + n_rx * model.p_antenna_rx
        + n_rx * l_rx * model.p_shifter_rx
        + model.p_circuit_rx
    )


def tx_power_digital(f, bits, model: PowerModel) -> float:
    """Fully digital transmitter power: one DAC per antenna, no phase-shifter network."""
    n_tx = f.shape[0]
    radiated = float(np.sum(np.abs(f) ** 2))
    return (
        radiated
        + converter_power(bits, model.p_dac)
        + n_tx * model.p_antenna_tx
        + model.p_circuit_tx
    )


def rx_power_digital(bits, n_rx: int, model: PowerModel) -> float:
    """Fully digital receiver power: one ADC per antenna, no phase-shifter network."""
    if n_rx < 1:
        raise ValueError("antenna count must be >= 1")
    return (
        converter_power(bits, model.p_adc)
        + n_rx * model.p_antenna_rx
        + model.p_circuit_rx
    )
