"""Additive quantization noise model: bit <-> distortion conversions and noise covariances."""

from dataclasses import dataclass

import numpy as np

# Multiplicative constant of the uniform-quantizer distortion law.
QUANT_COEFF = np.pi * np.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class BitRange:
    """Admissible converter resolutions, in bits, and the matching distortion bounds."""

    min_bits: int = 1
    max_bits: int = 8

    def __post_init__(self):
        if self.min_bits < 1:
            raise ValueError("min_bits must be >= 1")
        if self.max_bits < self.min_bits:
            raise ValueError("max_bits must be >= min_bits")

    @property
    def delta_min(self) -> float:
        return float(delta_of_bits(self.min_bits))

    @property
    def delta_max(self) -> float:
        return float(delta_of_bits(self.max_bits))


def delta_of_bits(bits):
    """Distortion parameter delta = sqrt(1 - (pi*sqrt(3)/2) * 2^(-2b)).

    Strictly increasing in b; valid for b >= 1 (below ~0.72 bits the radicand
    goes negative, and sub-1-bit converters are not modeled).
    """
    b = np.asarray(bits, dtype=float)
    if np.any(b < 1.0):
        raise ValueError("bit resolution must be >= 1")
    out = np.sqrt(1.0 - QUANT_COEFF * np.exp2(-2.0 * b))
    return out if out.ndim else float(out)


def bits_of_delta(delta, bit_range: BitRange = BitRange()):
    """Exact inverse of delta_of_bits: b = -0.5 * log2(2*(1-d^2)/(pi*sqrt(3))).

    Inputs must lie in [delta(min_bits), delta(max_bits)] of the given range
    (tiny slack for float round trips).
    """
    d = np.asarray(delta, dtype=float)
    lo = bit_range.delta_min
    hi = bit_range.delta_max
    if np.any(d < lo - 1e-12) or np.any(d > hi + 1e-12):
        raise ValueError(
            f"delta outside admissible range [{lo:.6f}, {hi:.6f}] for "
            f"bits in [{bit_range.min_bits}, {bit_range.max_bits}]"
        )
    d = np.clip(d, lo, hi)
    out = -0.5 * np.log2((1.0 - d * d) / QUANT_COEFF)
    return out if out.ndim else float(out)


def quantize_bits(delta, bit_range: BitRange = BitRange()) -> np.ndarray:
    """Round continuous distortion values to the nearest integer bit count.

    Ties at .5 round half-up; results are clamped to the bit range.
    """
    b = np.atleast_1d(np.asarray(bits_of_delta(delta, bit_range), dtype=float))
    # +1e-9 keeps exact .5 ties (and their float-noise neighbourhood) on the up side
    rounded = np.floor(b + 0.5 + 1e-9).astype(int)
    return np.clip(rounded, bit_range.min_bits, bit_range.max_bits)


def noise_cov(bits) -> np.ndarray:
    """Diagonal of the additive-quantization-noise covariance for given bit counts.

    Entry i equals (1 - (pi*sqrt(3)/2) 2^(-2 b_i)) * ((pi*sqrt(3)/2) 2^(-2 b_i)),
    i.e. delta_i^2 * (1 - delta_i^2); always in [0, 0.25].
    """
    b = np.atleast_1d(np.asarray(bits, dtype=float))
    if np.any(b < 1.0):
        raise ValueError("bit resolution must be >= 1")
    x = QUANT_COEFF * np.exp2(-2.0 * b)
    return (1.0 - x) * x
