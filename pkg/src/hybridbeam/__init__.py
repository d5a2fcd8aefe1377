"""Energy-efficient mmWave MIMO link design: joint per-converter bit allocation
and hybrid beamforming via ADMM matrix factorization, with the simulation
harness that reproduces the efficiency/rate trade-off studies."""

from .admm import (
    AdmmConfig,
    EffectiveChannel,
    FactorizationResult,
    design_rx,
    design_tx,
    digital_combiner,
    effective_channel,
    project_unit_modulus,
)
from .baselines import brute_force, digital_fullbit, hybrid_fixedbit
from .boxsolve import BoxProblem, box_objective, reduce_problem, solve_box
from .channel import (
    ArrayGeometry,
    ChannelRealization,
    ClusterParams,
    array_response,
    digital_precoder,
    draw_channel,
    waterfill,
)
from .designer import LinkDesign, design_link
from .metrics import (
    LinkMetrics,
    energy_efficiency,
    mutual_information,
    r_eta,
    spectral_efficiency,
)
from .power import (
    PowerModel,
    converter_power,
    converter_power_from_delta,
    rx_power,
    tx_power,
)
from .quant import BitRange, bits_of_delta, delta_of_bits, noise_cov, quantize_bits
from .sim import (
    ExperimentConfig,
    SweepPoint,
    TrialRecord,
    aggregate,
    noise_variance,
    run_experiment,
    run_point,
)

__version__ = "0.1.0"

__all__ = [
    "AdmmConfig",
    "ArrayGeometry",
    "BitRange",
    "BoxProblem",
    "ChannelRealization",
    "ClusterParams",
    "EffectiveChannel",
    "ExperimentConfig",
    "FactorizationResult",
    "LinkDesign",
    "LinkMetrics",
    "PowerModel",
    "SweepPoint",
    "TrialRecord",
    "aggregate",
    "array_response",
    "bits_of_delta",
    "box_objective",
    "brute_force",
    "converter_power",
    "converter_power_from_delta",
    "delta_of_bits",
    "design_link",
    "design_rx",
    "design_tx",
    "digital_combiner",
    "digital_fullbit",
    "digital_precoder",
    "draw_channel",
    "effective_channel",
    "energy_efficiency",
    "hybrid_fixedbit",
    "mutual_information",
    "noise_cov",
    "noise_variance",
    "project_unit_modulus",
    "quantize_bits",
    "r_eta",
    "reduce_problem",
    "run_experiment",
    "run_point",
    "rx_power",
    "solve_box",
    "spectral_efficiency",
    "tx_power",
    "waterfill",
]
