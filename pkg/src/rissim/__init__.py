"""Simulator for a 2-bit transmissive-panel mmWave link.

Covers panel geometry, free-space channel and element behavior, phase
codebook synthesis and quantization, array-theory radiation patterns, and
end-to-end link budgets with SNR-to-rate mapping.
"""

from .beams import (
    BeamSpec,
    exhaustive_oracle,
    optimal_phase,
    optimal_phases,
    quantization_loss,
    resolve_model,
    sweep_phase_offset,
    synthesize_codebook,
)
from .channel import (
    GainProfile,
    channel_coefficient,
    coherent_power_bound,
    cos_power_pattern,
    exponent_from_gain,
    feed_illumination,
    feed_illuminations,
    received_power,
    unity_gain_profile,
)
from .codebook import (
    RISConfiguration,
    bitstream_to_hex,
    decode_bias_bitstream,
    encode_bias_bitstream,
    pack_bitstream,
    quantize_phase,
    quantize_phases,
    unpack_bitstream,
)
from .elements import (
    ElementState,
    ElementStateTable,
    default_element_table,
    state_coefficient,
    state_coefficients,
)
from .errors import (
    ConfigError,
    DegenerateGeometryError,
    InfeasibleTargetError,
    MetricUndefinedError,
    ResolutionError,
    RisSimError,
    SearchSpaceError,
    UnsupportedConfigurationError,
)
from .geometry import (
    ArrayGeometry,
    Pose,
    cartesian_to_spherical,
    element_position,
    exact_distance,
    exact_distances,
    fraunhofer_distance,
    planar_distance,
    planar_distances,
    spherical_to_cartesian,
)
from .link import (
    LinkResult,
    LinkScenario,
    MCSRow,
    MCSTable,
    Obstacle,
    array_gain,
    evaluate_scenario,
    noise_power,
    required_transmit_power,
)
from .patterns import (
    PatternMetrics,
    RadiationPattern,
    aperture_efficiency,
    cut_grid,
    directivity_and_gain,
    hemisphere_grid,
    pattern_metrics,
    pattern_to_csv,
    principal_cut,
    radiation_pattern,
    scan_loss,
)
from .scenario_io import (
    ScenarioBundle,
    bundled_scenario_path,
    default_mcs_table,
    load_bundled_scenarios,
    load_scenario_bundle,
)
from .units import SPEED_OF_LIGHT, wavelength

__version__ = "0.1.0"
