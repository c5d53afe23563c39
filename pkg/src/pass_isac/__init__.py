"""Pinching-antenna system design and evaluation for joint sensing and
communication over a pair of dielectric waveguides."""

from .baseline import AnalogWeights, baseline_design, baseline_layout, beamform_gain
from .downlink import (
    PartitionResult,
    design_downlink,
    maximize_scalar,
    partition_objective_F,
    phase_factor,
    place_cluster,
    rx_design_dl,
    tx_design_dl,
)
from .experiments import (
    ExperimentSpec,
    load_config,
    run_experiment,
    run_validation,
    sample_scene,
)
from .geometry import (
    ConfigError,
    FeasibilityError,
    GeometryError,
    LayoutError,
    PassIsacError,
    PinchingLayout,
    Scene,
    SystemConfig,
    Vec3,
    WaveguideRole,
    aggregate_gain,
    cascade_gain,
    distance_to_element,
    element_gain_rx,
    element_gain_tx,
    project_feasible,
    uniform_layout,
)
from .metrics import (
    IsacWeights,
    MetricReport,
    SmiEstimate,
    dl_smi_bound,
    dl_spectral_efficiency,
    mc_smi_estimate,
    ul_smi_bound,
    ul_spectral_efficiency,
    weighted_objective,
)
from .solution import DesignSolution
from .uplink import (
    BcdTrace,
    QSolution,
    design_uplink,
    e_hat,
    q_quadratic_root,
    q_star,
    recover_sensing_power,
    rx_design_ul,
    s_hat_ul,
    tx_design_ul,
)

__version__ = "0.1.0"
