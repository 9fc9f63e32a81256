"""Spin-pair correlation toolkit: Bloch dynamics, decoherence channels,
discord-family quantifiers and black-box phase metrology, with numba-
accelerated scan kernels behind a pure-numpy fallback (SPINCORR_BACKEND).
"""

from .backend import BackendError, active_backend, set_backend
from .bloch import (
    BlochParams,
    Magnetization,
    SingularRelaxationError,
    SpinPulse,
    average_work,
    classical_work,
    closed_form_report,
    effective_field_operator,
    evolve,
    no_relaxation,
    pulse_state,
    quantum_work,
    relaxation_operator,
    sigma_z_expect,
    stationary,
)
from .channels import (
    ChannelError,
    GadParams,
    KrausChannel,
    PdParams,
    apply,
    gad_channel,
    gpd_channel,
    identity_channel,
    local_apply,
    pd_channel,
    tensor_channel,
)
from .correlations import (
    CorrelationReport,
    GeometricResult,
    MeasurementBasis,
    conditional_shannon,
    entropic_discord,
    geometric_classical,
    geometric_discord,
    global_quantum_discord,
    joint_shannon,
    luo_discord,
    measured_state,
    mutual_shannon,
    quantum_mutual_information,
    shannon,
)
from .dynamics import (
    ChangePoint,
    DynamicsClass,
    FreezeReport,
    Trajectory,
    classify_dynamics,
    default_times,
    detect_sudden_changes,
    effective_gamma,
    evolve_bd_pd,
    evolve_general,
    freezing_time,
    gqd_parity_scan,
    verify_freezing,
)
from .metrology import (
    BlackBoxRow,
    EstimationOutcome,
    IpOracleResult,
    IpResult,
    PathologicalSetting,
    SldResult,
    apply_phase,
    blackbox_suite,
    estimate,
    h_setting,
    interferometric_power,
    ip_oracle,
    qfi,
    sld,
)
from .qmatrix import (
    distance,
    fidelity,
    matrix_exponential,
    partial_trace,
    partial_transpose,
    tensor,
    trace_norm,
    unitary_of,
    von_neumann_entropy,
)
from .states import (
    CorrelationTriple,
    DensityMatrix,
    PeresResult,
    UnphysicalStateError,
    bell,
    bell_diagonal,
    correlation_triple,
    correlation_triple_n,
    direct_measure_ci,
    freezing_family,
    is_bell_diagonal,
    m3n_state,
    peres_entangled,
    probe_state,
    pseudopure,
    purity,
)

__version__ = "0.1.0"
