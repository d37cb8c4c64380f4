"""Noisy canonical phase estimation on stabilizer probes.

Simulates and compares three estimation pipelines under per-qubit Pauli
noise: uncorrected measurement, syndrome-recovery assisted measurement,
and virtual purification of the noisy state, all inverted through the
ideal response curve.
"""

from .estimation import (
    NOISY,
    QEC,
    VP2,
    VP3,
    BiasReport,
    ResponseCurve,
    ScalingFit,
    Scheme,
    build_response_curve,
    dominant_eigpair,
    expectation,
    ideal_mu,
    invert_mu,
    mitigated_expectation,
    scaling_exponent,
    theoretical_bias,
    theoretical_stat_error,
)
from .linalg import EigenDecomposition, apply_pauli, hermitian_eig, matmul, matrix_power
from .noise import (
    NoiseSpec,
    apply_channel,
    calibrate_strength,
    custom_noise,
    dephasing,
    depolarizing,
    noise_from_config,
    noisy_state,
    signal_unitary,
)
from .pauli import PauliString, StabilizerGroup
from .probes import (
    BUILTIN_PROBE_NAMES,
    Probe,
    builtin_probe,
    commuting_subgroup,
    load_probe,
    stabilizer_state_vector,
    variance_of_hamiltonian,
)
from .qec import (
    DecoderTable,
    LogicalProbe,
    StabilizerCode,
    build_code,
    build_decoder,
    check_c2_c3_tradeoff,
    encode_logical,
    first_order_qec_state,
    qec_expectation,
    recover,
    syndrome,
)
from .sampling import ExperimentRecord, ShotPlan, run_experiment, sample_mean, vp_sample

__version__ = "0.1.0"
