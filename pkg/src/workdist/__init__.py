"""Work statistics of a driven closed system read out through a quantum
detector: exact characteristic functions and quasiprobabilities (phase
record), Gaussian-pointer position records, and the circuit-QED
realization with Husimi phase-space observables.
"""

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "AngularDistribution", "DispersiveParams", "HusimiGrid", "PhaseGrid",
    "angular_distribution", "angular_distribution_numeric",
    "cavity_state_after_protocol", "coherent_amplitudes",
    "cqed_characteristic_function", "husimi_closed_form", "husimi_q",
    "husimi_q_points", "interference_predicate",
    "WorkQuasiDistribution",
    "SpectralPair", "eig_hermitian", "erf_complex", "fft_radix2",
    "unitary_from_bloch",
    "GaussianPointer", "PointerDistribution", "delta_pointer_limit",
    "interference_overlap_scale", "pointer_distribution",
    "ExponentialSum", "characteristic_function", "evaluate",
    "moments_analytic", "negativity", "quasiprobability", "reconstruct_fft",
    "InitialState", "SystemScenario", "TransitionTable",
    "classical_tmp_distribution", "dephase", "initial_state",
    "qubit_scenario", "scenario", "state_from_bloch", "transition_table",
]

from ._kernels import BACKEND as KERNEL_BACKEND
from .cqed import (
    AngularDistribution,
    DispersiveParams,
    HusimiGrid,
    PhaseGrid,
    angular_distribution,
    angular_distribution_numeric,
    cavity_state_after_protocol,
    coherent_amplitudes,
    cqed_characteristic_function,
    husimi_closed_form,
    husimi_q,
    husimi_q_points,
    interference_predicate,
)
from .distributions import WorkQuasiDistribution
from .numerics import (
    SpectralPair,
    eig_hermitian,
    erf_complex,
    fft_radix2,
    unitary_from_bloch,
)
from .pointer import (
    GaussianPointer,
    PointerDistribution,
    delta_pointer_limit,
    interference_overlap_scale,
    pointer_distribution,
)
from .scheme_a import (
    ExponentialSum,
    characteristic_function,
    evaluate,
    moments_analytic,
    negativity,
    quasiprobability,
    reconstruct_fft,
)
from .system import (
    InitialState,
    SystemScenario,
    TransitionTable,
    classical_tmp_distribution,
    dephase,
    initial_state,
    qubit_scenario,
    scenario,
    state_from_bloch,
    transition_table,
)
