"""Exact-diagonalization laboratory for GHZ-state equilibration studies.

Dense spin-1/2 kernels, a chaotic extended Heisenberg-XYZ chain builder,
unitary evolution / dephasing, distinguishability functionals maximized over
measurement directions, macroscopic-quantumness indices (p and q), and a
random-eigenbasis statistical model, all orchestrated by a sweep CLI that
persists results as CSV.
"""

from .hilbert import (
    Direction,
    apply_site_operator,
    expectation,
    ghz_density,
    ghz_state,
    mixture_state,
    pauli_direction,
)
from .hamiltonian import (
    FEATURED_SET_A,
    FEATURED_SET_B,
    Couplings,
    build_hamiltonian,
    parameter_grid,
)
from .spectral import (
    EigenDecomposition,
    SpectrumDiagnostics,
    dephase,
    diagonalize,
    effective_dimension,
    evolve,
    purity,
    spectrum_diagnostics,
)
from .observables import (
    DirectionSearchResult,
    DirectionSearchSettings,
    ObservableKind,
    build_observable,
    coherence_element_closed_form,
    delta_expectation,
    maximize_over_direction,
)
from .equilibration import (
    SignalStatistics,
    a_tilde,
    fluctuation_bound_check,
    infinite_time_stats,
    signal_time_series,
    time_averaged_square,
)
from .macroscopicity import (
    ScalingFit,
    double_commutator_norm,
    fit_power_law,
    index_p,
    index_q,
    max_variance,
    q_grid_experiment,
)
from .eth_model import (
    RandomBasisSample,
    eth_scaling_experiment,
    overlap_statistics,
    sample_random_basis,
)

__version__ = "0.1.0"

__all__ = [
    "Couplings",
    "Direction",
    "DirectionSearchResult",
    "DirectionSearchSettings",
    "EigenDecomposition",
    "FEATURED_SET_A",
    "FEATURED_SET_B",
    "ObservableKind",
    "RandomBasisSample",
    "ScalingFit",
    "SignalStatistics",
    "SpectrumDiagnostics",
    "a_tilde",
    "apply_site_operator",
    "build_hamiltonian",
    "build_observable",
    "coherence_element_closed_form",
    "delta_expectation",
    "dephase",
    "diagonalize",
    "double_commutator_norm",
    "effective_dimension",
    "eth_scaling_experiment",
    "evolve",
    "expectation",
    "fit_power_law",
    "fluctuation_bound_check",
    "ghz_density",
    "ghz_state",
    "index_p",
    "index_q",
    "infinite_time_stats",
    "max_variance",
    "maximize_over_direction",
    "mixture_state",
    "overlap_statistics",
    "parameter_grid",
    "pauli_direction",
    "purity",
    "q_grid_experiment",
    "sample_random_basis",
    "signal_time_series",
    "spectrum_diagnostics",
    "time_averaged_square",
    "__version__",
]
