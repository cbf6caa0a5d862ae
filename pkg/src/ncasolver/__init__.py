"""Real-time solver for a quantum impurity with mixed Markovian and
non-Markovian dissipation, via the non-crossing resummation of the
hybridization expansion of the reduced evolution superoperator."""

from .analysis import (
    SpectrumSeries,
    evolve_state,
    occupation,
    occupation_series,
    positivity_monitor,
    propagator_spectrum,
    steady_state_scan,
)
from .diagrams import (
    BareTermConfig,
    bare_first_order,
    compare_first_order,
    first_dyson_iterate,
    first_order_propagator,
)
from .errors import (
    ConfigError,
    DimensionError,
    DivergenceError,
    DomainError,
    GridError,
    ModelError,
    NumericsError,
    ParseError,
    SolverError,
    StateError,
)
from .hybridization import (
    FlatBandParams,
    HybridizationTable,
    contour_component,
    flat_band_greater,
    flat_band_lesser,
    load_tabulated,
    sample_flat_band,
    save_tabulated,
)
from .liouville import (
    MINUS,
    PLUS,
    LindbladModel,
    build_liouvillian,
    contour_superop,
    left_mult,
    matrix_exp,
    right_mult,
    trace_functional,
    trace_row_error,
    unvectorize,
    vectorize,
)
from .nca import (
    NcaProblem,
    PropagatorHistory,
    dyson_residual,
    nca_self_energy,
    solve_dyson,
    trapezoid_convolution,
)

__version__ = "0.1.0"
