"""Simulator and analysis toolkit for 1D coined quantum walks with
site-dependent phase functions: quasi-periodic dynamics, quasi-energy band
structure, and the decoherence-driven quantum-to-classical transition."""

from .core import (
    CoinBias,
    DecoherenceConfig,
    DensityState,
    Harmonic,
    Line,
    PhaseProfile,
    PositionDistribution,
    PureState,
    Ring,
    Table,
    Topology,
    Zero,
    dephasing_equivalent_gamma,
    distribution_of,
    make_initial,
    make_symmetric_initial,
    phase_at,
)
from .evolution import (
    TrajectoryResult,
    WalkParams,
    apply_coin,
    apply_position_dephasing,
    apply_shift,
    classical_walk_oracle,
    coin_matrix,
    evolve_density,
    evolve_pure,
    evolve_trajectories,
    pure_distributions,
    step,
    step_operator_matrix,
)
from .metrics import (
    TimeSeries,
    detect_quasi_period,
    fit_spreading_exponent,
    l1_distance,
    normalized_variance,
    recurrence,
    variance,
)
from .spectral import (
    BandInfo,
    BandReport,
    SpectralLine,
    Spectrum,
    band_analysis,
    bloch_blocks,
    build_step_unitary,
    closed_form_comparison,
    closed_form_lambda,
    identity_proximity,
    quasi_energies,
)

__version__ = "0.1.0"
