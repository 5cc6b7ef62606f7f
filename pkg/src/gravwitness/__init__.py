"""Gravitationally induced entanglement between two path-superposed masses.

Phase shifts from trajectory geometry, the population-preserving channel
they define, negativity and l1-coherence of the evolved state, and the
entangling-map witness built from the channel's partial transpose.
"""

__version__ = "0.1.0"

from .channels import (
    CoefficientMatrix,
    DampingRates,
    apply_channel,
    damped_gravity_channel,
    gravity_channel,
    is_separable_channel,
    sample_separable_channel,
    validate_channel,
)
from .entanglement import (
    NegativityResult,
    negativity_closed_form,
    negativity_damped_closed_form,
    negativity_numeric,
)
from .linalg import hermitian_eigen, kron, partial_transpose_A
from .phases import (
    DimensionlessPoint,
    Geometry,
    PhaseSet,
    dimensionless_phases,
    from_dimensionless,
    phases_exact,
    phases_large_T,
    phases_quadrature,
    to_dimensionless,
)
from .states import CoherencePair, DensityOperator, initial_state, l1_coherence, reduced_state
from .witness import (
    WitnessEigenData,
    WitnessOperator,
    canonical_witness,
    witness_eigendata,
    witness_expectation_closed_form,
    witness_expectation_trace,
    witness_matrix_w,
    witness_operator,
)
