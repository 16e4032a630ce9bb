"""Elliptic sn^2 potentials, their SUSY partners, and band-structure checks."""

from .bandsolver import (
    BandEdge,
    Discriminant,
    PeriodicPotential,
    band_edges,
    bloch_edge_state,
    expected_boundary,
    galerkin_edges,
    monodromy_trace,
    numeric_partner,
)
from .elliptic import JacobiTriple, ModulusParam, complete_k, jacobi, jacobi_derivatives
from .errors import (
    DomainError,
    IncompleteSpectrumError,
    InvalidGroundStateError,
    LamesusyError,
    NumericalError,
)
from .grid import GridFunction
from .susy import (
    BandEdgeState,
    Family,
    LameConstants,
    PotentialSpec,
    band_edge_energies,
    band_edge_energy,
    band_edge_state,
    edge_boundary,
    psi_minus,
    psi_minus_prime,
    psi_plus,
    raw_lame,
    superpotential,
    v_minus,
    v_minus_check,
    v_plus_closed,
    v_plus_susy,
)
from .verify import (
    ClaimReport,
    SelfIsoResult,
    run_all,
    run_edge_state_suite,
    run_isospectrality_suite,
    run_limit_suite,
    run_selfiso_suite,
    schrodinger_residual,
    selfiso_distance,
)

__version__ = "0.1.0"
