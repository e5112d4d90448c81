"""Exact GF(2) connection matrices and generalized topological transition matrices."""

from .braid import (
    ConnectionMatrix,
    ConnectionMatrixError,
    ExactnessError,
    Generator,
    GradedBasis,
    NotAdjacentError,
    NotAnIntervalError,
    homology,
    les,
    validate_connection_matrix,
)
from .morse import (
    BlockTransition,
    InterleavingError,
    MorseData,
    MorseError,
    assemble_block_gttm,
    build_morse_complex,
    verify_unique_gttm,
)
from .poset import FinitePoset, OrderError, adjacent_pairs, extends, intervals, order_closure_paths, validate
from .sweeping import (
    SpectralPage,
    SweepError,
    SweepState,
    preserved_pivots,
    ss_oracle,
    ss_pages,
    sweep,
    verify_basis_changes,
    verify_prop41,
)
from .transition import (
    CoverData,
    CoverError,
    GttmSolutionSet,
    HypothesisError,
    IntervalCover,
    NotAChainMapError,
    TransitionCandidate,
    UccCertificate,
    certify_ucc,
    check_chain_map,
    check_shape,
    compose,
    enumerate_gttm,
    induced_map,
    invert,
    pivot_relation_check,
    verify_gttm,
)

__version__ = "0.1.0"
