"""Entanglement of two-mode Gaussian states under number-conserving mode redefinitions."""

__version__ = "0.1.0"

from .entanglement import is_separable, log_negativity, pt_symplectic_spectrum
from .errors import (
    AsymmetricInput,
    BudgetExhausted,
    ComplexSpectrum,
    GaussrelError,
    NonFiniteEntry,
    NonPositiveSqueeze,
    NotPhysical,
    ParseError,
    SingularCovariance,
)
from .mode_transforms import (
    SymplecticMatrix,
    U2Chart,
    apply,
    local_squeeze,
    local_symplectic,
    passive_symplectic,
    standard_form,
    u2_matrix,
)
from .state_sampling import CensusReport, SampleRanges, census, pure_tms, sample_generic, sample_standard
from .symplectic_core import (
    SIGMA,
    StandardFormParams,
    SymplecticSpectrum,
    block_decompose,
    is_physical,
    is_pure,
    make_covariance,
    symplectic_spectrum,
    vacuum,
    wigner_density,
)
from .tps_search import Classification, ExtremalResult, SweepSpec, classify, extremal, surface, sweep
