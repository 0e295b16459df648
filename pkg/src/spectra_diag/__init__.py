"""Matrices with a prescribed spectrum and a prescribed diagonal.

``horn_construct`` builds a real orthogonal Q with diag(Q diag(lam) Q^T) = d
whenever lam majorizes d. ``mirsky_construct`` builds a unit lower
triangular L with diag(L^-1 U L) = d for the bidiagonal U carrying lam,
whenever sum(lam) == sum(d), over the complex numbers.
"""

from .errors import (
    DimensionMismatch,
    IntervalViolation,
    MajorizationViolated,
    NoConvergence,
    NotCorrelationSpectrum,
    NotSymmetric,
    SpectraDiagError,
    TraceMismatch,
)
from .gen import GenConfig, corr_preset, random_majorized_diag, random_spectrum, trace_matched_pair
from .horn import (
    HornCertificate,
    OrthogonalMatrix,
    PivotStep,
    TwoByTwoKernel,
    hermitian_of,
    horn_construct,
    kernel2,
    orthostochastic_of,
    select_pivot,
)
from .mirsky import (
    CompanionBidiagonal,
    MirskyCertificate,
    UnitLowerTriangular,
    companion_of,
    elementary_step,
    mirsky_construct,
)
from .seqkit import (
    ComplexSeq,
    MajorizationReport,
    Permutation,
    RealSeq,
    check_majorization,
    sort_desc,
    trace_match,
)
from .verify import DoublyStochasticMatrix, TolProfile, VerifyReport, jacobi_eigenvalues, verify_horn, verify_mirsky

__version__ = "0.1.0"
