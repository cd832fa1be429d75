"""Discrimination of pure quantum states with the square-root measurement.

Everything is computed in Gram coordinates: a constellation is its priors
plus pairwise inner products, the measurement is the principal square root
of the weighted Gram matrix, and optimality is decided by matrix
certificates. Ensembles built from several constellations sharing one
cyclic symmetry additionally get a block-circulant fast path.
"""

from .analysis import (
    DoublePpmClosedForm,
    PpmClosedForm,
    SweepPoint,
    double_bpsk_block_traces,
    double_ppm_closed_form,
    evaluate_scheme,
    mutual_info_double_ppm,
    mutual_info_ppm,
    optimize_prior_4pam,
    pam4_block_traces,
    pam4_overlaps,
    pc_double_bpsk_equal_amp,
    ppm_closed_form,
)
from .constellations import (
    Constellation,
    GusEnsemble,
    coherent_inner,
    make_double_bpsk,
    make_double_ppm,
    make_gus_from_base,
    make_ppm,
    make_psk,
    weighted_gram,
)
from .errors import (
    ConvergenceFailure,
    DomainError,
    GramFileError,
    GramSingular,
    InvalidFactorization,
    InvalidPrior,
    NoRoot,
    NotBlockDiagonal,
    NotHermitian,
    NotPSD,
    ReducibleBlock,
    SingularFactor,
    SrmLabError,
)
from .gus import BlockSpectrum, block_diagonalize, block_sqrt, fast_srm, spectrum_to_matrix, trace_criterion
from .linalg import (
    TOL_HERM,
    TOL_PSD,
    TOL_RECON,
    CirculantSpec,
    HermitianEig,
    circulant_eigenvalues,
    circulant_from_eigenvalues,
    fourier_matrix,
    hermitian_eig,
    is_psd,
    principal_sqrt,
)
from .srm import (
    TOL_COND,
    ChannelStats,
    OptimalityVerdict,
    SrmResult,
    channel_stats,
    check_theorem2,
    check_theorem3,
    srm,
    verify_theorem1,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSpectrum",
    "ChannelStats",
    "CirculantSpec",
    "Constellation",
    "ConvergenceFailure",
    "DomainError",
    "DoublePpmClosedForm",
    "GramFileError",
    "GramSingular",
    "GusEnsemble",
    "HermitianEig",
    "InvalidFactorization",
    "InvalidPrior",
    "NoRoot",
    "NotBlockDiagonal",
    "NotHermitian",
    "NotPSD",
    "OptimalityVerdict",
    "PpmClosedForm",
    "ReducibleBlock",
    "SingularFactor",
    "SrmLabError",
    "SrmResult",
    "SweepPoint",
    "TOL_COND",
    "TOL_HERM",
    "TOL_PSD",
    "TOL_RECON",
    "block_diagonalize",
    "block_sqrt",
    "channel_stats",
    "check_theorem2",
    "check_theorem3",
    "circulant_eigenvalues",
    "circulant_from_eigenvalues",
    "coherent_inner",
    "double_bpsk_block_traces",
    "double_ppm_closed_form",
    "evaluate_scheme",
    "fast_srm",
    "fourier_matrix",
    "hermitian_eig",
    "is_psd",
    "make_double_bpsk",
    "make_double_ppm",
    "make_gus_from_base",
    "make_ppm",
    "make_psk",
    "mutual_info_double_ppm",
    "mutual_info_ppm",
    "optimize_prior_4pam",
    "pam4_block_traces",
    "pam4_overlaps",
    "pc_double_bpsk_equal_amp",
    "ppm_closed_form",
    "principal_sqrt",
    "spectrum_to_matrix",
    "srm",
    "trace_criterion",
    "verify_theorem1",
    "weighted_gram",
]
