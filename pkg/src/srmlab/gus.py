"""Fast discrimination path for ensembles with circulant Gram blocks.

The Gram matrix of a multi-constellation ensemble sharing one cyclic
symmetry splits into s x s circulant blocks of order m. One DFT per block
diagonalizes them simultaneously, leaving m independent s x s Hermitian
coupling matrices (one per frequency bin) whose square roots assemble,
through the inverse DFT, into the square root of the full Gram matrix.
The per-constellation diagonal value g_h of that square root is the mean
of the (h, h) spectral diagonal; the measurement is optimal exactly when
all g_h agree, in which case the correct-decision probability is
m * s * g^2.

The regrouping between block-spectral layout and per-bin coupling
matrices is pure index bookkeeping; no permutation matrix is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellations import GusEnsemble, weighted_gram
from .errors import GramSingular
from .linalg import TOL_PSD, circulant_eigenvalues, fourier_matrix, principal_sqrt
from .srm import TOL_COND, SrmResult, _result_from_factor


@dataclass(frozen=True)
class BlockSpectrum:
    """Spectral form of a block-circulant matrix.

    ``blocks[h, k]`` holds the m DFT coefficients of the (h, k) circulant
    block, i.e. the diagonal of that block after conjugation by the
    Fourier matrix. Slicing across bins, ``coupling(j)`` is the Hermitian
    s x s matrix gathering coefficient j of every block; for a positive
    definite source matrix every coupling matrix is positive definite.
    """

    s: int
    m: int
    blocks: np.ndarray

    def __post_init__(self):
        blocks = np.array(self.blocks, dtype=complex)
        if blocks.shape != (self.s, self.s, self.m):
            raise ValueError(
                f"expected spectral blocks of shape {(self.s, self.s, self.m)}, "
                f"got {blocks.shape}"
            )
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    def coupling(self, j: int) -> np.ndarray:
        """Cross-constellation coupling matrix at frequency bin j."""
        return self.blocks[:, :, j].copy()

    def diagonal_means(self) -> np.ndarray:
        """Per-constellation mean of the diagonal spectral coefficients."""
        diag = self.blocks[np.arange(self.s), np.arange(self.s), :]
        return diag.real.mean(axis=1)


def block_diagonalize(ensemble: GusEnsemble) -> BlockSpectrum:
    """DFT every circulant Gram block of the ensemble."""
    s, m = ensemble.s, ensemble.m
    gram = weighted_gram(ensemble.base)
    blocks = np.empty((s, s, m), dtype=complex)
    for h in range(s):
        for k in range(s):
            first_row = gram[h * m, k * m : (k + 1) * m]
            blocks[h, k] = circulant_eigenvalues(first_row)
    return BlockSpectrum(s=s, m=m, blocks=blocks)


def block_sqrt(spectrum: BlockSpectrum, *, tol_psd: float = TOL_PSD) -> BlockSpectrum:
    """Square root in the spectral domain, one coupling matrix at a time."""
    out = np.empty((spectrum.s, spectrum.s, spectrum.m), dtype=complex)
    for j in range(spectrum.m):
        root = principal_sqrt(spectrum.coupling(j), tol_psd=tol_psd)
        out[:, :, j] = root
    return BlockSpectrum(s=spectrum.s, m=spectrum.m, blocks=out)


def spectrum_to_matrix(spectrum: BlockSpectrum) -> np.ndarray:
    """Assemble the dense matrix whose (h, k) block is F diag(blocks[h,k]) F†."""
    s, m = spectrum.s, spectrum.m
    f = fourier_matrix(m)
    fh = f.conj().T
    out = np.empty((s * m, s * m), dtype=complex)
    for h in range(s):
        for k in range(s):
            out[h * m : (h + 1) * m, k * m : (k + 1) * m] = (
                f * spectrum.blocks[h, k][None, :]
            ) @ fh
    return out


def trace_criterion(
    sqrt_spectrum: BlockSpectrum, *, tol_cond: float = TOL_COND
) -> tuple[np.ndarray, bool]:
    """Per-constellation diagonal values of the Gram square root.

    Returns ``(g, optimal)`` where ``g[h]`` is the mean of the (h, h)
    spectral diagonal of the square root. The measurement is optimal
    exactly when the g values agree within ``tol_cond``; the correct
    decision probability is then m * s * g^2.
    """
    g = sqrt_spectrum.diagonal_means()
    optimal = bool(g.max() - g.min() <= tol_cond)
    return g, optimal


def fast_srm(
    ensemble: GusEnsemble, *, tol_psd: float = TOL_PSD
) -> tuple[SrmResult, np.ndarray]:
    """Square-root measurement through the block-circulant fast path.

    Produces the same result as the dense route on the assembled Gram
    matrix, plus the per-constellation diagonal values g_h; the states of
    constellation h are each detected correctly with probability g_h^2.
    """
    spectrum = block_diagonalize(ensemble)
    lowest = min(
        float(np.linalg.eigvalsh((c + c.conj().T) / 2.0)[0])
        for c in (spectrum.coupling(j) for j in range(spectrum.m))
    )
    if lowest < tol_psd:
        raise GramSingular(
            f"Gram matrix is singular (min eigenvalue {lowest:.3e} < {tol_psd:g}); "
            "the weighted states are not linearly independent"
        )
    root_spectrum = block_sqrt(spectrum, tol_psd=tol_psd)
    factor = spectrum_to_matrix(root_spectrum)
    factor = (factor + factor.conj().T) / 2.0
    return _result_from_factor(factor), root_spectrum.diagonal_means()
