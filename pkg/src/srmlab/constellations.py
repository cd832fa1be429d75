"""Weighted pure-state constellations described by priors and inner products.

States are never stored as amplitude vectors. A constellation records the
prior probability of each state and the full matrix of pairwise inner
products; the weighted Gram matrix assembled from those two ingredients is
the complete input to everything downstream. Builders cover coherent-state
binary phase keying in two constellations, pulse position modulation and
its two-phase variant, plus a general constructor for any family of
constellations sharing one cyclic symmetry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPrior
from .linalg import TOL_RECON

PRIOR_TOL = 1e-12
RULE_TOL = 1e-10


@dataclass(frozen=True)
class Constellation:
    """A family of weighted pure states.

    ``priors`` are the positive state probabilities (summing to one) and
    ``overlaps[i, j]`` is the inner product of unit-norm states i and j,
    so the matrix is Hermitian with unit diagonal. ``labels`` are display
    names used in reports.
    """

    priors: np.ndarray
    overlaps: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        priors = np.array(self.priors, dtype=float).reshape(-1)
        n = len(priors)
        if n == 0:
            raise InvalidPrior("a constellation needs at least one state")
        if np.any(priors <= 0):
            raise InvalidPrior("priors must be strictly positive")
        if abs(priors.sum() - 1.0) > PRIOR_TOL:
            raise InvalidPrior(f"priors must sum to 1, got {priors.sum()!r}")

        overlaps = np.array(self.overlaps, dtype=complex)
        if overlaps.shape != (n, n):
            raise ValueError(f"overlaps must be {n}x{n}, got {overlaps.shape}")
        if not np.all(np.isfinite(overlaps)):
            raise ValueError("overlaps must be finite")
        diag_err = np.abs(np.diagonal(overlaps) - 1.0).max()
        if diag_err > PRIOR_TOL:
            raise ValueError(f"states must be unit norm: diagonal deviates by {diag_err:.3e}")
        herm_err = np.abs(overlaps - overlaps.conj().T).max()
        if herm_err > RULE_TOL:
            raise ValueError(f"overlaps must be Hermitian: asymmetry {herm_err:.3e}")
        overlaps = (overlaps + overlaps.conj().T) / 2.0
        np.fill_diagonal(overlaps, 1.0)

        labels = tuple(self.labels) or tuple(f"state{i}" for i in range(n))
        if len(labels) != n:
            raise ValueError(f"expected {n} labels, got {len(labels)}")

        priors.setflags(write=False)
        overlaps.setflags(write=False)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "overlaps", overlaps)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.priors)

    def inner(self, i: int, j: int) -> complex:
        return complex(self.overlaps[i, j])


@dataclass(frozen=True)
class GusEnsemble:
    """``s`` constellations of ``m`` states sharing one cyclic symmetry.

    The flat state order is constellation-major: states of constellation 0
    first, then constellation 1, and so on. Every state of constellation k
    carries the same prior ``constellation_priors[k]``, and every m-by-m
    block of the overlap matrix is circulant, which is what the fast
    discrimination path exploits.
    """

    s: int
    m: int
    constellation_priors: np.ndarray
    base: Constellation

    def __post_init__(self):
        if self.s < 1 or self.m < 1:
            raise ValueError("need at least one constellation and one state")
        q = np.array(self.constellation_priors, dtype=float).reshape(-1)
        if len(q) != self.s:
            raise InvalidPrior(f"expected {self.s} constellation priors, got {len(q)}")
        if np.any(q <= 0):
            raise InvalidPrior("constellation priors must be strictly positive")
        if abs(self.m * q.sum() - 1.0) > PRIOR_TOL:
            raise InvalidPrior(
                f"per-state priors must satisfy m * sum(q) = 1, got {self.m * q.sum()!r}"
            )
        if self.base.n != self.s * self.m:
            raise ValueError(
                f"base constellation has {self.base.n} states, expected {self.s * self.m}"
            )
        expected = np.repeat(q, self.m)
        if np.abs(self.base.priors - expected).max() > PRIOR_TOL:
            raise InvalidPrior("base priors must replicate the constellation priors")
        worst = self._circulant_defect()
        if worst > TOL_RECON:
            raise ValueError(f"overlap blocks are not circulant: defect {worst:.3e}")
        q.setflags(write=False)
        object.__setattr__(self, "constellation_priors", q)

    def _circulant_defect(self) -> float:
        o = self.base.overlaps
        m = self.m
        worst = 0.0
        for h in range(self.s):
            for k in range(self.s):
                block = o[h * m : (h + 1) * m, k * m : (k + 1) * m]
                shifted = np.roll(np.roll(block, 1, axis=0), 1, axis=1)
                worst = max(worst, float(np.abs(block - shifted).max()))
        return worst


def coherent_inner(alpha, beta) -> complex:
    """Overlap of two coherent states with complex amplitudes alpha, beta.

    Equals exp(-(|a|^2 + |b|^2)/2 + conj(a) b); always has modulus <= 1
    and is 1 exactly when the amplitudes coincide.
    """
    a = complex(alpha)
    b = complex(beta)
    return cmath.exp(-(abs(a) ** 2 + abs(b) ** 2) / 2.0 + a.conjugate() * b)


def weighted_gram(constellation: Constellation) -> np.ndarray:
    """Weighted Gram matrix G[i, j] = sqrt(q_i q_j) <i|j>.

    Hermitian with unit trace; positive semidefinite whenever the overlap
    matrix describes actual states.
    """
    w = np.sqrt(constellation.priors)
    return np.outer(w, w) * constellation.overlaps


def make_gus_from_base(s: int, m: int, base_inners, priors, *, labels=None) -> GusEnsemble:
    """General constructor for multi-constellation ensembles with one symmetry.

    ``base_inners(h, k, r)`` must return the inner product between the
    seed state of constellation h and the r-step shift of the seed state
    of constellation k, for shifts r = 0..m-1. The rule must be
    Hermitian-consistent, i.e. ``base_inners(k, h, (m - r) % m)`` equal to
    the conjugate of ``base_inners(h, k, r)``, and unit-norm on the
    diagonal (``base_inners(h, h, 0) == 1``). ``priors`` gives one
    per-state prior per constellation, with m * sum(priors) = 1.
    """
    if s < 1 or m < 1:
        raise ValueError("need s >= 1 constellations of m >= 1 states")
    q = np.asarray(priors, dtype=float).reshape(-1)
    if len(q) != s:
        raise InvalidPrior(f"expected {s} constellation priors, got {len(q)}")

    mirror_idx = (m - np.arange(m)) % m
    rows = np.empty((s, s, m), dtype=complex)
    for h in range(s):
        for k in range(h, s):
            row = np.array([complex(base_inners(h, k, r)) for r in range(m)])
            if not np.all(np.isfinite(row)):
                raise ValueError(f"inner rule returned a non-finite value on block ({h}, {k})")
            if k == h:
                mirror = np.conj(row[mirror_idx])
                defect = float(np.abs(row - mirror).max())
                if defect > RULE_TOL:
                    raise ValueError(
                        f"inner rule is not Hermitian-consistent on block ({h}, {h}): "
                        f"defect {defect:.3e}"
                    )
                row = (row + mirror) / 2.0
                if abs(row[0] - 1.0) > RULE_TOL:
                    raise ValueError(f"seed state {h} is not unit norm: <0|0> = {row[0]}")
                row[0] = 1.0
                rows[h, h] = row
            else:
                supplied = np.array([complex(base_inners(k, h, r)) for r in range(m)])
                derived = np.conj(row[mirror_idx])
                defect = float(np.abs(supplied - derived).max())
                if defect > RULE_TOL:
                    raise ValueError(
                        f"inner rule is not Hermitian-consistent on blocks ({h}, {k}) / "
                        f"({k}, {h}): defect {defect:.3e}"
                    )
                rows[h, k] = row
                rows[k, h] = derived

    shift_idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
    overlaps = np.empty((s * m, s * m), dtype=complex)
    for h in range(s):
        for k in range(s):
            overlaps[h * m : (h + 1) * m, k * m : (k + 1) * m] = rows[h, k][shift_idx]

    if labels is None:
        labels = tuple(f"c{h}s{i}" for h in range(s) for i in range(m))
    base = Constellation(priors=np.repeat(q, m), overlaps=overlaps, labels=tuple(labels))
    return GusEnsemble(s=s, m=m, constellation_priors=q, base=base)


def make_double_bpsk(alpha, beta, p: float) -> GusEnsemble:
    """Two binary phase-keyed constellations: states +/-alpha and +/-beta.

    The +/-alpha pair carries per-state prior p and the +/-beta pair
    carries q = 1/2 - p, so the four priors sum to one. The shared
    symmetry is the half-turn phase rotation.
    """
    if not 0.0 < p < 0.5:
        raise InvalidPrior(f"p must lie strictly between 0 and 1/2, got {p}")
    seeds = (complex(alpha), complex(beta))

    def rule(h: int, k: int, r: int) -> complex:
        return coherent_inner(seeds[h], seeds[k] * (-1) ** r)

    labels = ("alpha+", "alpha-", "beta+", "beta-")
    return make_gus_from_base(2, 2, rule, (p, 0.5 - p), labels=labels)


def make_psk(m: int, alpha) -> GusEnsemble:
    """Single equiprobable constellation of m phase-rotated coherent states."""
    if m < 2:
        raise ValueError("need at least two phases")
    seed = complex(alpha)

    def rule(h: int, k: int, r: int) -> complex:
        return coherent_inner(seed, seed * cmath.exp(2j * cmath.pi * r / m))

    labels = tuple(f"phase{i}" for i in range(m))
    return make_gus_from_base(1, m, rule, (1.0 / m,), labels=labels)


def make_ppm(m: int, alpha: float) -> Constellation:
    """Pulse position modulation: one pulse of amplitude alpha in m slots.

    Distinct positions overlap through the vacuum component only, giving
    the constant off-diagonal inner product chi = exp(-alpha^2).
    """
    if m < 2:
        raise ValueError("need at least two slots")
    a = float(alpha)
    if a <= 0:
        raise ValueError("amplitude must be positive")
    chi = math.exp(-a * a)
    overlaps = np.full((m, m), chi, dtype=complex)
    np.fill_diagonal(overlaps, 1.0)
    labels = tuple(f"slot{i}" for i in range(m))
    return Constellation(priors=np.full(m, 1.0 / m), overlaps=overlaps, labels=labels)


def make_double_ppm(m: int, alpha: float) -> GusEnsemble:
    """Pulse position modulation doubled by pulse phase.

    Constellation 0 places a pulse of amplitude +alpha in one of m slots,
    constellation 1 a pulse of amplitude -alpha; all 2m states are
    equiprobable. Same-slot opposite-phase states overlap with chi^2,
    everything else with chi = exp(-alpha^2).
    """
    if m < 2:
        raise ValueError("need at least two slots")
    a = float(alpha)
    if a <= 0:
        raise ValueError("amplitude must be positive")
    chi = math.exp(-a * a)

    def rule(h: int, k: int, r: int) -> complex:
        if r != 0:
            return chi
        return 1.0 if h == k else chi * chi

    labels = tuple(f"slot{i}+" for i in range(m)) + tuple(f"slot{i}-" for i in range(m))
    return make_gus_from_base(2, m, rule, (0.5 / m, 0.5 / m), labels=labels)
