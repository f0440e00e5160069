"""Function-space stable random fields via truncated random series.

A field is u = sum_n u_n psi_n with independent stable coefficients
u_n ~ S(alpha, beta_n, gamma_n, delta_n; 0) against a declared basis.
This module holds the basis descriptions, the field specification, the
deterministic counter-based sampler, grid synthesis, and the Monte Carlo
diagnostics that probe the convergence and moment theory: fractional
lower-order moments of the field norm and empirical upper frame bounds
for the synthesis operator.

Wavelet coefficients are ordered lexicographically in (level j,
translate k), i.e. sequence index n = 2^j + k, which makes scalar
sequences gamma_n and level-indexed tables gamma_{j,k} interconvertible.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import rng as rng_mod
from .errors import (
    DimensionMismatchError,
    InvalidSpecError,
    MomentOrderTooHighError,
    OutOfRangeError,
)
from .sequences import (
    CoefficientSequence,
    Explicit,
    SummabilityVerdict,
    as_sequence,
    sequence_values,
    summability_report,
)
from .stable import standard_stable_from_uniforms, validate_params

__all__ = [
    "EuclideanSequence",
    "HaarWavelet",
    "HatHierarchical",
    "Eigenbasis",
    "BasisSpec",
    "StableFieldSpec",
    "FieldEnsemble",
    "SummabilityWarning",
    "basis_size",
    "default_grid",
    "wavelet_index",
    "sample_coefficients",
    "synthesize",
    "synthesize_ensemble",
    "GalleryEnsemble",
    "wavelet_gallery_ensemble",
    "FlomEstimate",
    "flom_estimate",
    "QFrameReport",
    "qframe_upper_check",
]


class SummabilityWarning(UserWarning):
    """The scale sequence fails the summability needed for convergence."""


@dataclass(frozen=True)
class EuclideanSequence:
    """Sequence-space 'basis': coefficients are the field values; the
    natural norm is the ell^q quasi-norm."""

    q: float = 2.0


@dataclass(frozen=True)
class HaarWavelet:
    """Step wavelets on [0, 1), levels j = 0..levels, translates k < 2^j.

    With unit_norm the translate at level j carries the 2^(j/2) factor
    making the family orthonormal in L^2[0, 1].
    """

    levels: int
    grid_size: int = 2 ** 14
    unit_norm: bool = True


@dataclass(frozen=True)
class HatHierarchical:
    """Hierarchical hat (tent) functions on the same dyadic layout as the
    Haar family; visually smooth but not orthogonal."""

    levels: int
    grid_size: int = 2 ** 14
    unit_norm: bool = True


@dataclass(frozen=True)
class Eigenbasis:
    """Normalised sine eigenfunctions sqrt(2) sin(n pi x) with a declared
    eigenvalue sequence, for smoothness-scale experiments."""

    eigenvalues: CoefficientSequence
    scale_exponent: float = 0.0
    grid_size: int = 2 ** 14


BasisSpec = Union[EuclideanSequence, HaarWavelet, HatHierarchical, Eigenbasis]


def basis_size(basis: BasisSpec) -> Optional[int]:
    """Number of basis functions, or None when unbounded (sequence bases)."""
    if isinstance(basis, (HaarWavelet, HatHierarchical)):
        return 2 ** (basis.levels + 1) - 1
    return None


def basis_norm_exponent(basis: BasisSpec) -> float:
    """The q of the coefficient ell^q norm naturally paired with the basis."""
    if isinstance(basis, EuclideanSequence):
        return basis.q
    return 2.0


def wavelet_index(j: int, k: int) -> int:
    """Sequence index (1-based) of the level-j, translate-k wavelet."""
    if j < 0 or not 0 <= k < 2 ** j:
        raise OutOfRangeError("(j, k)", "need j >= 0 and 0 <= k < 2^j")
    return 2 ** j + k


def default_grid(basis: BasisSpec) -> np.ndarray:
    """Uniform midpoint grid on [0, 1] at the basis's declared resolution."""
    size = getattr(basis, "grid_size", 2 ** 14)
    return (np.arange(size) + 0.5) / size


@dataclass(frozen=True)
class StableFieldSpec:
    """A truncated series specification for a stable random field."""

    alpha: float
    gamma_seq: CoefficientSequence
    delta_seq: CoefficientSequence
    beta_seq: CoefficientSequence
    basis: BasisSpec
    truncation: int

    def __post_init__(self):
        if self.truncation < 1:
            raise InvalidSpecError("truncation must be at least 1")
        size = basis_size(self.basis)
        if size is not None and self.truncation > size:
            raise InvalidSpecError(
                f"truncation {self.truncation} exceeds the {size} functions "
                f"of the declared basis"
            )
        validate_params(self.alpha, 0.0, 1.0, 0.0)  # range-check alpha alone
        gam = sequence_values(self.gamma_seq, self.truncation)
        if np.any(gam < 0) or not np.all(np.isfinite(gam)):
            raise InvalidSpecError("scale sequence must be finite and >= 0")
        bet = sequence_values(self.beta_seq, self.truncation)
        if np.any(np.abs(bet) >= 1):
            raise InvalidSpecError("skewness sequence must lie inside (-1, 1)")
        if not np.all(np.isfinite(sequence_values(self.delta_seq, self.truncation))):
            raise InvalidSpecError("location sequence must be finite")

    @classmethod
    def make(cls, alpha, gamma_seq, basis, truncation,
             delta_seq=0.0, beta_seq=0.0) -> "StableFieldSpec":
        return cls(
            alpha=float(alpha),
            gamma_seq=as_sequence(gamma_seq),
            delta_seq=as_sequence(delta_seq),
            beta_seq=as_sequence(beta_seq),
            basis=basis,
            truncation=int(truncation),
        )

    def spec_hash(self) -> str:
        payload = repr(self).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


@dataclass
class FieldEnsemble:
    """A seeded batch of coefficient draws (and optional grid synthesis).

    Regenerable bit-exactly from (spec, seed): row i of the coefficient
    matrix is a pure function of (seed, i) through the counter-based
    stream layout, recorded in substream_offsets.
    """

    spec: StableFieldSpec
    seed: int
    coefficients: np.ndarray  # (n_samples, truncation)
    grid_values: Optional[np.ndarray] = None  # (n_samples, grid_size)
    substream_offsets: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @property
    def n_samples(self) -> int:
        return self.coefficients.shape[0]

    @property
    def spec_hash(self) -> str:
        return self.spec.spec_hash()

    def reference_id(self) -> str:
        return f"{self.spec_hash}:{self.seed}:{self.n_samples}"


def _coefficients_from_uniforms(spec: StableFieldSpec, u: np.ndarray) -> np.ndarray:
    gam = sequence_values(spec.gamma_seq, spec.truncation)
    det = sequence_values(spec.delta_seq, spec.truncation)
    bet = sequence_values(spec.beta_seq, spec.truncation)
    z = standard_stable_from_uniforms(spec.alpha, bet[None, :], u[:, :, 0], u[:, :, 1])
    out = gam[None, :] * z + det[None, :]
    zero = gam == 0.0
    if zero.any():
        # point-mass columns must not inherit 0 * inf from an extreme draw
        out[:, zero] = det[zero]
    return out


def sample_coefficients(spec: StableFieldSpec, n_samples: int, seed: int,
                        check_summability: bool = True) -> FieldEnsemble:
    """Draw n_samples independent coefficient vectors for the spec.

    Coefficient (i, n) is S(alpha, beta_n, gamma_n, delta_n; 0),
    independent across samples and indices, and a deterministic function
    of (spec, seed, i, n).  If the scale sequence fails ell^alpha
    summability (so the untruncated series would diverge), a warning is
    attached but sampling proceeds: truncated draws are always finite.
    """
    if n_samples < 0:
        raise InvalidSpecError("n_samples must be >= 0")
    if check_summability:
        rep = summability_report(
            spec.gamma_seq, spec.alpha, basis_norm_exponent(spec.basis),
            probe_depth=max(1024, spec.truncation),
        )
        if rep.verdict is SummabilityVerdict.FAILS_ELL_ALPHA:
            warnings.warn(
                "scale sequence is not ell^alpha-summable: the untruncated "
                "series would diverge almost surely",
                SummabilityWarning,
                stacklevel=2,
            )
    coeffs = np.empty((n_samples, spec.truncation))
    # bounded working memory; chunk boundaries cannot change the draws
    # because every row owns a fixed counter-addressed block
    chunk = max(1, (1 << 24) // max(2 * spec.truncation, 1))
    for start in range(0, n_samples, chunk):
        stop = min(start + chunk, n_samples)
        u = rng_mod.uniform_rows(seed, start, stop, spec.truncation)
        coeffs[start:stop] = _coefficients_from_uniforms(spec, u)
    offsets = np.arange(n_samples, dtype=np.int64) * rng_mod.blocks_per_row(spec.truncation)
    return FieldEnsemble(spec=spec, seed=int(seed), coefficients=coeffs,
                         substream_offsets=offsets)


# ---------------------------------------------------------------------------
# synthesis
# ---------------------------------------------------------------------------

def _wavelet_levels(n_coeffs: int) -> int:
    levels = int(math.ceil(math.log2(n_coeffs + 1))) - 1
    return max(levels, 0)


def _synthesize_dyadic(coeffs: np.ndarray, grid: np.ndarray, kind: str,
                       unit_norm: bool) -> np.ndarray:
    n_samples, n_coeffs = coeffs.shape
    levels = _wavelet_levels(n_coeffs)
    out = np.zeros((n_samples, grid.size))
    for j in range(levels + 1):
        start = 2 ** j - 1
        stop = min(2 ** (j + 1) - 1, n_coeffs)
        width = stop - start
        if width <= 0:
            break
        level_coeffs = np.zeros((n_samples, 2 ** j))
        level_coeffs[:, :width] = coeffs[:, start:stop]
        scaled = 2.0 ** j * grid
        k = np.floor(scaled).astype(np.int64)
        np.clip(k, 0, 2 ** j - 1, out=k)
        frac = scaled - k
        # every translate is supported inside [0, 1); points outside get 0
        inside = (grid >= 0.0) & (grid < 1.0)
        if kind == "haar":
            shape = np.where(frac < 0.5, 1.0, -1.0) * inside
        else:  # hat
            shape = (1.0 - np.abs(2.0 * frac - 1.0)) * inside
        amp = 2.0 ** (j / 2.0) if unit_norm else 1.0
        out += amp * shape[None, :] * level_coeffs[:, k]
    return out


def synthesize(basis: BasisSpec, coefficients: np.ndarray,
               grid: Optional[np.ndarray] = None) -> np.ndarray:
    """Evaluate the series sum_n c_n psi_n(x) on a grid.

    coefficients may be a single vector or an (n_samples, N) batch; the
    output matches.  EuclideanSequence passes coefficients through
    unchanged (the sequence is the field).  Wavelet coefficients must
    fill whole levels 0..J; Eigenbasis weights the sine eigenfunctions.
    """
    coeffs = np.atleast_2d(np.asarray(coefficients, dtype=float))
    single = np.asarray(coefficients).ndim == 1
    if isinstance(basis, EuclideanSequence):
        if grid is not None and len(grid) != coeffs.shape[1]:
            raise DimensionMismatchError(
                "sequence basis passes coefficients through; grid length "
                f"{len(grid)} != {coeffs.shape[1]} coefficients"
            )
        out = coeffs
    else:
        if grid is None:
            grid = default_grid(basis)
        grid = np.asarray(grid, dtype=float)
        if isinstance(basis, (HaarWavelet, HatHierarchical)):
            expected = basis_size(basis)
            if coeffs.shape[1] != expected:
                raise DimensionMismatchError(
                    f"basis with levels 0..{basis.levels} needs {expected} "
                    f"coefficients, got {coeffs.shape[1]}"
                )
            kind = "haar" if isinstance(basis, HaarWavelet) else "hat"
            out = _synthesize_dyadic(coeffs, grid, kind, basis.unit_norm)
        elif isinstance(basis, Eigenbasis):
            n = coeffs.shape[1]
            modes = np.arange(1, n + 1)
            phi = math.sqrt(2.0) * np.sin(np.pi * modes[:, None] * grid[None, :])
            out = coeffs @ phi
        else:
            raise TypeError(f"unknown basis {basis!r}")
    return out[0] if single else out


def synthesize_ensemble(ensemble: FieldEnsemble,
                        grid: Optional[np.ndarray] = None) -> FieldEnsemble:
    """Fill (and return) the ensemble with its grid synthesis."""
    ensemble.grid_values = synthesize(ensemble.spec.basis, ensemble.coefficients, grid)
    return ensemble


# ---------------------------------------------------------------------------
# matched heavy-tail / light-tail wavelet gallery
# ---------------------------------------------------------------------------

@dataclass
class GalleryEnsemble:
    """A synthesized wavelet ensemble rescaled for side-by-side display."""

    family: str
    ensemble: FieldEnsemble
    rescaled_grid: np.ndarray
    offset: float
    scale: float


def _gallery_spec(family: str, levels: int, grid_size: int) -> StableFieldSpec:
    n = 2 ** (levels + 1) - 1
    js = np.floor(np.log2(np.arange(1, n + 1))).astype(int)
    level_scale = (js + 1.0) ** -2.0 * 2.0 ** (-js.astype(float))
    if family == "cauchy":
        alpha, gam = 1.0, level_scale
    elif family == "gaussian":
        # scale / sqrt(2) makes the coefficient exactly scale * N(0,1)
        alpha, gam = 2.0, level_scale / math.sqrt(2.0)
    else:
        raise InvalidSpecError(f"family must be 'cauchy' or 'gaussian', got {family!r}")
    return StableFieldSpec.make(
        alpha, Explicit(tuple(gam)), HaarWavelet(levels, grid_size), n,
    )


def wavelet_gallery_ensemble(family: str, levels: int, n_samples: int, seed: int,
                             grid_size: int = 2 ** 14) -> GalleryEnsemble:
    """Sample a wavelet ensemble with per-level scale (j+1)^-2 2^-j times a
    standard Cauchy or standard normal coefficient, synthesize it, and
    rescale the whole ensemble affinely onto [0, 1].

    The two families consume the identical underlying uniform draws for a
    given seed, so their samples are transformations of the same noise
    and the galleries are directly comparable.  Rescaling uses the global
    ensemble min/max (per-sample scaling would destroy comparability
    across samples); the raw coefficients are kept on the ensemble.
    """
    if levels < 1:
        raise InvalidSpecError("the gallery needs at least one refinement level")
    spec = _gallery_spec(family.lower(), levels, grid_size)
    ens = sample_coefficients(spec, n_samples, seed)
    synthesize_ensemble(ens)
    lo = float(ens.grid_values.min())
    hi = float(ens.grid_values.max())
    span = hi - lo if hi > lo else 1.0
    rescaled = (ens.grid_values - lo) / span
    return GalleryEnsemble(
        family=family.lower(), ensemble=ens, rescaled_grid=rescaled,
        offset=lo, scale=span,
    )


# ---------------------------------------------------------------------------
# fractional lower-order moments of the field norm
# ---------------------------------------------------------------------------

@dataclass
class FlomEstimate:
    estimate: float
    stderr: float
    truncation_trace: tuple  # ((N, estimate), ...) at N/4, N/2, N


def flom_estimate(ensemble: FieldEnsemble, p: float, q: float) -> FlomEstimate:
    """Monte Carlo estimate of E ||u||^p with the ell^q coefficient norm.

    Requires 0 < p <= q and p below the spec's stability index (absolute
    moments of order >= alpha are infinite, so the estimator would
    diverge).  Alongside the full estimate, the same statistic is
    computed at quarter and half truncation as a convergence trace: the
    partial sums converge in p-th mean, so successive differences should
    shrink.
    """
    alpha = ensemble.spec.alpha
    if not 0.0 < p <= q:
        raise OutOfRangeError("p", "need 0 < p <= q")
    if alpha < 2.0 and p >= alpha:
        raise MomentOrderTooHighError(
            f"moment order p={p} >= alpha={alpha}: E||u||^p is infinite"
        )
    coeffs = ensemble.coefficients
    n_total = coeffs.shape[1]
    trace = []
    for n_trunc in (max(n_total // 4, 1), max(n_total // 2, 1), n_total):
        block = np.abs(coeffs[:, :n_trunc])
        if math.isinf(q):
            norms = block.max(axis=1)
        else:
            norms = (block ** q).sum(axis=1) ** (1.0 / q)
        vals = norms ** p
        trace.append((n_trunc, float(vals.mean())))
    est = trace[-1][1]
    if vals.size > 1 and vals.max() > vals.min():
        stderr = float(vals.std(ddof=1) / math.sqrt(vals.size))
    else:
        stderr = 0.0  # constant statistic (e.g. location-only field)
    return FlomEstimate(estimate=est, stderr=stderr, truncation_trace=tuple(trace))


# ---------------------------------------------------------------------------
# empirical frame bound of the synthesis operator
# ---------------------------------------------------------------------------

@dataclass
class QFrameReport:
    max_ratio: float
    verdict: str  # "parseval_tight" | "empirical_bound"
    ratios: np.ndarray


def qframe_upper_check(basis: BasisSpec, q: float, n_trials: int,
                       seed: int) -> QFrameReport:
    """Empirical upper bound for ||sum_n v_n psi_n|| <= C ||v||_{ell^q}.

    Draws Gaussian coefficient vectors, synthesizes them, and reports the
    largest ratio of the synthesis norm (grid L^q, or ell^q for sequence
    bases) to the coefficient ell^q norm.  For the orthonormal step-
    wavelet basis with q = 2 the ratio is 1 up to grid quadrature error;
    for other bases the constant is recorded as a measured quantity.
    """
    gen = rng_mod.make_rng(seed)
    n = basis_size(basis) or 64
    coeffs = gen.standard_normal((n_trials, n))
    if isinstance(basis, EuclideanSequence):
        ratios = np.ones(n_trials)
    else:
        grid = default_grid(basis)
        fields = synthesize(basis, coeffs, grid)
        dx = 1.0 / grid.size
        if math.isinf(q):
            synth_norm = np.abs(fields).max(axis=1)
        else:
            synth_norm = ((np.abs(fields) ** q).sum(axis=1) * dx) ** (1.0 / q)
        coeff_norm = (np.abs(coeffs) ** q).sum(axis=1) ** (1.0 / q)
        ratios = synth_norm / coeff_norm
    max_ratio = float(ratios.max())
    orthonormal = isinstance(basis, HaarWavelet) and basis.unit_norm and q == 2.0
    verdict = "parseval_tight" if orthonormal and abs(max_ratio - 1.0) < 1e-3 \
        else "empirical_bound"
    return QFrameReport(max_ratio=max_ratio, verdict=verdict, ratios=ratios)
