"""Field ensembles: deterministic counter-based sampling, synthesis,
the matched two-family gallery, field-norm moments, and frame bounds."""

import math

import numpy as np
import pytest

from stableinfer import (
    DimensionMismatchError,
    Eigenbasis,
    EuclideanSequence,
    Explicit,
    HaarWavelet,
    HatHierarchical,
    InvalidSpecError,
    MomentOrderTooHighError,
    PowerLaw,
    StableFieldSpec,
    StableParams,
    default_grid,
    flom_estimate,
    qframe_upper_check,
    sample_coefficients,
    sample_stable,
    synthesize,
    synthesize_ensemble,
    wavelet_gallery_ensemble,
    wavelet_index,
)
from stableinfer import rng as srng
from stableinfer.series import SummabilityWarning
from stableinfer.gof import ks_two_sample_critical_value, ks_two_sample_statistic


def cauchy_field_spec(truncation, exponent=2.0):
    return StableFieldSpec.make(
        1.0, PowerLaw(1.0, exponent), EuclideanSequence(q=1.0), truncation,
    )


class TestSpecValidation:
    def test_truncation_beyond_basis(self):
        with pytest.raises(InvalidSpecError):
            StableFieldSpec.make(1.0, PowerLaw(1, 2), HaarWavelet(2), 8)

    def test_negative_scale_rejected(self):
        with pytest.raises(InvalidSpecError):
            StableFieldSpec.make(1.0, Explicit((1.0, -0.5)), EuclideanSequence(), 2)

    def test_skewness_bounds(self):
        with pytest.raises(InvalidSpecError):
            StableFieldSpec.make(1.0, PowerLaw(1, 2), EuclideanSequence(), 2,
                                 beta_seq=Explicit((0.0, 1.0)))

    def test_hash_stability(self):
        a = cauchy_field_spec(8)
        b = cauchy_field_spec(8)
        assert a.spec_hash() == b.spec_hash()
        assert a.spec_hash() != cauchy_field_spec(9).spec_hash()

    def test_wavelet_index_layout(self):
        assert wavelet_index(0, 0) == 1
        assert wavelet_index(3, 5) == 13


class TestSampling:
    def test_bitwise_determinism(self):
        spec = cauchy_field_spec(16)
        a = sample_coefficients(spec, 200, 9)
        b = sample_coefficients(spec, 200, 9)
        assert np.array_equal(a.coefficients, b.coefficients)

    def test_rows_are_counter_addressable(self):
        # any row range regenerated from its stream offset matches the batch
        full = srng.uniform_block(77, 64, 5)
        for lo, hi in ((0, 10), (13, 37), (63, 64)):
            assert np.array_equal(srng.uniform_rows(77, lo, hi, 5), full[lo:hi])

    def test_chunking_invariance(self):
        # the sampler chunks internally; a one-shot transform must agree
        spec = cauchy_field_spec(3)
        ens = sample_coefficients(spec, 50, 21)
        u = srng.uniform_block(21, 50, 3)
        from stableinfer.series import _coefficients_from_uniforms
        assert np.array_equal(ens.coefficients, _coefficients_from_uniforms(spec, u))

    def test_marginal_column_distribution(self):
        n = 10 ** 5
        spec = StableFieldSpec.make(
            1.0, Explicit((0.7, 0.2)), EuclideanSequence(q=1.0), 2,
            delta_seq=Explicit((0.5, 0.0)), beta_seq=Explicit((0.0, 0.3)),
        )
        ens = sample_coefficients(spec, n, 33)
        for col, params in [
            (0, StableParams.cauchy(0.5, 0.7)),
            (1, (1.0, 0.3, 0.2, 0.0)),
        ]:
            if isinstance(params, tuple):
                from stableinfer import validate_params
                params = validate_params(*params)
            ref = sample_stable(params, n, 1000 + col)
            d = ks_two_sample_statistic(ens.coefficients[:, col], ref)
            assert d < ks_two_sample_critical_value(n, n)

    def test_zero_scales_broadcast_locations(self):
        spec = StableFieldSpec.make(
            1.0, PowerLaw(0.0, 0.0), EuclideanSequence(q=1.0), 3,
            delta_seq=Explicit((1.0, -2.0, 3.0)),
        )
        ens = sample_coefficients(spec, 10, 5)
        assert np.array_equal(ens.coefficients, np.tile([1.0, -2.0, 3.0], (10, 1)))

    def test_zero_scale_survives_extreme_draws(self):
        # at small alpha a once-in-2^53 exponential draw overflows the
        # transform; a point-mass column must still come out as delta
        from stableinfer.series import _coefficients_from_uniforms
        spec = StableFieldSpec.make(
            0.25, Explicit((0.0, 1.0)), EuclideanSequence(q=1.0), 2,
            delta_seq=Explicit((5.0, 0.0)),
        )
        u = np.full((2, 2, 2), 0.5)
        u[:, :, 1] = 0.0  # forces the clipped-w branch
        coeffs = _coefficients_from_uniforms(spec, u)
        assert np.all(coeffs[:, 0] == 5.0)
        assert np.all(np.isfinite(coeffs))  # the live column stays finite too

    def test_divergent_scales_warn(self):
        spec = StableFieldSpec.make(1.0, PowerLaw(1.0, 0.5), EuclideanSequence(q=1.0), 4)
        with pytest.warns(SummabilityWarning):
            sample_coefficients(spec, 5, 1)


class TestSynthesize:
    def test_haar_single_mother_coefficient(self):
        basis = HaarWavelet(2, grid_size=8)
        coeffs = np.zeros(7)
        coeffs[0] = 1.0
        field = synthesize(basis, coeffs, default_grid(basis))
        assert np.array_equal(field, [1, 1, 1, 1, -1, -1, -1, -1])

    def test_zero_coefficients(self):
        basis = HaarWavelet(3, grid_size=64)
        assert not synthesize(basis, np.zeros(15)).any()

    def test_points_outside_unit_interval_get_zero(self):
        basis = HaarWavelet(1, grid_size=8)
        field = synthesize(basis, np.ones(3), np.array([-0.5, 0.25, 1.0, 1.5]))
        assert field[0] == 0.0
        assert field[2] == 0.0
        assert field[3] == 0.0
        assert field[1] != 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            synthesize(HaarWavelet(2), np.zeros(5))

    def test_parseval_against_direct_summation(self):
        # independent oracle: accumulate 2^{j/2} psi(2^j x - k) terms by loop
        basis = HaarWavelet(4, grid_size=2 ** 14)
        rng = np.random.default_rng(2)
        coeffs = rng.standard_normal(31)
        grid = default_grid(basis)
        direct = np.zeros_like(grid)
        idx = 0
        for j in range(5):
            for k in range(2 ** j):
                y = 2.0 ** j * grid - k
                psi = np.where((y >= 0) & (y < 0.5), 1.0,
                               np.where((y >= 0.5) & (y < 1.0), -1.0, 0.0))
                direct += coeffs[idx] * 2.0 ** (j / 2.0) * psi
                idx += 1
        field = synthesize(basis, coeffs, grid)
        assert np.allclose(field, direct)
        l2_grid = math.sqrt(float((field ** 2).mean()))
        l2_coeff = math.sqrt(float((coeffs ** 2).sum()))
        assert abs(l2_grid - l2_coeff) < 1e-3

    def test_truncation_refinement_shrinks(self):
        # fix one sample at the finest level; zeroing levels above J gives
        # the level-J synthesis, and successive refinements must shrink in L1
        levels = 6
        n = 2 ** (levels + 1) - 1
        spec = StableFieldSpec.make(
            1.0,
            Explicit(tuple(1.0 / (k + 1.0) ** 2 for k in range(n))),
            HaarWavelet(levels, grid_size=2 ** 12),
            n,
        )
        ens = sample_coefficients(spec, 20, 3)
        grid = default_grid(spec.basis)
        fields = []
        for j_keep in range(2, levels + 1):
            c = ens.coefficients.copy()
            c[:, 2 ** (j_keep + 1) - 1:] = 0.0
            fields.append(synthesize(spec.basis, c, grid))
        gaps = [np.abs(b - a).mean() for a, b in zip(fields, fields[1:])]
        assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))

    def test_hat_basis_is_continuous_tent(self):
        basis = HatHierarchical(0, grid_size=1024)
        field = synthesize(basis, np.array([1.0]), default_grid(basis))
        peak = np.argmax(field)
        assert abs(peak / 1024 - 0.5) < 0.01
        assert field.min() >= 0.0

    def test_eigenbasis_modes_orthonormal_on_grid(self):
        basis = Eigenbasis(PowerLaw(1.0, 1.0), 1.0, grid_size=2 ** 12)
        grid = default_grid(basis)
        f1 = synthesize(basis, np.array([1.0, 0.0]), grid)
        f2 = synthesize(basis, np.array([0.0, 1.0]), grid)
        assert (f1 * f2).mean() == pytest.approx(0.0, abs=1e-6)
        assert (f1 * f1).mean() == pytest.approx(1.0, abs=1e-6)

    def test_sequence_basis_passthrough(self):
        c = np.array([1.0, -2.0])
        assert np.array_equal(synthesize(EuclideanSequence(q=1.0), c), c)

    def test_synthesize_ensemble_attaches_grid(self):
        spec = StableFieldSpec.make(1.0, Explicit((1.0,) * 3), HaarWavelet(1, 64), 3)
        ens = synthesize_ensemble(sample_coefficients(spec, 4, 8))
        assert ens.grid_values.shape == (4, 64)


class TestGallery:
    def test_rescaled_to_unit_interval(self):
        g = wavelet_gallery_ensemble("cauchy", 5, 12, 404, grid_size=1024)
        assert g.rescaled_grid.min() == 0.0
        assert g.rescaled_grid.max() == 1.0

    def test_deterministic_rerun(self):
        a = wavelet_gallery_ensemble("cauchy", 4, 6, 7, grid_size=256)
        b = wavelet_gallery_ensemble("cauchy", 4, 6, 7, grid_size=256)
        assert np.array_equal(a.rescaled_grid, b.rescaled_grid)

    def test_families_share_base_draws(self):
        # the gaussian coefficients must be recoverable from the same
        # uniforms that generated the cauchy ones
        seed, levels, n_samples = 31, 4, 6
        g_gauss = wavelet_gallery_ensemble("gaussian", levels, n_samples, seed, 256)
        n = 2 ** (levels + 1) - 1
        u = srng.uniform_block(seed, n_samples, n)
        v = math.pi * (u[:, :, 0] - 0.5)
        w = -np.log1p(-u[:, :, 1])
        js = np.floor(np.log2(np.arange(1, n + 1))).astype(int)
        scale = (js + 1.0) ** -2.0 * 2.0 ** (-js.astype(float))
        std_normal = math.sqrt(2.0) * np.sin(v) * np.sqrt(w)
        assert np.allclose(g_gauss.ensemble.coefficients, scale * std_normal, rtol=1e-12)

    def test_heavy_tail_contrast(self):
        g_c = wavelet_gallery_ensemble("cauchy", 6, 20, 2026, grid_size=1024)
        g_g = wavelet_gallery_ensemble("gaussian", 6, 20, 2026, grid_size=1024)
        ratio = np.abs(g_c.ensemble.coefficients).max() / np.abs(g_g.ensemble.coefficients).max()
        assert ratio > 1.0

    def test_needs_a_refinement_level(self):
        with pytest.raises(InvalidSpecError):
            wavelet_gallery_ensemble("cauchy", 0, 4, 1)

    def test_unknown_family_rejected(self):
        with pytest.raises(InvalidSpecError):
            wavelet_gallery_ensemble("laplace", 3, 4, 1)


class TestFlom:
    def test_single_term_cauchy_half_moment(self):
        spec = StableFieldSpec.make(1.0, Explicit((1.0,)), EuclideanSequence(q=1.0), 1)
        ens = sample_coefficients(spec, 10 ** 5, 55)
        out = flom_estimate(ens, 0.5, 1.0)
        assert abs(out.estimate - math.sqrt(2.0)) < 3.0 * out.stderr

    def test_location_only_field_is_exact(self):
        spec = StableFieldSpec.make(
            1.0, PowerLaw(0.0, 0.0), EuclideanSequence(q=1.0), 2,
            delta_seq=Explicit((3.0, 4.0)),
        )
        ens = sample_coefficients(spec, 100, 1)
        out = flom_estimate(ens, 0.5, 1.0)
        assert out.estimate == pytest.approx(7.0 ** 0.5)
        assert out.stderr == 0.0

    def test_moment_order_guard(self):
        spec = cauchy_field_spec(4)
        ens = sample_coefficients(spec, 100, 1)
        with pytest.raises(MomentOrderTooHighError):
            flom_estimate(ens, 1.0, 1.0)

    def test_trace_contracts_with_truncation(self):
        spec = cauchy_field_spec(256)
        ens = sample_coefficients(spec, 10 ** 4, 12)
        out = flom_estimate(ens, 0.5, 1.0)
        (n1, e1), (n2, e2), (n3, e3) = out.truncation_trace
        assert (n1, n2, n3) == (64, 128, 256)
        assert abs(e3 - e2) < abs(e2 - e1)


class TestQFrame:
    def test_haar_parseval_tight(self):
        rep = qframe_upper_check(HaarWavelet(6, grid_size=2 ** 12), 2.0, 100, 3)
        assert rep.verdict == "parseval_tight"
        assert abs(rep.max_ratio - 1.0) < 1e-3

    def test_sequence_basis_ratio_is_one(self):
        rep = qframe_upper_check(EuclideanSequence(q=1.0), 1.0, 50, 3)
        assert np.all(rep.ratios == 1.0)

    def test_hat_constant_stabilises(self):
        a = qframe_upper_check(HatHierarchical(5, grid_size=2 ** 12), 2.0, 200, 3)
        b = qframe_upper_check(HatHierarchical(5, grid_size=2 ** 12), 2.0, 400, 3)
        assert np.isfinite(a.max_ratio)
        assert abs(b.max_ratio - a.max_ratio) / a.max_ratio < 0.10
