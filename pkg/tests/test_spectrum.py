import math
import warnings

import numpy as np
import pytest
from scipy import integrate, special

from apnorm import phases, spectrum
from apnorm.errors import DispatchError, DomainError
from apnorm.modulus import TWO_PI
from apnorm.spectrum import (
    DFTEngine,
    ExactAffineEngine,
    ap_norm,
    band_size,
    compute_spectrum,
    triangle_coeffs,
    triangle_tail,
)
from apnorm.spectrum.exact import _piece_integrals

pytestmark = pytest.mark.filterwarnings("ignore:dft engine:UserWarning")


def quad_coefficients(pieces, lam, offsets):
    out = []
    for k in offsets:
        total = 0.0j
        for (x0, x1), slope, value in pieces:

            def arg(t):
                return lam * (value + slope * (t - x0)) - k * t

            options = dict(epsabs=1e-13, epsrel=1e-12)
            re = integrate.quad(lambda t: math.cos(arg(t)), x0, x1, **options)[0]
            im = integrate.quad(lambda t: math.sin(arg(t)), x0, x1, **options)[0]
            total += re + 1j * im
        out.append(total / TWO_PI)
    return np.array(out)


class TestBand:
    def test_band_size(self):
        assert band_size(16.0) == 64
        assert band_size(-16.0) == 64
        assert band_size(0.1) == 1
        assert band_size(10.0, exponent=1.0, factor=2.0) == 20

    def test_band_validated(self):
        with pytest.raises(DomainError):
            spectrum.exact().compute(phases.tent(), 4.0, 0)


class TestExactEngine:
    def test_closed_form_matches_quadrature(self):
        rng = np.random.default_rng(7)
        offsets = np.arange(-4, 5)
        for _ in range(20):
            inner = np.sort(rng.uniform(0.3, TWO_PI - 0.3, size=2))
            breaks = np.concatenate([[0.0], inner, [TWO_PI]])
            pieces = phases.AffinePieces(
                breaks, rng.uniform(-2.0, 2.0, 3), rng.uniform(-1.0, 1.0, 3)
            )
            lam = float(rng.uniform(1.0, 6.0))
            np.testing.assert_allclose(
                _piece_integrals(pieces, lam, offsets),
                quad_coefficients(pieces, lam, offsets),
                atol=1e-10,
            )

    def test_parseval(self):
        spec = compute_spectrum(phases.tent(), 8.0, 64)
        assert spec.engine == "exact"
        assert spec.band_power() <= 1.0 + 1e-12
        assert spec.band_power() + spec.tail_l2**2 >= 1.0 - 1e-9

    def test_modulation_shifts_centre(self):
        base = compute_spectrum(phases.tent(), 8.0, 32)
        shifted = compute_spectrum(phases.diffeo(phases.tent(), 1.0), 8.0, 32)
        assert shifted.centre == 8
        assert shifted.coefficient(8) == pytest.approx(base.coefficient(0), abs=1e-12)
        np.testing.assert_allclose(shifted.coefficients, base.coefficients, atol=1e-12)
        # equal up to rounding of the lifted slopes
        for p in (1.0, 1.5, 2.0):
            moved, still = ap_norm(shifted, p), ap_norm(base, p)
            assert moved.lo == pytest.approx(still.lo, rel=1e-10)
            assert moved.hi == pytest.approx(still.hi, rel=1e-10)

    def test_fractional_winding_rejected(self):
        with pytest.raises(DomainError):
            compute_spectrum(phases.linear_phase(3), 2.5, 16)

    def test_conjugation(self):
        phi = phases.tent(2.0)
        forward = compute_spectrum(phi, 6.0, 48)
        backward = compute_spectrum(phi, -6.0, 48)
        np.testing.assert_allclose(
            backward.coefficients, np.conj(forward.coefficients[::-1]), atol=1e-12
        )
        assert ap_norm(backward, 1.0).lo == pytest.approx(ap_norm(forward, 1.0).lo)

    @pytest.mark.parametrize(
        "phi",
        [phases.linear_phase(3), phases.constant(2.0)],
        ids=["linear", "constant"],
    )
    def test_single_piece_is_a_spike(self, phi):
        spec = compute_spectrum(phi, 2.0, 16)
        assert spec.spike
        assert spec.band_error == 0.0
        for p in (1.0, 1.5, 2.0):
            estimate = ap_norm(spec, p)
            assert estimate.lo == estimate.hi == pytest.approx(1.0, abs=1e-15)
            assert estimate.tail == 0.0

    def test_smooth_phase_dispatch(self):
        with pytest.raises(DispatchError):
            spectrum.coeffs_affine_exact(phases.cos_phase(), 8.0, 16)

    def test_threads_do_not_change_result(self):
        phi = phases.tent(3.0)
        single = ExactAffineEngine(threads=1, chunk=16).compute(phi, 12.0, 200)
        pooled = ExactAffineEngine(threads=4, chunk=16).compute(phi, 12.0, 200)
        np.testing.assert_array_equal(single.coefficients, pooled.coefficients)

    def test_roundoff_reported(self):
        spec = compute_spectrum(phases.tent(), 8.0, 64)
        assert 0.0 < spec.band_error < 1e-12

    def test_coefficients_read_only(self):
        spec = compute_spectrum(phases.tent(), 4.0, 8)
        with pytest.raises(ValueError):
            spec.coefficients[0] = 0.0


class TestDFTEngine:
    def test_jacobi_anger(self):
        spec = spectrum.coeffs_dft(phases.cos_phase(), 16.0, 64)
        k = spec.frequencies
        expected = (1j) ** k * special.jv(k, 16.0)
        np.testing.assert_allclose(spec.coefficients, expected, atol=1e-8)
        assert spec.band_error < 1e-8

    def test_total_power(self):
        spec = spectrum.coeffs_dft(phases.cos_phase(), 16.0, 64)
        assert spec.total_power == pytest.approx(1.0, abs=1e-10)
        assert spec.energy == pytest.approx(0.5)

    def test_warns_once_per_engine(self):
        engine = DFTEngine()
        with pytest.warns(UserWarning, match="empirical"):
            engine.compute(phases.cos_phase(), 4.0, 8)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            engine.compute(phases.cos_phase(), 4.0, 8)

    def test_oversample_validated(self):
        with pytest.raises(DomainError):
            DFTEngine(oversample=2)

    def test_agrees_with_exact_engine(self):
        phi = phases.tent()
        exact = compute_spectrum(phi, 8.0, 32)
        sampled = compute_spectrum(phi, 8.0, 32, engine=spectrum.dft())
        gap = np.max(np.abs(exact.coefficients - sampled.coefficients))
        assert gap <= sampled.band_error + exact.band_error
        assert gap < 1e-3

    def test_pointwise_tail_on_staircase(self, cantor_phase):
        spec = compute_spectrum(cantor_phase, 16.0, 128, engine=spectrum.dft())
        k = np.abs(spec.offsets)
        outer = k > 2.0 * abs(spec.lam) * spec.sup_deriv
        assert np.any(outer)
        k = k[outer]
        bound = spec.tail_pointwise * (1.0 + 10.0 * spec.band_error * k)
        assert np.all(np.abs(spec.coefficients[outer]) * k <= bound + 1e-12)

    def test_default_engine_choice(self):
        assert isinstance(spectrum.default_engine(phases.tent()), ExactAffineEngine)
        assert isinstance(spectrum.default_engine(phases.cos_phase()), DFTEngine)


class TestNorms:
    @pytest.fixture(scope="class")
    def tent_spec(self):
        return compute_spectrum(phases.tent(2.0), 8.0, 128)

    def test_p_nesting(self, tent_spec):
        lows = [ap_norm(tent_spec, p).lo for p in (1.0, 1.25, 1.5, 2.0)]
        assert all(a >= b - 1e-12 for a, b in zip(lows, lows[1:]))

    def test_p_two_floor_below_every_ceiling(self, tent_spec):
        floor = ap_norm(tent_spec, 2.0).lo
        for p in (1.0, 1.25, 1.5, 2.0):
            assert floor <= ap_norm(tent_spec, p).hi + 1e-12

    def test_p_two_brackets_one(self, tent_spec):
        estimate = ap_norm(tent_spec, 2.0)
        assert estimate.lo <= 1.0 <= estimate.hi
        assert estimate.half_width < 1e-2

    def test_interval_is_ordered(self, tent_spec):
        estimate = ap_norm(tent_spec, 1.0)
        assert estimate.lo <= estimate.hi
        assert estimate.ideal_lo <= estimate.lo and estimate.hi <= estimate.ideal_hi
        assert estimate.cutoffs["band"] == 128.0

    def test_pointwise_tail(self, tent_spec):
        # beyond 2 lam sup|phi'| every coefficient obeys C / |k - centre|
        offsets = tent_spec.offsets
        threshold = 2.0 * abs(tent_spec.lam) * tent_spec.sup_deriv
        outer = np.abs(offsets) >= threshold
        bound = tent_spec.tail_pointwise / np.abs(offsets[outer])
        assert np.all(np.abs(tent_spec.coefficients[outer]) <= bound + 1e-12)

    def test_pointwise_cutoffs_reported(self, tent_spec):
        estimate = ap_norm(tent_spec, 1.0)
        assert estimate.cutoffs["pointwise_from"] == pytest.approx(
            2.0 * 8.0 * 2.0 / math.pi
        )
        assert estimate.cutoffs["energy_from"] >= 128.0

    def test_small_band_uses_energy_only(self):
        spec = compute_spectrum(phases.tent(2.0), 8.0, 4)
        assert "pointwise_from" not in ap_norm(spec, 1.5).cutoffs

    @pytest.mark.parametrize("p", [0.5, 2.5])
    def test_p_range(self, tent_spec, p):
        with pytest.raises(DomainError):
            ap_norm(tent_spec, p)

    def test_bessel_sum(self):
        spec = compute_spectrum(phases.cos_phase(), 16.0, 64)
        k = np.arange(-400, 401)
        expected = float(np.sum(np.abs(special.jv(k, 16.0))))
        assert ap_norm(spec, 1.0).contains(expected, slack=1e-9)


class TestTriangle:
    def test_sums_to_one(self):
        cutoff = 10**6
        k = np.arange(-cutoff, cutoff + 1)
        total = float(np.sum(triangle_coeffs(1.0, k)))
        assert abs(total - 1.0) <= triangle_tail(1.0, cutoff)
        assert abs(total - 1.0) < 1e-6

    def test_centre_value(self):
        assert triangle_coeffs(0.5, 0) == pytest.approx(0.5 / TWO_PI)

    def test_non_negative(self):
        assert np.all(triangle_coeffs(2.0, np.arange(-50, 51)) >= 0.0)

    @pytest.mark.parametrize("epsilon", [0.0, 4.0])
    def test_width_range(self, epsilon):
        with pytest.raises(DomainError):
            triangle_coeffs(epsilon, np.arange(3))
