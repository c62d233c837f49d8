import math

import pytest

from apnorm.errors import DomainError
from apnorm.lab import NormRow, compare_envelopes, fit_exponent, fit_report
from apnorm.lab.fitting import default_window, full_window


class TestFitExponent:
    def test_exact_power_law(self, norm_rows):
        fit = fit_exponent(norm_rows(), 1.0)
        assert fit.exponent == pytest.approx(0.5, abs=1e-12)
        assert fit.intercept == pytest.approx(0.0, abs=1e-10)
        assert fit.residual_max < 1e-10
        assert fit.count == 4
        assert fit.window == (1024.0, 8192.0)

    def test_interval_widths_weight_equally(self, norm_rows):
        fit = fit_exponent(norm_rows(exponent=0.75, width=0.1), 1.0)
        assert fit.exponent == pytest.approx(0.75, abs=1e-12)
        assert list(fit.weights) == pytest.approx([2.0 / math.log(1.1 / 0.9)] * 4)

    def test_explicit_window(self, norm_rows):
        fit = fit_exponent(norm_rows(count=10), 1.0, window=(64.0, 512.0))
        assert fit.count == 4
        assert fit.window == (64.0, 512.0)

    def test_filters_by_p(self, norm_rows):
        rows = norm_rows(exponent=0.5, p=1.0) + norm_rows(exponent=0.25, p=1.5)
        assert fit_exponent(rows, 1.5).exponent == pytest.approx(0.25, abs=1e-12)

    def test_report_gives_both_windows(self, norm_rows):
        window, full = fit_report(norm_rows(), 1.0)
        assert window.count == 4 and full.count == 8
        assert full.window == (64.0, 8192.0)
        assert full.exponent == pytest.approx(0.5, abs=1e-12)

    def test_too_few_rows(self, norm_rows):
        with pytest.raises(DomainError, match="need 4"):
            fit_exponent(norm_rows(count=3), 1.0)

    def test_single_lambda(self):
        rows = [NormRow(64.0, 1.0, 2.0, 2.0, 64, 0.0, "exact")] * 4
        with pytest.raises(DomainError, match="single lambda"):
            fit_exponent(rows, 1.0, window=(1.0, 100.0))

    def test_non_positive_norm(self, norm_rows):
        rows = norm_rows()
        rows[-1] = NormRow(rows[-1].lam, 1.0, 0.0, 0.0, 64, 0.0, "exact")
        with pytest.raises(DomainError, match="non-positive"):
            fit_exponent(rows, 1.0)

    def test_missing_p(self, norm_rows):
        with pytest.raises(DomainError, match="no rows"):
            fit_exponent(norm_rows(), 2.0)

    def test_windows(self, norm_rows):
        rows = norm_rows(count=5)
        assert default_window(rows) == (256.0, 1024.0)
        assert full_window(rows) == (64.0, 1024.0)
        with pytest.raises(DomainError):
            default_window([])


class TestCompareEnvelopes:
    def test_matching_envelope(self, norm_rows):
        comparison = compare_envelopes(norm_rows(), lambda lam: lam**0.5, 1.0)
        assert comparison.constant == pytest.approx(1.0)
        assert comparison.spread == pytest.approx(1.0)
        assert len(comparison.lams) == 8

    def test_use_lower_ends(self, norm_rows):
        rows = norm_rows(width=0.1)
        comparison = compare_envelopes(rows, lambda lam: 2.0 * lam**0.5, 1.0, use="lo")
        assert comparison.min_ratio == pytest.approx(0.45)
        assert comparison.max_ratio == pytest.approx(0.45)

    def test_wrong_envelope_spreads(self, norm_rows):
        comparison = compare_envelopes(norm_rows(), math.log, 1.0, window=(100.0, 1e5))
        assert comparison.lams[0] == 128.0
        assert comparison.spread > 2.0

    def test_bad_use(self, norm_rows):
        with pytest.raises(DomainError):
            compare_envelopes(norm_rows(), math.log, 1.0, use="max")

    def test_empty_window(self, norm_rows):
        with pytest.raises(DomainError):
            compare_envelopes(norm_rows(), math.log, 1.0, window=(1.0, 2.0))
