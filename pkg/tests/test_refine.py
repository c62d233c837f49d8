import numpy as np
import pytest

from apnorm import refine
from apnorm.errors import DomainError


def midpoint_sum(n: int) -> np.ndarray:
    # midpoint rule for the integral of x**2 over [0, 1]; error 1 / (12 n**2)
    x = (np.arange(n) + 0.5) / n
    return np.array([np.sum(x * x) / n])


class TestGridRefinement:
    def test_doubling_runs_twice(self):
        result = refine.doubling().execute(midpoint_sum, 16)
        assert result.runs == 2
        assert result.resolution == 32
        expected = 1.0 / (12.0 * 16**2) - 1.0 / (12.0 * 32**2)
        assert result.change == pytest.approx(expected, rel=1e-9)
        assert result.error == pytest.approx(4.0 * result.change)

    def test_error_covers_true_error(self):
        result = refine.doubling().execute(midpoint_sum, 64)
        assert abs(result.values[0] - 1.0 / 3.0) <= result.error

    def test_until_stable_stops_early(self):
        result = refine.until_stable(1e-6, max_refinements=10).execute(midpoint_sum, 8)
        assert result.change <= 1e-6
        assert result.runs < 11

    def test_until_stable_respects_cap(self):
        result = refine.until_stable(0.0, max_refinements=3).execute(midpoint_sum, 8)
        assert result.runs == 4
        assert result.resolution == 64

    def test_custom_factor(self):
        seen = []

        def record(n):
            seen.append(n)
            return np.zeros(3)

        result = refine.GridRefinement(max_refinements=2, factor=4).execute(record, 10)
        assert seen == [10, 40, 160]
        assert result.change == 0.0

    @pytest.mark.parametrize("kwargs", [{"max_refinements": 0}, {"factor": 1}])
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            refine.GridRefinement(**kwargs)
