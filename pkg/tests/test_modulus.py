import math

import numpy as np
import pytest

from apnorm import modulus
from apnorm.errors import ConstructionError, DomainError
from apnorm.modulus import TWO_PI
from apnorm.parallel import parallel_map


class TestNormalisation:
    @pytest.mark.parametrize(
        "m",
        [
            modulus.power(0.5),
            modulus.power(1.0),
            modulus.power_log(0.5, 0.25),
            modulus.middle_thirds(),
        ],
        ids=["power", "lipschitz", "power-log", "middle-thirds"],
    )
    def test_omega_is_one_at_two_pi(self, m):
        assert m.omega(TWO_PI) == pytest.approx(1.0, rel=1e-15)
        assert m.omega(0.0) == 0.0

    def test_omega_vectorises(self, half):
        deltas = np.array([0.0, 1.0, TWO_PI])
        values = half.omega(deltas)
        assert values.shape == (3,)
        np.testing.assert_allclose(values, np.sqrt(deltas / TWO_PI), rtol=1e-15)

    def test_negative_length_rejected(self, half):
        with pytest.raises(DomainError):
            half.omega(-1.0)

    def test_describe(self, half):
        info = half.describe()
        assert info["kind"] == "power"
        assert info["alpha"] == 0.5
        assert info["normalization"] == pytest.approx(TWO_PI**-0.5)

    @pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
    def test_power_exponent_range(self, alpha):
        with pytest.raises(DomainError):
            modulus.power(alpha)

    def test_power_log_beta_bound(self):
        with pytest.raises(DomainError):
            modulus.power_log(0.5, 0.75)


class TestScales:
    def test_rho_zero_is_exact(self, half):
        assert half.rho(0) == TWO_PI

    @pytest.mark.parametrize("j", [1, 2, 5, 10, 20])
    def test_rho_power(self, half, j):
        assert half.rho(j) == pytest.approx(TWO_PI * 4.0**-j, rel=1e-12)
        assert half.omega(half.rho(j)) == pytest.approx(2.0**-j, rel=1e-12)

    def test_rho_negative_level(self, half):
        with pytest.raises(DomainError):
            half.rho(-1)

    def test_middle_thirds_first_level(self):
        assert modulus.middle_thirds().rho(1) == pytest.approx(TWO_PI / 3.0, rel=1e-12)

    @pytest.mark.parametrize("u", [1e-12, 1e-6, 1e-3, 0.5, 3.0, 6.0])
    def test_chi_inv_roundtrip(self, half, u):
        assert half.chi(half.chi_inv(u)) == pytest.approx(u, rel=1e-10)

    def test_chi_inv_endpoint(self, half):
        assert half.chi_inv(TWO_PI) == TWO_PI

    @pytest.mark.parametrize("u", [0.0, -1.0, 7.0])
    def test_chi_inv_domain(self, half, u):
        with pytest.raises(DomainError):
            half.chi_inv(u)

    def test_activation(self, half):
        assert half.activation(0) == pytest.approx(1.0 / TWO_PI)
        # chi(rho_j) = 2*pi * 8**-j at alpha = 1/2
        assert half.activation(3) == pytest.approx(8.0**3 / TWO_PI, rel=1e-10)

    def test_rho_cache_is_thread_safe(self):
        m = modulus.power(0.4)
        values = parallel_map(m.rho, list(range(1, 30)) * 4, threads=8)
        expected = [TWO_PI * 2.0 ** (-j / 0.4) for j in range(1, 30)] * 4
        np.testing.assert_allclose(values, expected, rtol=1e-12)


class TestDoubling:
    def test_holder_is_strict(self, half):
        assert half.strictly_doubling
        assert half.doubling_violation() is None

    def test_lipschitz_is_not_strict(self, lipschitz):
        assert not lipschitz.strictly_doubling
        assert lipschitz.doubling_violation(strict=True) == pytest.approx(TWO_PI)
        assert lipschitz.doubling_violation(strict=False) is None

    def test_power_log_strict(self):
        assert modulus.power_log(0.5, 0.25).strictly_doubling

    def test_non_doubling_table_rejected(self):
        # omega jumps by a factor 10 over one doubling
        with pytest.raises(ConstructionError) as info:
            modulus.tabulated([0.1, 0.2, TWO_PI], [0.01, 0.1, 1.0])
        assert info.value.scale is not None


class TestTabulated:
    def test_reproduces_power_law(self, half):
        nodes = [0.01, 0.1, 1.0, TWO_PI]
        table = modulus.tabulated(nodes, [math.sqrt(x) for x in nodes])
        deltas = np.array([1e-6, 0.003, 0.05, 0.5, 3.0, TWO_PI])
        np.testing.assert_allclose(table.omega(deltas), half.omega(deltas), rtol=1e-12)

    def test_rejects_decreasing_values(self):
        with pytest.raises(DomainError):
            modulus.tabulated([0.1, 1.0], [0.5, 0.4])

    def test_rejects_flat_first_segment(self):
        with pytest.raises(DomainError):
            modulus.tabulated([0.1, 1.0, TWO_PI], [0.5, 0.5, 1.0])


class TestEnvelopes:
    def test_theta_domain(self, half):
        with pytest.raises(DomainError):
            half.theta(1.0)

    def test_theta_increasing(self, half):
        values = [half.theta(2.0**i) for i in range(4, 14)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_theta_p_at_one(self, half):
        assert half.theta_p(1.5, 1.0) == 0.0

    @pytest.mark.parametrize("p", [1.2, 1.4, 1.8])
    def test_theta_p_integral_closed_form(self, half, p):
        # chi_inv(u) = (sqrt(2 pi) u) ** (2/3) at alpha = 1/2
        y = 5000.0
        c = TWO_PI ** (p / 3.0)
        power = 1.0 - 2.0 * p / 3.0
        expected = c * (y**power - 1.0) / power
        assert half.theta_p_integral(p, 1.0, y) == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize("p", [1.0, 2.0])
    def test_theta_p_open_range(self, half, p):
        with pytest.raises(DomainError):
            half.theta_p(p, 10.0)
