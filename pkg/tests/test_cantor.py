import numpy as np
import pytest

from apnorm import cantor
from apnorm.errors import ConstructionError, DomainError
from apnorm.modulus import TWO_PI
from apnorm.phases import probe_lip_ratio


@pytest.fixture(scope="module")
def levels(half):
    return cantor.build_levels(half, 6)


class TestLevels:
    def test_lengths_follow_rho(self, levels, half):
        expected = [half.rho(j) for j in range(7)]
        np.testing.assert_allclose(levels.lengths, expected, rtol=1e-15)
        assert levels.length == TWO_PI

    def test_children_are_flush(self, levels):
        first = cantor.cover(levels, 1)
        assert first[0, 0] == 0.0
        assert first[1, 1] == pytest.approx(TWO_PI, abs=1e-14)

    @pytest.mark.parametrize("j", [0, 1, 3, 6])
    def test_cover_shape_and_measure(self, levels, half, j):
        intervals = cantor.cover(levels, j)
        assert intervals.shape == (2**j, 2)
        assert cantor.measure(intervals) == pytest.approx(2**j * half.rho(j), rel=1e-12)
        # disjoint and increasing
        assert np.all(intervals[1:, 0] > intervals[:-1, 1])
        assert intervals[0, 0] >= 0.0 and intervals[-1, 1] <= TWO_PI + 1e-12

    def test_covers_are_nested(self, levels):
        parent = cantor.cover(levels, 3)
        child = cantor.cover(levels, 4)
        owner = np.searchsorted(parent[:, 0], child[:, 0], side="right") - 1
        assert np.all(child[:, 0] >= parent[owner, 0] - 1e-15)
        assert np.all(child[:, 1] <= parent[owner, 1] + 1e-15)

    def test_gaps(self, levels):
        holes = cantor.gaps(levels, 3)
        assert holes.shape == (7, 2)
        assert np.all(holes[:, 1] > holes[:, 0])
        total = cantor.measure(cantor.cover(levels, 3)) + cantor.measure(holes)
        assert total == pytest.approx(TWO_PI, rel=1e-14)

    def test_measure_clip(self):
        intervals = np.array([[0.0, 1.0], [2.0, 3.0]])
        assert cantor.measure(intervals, clip=(0.5, 2.5)) == pytest.approx(1.0)

    def test_branch(self, levels, half):
        branch = levels.branch(2)
        assert branch.depth == 4
        assert branch.length == pytest.approx(half.rho(2), rel=1e-15)
        with pytest.raises(DomainError):
            levels.branch(7)

    def test_levels_property(self, levels):
        assert [len(x) for x in levels.levels] == [2**j for j in range(7)]

    def test_depth_limits(self, half):
        with pytest.raises(DomainError):
            cantor.CantorLevels(half, cantor.MAX_DEPTH + 1)
        deep = cantor.CantorLevels(half, 30)
        with pytest.raises(DomainError):
            cantor.cover(deep, cantor.MAX_ENUMERATION_LEVEL + 1)

    def test_lipschitz_modulus_refused(self, lipschitz):
        with pytest.raises(ConstructionError) as info:
            cantor.build_levels(lipschitz, 3)
        assert info.value.scale == pytest.approx(TWO_PI)


class TestStaircase:
    def test_endpoints(self, levels):
        assert levels.staircase(0.0) == 0.0
        assert levels.staircase(TWO_PI) == 1.0

    def test_dyadic_values_on_gaps(self, levels, half):
        assert levels.staircase(np.pi) == 0.5
        left_gap = cantor.gaps(levels, 2)[0]
        assert levels.staircase(left_gap.mean()) == 0.25
        right_gap = cantor.gaps(levels, 2)[-1]
        assert levels.staircase(right_gap.mean()) == 0.75

    def test_monotone(self, levels):
        t = np.linspace(0.0, TWO_PI, 20001)
        sigma = levels.staircase(t)
        assert np.all(np.diff(sigma) >= -1e-15)

    def test_symmetry(self, levels):
        t = np.linspace(0.0, TWO_PI, 4001)
        total = levels.staircase(t) + levels.staircase(TWO_PI - t)
        np.testing.assert_allclose(total, 1.0, atol=1e-12)

    def test_gain_per_deepest_interval(self, levels):
        intervals = cantor.cover(levels, levels.depth)
        rise = levels.staircase(intervals[:, 1]) - levels.staircase(intervals[:, 0])
        np.testing.assert_allclose(rise, 2.0**-levels.depth, rtol=1e-9)

    def test_staircase_is_lip_omega(self, levels, half):
        # a window of length rho_j meets at most two level-j intervals
        ratio = probe_lip_ratio(levels.staircase, half, levels.depth)
        assert 0.9 <= ratio <= 2.0 + 1e-12

    def test_nodes(self, levels):
        nodes = levels.staircase_nodes
        assert nodes.shape == (64, 2)
        np.testing.assert_allclose(nodes[:, 1] - nodes[:, 0], 1.0 / 64)

    def test_module_function(self, levels):
        assert cantor.staircase(levels, np.pi) == levels.staircase(np.pi)


class TestDepthFor:
    @pytest.mark.parametrize("lam", [64.0, 4096.0, 1e6])
    def test_smallest_depth(self, half, lam):
        depth = cantor.depth_for(half, lam)
        assert lam * half.chi(half.rho(depth)) <= 0.1
        if depth > 1:
            assert lam * half.chi(half.rho(depth - 1)) > 0.1

    def test_minimum(self, half):
        assert cantor.depth_for(half, 2.0, minimum=5) == 5
