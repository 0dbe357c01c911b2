import math

import numpy as np
import pytest

from qhj_spectra import (
    DegenerateVectorError,
    GridSpec,
    HardMismatchError,
    PotentialParams,
    default_grid,
    enumerate_qes_sets,
    lowest_eigenvalues,
    node_count,
    solve_classification,
    verify_qes,
)


def quick_grid(params, big_l=None, n=2001):
    big_l = big_l if big_l is not None else default_grid(params).half_width_L
    return GridSpec(half_width_L=big_l, point_count_N=n)


class TestGridSpec:
    def test_step(self):
        grid = GridSpec(half_width_L=5.0, point_count_N=999)
        assert grid.step == pytest.approx(0.01)

    def test_points_symmetric(self):
        grid = GridSpec(half_width_L=3.0, point_count_N=599)
        x = grid.points()
        assert len(x) == 599
        assert np.allclose(x, -x[::-1])

    def test_refined_halves_step(self):
        grid = GridSpec(half_width_L=3.0, point_count_N=599)
        assert grid.refined().step == pytest.approx(grid.step / 2.0)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            GridSpec(half_width_L=3.0, point_count_N=100)


class TestDefaultGrid:
    def test_unit_parameters(self):
        grid = default_grid(PotentialParams(1.0, -3.0, 1.0))
        assert grid.half_width_L == pytest.approx(math.acosh(40.0))
        assert grid.step <= 0.002

    def test_strong_well_hits_floor(self):
        grid = default_grid(PotentialParams(100.0, -3.0, 1.0))
        assert grid.half_width_L == pytest.approx(math.acosh(10.0))

    def test_tail_criterion(self):
        for v1, alpha in [(1.0, 1.0), (0.25, 0.5), (100.0, 1.0), (9.0, 3.0)]:
            params = PotentialParams(v1, -3.0, alpha)
            grid = default_grid(params)
            assert params.s * math.cosh(alpha * grid.half_width_L) >= 40.0 - 1e-9


class TestNodeCount:
    def test_nodeless(self):
        assert node_count(np.exp(-np.linspace(-3, 3, 500) ** 2)) == 0

    def test_single_node(self):
        x = np.linspace(-4, 4, 801)
        assert node_count(np.sinh(x) * np.exp(-np.cosh(x))) == 1

    def test_tiny_entries_ignored(self):
        vector = np.array([1e-15, -1e-16, 1.0, 2.0, 1e-17, -1e-15])
        assert node_count(vector) == 0

    def test_all_zero_rejected(self):
        with pytest.raises(DegenerateVectorError):
            node_count(np.zeros(10))


class TestLowestEigenvalues:
    def test_lambda_three_halves_spectrum(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        spectrum = lowest_eigenvalues(params, quick_grid(params, n=4001), k=3)
        r = math.sqrt(17.0)
        expected = [-(1.0 + r) / 2.0, -1.0, (r - 1.0) / 2.0]
        assert list(spectrum.eigenvalues) == pytest.approx(expected, abs=2e-5)

    def test_lambda_one_spectrum(self):
        params = PotentialParams(1.0, -2.0, 1.0)
        spectrum = lowest_eigenvalues(params, quick_grid(params, n=4001), k=2)
        assert list(spectrum.eigenvalues) == pytest.approx([-1.25, 0.75], abs=2e-5)

    def test_single_level(self):
        params = PotentialParams(1.0, -1.0, 1.0)
        spectrum = lowest_eigenvalues(params, quick_grid(params, n=4001), k=1)
        assert spectrum.eigenvalues[0] == pytest.approx(0.0, abs=2e-5)

    def test_sturm_node_counts(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        spectrum = lowest_eigenvalues(params, quick_grid(params, n=2001), k=5)
        for j in range(5):
            assert node_count(spectrum.eigenvectors[:, j]) == j

    def test_k_too_large_rejected(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        with pytest.raises(ValueError):
            lowest_eigenvalues(params, quick_grid(params, n=500), k=51)

    def test_boundary_insensitivity(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        base = default_grid(params)
        a = lowest_eigenvalues(params, quick_grid(params, base.half_width_L, 6001), k=2)
        b = lowest_eigenvalues(
            params, quick_grid(params, 1.2 * base.half_width_L, 7201), k=2
        )
        # compare through Richardson-free values on matched steps: the step
        # sizes differ slightly, so verify against the analytic energies
        for values in (a.eigenvalues, b.eigenvalues):
            assert values[1] == pytest.approx(-1.0, abs=1e-4)


class TestVerify:
    def test_lambda_one_passes(self):
        params = PotentialParams(1.0, -2.0, 1.0)
        report = verify_qes(
            params, enumerate_qes_sets(1.0), tolerance=1e-4,
            grid=quick_grid(params, n=2001),
        )
        assert report.overall_pass
        assert [r.energy_analytic for r in report.rows] == [-1.25, 0.75]
        assert [r.node_count_oracle for r in report.rows] == [0, 1]
        assert report.convergence_order_estimate == pytest.approx(2.0, abs=0.1)

    def test_lambda_three_halves_passes(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        report = verify_qes(
            params, enumerate_qes_sets(1.5), tolerance=1e-4,
            grid=quick_grid(params, n=2001),
        )
        assert report.overall_pass
        assert [r.node_count_oracle for r in report.rows] == [0, 1, 2]
        assert all(r.parity_match for r in report.rows)
        assert len(report.unmatched_oracle) > 0  # non-QES levels above the block

    def test_unmatched_levels_lie_above_qes_block(self):
        params = PotentialParams(1.0, -3.0, 1.0)
        report = verify_qes(
            params, enumerate_qes_sets(1.5), tolerance=1e-4,
            grid=quick_grid(params, n=2001),
        )
        top_qes = max(r.energy_analytic for r in report.rows)
        assert all(e > top_qes for e in report.unmatched_oracle)

    def test_wrong_energy_is_hard_mismatch(self):
        params = PotentialParams(1.0, -2.0, 1.0)
        classification = enumerate_qes_sets(1.0)
        levels = solve_classification(params, classification)

        class Shifted:
            def __init__(self, level, energy):
                self._level = level
                self.energy = energy

            def __getattr__(self, name):
                return getattr(self._level, name)

        fake = [Shifted(levels[0], -1.7), levels[1]]
        with pytest.raises(HardMismatchError):
            verify_qes(
                params, classification, tolerance=1e-4,
                grid=quick_grid(params, n=2001), analytic_levels=fake,
            )

    def test_collision_is_hard_mismatch(self):
        params = PotentialParams(1.0, -2.0, 1.0)
        classification = enumerate_qes_sets(1.0)
        levels = solve_classification(params, classification)

        class Shifted:
            def __init__(self, level, energy):
                self._level = level
                self.energy = energy

            def __getattr__(self, name):
                return getattr(self._level, name)

        fake = [levels[0], Shifted(levels[1], levels[0].energy)]
        with pytest.raises(HardMismatchError, match="collision"):
            verify_qes(
                params, classification, tolerance=1e-4,
                grid=quick_grid(params, n=2001), analytic_levels=fake,
            )

    def test_empty_classification_rejected(self):
        params = PotentialParams(1.0, -1.4, 1.0)
        with pytest.raises(ValueError):
            verify_qes(params, enumerate_qes_sets(0.7))

    def test_convergence_ratio_near_four(self):
        params = PotentialParams(1.0, -2.0, 1.0)
        report = verify_qes(
            params, enumerate_qes_sets(1.0), tolerance=1e-4,
            grid=quick_grid(params, n=2001),
        )
        for row in report.rows:
            assert 3.5 <= row.gap_h / row.gap_half_h <= 4.5
