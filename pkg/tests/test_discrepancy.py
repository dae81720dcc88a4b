import math
import unittest

import numpy as np
from pydantic import ValidationError

from discrepancy import (
    MollifiedParams,
    convolve_indicator,
    disc,
    disc_annulus_identity_residual,
    disc_many,
    disc_mollified,
    disc_mollified_many,
    disc_mollified_parts,
    grid_mean,
    grid_mean_exact,
    mollification_inequality_check,
    mollified_indicator,
    sandwich_check,
    sandwich_pointwise,
    shift_grid,
)
from discrepancy.mollified import _ellipse_measure, _ellipse_nearest_distance
from lattice_counter import DomainSpec, ShiftVec, count
from special_functions import bump_profile


def _grid_convolution(domain, rho, point, support, n=801):
    """Midpoint-rule sum of phi_support(y) over y with point + y in rho * domain."""
    a, b = domain.axes
    h = 2.0 * support / n
    axis = -support + h * (np.arange(n) + 0.5)
    y1, y2 = np.meshgrid(axis, axis, indexing="ij")
    weight = bump_profile(np.hypot(y1, y2).ravel() / support).reshape(y1.shape) / support ** 2
    q1 = (point[0] + y1) / (a * rho)
    q2 = (point[1] + y2) / (b * rho)
    inside = q1 * q1 + q2 * q2 <= 1.0
    return float(np.sum(weight * inside) * h * h)


class DiscTests(unittest.TestCase):
    def test_unit_disk(self):
        sample = disc(DomainSpec.disk(), 1.0)
        self.assertEqual(sample.count, 5)
        self.assertAlmostEqual(sample.value, 5.0 - math.pi, places=12)
        self.assertEqual(sample.value, sample.count - sample.measure)

    def test_annulus_uses_unscaled_measure(self):
        sample = disc(DomainSpec.annulus(0.5), 5.0)
        self.assertEqual(sample.count, 28)
        self.assertAlmostEqual(sample.value, 28.0 - 10.0 * math.pi, places=12)

    def test_disc_many_matches_disc(self):
        shifts = np.array([[0.1, 0.2], [0.9, 0.3], [0.5, 0.5]])
        values = disc_many(DomainSpec.ellipse(1.5, 0.8), 12.0, shifts)
        for row, value in zip(shifts, values):
            self.assertEqual(disc(DomainSpec.ellipse(1.5, 0.8), 12.0, ShiftVec(x1=row[0], x2=row[1])).value, value)

    def test_identity_residual_examples(self):
        self.assertEqual(disc_annulus_identity_residual(7.3, 0.2, ShiftVec(x1=0.11, x2=0.43)), 0.0)
        self.assertEqual(disc_annulus_identity_residual(5.5, 0.5), 12.0)
        self.assertEqual(disc_annulus_identity_residual(3.0, 0.1, ShiftVec(x1=0.5, x2=0.5)), 0.0)

    def test_identity_residual_vanishes_for_generic_shifts(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            t = float(rng.uniform(0.01, 0.99))
            R = float(rng.uniform(1.0 + t, 80.0))
            shift = ShiftVec(x1=float(rng.random()), x2=float(rng.random()))
            self.assertEqual(disc_annulus_identity_residual(R, t, shift), 0.0)

    def test_identity_residual_rejects_small_inner_radius(self):
        with self.assertRaises(ValueError):
            disc_annulus_identity_residual(1.2, 0.5)


class GridMeanTests(unittest.TestCase):
    def test_shift_grid_layout(self):
        grid = shift_grid(4)
        self.assertEqual(grid.shape, (16, 2))
        self.assertEqual(tuple(grid[1]), (0.0, 0.25))
        self.assertEqual(tuple(grid[4]), (0.25, 0.0))
        with self.assertRaises(ValueError):
            shift_grid(0)

    def test_grid_mean_matches_dilated_count(self):
        for R, m in ((20.0, 256), (10.0, 64), (7.3, 33)):
            self.assertAlmostEqual(grid_mean(DomainSpec.disk(), R, m), grid_mean_exact(R, m), delta=1e-9 * R * R)

    def test_grid_mean_is_small(self):
        self.assertLess(abs(grid_mean_exact(20.0, 256)), 0.05)
        for R in (10.0, 50.0):
            scaled = [abs(grid_mean_exact(R, m)) * m for m in (64, 128, 256, 512)]
            self.assertLess(max(scaled), 10.0 * math.sqrt(R))


class MollifiedParamsTests(unittest.TestCase):
    def test_rejects_bad_delta(self):
        for delta in (0.0, 1.0, -1.5, float("nan")):
            with self.assertRaises(ValidationError):
                MollifiedParams(delta=delta)

    def test_rejects_coarse_quadrature(self):
        with self.assertRaises(ValidationError):
            MollifiedParams(delta=0.1, quad_points=8)

    def test_default_quadrature_from_config(self):
        self.assertGreaterEqual(MollifiedParams(delta=0.1).quad_points, 16)


class ConvolutionTests(unittest.TestCase):
    def test_full_support_has_unit_mass(self):
        values = convolve_indicator(DomainSpec.disk(), 10.0, np.array([[0.0, 0.0], [3.0, 4.0]]), 0.5)
        np.testing.assert_allclose(values, 1.0, atol=1e-9)

    def test_deep_points_are_exact(self):
        domain = DomainSpec.disk()
        points = np.array([[0.0, 0.0], [9.85, 0.0], [10.15, 0.0], [0.0, 30.0]])
        values = mollified_indicator(domain, 10.0, points, 0.1)
        self.assertEqual(values[0], 1.0)
        self.assertEqual(values[1], 1.0)
        self.assertEqual(values[2], 0.0)
        self.assertEqual(values[3], 0.0)

    def test_disk_convolution_matches_grid_sum(self):
        domain = DomainSpec.disk()
        for point in ((9.97, 0.0), (7.0, 7.1), (0.0, -10.04)):
            value = convolve_indicator(domain, 10.0, np.array([point]), 0.1)[0]
            self.assertAlmostEqual(value, _grid_convolution(domain, 10.0, point, 0.1), delta=2e-3)

    def test_half_plane_limit(self):
        # a point on a large circle sees half the bump
        value = convolve_indicator(DomainSpec.disk(), 1e5, np.array([[1e5, 0.0]]), 0.5)[0]
        self.assertAlmostEqual(value, 0.5, delta=1e-5)

    def test_ellipse_measure_matches_angular_sampling(self):
        theta = np.linspace(0.0, 2.0 * math.pi, 200000, endpoint=False)
        ax, bx = 6.0, 3.0
        for px, py, r in ((5.9, 0.1, 0.3), (0.2, 2.95, 0.2), (4.0, 2.2, 0.25), (0.0, 0.0, 0.5)):
            exact = _ellipse_measure(ax, bx, np.array([px]), np.array([py]), np.array([r]))[0]
            x = (px + r * np.cos(theta)) / ax
            y = (py + r * np.sin(theta)) / bx
            sampled = 2.0 * math.pi * np.mean(x * x + y * y <= 1.0)
            self.assertAlmostEqual(exact, sampled, delta=2e-4)

    def test_ellipse_nearest_distance(self):
        distance = _ellipse_nearest_distance(6.0, 3.0, np.array([5.5, 0.0]), np.array([0.0, 2.0]))
        np.testing.assert_allclose(distance, [0.5, 1.0], atol=1e-10)

    def test_ellipse_convolution_matches_grid_sum(self):
        domain = DomainSpec.ellipse(2.0, 1.0)
        for point in ((5.95, 0.0), (0.0, 2.97), (4.2, 2.1)):
            value = convolve_indicator(domain, 3.0, np.array([point]), 0.1)[0]
            self.assertAlmostEqual(value, _grid_convolution(domain, 3.0, point, 0.1), delta=2e-3)


class MollifiedDiscTests(unittest.TestCase):
    def test_sandwich_at_fixed_shift(self):
        shift = ShiftVec(x1=0.3, x2=0.7)
        d = disc(DomainSpec.disk(), 20.0, shift).value
        lower, band_lo = disc_mollified_parts(DomainSpec.disk(), 20.0, shift, MollifiedParams(delta=-0.05))
        upper, band_hi = disc_mollified_parts(DomainSpec.disk(), 20.0, shift, MollifiedParams(delta=0.05))
        margin = 1e-6 * (band_lo[0] + band_hi[0])
        self.assertLessEqual(lower[0] - margin, d)
        self.assertLessEqual(d, upper[0] + margin)

    def test_convergence_as_delta_shrinks(self):
        shift = ShiftVec(x1=0.123, x2=0.456)
        d = disc(DomainSpec.disk(), 15.0, shift).value
        gaps = [
            disc_mollified(DomainSpec.disk(), 15.0, shift, MollifiedParams(delta=delta)) - d
            for delta in (0.2, 0.1, 0.05, 0.025)
        ]
        for gap in gaps:
            self.assertGreaterEqual(gap, -1e-6)
        self.assertLess(gaps[-1], gaps[0])
        self.assertLess(gaps[-1], 2.0 * math.pi * 15.0 * 0.025 * 4.0)

    def test_many_matches_single_and_workers(self):
        shifts = np.array([[0.1, 0.2], [0.7, 0.9], [0.0, 0.0]])
        params = MollifiedParams(delta=0.2, quad_points=32)
        serial = disc_mollified_many(DomainSpec.disk(), 12.0, shifts, params)
        threaded = disc_mollified_many(DomainSpec.disk(), 12.0, shifts, params, workers=3)
        np.testing.assert_array_equal(serial, threaded)
        single = disc_mollified(DomainSpec.disk(), 12.0, ShiftVec(x1=0.7, x2=0.9), params)
        self.assertEqual(single, serial[1])

    def test_ellipse_sandwich(self):
        domain = DomainSpec.ellipse(1.5, 0.75)
        shifts = np.random.default_rng(3).random((10, 2))
        d = disc_many(domain, 10.0, shifts)
        lower = disc_mollified_many(domain, 10.0, shifts, MollifiedParams(delta=-0.1))
        upper = disc_mollified_many(domain, 10.0, shifts, MollifiedParams(delta=0.1))
        self.assertTrue(np.all(lower <= d + 1e-6))
        self.assertTrue(np.all(d <= upper + 1e-6))

    def test_ellipse_with_equal_axes_matches_disk(self):
        shift = ShiftVec(x1=0.3, x2=0.1)
        params = MollifiedParams(delta=0.15, quad_points=32)
        disk = disc_mollified(DomainSpec.disk(), 9.0, shift, params)
        round_ellipse = disc_mollified(DomainSpec.ellipse(1.0, 1.0), 9.0, shift, params)
        self.assertAlmostEqual(disk, round_ellipse, delta=1e-12)

    def test_rejections(self):
        with self.assertRaises(ValueError):
            disc_mollified(DomainSpec.annulus(0.2), 10.0, ShiftVec(), MollifiedParams(delta=0.1))
        with self.assertRaises(ValueError):
            disc_mollified(DomainSpec.disk(), 1.0, ShiftVec(), MollifiedParams(delta=-0.5))


class SandwichTests(unittest.TestCase):
    def test_pointwise_trivial_regions(self):
        values = sandwich_pointwise(10.0, 0.1, np.array([[0.0, 0.0], [0.0, 10.5]]))
        np.testing.assert_array_equal(values[0], [1.0, 1.0, 1.0])
        np.testing.assert_array_equal(values[1], [0.0, 0.0, 0.0])

    def test_no_violations_on_seeded_samples(self):
        report = sandwich_check(25.0, ShiftVec(x1=0.2, x2=0.9), delta=0.1, samples=10000, seed=42)
        self.assertEqual(report.pointwise_violations, 0)
        self.assertEqual(report.violations, 0)
        self.assertLessEqual(report.d_lower, report.d + 1e-6)
        self.assertLessEqual(report.d, report.d_upper + 1e-6)

    def test_inequality_over_random_shifts(self):
        rng = np.random.default_rng(2024)
        for R in (16.0, 64.0, 256.0):
            shifts = rng.random((100, 2))
            report = mollification_inequality_check(R, shifts, quad_points=32)
            self.assertAlmostEqual(report.delta, R ** -0.5)
            self.assertEqual(report.sandwich_violations, 0, msg=f"R={R}")
            self.assertEqual(report.stated_violations, {2: 0, 4: 0}, msg=f"R={R}")
            self.assertEqual(report.max_form_violations, 0, msg=f"R={R}")

    def test_rejects_bad_arguments(self):
        with self.assertRaises(ValueError):
            sandwich_check(10.0, samples=0)
        with self.assertRaises(ValueError):
            sandwich_pointwise(10.0, 1.5, np.zeros((1, 2)))


class CountConsistencyTests(unittest.TestCase):
    def test_disc_value_is_count_minus_area(self):
        result = count(DomainSpec.disk(), 7.3, ShiftVec(x1=0.2, x2=0.4))
        sample = disc(DomainSpec.disk(), 7.3, ShiftVec(x1=0.2, x2=0.4))
        self.assertEqual(sample.count, result.count)
        self.assertEqual(sample.value, result.count - math.pi * 7.3 * 7.3)


if __name__ == "__main__":
    unittest.main()
