import csv
import io
import math
import os
import unittest

import numpy as np
from scipy.integrate import quad

from discrepancy import MollifiedParams, disc_mollified_many, shift_grid
from fourier_coeffs import (
    CoeffTable,
    ParsevalMode,
    a_delta,
    a_delta_grid,
    annulus_asymptotic_report,
    b_delta_table,
    chi_hat_annulus_asymptotic,
    chi_hat_annulus_exact,
    chi_hat_disk,
    cutoff_envelope,
    cutoff_growth_exponent,
    discrepancy_coefficients,
    envelope_crossing,
    hausdorff_young_check,
    lattice_shells,
    optimal_cutoff_exponent,
    parseval_check,
    split_regime_ratios,
    truncated_energy,
)
from lattice_counter import DomainSpec, r2
from special_functions import bessel_j1_zero


def _disk_transform_by_quadrature(R, xi):
    """Real part of the integral of exp(-2 pi i xi.x) over |x| <= R.

    The inner integral over x2 is done in closed form; x1 = R sin(theta)
    removes the square-root endpoints.
    """
    xi1, xi2 = xi

    def integrand(theta):
        x1 = R * math.sin(theta)
        half = R * math.cos(theta)
        inner = math.sin(2.0 * math.pi * xi2 * half) / (math.pi * xi2)
        return math.cos(2.0 * math.pi * xi1 * x1) * inner * R * math.cos(theta)

    value, _ = quad(integrand, -math.pi / 2, math.pi / 2, limit=400, epsabs=1e-12, epsrel=1e-12)
    return value


class TransformTests(unittest.TestCase):
    def test_disk_transform_vanishes_at_bessel_zero(self):
        z = bessel_j1_zero(1)
        self.assertAlmostEqual(z, 3.8317059702075125, places=10)
        self.assertLess(abs(chi_hat_disk(1.0, (z / (2.0 * math.pi), 0.0))), 1e-12)

    def test_disk_transform_matches_direct_quadrature(self):
        self.assertAlmostEqual(chi_hat_disk(3.0, (2.0, 1.0)), _disk_transform_by_quadrature(3.0, (2.0, 1.0)), delta=1e-6)

    def test_disk_decay_constant(self):
        rho = np.linspace(1.0, 100.0, 2000)
        xi = np.column_stack([rho, np.zeros_like(rho)])
        for R in (10.0, 100.0):
            ratio = np.abs(chi_hat_disk(R, xi)) / (math.sqrt(R) * rho ** -1.5)
            self.assertLess(float(ratio.max()), 1.0)

    def test_disk_transform_is_radial(self):
        self.assertEqual(chi_hat_disk(5.0, (3.0, 4.0)), chi_hat_disk(5.0, (5.0, 0.0)))
        self.assertAlmostEqual(chi_hat_disk(5.0, (3.0, 4.0)), chi_hat_disk(5.0, (-4.0, 3.0)), delta=1e-15)

    def test_rejects_zero_frequency(self):
        with self.assertRaises(ValueError):
            chi_hat_disk(3.0, (0.0, 0.0))
        with self.assertRaises(ValueError):
            chi_hat_annulus_exact(3.0, 0.1, np.array([[1.0, 0.0], [0.0, 0.0]]))

    def test_annulus_is_difference_of_disks(self):
        for xi in ((1.0, 1.0), (2.5, -0.5), (0.0, 7.0)):
            exact = chi_hat_annulus_exact(4.0, 0.3, xi)
            self.assertAlmostEqual(exact, chi_hat_disk(4.3, xi) - chi_hat_disk(3.7, xi), delta=1e-13)

    def test_annulus_matches_direct_quadrature(self):
        oracle = _disk_transform_by_quadrature(4.3, (1.0, 1.0)) - _disk_transform_by_quadrature(3.7, (1.0, 1.0))
        self.assertAlmostEqual(chi_hat_annulus_exact(4.0, 0.3, (1.0, 1.0)), oracle, delta=1e-6)

    def test_annulus_rejects_degenerate_thickness(self):
        for t in (0.0, 4.0, -0.1):
            with self.assertRaises(ValueError):
                chi_hat_annulus_exact(4.0, t, (1.0, 0.0))

    def test_asymptotic_vanishes_at_half_period(self):
        self.assertLess(abs(chi_hat_annulus_asymptotic(50.0, 0.1, (5.0, 0.0))), 1e-12)

    def test_asymptotic_error_constant_and_signs(self):
        report = annulus_asymptotic_report((50.0, 100.0, 200.0), (0.01, 0.1), np.linspace(2.0, 100.0, 991))
        self.assertLessEqual(report.constant, 10.0)
        self.assertGreater(report.sign_compared, 0)
        self.assertGreaterEqual(report.sign_agreement, 0.9)

    def test_lattice_shells_count_r2(self):
        k, counts = lattice_shells(10)
        for value, multiplicity in zip(k, counts):
            self.assertEqual(multiplicity, r2(int(value)))
        self.assertEqual(int(counts.sum()) + 1, 317)


class CoefficientTests(unittest.TestCase):
    def test_zero_coefficient(self):
        self.assertAlmostEqual(a_delta((0, 0), 100.0, 0.1).real, 20.01 * math.pi, places=10)

    def test_grid_matches_pointwise(self):
        table = a_delta_grid(12.0, 0.25, 6)
        for n in ((1, 0), (2, 3), (-4, 1), (0, -6)):
            expected = a_delta(n, 12.0, 0.25)
            self.assertAlmostEqual(table.entry(*n).real, expected.real, delta=1e-8 * max(1.0, abs(expected)))
        self.assertEqual(table.hermitian_defect(), 0.0)

    def test_decay_envelope(self):
        R = 50.0
        table = a_delta_grid(R, 0.1, 200)
        N = table.trunc_radius
        axis = np.arange(-N, N + 1)
        norm = np.hypot(axis[:, None], axis[None, :])
        keep = table.mask & (norm > 0)
        ratio = np.abs(table.values[keep]) / (math.sqrt(R) * norm[keep] ** -1.5)
        self.assertLess(float(ratio.max()), 1.0)

    def test_matches_transform_of_mollified_grid(self):
        m = 128
        R, delta = 12.0, 0.25
        values = disc_mollified_many(DomainSpec.disk(), R, shift_grid(m), MollifiedParams(delta=delta, quad_points=32))
        spectrum = np.fft.fft2(values.reshape(m, m)) / (m * m)
        for n1 in range(-5, 6):
            for n2 in range(-5, 6):
                if n1 * n1 + n2 * n2 > 25:
                    continue
                measured = spectrum[n1 % m, n2 % m]
                expected = a_delta((n1, n2), R, delta)
                self.assertAlmostEqual(measured.real, expected.real, delta=1e-3, msg=f"n=({n1},{n2})")
                self.assertLess(abs(measured.imag), 1e-3)

    def test_rejects_bad_delta(self):
        with self.assertRaises(ValueError):
            a_delta((1, 0), 10.0, 1.0)
        with self.assertRaises(ValueError):
            a_delta_grid(10.0, 0.0, 4)


class DiscrepancyCoefficientTests(unittest.TestCase):
    def test_disk_energy(self):
        table = discrepancy_coefficients(DomainSpec.disk(), 20.0, 40)
        self.assertEqual(table.entry(0, 0), 0.0)
        self.assertAlmostEqual(table.energy(), truncated_energy(20.0, 40), delta=1e-9)

    def test_annulus_entries(self):
        table = discrepancy_coefficients(DomainSpec.annulus(0.2), 10.0, 6)
        self.assertAlmostEqual(table.entry(3, -2).real, chi_hat_annulus_exact(10.0, 0.2, (3.0, -2.0)), delta=1e-12)

    def test_ellipse_scaling(self):
        table = discrepancy_coefficients(DomainSpec.ellipse(2.0, 0.5), 8.0, 4)
        expected = 2.0 * 0.5 * chi_hat_disk(8.0, (2.0 * 1.0, 0.5 * 3.0))
        self.assertAlmostEqual(table.entry(1, 3).real, expected, delta=1e-12)
        self.assertEqual(table.hermitian_defect(), 0.0)


class CoeffTableTests(unittest.TestCase):
    def _table(self):
        values = np.zeros((5, 5), dtype=complex)
        values[2, 2] = 3.0
        values[3, 2] = 1.0 + 2.0j
        values[1, 2] = 1.0 - 2.0j
        return CoeffTable(values=values, trunc_radius=2, meta={"R": 1.0})

    def test_entry_and_bounds(self):
        table = self._table()
        self.assertEqual(table.entry(1, 0), 1.0 + 2.0j)
        self.assertEqual(table.entry(-1, 0), 1.0 - 2.0j)
        with self.assertRaises(KeyError):
            table.entry(2, 2)
        self.assertEqual(len(table), 13)

    def test_hermitian_defect(self):
        table = self._table()
        self.assertEqual(table.hermitian_defect(), 0.0)
        table.values[1, 2] = 1.0
        self.assertAlmostEqual(table.hermitian_defect(), 2.0)

    def test_csv_is_sorted_with_header(self):
        rows = list(csv.reader(io.StringIO(self._table().to_csv())))
        self.assertEqual(rows[0], ["n1", "n2", "re", "im"])
        keys = [(int(r[0]), int(r[1])) for r in rows[1:]]
        self.assertEqual(keys, sorted(keys))
        self.assertEqual(len(keys), 13)
        self.assertIn(["1", "0", "1.0", "2.0"], rows)

    def test_energy(self):
        table = self._table()
        self.assertAlmostEqual(table.energy(), 9.0 + 5.0 + 5.0)
        self.assertAlmostEqual(table.energy(include_zero=False), 10.0)


class BTableTests(unittest.TestCase):
    def test_b_zero_is_a_energy(self):
        R = 64.0
        table = b_delta_table(R, trunc_N=8, conv_N=96)
        a = a_delta_grid(R, R ** -0.5, 96)
        self.assertAlmostEqual(table.entry(0, 0).real, a.energy(), delta=1e-9 * a.energy())
        self.assertLess(table.hermitian_defect(), 1e-9 * abs(table.entry(0, 0)))
        self.assertGreater(table.tail, 0.0)
        self.assertEqual(table.meta["conv_N"], 96)

    def test_b_zero_grows_linearly(self):
        ratios = []
        for R in (64.0, 256.0, 1024.0):
            table = b_delta_table(R, trunc_N=4, conv_N=8 * int(math.sqrt(R)))
            ratios.append(table.entry(0, 0).real / R)
        self.assertLess(max(ratios) / min(ratios), 2.0)
        for ratio in ratios:
            self.assertGreater(ratio, 10.0)
            self.assertLess(ratio, 100.0)

    def test_split_regime_ratios_stay_bounded(self):
        results = {}
        for R in (64.0, 256.0, 1024.0):
            root = int(math.sqrt(R))
            table = b_delta_table(R, trunc_N=2 * root)
            results[R] = split_regime_ratios(table)
            self.assertEqual(results[R].cutoff, math.sqrt(R))
            self.assertGreater(results[R].low_count, 0)
            self.assertGreater(results[R].high_count, 0)
        self.assertLessEqual(results[1024.0].low_max, 4.0 * results[64.0].low_max)
        self.assertLessEqual(results[1024.0].high_max, 4.0 * results[64.0].high_max)

    def test_guards(self):
        with self.assertRaises(ValueError):
            b_delta_table(64.0, trunc_N=16, conv_N=31)
        with self.assertRaises(ValueError):
            b_delta_table(64.0, trunc_N=4097)


class CutoffTests(unittest.TestCase):
    def test_envelopes_cross_at_square_root(self):
        for R in (16.0, 100.0, 1e6):
            n = envelope_crossing(R)
            self.assertAlmostEqual(R / n, R * R / n ** 3, delta=1e-9 * R)

    def test_optimal_cutoff(self):
        previous = 1.0
        for R in (1e2, 1e4, 1e8):
            eps = optimal_cutoff_exponent(R)
            self.assertAlmostEqual(eps, 0.5 + math.log(4.0) / (4.0 * math.log(R)), delta=1e-6)
            self.assertLess(eps, previous)
            previous = eps
        self.assertEqual(cutoff_growth_exponent(0.5), 2.0)
        self.assertEqual(cutoff_growth_exponent(0.25), 3.0)
        self.assertEqual(cutoff_growth_exponent(0.9), 2.0)

    def test_cutoff_envelope_values(self):
        R = 100.0
        self.assertAlmostEqual(cutoff_envelope(R, 0.5), 0.5 * R * R * math.log(R) + R * R)
        with self.assertRaises(ValueError):
            cutoff_envelope(1.0, 0.5)


class ParsevalTests(unittest.TestCase):
    def test_annulus_second_moment(self):
        report = parseval_check(ParsevalMode.ANNULUS_M2, 30.0, 0.1, 256, 512)
        self.assertLessEqual(report.relative_gap, 0.05)
        self.assertAlmostEqual(report.tail_estimate, 60.0 / (math.pi * 256))

    def test_more_frequencies_add_energy(self):
        self.assertLess(truncated_energy(30.0, 128, 0.1), truncated_energy(30.0, 256, 0.1))

    def test_mollified_fourth_moment(self):
        # scaled down from R=64, delta=1/8, N=128 to keep the suite fast
        report = parseval_check(ParsevalMode.MOLLIFIED_M4, 16.0, 0.25, 16, 64)
        self.assertLessEqual(report.relative_gap, 0.10)

    @unittest.skipUnless(os.environ.get("LATDISC_SLOW_TESTS"), "set LATDISC_SLOW_TESTS=1 to run")
    def test_mollified_fourth_moment_full_size(self):
        report = parseval_check(ParsevalMode.MOLLIFIED_M4, 64.0, 0.125, 128, 256, workers=4)
        self.assertLessEqual(report.relative_gap, 0.10)

    def test_rejects_aliasing(self):
        with self.assertRaises(ValueError):
            parseval_check("annulus_m2", 30.0, 0.1, 256, 256)

    def test_hausdorff_young(self):
        report = hausdorff_young_check(30.0, 0.1, 3.0, 128, 256)
        self.assertTrue(report.satisfied)
        self.assertTrue(report.coefficient_sum_converges)
        self.assertAlmostEqual(report.q, 1.5)
        with self.assertRaises(ValueError):
            hausdorff_young_check(30.0, 0.1, 1.5, 16, 64)


if __name__ == "__main__":
    unittest.main()
