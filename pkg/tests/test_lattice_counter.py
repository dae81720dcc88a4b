import json
import math
import unittest
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

import numpy as np
from pydantic import ValidationError

from lattice_counter import (
    Boundary,
    DomainKind,
    DomainSpec,
    ShiftVec,
    contains,
    count,
    count_bruteforce,
    count_many,
    enumerate_points,
    gauss_n,
    gauss_n_from_square,
    gauss_square_bounds,
    r2,
    r2_enumerate,
)
from lattice_counter.predicates import form_sign, two_product, two_sum
from latdisc.config import config

FIXTURES = Path(__file__).parent / "fixtures" / "counts.json"


def _random_case(rng: np.random.Generator):
    boundary = Boundary.CLOSED if rng.random() < 0.5 else Boundary.OPEN
    kind = rng.integers(3)
    style = rng.integers(4)
    if style == 0:
        R = float(rng.integers(1, 120))
    elif style == 1:
        R = math.sqrt(float(rng.integers(1, 14400)))
    else:
        R = float(np.exp(rng.uniform(0.0, math.log(200.0))))
    shift_style = rng.integers(4)
    if shift_style == 0:
        shift = ShiftVec()
    elif shift_style == 1:
        shift = ShiftVec(x1=0.5, x2=float(rng.integers(2)) / 2.0)
    else:
        shift = ShiftVec(x1=float(rng.random()), x2=float(rng.random()))

    if kind == 0:
        domain = DomainSpec.disk(boundary)
    elif kind == 1:
        domain = DomainSpec.ellipse(float(rng.uniform(0.5, 2.0)), float(rng.choice([0.5, 1.0, 1.5])), boundary)
        R = min(R, 100.0)
    else:
        t = float(rng.choice([0.5, 0.25, float(rng.uniform(0.01, 0.99))]))
        domain = DomainSpec.annulus(t, boundary)
        R = max(R, 1.0 + t)
    return domain, R, shift


class DomainModelTests(unittest.TestCase):
    def test_shift_is_reduced_modulo_one(self):
        shift = ShiftVec(x1=1.25, x2=-0.25)
        self.assertEqual(shift.as_tuple(), (0.25, 0.75))
        self.assertEqual(ShiftVec(x1=-1e-20).x1, 0.0)

    def test_shift_rejects_nonfinite(self):
        with self.assertRaises(ValidationError):
            ShiftVec(x1=float("nan"))

    def test_parse_round_trip(self):
        for text in ("disk", "ellipse:2.0,1.0", "annulus:0.25"):
            self.assertEqual(DomainSpec.parse(text).label, text)
        self.assertEqual(ShiftVec.parse("0.1, 0.7").as_tuple(), (0.1, 0.7))

    def test_parse_rejects_unknown(self):
        for text in ("square", "ellipse:2", "annulus:x", "disk:1"):
            with self.assertRaises(ValueError):
                DomainSpec.parse(text)

    def test_parameter_validation(self):
        with self.assertRaises(ValidationError):
            DomainSpec.annulus(1.0)
        with self.assertRaises(ValidationError):
            DomainSpec.annulus(0.0)
        with self.assertRaises(ValidationError):
            DomainSpec.ellipse(0.0, 1.0)
        with self.assertRaises(ValidationError):
            DomainSpec.ellipse(2.0 ** 11, 1.0)

    def test_measures(self):
        self.assertAlmostEqual(DomainSpec.disk().measure(2.0), 4.0 * math.pi)
        self.assertAlmostEqual(DomainSpec.ellipse(2.0, 1.0).measure(3.0), 18.0 * math.pi)
        self.assertAlmostEqual(DomainSpec.annulus(0.5).measure(5.0), 10.0 * math.pi)
        with self.assertRaises(ValueError):
            DomainSpec.annulus(0.5).unit_area()


class PredicateTests(unittest.TestCase):
    def test_error_free_transformations(self):
        s, e = two_sum(1.0, 1e-20)
        self.assertEqual((s, e), (1.0, 1e-20))
        p, e = two_product(1.0 + 2.0 ** -30, 1.0 + 2.0 ** -30)
        self.assertEqual(p + e, p)
        self.assertEqual(e, 2.0 ** -60)

    def test_exact_sign_on_pythagorean_boundary(self):
        self.assertEqual(form_sign(3.0, 4.0, 0.0, 0.0, 1.0, 1.0, 5.0), 0)
        self.assertEqual(form_sign(3.0, 4.0, 0.0, 0.0, 1.0, 1.0, 5.0, 1e-300), -1)
        self.assertEqual(form_sign(3.0, 4.0, 0.0, 0.0, 1.0, 1.0, 5.0, -1e-300), 1)
        big = float(2 ** 24)
        radius = math.hypot(big, 1.0)
        gap = Fraction(2 ** 48 + 1) - Fraction(radius) ** 2
        expected = (gap > 0) - (gap < 0)
        self.assertEqual(form_sign(big, 1.0, 0.0, 0.0, 1.0, 1.0, radius), expected)


class CountTests(unittest.TestCase):
    def test_fixture_counts(self):
        cases = json.loads(FIXTURES.read_text())["cases"]
        for case in cases:
            domain = DomainSpec.parse(case["domain"], Boundary(case["boundary"]))
            shift = ShiftVec(x1=case["shift"][0], x2=case["shift"][1])
            with self.subTest(case=case):
                self.assertEqual(count(domain, case["R"], shift).count, case["count"])
                self.assertEqual(count_bruteforce(domain, case["R"], shift).count, case["count"])

    def test_ellipse_fixture_measure(self):
        result = count(DomainSpec.ellipse(2.0, 1.0), 3.0, ShiftVec(x1=0.1, x2=0.7))
        self.assertAlmostEqual(result.measure, 18.0 * math.pi)

    def test_matches_bruteforce_on_random_cases(self):
        rng = np.random.default_rng(1234)
        for _ in range(1000):
            domain, R, shift = _random_case(rng)
            fast = count(domain, R, shift)
            slow = count_bruteforce(domain, R, shift)
            self.assertEqual(fast.count, slow.count, msg=f"{domain.label} {domain.boundary} R={R!r} {shift}")

    def test_boundary_hits_on_pythagorean_circle(self):
        closed = count(DomainSpec.disk(), 5.0)
        opened = count(DomainSpec.disk(Boundary.OPEN), 5.0)
        self.assertEqual(closed.boundary_hits, 12)
        self.assertEqual(closed.count - opened.count, 12)

    def test_annulus_decomposition(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            t = float(rng.uniform(0.01, 0.99))
            R = float(rng.uniform(1.0 + t, 60.0))
            shift = ShiftVec(x1=float(rng.random()), x2=float(rng.random()))
            ring = count(DomainSpec.annulus(t), R, shift).count
            outer = count(DomainSpec.disk(), R + t, shift).count
            inner_open = count(DomainSpec.disk(Boundary.OPEN), R - t, shift).count
            self.assertEqual(ring, outer - inner_open)
        # inner circle through (3, 4)
        ring = count(DomainSpec.annulus(0.5), 5.5).count
        self.assertEqual(ring, count(DomainSpec.disk(), 6.0).count - count(DomainSpec.disk(Boundary.OPEN), 5.0).count)

    def test_shift_periodicity(self):
        base = np.array([[0.3, 0.6], [0.0, 0.5]])
        moved = np.vstack([base + [1.0, 0.0], base + [0.0, -1.0]])
        for domain in (DomainSpec.disk(), DomainSpec.ellipse(1.5, 0.75), DomainSpec.annulus(0.3)):
            counts, _ = count_many(domain, 17.25, np.vstack([base, moved]))
            self.assertEqual(list(counts[2:4]), list(counts[:2]))
            self.assertEqual(list(counts[4:]), list(counts[:2]))

    def test_dihedral_symmetry(self):
        for domain in (DomainSpec.disk(), DomainSpec.annulus(0.4)):
            for R in (5.0, 12.7, 25.0):
                points, _ = enumerate_points(domain, R)
                cloud = {tuple(p) for p in points.tolist()}
                for sx, sy, swap in ((1, 1, True), (-1, 1, False), (1, -1, False), (-1, -1, True)):
                    image = {((sx * k, sy * j) if swap else (sx * j, sy * k)) for j, k in cloud}
                    self.assertEqual(image, cloud)
                self.assertEqual(len(cloud), count(domain, R).count)

    def test_dihedral_symmetry_of_shifted_counts(self):
        rng = np.random.default_rng(31)
        for domain in (DomainSpec.disk(), DomainSpec.disk(Boundary.OPEN), DomainSpec.annulus(0.4)):
            for R in (5.0, 12.7, 25.0, 61.3):
                x = rng.random(2)
                images = np.array([
                    [x[1], x[0]],
                    [-x[0], -x[1]],
                    [-x[0], x[1]],
                    [x[0], -x[1]],
                    [-x[1], x[0]],
                ]) % 1.0
                counts, _ = count_many(domain, R, images)
                expected = count(domain, R, ShiftVec(x1=float(x[0]), x2=float(x[1]))).count
                self.assertEqual(list(counts), [expected] * len(images), msg=f"{domain.label} R={R} x={x}")
        # half-integer shift through lattice-symmetric boundary points
        half = count(DomainSpec.disk(), 2.5, ShiftVec(x1=0.5, x2=0.0)).count
        counts, _ = count_many(DomainSpec.disk(), 2.5, np.array([[0.0, 0.5], [0.5, 0.0]]))
        self.assertEqual(list(counts), [half, half])

    def test_contains_matches_count(self):
        domain = DomainSpec.ellipse(2.0, 1.0)
        shift = np.array([0.1, 0.7])
        j, k = np.meshgrid(np.arange(-8, 9), np.arange(-4, 6), indexing="ij")
        points = np.column_stack([j.ravel(), k.ravel()]) - shift
        self.assertEqual(int(contains(domain, 3.0, points).sum()), 56)

    def test_count_many_preserves_order(self):
        shifts = np.array([[0.0, 0.0], [0.5, 0.5], [0.1, 0.7]])
        counts, _ = count_many(DomainSpec.disk(), 9.5, shifts)
        for row, value in zip(shifts, counts):
            self.assertEqual(count(DomainSpec.disk(), 9.5, ShiftVec(x1=row[0], x2=row[1])).count, value)

    def test_rejections(self):
        with self.assertRaises(ValueError):
            count(DomainSpec.disk(), 0.5)
        with self.assertRaises(ValueError):
            count(DomainSpec.disk(), 2.0 ** 26)
        with self.assertRaises(ValueError):
            count(DomainSpec.ellipse(2.0, 1.0), 2.0 ** 25)
        with self.assertRaises(ValueError):
            count_bruteforce(DomainSpec.disk(), 501.0)

    def test_large_radius_is_exact(self):
        R = float(2 ** 20)
        self.assertEqual(count(DomainSpec.disk(), R).count, gauss_n(R))


class ArithmeticTests(unittest.TestCase):
    def test_gauss_n_examples(self):
        self.assertEqual(gauss_n(1.0), 5)
        self.assertEqual(gauss_n(10.0), count_bruteforce(DomainSpec.disk(), 10.0).count)
        self.assertEqual(gauss_n(10.0), 317)

    def test_gauss_bound(self):
        rng = np.random.default_rng(99)
        for R in rng.uniform(1e4, 1e5, 2000):
            error = abs(gauss_n(R) - math.pi * R * R)
            self.assertLessEqual(error, 2.0 * math.sqrt(2.0) * math.pi * R)
            lower, upper = gauss_square_bounds(R)
            self.assertLessEqual(lower, gauss_n(R))
            self.assertLessEqual(gauss_n(R), upper)

    def test_gauss_bound_small_radii(self):
        rng = np.random.default_rng(98)
        for R in np.concatenate([rng.uniform(1.0, 5000.0, 200), np.arange(1.0, 11.0)]):
            error = abs(gauss_n(R) - math.pi * R * R)
            self.assertLessEqual(error, 2.0 * math.sqrt(2.0) * math.pi * R)
            lower, upper = gauss_square_bounds(R)
            self.assertLessEqual(lower, gauss_n(R))
            self.assertLessEqual(gauss_n(R), upper)

    def test_gauss_n_agrees_with_counter(self):
        for R in (1.0, 2.5, 7.3, 50.0, 333.3):
            self.assertEqual(gauss_n(R), count(DomainSpec.disk(), R).count)

    def test_summatory_identity(self):
        running = 0
        for m in range(0, 10001):
            running += r2(m)
            self.assertEqual(gauss_n_from_square(m), running, msg=f"m={m}")

    def test_blocked_column_sum(self):
        q = 10 ** 6 + 3
        whole = gauss_n_from_square(q, block=10 ** 6)
        for block in (1, 7, 1000, 999):
            self.assertEqual(gauss_n_from_square(q, block=block), whole)
        with patch.dict(config.config, {"shift_chunk_elements": 13}):
            self.assertEqual(gauss_n_from_square(q), whole)

    def test_gauss_n_at_max_radius(self):
        self.assertEqual(gauss_n(2.0 ** 25), 3537118875994793)

    def test_r2_examples(self):
        self.assertEqual(r2(0), 1)
        self.assertEqual(r2(1), 4)
        self.assertEqual(r2(25), 12)
        self.assertEqual(r2(3), 0)
        self.assertEqual(r2(2 ** 50), 4)

    def test_r2_matches_enumeration(self):
        rng = np.random.default_rng(5)
        for k in list(range(200)) + [int(v) for v in rng.integers(0, 10 ** 6, 200)]:
            self.assertEqual(r2(k), r2_enumerate(k), msg=f"k={k}")

    def test_r2_rejections(self):
        for bad in (-1, 2 ** 50 + 1, 2.5, True):
            with self.assertRaises(ValueError):
                r2(bad)


class DomainKindTests(unittest.TestCase):
    def test_kind_values_are_cli_names(self):
        self.assertEqual([k.value for k in DomainKind], ["disk", "ellipse", "annulus"])


if __name__ == "__main__":
    unittest.main()
