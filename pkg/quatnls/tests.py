"""
quatnls/tests.py

Covers:
  - format_real    : round-trip decimals, nan, infinities
  - format_complex : sign of the imaginary part, negative zero
  - format_verdict : PASS / FAIL
"""

import math

from django.test import SimpleTestCase

from quatnls.text_utils import format_complex, format_real, format_verdict


class FormatRealTests(SimpleTestCase):
    def test_round_trip(self):
        for value in (0.1, -2.5, 1e-300, math.pi, 123456789.123456789):
            with self.subTest(value=value):
                self.assertEqual(float(format_real(value)), value)

    def test_nan(self):
        self.assertEqual(format_real(float("nan")), "nan")

    def test_infinity(self):
        self.assertEqual(format_real(float("inf")), "inf")
        self.assertEqual(format_real(float("-inf")), "-inf")


class FormatComplexTests(SimpleTestCase):
    def test_signs(self):
        self.assertEqual(format_complex(1.5 + 0.25j), "1.5+0.25j")
        self.assertEqual(format_complex(1.5 - 0.25j), "1.5-0.25j")

    def test_negative_zero_imaginary(self):
        self.assertEqual(format_complex(complex(1.0, -0.0)), "1.0-0.0j")

    def test_round_trip(self):
        value = complex(math.e, -1 / 3)
        self.assertEqual(complex(format_complex(value)), value)


class FormatVerdictTests(SimpleTestCase):
    def test_labels(self):
        self.assertEqual(format_verdict(True), "PASS")
        self.assertEqual(format_verdict(False), "FAIL")
