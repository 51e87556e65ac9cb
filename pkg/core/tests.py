"""
Tests for shared validation, exceptions, utilities and the process pool
"""

from fractions import Fraction
import json
import tempfile
from pathlib import Path

from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.config import Config
from core.exceptions import (
    DomainError,
    FormulaDomainError,
    LimitLabError,
    OracleMismatchError,
    PartialResultError,
    PrimalityError,
    ResourceLimitError,
    UsageError,
    ValidationFailure,
    exit_code_for,
)
from core.parallel import resolve_workers, run_partitioned
from core.serializers import RationalValue, ReportSchema
from core.utils import binom, config_hash, format_cell, rational_dict, sha256_file, to_float, write_csv
from core.validators import NumericValidator, PrimeValidator


def _square(task):
    return task * task


class NumericValidatorTests(SimpleTestCase):
    """Test integer and probability validation"""

    def test_integer_lower_bound(self):
        """Test integer lower bound validation"""
        is_valid, msg = NumericValidator.validate_integer_at_least(5, 3)
        self.assertTrue(is_valid)
        self.assertEqual(msg, "")

        is_valid, msg = NumericValidator.validate_integer_at_least(2, 3)
        self.assertFalse(is_valid)
        self.assertIn("at least 3", msg)

        is_valid, msg = NumericValidator.validate_integer_at_least(2.5, 1)
        self.assertFalse(is_valid)

        is_valid, msg = NumericValidator.validate_integer_at_least("abc", 1)
        self.assertFalse(is_valid)

        is_valid, msg = NumericValidator.validate_integer_at_least(True, 0)
        self.assertFalse(is_valid)

    def test_range_validation(self):
        """Test inclusive range validation"""
        self.assertTrue(NumericValidator.validate_in_range(0, 0, 5)[0])
        self.assertTrue(NumericValidator.validate_in_range(5, 0, 5)[0])
        self.assertFalse(NumericValidator.validate_in_range(6, 0, 5)[0])
        self.assertFalse(NumericValidator.validate_in_range(-1, 0, 5)[0])

    def test_open_probability(self):
        """Test probabilities must lie strictly inside (0, 1)"""
        self.assertTrue(NumericValidator.validate_open_probability(0.5)[0])
        self.assertTrue(NumericValidator.validate_open_probability("1/4")[0])
        self.assertFalse(NumericValidator.validate_open_probability(0)[0])
        self.assertFalse(NumericValidator.validate_open_probability(1)[0])
        self.assertFalse(NumericValidator.validate_open_probability("half")[0])

    def test_require_probability_is_exact(self):
        """Test probabilities convert to exact rationals"""
        self.assertEqual(NumericValidator.require_probability(0.5), Fraction(1, 2))
        self.assertEqual(NumericValidator.require_probability("1/4"), Fraction(1, 4))
        with self.assertRaises(DomainError):
            NumericValidator.require_probability(1.5)

    def test_require_odd(self):
        """Test odd validation rejects even and small values"""
        self.assertEqual(NumericValidator.require_odd(9), 9)
        with self.assertRaises(DomainError):
            NumericValidator.require_odd(10)
        with self.assertRaises(DomainError):
            NumericValidator.require_odd(1)


class PrimeValidatorTests(SimpleTestCase):
    """Test the prime modulus guard of formula operations"""

    def test_is_prime(self):
        """Test trial division on small values"""
        primes = [n for n in range(40) if PrimeValidator.is_prime(n)]
        self.assertEqual(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37])

    def test_validate_prime(self):
        """Test tuple-returning prime validation"""
        self.assertEqual(PrimeValidator.validate_prime(13), (True, ""))
        is_valid, msg = PrimeValidator.validate_prime(15)
        self.assertFalse(is_valid)
        self.assertIn("prime", msg)

    def test_composite_rejected(self):
        """Test composite moduli raise PrimalityError"""
        with self.assertRaises(PrimalityError):
            PrimeValidator.require_odd_prime(9)

    def test_composite_allowed_with_warning(self):
        """Test allow_composite accepts odd composites and logs a warning"""
        with self.assertLogs("core.validators", level="WARNING") as logs:
            self.assertEqual(PrimeValidator.require_odd_prime(9, allow_composite=True), 9)
        self.assertIn("formula-unsafe", logs.output[0])

    def test_even_and_small_rejected(self):
        """Test even or too-small moduli raise DomainError even with allow_composite"""
        with self.assertRaises(DomainError):
            PrimeValidator.require_odd_prime(8, allow_composite=True)
        with self.assertRaises(DomainError):
            PrimeValidator.require_odd_prime(3, minimum=5)


class ExceptionTests(SimpleTestCase):
    """Test the error hierarchy and exit-code mapping"""

    def test_hierarchy(self):
        """Test domain errors are validation failures and command errors"""
        self.assertTrue(issubclass(PrimalityError, DomainError))
        self.assertTrue(issubclass(FormulaDomainError, DomainError))
        self.assertTrue(issubclass(DomainError, ValidationFailure))
        self.assertTrue(issubclass(LimitLabError, CommandError))

    def test_exit_codes(self):
        """Test each error maps to its exit code"""
        self.assertEqual(exit_code_for(DomainError("bad n")), 2)
        self.assertEqual(exit_code_for(OracleMismatchError()), 2)
        self.assertEqual(exit_code_for(ResourceLimitError()), 3)
        self.assertEqual(exit_code_for(PartialResultError()), 1)
        self.assertEqual(exit_code_for(UsageError()), 64)
        self.assertEqual(exit_code_for(CommandError("Error: unrecognized arguments")), 64)

    def test_unexpected_exception_logged(self):
        """Test unexpected exceptions map to 1 and are logged"""
        with self.assertLogs("core.exceptions", level="ERROR"):
            self.assertEqual(exit_code_for(RuntimeError("boom")), 1)

    def test_defaults_and_context(self):
        """Test default detail, code and context payload"""
        error = ResourceLimitError(fallback=28, n=401)
        self.assertEqual(error.fallback, 28)
        payload = error.as_dict()
        self.assertEqual(payload["error"], "resource_limit")
        self.assertEqual(payload["n"], 401)
        self.assertEqual(payload["detail"], ResourceLimitError.default_detail)


class UtilityTests(SimpleTestCase):
    """Test exact-value helpers and file output"""

    def test_binom_outside_range(self):
        """Test binomial coefficients vanish outside 0 <= k <= n"""
        self.assertEqual(binom(5, 2), 10)
        self.assertEqual(binom(5, 6), 0)
        self.assertEqual(binom(5, -1), 0)

    def test_rational_dict(self):
        """Test rationals serialize as num/den strings"""
        self.assertEqual(rational_dict(Fraction(-3, 4)), {"num": "-3", "den": "4"})
        self.assertEqual(rational_dict(7), {"num": "7", "den": "1"})

    def test_float_conversion(self):
        """Test conversion is correctly rounded and formatting round-trips"""
        self.assertEqual(to_float(Fraction(1, 3)), 1 / 3)
        big = Fraction(10**400 + 1, 3 * 10**400)
        self.assertEqual(to_float(big), 1 / 3)
        self.assertEqual(format_cell(0.1), "0.1")
        self.assertEqual(format_cell(True), "true")
        self.assertEqual(format_cell(None), "")

    def test_write_csv(self):
        """Test CSV output uses a header and LF line endings"""
        with tempfile.TemporaryDirectory() as tmp:
            path = write_csv(Path(tmp) / "nested" / "out.csv", ("k", "prob_float"), [(0, 0.25), (1, 0.75)])
            self.assertEqual(path.read_bytes(), b"k,prob_float\n0,0.25\n1,0.75\n")
            self.assertEqual(len(sha256_file(path)), 64)

    def test_config_hash_order_independent(self):
        """Test the config hash ignores key order"""
        first = config_hash({"n": 11, "p": Fraction(1, 2), "seed": 7})
        second = config_hash({"seed": 7, "p": Fraction(1, 2), "n": 11})
        self.assertEqual(first, second)
        self.assertNotEqual(first, config_hash({"n": 13, "p": Fraction(1, 2), "seed": 7}))


class RationalSchema(ReportSchema):
    value: RationalValue


class SerializerTests(SimpleTestCase):
    """Test rational values in pydantic schemas"""

    def test_rational_json(self):
        """Test rationals dump as num/den strings and parse back"""
        dumped = RationalSchema(value=Fraction(21, 8)).model_dump_json()
        self.assertEqual(json.loads(dumped), {"value": {"num": "21", "den": "8"}})
        self.assertEqual(RationalSchema.model_validate_json(dumped).value, Fraction(21, 8))


class ParallelTests(SimpleTestCase):
    """Test partitioned execution"""

    def test_serial_results_in_order(self):
        """Test serial execution keeps task order"""
        self.assertEqual(run_partitioned(_square, [3, 1, 2], workers=1), [9, 1, 4])

    def test_pool_matches_serial(self):
        """Test a process pool returns the same ordered results"""
        tasks = list(range(10))
        self.assertEqual(run_partitioned(_square, tasks, workers=2), run_partitioned(_square, tasks, workers=1))

    def test_resolve_workers(self):
        """Test worker resolution"""
        self.assertEqual(resolve_workers(0), 1)
        self.assertEqual(resolve_workers(3), 3)
        self.assertGreaterEqual(resolve_workers(None), 1)


class ConfigTests(SimpleTestCase):
    """Test configuration validation"""

    def test_defaults_valid(self):
        """Test default limits pass validation"""
        Config.validate()
        self.assertEqual(Config.EXHAUSTIVE_MAX_N, 25)

    def test_invalid_limit_rejected(self):
        """Test non-positive limits raise ValueError naming the key"""
        original = Config.MC_CHUNK
        Config.MC_CHUNK = 0
        try:
            with self.assertRaisesMessage(ValueError, "MC_CHUNK"):
                Config.validate()
        finally:
            Config.MC_CHUNK = original
