"""
Input validation for laboratory operations.
Each validator returns (is_valid, error_message); the require_* helpers
raise the matching domain error instead.
"""

from typing import Tuple
from fractions import Fraction
import logging

from core.exceptions import DomainError, PrimalityError

logger = logging.getLogger(__name__)


class NumericValidator:
    """Validator for integer sizes and probabilities"""

    @classmethod
    def validate_integer_at_least(
        cls, value, minimum: int, field_name: str = "n"
    ) -> Tuple[bool, str]:
        """
        Validate an integer lower bound

        Args:
            value: Integer value
            minimum: Smallest accepted value
            field_name: Name of field for error message

        Returns:
            Tuple of (is_valid, error_message)
        """
        if isinstance(value, bool):
            return False, f"Invalid {field_name} format"
        try:
            val = int(value)
            if val != value:
                return False, f"{field_name} must be an integer"
            if val < minimum:
                return False, f"{field_name} must be at least {minimum}, got {val}"
            return True, ""
        except (ValueError, TypeError) as e:
            logger.warning(f"Invalid {field_name} format: {e}")
            return False, f"Invalid {field_name} format"

    @classmethod
    def validate_in_range(
        cls, value, low: int, high: int, field_name: str = "k"
    ) -> Tuple[bool, str]:
        """Validate low <= value <= high for an integer value"""
        is_valid, error_msg = cls.validate_integer_at_least(value, low, field_name)
        if not is_valid:
            return is_valid, error_msg
        if int(value) > high:
            return False, f"{field_name} must be between {low} and {high}, got {value}"
        return True, ""

    @classmethod
    def validate_open_probability(cls, p, field_name: str = "p") -> Tuple[bool, str]:
        """
        Validate a probability in the open interval (0, 1)

        Args:
            p: Probability as int, float, str or Fraction

        Returns:
            Tuple of (is_valid, error_message)
        """
        try:
            if not (0 < Fraction(p) < 1):
                return False, f"{field_name} must lie strictly between 0 and 1"
            return True, ""
        except (ValueError, TypeError, ZeroDivisionError) as e:
            logger.warning(f"Invalid {field_name} format: {e}")
            return False, f"Invalid {field_name} format"

    @classmethod
    def validate_odd(cls, n, field_name: str = "n") -> Tuple[bool, str]:
        """Validate that an integer is odd and at least 3"""
        is_valid, error_msg = cls.validate_integer_at_least(n, 3, field_name)
        if not is_valid:
            return is_valid, error_msg
        if int(n) % 2 == 0:
            return False, f"{field_name} must be odd, got {n}"
        return True, ""

    @classmethod
    def require_at_least(cls, value, minimum: int, field_name: str = "n") -> int:
        is_valid, error_msg = cls.validate_integer_at_least(value, minimum, field_name)
        if not is_valid:
            raise DomainError(error_msg, field=field_name)
        return int(value)

    @classmethod
    def require_in_range(cls, value, low: int, high: int, field_name: str = "k") -> int:
        is_valid, error_msg = cls.validate_in_range(value, low, high, field_name)
        if not is_valid:
            raise DomainError(error_msg, field=field_name)
        return int(value)

    @classmethod
    def require_odd(cls, n, field_name: str = "n") -> int:
        is_valid, error_msg = cls.validate_odd(n, field_name)
        if not is_valid:
            raise DomainError(error_msg, field=field_name)
        return int(n)

    @classmethod
    def require_probability(cls, p, field_name: str = "p") -> Fraction:
        """
        Validate and convert a probability to an exact rational.
        Floats are taken at their exact binary value.
        """
        is_valid, error_msg = cls.validate_open_probability(p, field_name)
        if not is_valid:
            raise DomainError(error_msg, field=field_name)
        return Fraction(p)


class PrimeValidator:
    """Validator for prime moduli used by closed-form operations"""

    @classmethod
    def is_prime(cls, n: int) -> bool:
        """Trial division primality test"""
        if n < 2:
            return False
        if n % 2 == 0:
            return n == 2
        divisor = 3
        while divisor * divisor <= n:
            if n % divisor == 0:
                return False
            divisor += 2
        return True

    @classmethod
    def validate_prime(cls, n) -> Tuple[bool, str]:
        is_valid, error_msg = NumericValidator.validate_integer_at_least(n, 2, "n")
        if not is_valid:
            return is_valid, error_msg
        if not cls.is_prime(int(n)):
            return False, f"n must be prime, got {n}"
        return True, ""

    @classmethod
    def require_odd_prime(cls, n, minimum: int = 3, allow_composite: bool = False) -> int:
        """
        Validate an odd prime modulus for formula operations.

        Args:
            n: Modulus
            minimum: Smallest accepted modulus
            allow_composite: Accept odd composites, logging a formula-unsafe warning

        Returns:
            The modulus as int

        Raises:
            DomainError: n even or below the minimum
            PrimalityError: n composite and allow_composite is False
        """
        n = NumericValidator.require_at_least(n, minimum, "n")
        if n % 2 == 0:
            raise DomainError(f"n must be odd, got {n}", field="n")
        if not cls.is_prime(n):
            if not allow_composite:
                raise PrimalityError(f"n must be prime, got {n}", n=n)
            logger.warning(f"Composite modulus n={n}: results are formula-unsafe")
        return n
