"""
Utility functions shared across the application.
Provides helpers for exact rationals, float formatting, CSV emission and
configuration hashing.
"""

from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterable, Sequence
import csv
import hashlib
import json


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def rational_dict(value) -> dict:
    """
    Serialize an exact rational as strings.

    Args:
        value: int or Fraction

    Returns:
        {"num": "<int>", "den": "<int>"}
    """
    value = Fraction(value)
    return {"num": str(value.numerator), "den": str(value.denominator)}


def to_float(value) -> float:
    """Convert an exact value to float at an output boundary."""
    # int/int true division is correctly rounded (half-even on ties)
    value = Fraction(value)
    return value.numerator / value.denominator


def format_float(value) -> str:
    """Shortest round-trip decimal representation."""
    return repr(float(value))


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """
    Write a CSV file with a mandatory header, UTF-8 and LF line endings.

    Args:
        path: Destination path
        header: Column names
        rows: Row sequences; floats are written as shortest round-trip decimals

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
    return path


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def config_hash(options: dict) -> str:
    """
    Hash normalised run options.
    Keys are sorted and values stringified so the hash is stable across runs.
    """
    normalised = {
        key: (str(value) if not isinstance(value, (int, bool, type(None))) else value)
        for key, value in sorted(options.items())
    }
    payload = json.dumps(normalised, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
