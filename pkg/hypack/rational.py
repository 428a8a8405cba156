"""Exact rational helpers.

Rationals cross every serialisation boundary as "p/q" strings, never floats.
"""

import argparse

from fractions import Fraction


def to_fraction(value):
    """Convert int, Fraction, float or "p/q" string to a Fraction.

    Floats are converted exactly (their binary value), so callers that care
    about decimal input should pass strings.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Expected a number, got bool")
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to Fraction")


def is_exact(value):
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def fraction_str(value):
    """Render an exact number as "p/q" (or "p" when integral)."""
    return str(to_fraction(value))


def number_to_json(value):
    """JSON-friendly form of a number: exact values as strings, inf as "inf"."""
    if is_exact(value):
        return fraction_str(value)
    if value is None:
        return None
    if value == float("inf"):
        return "inf"
    return float(value)


def number_from_json(value):
    if value is None:
        return None
    if value == "inf":
        return float("inf")
    if isinstance(value, str):
        return Fraction(value)
    return value


def fraction_arg(text):
    """argparse type for rationals given as "p/q" or decimals."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"Expected a rational like 7/10, got {text!r}")


def range_arg(text):
    """argparse type for inclusive integer ranges written "lo:hi"."""
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a range like -2:2, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"Empty range {text!r}")
    return lo, hi
