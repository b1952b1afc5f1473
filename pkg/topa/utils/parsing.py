"""Argument parsing helpers for the command line."""

import argparse


def parse_int_list(text: str) -> tuple[int, ...]:
    """Parse a comma-separated list of positive integers.

    Examples:
        "20,20,20" -> (20, 20, 20)
        "4, 4" -> (4, 4)
    """
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"values must be positive, got {text!r}")
    return values


def positive_int(text: str) -> int:
    """argparse type for integers >= 1."""
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def parse_seed_list(text: str) -> list[int]:
    """Parse seeds given as ``"0,1,5"`` or as a half-open range ``"0:100"``."""
    try:
        if ":" in text:
            lo, hi = (int(part) for part in text.split(":", 1))
            seeds = list(range(lo, hi))
        else:
            seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid seed list {text!r}") from e
    if not seeds:
        raise argparse.ArgumentTypeError(f"seed list {text!r} is empty")
    return seeds
