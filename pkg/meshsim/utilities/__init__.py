"""
Utilities Module

General purpose helpers shared by the simulator: seeded random streams,
file-safe names, config dictionary merging and human readable durations.
"""

import copy
import re
from enum import IntEnum
from typing import Any, Dict, Union

import numpy as np


class Stream(IntEnum):
    """Purpose keys for make_rng; one stream per purpose and node."""

    SCAN_PHASE = 1
    ADV_JITTER = 2
    BACKOFF = 3
    NONCE = 4
    PUBLISH = 5
    LOSS = 6
    REQUEST_JITTER = 7
    SLEEP_PHASE = 8


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Create an independent, reproducible random stream.

    The same (seed, keys) always yields the same stream, and distinct keys
    yield statistically independent streams, so every node and every purpose
    (scan phase, jitter, backoff, nonces) gets its own generator.

    Args:
        seed: Run seed
        keys: Stream identifiers, e.g. (STREAM_BACKOFF, node_id)

    Returns:
        numpy Generator
    """
    entropy = [int(seed) & 0xFFFFFFFF] + [int(k) & 0xFFFFFFFF for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def clean_filename(filename: str, replacement: str = '_') -> str:
    """
    Turn a scenario name into a safe directory name.

    Args:
        filename: Original name
        replacement: Character to replace invalid chars with

    Returns:
        Cleaned name
    """
    cleaned = re.sub(r'[<>:"/\\|?*\s]', replacement, filename)
    cleaned = cleaned.strip('. ')

    if not cleaned:
        cleaned = 'unnamed'

    return cleaned


def deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge two nested dictionaries without mutating either.

    Args:
        base: Default values
        overrides: Values that win over base; nested dicts merge recursively

    Returns:
        New merged dictionary
    """
    merged = copy.deepcopy(base)

    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)

    return merged


def format_duration(microseconds: Union[int, float]) -> str:
    """
    Format a simulated duration into a human readable string.

    Args:
        microseconds: Duration in microseconds

    Returns:
        Formatted string (e.g., "1.5 ms")
    """
    value = float(microseconds)

    if abs(value) < 1e3:
        return f"{value:.1f} us"
    if abs(value) < 1e6:
        return f"{value / 1e3:.1f} ms"
    return f"{value / 1e6:.1f} s"


# Export main functions
__all__ = [
    'Stream',
    'make_rng',
    'clean_filename',
    'deep_merge',
    'format_duration',
]
