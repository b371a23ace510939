"""Stateless 64-bit seed derivation (splitmix64 finalizer chained over parts)."""

from __future__ import annotations

import random
import zlib

MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def tag(name: str) -> int:
    """Stable integer tag for a string (CRC-32), independent of PYTHONHASHSEED."""
    return zlib.crc32(name.encode("utf-8"))


def mix64(*parts) -> int:
    """Fold integers (or strings, via :func:`tag`) into one 64-bit seed."""
    h = 0
    for p in parts:
        if isinstance(p, str):
            p = tag(p)
        h = splitmix64(h ^ (int(p) & MASK64))
    return h


def make_rng(*parts) -> random.Random:
    return random.Random(mix64(*parts))
