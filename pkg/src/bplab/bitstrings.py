"""Bit-string conventions shared across the package.

Inputs are strings over {0,1}; bit i of the mathematical input (1-based)
is character i-1. Truth-table index i maps to the big-endian n-bit
encoding of i, so bit 1 is the most significant bit of the index.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence


def parse_bits(s: str | Sequence[int]) -> tuple[int, ...]:
    """Normalize a '0'/'1' string or int sequence to a tuple of ints."""
    if isinstance(s, str):
        out = []
        for ch in s:
            if ch == "0":
                out.append(0)
            elif ch == "1":
                out.append(1)
            else:
                raise ValueError(f"invalid bit character {ch!r}")
        return tuple(out)
    out = []
    for b in s:
        if b not in (0, 1):
            raise ValueError(f"invalid bit value {b!r}")
        out.append(int(b))
    return tuple(out)


def bits_to_str(bits: Iterable[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    """Big-endian n-bit encoding of index (bit 1 = most significant)."""
    if not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for n={n}")
    return tuple((index >> (n - 1 - j)) & 1 for j in range(n))


def bits_to_index(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | b
    return v


def all_inputs(n: int):
    """Yield all n-bit inputs in truth-table (big-endian index) order."""
    for i in range(1 << n):
        yield index_to_bits(i, n)
