"""Bit-string bookkeeping for questions and answers.

Bit strings are plain ``str`` objects over the alphabet {'0', '1'}.
Positions are 1-indexed (bit 1 is the leftmost character) to match the
usual numbering of tested qubits, and the integer encoding is big-endian:
bit 1 is the most significant bit of the index.
"""

from __future__ import annotations

from typing import Iterator


def check(s: str) -> str:
    """Validate that ``s`` is a nonempty bit string and return it unchanged."""
    if not isinstance(s, str) or not s or any(c not in "01" for c in s):
        raise ValueError(f"not a bit string: {s!r}")
    return s


def bit(s: str, k: int) -> int:
    """The k-th bit of ``s`` as an int, 1-indexed."""
    if not 1 <= k <= len(s):
        raise ValueError(f"bit index {k} out of range for length {len(s)}")
    return int(s[k - 1])


def halves(s: str) -> tuple[str, str]:
    """Split an even-length string into its first and second half."""
    if len(s) % 2 != 0:
        raise ValueError(f"cannot halve odd-length string {s!r}")
    m = len(s) // 2
    return s[:m], s[m:]


def dot(a: str, b: str) -> int:
    """Inner product sum_j a_j b_j over the integers."""
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return sum(int(x) & int(y) for x, y in zip(a, b))


def weight(s: str) -> int:
    """Hamming weight."""
    return s.count("1")


def xor(a: str, b: str) -> str:
    """Bitwise exclusive or."""
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def unit(n: int, k: int) -> str:
    """The length-n string with a single 1 at position k (1-indexed)."""
    if not 1 <= k <= n:
        raise ValueError(f"position {k} out of range for length {n}")
    return "0" * (k - 1) + "1" + "0" * (n - k)


def flip(s: str, k: int) -> str:
    """Flip bit k of ``s``."""
    return xor(s, unit(len(s), k))


def complement(s: str) -> str:
    """Flip every bit."""
    return "".join("1" if c == "0" else "0" for c in s)


def zeros(n: int) -> str:
    return "0" * n


def ones(n: int) -> str:
    return "1" * n


def to_int(s: str) -> int:
    """Big-endian integer value of a bit string."""
    return int(s, 2) if s else 0


def from_int(i: int, n: int) -> str:
    """Length-n big-endian bit string for integer ``i``."""
    if not 0 <= i < (1 << n):
        raise ValueError(f"{i} does not fit in {n} bits")
    return format(i, f"0{n}b")


def all_strings(n: int) -> Iterator[str]:
    """All length-n bit strings in lexicographic (= numeric) order."""
    for i in range(1 << n):
        yield from_int(i, n)
