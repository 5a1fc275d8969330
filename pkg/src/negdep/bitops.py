"""Bitmask helpers shared across the toolkit.

Convention: variable ``i`` (1-based) occupies bit ``i - 1`` of an integer
mask and character ``i - 1`` of the serialized bitstring, which is written
left to right as ``x1 x2 ... xn``.  The all-variables mask for ``n``
variables is ``(1 << n) - 1``.
"""

from __future__ import annotations

import os
from functools import lru_cache

_ENV_CAP = "NEGDEP_MAX_N"

# Enumeration caps, per operation family.  NEGDEP_MAX_N overrides all of
# them at the user's own runtime risk.
_DEFAULT_CAPS = {
    "measure": 20,
    "cylinder": 20,
    "neg_association": 8,
    "cna": 8,
    "neg_regression": 10,
    "stochastic_covering": 10,
    "tree": 12,
}


def cap(name: str) -> int:
    """Enumeration cap for the named operation family."""
    override = os.environ.get(_ENV_CAP)
    if override is not None:
        return int(override)
    return _DEFAULT_CAPS[name]


def mask_from_bits(bits: str) -> int:
    """Parse a bitstring ``x1 x2 ... xn`` into an integer mask."""
    mask = 0
    for pos, ch in enumerate(bits):
        if ch == "1":
            mask |= 1 << pos
        elif ch != "0":
            raise ValueError(f"not a bitstring: {bits!r}")
    return mask


def bits_from_mask(mask: int, n: int) -> str:
    """Serialize an integer mask to the ``x1 x2 ... xn`` bitstring."""
    return "".join("1" if mask >> pos & 1 else "0" for pos in range(n))


def indices_of(mask: int) -> tuple[int, ...]:
    """1-based variable indices of the set bits, ascending."""
    out = []
    pos = 0
    while mask:
        if mask & 1:
            out.append(pos + 1)
        mask >>= 1
        pos += 1
    return tuple(out)


def mask_of_indices(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def is_submask(a: int, b: int) -> bool:
    """True iff every bit of ``a`` is set in ``b`` (coordinatewise <=)."""
    return a & ~b == 0


@lru_cache(maxsize=None)
def subsets_lex(n: int) -> tuple[int, ...]:
    """All nonempty subsets of [1, n] as masks, ordered lexicographically
    by their ascending index tuple: {1} < {1,2} < {1,2,3} < ... < {1,3} < {2}.
    """
    masks = list(range(1, 1 << n))
    masks.sort(key=indices_of)
    return tuple(masks)


class SubsetExtractor:
    """Constant-time extraction of the bits selected by a fixed mask.

    ``extract(m)`` returns the selected bits of ``m`` packed densely, in
    ascending position order (position j of the packed value is the j-th
    smallest selected position).  Built from two half-width lookup tables
    so bucketing a measure over many subsets stays cheap.
    """

    def __init__(self, selector: int, n: int):
        self.selector = selector
        self.width = selector.bit_count()
        half = max(1, n // 2)
        lo_sel = selector & ((1 << half) - 1)
        hi_sel = selector >> half
        self._half = half
        self._lo_count = lo_sel.bit_count()
        self._lo = self._build_table(lo_sel, half)
        self._hi = self._build_table(hi_sel, n - half)

    @staticmethod
    def _build_table(sel: int, width: int) -> list[int]:
        table = []
        for value in range(1 << width):
            packed = 0
            out = 0
            for pos in range(width):
                if sel >> pos & 1:
                    if value >> pos & 1:
                        packed |= 1 << out
                    out += 1
            table.append(packed)
        return table

    def extract(self, mask: int) -> int:
        half = self._half
        return self._lo[mask & ((1 << half) - 1)] | (
            self._hi[mask >> half] << self._lo_count
        )
