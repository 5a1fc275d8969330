"""Exact probability measures on {0,1}^n.

All masses are `fractions.Fraction`; nothing in this module touches
floating point.  Atoms are keyed internally by integer masks (variable i
is bit i-1, so the leftmost character of the serialized bitstring is x1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Iterator

from .bitops import (
    bits_from_mask,
    cap,
    is_submask,
    mask_from_bits,
    mask_of_indices,
)
from .errors import (
    BadWidth,
    DimensionMismatch,
    EmptyConditioningEvent,
    EmptySubset,
    InvalidTestFunction,
    MassNotOne,
    NegativeMass,
    TooLarge,
    ZeroProbabilityEvent,
)

ONE = Fraction(1)
ZERO = Fraction(0)


def parse_rational(text) -> Fraction:
    """Parse "num/den" or a decimal string exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text))


def format_rational(q: Fraction) -> str:
    """Lowest-terms "num/den" (or plain integer) representation."""
    return str(Fraction(q))


@dataclass(frozen=True)
class Assignment:
    """A partial assignment: distinct 1-based indices with their bit values."""

    indices: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.indices) != len(set(self.indices)):
            raise ValueError("assignment indices must be distinct")
        if len(self.indices) != len(self.values):
            raise ValueError("assignment indices/values length mismatch")
        if any(i < 1 for i in self.indices):
            raise ValueError("assignment indices are 1-based")
        if any(v not in (0, 1) for v in self.values):
            raise ValueError("assignment values must be bits")

    @classmethod
    def empty(cls) -> "Assignment":
        return cls((), ())

    @classmethod
    def of(cls, mapping: dict[int, int]) -> "Assignment":
        items = sorted(mapping.items())
        return cls(tuple(i for i, _ in items), tuple(v for _, v in items))

    def extended(self, index: int, value: int) -> "Assignment":
        return Assignment(self.indices + (index,), self.values + (value,))

    @property
    def index_mask(self) -> int:
        return mask_of_indices(self.indices)

    @property
    def value_mask(self) -> int:
        mask = 0
        for i, v in zip(self.indices, self.values):
            if v:
                mask |= 1 << (i - 1)
        return mask

    def matches(self, atom_mask: int) -> bool:
        return atom_mask & self.index_mask == self.value_mask

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "values": "".join(str(v) for v in self.values),
        }


class ExplicitMeasure:
    """An exact rational probability mass function on {0,1}^n.

    Invariants (checked on construction): all masses are positive
    rationals, zero-mass atoms are not stored, the total mass is exactly
    1, and every key fits in n bits.  Instances are immutable; share them
    freely.
    """

    __slots__ = ("n", "_mass", "_scaled")

    def __init__(self, n: int, mass: dict[int, Fraction], _checked: bool = False):
        if n < 1:
            raise BadWidth("n must be a positive integer")
        if n > cap("measure"):
            raise TooLarge(f"n={n} exceeds the measure cap {cap('measure')}")
        if not _checked:
            full = (1 << n) - 1
            clean: dict[int, Fraction] = {}
            for key, p in mass.items():
                if key < 0 or key > full:
                    raise BadWidth(f"atom {key} does not fit in {n} bits")
                p = Fraction(p)
                if p < 0:
                    raise NegativeMass(f"atom {bits_from_mask(key, n)} has mass {p}")
                if p > 0:
                    clean[key] = clean.get(key, ZERO) + p
            total = sum(clean.values(), ZERO)
            if total != 1:
                raise MassNotOne(f"masses sum to {total}, expected 1")
            mass = clean
        self.n = n
        self._mass = mass
        self._scaled = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_atoms(cls, n: int, atoms: Iterable[tuple]) -> "ExplicitMeasure":
        """Build from (bitstring-or-mask, rational) pairs.

        Duplicate atoms are merged by summing their masses.
        """
        mass: dict[int, Fraction] = {}
        for key, p in atoms:
            if isinstance(key, str):
                if len(key) != n:
                    raise BadWidth(f"bitstring {key!r} is not {n} bits wide")
                key = mask_from_bits(key)
            p = parse_rational(p)
            mass[key] = mass.get(key, ZERO) + p
        return cls(n, mass)

    # -- basic queries ----------------------------------------------------

    def prob(self, key) -> Fraction:
        if isinstance(key, str):
            key = mask_from_bits(key)
        return self._mass.get(key, ZERO)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._mass))

    def atoms(self) -> Iterator[tuple[int, Fraction]]:
        """Atoms as (mask, mass), sorted by bitstring."""
        for key in sorted(self._mass, key=lambda m: bits_from_mask(m, self.n)):
            yield key, self._mass[key]

    def items(self):
        return self._mass.items()

    def scaled_weights(self) -> tuple[int, dict[int, int]]:
        """(common denominator D, atom -> integer weight) with sum of
        weights exactly D.  Cached; integer weights feed the flow and
        martingale engines."""
        if self._scaled is None:
            denom = lcm(*(p.denominator for p in self._mass.values()))
            self._scaled = (
                denom,
                {k: int(p * denom) for k, p in self._mass.items()},
            )
        return self._scaled

    def __eq__(self, other):
        return (
            isinstance(other, ExplicitMeasure)
            and self.n == other.n
            and self._mass == other._mass
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._mass.items()))))

    def __repr__(self):
        return f"ExplicitMeasure(n={self.n}, atoms={len(self._mass)})"

    # -- operations --------------------------------------------------------

    def condition(self, on: Assignment) -> "ExplicitMeasure":
        """Conditional law of the unassigned variables given ``on``.

        The surviving variables keep their relative order and are
        re-labeled 1..n-|on| ascending.  Raises ZeroProbabilityEvent when
        the conditioning event has mass 0.
        """
        if any(i > self.n for i in on.indices):
            raise DimensionMismatch("assignment index out of range")
        keep = [pos for pos in range(self.n) if not on.index_mask >> pos & 1]
        total = ZERO
        filtered: dict[int, Fraction] = {}
        for key, p in self._mass.items():
            if on.matches(key):
                reduced = 0
                for j, pos in enumerate(keep):
                    if key >> pos & 1:
                        reduced |= 1 << j
                filtered[reduced] = filtered.get(reduced, ZERO) + p
                total += p
        if total == 0:
            raise ZeroProbabilityEvent(f"event {on.to_json()} has probability 0")
        if not keep:
            raise ValueError("conditioning on every variable leaves nothing")
        return ExplicitMeasure(
            len(keep), {k: p / total for k, p in filtered.items()}, _checked=True
        )

    def prob_of_assignment(self, on: Assignment) -> Fraction:
        return sum(
            (p for key, p in self._mass.items() if on.matches(key)), ZERO
        )

    def marginal(self, subset) -> "ExplicitMeasure":
        """Exact pushforward onto the given coordinates (ascending order)."""
        subset = sorted(set(subset))
        if not subset:
            raise EmptySubset("marginal over the empty index set")
        if subset[0] < 1 or subset[-1] > self.n:
            raise DimensionMismatch("marginal index out of range")
        positions = [i - 1 for i in subset]
        mass: dict[int, Fraction] = {}
        for key, p in self._mass.items():
            reduced = 0
            for j, pos in enumerate(positions):
                if key >> pos & 1:
                    reduced |= 1 << j
            mass[reduced] = mass.get(reduced, ZERO) + p
        return ExplicitMeasure(len(subset), mass, _checked=True)

    def expectation(self, f: "TestFunction") -> Fraction:
        if f.n != self.n:
            raise DimensionMismatch(f"function on {f.n} vars, measure on {self.n}")
        return sum((p * f.values[key] for key, p in self._mass.items()), ZERO)

    def mean_vector(self) -> list[Fraction]:
        """E[X_i] for i = 1..n."""
        out = [ZERO] * self.n
        for key, p in self._mass.items():
            pos = 0
            m = key
            while m:
                if m & 1:
                    out[pos] += p
                m >>= 1
                pos += 1
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "atoms": [
                {"x": bits_from_mask(k, self.n), "p": format_rational(p)}
                for k, p in self.atoms()
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ExplicitMeasure":
        n = int(doc["n"])
        return cls.from_atoms(n, [(a["x"], a["p"]) for a in doc["atoms"]])

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ExplicitMeasure":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def new_explicit(n: int, atoms: Iterable[tuple]) -> ExplicitMeasure:
    """Normalization-checked measure from (bitvector, rational) pairs."""
    return ExplicitMeasure.from_atoms(n, atoms)


# ---------------------------------------------------------------------------
# Test functions
# ---------------------------------------------------------------------------


class TestFunction:
    """A rational-valued function on {0,1}^n with declared regularity.

    ``declared_lipschitz = 1`` is verified on construction by checking
    every single-bit-flip edge; ``declared_monotone`` likewise via the
    coordinatewise order.  The toolkit only ever uses c = 1.
    """

    __slots__ = ("n", "values", "declared_lipschitz", "declared_monotone", "name")
    __test__ = False  # keep pytest from collecting this as a test class

    def __init__(
        self,
        n: int,
        values,
        declared_lipschitz: Fraction = ONE,
        declared_monotone: bool = False,
        name: str = "f",
    ):
        if len(values) != 1 << n:
            raise BadWidth(f"need {1 << n} values for n={n}")
        self.n = n
        self.values = [Fraction(v) for v in values]
        self.declared_lipschitz = Fraction(declared_lipschitz)
        self.declared_monotone = bool(declared_monotone)
        self.name = name
        self._verify()

    def _verify(self):
        c = self.declared_lipschitz
        vals = self.values
        for x in range(1 << self.n):
            for pos in range(self.n):
                y = x | (1 << pos)
                if y == x:
                    continue
                step = vals[y] - vals[x & ~(1 << pos)]
                if abs(step) > c:
                    raise InvalidTestFunction(
                        f"{self.name}: flip of x{pos + 1} changes value by {step}"
                    )
                if self.declared_monotone and step < 0:
                    raise InvalidTestFunction(
                        f"{self.name}: not monotone along x{pos + 1}"
                    )

    def __call__(self, mask: int) -> Fraction:
        return self.values[mask]

    def exact_range(self) -> tuple[Fraction, Fraction]:
        return min(self.values), max(self.values)

    @classmethod
    def from_callable(
        cls, n: int, fn: Callable[[tuple[int, ...]], object], **kw
    ) -> "TestFunction":
        vals = []
        for mask in range(1 << n):
            bits = tuple(mask >> pos & 1 for pos in range(n))
            vals.append(parse_rational(fn(bits)))
        return cls(n, vals, **kw)


def sum_function(n: int) -> TestFunction:
    return TestFunction.from_callable(
        n, lambda bits: sum(bits), declared_monotone=True, name="sum"
    )


def constant_function(n: int, value=0) -> TestFunction:
    v = parse_rational(value)
    return TestFunction(
        n, [v] * (1 << n), declared_monotone=True, name=f"const({v})"
    )


def xor_function(n: int) -> TestFunction:
    return TestFunction.from_callable(
        n, lambda bits: sum(bits) % 2, name="xor"
    )


def random_lipschitz(n: int, rng, monotone: bool = False, pieces: int = 3) -> TestFunction:
    """Seeded random 1-Lipschitz function with exact rational values.

    Built as a min (or max) of affine pieces with per-coordinate slopes in
    [-1, 1] (in [0, 1] when monotone), quantized to quarters, so the
    Lipschitz bound holds exactly and by construction.
    """
    combine = min if rng.random() < 0.5 else max
    terms = []
    for _ in range(max(1, pieces)):
        offset = Fraction(rng.randint(-12, 12), 4)
        low = 0 if monotone else -4
        slopes = [Fraction(rng.randint(low, 4), 4) for _ in range(n)]
        terms.append((offset, slopes))

    vals = []
    for mask in range(1 << n):
        candidates = [
            offset + sum((s for pos, s in enumerate(slopes) if mask >> pos & 1), ZERO)
            for offset, slopes in terms
        ]
        vals.append(combine(candidates))
    return TestFunction(
        n,
        vals,
        declared_monotone=monotone,
        name=f"rand({'mono' if monotone else 'free'})",
    )


# ---------------------------------------------------------------------------
# Measure families
# ---------------------------------------------------------------------------


def family_nand(n: int) -> ExplicitMeasure:
    """x2..xn i.i.d. fair bits; x1 = 1 unless all the others are 1.

    The first variable has a large influence on the rest: revealing x1 = 0
    forces every other variable to 1.  This is the family that separates
    fixed-ordering martingales from the adaptive ordering.
    """
    if n < 2:
        raise BadWidth("nand family needs n >= 2")
    if n > cap("measure"):
        raise TooLarge(f"n={n} exceeds the measure cap")
    p = Fraction(1, 1 << (n - 1))
    mass: dict[int, Fraction] = {}
    for rest in range(1 << (n - 1)):
        x1 = 0 if rest == (1 << (n - 1)) - 1 else 1
        mass[x1 | (rest << 1)] = p
    return ExplicitMeasure(n, mass, _checked=True)


def family_independent(probs) -> ExplicitMeasure:
    """Product measure with P[x_i = 1] = probs[i-1]."""
    probs = [parse_rational(p) for p in probs]
    n = len(probs)
    if n < 1:
        raise BadWidth("need at least one probability")
    if n > cap("measure"):
        raise TooLarge(f"n={n} exceeds the measure cap")
    if any(p < 0 or p > 1 for p in probs):
        raise NegativeMass("probabilities must lie in [0, 1]")
    mass: dict[int, Fraction] = {0: ONE}
    for pos, p in enumerate(probs):
        nxt: dict[int, Fraction] = {}
        for key, q in mass.items():
            if p < 1:
                nxt[key] = nxt.get(key, ZERO) + q * (1 - p)
            if p > 0:
                k1 = key | (1 << pos)
                nxt[k1] = nxt.get(k1, ZERO) + q * p
        mass = nxt
    return ExplicitMeasure(n, mass, _checked=True)


def family_conditioned_sum(probs, lo: int, hi: int) -> ExplicitMeasure:
    """Independent bits conditioned on lo <= sum x_i <= hi."""
    base = family_independent(probs)
    total = ZERO
    mass: dict[int, Fraction] = {}
    for key, p in base.items():
        if lo <= key.bit_count() <= hi:
            mass[key] = p
            total += p
    if total == 0:
        raise EmptyConditioningEvent(f"no outcomes with sum in [{lo}, {hi}]")
    return ExplicitMeasure(
        base.n, {k: p / total for k, p in mass.items()}, _checked=True
    )


def family_balls_bins(balls: int, bins: int) -> ExplicitMeasure:
    """Occupancy indicators B_ij for balls thrown uniformly into bins.

    Variable indexing is ball-major: indicator (ball i, bin j) is variable
    (i-1)*bins + j.  n = balls*bins must stay within the measure cap.
    """
    if balls < 1 or bins < 1:
        raise BadWidth("balls and bins must be positive")
    n = balls * bins
    if n > cap("measure"):
        raise TooLarge(f"n={n} exceeds the measure cap")
    p = Fraction(1, bins**balls)
    mass: dict[int, Fraction] = {}
    for outcome in range(bins**balls):
        key = 0
        rem = outcome
        for ball in range(balls):
            bin_ = rem % bins
            rem //= bins
            key |= 1 << (ball * bins + bin_)
        mass[key] = mass.get(key, ZERO) + p
    return ExplicitMeasure(n, mass, _checked=True)


def family_hadamard(order: int) -> ExplicitMeasure:
    """Uniform over Sylvester-Hadamard columns, rows mapped to {0,1} bits.

    Row 1 is constantly +1 and is dropped, leaving order-1 pairwise
    independent fair bits that are far from jointly independent: all of
    them equal 1 with probability 1/order.
    """
    if order < 2 or order & (order - 1):
        raise BadWidth("order must be a power of two, at least 2")
    n = order - 1
    if n > cap("measure"):
        raise TooLarge(f"n={n} exceeds the measure cap")
    p = Fraction(1, order)
    mass: dict[int, Fraction] = {}
    for col in range(order):
        key = 0
        for row in range(1, order):
            # Sylvester entry H[row][col] = (-1)^{popcount(row & col)}
            if (row & col).bit_count() % 2 == 0:
                key |= 1 << (row - 1)
        mass[key] = mass.get(key, ZERO) + p
    return ExplicitMeasure(n, mass, _checked=True)


def family_anti_pair() -> ExplicitMeasure:
    """Perfectly anti-correlated pair: uniform on {01, 10}."""
    return ExplicitMeasure(2, {0b01: Fraction(1, 2), 0b10: Fraction(1, 2)}, _checked=True)


def family_pos_pair() -> ExplicitMeasure:
    """Perfectly correlated pair: uniform on {00, 11}.  Violates every
    negative-dependence notion; lives in the zoo as the universal foil."""
    return ExplicitMeasure(2, {0b00: Fraction(1, 2), 0b11: Fraction(1, 2)}, _checked=True)


__all__ = [
    "Assignment",
    "ExplicitMeasure",
    "TestFunction",
    "new_explicit",
    "parse_rational",
    "format_rational",
    "sum_function",
    "constant_function",
    "xor_function",
    "random_lipschitz",
    "family_nand",
    "family_independent",
    "family_conditioned_sum",
    "family_balls_bins",
    "family_hadamard",
    "family_anti_pair",
    "family_pos_pair",
]
