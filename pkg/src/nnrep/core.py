"""Exact arithmetic, Boolean functions and distance primitives.

Boolean points are tuples of 0/1 ints. A point ``(x_1, ..., x_n)`` has index
``sum(x_i << (i - 1))``, so ``x_1`` is the least significant bit. Truth tables
are stored as a Python int whose bit ``i`` is ``f`` at index ``i``.

Rationals are :class:`fractions.Fraction`, which is always kept in lowest
terms with a positive denominator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from math import ceil, lcm
from typing import Iterable, Sequence

import numpy as np

MAX_ARITY = 24

Rational = Fraction
RationalPoint = tuple  # tuple[Fraction, ...]
BoolPoint = tuple  # tuple[int, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")


class SpecError(ValueError):
    """Malformed function spec or rational literal."""


# -- rationals ---------------------------------------------------------------

def parse_rational(text) -> Fraction:
    """Parse ``p/q`` or ``p``. Non-canonical input such as ``2/-4`` is fine."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if m is None:
        raise SpecError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise SpecError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def as_point(coords: Iterable) -> tuple:
    return tuple(parse_rational(c) for c in coords)


# -- Boolean points ------------------------------------------------------------

def point_from_index(index: int, n: int) -> tuple:
    return tuple((index >> i) & 1 for i in range(n))


def index_of(point: Sequence[int]) -> int:
    idx = 0
    for i, bit in enumerate(point):
        if bit not in (0, 1):
            raise ValueError(f"not a Boolean point: {tuple(point)}")
        idx |= int(bit) << i
    return idx


def all_points(n: int) -> list:
    return [point_from_index(i, n) for i in range(1 << n)]


def cube_array(n: int) -> np.ndarray:
    """All ``2**n`` points as an int64 array, row ``i`` is the point of index ``i``."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)


def is_boolean_point(p: Sequence) -> bool:
    return all(c == 0 or c == 1 for c in p)


def weight(point: Sequence[int]) -> int:
    return sum(point)


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} != {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def sqdist(a: Sequence, b: Sequence) -> Fraction:
    """Squared Euclidean distance, exact."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} != {len(b)}")
    total = Fraction(0)
    for x, y in zip(a, b):
        d = Fraction(x) - Fraction(y)
        total += d * d
    return total


# -- Boolean functions -----------------------------------------------------------

@dataclass(frozen=True)
class BooleanFunction:
    arity: int
    table: int

    def __post_init__(self):
        if not 1 <= self.arity <= MAX_ARITY:
            raise ValueError(f"arity must be in 1..{MAX_ARITY}, got {self.arity}")
        if self.table < 0 or self.table >> (1 << self.arity):
            raise ValueError("truth table has bits beyond 2**arity")

    @classmethod
    def from_values(cls, n: int, values: Iterable) -> "BooleanFunction":
        """Build from ``2**n`` values given in index order."""
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        if arr.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} values, got shape {arr.shape}")
        packed = np.packbits(arr.astype(bool), bitorder="little")
        return cls(n, int.from_bytes(packed.tobytes(), "little"))

    @classmethod
    def from_callable(cls, n: int, fn) -> "BooleanFunction":
        table = 0
        for i in range(1 << n):
            if fn(point_from_index(i, n)):
                table |= 1 << i
        return cls(n, table)

    def __call__(self, point: Sequence[int]) -> int:
        if len(point) != self.arity:
            raise ValueError(f"expected a point of length {self.arity}")
        return (self.table >> index_of(point)) & 1

    def value_at(self, index: int) -> int:
        return (self.table >> index) & 1

    @cached_property
    def _bits(self) -> np.ndarray:
        size = 1 << self.arity
        raw = self.table.to_bytes((size + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        bits.flags.writeable = False
        return bits

    def values(self) -> np.ndarray:
        """Truth table as a read-only 0/1 uint8 array in index order."""
        return self._bits

    def count_ones(self) -> int:
        return self.table.bit_count()

    def is_constant(self) -> bool:
        return self.table == 0 or self.table == (1 << (1 << self.arity)) - 1

    def hex(self) -> str:
        digits = max(1, ((1 << self.arity) + 3) // 4)
        return format(self.table, f"0{digits}x")

    def __str__(self):
        return f"table:{self.arity}:{self.hex()}"


@dataclass(frozen=True)
class SymmetricSpec:
    arity: int
    levels: frozenset

    def __post_init__(self):
        object.__setattr__(self, "levels", frozenset(self.levels))
        bad = [lv for lv in self.levels if not 0 <= lv <= self.arity]
        if bad:
            raise SpecError(f"levels {sorted(bad)} outside 0..{self.arity}")

    def function(self) -> BooleanFunction:
        n = self.arity
        weights = cube_array(n).sum(axis=1)
        return BooleanFunction.from_values(n, np.isin(weights, list(self.levels)))


@dataclass(frozen=True)
class ThresholdSpec:
    """``f(x) = 1`` iff ``sum(w_i * x_i) >= t`` with integer weights and threshold."""

    weights: tuple
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "threshold", int(self.threshold))

    @classmethod
    def from_rational(cls, weights: Sequence, threshold) -> "ThresholdSpec":
        ws = [parse_rational(w) for w in weights]
        t = parse_rational(threshold)
        scale = lcm(*(q.denominator for q in ws), t.denominator)
        return cls(tuple(int(w * scale) for w in ws), int(t * scale))

    @property
    def arity(self) -> int:
        return len(self.weights)

    def function(self) -> BooleanFunction:
        sums = cube_array(self.arity) @ np.asarray(self.weights, dtype=np.int64)
        return BooleanFunction.from_values(self.arity, sums >= self.threshold)


# -- function mini-language --------------------------------------------------------

@dataclass(frozen=True)
class FunctionSpec:
    """A parsed function spec: the family name plus whatever structure it carries."""

    family: str
    param: int
    function: BooleanFunction
    symmetric: SymmetricSpec | None = field(default=None)
    threshold: ThresholdSpec | None = field(default=None)
    text: str = ""


def _int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise SpecError(f"bad {what}: {token!r}") from None


def _check_arity(n: int) -> None:
    if not 1 <= n <= MAX_ARITY:
        raise SpecError(f"arity {n} outside 1..{MAX_ARITY}")


def parity_function(n: int) -> BooleanFunction:
    return SymmetricSpec(n, frozenset(range(1, n + 1, 2))).function()


def majority_spec(n: int) -> ThresholdSpec:
    return ThresholdSpec((1,) * n, ceil(n / 2))


def inner_product_function(n: int) -> BooleanFunction:
    """IP_n on ``(x_1..x_n, y_1..y_n)``."""
    _check_arity(2 * n)
    idx = np.arange(1 << (2 * n), dtype=np.int64)
    xs, ys = idx & ((1 << n) - 1), idx >> n
    anded = xs & ys
    par = np.zeros_like(anded)
    for i in range(n):
        par ^= (anded >> i) & 1
    return BooleanFunction.from_values(2 * n, par)


def parse_spec(text: str) -> FunctionSpec:
    """Parse the function mini-language.

    ``parity:n | maj:n | th:n:t[:w1,...,wn] | ip:n | sym:n:l1,l2,... |
    table:n:<hex>``
    """
    parts = text.strip().split(":")
    family = parts[0].lower()
    if len(parts) < 2:
        raise SpecError(f"missing arity in {text!r}")
    n = _int(parts[1], "arity")

    if family == "parity":
        if len(parts) != 2:
            raise SpecError(f"parity takes only an arity: {text!r}")
        _check_arity(n)
        sym = SymmetricSpec(n, frozenset(range(1, n + 1, 2)))
        return FunctionSpec("parity", n, sym.function(), symmetric=sym, text=text)

    if family == "maj":
        if len(parts) != 2:
            raise SpecError(f"maj takes only an arity: {text!r}")
        _check_arity(n)
        th = majority_spec(n)
        sym = SymmetricSpec(n, frozenset(range(th.threshold, n + 1)))
        return FunctionSpec("maj", n, th.function(), symmetric=sym, threshold=th, text=text)

    if family == "th":
        if len(parts) not in (3, 4):
            raise SpecError(f"expected th:n:t[:weights]: {text!r}")
        _check_arity(n)
        if len(parts) == 4 and parts[3].strip():
            ws = [w for w in parts[3].split(",")]
            if len(ws) != n:
                raise SpecError(f"expected {n} weights, got {len(ws)}")
        else:
            ws = [1] * n
        th = ThresholdSpec.from_rational(ws, parts[2])
        sym = None
        if len(set(th.weights)) == 1 and th.weights[0] > 0:
            w = th.weights[0]
            sym = SymmetricSpec(n, frozenset(k for k in range(n + 1) if k * w >= th.threshold))
        return FunctionSpec("th", n, th.function(), symmetric=sym, threshold=th, text=text)

    if family == "ip":
        if len(parts) != 2:
            raise SpecError(f"ip takes only n: {text!r}")
        if n < 1 or 2 * n > MAX_ARITY:
            raise SpecError(f"ip:{n} needs arity {2 * n} outside 1..{MAX_ARITY}")
        return FunctionSpec("ip", n, inner_product_function(n), text=text)

    if family == "sym":
        if len(parts) != 3:
            raise SpecError(f"expected sym:n:levels: {text!r}")
        _check_arity(n)
        levels = frozenset(_int(t, "level") for t in parts[2].split(",") if t.strip())
        sym = SymmetricSpec(n, levels)
        return FunctionSpec("sym", n, sym.function(), symmetric=sym, text=text)

    if family == "table":
        if len(parts) != 3:
            raise SpecError(f"expected table:n:hex: {text!r}")
        _check_arity(n)
        try:
            table = int(parts[2], 16)
        except ValueError:
            raise SpecError(f"bad hex table: {parts[2]!r}") from None
        if table >> (1 << n):
            raise SpecError(f"table has more than {1 << n} bits")
        f = BooleanFunction(n, table)
        return FunctionSpec("table", n, f, symmetric=symmetric_levels(f), text=text)

    raise SpecError(f"unknown function family {family!r}")


def parse_function(text: str) -> BooleanFunction:
    return parse_spec(text).function


def symmetric_levels(f: BooleanFunction) -> SymmetricSpec | None:
    """The level set of ``f`` if it depends only on input weight, else None."""
    weights = cube_array(f.arity).sum(axis=1)
    vals = f.values()
    levels = set()
    for k in range(f.arity + 1):
        seen = np.unique(vals[weights == k])
        if len(seen) > 1:
            return None
        if seen[0]:
            levels.add(k)
    return SymmetricSpec(f.arity, frozenset(levels))


# -- scaled exact distances ---------------------------------------------------------

_INT64_SAFE = 1 << 62


def scaled_sqdist_matrix(prototypes: Sequence[Sequence], n: int,
                         indices: np.ndarray | None = None) -> np.ndarray:
    """Integer matrix ``S[i, j] = D**2 * sqdist(point_i, prototype_j)``.

    ``D`` is the lcm of all coordinate denominators, so ``S`` orders distances
    exactly like the rationals do. Uses int64 when the values provably fit,
    Python ints (object dtype) otherwise. Rows follow ``indices`` (default:
    every point of the cube in index order).
    """
    m = len(prototypes)
    if indices is None:
        X = cube_array(n)
    else:
        idx = np.asarray(indices, dtype=np.int64)
        X = ((idx[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)
    if m == 0:
        return np.zeros((X.shape[0], 0), dtype=np.int64)
    den = 1
    for p in prototypes:
        if len(p) != n:
            raise ValueError(f"prototype of dimension {len(p)} in dimension {n}")
        for c in p:
            den = lcm(den, Fraction(c).denominator)
    # sqdist(x, p) = |p|^2 + sum_i (1 - 2 p_i) x_i on Boolean x
    d2 = den * den
    const = []
    lin = []
    for p in prototypes:
        ints = [int(Fraction(c) * den) for c in p]
        const.append(sum(v * v for v in ints))
        lin.append([d2 - 2 * den * v for v in ints])
    bound = max(abs(c) for c in const) + max(sum(abs(v) for v in row) for row in lin)
    if bound < _INT64_SAFE:
        W = np.asarray(lin, dtype=np.int64).T.reshape(n, m)
        return X @ W + np.asarray(const, dtype=np.int64)
    W = np.asarray(lin, dtype=object).T.reshape(n, m)
    return X.astype(object) @ W + np.asarray(const, dtype=object)
