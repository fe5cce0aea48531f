"""Arithmetic in GF(2^m) and small dense linear algebra over it.

Elements are plain ints whose bits are polynomial coefficients; vectors
are tuples of them. :class:`FieldElement` wraps an int together with its
field for callers that want operator syntax and mixed-field checks.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Vector = tuple[int, ...]

# Fixed table so serialized assignments are portable between runs.
DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}
MAX_DEGREE = 16
_TABLES: dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...]]] = {}


class FieldMismatchError(ValueError):
    pass


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, q) == 0:
                return False
    return True


@dataclass(frozen=True)
class GF:
    """The field GF(2^m) with the given modulus (default from the table)."""

    m: int
    modulus: int = 0
    _exp: tuple[int, ...] = field(default=(), repr=False, compare=False)
    _log: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.m <= MAX_DEGREE:
            raise ValueError(f"extension degree must be in 1..{MAX_DEGREE}, got {self.m}")
        if self.modulus == 0:
            object.__setattr__(self, "modulus", DEFAULT_MODULI[self.m])
        if self.modulus.bit_length() - 1 != self.m:
            raise ValueError(f"modulus {self.modulus:#b} does not have degree {self.m}")
        if not is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#b} is reducible over GF(2)")
        key = (self.m, self.modulus)
        if key not in _TABLES:
            _TABLES[key] = self._tables()
        exp, log = _TABLES[key]
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)

    def _tables(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        order = (1 << self.m) - 1
        # the modulus need not be primitive, so search for a generator
        for g in range(2 if self.m > 1 else 1, 1 << self.m):
            exp = [1]
            x = 1
            for _ in range(order - 1):
                x = _poly_mod(_clmul(x, g), self.modulus)
                if x == 1:
                    break
                exp.append(x)
            else:
                log = [0] * (1 << self.m)
                for i, v in enumerate(exp):
                    log[v] = i
                return tuple(exp + exp), tuple(log)
        raise AssertionError("multiplicative group has no generator")

    @property
    def size(self) -> int:
        return 1 << self.m

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.size:
                raise ValueError(f"{x} is not an element of GF(2^{self.m})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inverse(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(self.size - 1 - self._log[a]) % (self.size - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inverse(b))

    def element(self, value: int) -> "FieldElement":
        self._check(value)
        return FieldElement(self, value)

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.size)

    # -- vectors ------------------------------------------------------------

    def zero(self, n: int) -> Vector:
        return (0,) * n

    def unit(self, n: int, k: int) -> Vector:
        return tuple(int(i == k) for i in range(n))

    def ones(self, n: int) -> Vector:
        return (1,) * n

    def scale(self, c: int, v: Sequence[int]) -> Vector:
        return tuple(self.mul(c, x) for x in v)

    def vadd(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        if len(u) != len(v):
            raise ValueError("vector lengths differ")
        return tuple(self.add(a, b) for a, b in zip(u, v))

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        if len(u) != len(v):
            raise ValueError("vector lengths differ")
        out = 0
        for a, b in zip(u, v):
            out ^= self.mul(a, b)
        return out

    def combine(self, coeffs: Sequence[int], vectors: Sequence[Sequence[int]], n: int) -> Vector:
        """Sum of ``coeffs[i] * vectors[i]`` (the zero vector if empty)."""
        out = [0] * n
        for c, v in zip(coeffs, vectors, strict=True):
            if c:
                for i, x in enumerate(v):
                    out[i] ^= self.mul(c, x)
        return tuple(out)

    def _echelon(self, rows: list[list[int]]) -> list[list[int]]:
        """Row-reduce in place: pivot on the first nonzero column, first row."""
        rank = 0
        width = len(rows[0]) if rows else 0
        for col in range(width):
            pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = self.inverse(rows[rank][col])
            rows[rank] = [self.mul(inv, x) for x in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [x ^ self.mul(f, y) for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return rows[:rank]

    def rank(self, vectors: Iterable[Sequence[int]]) -> int:
        rows = [list(v) for v in vectors]
        if len({len(r) for r in rows}) > 1:
            raise ValueError("vector lengths differ")
        return len(self._echelon(rows))

    def solve(self, v: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int] | None:
        """Coefficients c with sum(c[i] * basis[i]) == v, or None.

        Free variables are set to zero, so the answer is deterministic.
        """
        k = len(basis)
        if any(len(b) != len(v) for b in basis):
            raise ValueError("vector lengths differ")
        # one equation per coordinate; unknowns are the basis coefficients
        rows = [[b[i] for b in basis] + [v[i]] for i in range(len(v))]
        reduced = self._echelon(rows)
        coeffs = [0] * k
        for row in reduced:
            col = next(c for c, x in enumerate(row) if x)
            if col == k:
                return None
            coeffs[col] = row[k]
        return coeffs

    def in_span(self, v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
        return self.solve(v, basis) is not None


GF2 = GF(1)


def default_degree_two_sources(terminals: int) -> int:
    """Smallest m with 2^m >= terminals + 2."""
    m = 1
    while (1 << m) < terminals + 2:
        m += 1
    return m


@dataclass(frozen=True)
class FieldElement:
    field: GF
    value: int

    def _same(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError("expected a FieldElement")
        if other.field != self.field:
            raise FieldMismatchError(f"GF(2^{self.field.m}) element mixed with GF(2^{other.field.m}) element")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return FieldElement(self.field, self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inverse(self.value))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0
