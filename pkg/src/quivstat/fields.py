"""Exact scalar arithmetic: the rationals and prime fields F_p.

Every quantity in the package is a dimension or an exact scalar, so there is
no floating point anywhere.  Rational scalars are `fractions.Fraction`
(always reduced); prime-field scalars are Python ints in canonical residue
form 0..p-1 stored in int64 numpy arrays.  A field object owns coercion,
normalization and inversion so that matrix code stays field-generic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UsageError

MAX_PRIME = 1 << 16


def is_prime(n: int) -> bool:
    """Trial-division primality test (characteristics are < 2**16)."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Rationals:
    """The field Q, with Fraction scalars in object-dtype arrays."""

    kind: str = "rationals"

    @property
    def characteristic(self) -> int:
        return 0

    @property
    def dtype(self):
        return object

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def inv(self, x: Fraction) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / x

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def array(self, rows) -> np.ndarray:
        data = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                data[i, j] = Fraction(x)
        return data

    def zeros(self, shape) -> np.ndarray:
        data = np.empty(shape, dtype=object)
        data[...] = Fraction(0)
        return data

    def format_scalar(self, x: Fraction) -> str:
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)

    def parse_scalar(self, text: str) -> Fraction:
        return Fraction(text)

    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime p < 2**16, with int residue scalars."""

    p: int
    kind: str = "prime_field"

    def __post_init__(self):
        if not is_prime(self.p):
            raise UsageError(f"characteristic {self.p} is not prime")
        if self.p >= MAX_PRIME:
            raise UsageError(f"characteristic {self.p} exceeds the {MAX_PRIME} cap")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def dtype(self):
        return np.int64

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def inv(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return arr % self.p

    def array(self, rows) -> np.ndarray:
        data = np.array(rows, dtype=np.int64).reshape(len(rows), -1 if rows and rows[0] else 0)
        if data.size == 0:
            data = data.reshape(len(rows), 0)
        return data % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def elements(self):
        return range(self.p)

    def format_scalar(self, x: int) -> str:
        return str(int(x) % self.p)

    def parse_scalar(self, text: str) -> int:
        return int(text) % self.p

    def __str__(self) -> str:
        return f"F_{self.p}"


Field = Rationals | PrimeField

QQ = Rationals()
F2 = PrimeField(2)


def parse_field(text: str) -> Field:
    """Parse a field spec: `q` for the rationals, `p=<prime>` for F_p."""
    text = text.strip().lower()
    if text == "q":
        return Rationals()
    if text.startswith("p="):
        try:
            p = int(text[2:])
        except ValueError as exc:
            raise UsageError(f"bad field spec {text!r}") from exc
        return PrimeField(p)
    raise UsageError(f"bad field spec {text!r}: expected 'q' or 'p=<prime>'")


def format_field(field: Field) -> str:
    return "q" if isinstance(field, Rationals) else f"p={field.p}"
