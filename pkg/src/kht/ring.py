"""Exact scalars over Q and F_p, and monomials c*U^k in the graded ring F[U].

The elimination engine works on raw scalars (``gmpy2.mpq`` for Q, plain ``int``
residues for F_p) through the :class:`Field` methods.  :class:`FieldScalar` and
:class:`Monomial` are the checked, field-tagged values used at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import gmpy2
from gmpy2 import mpq

__all__ = [
    "Field",
    "FieldScalar",
    "Monomial",
    "QQ",
    "scalar_op",
    "mono_mul",
    "mono_try_divide",
    "parse_field",
]


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class Field:
    """Q when ``p == 0``, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"field characteristic {self.p} is not prime")
        if self.p >= 2**63:
            raise ValueError("prime fields are limited to word-size p")

    @classmethod
    def rationals(cls) -> Field:
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> Field:
        if p == 0:
            raise ValueError("use Field.rationals() for characteristic 0")
        return cls(p)

    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return "q" if self.p == 0 else f"f{self.p}"

    def __str__(self):
        return "Q" if self.p == 0 else f"F{self.p}"

    # raw arithmetic; values are mpq (Q) or int in [0, p)

    def __call__(self, value) -> object:
        """Canonical raw scalar for an int, Fraction, mpq or 'a/b' string."""
        if self.p:
            if isinstance(value, str):
                value = Fraction(value)
            if isinstance(value, (Fraction, type(mpq()))):
                num, den = int(value.numerator), int(value.denominator)
                if den % self.p == 0:
                    raise ZeroDivisionError(f"denominator vanishes in {self}")
                return num * pow(den, -1, self.p) % self.p
            return int(value) % self.p
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        return pow(a, -1, self.p) if self.p else 1 / a

    def to_json(self, a):
        """Exact JSON-friendly form: int, or 'num/den' string for proper fractions."""
        if self.p:
            return int(a)
        if a.denominator == 1:
            return int(a.numerator)
        return f"{a.numerator}/{a.denominator}"


QQ = Field(0)


def parse_field(name: str) -> Field:
    """Parse ``q``, ``f2``, ``f3``, ... (case-insensitive); ``f<p>`` must be prime."""
    s = name.strip().lower()
    if s in ("q", "qq", "rationals"):
        return QQ
    if s.startswith("f") and s[1:].isdigit() and int(s[1:]) >= 2:
        return Field(int(s[1:]))
    raise ValueError(f"unknown field {name!r}; expected q or f<prime>")


@dataclass(frozen=True)
class FieldScalar:
    """A field element that remembers its field; operators reject mixed fields."""

    field: Field
    value: object

    @classmethod
    def of(cls, field: Field, value) -> FieldScalar:
        return cls(field, field(value))

    def _check(self, other: FieldScalar):
        if not isinstance(other, FieldScalar):
            raise TypeError("operand is not a FieldScalar")
        if other.field != self.field:
            raise TypeError(f"mixed fields: {self.field} and {other.field}")

    def __add__(self, other):
        self._check(other)
        return FieldScalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return FieldScalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return FieldScalar(self.field, self.field.mul(self.value, other.value))

    def __neg__(self):
        return FieldScalar(self.field, self.field.neg(self.value))

    def inv(self) -> FieldScalar:
        return FieldScalar(self.field, self.field.inv(self.value))

    def __bool__(self):
        return bool(self.value)

    def __repr__(self):
        return f"{self.value}:{self.field}"


def scalar_op(op: str, a: FieldScalar, b: FieldScalar | None = None) -> FieldScalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown scalar op {op!r}")


class Monomial(NamedTuple):
    """Nonzero term coeff*U^exp; its q-degree is -2*exp."""

    coeff: FieldScalar
    exp: int

    @property
    def qdeg(self) -> int:
        return -2 * self.exp


def _check_mono(m: Monomial):
    if not m.coeff:
        raise ValueError("zero coefficient in a monomial")
    if m.exp < 0:
        raise ValueError("negative exponent in a monomial")


def mono_mul(a: Monomial, b: Monomial) -> Monomial | None:
    _check_mono(a)
    _check_mono(b)
    c = a.coeff * b.coeff
    if not c:
        return None
    return Monomial(c, a.exp + b.exp)


def mono_try_divide(num: Monomial, den: Monomial) -> Monomial | None:
    _check_mono(num)
    _check_mono(den)
    if den.exp > num.exp:
        return None
    return Monomial(num.coeff * den.coeff.inv(), num.exp - den.exp)
