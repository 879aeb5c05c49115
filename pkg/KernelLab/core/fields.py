"""Scalar fields: the rationals and prime fields F_p."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging
import re
from typing import Any, Optional, Union

import numpy as np

from .errors import FieldMismatchError

logger = logging.getLogger(__name__)

# products of two residues and sums of up to 2**32 such products stay in int64
MAX_PRIME = 46337

Scalar = Union[int, Fraction]

_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class FieldKind(Enum):
    RATIONALS = "rationals"
    PRIME = "prime-field"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The base field of a computation.

    Rational entries are stored as ``Fraction`` inside object arrays; prime
    field entries as ``np.int64`` residues in ``[0, p)``.
    """

    kind: FieldKind
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == FieldKind.PRIME:
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"Prime field needs a prime characteristic, got {self.p}")
            if self.p > MAX_PRIME:
                raise ValueError(f"Prime {self.p} exceeds supported maximum {MAX_PRIME}")
        elif self.p is not None:
            raise ValueError("The rational field takes no characteristic")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME, p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``Q``, ``QQ``, ``F2``, ``Fp=3`` style or ``GF(5)`` field names."""
        cleaned = text.strip().replace(" ", "")
        if cleaned.upper() in ("Q", "QQ", "RATIONALS"):
            return cls.rationals()
        match = re.fullmatch(r"(?:F|GF|F_)\(?(\d+)\)?", cleaned, flags=re.IGNORECASE)
        if not match:
            raise ValueError(f"Unknown field {text!r}; expected Q or Fp")
        return cls.prime(int(match.group(1)))

    @property
    def is_prime_field(self) -> bool:
        return self.kind == FieldKind.PRIME

    @property
    def characteristic(self) -> int:
        return self.p if self.is_prime_field else 0

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.is_prime_field else "Q"

    @property
    def dtype(self) -> Any:
        return np.int64 if self.is_prime_field else object

    def __str__(self) -> str:
        return self.name

    # scalars

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime_field else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime_field else Fraction(1)

    def element(self, value: Any) -> Scalar:
        """Coerce an int, Fraction or literal string into this field."""
        if isinstance(value, str):
            value = self.parse_scalar(value)
            return value
        if self.is_prime_field:
            if isinstance(value, Fraction):
                num = value.numerator % self.p
                den = value.denominator % self.p
                if den == 0:
                    raise ValueError(f"Denominator of {value} vanishes in {self.name}")
                return (num * pow(den, -1, self.p)) % self.p
            return int(value) % self.p
        return Fraction(value)

    def parse_scalar(self, text: str) -> Scalar:
        match = _FRACTION_RE.match(text)
        if not match:
            raise ValueError(f"Not a scalar literal: {text!r}")
        num = int(match.group(1))
        den = int(match.group(2)) if match.group(2) else 1
        if den == 0:
            raise ValueError(f"Zero denominator in {text!r}")
        return self.element(Fraction(num, den))

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return self.element(a + b)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return self.element(a - b)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return self.element(a * b)

    def neg(self, a: Scalar) -> Scalar:
        return self.element(-a)

    def inv(self, a: Scalar) -> Scalar:
        if self.is_zero(a):
            raise ZeroDivisionError("Inverse of zero")
        if self.is_prime_field:
            return pow(int(a) % self.p, -1, self.p)
        return 1 / Fraction(a)

    def pow(self, a: Scalar, n: int) -> Scalar:
        if self.is_prime_field:
            return pow(int(a) % self.p, n, self.p)
        return Fraction(a) ** n

    def is_zero(self, a: Scalar) -> bool:
        return self.element(a) == 0

    def format(self, a: Scalar) -> str:
        value = self.element(a)
        if isinstance(value, Fraction) and value.denominator != 1:
            return f"{value.numerator}/{value.denominator}"
        return str(int(value))

    # arrays

    def normalize_array(self, arr: np.ndarray) -> np.ndarray:
        if self.is_prime_field:
            if arr.dtype == object:
                arr = np.vectorize(self.element, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
            return np.mod(arr.astype(np.int64, copy=False), self.p)
        if arr.size == 0:
            return arr.astype(object)
        return np.vectorize(Fraction, otypes=[object])(arr)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.is_prime_field:
            return np.zeros((rows, cols), dtype=np.int64)
        return np.full((rows, cols), Fraction(0), dtype=object)

    def ensure_same(self, other: "FieldSpec") -> None:
        if self != other:
            raise FieldMismatchError(f"Mixed fields in one computation: {self.name} and {other.name}")
