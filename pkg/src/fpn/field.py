"""Exact ground fields: prime fields F_p and the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A ground field. ``kind`` is ``"Fp"`` (with prime ``p``) or ``"Q"``.

    Scalars are plain ints in ``range(p)`` for F_p and ``Fraction`` for Q.
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind == "Fp":
            if not _is_prime(self.p):
                raise ValueError(f"F_p needs a prime p, got {self.p}")
        elif self.kind == "Q":
            if self.p != 0:
                raise ValueError("Q takes no characteristic")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def fp(cls, p: int) -> "FieldSpec":
        return cls("Fp", p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("Q")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "Fp"

    def __call__(self, x):
        """Coerce an int or Fraction into this field."""
        if self.kind == "Fp":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def norm(self, x):
        return x % self.p if self.kind == "Fp" else x

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "Fp":
            return pow(x, -1, self.p)
        return 1 / Fraction(x)

    def neg(self, x):
        return (-x) % self.p if self.kind == "Fp" else -x

    def elements(self):
        if self.kind != "Fp":
            raise ValueError("Q is infinite")
        return range(self.p)

    def vectors(self, n: int):
        """All vectors of length n over F_p (exhaustive enumeration)."""
        return product(self.elements(), repeat=n)

    def to_json(self) -> dict:
        if self.kind == "Fp":
            return {"kind": "Fp", "p": self.p}
        return {"kind": "Q"}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        if data.get("kind") == "Fp":
            return cls("Fp", int(data["p"]))
        if data.get("kind") == "Q":
            return cls("Q")
        raise ValueError(f"bad field spec {data!r}")

    def __str__(self):
        return f"F_{self.p}" if self.kind == "Fp" else "Q"


F2 = FieldSpec("Fp", 2)
F3 = FieldSpec("Fp", 3)
QQ = FieldSpec("Q")


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)
