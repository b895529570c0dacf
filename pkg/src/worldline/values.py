"""Exact value ring for regularized one-dimensional integrals.

Every integral computed by this package lands in the ring of polynomials in
the interval length ``beta`` (any integer power) and the formal coincidence
symbol ``delta0`` standing for delta(0) (non-negative powers), with rational
coefficients.  ``delta0`` is never assigned a number; it is carried
algebraically until it cancels or is reported as a divergent grade.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

# A term key is (beta_power, delta0_power).
Key = tuple[int, int]


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an int or Fraction, got {type(value).__name__}")


class RegValue:
    """Element of the exact ring Q[beta, 1/beta, delta0]."""

    __slots__ = ("_terms",)

    def __init__(
        self,
        terms: Mapping[Key, Rational] | Iterable[tuple[Key, Rational]] = (),
    ) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, Fraction] = {}
        for (beta_pow, delta0_pow), coeff in items:
            if delta0_pow < 0:
                raise ValueError("delta0 power must be non-negative")
            key = (int(beta_pow), int(delta0_pow))
            total = acc.get(key, Fraction(0)) + _as_fraction(coeff)
            if total:
                acc[key] = total
            else:
                acc.pop(key, None)
        self._terms = acc

    # -- constructors -----------------------------------------------------

    @classmethod
    def rational(cls, value: Rational) -> "RegValue":
        return cls({(0, 0): value})

    @classmethod
    def term(cls, coeff: Rational, beta_power: int = 0, delta0_power: int = 0) -> "RegValue":
        return cls({(beta_power, delta0_power): coeff})

    @classmethod
    def beta(cls, power: int = 1, coeff: Rational = 1) -> "RegValue":
        return cls({(power, 0): coeff})

    @classmethod
    def delta0(cls, power: int = 1, coeff: Rational = 1) -> "RegValue":
        return cls({(0, power): coeff})

    @classmethod
    def zero(cls) -> "RegValue":
        return cls()

    @classmethod
    def one(cls) -> "RegValue":
        return cls({(0, 0): 1})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "RegValue | Rational") -> "RegValue":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            total = merged.get(key, Fraction(0)) + coeff
            if total:
                merged[key] = total
            else:
                merged.pop(key, None)
        return _make(merged)

    __radd__ = __add__

    def __neg__(self) -> "RegValue":
        return _make({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: "RegValue | Rational") -> "RegValue":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "RegValue | Rational") -> "RegValue":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: "RegValue | Rational") -> "RegValue":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[Key, Fraction] = {}
        for (b1, d1), c1 in self._terms.items():
            for (b2, d2), c2 in other._terms.items():
                key = (b1 + b2, d1 + d2)
                total = acc.get(key, Fraction(0)) + c1 * c2
                if total:
                    acc[key] = total
                else:
                    acc.pop(key, None)
        return _make(acc)

    __rmul__ = __mul__

    def __truediv__(self, other: Rational) -> "RegValue":
        factor = _as_fraction(other)
        if factor == 0:
            raise ZeroDivisionError("division of a RegValue by zero")
        return _make({key: coeff / factor for key, coeff in self._terms.items()})

    # -- comparisons and hashing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RegValue.rational(other)
        if not isinstance(other, RegValue):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- structure access ---------------------------------------------------

    def items(self) -> list[tuple[Key, Fraction]]:
        """Terms sorted ascending by (beta_power, delta0_power)."""
        return sorted(self._terms.items())

    def coefficient(self, beta_power: int = 0, delta0_power: int = 0) -> Fraction:
        return self._terms.get((beta_power, delta0_power), Fraction(0))

    def grade(self, delta0_power: int) -> "RegValue":
        """The part of the value proportional to delta0**delta0_power."""
        return _make(
            {
                (b, d): c
                for (b, d), c in self._terms.items()
                if d == delta0_power
            }
        )

    def finite_part(self) -> "RegValue":
        return self.grade(0)

    def delta0_degree(self) -> int:
        """Largest delta0 power present (0 for the zero value)."""
        return max((d for (_, d) in self._terms), default=0)

    def eval_float(self, beta: float) -> float:
        """Numeric value at a concrete beta.  Requires no delta0 content."""
        if self.delta0_degree() > 0 and any(d > 0 for (_, d) in self._terms):
            raise ValueError("value contains delta0 and has no numeric meaning")
        return sum(float(c) * beta**b for (b, _), c in self._terms.items())

    # -- rendering -----------------------------------------------------------

    def text(self) -> str:
        """Canonical rendering, e.g. ``1/24 * beta`` or ``0``.

        Terms are sorted ascending by (beta_power, delta0_power); power-one
        factors print without an exponent and power-zero factors are omitted.
        """
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for (beta_pow, delta0_pow), coeff in self.items():
            factors: list[str] = []
            if beta_pow == 1:
                factors.append("beta")
            elif beta_pow != 0:
                factors.append(f"beta^{beta_pow}")
            if delta0_pow == 1:
                factors.append("delta0")
            elif delta0_pow != 0:
                factors.append(f"delta0^{delta0_pow}")
            magnitude = " * ".join([str(abs(coeff))] + factors)
            if not pieces:
                sign = "-" if coeff < 0 else ""
                pieces.append(sign + magnitude)
            else:
                joiner = " - " if coeff < 0 else " + "
                pieces.append(joiner + magnitude)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"RegValue({self.text()!r})"


def _coerce(value: "RegValue | Rational") -> "RegValue":
    if isinstance(value, RegValue):
        return value
    if isinstance(value, (int, Fraction)):
        return RegValue.rational(value)
    return NotImplemented


def _make(terms: dict[Key, Fraction]) -> RegValue:
    out = RegValue.__new__(RegValue)
    out._terms = {key: coeff for key, coeff in terms.items() if coeff}
    return out


ZERO = RegValue.zero()
ONE = RegValue.one()


def assert_equal(left: RegValue, right: RegValue | Rational) -> bool:
    """Exact ring equality, the comparison used throughout the checks."""
    return left == _coerce(right)
