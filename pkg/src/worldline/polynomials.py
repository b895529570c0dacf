"""Exact polynomials in several time variables.

A ``Poly`` is a polynomial in ``nvars`` time variables with coefficients in
Q[beta, 1/beta].  Monomials are keyed by (beta_power, per-variable exponents).
All integration in the package reduces to two exact primitives on these
polynomials: integration of each variable independently over [0, beta], and
integration over an ordered sector tau_{s1} < tau_{s2} < ... < tau_{sn}.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .values import RegValue

Rational = Union[int, Fraction]

# Monomial key: (beta_power, exponents per variable).
Key = tuple[int, tuple[int, ...]]


class Poly:
    __slots__ = ("nvars", "_terms")

    def __init__(
        self,
        nvars: int,
        terms: Mapping[Key, Rational] | Iterable[tuple[Key, Rational]] = (),
    ) -> None:
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, Fraction] = {}
        for (beta_pow, exps), coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple length does not match nvars")
            if any(e < 0 for e in exps):
                raise ValueError("variable exponents must be non-negative")
            key = (int(beta_pow), exps)
            total = acc.get(key, Fraction(0)) + Fraction(coeff)
            if total:
                acc[key] = total
            else:
                acc.pop(key, None)
        self.nvars = nvars
        self._terms = acc

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, nvars: int, coeff: Rational, beta_power: int = 0) -> "Poly":
        return cls(nvars, {(beta_power, (0,) * nvars): coeff})

    @classmethod
    def var(cls, nvars: int, index: int, coeff: Rational = 1) -> "Poly":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {(0, tuple(exps)): coeff})

    @classmethod
    def monomial(
        cls, nvars: int, coeff: Rational, beta_power: int, exps: Sequence[int]
    ) -> "Poly":
        return cls(nvars, {(beta_power, tuple(exps)): coeff})

    # -- ring operations ---------------------------------------------------

    def _check_compatible(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("polynomials over different variable counts")

    def __add__(self, other: "Poly | Rational") -> "Poly":
        other = self._coerce(other)
        self._check_compatible(other)
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            total = merged.get(key, Fraction(0)) + coeff
            if total:
                merged[key] = total
            else:
                merged.pop(key, None)
        return self._make(self.nvars, merged)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return self._make(self.nvars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "Poly | Rational") -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "Poly | Rational") -> "Poly":
        return self._coerce(other) + (-self)

    def __mul__(self, other: "Poly | Rational") -> "Poly":
        other = self._coerce(other)
        self._check_compatible(other)
        acc: dict[Key, Fraction] = {}
        for (b1, e1), c1 in self._terms.items():
            for (b2, e2), c2 in other._terms.items():
                key = (b1 + b2, tuple(a + b for a, b in zip(e1, e2)))
                total = acc.get(key, Fraction(0)) + c1 * c2
                if total:
                    acc[key] = total
                else:
                    acc.pop(key, None)
        return self._make(self.nvars, acc)

    __rmul__ = __mul__

    def _coerce(self, value: "Poly | Rational") -> "Poly":
        if isinstance(value, Poly):
            return value
        if isinstance(value, (int, Fraction)):
            return Poly.const(self.nvars, value)
        raise TypeError(f"cannot combine Poly with {type(value).__name__}")

    @staticmethod
    def _make(nvars: int, terms: dict[Key, Fraction]) -> "Poly":
        out = Poly.__new__(Poly)
        out.nvars = nvars
        out._terms = {k: c for k, c in terms.items() if c}
        return out

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __repr__(self) -> str:
        return f"Poly(nvars={self.nvars}, terms={sorted(self._terms.items())})"

    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    # -- variable manipulation ------------------------------------------------

    def depends_on(self, index: int) -> bool:
        return any(exps[index] for (_, exps) in self._terms)

    def substitute_var(self, index: int, target: int) -> "Poly":
        """Set tau_index := tau_target (both stay in the variable list)."""
        if index == target:
            return self
        acc: dict[Key, Fraction] = {}
        for (beta_pow, exps), coeff in self._terms.items():
            new = list(exps)
            new[target] += new[index]
            new[index] = 0
            key = (beta_pow, tuple(new))
            total = acc.get(key, Fraction(0)) + coeff
            if total:
                acc[key] = total
            else:
                acc.pop(key, None)
        return self._make(self.nvars, acc)

    def drop_var(self, index: int) -> "Poly":
        """Remove an unused variable slot, reindexing the ones above it."""
        if self.depends_on(index):
            raise ValueError("cannot drop a variable the polynomial depends on")
        acc: dict[Key, Fraction] = {}
        for (beta_pow, exps), coeff in self._terms.items():
            key = (beta_pow, exps[:index] + exps[index + 1 :])
            acc[key] = acc.get(key, Fraction(0)) + coeff
        return self._make(self.nvars - 1, acc)

    def insert_var(self, index: int) -> "Poly":
        """Add a fresh unused variable slot at the given position."""
        acc: dict[Key, Fraction] = {}
        for (beta_pow, exps), coeff in self._terms.items():
            key = (beta_pow, exps[:index] + (0,) + exps[index:])
            acc[key] = coeff
        return self._make(self.nvars + 1, acc)

    def set_boundary(self, index: int, at_beta: bool) -> "Poly":
        """Pin tau_index to 0 or to beta (exponents convert to beta powers)."""
        acc: dict[Key, Fraction] = {}
        for (beta_pow, exps), coeff in self._terms.items():
            e = exps[index]
            if e and not at_beta:
                continue
            new = list(exps)
            new[index] = 0
            key = (beta_pow + (e if at_beta else 0), tuple(new))
            total = acc.get(key, Fraction(0)) + coeff
            if total:
                acc[key] = total
            else:
                acc.pop(key, None)
        return self._make(self.nvars, acc)

    def derivative(self, index: int) -> "Poly":
        acc: dict[Key, Fraction] = {}
        for (beta_pow, exps), coeff in self._terms.items():
            e = exps[index]
            if not e:
                continue
            new = list(exps)
            new[index] = e - 1
            key = (beta_pow, tuple(new))
            total = acc.get(key, Fraction(0)) + coeff * e
            if total:
                acc[key] = total
            else:
                acc.pop(key, None)
        return self._make(self.nvars, acc)

    # -- evaluation -------------------------------------------------------------

    def eval_float(self, taus: Sequence[float], beta: float) -> float:
        total = 0.0
        for (beta_pow, exps), coeff in self._terms.items():
            term = float(coeff) * beta**beta_pow
            for tau, e in zip(taus, exps):
                if e:
                    term *= tau**e
            total += term
        return total

    # -- exact integration --------------------------------------------------------

    def integrate_cube(self) -> RegValue:
        """Integrate every variable independently over [0, beta]."""
        acc: dict[tuple[int, int], Fraction] = {}
        for (beta_pow, exps), coeff in self._terms.items():
            value = coeff
            power = beta_pow
            for e in exps:
                value /= e + 1
                power += e + 1
            key = (power, 0)
            acc[key] = acc.get(key, Fraction(0)) + value
        return RegValue(acc)

    def integrate_sector(self, order: Sequence[int]) -> RegValue:
        """Integrate over 0 < tau_{order[0]} < tau_{order[1]} < ... < beta.

        ``order`` must list every variable exactly once, smallest first.
        """
        if sorted(order) != list(range(self.nvars)):
            raise ValueError("order must be a permutation of all variables")
        terms = {k: c for k, c in self._terms.items()}
        # Integrate variables from the innermost (smallest) outwards; each
        # integral runs from 0 to the next variable in the ordering, the last
        # from 0 to beta.
        for pos, var in enumerate(order):
            upper = order[pos + 1] if pos + 1 < len(order) else None
            acc: dict[Key, Fraction] = {}
            for (beta_pow, exps), coeff in terms.items():
                e = exps[var]
                value = coeff / (e + 1)
                new = list(exps)
                new[var] = 0
                if upper is None:
                    key = (beta_pow + e + 1, tuple(new))
                else:
                    new[upper] += e + 1
                    key = (beta_pow, tuple(new))
                total = acc.get(key, Fraction(0)) + value
                if total:
                    acc[key] = total
                else:
                    acc.pop(key, None)
            terms = acc
        out: dict[tuple[int, int], Fraction] = {}
        for (beta_pow, exps), coeff in terms.items():
            assert not any(exps), "all variables should have been integrated"
            out[(beta_pow, 0)] = out.get((beta_pow, 0), Fraction(0)) + coeff
        return RegValue(out)
