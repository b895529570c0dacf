"""Closed forms of the Dirichlet-interval correlation functions.

The four kinds are the two-point function of a free particle pinned to zero
at both ends of [0, beta], and its left, right, and mixed time derivatives:

    D(t, t')  = -eps(t - t')*(t - t')/2 + (t + t')/2 - t*t'/beta
    Dl(t, t') = -eps(t - t')/2 + 1/2 - t'/beta          (derivative on t)
    Dr(t, t') = +eps(t - t')/2 + 1/2 - t/beta           (derivative on t')
    DD(t, t') = delta(t - t') - 1/beta                  (one derivative each)

``eps`` is the sign function with eps(0) = 0, so the equal-time values of Dl
and Dr are the averages 1/2 - t/beta.  DD never has a pointwise value: its
delta part is kept as a singular atom and its equal-time substitute is the
formal combination delta0 - 1/beta.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Poly
from .values import RegValue


class Kind(enum.Enum):
    D = "D"
    DOT_LEFT = "Dl"
    DOT_RIGHT = "Dr"
    DOT_DOT = "DD"


# -- two-variable building blocks (variable 0 is t, variable 1 is t') --------

def _p(terms) -> Poly:
    return Poly(2, terms)


_HALF = Fraction(1, 2)

# Smooth part and eps-coefficient of each kind, as 2-variable polynomials.
_SMOOTH: dict[Kind, Poly] = {
    Kind.D: _p({(0, (1, 0)): _HALF, (0, (0, 1)): _HALF, (-1, (1, 1)): -1}),
    Kind.DOT_LEFT: _p({(0, (0, 0)): _HALF, (-1, (0, 1)): -1}),
    Kind.DOT_RIGHT: _p({(0, (0, 0)): _HALF, (-1, (1, 0)): -1}),
    Kind.DOT_DOT: _p({(-1, (0, 0)): -1}),
}

_EPS_COEFF: dict[Kind, Poly] = {
    Kind.D: _p({(0, (1, 0)): -_HALF, (0, (0, 1)): _HALF}),
    Kind.DOT_LEFT: _p({(0, (0, 0)): -_HALF}),
    Kind.DOT_RIGHT: _p({(0, (0, 0)): _HALF}),
    Kind.DOT_DOT: Poly(2),
}

_HAS_DELTA: dict[Kind, bool] = {
    Kind.D: False,
    Kind.DOT_LEFT: False,
    Kind.DOT_RIGHT: False,
    Kind.DOT_DOT: True,
}

_TEXT: dict[Kind, str] = {
    Kind.D: "-eps(t - t')*(t - t')/2 + (t + t')/2 - t*t'/beta",
    Kind.DOT_LEFT: "-eps(t - t')/2 + 1/2 - t'/beta",
    Kind.DOT_RIGHT: "eps(t - t')/2 + 1/2 - t/beta",
    Kind.DOT_DOT: "delta(t - t') - 1/beta",
}


@dataclass(frozen=True)
class PiecewiseRep:
    """Regionwise closed form plus the singular content.

    ``region_less`` is the polynomial valid for t < t', ``region_greater``
    for t > t'.  ``singular_atoms`` lists (kind, weight) pairs: the delta
    atom of DD, and the eps atoms of Dl and Dr whose discontinuity the two
    regions already display.  D is continuous and carries no atoms.
    """

    kind: Kind
    region_less: Poly
    region_greater: Poly
    singular_atoms: tuple[tuple[str, Fraction], ...]

    def text(self) -> str:
        return _TEXT[self.kind]


def smooth_part(kind: Kind) -> Poly:
    """The eps- and delta-free part of the kind's decomposition."""
    return _SMOOTH[kind]


def eps_coefficient(kind: Kind) -> Poly:
    """Polynomial multiplying eps(t - t') in the kind's decomposition."""
    return _EPS_COEFF[kind]


def has_delta(kind: Kind) -> bool:
    return _HAS_DELTA[kind]


def _region(kind: Kind, eps_sign: int) -> Poly:
    return _SMOOTH[kind] + Fraction(eps_sign) * _EPS_COEFF[kind]


def symbolic_rep(kind: Kind) -> PiecewiseRep:
    atoms: list[tuple[str, Fraction]] = []
    if kind is Kind.DOT_LEFT:
        atoms.append(("eps", Fraction(-1, 2)))
    elif kind is Kind.DOT_RIGHT:
        atoms.append(("eps", Fraction(1, 2)))
    elif kind is Kind.DOT_DOT:
        atoms.append(("delta", Fraction(1)))
    return PiecewiseRep(
        kind=kind,
        region_less=_region(kind, -1),
        region_greater=_region(kind, +1),
        singular_atoms=tuple(atoms),
    )


def diagonal(kind: Kind) -> Poly | RegValue:
    """Equal-time value as a 1-variable polynomial in t.

    For DD there is no pointwise value; the formal substitute
    delta0 - 1/beta is returned as a RegValue instead.
    """
    if kind is Kind.DOT_DOT:
        return RegValue.delta0() - RegValue.beta(-1)
    two_var = _SMOOTH[kind]  # eps(0) = 0 drops the eps part
    one_var: dict = {}
    for (beta_pow, (e1, e2)), coeff in two_var.terms().items():
        key = (beta_pow, (e1 + e2,))
        one_var[key] = one_var.get(key, Fraction(0)) + coeff
    return Poly(1, one_var)


def boundary_value(kind: Kind, slot: int, at_beta: bool) -> Poly:
    """Closed form with one argument pinned to an endpoint of [0, beta].

    ``slot`` 0 pins t, slot 1 pins t'; the result is a 2-variable polynomial
    depending only on the remaining variable.  The pinned variable is
    strictly outside the other's range, so the sign of eps is determined:
    D and Dl vanish when t' is pinned, D and Dr vanish when t is pinned.
    """
    if kind is Kind.DOT_DOT:
        raise ValueError(
            "distributional kind: DD has no boundary value; its delta part "
            "is supported at the pinned endpoint"
        )
    # Pinned variable at 0 is below the interior variable; at beta, above it.
    if slot == 0:
        eps_sign = 1 if at_beta else -1
    else:
        eps_sign = -1 if at_beta else 1
    return _region(kind, eps_sign).set_boundary(slot, at_beta)


def eval_numeric(kind: Kind, t: float, t_prime: float, beta: float) -> float:
    """Pointwise numeric value.  Refuses the genuinely ambiguous cases."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if kind is Kind.DOT_DOT:
        raise ValueError(
            "distributional kind: DD(t, t') contains delta(t - t') and has "
            "no pointwise numeric value"
        )
    if t == t_prime and kind is not Kind.D:
        raise ValueError(
            "on-diagonal ambiguous: use diagonal() for the equal-time value"
        )
    region = _region(kind, 1 if t > t_prime else -1)
    return region.eval_float((t, t_prime), beta)
