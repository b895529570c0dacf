"""Dimensional lift and reduction of ambiguous propagator integrals.

A product whose one-dimensional value depends on the order of partial
integrations is lifted to d dimensions: the time coordinate becomes a
d-vector, every dotted propagator end becomes a contracted vector index,
and the equal-time double-dotted factor becomes the self-contraction that
may be substituted by delta0 - 1/beta.  Four moves then reduce the lifted
term:

* ``EqualTimeSubstitute``  -- the self-contracted equal-time factor becomes
  the number delta0 - 1/beta.
* ``FieldEquation``        -- a twice-same-side-differentiated factor (the
  Laplacian tag) becomes -delta(tau_i - tau_j), or -delta0 at equal times.
* ``PartialIntegration``   -- moves one derivative end off a factor onto
  the rest of the product, with 1D boundary bookkeeping.
* ``ReturnTo1D``           -- maps the label-free remainder back to plain
  one-dimensional propagator factors and integrates them.

The crucial constraint is that a mixed-derivative factor with distinct time
arguments (the MuNu tag) has no one-dimensional meaning: ReturnTo1D refuses
while one remains, and no move ever substitutes a delta for it.  Squared
MuNu pairs are handled by one licensed composite: add and subtract the
squared delta, then integrate the difference by parts (it is finite, so
partial integration is safe there).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .integrands import (
    IntegrandTerm,
    ParsedProduct,
    SingularAtom,
    named_integral_text,
    parse,
    product,
)
from .integration import RuleSet, DIMREG, integrate
from .propagators import Kind
from .values import RegValue


class ReductionError(ValueError):
    """Raised when no legal sequence of moves reduces a term."""


MOVE_NAMES = ("EqualTimeSubstitute", "FieldEquation", "PartialIntegration", "ReturnTo1D")

_LABELS = ("mu", "nu", "rho", "sigma", "lam", "kap")

# ---------------------------------------------------------------------------
# tagged factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TProp:
    """A lifted propagator factor with derivative labels on each argument."""

    i: int
    j: int
    left: tuple[str, ...]
    right: tuple[str, ...]

    def describe(self) -> str:
        l = ",".join(self.left)
        r = ",".join(self.right)
        return f"[{l}]D[{r}]({self.i + 1},{self.j + 1})"


@dataclass(frozen=True)
class TDelta:
    i: int
    j: int

    def describe(self) -> str:
        return f"delta({self.i + 1},{self.j + 1})"


@dataclass(frozen=True)
class TTerm:
    coefficient: RegValue
    nvars: int
    props: tuple[TProp, ...]
    deltas: tuple[TDelta, ...]


def tag(prop: TProp) -> str:
    """Derivative tag of a lifted factor."""
    nl, nr = len(prop.left), len(prop.right)
    if nl == 2 and nr == 0 or nl == 0 and nr == 2:
        side = prop.left if nl == 2 else prop.right
        if side[0] == side[1]:
            return "Laplacian"
        return "Unknown"
    if nl == 1 and nr == 1:
        if prop.i == prop.j and prop.left[0] == prop.right[0]:
            return "MuMuEqualTime"
        if prop.left[0] == prop.right[0]:
            return "Unknown"  # self-contracted at distinct times: not in the table
        return "MuNu"
    if nl == 1 and nr == 0:
        return "SingleLeft"
    if nl == 0 and nr == 1:
        return "SingleRight"
    if nl == 0 and nr == 0:
        return "None"
    return "Unknown"


# ---------------------------------------------------------------------------
# lift
# ---------------------------------------------------------------------------


def lift(parsed: ParsedProduct) -> TTerm:
    """Lift a product of propagator factors to d dimensions.

    Each time variable is a vertex of the underlying diagram; the two dotted
    ends meeting at a vertex are contracted with each other, so they receive
    one shared fresh label.  A vertex with an odd number of dotted ends does
    not come from a (dq)**2-type vertex and cannot be lifted.
    """
    ends: dict[int, list[tuple[int, int]]] = {v: [] for v in range(parsed.nvars)}
    bare: list[list[list[str]]] = []
    for idx, (kind, i, j) in enumerate(parsed.factors):
        bare.append([[], []])
        if kind in (Kind.DOT_LEFT, Kind.DOT_DOT):
            ends[i].append((idx, 0))
        if kind in (Kind.DOT_RIGHT, Kind.DOT_DOT):
            ends[j].append((idx, 1))
    labels = iter(_fresh_labels())
    for v in range(parsed.nvars):
        if not ends[v]:
            continue
        if len(ends[v]) != 2:
            raise ReductionError(
                "no legal reduction: a lifted vertex needs exactly zero or two "
                f"derivative ends, but variable {v + 1} has {len(ends[v])}"
            )
        label = next(labels)
        for idx, side in ends[v]:
            bare[idx][side].append(label)
    props = tuple(
        TProp(i, j, tuple(bare[idx][0]), tuple(bare[idx][1]))
        for idx, (kind, i, j) in enumerate(parsed.factors)
    )
    return TTerm(parsed.coefficient, parsed.nvars, props, ())


def _fresh_labels():
    yield from _LABELS
    for n in itertools.count(1):
        yield f"k{n}"


def _used_labels(term: TTerm) -> set[str]:
    used: set[str] = set()
    for prop in term.props:
        used.update(prop.left)
        used.update(prop.right)
    return used


def _next_label(term: TTerm) -> str:
    used = _used_labels(term)
    for label in _fresh_labels():
        if label not in used:
            return label
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# individual moves
# ---------------------------------------------------------------------------


def equal_time_substitute(term: TTerm, index: int) -> TTerm:
    prop = term.props[index]
    if tag(prop) != "MuMuEqualTime":
        raise ReductionError(
            "no legal reduction: EqualTimeSubstitute applies only to the "
            f"self-contracted equal-time factor, not {prop.describe()}"
        )
    value = RegValue.delta0() - RegValue.beta(-1)
    props = term.props[:index] + term.props[index + 1 :]
    return replace(term, coefficient=term.coefficient * value, props=props)


def field_equation(term: TTerm, index: int) -> TTerm:
    prop = term.props[index]
    if tag(prop) != "Laplacian":
        raise ReductionError(
            "no legal reduction: FieldEquation applies only to a Laplacian "
            f"factor, not {prop.describe()} (tag {tag(prop)})"
        )
    props = term.props[:index] + term.props[index + 1 :]
    if prop.i == prop.j:
        return replace(term, coefficient=term.coefficient * (-RegValue.delta0()), props=props)
    return replace(
        term,
        coefficient=term.coefficient * Fraction(-1),
        props=props,
        deltas=term.deltas + (TDelta(prop.i, prop.j),),
    )


def _with_label(prop: TProp, side: int, label: str) -> TProp | None:
    """Add a derivative label to one side; None when the result is illegal."""
    labels = prop.left if side == 0 else prop.right
    if len(labels) >= 2:
        return None
    if labels and labels[0] != label:
        return None  # two different labels on one side: not in the move table
    other = prop.right if side == 0 else prop.left
    new = tuple(sorted(labels + (label,)))
    out = TProp(prop.i, prop.j, new if side == 0 else prop.left, prop.right if side == 0 else new)
    if label in other and len(new) == 1 and prop.i != prop.j:
        return None  # self-contracted mixed derivative at distinct times
    return out


def _boundary_is_zero(term: TTerm, var: int) -> bool:
    """True when every endpoint evaluation of the product vanishes.

    A plain factor vanishes whenever either argument is pinned to an
    endpoint; a single-differentiated factor vanishes when the undotted
    argument is pinned.  One vanishing factor kills the endpoint term.
    """
    for b_at_beta in (False, True):
        vanishes = False
        for prop in term.props:
            if var not in (prop.i, prop.j):
                continue
            nl, nr = len(prop.left), len(prop.right)
            if nl == 0 and nr == 0:
                vanishes = True  # D pinned at an endpoint is zero
                break
            if prop.i != prop.j:
                if nl == 1 and nr == 0 and prop.j == var:
                    vanishes = True
                    break
                if nl == 0 and nr == 1 and prop.i == var:
                    vanishes = True
                    break
        if not vanishes:
            return False
    return True


def partial_integration(term: TTerm, index: int, side: int) -> list[TTerm]:
    """Move the single derivative on one side of a factor off by parts.

    Returns the product-rule terms.  The endpoint terms must vanish: chains
    whose boundary contributions survive are outside the move table and are
    rejected (the straight one-dimensional evaluations handle their own
    boundary terms separately).
    """
    source = term.props[index]
    labels = source.left if side == 0 else source.right
    if len(labels) != 1:
        raise ReductionError(
            "no legal reduction: PartialIntegration needs a single derivative "
            f"on the chosen side of {source.describe()}"
        )
    label = labels[0]
    var = source.i if side == 0 else source.j
    stub = TProp(
        source.i,
        source.j,
        () if side == 0 else source.left,
        source.right if side == 0 else (),
    )
    reduced = replace(term, props=term.props[:index] + (stub,) + term.props[index + 1 :])
    if not _boundary_is_zero(reduced, var):
        raise ReductionError(
            "no legal reduction: a partial integration in variable "
            f"{var + 1} leaves a nonzero endpoint term"
        )
    out: list[TTerm] = []
    for t_idx, prop in enumerate(reduced.props):
        if t_idx == index:
            continue
        for t_side, arg in ((0, prop.i), (1, prop.j)):
            if arg != var:
                continue
            grown = _with_label(prop, t_side, label)
            if grown is None:
                raise ReductionError(
                    "no legal reduction: partial integration would pile a "
                    f"third derivative onto {prop.describe()}"
                )
            props = list(reduced.props)
            props[t_idx] = grown
            out.append(
                replace(
                    reduced,
                    coefficient=reduced.coefficient * Fraction(-1),
                    props=tuple(props),
                )
            )
    if not out:
        # d/dtau of nothing: the integrand was a total derivative with zero
        # boundary terms, so the whole term vanishes.
        return []
    return out


def divergence_split(term: TTerm, first: int, second: int) -> list[TTerm]:
    """Add and subtract the squared delta hiding in an identical MuNu pair.

    The squared-delta piece keeps the divergence; the finite difference is
    integrated by parts once on each member, which is legal because the
    difference is finite.  The result is the three-way split: a squared
    delta term, product-rule terms with one surviving MuNu member, and
    product-rule terms with a Laplacian member.
    """
    a, b = term.props[first], term.props[second]
    if not (tag(a) == tag(b) == "MuNu" and a == b and a.i != a.j):
        raise ReductionError(
            "no legal reduction: the add-and-subtract split needs an "
            "identical pair of mixed-derivative factors"
        )
    i, j = a.i, a.j
    mu = a.left[0]
    nu = a.right[0]
    rest = tuple(p for idx, p in enumerate(term.props) if idx not in (first, second))

    out: list[TTerm] = [
        replace(
            term,
            props=rest,
            deltas=term.deltas + (TDelta(i, j), TDelta(i, j)),
        )
    ]
    plain_nu = TProp(i, j, (), (nu,))
    for g_idx, g in enumerate(rest):
        for g_side, arg in ((0, g.i), (1, g.j)):
            if arg != i:
                continue
            grown = _with_label(g, g_side, mu)
            if grown is None:
                raise ReductionError(
                    "no legal reduction: the split cannot differentiate "
                    f"{g.describe()} again"
                )
            props = list(rest)
            props[g_idx] = grown
            out.append(
                replace(
                    term,
                    coefficient=term.coefficient * Fraction(-1),
                    props=tuple(props) + (plain_nu, a),
                )
            )
    lap_label = _next_label(term)
    laplacian = TProp(i, j, (), (lap_label, lap_label))
    for g_idx, g in enumerate(rest):
        for g_side, arg in ((0, g.i), (1, g.j)):
            if arg != j:
                continue
            grown = _with_label(g, g_side, nu)
            if grown is None:
                raise ReductionError(
                    "no legal reduction: the split cannot differentiate "
                    f"{g.describe()} again"
                )
            props = list(rest)
            props[g_idx] = grown
            out.append(
                replace(term, props=tuple(props) + (plain_nu, laplacian))
            )
    return out


def return_to_1d(term: TTerm) -> list[IntegrandTerm]:
    """Map a label-consistent lifted term back to plain 1D factors."""
    factors: list[tuple[Kind, int, int]] = []
    for prop in term.props:
        t = tag(prop)
        if t == "MuNu":
            raise ReductionError(
                "no legal reduction: ReturnTo1D is blocked while the "
                f"mixed-derivative factor {prop.describe()} (tag MuNu) "
                "remains; it has no one-dimensional value"
            )
        if t in ("MuMuEqualTime", "Laplacian", "Unknown"):
            raise ReductionError(
                f"no legal reduction: ReturnTo1D cannot map {prop.describe()} "
                f"(tag {t})"
            )
        nl, nr = len(prop.left), len(prop.right)
        if (nl, nr) == (0, 0):
            factors.append((Kind.D, prop.i, prop.j))
        elif (nl, nr) == (1, 0):
            factors.append((Kind.DOT_LEFT, prop.i, prop.j))
        else:
            factors.append((Kind.DOT_RIGHT, prop.i, prop.j))
    extra = tuple(
        SingularAtom("delta", min(d.i, d.j), max(d.i, d.j)) for d in term.deltas
    )
    return product(factors, term.nvars, term.coefficient, extra_atoms=extra)


# ---------------------------------------------------------------------------
# structural matching for fixed points
# ---------------------------------------------------------------------------


def _signature(term: TTerm) -> tuple:
    """Canonical structure key, invariant under label renaming."""
    labels = sorted(_used_labels(term))
    best = None
    for perm in itertools.permutations(range(len(labels))):
        mapping = {lab: f"c{perm[pos]}" for pos, lab in enumerate(labels)}
        props = tuple(
            sorted(
                (p.i, p.j, tuple(mapping[l] for l in p.left), tuple(mapping[l] for l in p.right))
                for p in term.props
            )
        )
        key = (term.nvars, props, tuple(sorted((d.i, d.j) for d in term.deltas)))
        if best is None or key < best:
            best = key
    return best if best is not None else (term.nvars, (), ())


def _ratio(num: RegValue, den: RegValue) -> Fraction | None:
    """num / den when the two values are rationally proportional."""
    den_items = den.items()
    if not den_items:
        return None
    key, base = den_items[0]
    r = num.coefficient(*key) / base
    scaled = den * r
    return r if scaled == num else None


# ---------------------------------------------------------------------------
# the reducer
# ---------------------------------------------------------------------------

MAX_DEPTH = 6


class Reducer:
    """Deterministic reduction of lifted terms under a rule set."""

    def __init__(self, rules: RuleSet, log: list[dict] | None = None) -> None:
        self.rules = rules
        self.log: list[dict] = log if log is not None else []
        self.notes: list[str] = []

    def _record(self, move: str, **info) -> None:
        entry = {"move": move}
        entry.update(info)
        self.log.append(entry)

    def reduce_product(self, parsed: ParsedProduct) -> RegValue:
        if not parsed.factors:
            # A bare coefficient: every variable integrates to a factor of
            # beta, and with no factors there are no variables.
            return parsed.coefficient
        term = lift(parsed)
        self._record(
            "Lift",
            factors=[p.describe() for p in term.props],
            variables=term.nvars,
        )
        return self._resolve(term, MAX_DEPTH)

    def _resolve(self, term: TTerm, depth: int) -> RegValue:
        if term.coefficient.is_zero():
            return RegValue.zero()

        for idx, prop in enumerate(term.props):
            if tag(prop) == "MuMuEqualTime":
                self._record(
                    "EqualTimeSubstitute", factor=prop.describe(), tag="MuMuEqualTime"
                )
                return self._resolve(equal_time_substitute(term, idx), depth)

        for idx, prop in enumerate(term.props):
            if tag(prop) == "Laplacian":
                self._record("FieldEquation", factor=prop.describe(), tag="Laplacian")
                return self._resolve(field_equation(term, idx), depth)

        for idx, prop in enumerate(term.props):
            if tag(prop) == "Unknown":
                raise ReductionError(
                    f"no legal reduction: factor {prop.describe()} is outside "
                    "the move table"
                )

        munu = [idx for idx, prop in enumerate(term.props) if tag(prop) == "MuNu"]
        if not munu:
            self._record(
                "ReturnTo1D",
                factors=[p.describe() for p in term.props]
                + [d.describe() for d in term.deltas],
            )
            return integrate(return_to_1d(term), self.rules, self.notes)

        for first, second in itertools.combinations(munu, 2):
            if term.props[first] == term.props[second]:
                self._record(
                    "PartialIntegration",
                    composite="add-and-subtract squared delta",
                    factor=term.props[first].describe(),
                    tag="MuNu",
                )
                split = divergence_split(term, first, second)
                total = RegValue.zero()
                for piece in split:
                    total = total + self._resolve(piece, depth - 1)
                return total

        if depth <= 0:
            raise ReductionError(
                "no legal reduction: move search exceeded its depth budget"
            )

        base_sig = _signature(term)
        failures: list[str] = []
        for idx, side, prop in self._pi_candidates(term):
            try:
                pieces = partial_integration(term, idx, side)
            except ReductionError as err:
                failures.append(str(err))
                continue
            checkpoint = len(self.log)
            self._record(
                "PartialIntegration",
                factor=prop.describe(),
                side="left" if side == 0 else "right",
                variable=(prop.i if side == 0 else prop.j) + 1,
            )
            try:
                ratio_sum = Fraction(0)
                others: list[TTerm] = []
                for piece in pieces:
                    if _signature(piece) == base_sig:
                        r = _ratio(piece.coefficient, term.coefficient)
                        if r is not None:
                            ratio_sum += r
                            continue
                    others.append(piece)
                if ratio_sum == 1:
                    raise ReductionError(
                        "no legal reduction: the partial integration only "
                        "restates the term"
                    )
                total = RegValue.zero()
                for piece in others:
                    total = total + self._resolve(piece, depth - 1)
                if ratio_sum:
                    self._record(
                        "FixedPoint",
                        ratio=str(ratio_sum),
                        note="term reproduced itself under the move",
                    )
                    total = total / (1 - ratio_sum)
                return total
            except ReductionError as err:
                del self.log[checkpoint:]
                failures.append(str(err))
                continue
        raise ReductionError(
            "no legal reduction: every candidate move failed; tried "
            f"{len(failures)}: " + "; ".join(sorted(set(failures))[:3])
        )

    def _pi_candidates(self, term: TTerm):
        order = []
        for idx, prop in enumerate(term.props):
            for side, labels in ((0, prop.left), (1, prop.right)):
                if len(labels) == 1:
                    var = prop.i if side == 0 else prop.j
                    order.append((var, tag(prop) != "MuNu", idx, side, prop))
        # Prefer moving the derivative of a mixed factor itself: that is the
        # move that shortens every tabled chain.
        order.sort(key=lambda entry: (entry[0], entry[1], entry[2], entry[3]))
        for _, _, idx, side, prop in order:
            yield idx, side, prop


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def reduce_terms(
    text_or_parsed: str | list[ParsedProduct],
    rules: RuleSet = DIMREG,
    log: list[dict] | None = None,
) -> RegValue:
    """Reduce a sum of lifted products to its exact value."""
    parsed = parse(text_or_parsed) if isinstance(text_or_parsed, str) else text_or_parsed
    reducer = Reducer(rules, log)
    total = RegValue.zero()
    for item in parsed:
        total = total + reducer.reduce_product(item)
    return total


def evaluate_named(
    name: str, rules: RuleSet = DIMREG, log: list[dict] | None = None
) -> RegValue:
    """Value of a named fixture integral under the given rule set."""
    text, finite_only = named_integral_text(name)
    value = reduce_terms(text, rules, log)
    return value.finite_part() if finite_only else value


def forbidden_one_dimensional_return(name: str = "I14") -> None:
    """Attempt the illegal shortcut: lift, then come straight back to 1D.

    This is the path that would let the naive manipulations sneak back in.
    It always raises, naming the mixed-derivative factor that blocks it.
    """
    text, _ = named_integral_text(name)
    for parsed in parse(text):
        term = lift(parsed)
        for idx, prop in enumerate(term.props):
            if tag(prop) == "MuMuEqualTime":
                term = equal_time_substitute(term, idx)
                break
        return_to_1d(term)
