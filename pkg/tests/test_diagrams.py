"""Tests for the Wick contraction catalogs and their totals."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest

from worldline.diagrams import (
    Diagram,
    Vertex,
    catalog,
    classify,
    evaluate_diagram,
    perfect_matchings,
    sum_order,
    wick,
)
from worldline.geometry import FlatTransform, NormalCoords, vertices
from worldline.integration import DIMREG, MODEREG
from worldline.propagators import Kind
from worldline.values import RegValue


def _by_shape(diagrams):
    grouped = {}
    for diagram in diagrams:
        grouped.setdefault(classify(diagram), []).append(diagram)
    return grouped


def _family_total(diagrams, shape, rules=DIMREG):
    total = RegValue.zero()
    for diagram in diagrams:
        if classify(diagram) == shape:
            value, _ = evaluate_diagram(diagram, rules)
            total = total + value
    return total


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("nfields,count", [(2, 1), (4, 3), (6, 15), (8, 105)])
def test_matching_counts_are_double_factorials(nfields, count):
    assert sum(1 for _ in perfect_matchings(range(nfields))) == count


# ---------------------------------------------------------------------------
# flat catalog, first order
# ---------------------------------------------------------------------------


def test_flat_first_order_catalog():
    diagrams = wick(vertices(FlatTransform(), 1), order=1)
    assert len(diagrams) == 3
    weights = {diagram.edges: diagram.weight for diagram in diagrams}
    loop = ((0, 0), Kind.D)
    assert weights[(loop, ((0, 0), Kind.DOT_DOT))] == RegValue.one()
    assert weights[(((0, 0), Kind.DOT_LEFT), ((0, 0), Kind.DOT_LEFT))] == (
        RegValue.rational(2)
    )
    assert weights[(loop,)] == RegValue.delta0(coeff=-1)


def test_flat_first_order_sum_vanishes():
    assert sum_order(FlatTransform(), 1) == {"one": RegValue.zero()}


# ---------------------------------------------------------------------------
# flat catalog, second order
# ---------------------------------------------------------------------------


def test_flat_second_order_shape_counts():
    diagrams = wick(vertices(FlatTransform(), 2), order=2)
    counts = Counter(classify(diagram) for diagram in diagrams)
    assert counts == {
        "single_vertex": 3,
        "measure_pair": 4,
        "three_bubble": 7,
        "watermelon": 3,
    }


def test_flat_single_vertex_weights():
    diagrams = _by_shape(wick(vertices(FlatTransform(), 2), order=2))
    weights = Counter(d.weight for d in diagrams["single_vertex"])
    assert weights == Counter(
        [
            RegValue.rational(-18),
            RegValue.rational(Fraction(-9, 2)),
            RegValue.delta0(coeff=Fraction(3, 2)),
        ]
    )


def test_flat_measure_pair_weights():
    diagrams = _by_shape(wick(vertices(FlatTransform(), 2), order=2))
    weights = Counter(d.weight for d in diagrams["measure_pair"])
    assert weights == Counter(
        [
            RegValue.delta0(2),
            RegValue.delta0(coeff=-2),
            RegValue.delta0(coeff=-2),
            RegValue.delta0(coeff=-8),
        ]
    )


def test_flat_three_bubble_weights():
    diagrams = _by_shape(wick(vertices(FlatTransform(), 2), order=2))
    weights = Counter(d.weight for d in diagrams["three_bubble"])
    assert weights == Counter(
        RegValue.rational(w) for w in (2, 1, 1, 8, 8, 8, 8)
    )


def test_flat_watermelon_weights():
    diagrams = _by_shape(wick(vertices(FlatTransform(), 2), order=2))
    weights = Counter(d.weight for d in diagrams["watermelon"])
    assert weights == Counter(RegValue.rational(w) for w in (2, 8, 2))


def test_flat_family_totals():
    diagrams = wick(vertices(FlatTransform(), 2), order=2)
    assert _family_total(diagrams, "single_vertex") == RegValue.delta0(
        coeff=Fraction(-1, 10)
    ) * RegValue.beta(3)
    assert _family_total(diagrams, "measure_pair") == (
        RegValue.term(Fraction(-1, 15), 3, 1) + RegValue.term(Fraction(-1, 90), 4, 2)
    )
    assert _family_total(diagrams, "watermelon") == (
        RegValue.term(Fraction(-1, 60), 2, 0) + RegValue.term(Fraction(1, 15), 3, 1)
    )


def test_flat_second_order_sum_vanishes_by_grade():
    total = sum_order(FlatTransform(), 2)["one"]
    for grade in (0, 1, 2):
        assert total.grade(grade) == RegValue.zero()


def test_flat_second_order_mode_regularization_residual():
    total = sum_order(FlatTransform(), 2, MODEREG)["one"]
    assert total == RegValue.beta(2, Fraction(-1, 36))


# ---------------------------------------------------------------------------
# curved catalog
# ---------------------------------------------------------------------------


def test_curved_first_order_class_weights():
    diagrams = wick(vertices(NormalCoords(), 1), order=1)
    assert len(diagrams) == 3
    assert {d.tensor_label for d in diagrams} == {"R"}
    weights = {diagram.edges: diagram.weight for diagram in diagrams}
    loop = ((0, 0), Kind.D)
    assert weights[(loop, ((0, 0), Kind.DOT_DOT))] == RegValue.rational(
        Fraction(-1, 6)
    )
    assert weights[(((0, 0), Kind.DOT_LEFT), ((0, 0), Kind.DOT_LEFT))] == (
        RegValue.rational(Fraction(1, 6))
    )
    assert weights[(loop,)] == RegValue.delta0(coeff=Fraction(1, 6))


def test_curved_first_order_sum():
    assert sum_order(NormalCoords(), 1) == {"R": RegValue.beta(1, Fraction(1, 24))}


def test_curved_second_order_sum_is_heat_kernel():
    totals = sum_order(NormalCoords(), 2)
    assert totals == {
        "RicciSq": RegValue.beta(2, Fraction(-1, 720)),
        "RiemannSq": RegValue.beta(2, Fraction(1, 720)),
        "Rsq": RegValue.beta(2, Fraction(1, 288)),
    }


def test_curved_second_order_divergences_cancel_per_label():
    totals = sum_order(NormalCoords(), 2)
    for value in totals.values():
        assert value.grade(1) == RegValue.zero()
        assert value.grade(2) == RegValue.zero()


def test_curved_watermelon_total_is_pure_divergence():
    diagrams = wick(vertices(NormalCoords(), 2), order=2)
    total = _family_total(diagrams, "watermelon")
    assert total == RegValue.term(Fraction(1, 720), 3, 1)


def test_curved_quartic_kinetic_vertex_alone():
    # The six-field vertex carries weight built from both delta-expansion
    # branches of each factor, so its local values depend on the slot
    # layout; the full second-order totals above pin them, this guards
    # the label split.
    diagrams = [
        d
        for d in wick(vertices(NormalCoords(), 2), order=2)
        if classify(d) == "single_vertex"
    ]
    labels = Counter(d.tensor_label for d in diagrams)
    assert set(labels) == {"RicciSq", "RiemannSq"}


# ---------------------------------------------------------------------------
# evaluation plumbing
# ---------------------------------------------------------------------------


def test_evaluate_diagram_applies_weight():
    diagram = Diagram(
        vertices=tuple(vertices(FlatTransform(), 1)[:1]),
        edges=(((0, 0), Kind.D), ((0, 0), Kind.DOT_DOT)),
        weight=RegValue.rational(6),
        tensor_label="one",
        local=True,
    )
    value, label = evaluate_diagram(diagram)
    assert label == "one"
    assert value == (RegValue.delta0() - RegValue.beta(-1)) * RegValue.beta(
        2, Fraction(1, 6)
    ) * 6


def test_sum_order_rejects_higher_orders():
    with pytest.raises(ValueError):
        sum_order(FlatTransform(), 3)


def test_catalog_is_deterministic_and_serializable():
    import json

    first = catalog(FlatTransform(), 2)
    second = catalog(FlatTransform(), 2)
    assert first == second
    text = json.dumps(first, sort_keys=True)
    assert json.loads(text) == first
    assert all(entry["order_in_eps"] == 2 for entry in first)


def test_vertex_validation():
    with pytest.raises(ValueError):
        Vertex(
            name="bad",
            order_in_eps=3,
            q_power=2,
            qdot_power=0,
            delta0_power=0,
            coefficient=Fraction(1),
            tensor_label="one",
        )
    with pytest.raises(ValueError):
        Vertex(
            name="bad",
            order_in_eps=1,
            q_power=2,
            qdot_power=0,
            delta0_power=0,
            coefficient=Fraction(1),
            tensor_label="riemann",
            tensors=("riem",),
            q_slots=(0,),
        )
