from __future__ import annotations

from fractions import Fraction

import pytest

from engine.costs import (
    AsymmetricPoly,
    BivariatePoly,
    SymmetricPoly,
    Tabulated,
    TargetDistribution,
    benign_congestion,
    bivariate_from_asymmetric,
    eval_cost,
    make_cost,
    pricing,
    validate,
)
from engine.errors import SearchInputError, TopologyMismatchError
from engine.graph import path


def test_symmetric_cost_on_tree(spider_tree):
    quadratic = SymmetricPoly((0, 0, 1))
    assert eval_cost(quadratic, spider_tree, 3, 10) == 25
    assert eval_cost(quadratic, spider_tree, 10, 3) == 25
    assert eval_cost(quadratic, spider_tree, 4, 4) == 0


def test_correct_query_is_free_even_with_constant_term(path10):
    constant = SymmetricPoly((1,))
    assert eval_cost(constant, path10, 5, 5) == 0
    assert eval_cost(constant, path10, 5, 9) == 1


def test_asymmetric_sides(path10):
    c = AsymmetricPoly((0, 1), (0, 3))
    assert eval_cost(c, path10, 2, 5) == 3
    assert eval_cost(c, path10, 5, 2) == 9


def test_asymmetric_pads_degrees():
    c = AsymmetricPoly((0, 1), (0, 0, 2))
    assert c.minus == (0, 1, 0)
    assert c.degree == 2


def test_pricing_regret(path10):
    c = pricing()
    assert eval_cost(c, path10, 7, 4) == 4
    assert eval_cost(c, path10, 4, 7) == 3
    assert eval_cost(c, path10, 7, 7) == 0


def test_line_only_models_rejected_on_trees(spider_tree):
    with pytest.raises(TopologyMismatchError):
        eval_cost(pricing(), spider_tree, 1, 2)
    with pytest.raises(TopologyMismatchError):
        make_cost(AsymmetricPoly((0, 1), (0, 2)), spider_tree)


def test_eval_cost_checks_vertices(path10):
    with pytest.raises(SearchInputError):
        eval_cost(SymmetricPoly((0, 1)), path10, 0, 3)


def test_validate_detects_non_monotone_table():
    report = validate(Tabulated((1, 3, 2)), 4)
    assert not report.ok
    assert report.witness == (3,)
    with pytest.raises(SearchInputError):
        report.raise_for_violation()


def test_validate_detects_short_table_and_negative_poly():
    assert not validate(Tabulated((1, 2)), 5).ok
    assert not validate(SymmetricPoly((0, -1)), 3).ok
    assert not validate(SymmetricPoly((0, 5, -1)), 10).ok
    assert validate(SymmetricPoly((0, 5, -1)), 3).ok


def test_validate_bivariate_bound_and_negativity():
    assert validate(pricing(), 20).ok
    too_big = BivariatePoly(minus={(0, 1): 50}, plus={(0, 1): 1}, bound_exponent=1)
    assert not validate(too_big, 10).ok
    negative = BivariatePoly(minus={(1, 0): -1}, plus={(0, 1): 1})
    report = validate(negative, 5)
    assert not report.ok


def test_benign_preset_scales_to_integers(path10):
    c = benign_congestion(1, 2)
    assert isinstance(c, BivariatePoly)
    assert eval_cost(c, path10, 6, 3) == 3
    assert eval_cost(c, path10, 3, 6) == 6
    assert validate(c, 10).ok
    with pytest.raises(SearchInputError):
        benign_congestion(1, 0)


def test_validate_warns_on_cost_shrinking_with_distance(caplog):
    shrinking = BivariatePoly(minus={(1, 0): 1}, plus={(0, 1): 1})
    with caplog.at_level("WARNING", logger="engine.costs"):
        report = validate(shrinking, 6)
    assert report.ok
    assert report.warnings
    assert "单调" in caplog.text
    assert not validate(pricing(), 20).warnings


@pytest.mark.parametrize(
    "model",
    [
        SymmetricPoly((0, 1)),
        SymmetricPoly((2, 1, 3)),
        AsymmetricPoly((0, 2, 1), (1, 0, 4)),
        AsymmetricPoly((0, 0, 0, 1), (0, 1)),
    ],
)
def test_bivariate_expansion_agrees_with_distance_form(model):
    expanded = bivariate_from_asymmetric(model)
    t = path(8)
    for q in t.vertices():
        for target in t.vertices():
            assert eval_cost(expanded, t, q, target) == eval_cost(model, t, q, target)


def test_target_distribution():
    d = TargetDistribution.uniform(3)
    assert d.p(2) == Fraction(1, 3)
    assert TargetDistribution.point_mass(4, 2).p(2) == 1
    with pytest.raises(SearchInputError):
        TargetDistribution((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(SearchInputError):
        TargetDistribution((Fraction(3, 2), Fraction(-1, 2)))


def test_non_integer_coefficients_rejected():
    with pytest.raises(SearchInputError):
        SymmetricPoly((0, 1.5))
    with pytest.raises(SearchInputError):
        Tabulated(())
