"""Parser, printer, and evaluation tests for the expression language."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clarke_kkt.errors import EvaluationDomainError, ProblemParseError
from clarke_kkt.expressions import (
    Abs,
    BinOp,
    Const,
    MaxOp,
    PowOp,
    Var,
    evaluate,
    parse_expression,
    to_text,
)


def test_parse_basic_tree():
    expr = parse_expression("abs(x1) + 2 * x2")
    assert expr == BinOp("+", Abs(Var(1)), BinOp("*", Const(2.0), Var(2)))


def test_parse_precedence_and_assoc():
    assert parse_expression("x1 - x2 - x1") == BinOp(
        "-", BinOp("-", Var(1), Var(2)), Var(1)
    )
    assert parse_expression("x1 + x2 * x1") == BinOp(
        "+", Var(1), BinOp("*", Var(2), Var(1))
    )


def test_parse_negative_literal_folds():
    assert parse_expression("-3") == Const(-3.0)
    assert parse_expression("x1 * -2.5") == BinOp("*", Var(1), Const(-2.5))


def test_parse_calls():
    assert parse_expression("max(x1, x2)") == MaxOp(Var(1), Var(2))
    assert parse_expression("pow(x1, 3)") == PowOp(Var(1), 3)


@pytest.mark.parametrize("text", [
    "",
    "x1 +",
    "max(x1)",
    "pow(x1, x2)",
    "pow(x1, -2)",
    "abs x1",
    "x0",
    "2 @ 3",
    "(x1",
])
def test_parse_errors(text):
    with pytest.raises(ProblemParseError):
        parse_expression(text)


def test_parse_error_reports_position():
    with pytest.raises(ProblemParseError) as exc_info:
        parse_expression("x1 + @", line=7)
    assert exc_info.value.line == 7
    assert exc_info.value.col == 6


@pytest.mark.parametrize("text,point,expected", [
    ("abs(x1)", [-3.0], 3.0),
    ("max(x1, x2)", [1.0, 2.0], 2.0),
    ("min(x1, x2)", [1.0, 2.0], 1.0),
    ("pow(x1, 2)", [-3.0], 9.0),
    ("pow(x1, 0)", [5.0], 1.0),
    ("x1 / x2", [6.0, 3.0], 2.0),
    ("-x1 + 2", [1.0], 1.0),
    ("7", [0.0], 7.0),
])
def test_evaluate(text, point, expected):
    value = evaluate(parse_expression(text), np.asarray(point))
    assert float(value) == expected


def test_division_by_zero_raises():
    with pytest.raises(EvaluationDomainError):
        evaluate(parse_expression("x1 / x1"), np.array([0.0]))


def test_evaluate_batch_shape():
    expr = parse_expression("max(x1, x2)")
    points = np.array([[1.0, 2.0], [3.0, 0.0], [0.0, 0.0]])
    np.testing.assert_array_equal(evaluate(expr, points), [2.0, 3.0, 0.0])


@pytest.mark.parametrize("text", [
    "x1 - (x2 - x1)",
    "x1 * (x2 + 1)",
    "-(x1 + x2)",
    "x1 - -x2",
    "pow(x1 - 1, 2) + pow(x2, 2)",
    "abs(x1) + x2 / 2 - max(x1, min(x2, 3))",
    "1e-06 * x1",
])
def test_print_parse_round_trip_is_structural(text):
    tree = parse_expression(text)
    assert parse_expression(to_text(tree)) == tree


_leaf = st.one_of(
    st.integers(1, 3).map(Var),
    st.floats(-100, 100, allow_nan=False, allow_infinity=False).map(Const),
)


def _branch(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(*t)),
        children.map(Abs),
        st.tuples(children, children).map(lambda t: MaxOp(*t)),
        st.tuples(children, st.integers(0, 4)).map(lambda t: PowOp(*t)),
    )


@settings(max_examples=200, deadline=None)
@given(st.recursive(_leaf, _branch, max_leaves=12))
def test_round_trip_evaluates_bitwise_identically(tree):
    # division is excluded from generation so evaluation is total
    reparsed = parse_expression(to_text(tree))
    rng = np.random.default_rng(0)
    points = rng.uniform(-5, 5, size=(100, 3))
    np.testing.assert_array_equal(evaluate(tree, points), evaluate(reparsed, points))
