import pytest
from hypothesis import given, strategies as st

from odo.errors import OdoError
from odo.expr import (example_names, load_example, operator_from_json, operator_to_json, parse_operator,
                      parse_scalar)
from odo.field_tower import QQ, const_ext, hyperbolic, ratfunc_x
from odo.operators import DiffOp

K = ratfunc_x()
H = hyperbolic()
X = K.gen
Dx = DiffOp.D(K)


def test_shorthand_and_explicit_forms():
    a = parse_operator("D^2 - 2/x^2 * D^0", "ratfunc_x")
    b = parse_operator("D^2 - 2/x^2", K)
    assert a == b == Dx ** 2 - 2 / X ** 2
    assert a.order == 2


def test_cosh_operator(examples):
    L = parse_operator("D^3 + (6/eta^2)*D - 12*eta'/eta^3", "hyperbolic")
    assert L == examples["Ex3genL"]


def test_products_are_normal_ordered():
    assert parse_operator("D*x", K) == X * Dx + 1
    assert parse_operator("(D + x)^2", K) == Dx ** 2 + (2 * X) * Dx + (X * X + 1)
    assert parse_operator("x**2*D", K) == (X * X) * Dx


@pytest.mark.parametrize("text,code", [
    ("x D", "PARSE_ERROR"),
    ("2x", "PARSE_ERROR"),
    ("D/D", "PARSE_ERROR"),
    ("1/(x + D)", "PARSE_ERROR"),
    ("x^-1", "PARSE_ERROR"),
    ("(x + 1", "PARSE_ERROR"),
    ("x + ", "PARSE_ERROR"),
    ("y", "PARSE_ERROR"),
    ("x $ 1", "PARSE_ERROR"),
    ("eta*D", "FIELD_MISMATCH"),
    ("1/(x - x)", "DIVISION_BY_ZERO"),
])
def test_errors(text, code):
    with pytest.raises(OdoError) as e:
        parse_operator(text, K)
    assert e.value.code == code
    if code == "PARSE_ERROR" and text != "y":
        assert "position" in e.value.message


def test_x_under_hyperbolic_is_a_field_mismatch():
    with pytest.raises(OdoError) as e:
        parse_operator("D + x", H)
    assert e.value.code == "FIELD_MISMATCH"


def test_scalars():
    Ks = const_ext(H, "s")
    s = Ks.gen
    z = (s * H.eta + H.eta_prime / H.eta) / (s - 1)
    assert parse_scalar(str(z), Ks) == z
    assert parse_scalar("s^2/(s-1)", const_ext(QQ, "s")) == const_ext(QQ, "s").gen ** 2 / (const_ext(QQ, "s").gen - 1)
    assert parse_scalar("3/4", QQ) == QQ(3) / 4
    with pytest.raises(OdoError):
        parse_scalar("D", K)


small = st.integers(-6, 6)
ratfuncs = st.tuples(st.lists(small, min_size=1, max_size=3), st.lists(small, min_size=1, max_size=3)).map(
    lambda t: K.poly(t[0]) / K.poly(t[1]) if any(t[1]) else K.poly(t[0]))
ops = st.lists(ratfuncs, min_size=1, max_size=4).map(lambda cs: DiffOp(K, cs))


@given(ops)
def test_print_parse_round_trip(op):
    text = str(op)
    back = parse_operator(text, K)
    assert back == op
    assert str(back) == text


@given(st.lists(st.tuples(st.lists(small, min_size=1, max_size=2), st.lists(small, min_size=1, max_size=2)),
                min_size=1, max_size=3))
def test_round_trip_over_hyperbolic(parts):
    ef = H.eta_field
    op = DiffOp(H, [H.make(ef.poly(a), ef.poly(b)) / (H.eta ** 2) for a, b in parts])
    assert parse_operator(str(op), H) == op


def test_examples_and_json_round_trip():
    for name in example_names():
        op = load_example(name)
        assert operator_from_json(operator_to_json(op)) == op
        assert operator_from_json({k: v for k, v in operator_to_json(op).items() if k != "coefficients"}) == op
    with pytest.raises(OdoError) as e:
        load_example("Nope")
    assert e.value.code == "UNKNOWN_EXAMPLE"
