import pytest
from hypothesis import assume, given, settings, strategies as st

from odo.errors import OdoError
from odo.field_tower import ratfunc_x
from odo.formal import DiffPolyRing
from odo.operators import DiffOp, commutator, delta_product, gcrd, is_normal_form, right_divide

K = ratfunc_x()
X = K.gen
Dx = DiffOp.D(K)

small = st.integers(-4, 4)
coeffs = st.tuples(st.lists(small, min_size=1, max_size=3), st.sampled_from([(1,), (0, 1), (1, 1), (0, 0, 1)]))
elements = coeffs.map(lambda t: K.poly(t[0]) / K.poly(t[1]))
ops = st.lists(elements, min_size=1, max_size=4).map(lambda cs: DiffOp(K, cs))


def test_leibniz_examples():
    assert Dx * DiffOp.scalar(K, X) == X * Dx + 1
    R = DiffPolyRing(2)
    u = R.u(2)
    D = DiffOp.D(R)
    U = DiffOp.scalar(R, u)
    assert D * D * U == DiffOp(R, [R.derive(R.derive(u)), 2 * R.derive(u), u])


def test_schroedinger_pair_commutes(examples):
    L, A = examples["SchrL"], examples["SchrA"]
    assert not (L * A - A * L)


def test_right_divide_examples():
    q, r = right_divide(Dx ** 2, Dx)
    assert q == Dx and not r
    q, r = right_divide(X * Dx + 1, Dx + 1 / X)
    assert q == DiffOp.scalar(K, X) and not r


def test_weyl_family_with_q_equal_x():
    L = Dx ** 2 + (2 * X) * Dx + (X * X + 1)
    q, r = right_divide(L, Dx - X)
    assert r.order <= 0
    assert not commutator(L, Dx + X)


def test_gcrd_examples(examples):
    assert gcrd(Dx + 1, Dx + X) == DiffOp.scalar(K, K.one)
    P = examples["SchrL"]
    assert gcrd(P, P) == P.monic()
    G = gcrd(examples["SchrL"], examples["SchrA"])
    assert G.order >= 1


def test_commutator_examples(examples):
    L = examples["SchrL"]
    assert not commutator(L, L * L)
    assert commutator(Dx ** 2, DiffOp.scalar(K, X)) == 2 * Dx


def test_normal_form(examples):
    assert is_normal_form(examples["Ex3genL"])
    assert not is_normal_form(examples["EulerL4"])


def test_division_by_zero_operator():
    with pytest.raises(OdoError) as e:
        right_divide(Dx, DiffOp(K))
    assert e.value.code == "DIVISION_BY_ZERO_OPERATOR"


def test_euler_operators_commute_and_satisfy_power_relation(examples):
    L, B = examples["EulerL4"], examples["EulerB6"]
    assert L == delta_product(K, [0, 6, 12, 18], -4)
    assert not commutator(L, B)
    assert L ** 3 == B ** 2


@settings(max_examples=60)
@given(ops, ops)
def test_gcrd_divides_both_and_is_symmetric(P, Q):
    assume(P or Q)
    G = gcrd(P, Q)
    assert not right_divide(P, G)[1] and not right_divide(Q, G)[1]
    assert G == gcrd(Q, P)


def test_gcrd_of_zeros_is_an_error():
    with pytest.raises(OdoError) as e:
        gcrd(DiffOp(K), DiffOp(K))
    assert e.value.code == "ZERO_INPUT"
