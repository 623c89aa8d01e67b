from fractions import Fraction

import pytest

from odo.centralizer import commuting_of_order
from odo.errors import OdoError
from odo.field_tower import ratfunc_x
from odo.formal import (DiffPolyRing, PsdOp, almost_commuting, evaluate_diffpoly, evaluate_operator,
                        fractional_powers, gd_system, index_set, nth_root, psdo_pow)
from odo.operators import DiffOp, commutator
from oracles import ansatz_almost_commuting

K = ratfunc_x()
X = K.gen


def test_jet_printing():
    R = DiffPolyRing(3)
    assert str(R.u(2, 1)) == "u2'"
    assert str(R.u(3, 4)) == "u3^(4)"
    assert str(R.derive(R.u(2) * R.u(2))) == "2*u2*u2'"


def test_kdv_p3():
    R = DiffPolyRing(2)
    u = R.u(2)
    P, H = almost_commuting(2, 3)
    D = DiffOp.D(R)
    assert P == D ** 3 + DiffOp(R, [Fraction(3, 4) * R.derive(u), Fraction(3, 2) * u])
    assert H == [Fraction(3, 2) * u * R.derive(u) + Fraction(1, 4) * R.u(2, 3)]


def test_boussinesq_p2():
    R = DiffPolyRing(3)
    P, H = almost_commuting(3, 2)
    assert P == DiffOp(R, [Fraction(2, 3) * R.u(2), R.zero, R.one])
    assert len(H) == 2


@pytest.mark.parametrize("n,m", [(2, 3), (2, 5), (3, 2), (3, 4), (3, 5), (4, 3), (4, 5), (4, 6), (4, 7), (5, 3)])
def test_almost_commuting_matches_ansatz(n, m):
    P, nullity = ansatz_almost_commuting(n, m)
    assert nullity == 0
    assert almost_commuting(n, m)[0] == P


def test_nth_root_concrete(examples):
    L = examples["SchrL"]
    R = nth_root(L, floor=-6)
    assert R.top == 1 and R.coeff(1) == 1
    assert psdo_pow(R, 2, -4) == PsdOp.from_diffop(L, -4)
    E = examples["EulerL4"]
    assert psdo_pow(nth_root(E, -5), 4, -2) == PsdOp.from_diffop(E, -2)
    with pytest.raises(OdoError) as e:
        nth_root(E.scale(2))
    assert e.value.code == "NOT_NORMAL_FORM"


def test_truncated_coefficients_are_refused(examples):
    R = nth_root(examples["SchrL"], floor=-2)
    with pytest.raises(OdoError) as e:
        R.coeff(-3)
    assert e.value.code == "TRUNCATED"


def test_fractional_powers_are_almost_commuting(examples):
    L = examples["Ex3genL"]
    P = fractional_powers(L, range(1, 7))
    for m, Pm in P.items():
        assert Pm.order == m
        assert commutator(Pm, L).order <= L.order - 2


def test_evaluation_of_jets():
    R = DiffPolyRing(2)
    u = R.u(2)
    p = u * R.u(2, 2)
    assert evaluate_diffpoly(p, {2: X ** 3}) == X ** 3 * 6 * X
    with pytest.raises(OdoError) as e:
        evaluate_diffpoly(p, {})
    assert e.value.code == "MISSING_ASSIGNMENT"
    op = R.formal_operator()
    assert evaluate_operator(op, {2: -2 / X ** 2}, K) == DiffOp(K, [-2 / X ** 2, 0, 1])


def test_index_set():
    assert index_set(3, 5) == [1, 2, 4, 5]


def test_gd_systems():
    G = gd_system(2, 3)
    assert len(G.equations) == 1 and G.unknown_constants == [1]
    assert len(gd_system(3, 2).equations) == 2
    with pytest.raises(OdoError) as e:
        gd_system(2, 4)
    assert e.value.code == "M_MULTIPLE_OF_N"


def test_gd23_vanishes_at_schroedinger(examples):
    L = examples["SchrL"]
    sol = commuting_of_order(L, 3)
    consts = {int(k[1:]): v for k, v in sol.constants.items()}
    vals = gd_system(2, 3).evaluate({2: -2 / X ** 2}, consts)
    assert all(not v for v in vals)
    # direct route: P3 + c1*P1 with u2 = -2/x^2 commutes with L
    P3, _ = almost_commuting(2, 3)
    P1, _ = almost_commuting(2, 1)
    A = evaluate_operator(P3, {2: -2 / X ** 2}, K) + evaluate_operator(P1, {2: -2 / X ** 2}, K).scale(
        consts.get(1, 0))
    assert not commutator(A, L)
