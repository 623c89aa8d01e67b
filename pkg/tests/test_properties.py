"""Property suites for the core invariants (randomized, exact arithmetic)."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from odo.curves import reduce_mod_curve
from odo.dres import bareiss_det
from odo.formal import DiffPolyRing, PsdOp, almost_commuting, nth_root, psdo_pow
from odo.field_tower import ratfunc_x
from odo.multipoly import MultiPoly, PolyRing
from odo.operators import DiffOp, commutator, right_divide
from oracles import cofactor_det
import shared

K = ratfunc_x()
X = K.gen
Dx = DiffOp.D(K)

small = st.integers(-5, 5)
dens = st.sampled_from([(1,), (0, 1), (1, 1), (0, 0, 1), (-2, 0, 1)])
elements = st.tuples(st.lists(small, min_size=1, max_size=3), dens).map(lambda t: K.poly(t[0]) / K.poly(t[1]))
ops = st.lists(elements, min_size=1, max_size=4).map(lambda cs: DiffOp(K, cs))


# (a) Leibniz rule, associativity and the division identity
@settings(max_examples=200)
@given(ops, ops, ops, elements)
def test_core_ring_identities(P, Q, R, a):
    A = DiffOp.scalar(K, a)
    assert Dx * A == a * Dx + K.derive(a)
    assert (P * Q) * R == P * (Q * R)
    assert P * (Q + R) == P * Q + P * R
    if Q:
        q, r = right_divide(P, Q)
        assert q * Q + r == P
        assert r.order < Q.order
    if P and Q:
        assert (P * Q).order == P.order + Q.order


# (b) Bareiss against cofactor expansion
ints = st.integers(-9, 9)


def square(entry):
    return st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(entry, min_size=n, max_size=n),
                                                        min_size=n, max_size=n))


@settings(max_examples=100)
@given(square(ints))
def test_bareiss_integer_matrices(M):
    assert bareiss_det(M) == cofactor_det(M)


@settings(max_examples=40)
@given(square(st.one_of(elements, st.just(K.zero))))
def test_bareiss_ratfunc_matrices(M):
    assert bareiss_det(M) == cofactor_det(M)


# (c) (L^(1/n))^n = L down to the truncation
def normal_forms(n):
    return st.lists(elements, min_size=n - 1, max_size=n - 1).map(
        lambda cs: DiffOp(K, list(cs) + [K.zero, K.one]))


@pytest.mark.parametrize("n", [2, 3])
@settings(max_examples=5)
@given(data=st.data())
def test_root_power_identity(n, data):
    L = data.draw(normal_forms(n))
    floor = data.draw(st.integers(-6, -1))
    R = nth_root(L, floor)
    keep = n - 1 + floor
    assert psdo_pow(R, n, keep) == PsdOp.from_diffop(L, keep)


# (d) ord([P_m, L]) <= n - 2
@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("m", range(1, 8))
def test_almost_commuting_order_drop(n, m):
    P, H = almost_commuting(n, m)
    L = DiffPolyRing(n).formal_operator()
    C = commutator(P, L)
    assert C.order <= n - 2
    assert P.order == m and P.lc() == 1
    assert [C.coeff(k) for k in range(n - 1)] == H


# (e) checks recorded by every global gcrd
@pytest.mark.parametrize("name", ["euler", "schr", "cosh", "o5"])
def test_global_gcrd_checks(name):
    F = shared.factor(name)
    assert F.checks["zero_remainder"] is True
    assert F.checks["order_equals_rank"] is True
    assert F.order == shared.curve(name).rank


# (f) reduction modulo the curve: idempotent and compatible with the derivation
def random_poly(ring, draw):
    nv = ring.nvars
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, 5)] * nv), elements, max_size=5))
    return MultiPoly(ring, {e: c for e, c in terms.items() if c})


@pytest.mark.parametrize("name", ["euler", "schr", "cosh", "o5"])
@settings(max_examples=100)
@given(data=st.data())
def test_reduction_idempotent_and_differential(name, data):
    c = shared.curve(name)
    ring = PolyRing(K, c.variable_names, c.term_order)
    p = random_poly(ring, data.draw)
    r = reduce_mod_curve(p, c)
    assert reduce_mod_curve(r, c) == r
    assert reduce_mod_curve(ring.derive(p), c) == reduce_mod_curve(ring.derive(r), c)
