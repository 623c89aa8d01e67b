import warnings

import pytest

from odo.curves import (SPACE_NAMES, RankWarning, SpectralCurve, bc_curve, detect_power, groebner, in_ideal,
                        operator_substitute, planar_bc, reduce_mod_curve, space_bc, squarefree_part)
from odo.errors import OdoError
from odo.field_tower import QQ, ratfunc_x
from odo.multipoly import PolyRing, parse_poly
from odo.operators import DiffOp

R2 = PolyRing(QQ, ("lambda", "mu"))
R3 = PolyRing(QQ, SPACE_NAMES)

EX3GEN = [
    "lambda^4 - mu1^3 - 4*lambda^2*mu1 - 64/27*lambda^2",
    "lambda^5 - mu2^3 + 16/3*mu2*lambda^2 + 4096/729*lambda",
    # the last term is in mu1; see the notes on the displayed version
    "mu2^4 - mu1^5 - 20/3*mu2^2*mu1^2 - 64/9*mu1^4 - 704/27*mu2^2*mu1 - 2048/81*mu1^3 - 4096/243*mu2^2"
    " - 32768/729*mu1^2 - 262144/6561*mu1",
]


def same_up_to_unit(a, b):
    return a.monic() == b.monic()


def test_squarefree_and_power():
    f = parse_poly("mu^2 - lambda^3", R2)
    h = f ** 2
    assert same_up_to_unit(squarefree_part(h), f)
    assert detect_power(h, f) == 2
    assert detect_power(h.scale(7), f) == 2
    assert detect_power(f * parse_poly("mu", R2), f) is None
    with pytest.raises(OdoError):
        squarefree_part(R2.zero)


def test_planar_schroedinger(examples):
    c = planar_bc(examples["SchrL"], examples["SchrA"])
    assert c.is_planar and c.rank == 1
    assert same_up_to_unit(c.generators[0], parse_poly("mu^2 - lambda^3", R2))


def test_planar_euler_rank_two(examples):
    c = planar_bc(examples["EulerL4"], examples["EulerB6"])
    assert c.rank == 2
    assert same_up_to_unit(c.generators[0], parse_poly("lambda^3 - mu^2", R2))


def test_planar_errors(examples, Dx, x):
    L = examples["SchrL"]
    with pytest.raises(OdoError) as e:
        planar_bc(L, L)
    assert e.value.code == "NOT_APPLICABLE"
    with pytest.raises(OdoError) as e:
        planar_bc(L, Dx ** 3 + x)
    assert e.value.code == "NOT_COMMUTING"


def test_space_curve_cosh(examples):
    L, A1, A2 = examples["Ex3genL"], examples["Ex3genA1"], examples["Ex3genA2"]
    c = space_bc(L, A1, A2)
    assert c.rank == 1
    for g, text in zip(c.generators, EX3GEN):
        assert same_up_to_unit(g, parse_poly(text, R3))
    for g in c.generators:
        assert not operator_substitute(g, [L, A1, A2])


def test_displayed_last_term_of_f3_is_not_a_bc_polynomial(examples):
    R = PolyRing(QQ, ("mu1", "mu2"))
    shown = parse_poly(EX3GEN[2].replace("262144/6561*mu1", "262144/6561*mu2"), R)
    assert operator_substitute(shown, [examples["Ex3genA1"], examples["Ex3genA2"]])


def test_order5_space_curve_and_ideal_gap(examples):
    L, A1, A3 = examples["ExO5L"], examples["ExO5A1"], examples["ExO5A3"]
    c = space_bc(L, A1, A3)
    expected = ["lambda^6 - mu1^5", "lambda^8 - mu2^5", "mu2^3 - mu1^4"]
    for g, text in zip(c.generators, expected):
        assert same_up_to_unit(g, parse_poly(text, R3))
    # A3^2 = L^2 A1, so this is a BC polynomial, but it is not in (f1, f2, f3)
    g = parse_poly("mu2^2 - lambda^2*mu1", R3)
    assert A3 * A3 == L * L * A1
    assert not operator_substitute(g, [L, A1, A3])
    assert not in_ideal(g, c)


def test_degenerate_triple(examples):
    L, A = examples["SchrL"], examples["SchrA"]
    c = space_bc(L, A, A * A)
    assert same_up_to_unit(c.generators[2], parse_poly("mu2 - mu1^2", R3))


def test_rank_warning(examples):
    L, B = examples["EulerL4"], examples["EulerB6"]
    with pytest.warns(RankWarning):
        c = space_bc(L, B, L * B)
    assert c.rank == 2


def test_bc_curve_dispatch(examples):
    L, A = examples["SchrL"], examples["SchrA"]
    assert bc_curve([L, A]).is_planar
    with pytest.raises(OdoError) as e:
        bc_curve([L, A, A * A, L * A])
    assert e.value.code == "UNSUPPORTED_GENERATORS"


def test_operator_substitute_arity(examples):
    with pytest.raises(OdoError) as e:
        operator_substitute(parse_poly("lambda", R2), [examples["SchrL"]])
    assert e.value.code == "ARITY_MISMATCH"


def test_json_round_trip(examples):
    c = planar_bc(examples["SchrL"], examples["SchrA"])
    d = SpectralCurve.from_json(c.to_json())
    assert d.generators == c.generators and d.rank == c.rank


def test_reduce_mod_curve_over_sigma():
    K = ratfunc_x()
    c = SpectralCurve([parse_poly("mu^2 - lambda^3", R2)], [parse_poly("mu^2 - lambda^3", R2)], 1,
                      ("lambda", "mu"))
    R = PolyRing(K, ("lambda", "mu"))
    lam, mu = R.gen("lambda"), R.gen("mu")
    x = K.gen
    p = mu ** 2 * x - lam ** 3 * x + lam
    assert reduce_mod_curve(p, c) == lam


def test_groebner_is_reduced():
    gens = [parse_poly(t, R3) for t in EX3GEN]
    G = groebner(gens)
    assert len(G) == 13
    for i, g in enumerate(G):
        assert g.lc() == 1
        others = G[:i] + G[i + 1:]
        assert all(not all(a <= b for a, b in zip(h.lm(), e)) for h in others for e in g.terms)
