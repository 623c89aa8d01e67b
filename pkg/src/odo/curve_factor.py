"""Right factors of L - lambda over the function field of a spectral curve.

Elements of Sigma(Gamma) are fractions of normal forms modulo the curve ideal.
Divisibility checks avoid fractions altogether: a pseudo-remainder is computed
in Sigma[Gamma][D] by scaling with the leading minor, which is nonzero on the
curve, and reduced modulo the ideal at every step.

The generators of a space curve need not generate the whole kernel of the
substitution map (lambda, mu_i) -> (L, A_i).  When the operators are known,
vanishing on the curve is therefore decided by that map: a polynomial over
Sigma vanishes iff each of its rational coordinate polynomials substitutes to
the zero operator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from odo.curves import SpectralCurve, reduce_mod_curve
from odo.dres import subresultant
from odo.errors import OdoError
from odo.field_tower import QQ, RatFuncField, const_ext, parent_of
from odo.multipoly import MultiPoly, PolyRing, normal_form
from odo.operators import DiffOp, op_mul, right_divide


# ---------------------------------------------------------------------------
# the function field of the curve
# ---------------------------------------------------------------------------

class CurveField:
    """Fractions over Sigma[vars]/[ideal]."""

    _ring_element = False

    def __init__(self, curve: SpectralCurve, field, ops: Sequence[DiffOp] | None = None):
        self.curve = curve
        self.field = field
        self.ring = PolyRing(field, curve.variable_names, curve.term_order)
        self.basis = [self.ring(g) for g in curve.groebner_basis]
        self.ops = [op.change_ring(field) for op in ops] if ops is not None else None
        self._mono_ops: dict = {}
        self.zero = CurveFraction(self, self.ring.zero, self.ring.one)
        self.one = CurveFraction(self, self.ring.one, self.ring.one)

    def __eq__(self, other):
        return self is other or (isinstance(other, CurveField) and other.field == self.field
                                 and other.ring == self.ring
                                 and [str(g) for g in other.basis] == [str(g) for g in self.basis])

    def __hash__(self):
        return hash(("CurveField", self.ring))

    def __repr__(self) -> str:
        return f"{self.field!r}(Gamma[{','.join(self.ring.names)}])"

    @property
    def chain(self) -> tuple:
        return (self,) + self.field.chain

    def reduce(self, p: MultiPoly) -> MultiPoly:
        return normal_form(self.ring(p) if p.ring.names == self.ring.names else self.ring.embed(p), self.basis)

    def _monomial_op(self, e: tuple) -> DiffOp:
        if e not in self._mono_ops:
            if not any(e):
                op = DiffOp.scalar(self.field, self.field.one)
            else:
                i = max(j for j, a in enumerate(e) if a)
                prev = e[:i] + (e[i] - 1,) + e[i + 1:]
                op = self._monomial_op(prev) * self.ops[i]
            self._mono_ops[e] = op
        return self._mono_ops[e]

    def is_zero(self, p: MultiPoly) -> bool:
        """Does p vanish on the curve?"""
        r = self.reduce(p)
        if not r:
            return True
        if self.ops is None:
            return False
        exps = list(r.terms)
        coords = self.field.linear_coordinates([r.terms[e] for e in exps])
        keys = {k for c in coords for k in c}
        for key in keys:
            total = DiffOp(self.field)
            for e, c in zip(exps, coords):
                q = c.get(key)
                if q:
                    total = total + self._monomial_op(e).scale(q)
            if total:
                return False
        return True

    def __call__(self, v) -> "CurveFraction":
        if isinstance(v, CurveFraction):
            if v.parent is not self and v.parent != self:
                raise OdoError("DOMAIN_MISMATCH", f"{v.parent!r} vs {self!r}")
            return v
        if isinstance(v, MultiPoly):
            return CurveFraction(self, self.reduce(v), self.ring.one)
        return CurveFraction(self, self.ring(v), self.ring.one)

    def fraction(self, num: MultiPoly, den: MultiPoly) -> "CurveFraction":
        d = self.reduce(den)
        if self.is_zero(d):
            raise OdoError("DIVISION_BY_ZERO", "denominator vanishes on the curve")
        return CurveFraction(self, self.reduce(num), d)

    def derive(self, a: "CurveFraction") -> "CurveFraction":
        d = self.ring.derive
        if a.den == 1:
            return CurveFraction(self, d(a.num), a.den)
        num = self.reduce(d(a.num) * a.den - a.num * d(a.den))
        return CurveFraction(self, num, self.reduce(a.den * a.den))

    def is_constant(self, a) -> bool:
        return not self.derive(a)

    def format(self, a) -> str:
        return str(a)


class CurveFraction:
    __slots__ = ("parent", "num", "den")
    _ring_element = True

    def __init__(self, parent: CurveField, num: MultiPoly, den: MultiPoly):
        self.parent = parent
        self.num = num
        self.den = den

    def _co(self, o) -> "CurveFraction":
        return self.parent(o)

    def __bool__(self) -> bool:
        return not self.parent.is_zero(self.num)

    def __eq__(self, other):
        try:
            o = self._co(other)
        except OdoError:
            return False
        return self.parent.is_zero(self.num * o.den - o.num * self.den)

    def __hash__(self):
        return 0

    def __neg__(self):
        return CurveFraction(self.parent, -self.num, self.den)

    def __add__(self, other):
        if isinstance(other, DiffOp):
            return NotImplemented
        o = self._co(other)
        P = self.parent
        if self.den == o.den:
            return CurveFraction(P, self.num + o.num, self.den)
        return CurveFraction(P, P.reduce(self.num * o.den + o.num * self.den), P.reduce(self.den * o.den))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DiffOp):
            return NotImplemented
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return CurveFraction(self.parent, self.num.scale(other), self.den) if other else self.parent.zero
        o = self._co(other)
        P = self.parent
        den = self.den if o.den == 1 else (o.den if self.den == 1 else P.reduce(self.den * o.den))
        return CurveFraction(P, P.reduce(self.num * o.num), den)

    __rmul__ = __mul__

    def inverse(self) -> "CurveFraction":
        if not self:
            raise OdoError("DIVISION_BY_ZERO", "inverse of zero in the curve field")
        return CurveFraction(self.parent, self.den, self.num)

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, k: int):
        out = self.parent.one
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def derive(self):
        return self.parent.derive(self)

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"CurveFraction({self})"


# ---------------------------------------------------------------------------
# global gcrd
# ---------------------------------------------------------------------------

@dataclass
class GlobalFactor:
    curve: SpectralCurve
    ops: list
    rank: int
    raw: DiffOp            # subresultant over Sigma[vars] (unnormalized)
    operator: DiffOp       # monic, over CurveField
    phi_r: MultiPoly       # leading minor
    verified: bool
    checks: dict = dc_field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.operator.order

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coefficients": [str(c) for c in self.operator.coeffs],
            "curve": self.curve.to_json(),
            "verified": self.verified,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _embed_op(op: DiffOp, ring: PolyRing) -> DiffOp:
    return DiffOp(ring, [ring.embed(c) for c in op.coeffs])


def pseudo_remainder(M: DiffOp, F: DiffOp, reduce) -> DiffOp:
    """r with lc(F)^k * M = q*F + r, all coefficients reduced by ``reduce``."""
    ring = F.parent
    M = M.map_coeffs(reduce)
    lcF = F.lc()
    r = F.order
    D = DiffOp.D(ring)
    while M.order >= r:
        d = M.order - r
        c = M.lc()
        shifted = op_mul(D ** d, F) if d else F
        diff = [reduce(lcF * M.coeff(i) - c * shifted.coeff(i)) for i in range(M.order)]
        M = DiffOp._raw(ring, diff)
    return M


def _spectral_pairs(curve: SpectralCurve, ops: Sequence[DiffOp]):
    names = curve.variable_names
    if curve.is_planar:
        if len(ops) != 2:
            raise OdoError("ARITY_MISMATCH", "a planar curve needs two operators")
        return [(ops[0], ops[1], (names[0], names[1]))]
    if len(ops) != 3:
        raise OdoError("ARITY_MISMATCH", "a space curve needs three operators")
    return [(ops[0], ops[1], (names[0], names[1])), (ops[0], ops[2], (names[0], names[2]))]


def global_gcrd(curve: SpectralCurve, ops: Sequence[DiffOp]) -> GlobalFactor:
    """Monic gcrd of (op_i - var_i) over the curve field, from the order-r subresultant."""
    ops = list(ops)
    field = ops[0].parent
    for op in ops[1:]:
        field = op._lift(DiffOp.scalar(field, field.one))[0].parent
    ops = [op.change_ring(field) for op in ops]
    r = curve.rank
    K = CurveField(curve, field, ops)
    ring = K.ring
    pairs = _spectral_pairs(curve, ops)
    checks: dict = {}

    raws = []
    for P, Q, names in pairs:
        if r > min(P.order, Q.order) - 1:
            raise OdoError("K_OUT_OF_RANGE", f"rank {r} too large for orders {P.order}, {Q.order}")
        raws.append(_embed_op(subresultant(P, Q, r, names), ring))
        for k in range(r):
            lower = _embed_op(subresultant(P, Q, k, names), ring)
            checks.setdefault("lower_subresultants_vanish", True)
            if not all(K.is_zero(c) for c in lower.coeffs):
                checks["lower_subresultants_vanish"] = False
    raw = raws[0]
    phi_r = raw.coeff(r)
    if raw.order != r or K.is_zero(phi_r):
        raise OdoError("LEADING_COEFF_IN_IDEAL", "leading minor vanishes on the curve")
    monic = DiffOp(K, [K.fraction(c, phi_r) for c in raw.coeffs[:-1]] + [K.one])

    if len(raws) > 1:
        other = raws[1]
        if other.order != r or K.is_zero(other.coeff(r)):
            raise OdoError("LEADING_COEFF_IN_IDEAL", "leading minor of the second pair vanishes on the curve")
        agree = all(K.is_zero(raw.coeff(i) * other.coeff(r) - other.coeff(i) * phi_r) for i in range(r))
        checks["pairs_agree"] = agree
        if not agree:
            raise OdoError("REMAINDER_NONZERO", "the two pairwise subresultants give different factors")

    variables = ring.gens
    for op, var in zip(ops, variables):
        M = DiffOp(ring, [ring(c) for c in op.coeffs]) - var
        rem = pseudo_remainder(M, raw, K.reduce)
        if not all(K.is_zero(c) for c in rem.coeffs):
            raise OdoError("REMAINDER_NONZERO", f"factor does not right-divide an operator minus {var}")
    checks["zero_remainder"] = True
    checks["order_equals_rank"] = monic.order == r
    return GlobalFactor(curve, ops, r, raw, monic, phi_r, True, checks)


def singular_set(curve: SpectralCurve, F: GlobalFactor) -> MultiPoly:
    """phi_r: the points of the curve where it vanishes identically form Z."""
    return F.phi_r


def point_in_Z(F: GlobalFactor, point: Sequence) -> bool:
    return not F.phi_r.evaluate([Fraction(v) for v in point])


def _rank_q(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def is_singular_point(curve: SpectralCurve, point: Sequence) -> bool:
    """Jacobian criterion for a curve (codimension nvars - 1)."""
    pt = [Fraction(v) for v in point]
    jac = [[g.derivative(i).evaluate(pt) for i in range(len(pt))] for g in curve.generators]
    return _rank_q(jac) < len(pt) - 1


@dataclass
class Specialization:
    point: tuple
    factor: DiffOp       # monic right factor over Sigma
    raw: DiffOp          # specialized subresultant before normalization
    cofactors: list      # N_i with op_i - point_i = N_i * factor
    singular_point: bool

    def to_json(self) -> dict:
        return {
            "order": self.factor.order,
            "coefficients": [str(c) for c in self.factor.coeffs],
            "point": [str(Fraction(v)) for v in self.point],
            "verified": True,
        }


def specialize(ops: Sequence[DiffOp], F: GlobalFactor, point: Sequence) -> Specialization:
    pt = tuple(Fraction(v) for v in point)
    curve = F.curve
    if len(pt) != len(curve.variable_names):
        raise OdoError("ARITY_MISMATCH", f"point needs {len(curve.variable_names)} coordinates")
    if not curve.contains(pt):
        raise OdoError("POINT_NOT_ON_CURVE", f"{tuple(map(str, pt))} is not on the curve")
    field = F.ops[0].parent
    if not F.phi_r.evaluate(list(pt)):
        raise OdoError("POINT_IN_Z", f"leading minor vanishes at {tuple(map(str, pt))}")
    raw = DiffOp(field, [c.evaluate(list(pt)) for c in F.raw.coeffs])
    factor = raw.monic()
    cofactors = []
    for op, v in zip(ops, pt):
        q, rem = right_divide(op.change_ring(field) - v, factor)
        if rem:
            raise OdoError("REMAINDER_NONZERO", f"specialized factor does not divide the operator minus {v}")
        cofactors.append(q)
    return Specialization(pt, factor, raw, cofactors, is_singular_point(curve, pt))


# ---------------------------------------------------------------------------
# rational parametrizations
# ---------------------------------------------------------------------------

@dataclass
class ParamFactor:
    """Factor along a parametrization, kept over Sigma[s] without normalization.

    ``operator`` = sum Phi_j D^j is a constant multiple of the subresultant
    evaluated at chi(s); for order 1 it equals Phi_1*(D - phi) with
    phi = phi_num/phi_den.
    """

    operator: DiffOp
    phi_num: MultiPoly | None
    phi_den: MultiPoly | None
    values: tuple        # (p_1, ..., p_k, Delta): chi_i = p_i/Delta
    cofactors: list
    verified: bool

    @property
    def order(self) -> int:
        return self.operator.order

    def phi_equals(self, num, den) -> bool:
        """phi == num/den, by cross multiplication in Sigma[s]."""
        ring = self.operator.parent
        return self.phi_num * ring(den) == ring(num) * self.phi_den

    def monic(self):
        """Monic form over Sigma(s); may be slow for large coefficient towers."""
        ring = self.operator.parent
        K = const_ext(ring.field, ring.names[0])
        s = K.gen
        coeffs = [c.evaluate([s], one=K.one) for c in self.operator.coeffs]
        return DiffOp(K, coeffs).monic()

    def to_json(self) -> dict:
        out = {
            "order": self.order,
            "coefficients": [str(c) for c in self.operator.coeffs],
            "parametrization": [f"({p})/({self.values[-1]})" for p in self.values[:-1]],
            "verified": self.verified,
        }
        if self.phi_num is not None:
            out["phi"] = f"({self.phi_num})/({self.phi_den})"
        return out


def _to_qs(v, Q_s):
    """Read a parametrization entry as an element of Q(s)."""
    if isinstance(v, str):
        from odo.expr import parse_scalar
        return parse_scalar(v, Q_s)
    if isinstance(v, MultiPoly):
        if v.ring.names != (Q_s.var,) or v.ring.field is not QQ:
            raise OdoError("DOMAIN_MISMATCH", f"expected a polynomial in {Q_s.var} over Q")
        top = max((e[0] for e in v.terms), default=0)
        return Q_s.poly([v.terms.get((k,), 0) for k in range(top + 1)])
    p = parent_of(v)
    if p is QQ:
        return Q_s(v)
    if isinstance(p, RatFuncField) and p.var == Q_s.var and p.var_derivative == 0 and p.base is QQ:
        return v
    raise OdoError("DOMAIN_MISMATCH", f"cannot read {v!r} as a rational function of {Q_s.var}")


def substitute_parametrization(curve: SpectralCurve, param: Sequence, F: GlobalFactor,
                               symbol: str = "s") -> ParamFactor:
    """Replace the spectral variables by rational functions chi_i(s) of a constant s.

    With chi_i = p_i/Delta every check is a polynomial identity in Sigma[s]:
    Delta^N * F(chi) and Delta*(A_i - chi_i) have polynomial coefficients.
    """
    from odo.field_tower import p_exact_div, p_gcd, p_mul

    field = F.ops[0].parent
    nv = len(curve.variable_names)
    if len(param) != nv:
        raise OdoError("ARITY_MISMATCH", f"parametrization needs {nv} entries")
    Q_s = const_ext(QQ, symbol)
    chi = [_to_qs(v, Q_s) for v in param]
    delta = (Fraction(1),)
    for c in chi:
        delta = p_mul(delta, p_exact_div(c.den, p_gcd(delta, c.den)))
    nums = [p_mul(c.num, p_exact_div(delta, c.den)) for c in chi]

    def to_q_poly(t: tuple) -> MultiPoly:
        return MultiPoly(qring, {(k,): Fraction(a) for k, a in enumerate(t) if a})

    qring = PolyRing(QQ, (symbol,))
    P = [to_q_poly(t) for t in nums]
    Dl = to_q_poly(delta)
    dpow = [qring.one]

    def hom_eval(g: MultiPoly, N: int, ring: PolyRing) -> MultiPoly:
        """Delta^N * g(p/Delta) for total degree of g at most N."""
        while len(dpow) <= N:
            dpow.append(dpow[-1] * Dl)
        total = ring.zero
        for e, c in g.terms.items():
            t = dpow[N - sum(e)]
            for pi, k in zip(P, e):
                if k:
                    t = t * pi ** k
            total = total + ring(t) * c if ring.field is not QQ else total + t.scale(c)
        return total

    for g in curve.generators:
        if hom_eval(g, g.total_degree(), qring):
            raise OdoError("PARAM_NOT_ON_CURVE", f"generator {g} does not vanish")
    ring = PolyRing(field, (symbol,))
    N = max(c.total_degree() for c in F.raw.coeffs if c)
    coeffs = [hom_eval(c, N, ring) for c in F.raw.coeffs]
    if not coeffs[-1]:
        raise OdoError("POINT_IN_Z", "leading minor vanishes identically along the parametrization")
    op = DiffOp(ring, coeffs)
    cofactors = []
    for A, p in zip(F.ops, P):
        M = DiffOp(ring, [ring(c) * ring(Dl) for c in A.change_ring(field).coeffs]) - ring(p)
        rem = pseudo_remainder(M, op, lambda c: c)
        if rem:
            raise OdoError("REMAINDER_NONZERO", "parametrized factor does not divide")
    phi_num = phi_den = None
    if op.order == 1:
        phi_num, phi_den = -coeffs[0], coeffs[1]
    return ParamFactor(op, phi_num, phi_den, tuple(P) + (Dl,), cofactors, True)
