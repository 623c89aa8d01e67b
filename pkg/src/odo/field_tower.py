"""Computable differential coefficient fields.

Four towers are supported:

* ``QQ``: the rationals, represented by :class:`fractions.Fraction` (all constants);
* ``ratfunc_x()``: Q(x) with d/dx;
* ``hyperbolic()``: Q<cosh x> as Q(eta)[eta'] / (eta'^2 - eta^2 + 1), with
  eta' = d(eta)/dx and d(eta') = eta;
* ``const_ext(base, "s", ...)``: base(s1, ..., sk) with every s_j a constant.

Elements are immutable and always kept in canonical form (reduced fraction,
monic denominator), so equality is structural and zero testing is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from odo.errors import OdoError

RATIONAL = "RATIONAL"
RATFUNC_X = "RATFUNC_X"
HYPERBOLIC = "HYPERBOLIC"
CONST_EXT = "CONST_EXT"


# ---------------------------------------------------------------------------
# dense univariate polynomials over a field, as tuples (low degree first)
# ---------------------------------------------------------------------------

def _trim(c: list) -> tuple:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def p_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, c in enumerate(b):
        r[i] = r[i] + c
    return _trim(r)


def p_neg(a: tuple) -> tuple:
    return tuple(-c for c in a)


def p_sub(a: tuple, b: tuple) -> tuple:
    return p_add(a, p_neg(b))


def p_scale(a: tuple, c) -> tuple:
    if not c:
        return ()
    return _trim([x * c for x in a])


def p_mul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1:
        return p_scale(b, a[0])
    if len(b) == 1:
        return p_scale(a, b[0])
    zero = a[-1] * 0
    r = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            r[i + j] = r[i + j] + ai * bj
    return _trim(r)


def p_divmod(a: tuple, b: tuple) -> tuple[tuple, tuple]:
    if not b:
        raise OdoError("DIVISION_BY_ZERO", "polynomial division by zero")
    if len(a) < len(b):
        return (), a
    inv = 1 / b[-1]
    r = list(a)
    nb = len(b)
    q = [None] * (len(a) - nb + 1)
    for k in range(len(a) - nb, -1, -1):
        c = r[k + nb - 1] * inv
        q[k] = c
        if c:
            for j in range(nb):
                r[k + j] = r[k + j] - c * b[j]
    return _trim(q), _trim(r[: nb - 1])


def p_exact_div(a: tuple, b: tuple) -> tuple:
    q, r = p_divmod(a, b)
    if r:
        raise OdoError("INEXACT_DIVISION", "polynomial division leaves a remainder")
    return q


def p_monic(a: tuple) -> tuple:
    if not a or a[-1] == 1:
        return a
    inv = 1 / a[-1]
    return tuple(c * inv for c in a)


def p_gcd(a: tuple, b: tuple) -> tuple:
    """Monic gcd (the empty tuple when both inputs are zero)."""
    if a and b and (_is_single_term(a) or _is_single_term(b)):
        # gcd with c*x^k is a power of x; common for Laurent-type coefficients
        k = min(_low(a), _low(b))
        one = a[-1] / a[-1]
        return (one * 0,) * k + (one,)
    while b:
        a, b = b, p_divmod(a, b)[1]
    return p_monic(a)


def p_deriv(a: tuple) -> tuple:
    return _trim([a[i] * i for i in range(1, len(a))])


def p_eval(a: tuple, v):
    r = a[-1] * 0 if a else 0
    for c in reversed(a):
        r = r * v + c
    return r


def p_format(a: tuple, var: str, coeff_fmt, coeff_is_rational: bool) -> str:
    if not a:
        return "0"
    out = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if coeff_is_rational:
            neg = c < 0
            c = -c if neg else c
            if mono and c == 1:
                body = mono
            elif mono:
                body = f"{_fmt_q(c)}*{mono}"
            else:
                body = _fmt_q(c)
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        else:
            if mono and c == 1:
                body = mono
            else:
                body = f"({coeff_fmt(c)})" + (f"*{mono}" if mono else "")
            out.append(body if not out else f" + {body}")
    return "".join(out)


def _low(a: tuple) -> int:
    return next(i for i, c in enumerate(a) if c)


def _is_single_term(a: tuple) -> bool:
    return sum(1 for c in a if c) == 1


def _fmt_q(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# parents
# ---------------------------------------------------------------------------

def parent_of(a):
    if isinstance(a, (int, Fraction)):
        return QQ
    return a.parent


def derive(a):
    """The derivation of the tower ``a`` lives in."""
    return parent_of(a).derive(a)


class RationalField:
    """Q, the constant field used in place of an algebraically closed C."""

    tag = RATIONAL
    zero = Fraction(0)
    one = Fraction(1)

    @property
    def chain(self) -> tuple:
        return (self,)

    def __call__(self, v) -> Fraction:
        if isinstance(v, Fraction):
            return v
        if isinstance(v, int):
            return Fraction(v)
        p = parent_of(v)
        if hasattr(p, "to_rational"):
            return p.to_rational(v)
        raise OdoError("TOWER_MISMATCH", f"cannot coerce {v!r} into QQ")

    def derive(self, a) -> Fraction:
        return Fraction(0)

    def is_constant(self, a) -> bool:
        return True

    def to_rational(self, a) -> Fraction:
        return Fraction(a)

    def format(self, a) -> str:
        return _fmt_q(a)

    def linear_coordinates(self, values: Sequence) -> list[dict]:
        return [{(): Fraction(v)} if v else {} for v in values]

    def __repr__(self) -> str:
        return "QQ"

    def __reduce__(self):
        return "QQ"


QQ = RationalField()


class _Up(Exception):
    """Raised when the other operand lives in a larger tower."""


def _coerce(parent, other):
    """Coerce ``other`` into ``parent`` for a binary operation.

    Returns NotImplemented for foreign types, raises :class:`_Up` when ``other``
    belongs to a larger tower, and TOWER_MISMATCH for unrelated towers.
    """
    if isinstance(other, (int, Fraction)):
        return parent(other)
    if not getattr(other, "_ring_element", False):
        return NotImplemented
    op = other.parent
    if op == parent:
        return other
    if op in parent.chain:
        return parent(other)
    if parent in getattr(op, "chain", ()):
        raise _Up
    raise OdoError("TOWER_MISMATCH", f"{parent!r} vs {op!r}")


def _lifted(method):
    """Binary operator wrapper: promote self when ``other`` is in a larger tower."""
    name = method.__name__

    def wrapper(self, other):
        try:
            o = _coerce(self.parent, other)
        except _Up:
            return getattr(other.parent(self), name)(other)
        if o is NotImplemented:
            return NotImplemented
        return method(self, o)

    wrapper.__name__ = name
    return wrapper


class _FieldElement:
    __slots__ = ()
    _ring_element = True

    @_lifted
    def __radd__(self, o):
        return o.__add__(self)

    @_lifted
    def __rsub__(self, o):
        return o.__sub__(self)

    @_lifted
    def __rmul__(self, o):
        return o.__mul__(self)

    @_lifted
    def __rtruediv__(self, o):
        return o.__truediv__(self)

    @_lifted
    def __truediv__(self, o):
        return self * o.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.parent.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __ne__(self, other):
        return not self == other

    def derive(self):
        return self.parent.derive(self)

    def __str__(self) -> str:
        return self.parent.format(self)

    def __repr__(self) -> str:
        return f"<{self.parent!r}: {self}>"


# ---------------------------------------------------------------------------
# rational functions in one variable over a field
# ---------------------------------------------------------------------------

class RatFuncField:
    """base(t) for a single symbol t.

    ``var_derivative`` is 1 for t = x (d/dx), 0 for an adjoined constant symbol,
    and None for a plain field with no derivation (used inside the hyperbolic tower).
    """

    def __init__(self, base, var: str, var_derivative):
        self.base = base
        self.var = var
        self.var_derivative = var_derivative
        self._key = (base, var, var_derivative)
        self.zero = RatFunc(self, (), (base.one,))
        self.one = RatFunc(self, (base.one,), (base.one,))
        self.gen = RatFunc(self, (base.zero, base.one), (base.one,))

    @property
    def tag(self) -> str:
        if self.var_derivative == 0:
            return CONST_EXT
        if self.base is QQ and self.var_derivative == 1:
            return RATFUNC_X
        return "RATFUNC"

    @property
    def chain(self) -> tuple:
        return (self,) + self.base.chain

    def symbols(self) -> list[str]:
        """Adjoined constant symbols, innermost first."""
        inner = self.base.symbols() if isinstance(self.base, RatFuncField) else []
        return inner + ([self.var] if self.var_derivative == 0 else [])

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and self._key == other._key

    def __hash__(self):
        return hash(("RatFuncField",) + self._key)

    def __repr__(self) -> str:
        return f"{self.base!r}({self.var})"

    def __reduce__(self):
        return (RatFuncField, self._key)

    def __call__(self, v) -> "RatFunc":
        if isinstance(v, RatFunc) and v.parent == self:
            return v
        p = parent_of(v)
        if p in self.base.chain:
            c = self.base(v)
            return RatFunc(self, (c,) if c else (), (self.base.one,))
        raise OdoError("TOWER_MISMATCH", f"cannot coerce {v!r} into {self!r}")

    def make(self, num: tuple, den: tuple) -> "RatFunc":
        if not den:
            raise OdoError("DIVISION_BY_ZERO", "zero denominator")
        if not num:
            return self.zero
        if len(den) > 1:
            g = p_gcd(num, den)
            if len(g) > 1:
                num = p_exact_div(num, g)
                den = p_exact_div(den, g)
        lc = den[-1]
        if lc != 1:
            inv = 1 / lc
            num = tuple(c * inv for c in num)
            den = tuple(c * inv for c in den)
        return RatFunc(self, num, den)

    def poly(self, coeffs: Iterable) -> "RatFunc":
        c = _trim([self.base(a) for a in coeffs])
        return RatFunc(self, c, (self.base.one,))

    def _pderive(self, p: tuple) -> tuple:
        parts = _trim([self.base.derive(c) for c in p])
        if self.var_derivative:
            parts = p_add(parts, p_scale(p_deriv(p), self.base(self.var_derivative)))
        return parts

    def derive(self, a: "RatFunc") -> "RatFunc":
        if self.var_derivative is None:
            raise OdoError("TOWER_MISMATCH", f"{self!r} carries no derivation")
        dn = self._pderive(a.num)
        if len(a.den) == 1:
            return self.make(dn, a.den)
        dd = self._pderive(a.den)
        return self.make(p_sub(p_mul(dn, a.den), p_mul(a.num, dd)), p_mul(a.den, a.den))

    def formal_derivative(self, a: "RatFunc") -> "RatFunc":
        """d/dt, ignoring any derivation on the base."""
        dn = p_deriv(a.num)
        if len(a.den) == 1:
            return self.make(dn, a.den)
        return self.make(p_sub(p_mul(dn, a.den), p_mul(a.num, p_deriv(a.den))), p_mul(a.den, a.den))

    def is_constant(self, a: "RatFunc") -> bool:
        return not self.derive(a)

    def to_rational(self, a: "RatFunc") -> Fraction:
        if len(a.den) != 1 or len(a.num) > 1:
            raise OdoError("NONCONSTANT", f"{a} is not a rational constant")
        return self.base.to_rational(a.num[0]) if a.num else Fraction(0)

    def is_polynomial(self, a: "RatFunc") -> bool:
        return len(a.den) == 1

    def format(self, a: "RatFunc") -> str:
        rational = self.base is QQ
        num = p_format(a.num, self.var, self.base.format, rational)
        if len(a.den) == 1:
            return num
        den = p_format(a.den, self.var, self.base.format, rational)
        if not _is_single_term(a.num):
            num = f"({num})"
        if not (_is_single_term(a.den) and a.den[-1] == 1 and rational):
            den = f"({den})"
        return f"{num}/{den}"

    def linear_coordinates(self, values: Sequence) -> list[dict]:
        den = (self.base.one,)
        for v in values:
            if len(v.den) > 1:
                den = p_mul(den, p_exact_div(v.den, p_gcd(den, v.den)))
        nums = [p_mul(v.num, p_exact_div(den, v.den)) for v in values]
        top = max((len(n) for n in nums), default=0)
        out: list[dict] = [{} for _ in values]
        for i in range(top):
            column = [n[i] if i < len(n) else self.base.zero for n in nums]
            for k, coords in enumerate(self.base.linear_coordinates(column)):
                for key, c in coords.items():
                    out[k][(self.var, i) + key] = c
        return out


class RatFunc(_FieldElement):
    __slots__ = ("parent", "num", "den")

    def __init__(self, parent: RatFuncField, num: tuple, den: tuple):
        self.parent = parent
        self.num = num
        self.den = den

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other):
        try:
            o = _coerce(self.parent, other)
        except _Up:
            return other.parent(self) == other
        except OdoError:
            return False
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if len(self.den) == 1 and len(self.num) <= 1:
            return hash(self.num[0]) if self.num else 0
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFunc(self.parent, p_neg(self.num), self.den)

    @_lifted
    def __add__(self, o):
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            if len(self.den) == 1:
                return RatFunc(self.parent, p_add(self.num, o.num), self.den)
            return self.parent.make(p_add(self.num, o.num), self.den)
        g = p_gcd(self.den, o.den)
        d1 = p_exact_div(self.den, g)
        d2 = p_exact_div(o.den, g)
        num = p_add(p_mul(self.num, d2), p_mul(o.num, d1))
        return self.parent.make(num, p_mul(self.den, d2))

    @_lifted
    def __sub__(self, o):
        return self + (-o)

    @_lifted
    def __mul__(self, o):
        if not self.num or not o.num:
            return self.parent.zero
        if len(self.den) == 1 and len(o.den) == 1:
            return RatFunc(self.parent, p_mul(self.num, o.num), self.den)
        a, b, c, d = self.num, self.den, o.num, o.den
        g1 = p_gcd(a, d)
        g2 = p_gcd(c, b)
        if len(g1) > 1:
            a, d = p_exact_div(a, g1), p_exact_div(d, g1)
        if len(g2) > 1:
            c, b = p_exact_div(c, g2), p_exact_div(b, g2)
        num = p_mul(a, c)
        den = p_mul(b, d)
        lc = den[-1]
        if lc != 1:
            inv = 1 / lc
            num = tuple(x * inv for x in num)
            den = tuple(x * inv for x in den)
        return RatFunc(self.parent, num, den)

    def inverse(self):
        if not self.num:
            raise OdoError("DIVISION_BY_ZERO", "inverse of zero")
        return self.parent.make(self.den, self.num)

    def __call__(self, v):
        """Evaluate at ``v`` (numerator and denominator by Horner)."""
        d = p_eval(self.den, v)
        if not d:
            raise OdoError("DIVISION_BY_ZERO", "pole at evaluation point")
        return p_eval(self.num, v) / d


# ---------------------------------------------------------------------------
# hyperbolic tower Q(eta)[eta'] with eta'^2 = eta^2 - 1
# ---------------------------------------------------------------------------

class HyperbolicField:
    """Q<eta> for eta = cosh(x): elements a + b*eta' with a, b in Q(eta)."""

    tag = HYPERBOLIC

    def __init__(self):
        self.eta_field = RatFuncField(QQ, "eta", None)
        ef = self.eta_field
        self._rel = ef.poly([-1, 0, 1])  # eta^2 - 1
        self.zero = HypElem(self, ef.zero, ef.zero)
        self.one = HypElem(self, ef.one, ef.zero)
        self.eta = HypElem(self, ef.gen, ef.zero)
        self.eta_prime = HypElem(self, ef.zero, ef.one)

    @property
    def chain(self) -> tuple:
        return (self, QQ)

    def symbols(self) -> list[str]:
        return []

    def __eq__(self, other):
        return isinstance(other, HyperbolicField)

    def __hash__(self):
        return hash("HyperbolicField")

    def __repr__(self) -> str:
        return "QQ<cosh x>"

    def __reduce__(self):
        return (hyperbolic, ())

    def __call__(self, v) -> "HypElem":
        if isinstance(v, HypElem):
            return v
        if isinstance(v, RatFunc) and v.parent == self.eta_field:
            return HypElem(self, v, self.eta_field.zero)
        if isinstance(v, (int, Fraction)):
            return HypElem(self, self.eta_field(v), self.eta_field.zero)
        raise OdoError("TOWER_MISMATCH", f"cannot coerce {v!r} into {self!r}")

    def make(self, a, b) -> "HypElem":
        return HypElem(self, self.eta_field(a), self.eta_field(b))

    def derive(self, z: "HypElem") -> "HypElem":
        ef = self.eta_field
        da = ef.formal_derivative(z.a)
        db = ef.formal_derivative(z.b)
        # d(a + b eta') = a_eta eta' + b_eta eta'^2 + b eta
        return HypElem(self, db * self._rel + z.b * ef.gen, da)

    def is_constant(self, z: "HypElem") -> bool:
        return not z.b and len(z.a.num) <= 1 and len(z.a.den) == 1

    def to_rational(self, z: "HypElem") -> Fraction:
        if not self.is_constant(z):
            raise OdoError("NONCONSTANT", f"{z} is not a rational constant")
        return z.a.num[0] if z.a.num else Fraction(0)

    def format(self, z: "HypElem") -> str:
        if not z.b:
            return str(z.a)
        bpart = "eta'" if z.b == 1 else f"({z.b})*eta'"
        if not z.a:
            return bpart
        return f"{_paren(str(z.a))} + {bpart}"

    def linear_coordinates(self, values: Sequence) -> list[dict]:
        ef = self.eta_field
        ca = ef.linear_coordinates([v.a for v in values])
        cb = ef.linear_coordinates([v.b for v in values])
        out = []
        for x, y in zip(ca, cb):
            d = {("1",) + k: c for k, c in x.items()}
            d.update({("eta'",) + k: c for k, c in y.items()})
            out.append(d)
        return out


def _paren(s: str) -> str:
    return s if s.startswith("(") and s.endswith(")") and s.count("(") == 1 else f"({s})"


class HypElem(_FieldElement):
    __slots__ = ("parent", "a", "b")

    def __init__(self, parent: HyperbolicField, a: RatFunc, b: RatFunc):
        self.parent = parent
        self.a = a
        self.b = b

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        try:
            o = _coerce(self.parent, other)
        except _Up:
            return other.parent(self) == other
        except OdoError:
            return False
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b))

    def __neg__(self):
        return HypElem(self.parent, -self.a, -self.b)

    @_lifted
    def __add__(self, o):
        return HypElem(self.parent, self.a + o.a, self.b + o.b)

    @_lifted
    def __sub__(self, o):
        return HypElem(self.parent, self.a - o.a, self.b - o.b)

    @_lifted
    def __mul__(self, o):
        if not self.b and not o.b:
            return HypElem(self.parent, self.a * o.a, self.b)
        a = self.a * o.a
        if self.b and o.b:
            a = a + self.b * o.b * self.parent._rel
        return HypElem(self.parent, a, self.a * o.b + self.b * o.a)

    def inverse(self):
        if not self:
            raise OdoError("DIVISION_BY_ZERO", "inverse of zero")
        if not self.b:
            return HypElem(self.parent, self.a.inverse(), self.b)
        norm = self.a * self.a - self.b * self.b * self.parent._rel
        inv = norm.inverse()
        return HypElem(self.parent, self.a * inv, -self.b * inv)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def ratfunc_x() -> RatFuncField:
    return RatFuncField(QQ, "x", 1)


@lru_cache(maxsize=None)
def hyperbolic() -> HyperbolicField:
    return HyperbolicField()


def const_ext(base, *symbols: str) -> RatFuncField:
    """Adjoin differential constants ``symbols`` (innermost first) to ``base``."""
    field = base
    for s in symbols:
        field = RatFuncField(field, s, 0)
    return field


def field_from_spec(spec: str, symbols: Sequence[str] = ()):
    """Field named by a CLI/JSON spec: ``ratfunc_x``, ``hyperbolic``, ``rational``."""
    spec = spec.strip().lower()
    if spec in ("ratfunc_x", "x", "qx"):
        base = ratfunc_x()
    elif spec in ("hyperbolic", "cosh", "eta"):
        base = hyperbolic()
    elif spec in ("rational", "qq", "q"):
        base = QQ
    else:
        raise OdoError("UNKNOWN_FIELD", f"unknown field spec {spec!r}")
    return const_ext(base, *symbols) if symbols else base


def field_spec_of(field) -> dict:
    """Inverse of :func:`field_from_spec` for serialization."""
    symbols = field.symbols() if hasattr(field, "symbols") else []
    base = field
    while isinstance(base, RatFuncField) and base.var_derivative == 0:
        base = base.base
    name = {RATFUNC_X: "ratfunc_x", HYPERBOLIC: "hyperbolic", RATIONAL: "rational"}[base.tag]
    return {"field": name, "symbols": symbols}


# ---------------------------------------------------------------------------
# linear systems in unknown constants
# ---------------------------------------------------------------------------

def _affine_split(e, unknowns: Sequence[str]) -> dict:
    """Write ``e`` as {None: v0, c: v_c} with v's free of the unknowns."""
    p = parent_of(e)
    if not (isinstance(p, RatFuncField) and p.var_derivative == 0 and p.var in unknowns):
        return {None: e}
    if len(e.den) > 1:
        raise OdoError("NOT_LINEAR", f"unknown {p.var} occurs in a denominator")
    if len(e.num) > 2:
        raise OdoError("NOT_LINEAR", f"{p.var} occurs with degree >= 2")
    zero = p.base.zero
    const = _affine_split(e.num[0] if e.num else zero, unknowns)
    if len(e.num) == 2:
        lin = _affine_split(e.num[1], unknowns)
        if set(lin) != {None}:
            raise OdoError("NOT_LINEAR", "product of unknowns")
        const[p.var] = lin[None]
    return const


def linear_forms_to_system(forms: Sequence[Sequence], field) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Each form [v0, v1, ..., vk] means v0 + sum c_j v_j = 0 identically in ``field``."""
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for form in forms:
        coords = field.linear_coordinates([field(v) for v in form])
        keys = sorted({k for c in coords for k in c}, key=repr)
        for key in keys:
            rows.append([c.get(key, Fraction(0)) for c in coords[1:]])
            rhs.append(-coords[0].get(key, Fraction(0)))
    return rows, rhs


def linearize(elements: Sequence, unknowns: Sequence[str]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Coefficient matrix and right-hand side for "every element vanishes".

    The elements live in a constant extension containing the ``unknowns``; each
    must be affine-linear in them (NOT_LINEAR otherwise).
    """
    forms = []
    field = None
    for e in elements:
        split = _affine_split(e, unknowns)
        base_parent = parent_of(split[None])
        for v in split.values():
            if parent_of(v) != base_parent:
                raise OdoError("TOWER_MISMATCH", "mixed coefficient fields")
        if field is None or field == QQ:
            field = base_parent
        zero = field.zero if field is not None else Fraction(0)
        forms.append([split.get(None, zero)] + [split.get(c, zero) for c in unknowns])
    if field is None:
        return [], []
    return linear_forms_to_system(forms, field)


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int | None = None):
    """Solve over Q. Returns (particular solution, nullspace basis); raises INCONSISTENT."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    for row in m[r:]:
        if row[-1]:
            raise OdoError("INCONSISTENT", "linear system has no solution")
    particular = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        particular[col] = m[i][-1]
    free = [c for c in range(ncols) if c not in pivots]
    nullspace = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -m[i][f]
        nullspace.append(v)
    return particular, nullspace
