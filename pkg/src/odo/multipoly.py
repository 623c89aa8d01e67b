"""Sparse multivariate polynomials over a coefficient field.

Used for the spectral variables (lambda, mu_1, ...) with coefficients either in
Q or in a differential field.  Terms are a dict from exponent tuples to
nonzero coefficients; the monomial order belongs to the ring.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Sequence

from odo.errors import OdoError
from odo.field_tower import QQ, _fmt_q, parent_of

DEFAULT_ORDER = "grevlex"


class TermOrder:
    """Monomial order given by name: lex, grlex, grevlex, or weighted:w1,w2,...

    A weighted order compares the weighted degree first and breaks ties with grevlex.
    """

    def __init__(self, spec: str | None = None):
        spec = (spec or os.environ.get("ODO_TERM_ORDER") or DEFAULT_ORDER).strip().lower()
        self.spec = spec
        if spec == "lex":
            self.key = lambda e: e
        elif spec == "grlex":
            self.key = lambda e: (sum(e), e)
        elif spec == "grevlex":
            self.key = lambda e: (sum(e), tuple(-a for a in reversed(e)))
        elif spec.startswith("weighted:"):
            w = tuple(int(t) for t in spec.split(":", 1)[1].split(","))
            if any(a <= 0 for a in w):
                raise OdoError("BAD_TERM_ORDER", "weights must be positive")
            self.weights = w
            self.key = lambda e: (sum(a * b for a, b in zip(w, e)), sum(e), tuple(-a for a in reversed(e)))
        else:
            raise OdoError("BAD_TERM_ORDER", f"unknown term order {spec!r}")

    def __eq__(self, other):
        return isinstance(other, TermOrder) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"TermOrder({self.spec!r})"


class PolyRing:
    """K[v_1, ..., v_k] with a fixed monomial order."""

    def __init__(self, field, names: Sequence[str], order: str | TermOrder | None = None):
        self.field = field
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.order = order if isinstance(order, TermOrder) else TermOrder(order)
        self._key = (field, self.names, self.order.spec)
        self.zero = MultiPoly(self, {})
        self.one = MultiPoly(self, {(0,) * self.nvars: field.one})
        self.gens = tuple(
            MultiPoly(self, {tuple(int(i == j) for j in range(self.nvars)): field.one})
            for i in range(self.nvars)
        )

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key == other._key

    def __hash__(self):
        return hash(("PolyRing",) + self._key)

    def __repr__(self) -> str:
        return f"{self.field!r}[{','.join(self.names)}]"

    @property
    def chain(self) -> tuple:
        return (self,) + self.field.chain

    def __call__(self, v) -> "MultiPoly":
        if isinstance(v, MultiPoly):
            if v.ring == self:
                return v
            if v.ring.names == self.names:
                return MultiPoly(self, {e: self.field(c) for e, c in v.terms.items()})
            raise OdoError("DOMAIN_MISMATCH", f"{v.ring!r} vs {self!r}")
        c = self.field(v)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def with_field(self, field) -> "PolyRing":
        return PolyRing(field, self.names, self.order)

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.field, self.names, order)

    def gen(self, name: str) -> "MultiPoly":
        return self.gens[self.names.index(name)]

    def from_terms(self, terms: dict) -> "MultiPoly":
        return MultiPoly(self, {e: self.field(c) for e, c in terms.items() if c})

    def derive(self, p: "MultiPoly") -> "MultiPoly":
        """Coefficient-wise derivation; the ring variables are constants."""
        d = self.field.derive
        return MultiPoly(self, {e: dc for e, c in p.terms.items() if (dc := d(c))})

    def is_constant(self, p: "MultiPoly") -> bool:
        return not self.derive(p)

    def format(self, p: "MultiPoly") -> str:
        return str(p)

    def embed(self, p: "MultiPoly") -> "MultiPoly":
        """Map ``p`` from a ring whose variable names are a subset of ours."""
        idx = [self.names.index(n) for n in p.ring.names]
        terms = {}
        for e, c in p.terms.items():
            ne = [0] * self.nvars
            for i, a in zip(idx, e):
                ne[i] = a
            terms[tuple(ne)] = self.field(c)
        return MultiPoly(self, terms)


def _fmt_mono(names, e) -> str:
    parts = []
    for n, a in zip(names, e):
        if a == 1:
            parts.append(n)
        elif a:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


class MultiPoly:
    __slots__ = ("ring", "terms", "_lm")
    _ring_element = True

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    @property
    def parent(self) -> PolyRing:
        return self.ring

    # -- structure -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def lm(self) -> tuple:
        if self._lm is None:
            if not self.terms:
                raise OdoError("ZERO_INPUT", "leading monomial of zero")
            self._lm = max(self.terms, key=self.ring.order.key)
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: self.ring.order.key(t[0]), reverse=True)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: int | str) -> int:
        i = var if isinstance(var, int) else self.ring.names.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> list[int]:
        return [i for i in range(self.ring.nvars) if any(e[i] for e in self.terms)]

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def coefficients(self) -> list:
        return list(self.terms.values())

    def map_coeffs(self, f: Callable, ring: PolyRing | None = None) -> "MultiPoly":
        ring = ring or self.ring
        out = {}
        for e, c in self.terms.items():
            v = f(c)
            if v:
                out[e] = v
        return MultiPoly(ring, out)

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise OdoError("DOMAIN_MISMATCH", f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        if not getattr(other, "_ring_element", False):
            return NotImplemented
        try:
            return self.ring(other)
        except OdoError:
            return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.terms:
            return self
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return MultiPoly(self.ring, t)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.terms or not o.terms:
            return self.ring.zero
        if len(o.terms) == 1:
            (e2, c2), = o.terms.items()
            return MultiPoly(self.ring, {
                tuple(a + b for a, b in zip(e, e2)): v
                for e, c in self.terms.items() if (v := c * c2)})
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e)
                t[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(self.ring, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise OdoError("INEXACT_DIVISION", "negative power of a polynomial")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero
        return MultiPoly(self.ring, {e: v for e, v in ((e, a * c) for e, a in self.terms.items()) if v})

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            return exact_div(self, other)
        c = self.ring.field(other)
        if not c:
            raise OdoError("DIVISION_BY_ZERO", "polynomial divided by zero")
        return self.scale(1 / c)

    def monic(self) -> "MultiPoly":
        return self.scale(1 / self.lc()) if self.terms else self

    def derivative(self, var: int | str) -> "MultiPoly":
        """Partial derivative with respect to a ring variable."""
        i = var if isinstance(var, int) else self.ring.names.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                t[ne] = c * e[i]
        return MultiPoly(self.ring, t)

    def evaluate(self, values: Sequence, one=None):
        """Substitute ``values[i]`` for variable i; values may be any ring elements."""
        powers: list[dict] = [{} for _ in values]

        def pw(i, k):
            if k not in powers[i]:
                powers[i][k] = values[i] if k == 1 else pw(i, k - 1) * values[i]
            return powers[i][k]

        total = None
        for e, c in self.sorted_terms():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = pw(i, k) * term
            total = term if total is None else total + term
        if total is None:
            return one * 0 if one is not None else self.ring.field.zero
        return total

    # -- printing --------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        rational = self.ring.field is QQ
        out = []
        for e, c in self.sorted_terms():
            mono = _fmt_mono(self.ring.names, e)
            if rational:
                neg = c < 0
                a = -c if neg else c
                body = mono if (mono and a == 1) else (f"{_fmt_q(a)}*{mono}" if mono else _fmt_q(a))
                out.append(("-" if neg else "") + body if not out else (" - " if neg else " + ") + body)
            else:
                cs = self.ring.field.format(c)
                neg = False
                if cs.startswith("-"):
                    ncs = self.ring.field.format(-c)
                    if not ncs.startswith("-"):
                        neg, cs = True, ncs
                if mono and cs == "1":
                    body = mono
                else:
                    atom = not any(ch in cs for ch in "+- /*")
                    body = (cs if atom else f"({cs})") + (f"*{mono}" if mono else "")
                out.append(("-" if neg else "") + body if not out else (" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def divide(p: MultiPoly, divisors: Sequence[MultiPoly]) -> tuple[list[MultiPoly], MultiPoly]:
    """Multivariate division: p = sum q_i d_i + r, no term of r divisible by any lm(d_i)."""
    ring = p.ring
    key = ring.order.key
    divs = [(d.lm(), d.lc(), d) for d in divisors]
    invs = [1 / lc for _, lc, _ in divs]
    quots: list[dict] = [{} for _ in divisors]
    rem: dict = {}
    work = dict(p.terms)
    while work:
        m = max(work, key=key)
        c = work[m]
        for i, (dl, dc, d) in enumerate(divs):
            if _divides(dl, m):
                f = c * invs[i]
                shift = tuple(a - b for a, b in zip(m, dl))
                quots[i][shift] = quots[i].get(shift, ring.field.zero) + f
                for e, v in d.terms.items():
                    ne = tuple(a + b for a, b in zip(e, shift))
                    nv = work.get(ne)
                    nv = -(f * v) if nv is None else nv - f * v
                    if nv:
                        work[ne] = nv
                    else:
                        work.pop(ne, None)
                work.pop(m, None)
                break
        else:
            rem[m] = c
            del work[m]
    return [MultiPoly(ring, {e: c for e, c in q.items() if c}) for q in quots], MultiPoly(ring, rem)


def normal_form(p: MultiPoly, basis: Sequence[MultiPoly]) -> MultiPoly:
    return divide(p, basis)[1]


def exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """q with a = q*b; INEXACT_DIVISION when b does not divide a."""
    if not b:
        raise OdoError("DIVISION_BY_ZERO", "polynomial division by zero")
    if not a:
        return a.ring.zero
    if len(b.terms) == 1:
        (eb, cb), = b.terms.items()
        inv = 1 / cb
        t = {}
        for e, c in a.terms.items():
            ne = tuple(x - y for x, y in zip(e, eb))
            if min(ne) < 0:
                raise OdoError("INEXACT_DIVISION", f"{b} does not divide {a}")
            t[ne] = c * inv
        return MultiPoly(a.ring, t)
    (q,), r = divide(a, [b])
    if r:
        raise OdoError("INEXACT_DIVISION", f"{b} does not divide {a}")
    return q


# ---------------------------------------------------------------------------
# gcd over Q (recursive primitive remainder sequence)
# ---------------------------------------------------------------------------

def _split(p: MultiPoly, v: int) -> dict:
    """View p as a polynomial in variable v: {degree: coefficient free of v}."""
    out: dict = {}
    for e, c in p.terms.items():
        k = e[v]
        ne = e[:v] + (0,) + e[v + 1:]
        out.setdefault(k, {})[ne] = c
    return {k: MultiPoly(p.ring, t) for k, t in out.items()}


def _join(parts: dict, v: int, ring: PolyRing) -> MultiPoly:
    t = {}
    for k, q in parts.items():
        for e, c in q.terms.items():
            t[e[:v] + (k,) + e[v + 1:]] = c
    return MultiPoly(ring, t)


def _normalize(p: MultiPoly) -> MultiPoly:
    return p.monic() if p else p


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor over Q, normalized monic in the ring order."""
    if a.ring.field is not QQ:
        raise OdoError("DOMAIN_MISMATCH", "gcd is implemented over QQ coefficients")
    if not a:
        return _normalize(b)
    if not b:
        return _normalize(a)
    vs = sorted(set(a.variables()) | set(b.variables()))
    if not vs:
        return a.ring.one
    v = vs[-1]
    if a.degree(v) <= 0 or b.degree(v) <= 0:
        # v divides nothing common unless both involve it
        ca = _content(_split(a, v)) if a.degree(v) > 0 else a
        cb = _content(_split(b, v)) if b.degree(v) > 0 else b
        return poly_gcd(ca, cb)
    A, B = _split(a, v), _split(b, v)
    ca, cb = _content(A), _content(B)
    c = poly_gcd(ca, cb)
    A = {k: exact_div(q, ca) for k, q in A.items()}
    B = {k: exact_div(q, cb) for k, q in B.items()}
    if max(A) < max(B):
        A, B = B, A
    while True:
        R = _prem(A, B, a.ring)
        if not R:
            g = B
            break
        if max(R) == 0:
            g = {0: a.ring.one}
            break
        cr = _content(R)
        A, B = B, {k: exact_div(q, cr) for k, q in R.items()}
    return _normalize(_join(g, v, a.ring) * c)


def _content(parts: dict) -> MultiPoly:
    return reduce(poly_gcd, parts.values())


def _prem(A: dict, B: dict, ring: PolyRing) -> dict:
    """Pseudo-remainder of univariate polynomials stored as {deg: coeff}."""
    db = max(B)
    lb = B[db]
    A = dict(A)
    while A and max(A) >= db:
        da = max(A)
        la = A[da]
        shift = da - db
        newA = {k: q * lb for k, q in A.items()}
        for k, q in B.items():
            kk = k + shift
            val = newA.get(kk, ring.zero) - la * q
            if val:
                newA[kk] = val
            else:
                newA.pop(kk, None)
        A = {k: q for k, q in newA.items() if q}
    return A


def squarefree_gcd_parts(h: MultiPoly) -> MultiPoly:
    """gcd(h, dh/dv_1, ..., dh/dv_k)."""
    g = h
    for v in h.variables():
        g = poly_gcd(g, h.derivative(v))
    return g


# ---------------------------------------------------------------------------
# parsing polynomials in named variables (used by the CLI and JSON readers)
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def parse_poly(text: str, ring: PolyRing) -> MultiPoly:
    """Parse sums/products/powers of rationals and ring variables over Q."""
    tokens = []
    pos = 0
    text = text.replace("**", "^")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        if m.group(1):
            tokens.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            tokens.append(("op", m.group(3), m.start(3)))
    tokens.append(("end", None, len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take(kind=None, val=None):
        nonlocal i
        t = tokens[i]
        if (kind and t[0] != kind) or (val is not None and t[1] != val):
            raise OdoError("PARSE_ERROR", f"unexpected {t[1]!r} at position {t[2]}")
        i += 1
        return t

    def expr():
        neg = False
        if peek()[:2] in (("op", "-"), ("op", "+")):
            neg = take()[1] == "-"
        v = term()
        if neg:
            v = -v
        while peek()[:2] in (("op", "+"), ("op", "-")):
            op = take()[1]
            w = term()
            v = v + w if op == "+" else v - w
        return v

    def term():
        v = factor()
        while peek()[:2] in (("op", "*"), ("op", "/")):
            op = take()[1]
            w = factor()
            if op == "*":
                v = v * w
            else:
                if not w.is_constant():
                    raise OdoError("PARSE_ERROR", "division by a non-constant polynomial")
                v = v / w.constant_coeff()
        return v

    def factor():
        v = base()
        if peek()[:2] == ("op", "^"):
            take()
            v = v ** take("num")[1]
        return v

    def base():
        t = peek()
        if t[0] == "num":
            take()
            return ring(Fraction(t[1]))
        if t[0] == "name":
            take()
            if t[1] not in ring.names:
                raise OdoError("PARSE_ERROR", f"unknown variable {t[1]!r} at position {t[2]}")
            return ring.gen(t[1])
        if t[:2] == ("op", "("):
            take()
            v = expr()
            take("op", ")")
            return v
        if t[:2] == ("op", "-"):
            take()
            return -factor()
        raise OdoError("PARSE_ERROR", f"unexpected {t[1]!r} at position {t[2]}")

    result = expr()
    if peek()[0] != "end":
        t = peek()
        raise OdoError("PARSE_ERROR", f"unexpected {t[1]!r} at position {t[2]}")
    return result
