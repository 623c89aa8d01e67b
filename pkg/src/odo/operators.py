"""Linear ordinary differential operators sum c_i D^i over a differential coefficient domain.

The coefficient domain is any parent with ``zero``, ``one``, coercion via
``__call__`` and a ``derive`` method: a differential field, a polynomial ring
over one (spectral variables are constants), a curve function field, or a
differential polynomial ring.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from odo.errors import OdoError
from odo.field_tower import QQ, _fmt_q, parent_of


def _common_parent(p, q):
    if p == q:
        return p
    if p in getattr(q, "chain", ()):
        return q
    if q in getattr(p, "chain", ()):
        return p
    raise OdoError("DOMAIN_MISMATCH", f"{p!r} vs {q!r}")


class DiffOp:
    """Dense differential operator; ``coeffs[i]`` multiplies D^i."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent, coeffs: Sequence = ()):
        self.parent = parent
        cs = [parent(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, parent, coeffs: list) -> "DiffOp":
        op = object.__new__(cls)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        op.parent = parent
        op.coeffs = tuple(coeffs)
        return op

    @classmethod
    def D(cls, parent) -> "DiffOp":
        return cls(parent, [parent.zero, parent.one])

    @classmethod
    def scalar(cls, parent, c) -> "DiffOp":
        return cls(parent, [c])

    # -- structure -----------------------------------------------------------

    @property
    def order(self) -> int:
        """Order of the operator; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def lc(self):
        if not self.coeffs:
            raise OdoError("ZERO_INPUT", "leading coefficient of the zero operator")
        return self.coeffs[-1]

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.parent.zero

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_scalar(self) -> bool:
        return len(self.coeffs) <= 1

    def change_ring(self, parent) -> "DiffOp":
        return DiffOp(parent, [parent(c) for c in self.coeffs])

    def map_coeffs(self, f, parent=None) -> "DiffOp":
        parent = parent or self.parent
        return DiffOp(parent, [f(c) for c in self.coeffs])

    def monic(self) -> "DiffOp":
        inv = _coeff_div(self.parent, self.parent.one, self.lc())
        return DiffOp._raw(self.parent, [c * inv for c in self.coeffs])

    # -- arithmetic ------------------------------------------------------------

    def _lift(self, other) -> tuple["DiffOp", "DiffOp"]:
        if not isinstance(other, DiffOp):
            try:
                other = DiffOp(self.parent, [other])
            except OdoError:
                op = parent_of(other)
                parent = _common_parent(self.parent, op)
                return self.change_ring(parent), DiffOp(parent, [other])
            return self, other
        if other.parent == self.parent:
            return self, other
        parent = _common_parent(self.parent, other.parent)
        return self.change_ring(parent), other.change_ring(parent)

    def __eq__(self, other):
        try:
            a, b = self._lift(other)
        except OdoError:
            return False
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return DiffOp._raw(self.parent, [-c for c in self.coeffs])

    def __add__(self, other):
        a, b = self._lift(other)
        n = max(len(a.coeffs), len(b.coeffs))
        z = a.parent.zero
        return DiffOp._raw(a.parent, [a.coeff(i) + b.coeff(i) if i < len(a.coeffs) and i < len(b.coeffs)
                                      else (a.coeffs[i] if i < len(a.coeffs) else (b.coeffs[i] if i < len(b.coeffs) else z))
                                      for i in range(n)])

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        a, b = self._lift(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._lift(other)
        return op_mul(a, b)

    def __rmul__(self, other):
        b, a = self._lift(other)
        return op_mul(a, b)

    def __pow__(self, k: int) -> "DiffOp":
        if k < 0:
            raise OdoError("DOMAIN_MISMATCH", "negative power of a differential operator")
        result = DiffOp.scalar(self.parent, self.parent.one)
        base = self
        while k:
            if k & 1:
                result = op_mul(result, base)
            k >>= 1
            if k:
                base = op_mul(base, base)
        return result

    def scale(self, c) -> "DiffOp":
        """Left multiplication by a coefficient."""
        c = self.parent(c)
        return DiffOp._raw(self.parent, [c * a for a in self.coeffs])

    def apply(self, f):
        """Act on an element of the coefficient domain."""
        total = self.parent.zero
        g = self.parent(f)
        for i, c in enumerate(self.coeffs):
            if i:
                g = self.parent.derive(g)
            if c:
                total = total + c * g
        return total

    # -- printing --------------------------------------------------------------

    def __str__(self) -> str:
        return format_diffop(self)

    def __repr__(self) -> str:
        return f"DiffOp({self})"


def _coeff_div(parent, a, b):
    if not b:
        raise OdoError("DIVISION_BY_ZERO", "division by a zero coefficient")
    exact = getattr(parent, "exact_div", None)
    if exact is not None:
        return exact(a, b)
    if hasattr(parent, "ring") or type(parent).__name__ == "PolyRing":
        from odo.multipoly import exact_div
        try:
            return exact_div(a, b)
        except OdoError as e:
            raise OdoError("NONINVERTIBLE_LEADING_COEFF", str(e)) from None
    return a / b


def format_diffop(op: DiffOp, dname: str = "D") -> str:
    if not op.coeffs:
        return "0"
    rational = op.parent is QQ
    out = []
    for i in range(len(op.coeffs) - 1, -1, -1):
        c = op.coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (dname if i == 1 else f"{dname}^{i}")
        neg = False
        if rational:
            neg = c < 0
            cs = _fmt_q(-c if neg else c)
            one = (c == 1 or c == -1)
        else:
            cs = str(c)
            if cs.startswith("-"):
                ncs = str(-c)
                if not ncs.startswith("-"):
                    neg, cs = True, ncs
            one = cs == "1"
        if mono and one:
            body = mono
        elif mono:
            body = (cs if rational or _simple(cs) else f"({cs})") + f"*{mono}"
        else:
            body = cs if rational or _simple(cs) else f"({cs})"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _simple(s: str) -> bool:
    return not any(ch in s for ch in "+ ") or (s.startswith("(") and s.endswith(")") and s.count("(") == 1)


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def op_mul(P: DiffOp, Q: DiffOp) -> DiffOp:
    """Composition P*Q using D*a = a*D + a'."""
    if P.parent != Q.parent:
        raise OdoError("DOMAIN_MISMATCH", f"{P.parent!r} vs {Q.parent!r}")
    if not P.coeffs or not Q.coeffs:
        return DiffOp(P.parent)
    parent = P.parent
    n = P.order
    derivs = []
    for b in Q.coeffs:
        ds = [b]
        for _ in range(n):
            ds.append(parent.derive(ds[-1]) if ds[-1] else ds[-1])
        derivs.append(ds)
    out = [parent.zero] * (P.order + Q.order + 1)
    for i, a in enumerate(P.coeffs):
        if not a:
            continue
        for k in range(i + 1):
            binom = comb(i, k)
            ab = a * binom if binom != 1 else a
            for j, ds in enumerate(derivs):
                bk = ds[k]
                if bk:
                    out[i - k + j] = out[i - k + j] + ab * bk
    return DiffOp._raw(parent, out)


def right_divide(M: DiffOp, L: DiffOp) -> tuple[DiffOp, DiffOp]:
    """(q, r) with M = q*L + r and ord(r) < ord(L)."""
    M, L = M._lift(L)
    if not L:
        raise OdoError("DIVISION_BY_ZERO_OPERATOR", "right division by the zero operator")
    parent = L.parent
    n = L.order
    lcL = L.lc()
    q = [parent.zero] * max(M.order - n + 1, 0)
    r = M
    while r.order >= n:
        d = r.order - n
        c = _coeff_div(parent, r.lc(), lcL)
        q[d] = q[d] + c
        t = DiffOp._raw(parent, [parent.zero] * d + [c])
        prod = op_mul(t, L)
        # the top coefficient cancels exactly; drop it to avoid relying on zero tests
        diff = [r.coeff(i) - prod.coeff(i) for i in range(r.order)]
        r = DiffOp._raw(parent, diff)
    return DiffOp._raw(parent, q), r


def gcrd(P: DiffOp, Q: DiffOp) -> DiffOp:
    """Monic greatest common right divisor by the Euclidean chain."""
    P, Q = P._lift(Q)
    if not P and not Q:
        raise OdoError("ZERO_INPUT", "gcrd of two zero operators")
    if P.order < Q.order:
        P, Q = Q, P
    while Q:
        P, Q = Q, right_divide(P, Q)[1]
    return P.monic()


def commutator(P: DiffOp, Q: DiffOp) -> DiffOp:
    P, Q = P._lift(Q)
    return op_mul(P, Q) - op_mul(Q, P)


def order(P: DiffOp) -> int:
    return P.order


def is_normal_form(P: DiffOp) -> bool:
    """Monic with vanishing D^(n-1) coefficient."""
    if not P:
        return False
    n = P.order
    return P.lc() == 1 and (n == 0 or not P.coeffs[n - 1])


def delta_product(parent, shifts: Sequence, x_power: int) -> DiffOp:
    """x^x_power * prod (x D - s) over ``shifts`` (Euler-type operators)."""
    x = parent.gen
    delta = DiffOp(parent, [parent.zero, x])
    op = DiffOp.scalar(parent, parent.one)
    for s in shifts:
        op = op_mul(op, delta - Fraction(s))
    return DiffOp.scalar(parent, x ** x_power) * op
