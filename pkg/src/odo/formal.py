"""Differential polynomials, truncated pseudo-differential operators and GD systems.

The formal operator is L = D^n + u_2 D^(n-2) + ... + u_n with differential
indeterminates u_i.  Jets u_i^(k) are the variables of a differential polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

from odo.errors import OdoError
from odo.field_tower import QQ, _fmt_q, parent_of
from odo.operators import DiffOp, commutator


# ---------------------------------------------------------------------------
# differential polynomials
# ---------------------------------------------------------------------------

def _jet_name(i: int, k: int) -> str:
    if k <= 3:
        return f"u{i}" + "'" * k
    return f"u{i}^({k})"


def _mono_mul(a: tuple, b: tuple) -> tuple:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class DiffPolyRing:
    """Q{u_2, ..., u_n}; the derivation sends u_i^(k) to u_i^(k+1)."""

    _ring_element = False

    def __init__(self, n: int):
        if n < 2:
            raise OdoError("BAD_ORDER", "the formal operator needs order >= 2")
        self.n = n
        self.zero = DiffPolynomial(self, {})
        self.one = DiffPolynomial(self, {(): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, DiffPolyRing) and other.n == self.n

    def __hash__(self):
        return hash(("DiffPolyRing", self.n))

    def __repr__(self) -> str:
        return f"Q{{u2..u{self.n}}}"

    @property
    def chain(self) -> tuple:
        return (self, QQ)

    def __call__(self, v) -> "DiffPolynomial":
        if isinstance(v, DiffPolynomial):
            if v.ring != self:
                raise OdoError("DOMAIN_MISMATCH", f"{v.ring!r} vs {self!r}")
            return v
        if isinstance(v, (int, Fraction)):
            c = Fraction(v)
            return DiffPolynomial(self, {(): c} if c else {})
        raise OdoError("DOMAIN_MISMATCH", f"cannot coerce {v!r} into {self!r}")

    def u(self, i: int, k: int = 0) -> "DiffPolynomial":
        if not 2 <= i <= self.n:
            raise OdoError("BAD_INDEX", f"u{i} is not a variable of {self!r}")
        return DiffPolynomial(self, {(((i, k), 1),): Fraction(1)})

    def derive(self, p: "DiffPolynomial") -> "DiffPolynomial":
        out: dict = {}
        for mono, c in p.terms.items():
            for idx, ((i, k), e) in enumerate(mono):
                rest = dict(mono)
                if e == 1:
                    del rest[(i, k)]
                else:
                    rest[(i, k)] = e - 1
                rest[(i, k + 1)] = rest.get((i, k + 1), 0) + 1
                m = tuple(sorted(rest.items()))
                out[m] = out.get(m, 0) + c * e
        return DiffPolynomial(self, {m: c for m, c in out.items() if c})

    def is_constant(self, p) -> bool:
        return all(not m for m in p.terms)

    def formal_operator(self) -> DiffOp:
        """D^n + u_2 D^(n-2) + ... + u_n."""
        n = self.n
        coeffs = [self.zero] * (n + 1)
        coeffs[n] = self.one
        for i in range(2, n + 1):
            coeffs[n - i] = self.u(i)
        return DiffOp(self, coeffs)

    def format(self, p) -> str:
        return str(p)


class DiffPolynomial:
    """Sparse polynomial in jets; monomials are sorted tuples of ((i, k), exponent)."""

    __slots__ = ("ring", "terms")
    _ring_element = True

    def __init__(self, ring: DiffPolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    @property
    def parent(self) -> DiffPolyRing:
        return self.ring

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _coerce(self, other) -> "DiffPolynomial":
        if isinstance(other, DiffPolynomial):
            return other
        return self.ring(other)

    def __eq__(self, other):
        try:
            return self.terms == self._coerce(other).terms
        except OdoError:
            return False

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return DiffPolynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, DiffOp):
            return NotImplemented
        o = self._coerce(other)
        t = dict(self.terms)
        for m, c in o.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return DiffPolynomial(self.ring, t)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DiffOp):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return DiffPolynomial(self.ring, {m: v * c for m, v in self.terms.items()} if c else {})
        o = self._coerce(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return DiffPolynomial(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        c = Fraction(other) if isinstance(other, (int, Fraction)) else None
        if c is None:
            o = self._coerce(other)
            if not self.ring.is_constant(o) or not o:
                raise OdoError("NOT_INVERTIBLE", "division by a non-constant differential polynomial")
            c = o.terms[()]
        return self * (1 / c)

    def derive(self):
        return self.ring.derive(self)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def weight(self) -> set:
        """Set of weights of the monomials, with u_i^(k) of weight i + k."""
        return {sum((i + k) * e for (i, k), e in m) for m in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (-sum(e for _, e in t[0]), t[0]))
        out = []
        for m, c in items:
            mono = "*".join(_jet_name(i, k) + (f"^{e}" if e > 1 else "") for (i, k), e in m)
            neg = c < 0
            a = -c if neg else c
            body = mono if (mono and a == 1) else (f"{_fmt_q(a)}*{mono}" if mono else _fmt_q(a))
            out.append(("-" if neg else "") + body if not out else (" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"DiffPolynomial({self})"


def evaluate_diffpoly(p: DiffPolynomial, assignment: Mapping[int, object]):
    """Substitute u_i -> assignment[i] (field elements), jets via the field derivation."""
    needed = p.variables()
    missing = sorted({i for i, _ in needed} - set(assignment))
    if missing:
        raise OdoError("MISSING_ASSIGNMENT", f"no value for u{missing[0]}")
    jets: dict = {}
    field = None
    for i, v in assignment.items():
        field = parent_of(v)
        break
    for i, k in sorted(needed):
        if (i, k) in jets:
            continue
        val = assignment[i]
        f = parent_of(val)
        for j in range(k + 1):
            if (i, j) not in jets:
                jets[(i, j)] = val if j == 0 else f.derive(jets[(i, j - 1)])
    total = field.zero if field is not None else Fraction(0)
    for m, c in p.terms.items():
        term = field(c) if field is not None else c
        for v, e in m:
            term = term * jets[v] ** e
        total = total + term
    return total


def evaluate_operator(op: DiffOp, assignment: Mapping[int, object], field=None) -> DiffOp:
    if field is None:
        field = parent_of(next(iter(assignment.values())))
    return DiffOp(field, [evaluate_diffpoly(c, assignment) if c else field.zero for c in op.coeffs])


# ---------------------------------------------------------------------------
# pseudo-differential operators
# ---------------------------------------------------------------------------

class PsdOp:
    """sum_{floor <= j <= top} c_j D^j; terms below ``floor`` are unknown (truncated)."""

    __slots__ = ("parent", "coeffs", "floor")

    def __init__(self, parent, coeffs: Mapping[int, object], floor: int):
        self.parent = parent
        self.floor = floor
        self.coeffs = {j: parent(c) for j, c in coeffs.items() if j >= floor and c}

    @classmethod
    def from_diffop(cls, op: DiffOp, floor: int | None = None) -> "PsdOp":
        floor = min(0, op.order - 1) if floor is None else floor
        return cls(op.parent, {j: c for j, c in enumerate(op.coeffs)}, floor)

    @property
    def top(self) -> int:
        return max(self.coeffs) if self.coeffs else self.floor - 1

    def coeff(self, j: int):
        if j < self.floor:
            raise OdoError("TRUNCATED", f"coefficient of D^{j} is below the truncation floor {self.floor}")
        return self.coeffs.get(j, self.parent.zero)

    def truncate(self, floor: int) -> "PsdOp":
        return PsdOp(self.parent, self.coeffs, max(floor, self.floor))

    def differential_part(self) -> DiffOp:
        """(self)_+ ; needs the exponents >= 0 to be exact."""
        if self.floor > 0:
            raise OdoError("TRUNCATED", "differential part needs the D^0 coefficient")
        top = max(self.top, 0)
        return DiffOp(self.parent, [self.coeff(j) for j in range(top + 1)])

    def __add__(self, other: "PsdOp") -> "PsdOp":
        c = dict(self.coeffs)
        for j, v in other.coeffs.items():
            c[j] = c[j] + v if j in c else v
        return PsdOp(self.parent, c, max(self.floor, other.floor))

    def __neg__(self):
        return PsdOp(self.parent, {j: -v for j, v in self.coeffs.items()}, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return psdo_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, PsdOp):
            return NotImplemented
        f = max(self.floor, other.floor)
        return self.truncate(f).coeffs == other.truncate(f).coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return f"O(D^{self.floor - 1})" if self.floor <= 0 else "0"
        parts = []
        for j in sorted(self.coeffs, reverse=True):
            c = self.coeffs[j]
            cs = str(c)
            mono = "" if j == 0 else ("D" if j == 1 else f"D^{j}" if j > 0 else f"D^({j})")
            if mono and cs == "1":
                parts.append(mono)
            elif mono:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"({cs})")
        return " + ".join(parts) + f" + O(D^({self.floor - 1}))"

    __repr__ = __str__


def _gbinom(j: int, k: int) -> int:
    """Generalized binomial coefficient C(j, k) for integer j, k >= 0."""
    if j >= 0:
        return comb(j, k)
    return (-1) ** k * comb(k - j - 1, k)


def psdo_mul(A: PsdOp, B: PsdOp, floor: int | None = None) -> PsdOp:
    """A*B with D^j b = sum_k C(j, k) b^(k) D^(j-k); result exact down to its floor."""
    if A.parent != B.parent:
        raise OdoError("DOMAIN_MISMATCH", f"{A.parent!r} vs {B.parent!r}")
    parent = A.parent
    exact = max(A.floor + B.top, A.top + B.floor)
    floor = exact if floor is None else max(floor, exact)
    out: dict = {}
    derivs: dict = {}

    def dv(j, k):
        key = (j, k)
        if key not in derivs:
            derivs[key] = B.coeffs[j] if k == 0 else parent.derive(dv(j, k - 1))
        return derivs[key]

    for ja, a in A.coeffs.items():
        for jb in B.coeffs:
            k = 0
            while ja + jb - k >= floor:
                if ja >= 0 and k > ja:
                    break
                bk = dv(jb, k)
                if bk:
                    e = ja + jb - k
                    term = a * bk * _gbinom(ja, k)
                    out[e] = out[e] + term if e in out else term
                k += 1
    return PsdOp(parent, out, floor)


_EXACT = -(10 ** 9)  # floor of an operator with no truncation


def psdo_pow(A: PsdOp, k: int, floor: int) -> PsdOp:
    out = PsdOp(A.parent, {0: A.parent.one}, _EXACT)
    top = max(A.top, 0)
    for i in range(k):
        # later factors lower exponents by at most ``top`` each
        out = psdo_mul(out, A, floor - (k - 1 - i) * top)
    return out


def nth_root(L: DiffOp, floor: int | None = None) -> PsdOp:
    """Monic R = D + r_0 + r_{-1} D^-1 + ... with R^n = L down to D^(n-1+floor).

    ``floor`` is the lowest exponent of R that is kept exact.  R is built term by
    term: the coefficient of D^(n-1+e) in R^n equals n*rho_e plus terms involving
    only higher coefficients of R.
    """
    n = L.order
    if n < 1 or L.lc() != 1:
        raise OdoError("NOT_NORMAL_FORM", "nth root needs a monic operator of positive order")
    if n == 1:
        return PsdOp.from_diffop(L, min(floor if floor is not None else 0, 0))
    floor = -(n + 2) if floor is None else floor
    parent = L.parent
    R = PsdOp(parent, {1: parent.one}, 1)
    for e in range(0, floor - 1, -1):
        trial = PsdOp(parent, dict(R.coeffs), e)
        pw = psdo_pow(trial, n, n - 1 + e)
        target = L.coeff(n - 1 + e) if n - 1 + e >= 0 else parent.zero
        rho = (target - pw.coeff(n - 1 + e)) / n
        c = dict(R.coeffs)
        if rho:
            c[e] = rho
        R = PsdOp(parent, c, e)
    return R


# ---------------------------------------------------------------------------
# almost commuting operators and GD systems
# ---------------------------------------------------------------------------

def fractional_powers(L: DiffOp, ms: Sequence[int]) -> dict[int, DiffOp]:
    """Differential parts (L^(m/n))_+ for each m, from one root computation."""
    ms = sorted(set(ms))
    top = max(ms) if ms else 1
    # R exact down to 1-M makes R^m exact down to m-M, so each power costs one product
    R = nth_root(L, floor=1 - top)
    wanted = set(ms)
    out = {}
    power = PsdOp(L.parent, {0: L.parent.one}, _EXACT)
    for m in range(0, top + 1):
        if m:
            power = psdo_mul(power, R, m - top)
        if m in wanted:
            out[m] = power.differential_part()
    return out


@lru_cache(maxsize=None)
def _formal_cache(n: int, mmax: int):
    ring = DiffPolyRing(n)
    L = ring.formal_operator()
    return ring, L, fractional_powers(L, range(1, mmax + 1))


def almost_commuting(n: int, m: int):
    """(P_m, [H_0, ..., H_{n-2}]) with [P_m, L] = sum_k H_k D^k for the formal L."""
    if n < 2 or m < 1:
        raise OdoError("BAD_ORDER", "need n >= 2 and m >= 1")
    ring, L, P = _formal_cache(n, max(m, 1))
    Pm = P[m]
    C = commutator(Pm, L)
    if C.order > n - 2:
        raise OdoError("INTERNAL", f"commutator of order {C.order} > n-2")
    H = [C.coeff(k) for k in range(n - 1)]
    return Pm, H


def index_set(n: int, m: int) -> list[int]:
    """J_{n,m} = {0, ..., m} minus multiples of n."""
    return [j for j in range(m + 1) if j % n]


@dataclass
class GDSystem:
    n: int
    m: int
    unknown_constants: list
    equations: list  # each: (H_k of P_m, {j: H_k of P_j})

    def as_text(self) -> list[str]:
        lines = []
        for k, (base, lin) in enumerate(self.equations):
            s = f"({base})"
            for j, h in lin.items():
                s += f" + c{j}*({h})"
            lines.append(f"k={k}: {s} = 0")
        return lines

    def to_json(self) -> dict:
        return {
            "n": self.n, "m": self.m,
            "constants": [f"c{j}" for j in self.unknown_constants],
            "equations": [{"k": k, "H_m": str(b), "terms": {f"c{j}": str(h) for j, h in lin.items()}}
                          for k, (b, lin) in enumerate(self.equations)],
        }

    def evaluate(self, assignment: Mapping[int, object], constants: Mapping[int, object]):
        """Values of the n-1 equations at a concrete u and constants c_j."""
        vals = []
        for base, lin in self.equations:
            v = evaluate_diffpoly(base, assignment)
            for j, h in lin.items():
                v = v + evaluate_diffpoly(h, assignment) * constants.get(j, 0)
            vals.append(v)
        return vals


def gd_system(n: int, m: int) -> GDSystem:
    if m % n == 0:
        raise OdoError("M_MULTIPLE_OF_N", f"{m} is a multiple of {n}")
    J = [j for j in index_set(n, m - 1) if j >= 1]
    _, Hm = almost_commuting(n, m)
    Hj = {j: almost_commuting(n, j)[1] for j in J}
    eqs = []
    for k in range(n - 1):
        eqs.append((Hm[k], {j: Hj[j][k] for j in J if Hj[j][k]}))
    return GDSystem(n, m, J, eqs)
