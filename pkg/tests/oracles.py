"""Independent reference computations used by the tests.

Each oracle takes a different route from the library code it checks:
Laplace expansion instead of Bareiss, sympy instead of the own Groebner
code, an undetermined-coefficient ansatz instead of fractional powers.
"""

from fractions import Fraction
from itertools import product

import sympy

from odo.formal import DiffPolyRing
from odo.multipoly import MultiPoly, PolyRing
from odo.operators import DiffOp, commutator


def cofactor_det(M):
    """Determinant by expansion along the first row."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        t = M[0][j] * cofactor_det(minor)
        t = t if j % 2 == 0 else -t
        total = t if total is None else total + t
    return total if total is not None else M[0][0] * 0


def to_sympy(p: MultiPoly):
    syms = sympy.symbols(" ".join(f"v{i}" for i in range(p.ring.nvars)))
    syms = syms if isinstance(syms, tuple) else (syms,)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        c = Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return expr, syms


def from_sympy(expr, syms, ring: PolyRing) -> MultiPoly:
    poly = sympy.Poly(expr, *syms)
    terms = {}
    for mon, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(mon)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(ring, terms)


def sympy_groebner(polys, ring: PolyRing, order="grevlex"):
    exprs = []
    syms = None
    for p in polys:
        e, syms = to_sympy(p)
        exprs.append(e)
    G = sympy.groebner(exprs, *syms, order=order)
    return [from_sympy(g, syms, ring).monic() for g in G.exprs]


# ---------------------------------------------------------------------------
# almost commuting operators by undetermined coefficients
# ---------------------------------------------------------------------------

def _jets(n, weight):
    """Jets u_i^(k) of weight i + k <= weight."""
    return [(i, k) for i in range(2, n + 1) for k in range(weight - i + 1) if i + k <= weight]


def diff_monomials(n: int, weight: int):
    """All products of jets with total weight ``weight`` (as DiffPolynomials)."""
    R = DiffPolyRing(n)
    jets = _jets(n, weight)
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(acc)
            return
        for idx in range(start, len(jets)):
            i, k = jets[idx]
            w = i + k
            if w <= left:
                rec(idx, left - w, acc * R.u(i, k))

    rec(0, weight, R.one)
    return out


def ansatz_almost_commuting(n: int, m: int):
    """P_m = D^m + sum a_t * mono_t * D^i with weight(mono_t) = m - i, solved from ord([P, L]) <= n - 2.

    Returns (P_m, nullity); the system is assembled over sympy rationals.
    """
    R = DiffPolyRing(n)
    L = R.formal_operator()
    basis = []
    for i in range(m - 1):
        for mono in diff_monomials(n, m - i):
            coeffs = [R.zero] * (i + 1)
            coeffs[i] = mono
            basis.append(DiffOp(R, coeffs))
    lead = commutator(DiffOp(R, [R.zero] * m + [R.one]), L)
    cols = [commutator(b, L) for b in basis]
    keys = set()
    for C in [lead] + cols:
        for k in range(n - 1, C.order + 1):
            keys |= {(k, mono) for mono in C.coeff(k).terms}
    keys = sorted(keys)
    A = sympy.zeros(len(keys), len(basis))
    rhs = sympy.zeros(len(keys), 1)

    def entry(C, k, mono):
        if k > C.order:
            return 0
        c = C.coeff(k).terms.get(mono, 0)
        c = Fraction(c)
        return sympy.Rational(c.numerator, c.denominator)

    for r, (k, mono) in enumerate(keys):
        rhs[r] = -entry(lead, k, mono)
        for j, C in enumerate(cols):
            A[r, j] = entry(C, k, mono)
    sol, params = A.gauss_jordan_solve(rhs)
    sol = sol.subs({p: 0 for p in params})
    P = DiffOp(R, [R.zero] * m + [R.one])
    for a, b in zip(sol, basis):
        if a:
            P = P + b.scale(Fraction(int(a.p), int(a.q)))
    return P, len(params)


def small_int_matrices(n, values=(-1, 0, 1)):
    for entries in product(values, repeat=n * n):
        yield [list(entries[i * n:(i + 1) * n]) for i in range(n)]
