"""Differential resultants and subresultants of P - lambda, Q - mu.

Rows follow the extended system
    D^(m-1-k)(P - lambda), ..., P - lambda, D^(n-1-k)(Q - mu), ..., Q - mu
and columns run D^(n+m-1-k), ..., D^0.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from odo.errors import OdoError
from odo.multipoly import MultiPoly, PolyRing
from odo.multipoly import exact_div as _poly_exact_div
from odo.operators import DiffOp, commutator, op_mul

SPECTRAL_NAMES = ("lambda", "mu")


class SylvesterMatrix:
    """Coefficient matrix S_k with row and column labels."""

    def __init__(self, entries, row_labels, column_labels, ring):
        self.entries = entries
        self.row_labels = row_labels
        self.column_labels = column_labels
        self.ring = ring

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def minor(self, columns: Sequence[int]) -> list[list]:
        return [[row[c] for c in columns] for row in self.entries]

    def __repr__(self) -> str:
        return f"SylvesterMatrix({self.shape[0]}x{self.shape[1]})"


def spectral_ring(field, names: Sequence[str] = SPECTRAL_NAMES, order=None) -> PolyRing:
    return PolyRing(field, names, order)


def sylvester(P: DiffOp, Q: DiffOp, k: int = 0, names: Sequence[str] = SPECTRAL_NAMES,
              ring: PolyRing | None = None) -> SylvesterMatrix:
    P, Q = P._lift(Q)
    n, m = P.order, Q.order
    if n < 1 or m < 1:
        raise OdoError("ORDER_TOO_SMALL", "both operators need positive order")
    if not 0 <= k <= min(n, m) - 1:
        raise OdoError("K_OUT_OF_RANGE", f"k={k} outside 0..{min(n, m) - 1}")
    field = P.parent
    ring = ring or PolyRing(field, names)
    lam, mu = ring.gen(names[0]), ring.gen(names[1])
    ncols = n + m - k
    D = DiffOp.D(field)

    def block(op, count, var, label):
        shifted = [op]
        for _ in range(count - 1):
            shifted.append(op_mul(D, shifted[-1]))
        rows, labels = [], []
        for j in range(count - 1, -1, -1):
            row = []
            for col in range(ncols):
                power = ncols - 1 - col
                entry = ring(shifted[j].coeff(power))
                if power == j:
                    entry = entry - var
                row.append(entry)
            rows.append(row)
            labels.append(f"D^{j}({label} - {var})")
        return rows, labels

    rp, lp = block(P, m - k, lam, "P")
    rq, lq = block(Q, n - k, mu, "Q")
    cols = [f"D^{ncols - 1 - c}" for c in range(ncols)]
    return SylvesterMatrix(rp + rq, lp + lq, cols, ring)


def _exact(a, b):
    if isinstance(a, MultiPoly):
        return _poly_exact_div(a, b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise OdoError("INEXACT_DIVISION", f"{b} does not divide {a}")
        return q
    return a / b


def bareiss_det(M: Sequence[Sequence], exact_div=_exact):
    """Fraction-free determinant (Bareiss) with row swaps for zero pivots."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise OdoError("NOT_SQUARE", "determinant of a non-square matrix")
    if n == 0:
        return 1
    A = [list(r) for r in M]
    one = A[0][0] ** 0 if not isinstance(A[0][0], int) else 1
    sign = 1
    prev = one
    for k in range(n - 1):
        if not A[k][k]:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return A[0][0] * 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                num = rowi[j] * akk
                if aik and rowk[j]:
                    num = num - aik * rowk[j]
                rowi[j] = exact_div(num, prev) if prev != 1 else num
            rowi[k] = akk * 0
        prev = akk
    d = A[n - 1][n - 1]
    return -d if sign < 0 else d


def diff_resultant(P: DiffOp, Q: DiffOp, names: Sequence[str] = SPECTRAL_NAMES,
                   check: bool = True) -> MultiPoly:
    """det S_0(P - lambda, Q - mu) in field[lambda, mu].

    For commuting inputs the coefficients must be constants; NONCONSTANT_RESULTANT
    is raised otherwise (with ``check``).
    """
    S = sylvester(P, Q, 0, names)
    h = bareiss_det(S.entries)
    if check and not commutator(P, Q):
        if not S.ring.is_constant(h):
            raise OdoError("NONCONSTANT_RESULTANT", "resultant of commuting operators has non-constant coefficients")
    return h


def to_constants(h: MultiPoly) -> MultiPoly:
    """Map a polynomial with constant coefficients to Q[vars]."""
    from odo.field_tower import QQ

    ring = PolyRing(QQ, h.ring.names, h.ring.order)
    try:
        return MultiPoly(ring, {e: QQ(c) for e, c in h.terms.items()})
    except OdoError as e:
        raise OdoError("NONCONSTANT_RESULTANT", str(e)) from None


def subresultant_minors(S: SylvesterMatrix, k: int) -> list[list[list]]:
    """S_k^i for i = 0..k: keep the leading n+m-2k-1 columns and the column of D^i."""
    nrows, ncols = S.shape
    lead = list(range(nrows - 1))
    return [S.minor(lead + [ncols - 1 - i]) for i in range(k + 1)]


def subresultant(P: DiffOp, Q: DiffOp, k: int, names: Sequence[str] = SPECTRAL_NAMES) -> DiffOp:
    """sum_i det(S_k^i) D^i as an operator over field[lambda, mu]."""
    S = sylvester(P, Q, k, names)
    phis = [bareiss_det(M) for M in subresultant_minors(S, k)]
    return DiffOp(S.ring, phis)
