"""Commuting operators of a concrete normal-form L and bases of its centralizer.

Every operator commuting with L of order m is a constant combination of the
differential parts (L^(j/n))_+, j <= m.  Forcing [A, L] = 0 gives a linear
system over Q in the unknown constants.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from odo.errors import OdoError
from odo.field_tower import QQ, HyperbolicField, RatFuncField, linear_forms_to_system, solve_linear
from odo.formal import fractional_powers
from odo.operators import DiffOp, commutator, is_normal_form


@dataclass
class CommutingSolution:
    """particular + span(homogeneous); ``particular`` has all free constants set to 0."""

    order: int
    particular: DiffOp
    homogeneous: list
    constants: dict

    def general(self, params: Sequence) -> DiffOp:
        out = self.particular
        for c, op in zip(params, self.homogeneous):
            out = out + op.scale(c) if c else out
        return out


def _check_input(L: DiffOp) -> None:
    if not is_normal_form(L) or L.order < 2:
        raise OdoError("NOT_NORMAL_FORM", "L must be monic of order >= 2 with zero D^(n-1) coefficient")
    if not isinstance(L.parent, (RatFuncField, HyperbolicField)) and L.parent is not QQ:
        raise OdoError("UNSUPPORTED_TOWER", f"no linear solver for coefficients in {L.parent!r}")


class _PowerTable:
    """(L^(j/n))_+ and [(L^(j/n))_+, L] for j up to a bound, grown on demand."""

    def __init__(self, L: DiffOp, cap: int | None = None):
        self.L = L
        self.cap = cap
        self.bound = 0
        self.P: dict[int, DiffOp] = {}
        self.C: dict[int, DiffOp] = {}

    def ensure(self, m: int) -> None:
        if m <= self.bound:
            return
        bound = max(m, 2 * self.bound, 2 * self.L.order)
        if self.cap is not None:
            bound = max(m, min(bound, self.cap))
        self.P = fractional_powers(self.L, range(0, bound + 1))
        self.C = {j: commutator(P, self.L) for j, P in self.P.items()}
        self.bound = bound


def commuting_of_order(L: DiffOp, m: int, table: _PowerTable | None = None) -> CommutingSolution | None:
    """Operators of order m commuting with L, or None when there are none."""
    _check_input(L)
    n = L.order
    if m < 0:
        raise OdoError("BAD_ORDER", "negative order")
    table = table or _PowerTable(L)
    table.ensure(m)
    P, C = table.P, table.C
    trivial = [j for j in range(m) if j % n == 0]
    if m % n == 0:
        return CommutingSolution(m, P[m], [P[j] for j in trivial], {})
    unknowns = [j for j in range(1, m) if j % n]
    field = L.parent
    forms = []
    for k in range(n - 1):
        forms.append([C[m].coeff(k)] + [C[j].coeff(k) for j in unknowns])
    try:
        rows, rhs = linear_forms_to_system(forms, field)
        particular, nullspace = solve_linear(rows, rhs, len(unknowns))
    except OdoError as e:
        if e.code == "INCONSISTENT":
            return None
        raise
    A = P[m]
    for c, j in zip(particular, unknowns):
        if c:
            A = A + P[j].scale(c)
    if commutator(A, L):
        raise OdoError("INTERNAL", f"order-{m} solution does not commute with L")
    homog = []
    for v in nullspace:
        op = DiffOp(field)
        for c, j in zip(v, unknowns):
            if c:
                op = op + P[j].scale(c)
        homog.append(op)
    homog += [P[j] for j in trivial]
    return CommutingSolution(m, A, homog, {f"c{j}": c for c, j in zip(particular, unknowns)})


@dataclass
class GoodearlBasis:
    L: DiffOp
    elements: dict
    searched_up_to: int
    complete: bool
    notes: list = dc_field(default_factory=list)

    @property
    def n(self) -> int:
        return self.L.order

    def orders(self) -> list[int]:
        return [A.order for A in self.elements.values()]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "classes": {str(i): {"order": A.order, "operator": str(A)} for i, A in sorted(self.elements.items())},
            "rank": rank_of_basis(self),
            "algebro_geometric": is_algebro_geometric(self),
            "searched_up_to": self.searched_up_to,
            "complete": self.complete,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def goodearl_basis(L: DiffOp, max_order: int | None = None) -> GoodearlBasis:
    """Minimal-order commuting operator per residue class mod n, searching orders <= max_order."""
    _check_input(L)
    n = L.order
    max_order = 2 * n * n if max_order is None else max_order
    parent = L.parent
    elements = {0: DiffOp.scalar(parent, parent.one)}
    table = _PowerTable(L, max_order)
    for m in range(1, max_order + 1):
        i = m % n
        if i == 0 or i in elements:
            continue
        sol = commuting_of_order(L, m, table)
        if sol is not None:
            elements[i] = sol.particular
        if len(elements) == n:
            break
    complete = len(elements) == n
    notes = []
    if not complete:
        missing = sorted(set(range(n)) - set(elements))
        notes.append(f"no commuting operator found in classes {missing} up to order {max_order}; "
                     "a bounded search is evidence, not proof")
    return GoodearlBasis(L, elements, max_order, complete, notes)


def rank_of_orders(orders: Sequence[int]) -> int:
    return reduce(gcd, orders, 0)


def rank_of_basis(b: GoodearlBasis) -> int:
    return rank_of_orders([b.n] + [o for o in b.orders() if o])


def is_algebro_geometric(b: GoodearlBasis) -> bool:
    return rank_of_basis(b) == 1


def weyl_order2(L: DiffOp):
    """For L = D^2 + v D + u with polynomial v, u: q, c1, c2 with
    v = 2q + c1 and u = q*c1 + q^2 + q' + c2, or None.

    The constant c1 can be absorbed into q, so c1 = 0 is returned.
    """
    if L.order != 2:
        raise OdoError("NOT_ORDER_2", f"operator has order {L.order}")
    field = L.parent
    if L.lc() != 1:
        raise OdoError("NOT_ORDER_2", "operator must be monic")
    if field is not QQ:
        if not isinstance(field, RatFuncField) or field.var_derivative != 1 or field.base is not QQ:
            raise OdoError("NOT_POLYNOMIAL", "coefficients must be polynomials in x")
        if not all(field.is_polynomial(c) for c in L.coeffs):
            raise OdoError("NOT_POLYNOMIAL", "coefficients must be polynomials in x")
    v, u = L.coeff(1), L.coeff(0)
    q = v / 2
    K = u - q * q - field.derive(q)
    if field.derive(K):
        return None
    c2 = field.to_rational(K) if field is not QQ else K
    return {"q": q, "c1": Fraction(0), "c2": c2}
