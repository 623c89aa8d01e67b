"""Burchnall-Chaundy polynomials and spectral curves.

A planar curve has one generator f(lambda, mu); a space curve has three
generators in (lambda, mu1, mu2).  All generators have rational coefficients.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Sequence

from odo.dres import SPECTRAL_NAMES, diff_resultant, to_constants
from odo.errors import OdoError
from odo.field_tower import QQ
from odo.multipoly import (MultiPoly, PolyRing, TermOrder, exact_div, normal_form,
                           parse_poly, squarefree_gcd_parts)
from odo.operators import DiffOp, commutator

SPACE_NAMES = ("lambda", "mu1", "mu2")


class RankWarning(UserWarning):
    """The operators passed to space_bc do not generate a rank-one algebra."""


@dataclass
class SpectralCurve:
    generators: list
    groebner_basis: list
    rank: int
    variable_names: tuple
    term_order: str = "grevlex"
    notes: list = dc_field(default_factory=list)

    @property
    def ring(self) -> PolyRing:
        return self.generators[0].ring

    @property
    def is_planar(self) -> bool:
        return len(self.generators) == 1

    def contains(self, point: Sequence) -> bool:
        pt = [Fraction(v) for v in point]
        return all(not g.evaluate(pt) for g in self.generators)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variable_names),
            "generators": [str(g) for g in self.generators],
            "groebner": [str(g) for g in self.groebner_basis],
            "rank": self.rank,
            "term_order": self.term_order,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "SpectralCurve":
        ring = PolyRing(QQ, data["variables"], data.get("term_order"))
        gens = [parse_poly(g, ring) for g in data["generators"]]
        gb = [parse_poly(g, ring) for g in data.get("groebner") or []] or groebner(gens, ring.order)
        return cls(gens, gb, int(data["rank"]), tuple(data["variables"]), ring.order.spec)


# ---------------------------------------------------------------------------
# square-free parts and powers
# ---------------------------------------------------------------------------

def _normalize(p: MultiPoly) -> MultiPoly:
    """Monic with respect to the ring order."""
    return p.monic() if p else p


def _rational(h: MultiPoly) -> MultiPoly:
    return h if h.ring.field is QQ else to_constants(h)


def squarefree_part(h: MultiPoly) -> MultiPoly:
    """h divided by gcd(h, all partial derivatives), made monic."""
    if not h:
        raise OdoError("ZERO_INPUT", "square-free part of 0")
    h = _rational(h)
    if h.is_constant():
        return h.ring.one
    return _normalize(exact_div(h, squarefree_gcd_parts(h)))


def detect_power(h: MultiPoly, f: MultiPoly) -> int | None:
    """r with h = c*f^r for a rational c != 0, or None."""
    h, f = _rational(h), _rational(f)
    if not h or not f or f.is_constant():
        return None
    dh, df = h.total_degree(), f.total_degree()
    if dh % df:
        return None
    r = dh // df
    fr = f ** r
    c = h.lc() / fr.lc()
    return r if fr.scale(c) == h else None


# ---------------------------------------------------------------------------
# curves from commuting operators
# ---------------------------------------------------------------------------

def _check_commuting(*ops: DiffOp) -> None:
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if commutator(ops[i], ops[j]):
                raise OdoError("NOT_COMMUTING", f"operators {i} and {j} do not commute")


def planar_bc(P: DiffOp, Q: DiffOp, names: Sequence[str] = SPECTRAL_NAMES,
              order: str | None = None) -> SpectralCurve:
    if P.order < 1 or Q.order < 1:
        raise OdoError("NOT_APPLICABLE", "operators must have positive order")
    if P == Q:
        raise OdoError("NOT_APPLICABLE", "identical operators give a degenerate pair")
    _check_commuting(P, Q)
    h = _rational(diff_resultant(P, Q, names))
    ring = PolyRing(QQ, names, order)
    h = ring(h)
    f = squarefree_part(h)
    r = detect_power(h, f)
    if r is None:
        raise OdoError("NOT_A_POWER", f"resultant {h} is not a power of its square-free part")
    return SpectralCurve([f], [f], r, tuple(names), ring.order.spec)


def space_bc(L: DiffOp, A1: DiffOp, A2: DiffOp, order: str | None = None,
             names: Sequence[str] = SPACE_NAMES) -> SpectralCurve:
    """Generators f1(l, m1), f2(l, m2), f3(m1, m2) from the three pairwise resultants."""
    _check_commuting(L, A1, A2)
    g = gcd(gcd(L.order, A1.order), A2.order)
    if g != 1:
        warnings.warn(f"gcd of the orders is {g}; the three generators may not describe the curve",
                      RankWarning, stacklevel=2)
    lam, m1, m2 = names
    ring = PolyRing(QQ, names, order)
    gens = []
    for P, Q, pair in ((L, A1, (lam, m1)), (L, A2, (lam, m2)), (A1, A2, (m1, m2))):
        h = _rational(diff_resultant(P, Q, pair))
        gens.append(_normalize(ring.embed(squarefree_part(h))))
    gb = groebner(gens, ring.order)
    return SpectralCurve(gens, gb, g, tuple(names), ring.order.spec)


def bc_curve(ops: Sequence[DiffOp], order: str | None = None) -> SpectralCurve:
    """Planar curve for two operators, space curve for three."""
    if len(ops) == 2:
        return planar_bc(ops[0], ops[1], order=order)
    if len(ops) == 3:
        return space_bc(*ops, order=order)
    raise OdoError("UNSUPPORTED_GENERATORS", "only two or three commuting operators are supported")


def operator_substitute(g: MultiPoly, ops: Sequence[DiffOp]) -> DiffOp:
    """g(ops[0], ops[1], ...) for commuting operators."""
    if g.ring.nvars != len(ops):
        raise OdoError("ARITY_MISMATCH", f"{g.ring.nvars} variables but {len(ops)} operators")
    if not ops:
        raise OdoError("ARITY_MISMATCH", "no operators given")
    parent = ops[0].parent
    for op in ops[1:]:
        parent = op._lift(DiffOp.scalar(parent, parent.one))[0].parent
    ops = [op.change_ring(parent) for op in ops]
    total = DiffOp(parent)
    powers: list[dict] = [{0: DiffOp.scalar(parent, parent.one)} for _ in ops]

    def pw(i, k):
        if k not in powers[i]:
            powers[i][k] = pw(i, k - 1) * ops[i]
        return powers[i][k]

    for e, c in g.sorted_terms():
        term = DiffOp.scalar(parent, parent(c))
        for i, k in enumerate(e):
            if k:
                term = term * pw(i, k)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# Groebner bases
# ---------------------------------------------------------------------------

def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _spoly(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    lf, lg = f.lm(), g.lm()
    m = _lcm(lf, lg)
    ring = f.ring
    uf = MultiPoly(ring, {tuple(x - y for x, y in zip(m, lf)): 1 / f.lc()})
    ug = MultiPoly(ring, {tuple(x - y for x, y in zip(m, lg)): 1 / g.lc()})
    return uf * f - ug * g


def groebner(generators: Sequence[MultiPoly], order=None) -> list[MultiPoly]:
    """Reduced Groebner basis (Buchberger with the product and chain criteria)."""
    gens = [g for g in generators if g]
    if not gens:
        return []
    ring = gens[0].ring
    if order is not None:
        ring = ring.with_order(order if isinstance(order, TermOrder) else TermOrder(order))
        gens = [ring(g) for g in gens]
    key = ring.order.key
    G: list[MultiPoly] = []
    pairs: set = set()
    for g in gens:
        r = normal_form(g, G) if G else g
        if r:
            G.append(r.monic())
            pairs |= {(i, len(G) - 1) for i in range(len(G) - 1)}
    while pairs:
        i, j = min(pairs, key=lambda p: key(_lcm(G[p[0]].lm(), G[p[1]].lm())))
        pairs.discard((i, j))
        li, lj = G[i].lm(), G[j].lm()
        m = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        if any(k not in (i, j) and all(a <= b for a, b in zip(G[k].lm(), m))
               and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
               for k in range(len(G))):
            continue
        r = normal_form(_spoly(G[i], G[j]), G)
        if r:
            G.append(r.monic())
            pairs |= {(k, len(G) - 1) for k in range(len(G) - 1)}
    # minimize
    G = [g for i, g in enumerate(G)
         if not any(k != i and all(a <= b for a, b in zip(h.lm(), g.lm())) and (h.lm() != g.lm() or k < i)
                    for k, h in enumerate(G))]
    # reduce
    out = []
    for i, g in enumerate(G):
        out.append(normal_form(g, G[:i] + G[i + 1:]).monic())
    return sorted(out, key=lambda p: key(p.lm()), reverse=True)


def reduce_mod_curve(p: MultiPoly, curve: SpectralCurve) -> MultiPoly:
    """Normal form of p modulo the curve ideal extended to p's coefficient field."""
    ring = PolyRing(p.ring.field, curve.variable_names, curve.term_order)
    if p.ring.names != ring.names:
        p = ring.embed(p)
    else:
        p = ring(p)
    basis = [ring(g) for g in curve.groebner_basis]
    return normal_form(p, basis)


def in_ideal(p: MultiPoly, curve: SpectralCurve) -> bool:
    return not reduce_mod_curve(p, curve)
