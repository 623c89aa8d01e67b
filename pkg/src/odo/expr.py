"""Text syntax for operators and coefficients.

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('-'|'+') unary | factor
    factor := base ('^' uint)?
    base   := uint | 'x' | 'eta' | "eta'" | symbol | 'D' | '(' expr ')'

Juxtaposition is an error ("x D" must be written "x*D").  A divisor must be
a nonzero coefficient, so D never ends up in a denominator.  Products are
normal-ordered with the Leibniz rule, so "D*x" reads as x*D + 1.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from odo.errors import OdoError
from odo.field_tower import (QQ, HyperbolicField, RatFuncField, field_from_spec, field_spec_of,
                             parent_of)
from odo.operators import DiffOp

_TOKEN = re.compile(r"\s*(?:(\d+)|(eta'|[A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise OdoError("PARSE_ERROR", f"unexpected character {text[pos]!r} at position {pos}")
        if m.group(1):
            out.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def _atoms(field) -> dict:
    """Names usable in ``field`` mapped to their values."""
    names = {}
    for f in getattr(field, "chain", (field,)):
        if isinstance(f, RatFuncField) and f.var_derivative is not None:
            names[f.var] = f.gen
        elif isinstance(f, HyperbolicField):
            names["eta"] = f.eta
            names["eta'"] = f.eta_prime
    return {k: field(v) for k, v in names.items()}


_KNOWN = {"x": "ratfunc_x", "eta": "hyperbolic", "eta'": "hyperbolic"}


class _Parser:
    def __init__(self, text: str, field, allow_d: bool = True):
        self.text = text
        self.field = field
        self.allow_d = allow_d
        self.tokens = _tokenize(text)
        self.i = 0
        self.atoms = _atoms(field)

    # values are field elements or DiffOps; scalars stay scalars as long as possible
    def _op(self, v) -> DiffOp:
        return v if isinstance(v, DiffOp) else DiffOp.scalar(self.field, self.field(v))

    def peek(self):
        return self.tokens[self.i]

    def error(self, tok, what: str | None = None):
        kind, val, pos = tok
        shown = "end of input" if kind == "end" else repr(val)
        raise OdoError("PARSE_ERROR", what or f"unexpected {shown} at position {pos}")

    def take(self, val=None):
        t = self.tokens[self.i]
        if val is not None and t[1] != val:
            self.error(t, f"expected {val!r} at position {t[2]}")
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            if t[0] in ("num", "name") or t[1] == "(":
                self.error(t, f"implicit multiplication at position {t[2]}; write '*'")
            self.error(t)
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            w = self.term()
            v = self.add(v, w) if op == "+" else self.add(v, self.neg(w))
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            w = self.unary()
            if tok[1] == "*":
                v = self.mul(v, w)
            else:
                if isinstance(w, DiffOp) and w.order > 0:
                    self.error(tok, f"division by an operator at position {tok[2]}")
                c = w.coeff(0) if isinstance(w, DiffOp) else w
                if not c:
                    raise OdoError("DIVISION_BY_ZERO", f"division by zero at position {tok[2]}")
                v = self.mul(v, 1 / self.field(c))
        return v

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in ("+", "-"):
            self.take()
            v = self.unary()
            return self.neg(v) if t[1] == "-" else v
        return self.factor()

    def factor(self):
        v = self.base()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            t = self.peek()
            if t[0] != "num":
                self.error(t, f"exponent must be a non-negative integer at position {t[2]}")
            self.take()
            v = v ** t[1]
        return v

    def base(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return self.field(Fraction(val))
        if kind == "name":
            if val == "D":
                if not self.allow_d:
                    self.error(t, f"D is not allowed in a coefficient (position {pos})")
                return DiffOp.D(self.field)
            if val in self.atoms:
                return self.atoms[val]
            if val in _KNOWN:
                raise OdoError("FIELD_MISMATCH",
                               f"{val!r} at position {pos} needs the {_KNOWN[val]} field, not {self.field!r}")
            self.error(t, f"unknown name {val!r} at position {pos}")
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        self.error(t)

    def neg(self, v):
        return -v

    def add(self, v, w):
        if isinstance(v, DiffOp) or isinstance(w, DiffOp):
            return self._op(v) + self._op(w)
        return v + w

    def mul(self, v, w):
        if isinstance(v, DiffOp) or isinstance(w, DiffOp):
            return self._op(v) * self._op(w)
        return v * w


def _resolve_field(field):
    return field_from_spec(field) if isinstance(field, str) else field


def parse_operator(text: str, field) -> DiffOp:
    """Parse ``text`` as an operator with coefficients in ``field`` (object or spec name)."""
    field = _resolve_field(field)
    v = _Parser(text, field).parse()
    return v if isinstance(v, DiffOp) else DiffOp.scalar(field, field(v))


def parse_scalar(text: str, field):
    """Parse a coefficient (no D) as an element of ``field``."""
    field = _resolve_field(field)
    v = _Parser(text, field, allow_d=False).parse()
    return field(v) if parent_of(v) is not field or field is QQ else v


def format_operator(op: DiffOp) -> str:
    return str(op)


def operator_to_json(op: DiffOp) -> dict:
    spec = field_spec_of(op.parent)
    return {
        "field": spec["field"],
        "symbols": spec["symbols"],
        "order": op.order,
        "coefficients": [str(c) for c in op.coeffs],
        "text": str(op),
    }


def operator_from_json(data: dict) -> DiffOp:
    field = field_from_spec(data["field"], data.get("symbols") or ())
    if "coefficients" in data:
        return DiffOp(field, [parse_scalar(c, field) for c in data["coefficients"]])
    return parse_operator(data["text"], field)


@lru_cache(maxsize=None)
def _examples() -> dict:
    with resources.files("odo").joinpath("data/examples.json").open() as fh:
        return json.load(fh)


def example_names() -> list[str]:
    return sorted(_examples())


def load_example(name: str) -> DiffOp:
    """Built-in operator by name, e.g. ``EulerL4`` or ``Ex3genL``."""
    try:
        entry = _examples()[name]
    except KeyError:
        raise OdoError("UNKNOWN_EXAMPLE", f"no built-in example {name!r}") from None
    return parse_operator(entry["operator"], entry["field"])


def load_schema() -> dict:
    """JSON schema for ``odo --json`` output; definitions live under ``$defs``."""
    with resources.files("odo").joinpath("data/schema.json").open() as fh:
        return json.load(fh)
