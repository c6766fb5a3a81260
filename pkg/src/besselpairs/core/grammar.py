# src/besselpairs/core/grammar.py
"""
Potential-expression grammar (whitespace is ignored):

    const:<c> | pow:<a> | pw:a=<a>,b=<b>,alpha=<alpha>,beta=<beta>,m=<m>
    | ilog:k=<k>,rho=<rho> | xlog:k=<k>,D=<D> | scaled:alpha=<alpha>,(<expr>)
    | sum(<expr>;<expr>;...) | prod(<expr>;<expr>;...)

Numbers are anything float() accepts, plus the literal `e`.
"""

import math
import re

from pydantic import ValidationError

from besselpairs.core.potentials import (
    Constant,
    IteratedLog,
    Potential,
    Power,
    PowerWeighted,
    Product,
    Scaled,
    Sum,
    XLog,
)
from besselpairs.models.enums import PotentialKind
from besselpairs.utils.exceptions import ExpressionError, ParamError

_KEYED = {
    "pw": (PowerWeighted, ("a", "b", "alpha", "beta", "m")),
    "ilog": (IteratedLog, ("k", "rho")),
    "xlog": (XLog, ("k", "D")),
}
_NUMBER_END = ",;()"


class _Parser:
    def __init__(self, text: str):
        self.source = text
        self.text = re.sub(r"\s+", "", text)
        self.pos = 0

    # -----------------------------
    # Cursor
    # -----------------------------
    def fail(self, message: str):
        raise ExpressionError(
            f"{message} at position {self.pos} in {self.source!r}",
            text=self.source,
            position=self.pos,
        )

    def peek_word(self) -> str:
        match = re.match(r"[A-Za-z]+", self.text[self.pos:])
        return match.group(0) if match else ""

    def expect(self, token: str) -> None:
        if not self.text.startswith(token, self.pos):
            self.fail(f"expected {token!r}")
        self.pos += len(token)

    def number(self) -> float:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _NUMBER_END:
            self.pos += 1
        token = self.text[start:self.pos]
        if token == "e":
            return math.e
        try:
            return float(token)
        except ValueError:
            self.pos = start
            self.fail(f"bad number {token!r}")

    def keyed(self, names: tuple) -> dict:
        values = {}
        for index, name in enumerate(names):
            if index:
                self.expect(",")
            self.expect(f"{name}=")
            values[name] = self.number()
        return values

    # -----------------------------
    # Productions
    # -----------------------------
    def expression(self):
        word = self.peek_word()
        self.pos += len(word)
        if word == "const":
            self.expect(":")
            return self.build(Constant, level=self.number())
        if word == "pow":
            self.expect(":")
            return self.build(Power, exponent=self.number())
        if word in _KEYED:
            model, names = _KEYED[word]
            self.expect(":")
            values = self.keyed(names)
            if "k" in values:
                if not float(values["k"]).is_integer():
                    self.fail("depth k must be an integer")
                values["k"] = int(values["k"])
            return self.build(model, **values)
        if word == "scaled":
            self.expect(":")
            alpha = self.keyed(("alpha",))["alpha"]
            self.expect(",(")
            inner = self.expression()
            self.expect(")")
            return self.build(Scaled, alpha=alpha, inner=inner)
        if word in ("sum", "prod"):
            self.expect("(")
            members = [self.expression()]
            while self.text.startswith(";", self.pos):
                self.pos += 1
                members.append(self.expression())
            self.expect(")")
            return self.build(Sum if word == "sum" else Product, members=tuple(members))
        self.pos -= len(word)
        self.fail(f"unknown potential kind {word!r}")

    def build(self, model, **fields):
        try:
            return model(**fields)
        except ValidationError as exc:
            self.fail(f"invalid {model.__name__} parameters ({exc.errors()[0]['msg']})")
        except ParamError as exc:
            raise ExpressionError(
                f"{exc.message} in {self.source!r}", text=self.source, position=self.pos
            ) from exc

    def parse(self):
        if not self.text:
            self.fail("empty expression")
        result = self.expression()
        if self.pos != len(self.text):
            self.fail("trailing characters")
        return result


def parse_potential(text: str) -> Potential:
    return _Parser(text).parse()


def _num(value: float) -> str:
    return format(value, ".17g")


def format_potential(potential: Potential) -> str:
    """Inverse of parse_potential; parsing the result gives an equal model."""
    kind = PotentialKind(potential.kind)
    if kind is PotentialKind.CONSTANT:
        return f"const:{_num(potential.level)}"
    if kind is PotentialKind.POWER:
        return f"pow:{_num(potential.exponent)}"
    if kind is PotentialKind.POWER_WEIGHTED:
        return (
            f"pw:a={_num(potential.a)},b={_num(potential.b)},alpha={_num(potential.alpha)},"
            f"beta={_num(potential.beta)},m={_num(potential.m)}"
        )
    if kind is PotentialKind.ITERATED_LOG:
        return f"ilog:k={potential.k},rho={_num(potential.rho)}"
    if kind is PotentialKind.XLOG:
        return f"xlog:k={potential.k},D={_num(potential.D)}"
    if kind is PotentialKind.SCALED:
        return f"scaled:alpha={_num(potential.alpha)},({format_potential(potential.inner)})"
    name = "sum" if kind is PotentialKind.SUM else "prod"
    return f"{name}({';'.join(format_potential(member) for member in potential.members)})"
