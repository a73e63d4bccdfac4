"""Rationality certificates for products of theta functions of linear forms.

A quotient  prod θ(f_i)^a_i / prod θ(g_j)^b_j  of theta functions of integral
linear forms is a rational function on E^n exactly when the quadratic forms
sum a_i f_i^2 and sum b_j g_j^2 agree.  We compare Gram matrices.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd

from .cycles import CycleError


class InvalidExpression(ValueError):
    pass


class ThetaParseError(CycleError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple[int, ...]

    def __init__(self, coefficients):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in coefficients))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def content(self) -> int:
        g = 0
        for c in self.coefficients:
            g = gcd(g, c)
        return g

    def normalized(self) -> "LinearForm":
        """The sign-normalized form: first nonzero coefficient positive."""
        first = next((c for c in self.coefficients if c), 0)
        return LinearForm(-c for c in self.coefficients) if first < 0 else self

    def __neg__(self) -> "LinearForm":
        return LinearForm(-c for c in self.coefficients)

    def render(self, names: list[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(1, self.n + 1)]
        out = ""
        for c, name in zip(self.coefficients, names):
            if not c:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            if not out:
                out = ("-" if c < 0 else "") + mag + name
            else:
                out += (" - " if c < 0 else " + ") + mag + name
        return out or "0"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class ThetaExpression:
    n: int
    numerator: tuple[tuple[LinearForm, int], ...]
    denominator: tuple[tuple[LinearForm, int], ...]

    def __init__(self, n, numerator, denominator=()):
        num = tuple((f if isinstance(f, LinearForm) else LinearForm(f), int(a)) for f, a in numerator)
        den = tuple((g if isinstance(g, LinearForm) else LinearForm(g), int(b)) for g, b in denominator)
        for f, a in num + den:
            if a <= 0:
                raise InvalidExpression("multiplicities must be positive")
            if f.n != n:
                raise InvalidExpression(f"form {f} has {f.n} coefficients, expected {n}")
            if f.is_zero():
                raise InvalidExpression("zero linear form")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)


@dataclass
class ValidityReport:
    valid: bool
    gram_difference: list[list[int]]

    def __str__(self) -> str:
        head = "valid" if self.valid else "invalid"
        rows = "\n".join(" ".join(str(x) for x in r) for r in self.gram_difference)
        return f"{head}\ngram difference:\n{rows}"


def gram(terms, n: int) -> list[list[int]]:
    """sum of a * f f^T over (f, a)."""
    out = [[0] * n for _ in range(n)]
    for f, a in terms:
        c = f.coefficients
        for i in range(n):
            if c[i]:
                for j in range(n):
                    out[i][j] += a * c[i] * c[j]
    return out


def check_rationality(expr: ThetaExpression) -> ValidityReport:
    top = gram(expr.numerator, expr.n)
    bottom = gram(expr.denominator, expr.n)
    diff = [[x - y for x, y in zip(r, s)] for r, s in zip(top, bottom)]
    return ValidityReport(not any(x for r in diff for x in r), diff)


@dataclass
class Divisor:
    """Formal sum of zero loci {f = 0} with integer multiplicities."""

    entries: list[tuple[LinearForm, int]]
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return {f.coefficients: m for f, m in self.entries}

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return "\n".join(f"{{{f} = 0}}: {m}" for f, m in self.entries)


def divisor_of(expr: ThetaExpression) -> Divisor:
    """Zero loci of a certified quotient, with ±f merged.

    A form with content > 1 cuts out a union of torsion translates, so it is
    kept apart from its primitive part and a warning is recorded.
    """
    if not check_rationality(expr).valid:
        raise InvalidExpression("the Gram identity fails; the quotient is not a rational function")
    mult: dict[LinearForm, int] = {}
    warnings: list[str] = []
    for terms, sign in ((expr.numerator, 1), (expr.denominator, -1)):
        for f, a in terms:
            key = f.normalized()
            if f.content() > 1:
                msg = f"non-primitive form {key} kept as its own locus"
                if msg not in warnings:
                    warnings.append(msg)
            mult[key] = mult.get(key, 0) + sign * a
    entries = sorted(((f, m) for f, m in mult.items() if m), key=lambda e: (-e[1], e[0].coefficients))
    return Divisor(entries, warnings)


# --- text syntax: theta(x1+x2)^1 * theta(x1-x2) / theta(x1)^2 * theta(x2)^2 ---

_FORM_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*x(\d+)")


def _parse_form(text: str, offset: int, names: dict[int, int]) -> dict[int, int]:
    coeffs: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _FORM_TERM.match(text, pos)
        if not m or (not first and not m.group(1)):
            raise ThetaParseError("bad linear form", offset + pos)
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        var = int(m.group(3))
        coeffs[var] = coeffs.get(var, 0) + sign * c
        names.setdefault(var, 0)
        pos = m.end()
        first = False
    if first:
        raise ThetaParseError("empty linear form", offset)
    return coeffs


_FACTOR = re.compile(r"\s*theta\s*\(([^()]*)\)\s*(?:\^\s*(\d+))?\s*")


def _parse_side(text: str, offset: int, names) -> list[tuple[dict[int, int], int]]:
    out = []
    pos = 0
    while True:
        m = _FACTOR.match(text, pos)
        if not m:
            raise ThetaParseError("expected theta(...)", offset + pos)
        out.append((_parse_form(m.group(1), offset + m.start(1), names), int(m.group(2) or 1)))
        pos = m.end()
        if pos >= len(text):
            return out
        if text[pos] != "*":
            raise ThetaParseError("expected '*'", offset + pos)
        pos += 1


def parse_theta(text: str) -> tuple[ThetaExpression, list[str]]:
    """Parse ``theta(f)^a * ... / theta(g)^b * ...``; variables are x<k>.

    Returns the expression over the variables that occur (sorted by index)
    together with their names.
    """
    if text.count("/") > 1:
        raise ThetaParseError("more than one '/'", text.index("/", text.index("/") + 1))
    top, _, bottom = text.partition("/")
    names: dict[int, int] = {}
    num = _parse_side(top, 0, names)
    den = _parse_side(bottom, len(top) + 1, names) if bottom.strip() else []
    variables = sorted(names)
    n = len(variables)

    def to_form(coeffs):
        return LinearForm(coeffs.get(v, 0) for v in variables)
    try:
        expr = ThetaExpression(n, [(to_form(c), a) for c, a in num], [(to_form(c), b) for c, b in den])
    except InvalidExpression as exc:
        raise ThetaParseError(str(exc), 0) from exc
    return expr, [f"x{v}" for v in variables]
