"""Text syntax for cycles.

    cycle   := sum "on" "E" "^" INT
    sum     := ["-"] term (("+" | "-") term)*
    term    := [coeff ["*"]] factor (["*"] factor)* | coeff
    coeff   := INT ["/" INT]
    factor  := "P(" i ")" | "D(" j "," k ")" | "Dm(" j "," k ")"
             | "W(" j "," k ")" | "W(" i "," j "," k ")" | "W(" i "," j "," k "," l ")"
             | "Wp(" i "," j ")" | "Wd(" j "," k ")"

A term containing a W-symbol makes the whole expression a witness cycle.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .cycles import (Factor, LinearCycle, Monomial, WitnessCycle, WitnessSymbol,
                     CycleError)

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z]+)|(?P<sym>[()*,+\-/^]))")


class ParseError(CycleError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f": {text[pos:pos + 20]!r}" if text else ""))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError("unexpected character", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


_WITNESS_NAMES = {"W": None, "Wp": "Wpij", "Wd": "Wdd"}
_W_BY_ARITY = {2: "Wjk", 3: "Wijk", 4: "Wijkl"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}", tok[2], self.text)
        self.i += 1
        return tok

    def at(self, kind, value=None):
        tok = self.toks[self.i]
        return tok[0] == kind and (value is None or tok[1] == value)

    def parse(self):
        terms = []
        sign = 1
        if self.at("sym", "-"):
            self.take()
            sign = -1
        terms.append(self.term(sign))
        while self.at("sym", "+") or self.at("sym", "-"):
            sign = 1 if self.take()[1] == "+" else -1
            terms.append(self.term(sign))
        ambient = None
        if self.at("name", "on"):
            self.take()
            self.take("name", "E")
            self.take("sym", "^")
            ambient = int(self.take("num")[1])
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError("trailing input", tok[2], self.text)
        return terms, ambient

    def term(self, sign):
        coeff = Fraction(sign)
        factors, witnesses = [], []
        start = self.peek()[2]
        if self.at("num"):
            num = int(self.take()[1])
            den = 1
            if self.at("sym", "/"):
                self.take()
                den = int(self.take("num")[1])
                if den == 0:
                    raise ParseError("zero denominator", start, self.text)
            coeff *= Fraction(num, den)
            if self.at("sym", "*"):
                self.take()
            elif not self.at("name") or self.at("name", "on"):
                return coeff, factors, witnesses, start
        while True:
            self.factor(factors, witnesses)
            if self.at("sym", "*"):
                self.take()
                continue
            if self.at("name") and not self.at("name", "on"):
                continue
            break
        return coeff, factors, witnesses, start

    def factor(self, factors, witnesses):
        kind, name, pos = self.take("name")
        self.take("sym", "(")
        args = [int(self.take("num")[1])]
        while self.at("sym", ","):
            self.take()
            args.append(int(self.take("num")[1]))
        self.take("sym", ")")
        try:
            if name in ("P", "D", "Dm"):
                factors.append(Factor(name, *args))
            elif name in _WITNESS_NAMES:
                wkind = _WITNESS_NAMES[name] or _W_BY_ARITY.get(len(args))
                if wkind is None:
                    raise ParseError("W takes 2, 3 or 4 indices", pos, self.text)
                witnesses.append(WitnessSymbol(wkind, *args))
            else:
                raise ParseError(f"unknown symbol {name!r}", pos, self.text)
        except ParseError:
            raise
        except CycleError as exc:
            raise ParseError(str(exc), pos, self.text) from exc


def parse_cycle(text: str, ambient: int | None = None):
    """Parse a LinearCycle or WitnessCycle.

    The ambient comes from the trailing ``on E^m`` or the keyword argument;
    if both are missing it is the largest index used.
    """
    terms, declared = _Parser(text).parse()
    if declared is not None and ambient is not None and declared != ambient:
        raise ParseError(f"declared E^{declared} but E^{ambient} was requested", 0)
    m = declared if declared is not None else ambient
    if m is None:
        m = max((max(f.indices) for _, fs, ws, _ in terms for f in fs + ws), default=0)
    witness = any(ws for _, _, ws, _ in terms)
    out: dict = {}
    for coeff, facs, ws, pos in terms:
        if witness and len(ws) != 1:
            raise ParseError("each witness term needs exactly one W-symbol", pos, text)
        mono = Monomial(m, facs)  # may raise ImproperIntersection
        key = (mono, ws[0]) if witness else mono
        out[key] = out.get(key, 0) + coeff
    return WitnessCycle(m, out) if witness else LinearCycle(m, out)


def format_cycle(c) -> str:
    return str(c)
