"""Plain-text persistence for DG complexes.

    ellmot-complex 1
    algebra elliptic
    object 0 -1 E 0 1 -2 0 D{}|0@1
    object 1 0 E 1 0 0 0 D{}
    f 1 0 = 1 [0>1* {x1 = 0}]
    h 1 0 = -1 [1>1 {...}] H1 [0>1* {x1 = 0}]

Objects are numbered globally (id, position, kind, power, twist, shift,
resolved flag, label).  ``f i j`` is the entry from object j to object i,
written as ``coeff word`` terms joined by " ; ".  Elliptic words use the
printed token syntax ``[s>t* {equations}]`` and ``H<k>``; opaque words are
generator names separated by spaces (``1`` is the empty word).  Opaque
complexes also carry ``generator``, ``boundary``, ``relation`` and ``alias``
lines.  Homotopy entries ``h i j`` are optional and kept on reading.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .correspondences import LinearSubtorus
from .cycles import format_coeff
from .dg import DGComplex, MotiveTerm, OpaqueAlgebra, OpaqueElement, Resolution
from .elliptic import EllipticAlgebra, EllipticElement, format_word
from .grammar import ParseError

HEADER = "ellmot-complex 1"


@dataclass
class Document:
    complex: DGComplex
    homotopies: dict[tuple[int, int], dict] = field(default_factory=dict)


# --- writing ------------------------------------------------------------------------------------

def _word_text(alg, w) -> str:
    if isinstance(alg, EllipticAlgebra):
        return format_word(w)
    return " ".join(w) if w else "1"


def _element_text(alg, e) -> str:
    if not e.terms:
        return "0"
    items = sorted(e.terms.items(), key=lambda kv: (len(kv[0]), _word_text(alg, kv[0])))
    return " ; ".join(f"{format_coeff(c)} {_word_text(alg, w)}" for w, c in items)


def dumps(K: DGComplex, homotopies: dict | None = None) -> str:
    alg = K.algebra
    lines = [HEADER, "algebra " + ("elliptic" if isinstance(alg, EllipticAlgebra) else "opaque")]
    if isinstance(alg, OpaqueAlgebra):
        for g, d in alg.degrees.items():
            lines.append(f"generator {g} {d}")
        for g, b in alg.boundaries.items():
            lines.append(f"boundary {g} = {_element_text(alg, b)}")
        for lhs, rhs in alg.rules.items():
            lines.append(f"relation {' '.join(lhs)} = {_element_text(alg, rhs)}")
        for w, (name, c) in alg.aliases.items():
            lines.append(f"alias {format_coeff(c)} {' '.join(w)} => {name}")
    ids: dict[tuple[int, int], int] = {}
    for p in K.positions():
        for k, t in enumerate(K.objects[p]):
            ids[(p, k)] = len(ids)
            lines.append(f"object {ids[(p, k)]} {p} {t.kind} {t.power} {t.twist} {t.shift} "
                         f"{int(t.resolved)} {t.label}".rstrip())
    for tag, maps in (("f", K.maps), ("h", homotopies or {})):
        for (p, q) in sorted(maps, key=lambda pq: (pq[1], pq[0])):
            for (t, s), e in sorted(maps[(p, q)].items()):
                if e:
                    lines.append(f"{tag} {ids[(p, t)]} {ids[(q, s)]} = {_element_text(alg, e)}")
    return "\n".join(lines) + "\n"


def dump_resolution(res: Resolution) -> str:
    return dumps(res.complex, res.homotopies)


# --- reading ------------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:\[(\d+)>(\d+)(\*?) (\{[^}]*\}|E\^\d+)\]|H(\d+))")
_LIN_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\*)?([A-Za-z_][A-Za-z0-9_]*)")


def _linear(text: str, where: int, src: str) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    text = text.strip()
    if text == "0":
        return out
    pos = 0
    while pos < len(text):
        m = _LIN_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("expected a linear term", where + pos, src)
        c = Fraction(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
        out[m.group(3)] = out.get(m.group(3), 0) + c
        pos = m.end()
    return out


def parse_torus(body: str, ambient: int, where: int = 0, src: str = "") -> LinearSubtorus:
    """Inverse of the printed form ``{x1 - x2 = 0, x3 = a}`` (or ``E^m``)."""
    if body.startswith("E^"):
        return LinearSubtorus.of(ambient, [])
    rows, consts = [], []
    for eq in body.strip("{}").split(","):
        if "=" not in eq:
            raise ParseError("expected an equation", where, src)
        lhs, rhs = eq.split("=")
        coeffs = _linear(lhs, where, src)
        row = [Fraction(0)] * ambient
        for name, c in coeffs.items():
            if not name.startswith("x") or not name[1:].isdigit() or not 1 <= int(name[1:]) <= ambient:
                raise ParseError(f"unknown coordinate {name}", where, src)
            row[int(name[1:]) - 1] = c
        rows.append(row)
        consts.append(_linear(rhs, where, src))
    return LinearSubtorus.of(ambient, rows, consts)


def _elliptic_word(text: str, where: int, src: str) -> tuple:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("expected a correspondence or homotopy token", where + pos, src)
        if m.group(5):
            out.append(("H", int(m.group(5))))
        else:
            s, t = int(m.group(1)), int(m.group(2))
            out.append(("C", s, t, parse_torus(m.group(4), s + t, where + pos, src), int(bool(m.group(3)))))
        pos = m.end()
    return tuple(out)


def _element(alg, text: str, where: int, src: str):
    text = text.strip()
    terms: dict[tuple, Fraction] = {}
    if text != "0":
        for part in text.split(" ; "):
            coeff, _, word = part.strip().partition(" ")
            try:
                c = Fraction(coeff)
            except ValueError:
                raise ParseError("expected a coefficient", where, src) from None
            if isinstance(alg, EllipticAlgebra):
                w = _elliptic_word(word, where, src)
            else:
                w = () if word.strip() == "1" else tuple(word.split())
                for g in w:
                    if g not in alg.degrees:
                        raise ParseError(f"undeclared generator {g}", where, src)
            terms[w] = terms.get(w, 0) + c
    if isinstance(alg, EllipticAlgebra):
        return EllipticElement(terms)
    return OpaqueElement(alg, terms)


def loads(text: str) -> Document:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ParseError(f"missing header line {HEADER!r}", 0, text)
    alg = None
    objects: dict[int, list[MotiveTerm]] = {}
    where: dict[int, tuple[int, int]] = {}
    maps: dict[tuple[int, int], dict] = {}
    homotopies: dict[tuple[int, int], dict] = {}
    offset = len(lines[0]) + 1
    for line in lines[1:]:
        start, offset = offset, offset + len(line) + 1
        words = line.split()
        if not words or line.startswith("#"):
            continue
        kind = words[0]
        try:
            if kind == "algebra":
                alg = {"elliptic": EllipticAlgebra, "opaque": OpaqueAlgebra}[words[1]]()
            elif alg is None:
                raise ParseError("the algebra line must come first", start, text)
            elif kind == "generator":
                alg.generator(words[1], int(words[2]))
            elif kind == "boundary":
                alg.set_boundary(words[1], _element(alg, line.split("=", 1)[1], start, text))
            elif kind == "relation":
                lhs, rhs = line[len("relation"):].split(" = ", 1)
                alg.relation(tuple(lhs.split()), _element(alg, rhs, start, text))
            elif kind == "alias":
                head, name = line[len("alias"):].split(" => ", 1)
                coeff, *w = head.split()
                alg.alias(tuple(w), name, Fraction(coeff))
            elif kind == "object":
                ident, pos = int(words[1]), int(words[2])
                term = MotiveTerm(words[3], int(words[4]), int(words[5]), int(words[6]), " ".join(words[8:]),
                                  bool(int(words[7])))
                where[ident] = (pos, len(objects.setdefault(pos, [])))
                objects[pos].append(term)
            elif kind in ("f", "h"):
                lhs, rhs = line.split(" = ", 1)
                _, i, j = lhs.split()
                (p, t), (q, s) = where[int(i)], where[int(j)]
                target = maps if kind == "f" else homotopies
                target.setdefault((p, q), {})[(t, s)] = _element(alg, rhs, start, text)
            else:
                raise ParseError(f"unknown line kind {kind!r}", start, text)
        except ParseError:
            raise
        except (ValueError, IndexError, KeyError) as exc:
            raise ParseError(f"malformed {kind} line ({exc})", start, text) from None
    if alg is None:
        raise ParseError("missing algebra line", 0, text)
    return Document(DGComplex(objects, maps, alg), homotopies)
