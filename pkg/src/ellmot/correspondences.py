"""Linear correspondences between powers of E and their composition.

A :class:`LinearSubtorus` is a translate {x : R x = c} of a connected
subtorus of E^m.  R is stored as the rational RREF of its row space (which
determines the saturated relation lattice) and c as formal combinations of
point labels, so two subtori are equal iff their keys agree.

Intersections of subtori are clean: the components are translates of one
subtorus and the excess normal bundle is trivial.  So a proper intersection
counts its components, and an intersection of excess dimension is zero in
the Chow group (its excess Chern class vanishes).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import linalg
from .cohomology import CohClass, class_matrix, subtorus_class, RealizationMatrix
from .cycles import CycleError, LinearCycle

Consts = tuple[tuple[str, Fraction], ...]


class ImproperComposition(CycleError):
    pass


class DimensionMismatch(CycleError):
    pass


def _clean_const(c: Mapping[str, object]) -> Consts:
    return tuple(sorted((k, Fraction(v)) for k, v in c.items() if v))


def _reduce(ncols: int, rows: Sequence[Sequence], consts: Sequence[Mapping[str, object]]):
    """RREF of the system R x = c over Q; returns (rows, consts) or None if inconsistent."""
    labels = sorted({k for c in consts for k in c})
    width = ncols + len(labels)
    aug = [[Fraction(x) for x in r] + [Fraction(c.get(k, 0)) for k in labels]
           for r, c in zip(rows, consts)]
    red, pivots = linalg.rref(aug, width)
    out_rows, out_consts = [], []
    for r, p in zip(red, pivots):
        if p >= ncols:
            return None  # 0 = nonzero combination of points
        out_rows.append(tuple(r[:ncols]))
        out_consts.append(_clean_const(dict(zip(labels, r[ncols:]))))
    return tuple(out_rows), tuple(out_consts)


@dataclass(frozen=True)
class LinearSubtorus:
    """{x in E^m : R x = c} with R in reduced echelon form over Q."""

    ambient: int
    rows: tuple[tuple[Fraction, ...], ...]
    consts: tuple[Consts, ...]

    def __hash__(self):
        # tori key every word dictionary, and Fraction hashing is slow
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.ambient, self.rows, self.consts))
            object.__setattr__(self, "_hash", h)
            return h

    @staticmethod
    def build(ambient: int, rows: Iterable[Sequence], consts: Iterable[Mapping[str, object]] | None = None):
        """Reduced subtorus and the number of components of {R x = c}, or None if empty."""
        rows = [list(r) for r in rows]
        if any(len(r) != ambient for r in rows):
            raise DimensionMismatch(f"equations must have {ambient} coefficients")
        consts = list(consts) if consts is not None else [{} for _ in rows]
        red = _reduce(ambient, rows, consts)
        if red is None:
            return None, 0
        torus = LinearSubtorus(ambient, red[0], red[1])
        components = 1
        for d in linalg.elementary_divisors([linalg.clear_denominators(r) for r in rows]) if rows else []:
            components *= d * d
        return torus, components

    @staticmethod
    def of(ambient: int, rows: Iterable[Sequence], consts=None) -> "LinearSubtorus":
        torus, _ = LinearSubtorus.build(ambient, rows, consts)
        if torus is None:
            raise CycleError("inconsistent equations")
        return torus

    @property
    def codim(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return self.ambient - self.codim

    def lattice(self) -> list[list[int]]:
        """Integer basis of the saturated relation lattice."""
        if not self.rows:
            return []
        ints = [linalg.clear_denominators(r) for r in self.rows]
        sat, _ = linalg.saturation(ints, self.ambient)
        return sat

    def cohomology_class(self) -> CohClass:
        return subtorus_class(self.lattice(), self.ambient)

    def labels(self) -> set[str]:
        return {k for c in self.consts for k, _ in c}

    def __str__(self) -> str:
        if not self.rows:
            return f"E^{self.ambient}"
        eqs = []
        for r, c in zip(self.rows, self.consts):
            lhs = _render_linear([(x, f"x{i}") for i, x in enumerate(r, start=1)])
            rhs = _render_linear([(v, k) for k, v in c]) if c else "0"
            eqs.append(f"{lhs} = {rhs}")
        return "{" + ", ".join(eqs) + f"}} in E^{self.ambient}"


def _render_linear(terms) -> str:
    from .cycles import format_coeff
    out = ""
    for c, name in terms:
        if not c:
            continue
        mag = "" if abs(c) == 1 else format_coeff(abs(c)) + "*"
        if not out:
            out = ("-" if c < 0 else "") + mag + name
        else:
            out += (" - " if c < 0 else " + ") + mag + name
    return out or "0"


def divisor(ambient: int, coeffs: Mapping[int, int], consts=None) -> LinearSubtorus:
    row = [0] * ambient
    for i, c in coeffs.items():
        row[i - 1] += c
    return LinearSubtorus.of(ambient, [row], [consts or {}])


# --- intersection numbers -------------------------------------------------------

def _as_combination(x) -> dict[LinearSubtorus, Fraction]:
    if isinstance(x, LinearSubtorus):
        return {x: Fraction(1)}
    return {k: Fraction(v) for k, v in x.items()}


def _point_count(rows: Sequence[Sequence[int]]) -> int:
    """#{x in E^m : M x = 0} for square M, 0 if singular (no finite count)."""
    m = len(rows)
    two = [[0] * (2 * m) for _ in range(2 * m)]
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            two[2 * i][2 * j] = x
            two[2 * i + 1][2 * j + 1] = x
    divs = linalg.elementary_divisors(two)
    if len(divs) < 2 * m:
        return 0
    out = 1
    for d in divs:
        out *= d
    return out


def intersection_number(divisors: Sequence) -> Fraction:
    """Degree of the product of m divisors on E^m.

    Each argument is a codimension-1 LinearSubtorus or a rational combination
    of them.  A nonsingular system of equations M meets in |det M|^2 points
    (the index of (M ⊗ I_2) Z^{2m} in Z^{2m}); a singular one contributes 0.
    """
    combos = [_as_combination(d) for d in divisors]
    if not combos:
        return Fraction(1)
    tori = [t for c in combos for t in c]
    m = tori[0].ambient
    if any(t.ambient != m or t.codim != 1 for t in tori) or len(combos) != m:
        raise DimensionMismatch(f"need {m} divisors on E^{m}")
    total = Fraction(0)
    for choice in product(*(c.items() for c in combos)):
        coeff = Fraction(1)
        rows = []
        for t, c in choice:
            coeff *= c
            rows.append(t.lattice()[0])
        total += coeff * _point_count(rows)
    return total


def brute_force_count(rows: Sequence[Sequence[int]]) -> int:
    """Oracle: count kernel points of M on E^m inside E[N]^m, N = |det M|."""
    m = len(rows)
    n = abs(int(linalg.det(rows)))
    if n == 0:
        return 0
    solutions = 0
    for y in product(range(n), repeat=m):
        if all(sum(r[j] * y[j] for j in range(m)) % n == 0 for r in rows):
            solutions += 1
    return solutions * solutions  # E[N] = (Z/N)^2


# --- correspondences ------------------------------------------------------------

class CorrespondenceCycle:
    """Rational combination of subtori of E^source x E^target."""

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: int, target: int, terms: Mapping[LinearSubtorus, object] | None = None):
        self.source = source
        self.target = target
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}
        for t in self.terms:
            if t.ambient != source + target:
                raise DimensionMismatch(f"{t} is not in E^{source} x E^{target}")

    @property
    def ambient(self) -> int:
        return self.source + self.target

    def __add__(self, other: "CorrespondenceCycle") -> "CorrespondenceCycle":
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return CorrespondenceCycle(self.source, self.target, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return CorrespondenceCycle(self.source, self.target, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def _same(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise DimensionMismatch("correspondences between different powers")

    def __eq__(self, other):
        return (isinstance(other, CorrespondenceCycle) and self.source == other.source
                and self.target == other.target and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def cohomology_class(self) -> CohClass:
        out = CohClass(self.ambient)
        for t, c in self.terms.items():
            out = out + t.cohomology_class() * c
        return out

    def realization(self) -> RealizationMatrix:
        return class_matrix(self.cohomology_class(), self.source)

    def transpose(self) -> "CorrespondenceCycle":
        perm = list(range(self.source, self.ambient)) + list(range(self.source))
        out = {}
        for t, c in self.terms.items():
            rows = [[r[p] for p in perm] for r in t.rows]
            out[LinearSubtorus.of(self.ambient, rows, [dict(x) for x in t.consts])] = c
        return CorrespondenceCycle(self.target, self.source, out)

    def __str__(self) -> str:
        from .cycles import format_coeff
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda t: (t.rows, t.consts)):
            parts.append(f"{format_coeff(self.terms[t])} * {t}")
        return "\n".join(parts)

    __repr__ = __str__


def identity(m: int) -> CorrespondenceCycle:
    return graph([[int(i == j) for j in range(m)] for i in range(m)])


def graph(matrix: Sequence[Sequence[int]], source: int | None = None,
          offset: Sequence[Mapping[str, object]] | None = None) -> CorrespondenceCycle:
    """Graph of y = A x + offset, as a correspondence E^source -> E^len(A)."""
    target = len(matrix)
    if source is None:
        source = len(matrix[0]) if matrix else 0
    rows, consts = [], []
    for k, arow in enumerate(matrix):
        if len(arow) != source:
            raise DimensionMismatch("graph matrix rows must have source length")
        row = [-int(x) for x in arow] + [int(j == k) for j in range(target)]
        rows.append(row)
        consts.append(dict(offset[k]) if offset else {})
    return CorrespondenceCycle(source, target, {LinearSubtorus.of(source + target, rows, consts): 1})


def from_cycle(z: LinearCycle | Mapping[LinearSubtorus, object], source: int) -> CorrespondenceCycle:
    """Read a linear cycle on E^(source + target) as a correspondence.

    Each divisor is expanded into subtori (D_ij = P_i + P_j - Δ_ij) and the
    factors are intersected; excess intersections vanish.
    """
    if not isinstance(z, LinearCycle):
        tori = dict(z)
        m = next(iter(tori)).ambient if tori else source
        return CorrespondenceCycle(source, m - source, tori)
    m = z.ambient
    out: dict[LinearSubtorus, Fraction] = {}
    for mono, c in z.terms.items():
        expansions = [_divisor_expansion(f, m) for f in mono.factors]
        for choice in product(*expansions):
            coeff = c
            rows, consts = [], []
            for sign, row in choice:
                coeff *= sign
                rows.append(row)
                consts.append({})
            if not rows:
                key, comps = LinearSubtorus.of(m, []), 1
            else:
                if linalg.rank(rows) < len(rows):
                    continue  # excess intersection
                key, comps = LinearSubtorus.build(m, rows, consts)
                if key is None:
                    continue
            out[key] = out.get(key, 0) + coeff * comps
    return CorrespondenceCycle(source, m - source, out)


def _divisor_expansion(f, m):
    def row(pairs):
        r = [0] * m
        for i, c in pairs:
            r[i - 1] = c
        return r
    if f.kind == "P":
        return [(1, row([(f.indices[0], 1)]))]
    i, j = f.indices
    delta = row([(i, 1), (j, 1)]) if f.kind == "Dm" else row([(i, 1), (j, -1)])
    return [(1, row([(i, 1)])), (1, row([(j, 1)])), (-1, delta)]


@lru_cache(maxsize=200_000)
def _compose_tori(a: LinearSubtorus, b: LinearSubtorus, m1: int, m2: int, m3: int, strict: bool):
    """B∘A for single subtori: (result subtorus or None, multiplicity)."""
    n = m1 + m2 + m3
    rows, consts = [], []
    for r, c in zip(a.rows, a.consts):
        rows.append(list(r) + [0] * m3)
        consts.append(dict(c))
    for r, c in zip(b.rows, b.consts):
        rows.append([0] * m1 + list(r))
        consts.append(dict(c))
    if not rows:
        return (LinearSubtorus.of(m1 + m3, []), 1) if m2 == 0 else (None, 0)
    red = _reduce(n, rows, consts)
    if red is None:
        return None, 0
    if len(red[0]) < len(rows):
        if strict:
            raise ImproperComposition("middle intersection has excess dimension")
        return None, 0
    lattice = [r + [0] * m3 for r in a.lattice()] + [[0] * m1 + r for r in b.lattice()]
    _, index = linalg.saturation(lattice, n)
    mult = index * index
    # project away the middle coordinates
    mid = list(range(m1, m1 + m2))
    outer = list(range(m1)) + list(range(m1 + m2, n))
    sat_rows = [linalg.clear_denominators(r) for r in red[0]]
    sat, _ = linalg.saturation(sat_rows, n)
    mid_block = [[r[j] for j in mid] for r in sat]
    if m2 and linalg.rank(mid_block) < m2:
        return None, 0  # positive-dimensional fibres
    degree = 1
    for d in linalg.elementary_divisors(mid_block) if m2 else []:
        degree *= d * d
    order = mid + outer
    perm_rows = [[r[j] for j in order] for r in red[0]]
    red2 = _reduce(n, perm_rows, [dict(c) for c in red[1]])
    image_rows, image_consts = [], []
    for r, c in zip(*red2):
        if not any(r[:m2]):
            image_rows.append(list(r[m2:]))
            image_consts.append(dict(c))
    image = LinearSubtorus.of(m1 + m3, image_rows, image_consts)
    return image, mult * degree


def compose(a: CorrespondenceCycle, b: CorrespondenceCycle, strict: bool = False) -> CorrespondenceCycle:
    """B∘A: first A : E^m1 -> E^m2, then B : E^m2 -> E^m3.

    With ``strict`` an excess middle intersection raises ImproperComposition;
    otherwise it contributes 0, which is its value in the Chow group.
    """
    if a.target != b.source:
        raise DimensionMismatch(f"E^{a.target} vs E^{b.source} in the middle")
    m1, m2, m3 = a.source, a.target, b.target
    out: dict[LinearSubtorus, Fraction] = {}
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            image, mult = _compose_tori(ta, tb, m1, m2, m3, strict)
            if image is not None and mult:
                out[image] = out.get(image, 0) + ca * cb * mult
    return CorrespondenceCycle(m1, m3, out)


def external_product(a: CorrespondenceCycle, b: CorrespondenceCycle) -> CorrespondenceCycle:
    """a ⊗ b : E^(s1+s2) -> E^(t1+t2) with coordinates (x_a, x_b) -> (y_a, y_b)."""
    s1, t1, s2, t2 = a.source, a.target, b.source, b.target
    n = s1 + s2 + t1 + t2
    # positions in the product ambient
    pos_a = list(range(s1)) + [s1 + s2 + k for k in range(t1)]
    pos_b = [s1 + k for k in range(s2)] + [s1 + s2 + t1 + k for k in range(t2)]
    out: dict[LinearSubtorus, Fraction] = {}
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            rows, consts = [], []
            for t, pos in ((ta, pos_a), (tb, pos_b)):
                for r, c in zip(t.rows, t.consts):
                    full = [Fraction(0)] * n
                    for x, p in zip(r, pos):
                        full[p] = x
                    rows.append(full)
                    consts.append(dict(c))
            key = LinearSubtorus.of(n, rows, consts)
            out[key] = out.get(key, 0) + ca * cb
    return CorrespondenceCycle(s1 + s2, t1 + t2, out)


# --- text syntax: 1/2*graph(1) - 1/2*graph(-1) --------------------------------------

_GRAPH_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)(?:/(\d+))?\s*\*?\s*)?graph\(([^()]*)\)\s*")


def parse_graphs(text: str) -> CorrespondenceCycle:
    """Sum of ``coeff*graph(a11,a12;a21,a22)`` terms; rows separated by ';'."""
    pos = 0
    total = None
    while pos < len(text):
        m = _GRAPH_TERM.match(text, pos)
        if not m or (total is not None and not m.group(1)):
            from .grammar import ParseError
            raise ParseError("expected [coeff*]graph(...)", pos, text)
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(int(m.group(2) or 1), int(m.group(3) or 1)) * sign
        body = m.group(4).strip()
        matrix = [[int(x) for x in row.split(",")] for row in body.split(";")] if body else []
        g = graph(matrix) * coeff
        total = g if total is None else total + g
        pos = m.end()
    if total is None:
        from .grammar import ParseError
        raise ParseError("empty correspondence", 0, text)
    return total
