"""Exact Betti realization of linear cycles.

H*(E^m, Q) is the exterior algebra on a_1, b_1, ..., a_m, b_m, with
generators ordered a_1 < b_1 < a_2 < ... .  An ordered monomial is stored as
a sorted tuple of generator numbers (a_i -> 2i-2, b_i -> 2i-1), so it is the
same thing as a Künneth word with one symbol in {1, a, b, ab} per factor.
Orientation: a_i b_i is the point class of the i-th factor.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .cycles import Factor, LinearCycle, Monomial

Word = tuple[int, ...]
_LETTERS = ("1", "a", "b", "ab")


def _merge_sign(u: Sequence[int], v: Sequence[int]) -> tuple[int, Word | None]:
    """Sign and sorted union of u*v, or (0, None) if they share a generator."""
    if set(u) & set(v):
        return 0, None
    inversions = 0
    j = 0
    # count pairs (x in u, y in v) with x > y
    vs = sorted(v)
    for x in u:
        while j < len(vs) and vs[j] < x:
            j += 1
        inversions += j
    return (-1 if inversions % 2 else 1), tuple(sorted((*u, *v)))


def gen_a(i: int) -> int:
    return 2 * i - 2


def gen_b(i: int) -> int:
    return 2 * i - 1


class CohClass:
    """Element of H*(E^m, Q) with exact coefficients."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Mapping[Word, object] | None = None):
        self.m = m
        self.terms = {tuple(k): Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def one(cls, m: int) -> "CohClass":
        return cls(m, {(): 1})

    @classmethod
    def generator(cls, m: int, g: int) -> "CohClass":
        return cls(m, {(g,): 1})

    @classmethod
    def linear(cls, m: int, coeffs: Mapping[int, object]) -> "CohClass":
        return cls(m, {(g,): c for g, c in coeffs.items()})

    @classmethod
    def from_word(cls, word: str | Sequence[str], coeff=1) -> "CohClass":
        """Build a basis element from per-factor letters, e.g. ``("a", "1", "ab")``."""
        if isinstance(word, str):
            word = word.split(",")
        gens: list[int] = []
        for i, letter in enumerate(word, start=1):
            if letter not in _LETTERS:
                raise ValueError(f"bad Künneth letter {letter!r}")
            if "a" in letter:
                gens.append(gen_a(i))
            if "b" in letter:
                gens.append(gen_b(i))
        return cls(len(word), {tuple(gens): coeff})

    def __add__(self, other: "CohClass") -> "CohClass":
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return CohClass(self.m, out)

    def __neg__(self) -> "CohClass":
        return CohClass(self.m, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + (-other)

    def __mul__(self, c) -> "CohClass":
        if isinstance(c, CohClass):
            return self.cup(c)
        return CohClass(self.m, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def cup(self, other: "CohClass") -> "CohClass":
        self._same(other)
        out: dict[Word, Fraction] = {}
        for u, x in self.terms.items():
            for v, y in other.terms.items():
                s, w = _merge_sign(u, v)
                if s:
                    out[w] = out.get(w, 0) + s * x * y
        return CohClass(self.m, out)

    def _same(self, other: "CohClass"):
        if other.m != self.m:
            raise ValueError(f"H*(E^{self.m}) vs H*(E^{other.m})")

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    def __eq__(self, other):
        return isinstance(other, CohClass) and self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self) -> str:
        from .cycles import format_sum
        return format_sum(self.terms, word_name, key=lambda w: (len(w), w))

    __repr__ = __str__


def word_name(w: Word) -> str:
    if not w:
        return "1"
    return "*".join(("a" if g % 2 == 0 else "b") + str(g // 2 + 1) for g in w)


def pullback_linear_form(row: Sequence[int], m: int, letter: str) -> CohClass:
    """Pull back the degree-1 class a (or b) along x -> sum row_i x_i."""
    gen = gen_a if letter == "a" else gen_b
    return CohClass.linear(m, {gen(i): c for i, c in enumerate(row, start=1) if c})


def subtorus_class(rows: Iterable[Sequence[int]], m: int) -> CohClass:
    """Class of {x : R x = 0} on E^m, counted with degree.

    It is the pullback of the point class under R : E^m -> E^r, i.e. the
    product over rows of (sum r_i a_i)(sum r_i b_i).
    """
    out = CohClass.one(m)
    for row in rows:
        out = out.cup(pullback_linear_form(row, m, "a")).cup(pullback_linear_form(row, m, "b"))
    return out


def _unit_row(m: int, pairs: Mapping[int, int]) -> list[int]:
    row = [0] * m
    for i, c in pairs.items():
        row[i - 1] += c
    return row


def diagonal_class(i: int, j: int, m: int, minus: bool = False) -> CohClass:
    return subtorus_class([_unit_row(m, {i: 1, j: 1 if minus else -1})], m)


def point_class(i: int, m: int) -> CohClass:
    return subtorus_class([_unit_row(m, {i: 1})], m)


def divisor_class(f: Factor, m: int) -> CohClass:
    """[P_i], [D_ij] = -[Δ_ij] + [P_i] + [P_j], [D⁻_ij] = -[Δ⁻_ij] + [P_i] + [P_j]."""
    if f.kind == "P":
        return point_class(f.indices[0], m)
    i, j = f.indices
    delta = diagonal_class(i, j, m, minus=(f.kind == "Dm"))
    return point_class(i, m) + point_class(j, m) - delta


def monomial_class(mono: Monomial) -> CohClass:
    out = CohClass.one(mono.ambient)
    for f in mono.factors:
        out = out.cup(divisor_class(f, mono.ambient))
    return out


def cycle_class(gamma: LinearCycle) -> CohClass:
    out = CohClass(gamma.ambient)
    for mono, c in gamma.terms.items():
        out = out + monomial_class(mono) * c
    return out


def basis(m: int) -> list[Word]:
    """Künneth basis of H*(E^m) in lexicographic order of per-factor letters 1 < a < b < ab."""
    out = []
    for letters in product(range(4), repeat=m):
        w: list[int] = []
        for i, l in enumerate(letters, start=1):
            if l in (1, 3):
                w.append(gen_a(i))
            if l in (2, 3):
                w.append(gen_b(i))
        out.append(tuple(w))
    return out


def shift_word(w: Word, factors: int) -> Word:
    return tuple(g + 2 * factors for g in w)


def correspondence_action(cls: CohClass, m1: int, phi: CohClass) -> CohClass:
    """Apply a class on E^(m1+m2) to phi in H*(E^m1): integrate pull(phi) ∪ [γ] over the source."""
    m = cls.m
    if phi.m != m1 or m1 > m:
        raise ValueError("source dimension mismatch")
    m2 = m - m1
    src = 2 * m1
    pulled = CohClass(m, phi.terms)  # source generators already occupy the first slots
    prod = pulled.cup(cls)
    out: dict[Word, Fraction] = {}
    full = tuple(range(src))
    for w, c in prod.terms.items():
        if w[:src] == full:
            t = shift_word(w[src:], -m1)
            out[t] = out.get(t, 0) + c
    return CohClass(m2, out)


class RealizationMatrix:
    """Matrix of a correspondence H*(E^source) -> H*(E^target).

    Rows are indexed by the target basis and columns by the source basis,
    both in :func:`basis` order, so composition is matrix product.
    """

    def __init__(self, source: int, target: int, rows: list[list[Fraction]]):
        self.source = source
        self.target = target
        self.rows = rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __matmul__(self, other: "RealizationMatrix") -> "RealizationMatrix":
        from .linalg import matmul
        if other.target != self.source:
            raise ValueError("incompatible realization matrices")
        return RealizationMatrix(other.source, self.target, matmul(self.rows, other.rows))

    def __eq__(self, other):
        return (isinstance(other, RealizationMatrix) and self.source == other.source
                and self.target == other.target and self.rows == other.rows)

    def flatten(self) -> list[Fraction]:
        return [x for r in self.rows for x in r]

    def __str__(self) -> str:
        from .cycles import format_coeff
        return "\n".join(" ".join(format_coeff(x) for x in r) for r in self.rows)


def class_matrix(cls: CohClass, m1: int) -> RealizationMatrix:
    """Realization matrix read directly off the class, without acting on each basis vector."""
    m2 = cls.m - m1
    src = 2 * m1
    src_basis = basis(m1)
    tgt_basis = basis(m2)
    col_of = {w: i for i, w in enumerate(src_basis)}
    row_of = {w: i for i, w in enumerate(tgt_basis)}
    rows = [[Fraction(0)] * len(src_basis) for _ in tgt_basis]
    all_src = set(range(src))
    for w, c in cls.terms.items():
        s = tuple(g for g in w if g < src)
        t = shift_word(tuple(g for g in w if g >= src), -m1)
        u = tuple(sorted(all_src - set(s)))
        sign, _ = _merge_sign(u, s)
        rows[row_of[t]][col_of[u]] += sign * c
    return RealizationMatrix(m1, m2, rows)


def realization_matrix(gamma: LinearCycle, m1: int, m2: int | None = None) -> RealizationMatrix:
    if m2 is None:
        m2 = gamma.ambient - m1
    if m1 + m2 != gamma.ambient:
        raise ValueError(f"E^{m1} x E^{m2} is not the ambient E^{gamma.ambient}")
    return class_matrix(cycle_class(gamma), m1)


def check_kernel(gamma: LinearCycle) -> bool:
    """True iff r(γ) = 0; the class determines the correspondence, so this is class vanishing."""
    return not cycle_class(gamma)


def transpose_class(cls: CohClass, m1: int) -> CohClass:
    """Swap the source block E^m1 and the target block of a class on E^(m1+m2)."""
    m2 = cls.m - m1
    out: dict[Word, Fraction] = {}
    for w, c in cls.terms.items():
        s = tuple(g for g in w if g < 2 * m1)
        t = tuple(g - 2 * m1 for g in w if g >= 2 * m1)
        new_t = tuple(g + 2 * m2 for g in s)
        sign = -1 if (len(s) * len(t)) % 2 else 1
        out[t + new_t] = out.get(t + new_t, 0) + sign * c
    return CohClass(cls.m, out)
