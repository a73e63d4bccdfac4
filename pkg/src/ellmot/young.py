"""Symmetric-group algebra, standard tableaux and Young idempotents.

Permutations are tuples ``s`` of images of 0..n-1, multiplied as maps:
``(s * t)(i) = s(t(i))``.  Tableaux are tuples of rows of labels 1..n.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, lcm
from typing import Iterable, Mapping

from .cycles import D, Dm, LinearCycle, Monomial, format_coeff

Perm = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]


# --- partitions and tableaux ----------------------------------------------------

def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n in reverse lexicographic order, (n) first."""
    out: list[tuple[int, ...]] = []

    def rec(left, cap, acc):
        if not left:
            out.append(tuple(acc))
            return
        for part in range(min(left, cap), 0, -1):
            rec(left - part, part, acc + [part])
    rec(n, n, [])
    return out


def shape_of(t: Tableau) -> tuple[int, ...]:
    return tuple(len(r) for r in t)


def is_standard(t: Tableau) -> bool:
    labels = sorted(x for r in t for x in r)
    if labels != list(range(1, len(labels) + 1)):
        return False
    if any(len(a) < len(b) for a, b in zip(t, t[1:])):
        return False
    rows_ok = all(a < b for r in t for a, b in zip(r, r[1:]))
    cols_ok = all(t[i][j] < t[i + 1][j] for i in range(len(t) - 1) for j in range(len(t[i + 1])))
    return rows_ok and cols_ok


def tableaux_of_shape(shape: tuple[int, ...]) -> list[Tableau]:
    """Standard tableaux of a shape, in lexicographic order of their row readings."""
    n = sum(shape)
    out: list[Tableau] = []

    def rec(k, rows):
        if k > n:
            out.append(tuple(tuple(r) for r in rows))
            return
        for i, length in enumerate(shape):
            if len(rows[i]) < length and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(k)
                rec(k + 1, rows)
                rows[i].pop()
    rec(1, [[] for _ in shape])
    return sorted(out)


def standard_tableaux(n: int) -> list[Tableau]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [t for shape in partitions(n) for t in tableaux_of_shape(shape)]


def hook_length_count(shape: tuple[int, ...]) -> int:
    """Number of standard tableaux of a shape by the hook-length formula."""
    n = sum(shape)
    cols = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    hooks = 1
    for i, r in enumerate(shape):
        for j in range(r):
            hooks *= (r - j - 1) + (cols[j] - i - 1) + 1
    return factorial(n) // hooks


def content(t: Tableau, label: int) -> int:
    for i, r in enumerate(t):
        if label in r:
            return r.index(label) - i
    raise KeyError(label)


def format_tableau(t: Tableau) -> str:
    return "/".join(" ".join(str(x) for x in r) for r in t)


# --- permutations -----------------------------------------------------------------

def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose_perm(s: Perm, t: Perm) -> Perm:
    return tuple(s[i] for i in t)


def sign(s: Perm) -> int:
    seen = [False] * len(s)
    parity = 0
    for i in range(len(s)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = s[j]
                length += 1
            parity += length - 1
    return -1 if parity % 2 else 1


def transposition(n: int, i: int, j: int) -> Perm:
    s = list(range(n))
    s[i], s[j] = s[j], s[i]
    return tuple(s)


def cycle_notation(s: Perm) -> str:
    """Cycles of length > 1 with labels 1..n, e.g. ``(1 2)(3 4)``; ``e`` for the identity."""
    seen = set()
    out = []
    for i in range(len(s)):
        if i in seen or s[i] == i:
            continue
        cyc = []
        j = i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = s[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "e"


@lru_cache(maxsize=None)
def _group(n: int) -> tuple[tuple[Perm, ...], dict, tuple[tuple[int, ...], ...]]:
    elements = tuple(permutations(range(n)))
    index = {p: k for k, p in enumerate(elements)}
    table = tuple(tuple(index[compose_perm(a, b)] for b in elements) for a in elements)
    return elements, index, table


# --- group algebra ------------------------------------------------------------------

class GroupAlgebraElement:
    """Exact-rational element of Q[S_n]."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Perm, object] | None = None):
        self.n = n
        self.terms = {tuple(p): Fraction(c) for p, c in (terms or {}).items() if c}
        for p in self.terms:
            if sorted(p) != list(range(n)):
                raise ValueError(f"{p} is not a permutation of {n} letters")

    @classmethod
    def one(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {identity_perm(n): 1})

    @classmethod
    def of(cls, n: int, perms: Iterable[Perm], signed: bool = False) -> "GroupAlgebraElement":
        out: dict[Perm, int] = {}
        for p in perms:
            out[p] = out.get(p, 0) + (sign(p) if signed else 1)
        return cls(n, out)

    def _same(self, other):
        if other.n != self.n:
            raise ValueError(f"Q[S_{self.n}] vs Q[S_{other.n}]")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, 0) + c
        return GroupAlgebraElement(self.n, out)

    def __neg__(self):
        return GroupAlgebraElement(self.n, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return GroupAlgebraElement(self.n, {p: c * other for p, c in self.terms.items()})
        self._same(other)
        elements, index, table = _group(self.n)
        # multiply scaled integer vectors; far cheaper than Fraction arithmetic
        da, a = self._scaled(index)
        db, b = other._scaled(index)
        acc: dict[int, int] = {}
        for i, x in a:
            row = table[i]
            for j, y in b:
                k = row[j]
                acc[k] = acc.get(k, 0) + x * y
        den = da * db
        return GroupAlgebraElement(self.n, {elements[k]: Fraction(v, den) for k, v in acc.items() if v})

    __rmul__ = lambda self, c: self * c  # noqa: E731

    def _scaled(self, index) -> tuple[int, list[tuple[int, int]]]:
        den = lcm(*(c.denominator for c in self.terms.values())) if self.terms else 1
        return den, [(index[p], int(c * den)) for p, c in self.terms.items()]

    def coefficient(self, p: Perm) -> Fraction:
        return self.terms.get(tuple(p), Fraction(0))

    def left_ideal_dimension(self) -> int:
        """dim Q[S_n]·e for an idempotent e, read off as n!·(coefficient of the identity).

        Right multiplication by an idempotent is a projection, so its rank is
        its trace, and the trace of right multiplication by g is n! or 0.
        """
        return int(factorial(self.n) * self.coefficient(identity_perm(self.n)))

    def left_ideal_rank(self) -> int:
        """dim Q[S_n]·e by exact rank of the vectors g·e; independent of idempotence."""
        from .linalg import rank
        elements, index, table = _group(self.n)
        rows = []
        for g in elements:
            v = [Fraction(0)] * len(elements)
            for p, c in self.terms.items():
                v[table[index[g]][index[p]]] += c
            rows.append(v)
        return rank(rows)

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        elements, index, _ = _group(self.n)
        parts = []
        for p in sorted(self.terms, key=lambda q: (sum(1 for i, x in enumerate(q) if i != x), index[q])):
            c = self.terms[p]
            text = ("" if c == 1 else "-" if c == -1 else format_coeff(c) + "*") + cycle_notation(p)
            parts.append(text)
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    __repr__ = __str__


# --- symmetrizers and idempotents -----------------------------------------------------

def _stabilizer(blocks: Iterable[Iterable[int]], n: int) -> list[Perm]:
    """Permutations of {0..n-1} preserving each block (labels given 1-based)."""
    blocks = [list(b) for b in blocks]
    out = []
    for choice in product(*(permutations(b) for b in blocks)):
        s = list(range(n))
        for b, img in zip(blocks, choice):
            for x, y in zip(b, img):
                s[x - 1] = y - 1
        out.append(tuple(s))
    return out


def young_symmetrizer(t: Tableau) -> GroupAlgebraElement:
    """(f_λ / n!) · (sum of row permutations) · (signed sum of column permutations)."""
    if not is_standard(t):
        raise ValueError(f"{format_tableau(t)} is not a standard tableau")
    n = sum(shape_of(t))
    columns = [[r[j] for r in t if len(r) > j] for j in range(len(t[0]))] if t else []
    rows = GroupAlgebraElement.of(n, _stabilizer(t, n))
    cols = GroupAlgebraElement.of(n, _stabilizer(columns, n), signed=True)
    return rows * cols * Fraction(hook_length_count(shape_of(t)), factorial(n))


def jucys_murphy(n: int, k: int) -> GroupAlgebraElement:
    """X_k = sum_{i<k} (i k), labels 1-based; X_1 = 0."""
    return GroupAlgebraElement.of(n, [transposition(n, i, k - 1) for i in range(k - 1)])


@lru_cache(maxsize=None)
def _seminormal(t: Tableau) -> GroupAlgebraElement:
    n = sum(shape_of(t))
    if n <= 1:
        return GroupAlgebraElement.one(n)
    # drop the cell holding n and lift the parent idempotent into Q[S_n]
    parent = tuple(r for r in (tuple(x for x in r if x != n) for r in t) if r)
    lifted = GroupAlgebraElement(n, {p + (n - 1,): c for p, c in _seminormal(parent).terms.items()})
    shape = shape_of(parent)
    addable = [r - i for i, r in enumerate(shape) if i == 0 or shape[i - 1] > r]
    addable.append(-len(shape))
    target = content(t, n)
    out = lifted
    x = jucys_murphy(n, n)
    for c in addable:
        if c != target:
            out = (out * x - out * c) * Fraction(1, target - c)
    return out


def orthogonal_idempotent(t: Tableau) -> GroupAlgebraElement:
    """The member of the orthogonal family belonging to a standard tableau."""
    if not is_standard(t):
        raise ValueError("not a standard tableau")
    return _seminormal(tuple(tuple(r) for r in t))


def orthogonal_idempotents(n: int, bound: int = 6) -> list[GroupAlgebraElement]:
    """Primitive orthogonal idempotents indexed by standard_tableaux(n), summing to 1.

    Each is the joint eigenprojector of the Jucys-Murphy elements for the
    content vector of its tableau.
    """
    if n > bound:
        raise ValueError(f"n = {n} exceeds the configured bound {bound}")
    return [_seminormal(t) for t in standard_tableaux(n)]


# --- Schur projectors as correspondences ------------------------------------------------

def epsilon(i: int, j: int, m: int) -> LinearCycle:
    """½(Δ_ij − Δ⁻_ij) = ½(D⁻_ij − D_ij): projector onto H¹ between factors i and j."""
    return LinearCycle(m, {Monomial(m, [Dm(i, j)]): Fraction(1, 2), Monomial(m, [D(i, j)]): Fraction(-1, 2)})


def permutation_cycle(p: Perm, with_epsilon: bool = True) -> LinearCycle:
    """The graph of y_p(i) = x_i on E^n x E^n, or its H¹-part if ``with_epsilon``."""
    from .cycles import permutation_graph
    n = len(p)
    if not with_epsilon:
        return permutation_graph(tuple(x + 1 for x in p))
    out = LinearCycle.one(2 * n)
    for i in range(n):
        out = out.times(epsilon(i + 1, n + p[i] + 1, 2 * n))
    return out


def element_cycle(e: GroupAlgebraElement, with_epsilon: bool = True) -> LinearCycle:
    """Push an element of Q[S_n] to a linear cycle on E^(2n).

    On V = h¹ the tensor factors are odd, so each permutation is weighted by
    its sign; the realization is then the plain permutation action on
    (H¹)^⊗n.
    """
    n = e.n
    out = LinearCycle(2 * n)
    for p, c in e.terms.items():
        weight = c * sign(p) if with_epsilon else c
        out = out + permutation_cycle(p, with_epsilon) * weight
    return out


def schur_projector_cycle(t: Tableau, with_epsilon: bool = True) -> LinearCycle:
    n = sum(shape_of(t))
    idempotents = dict(zip(standard_tableaux(n), orthogonal_idempotents(n)))
    return element_cycle(idempotents[t], with_epsilon)
