"""DG complexes over a pluggable morphism algebra, and their Schur resolution.

A complex has objects at integer positions, each a direct sum of
:class:`MotiveTerm` summands, and maps ``f[p, q]`` for p > q given as blocks
``{(target summand, source summand): element}``.  Elements of a morphism
algebra support ``+``, ``-``, scalar ``*``, composition ``x @ y`` (x after
y), ``boundary()`` and truth testing.

Signs use total degree: every map f_pq is odd, the homotopies H are odd,
and the DG condition reads  ∂f_pq + Σ_r f_pr f_rq = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping

Block = dict[tuple[int, int], object]


@dataclass(frozen=True)
class MotiveTerm:
    """One summand: R Γ(E^power), V, a unit or a Schur/Karoubi piece, with twist (m) and shift [p]."""

    kind: str = "E"
    power: int = 0
    twist: int = 0
    shift: int = 0
    label: str = ""
    resolved: bool = False

    def __str__(self) -> str:
        base = {"E": f"Q_E^{self.power}", "unit": "Q", "V": "V", "opaque": self.label}.get(self.kind, self.kind)
        if self.kind == "E" and self.label:
            base = f"Q_{self.label}"
        if self.resolved:
            base = f"S({base})"
        tw = f"({-self.twist})" if self.twist else ""
        sh = f"[{self.shift}]" if self.shift else ""
        return base + tw + sh


# --- block arithmetic -------------------------------------------------------------

def block_add(x: Block, y: Block) -> Block:
    out = dict(x)
    for k, v in y.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v}


def block_scale(x: Block, c) -> Block:
    return {k: v * c for k, v in x.items() if c}


def block_compose(x: Block, y: Block) -> Block:
    """x after y."""
    by_target: dict[int, list] = {}
    for (t, s), v in y.items():
        by_target.setdefault(t, []).append((s, v))
    out: Block = {}
    for (t, mid), u in x.items():
        for s, v in by_target.get(mid, ()):
            w = u @ v
            if w:
                out[(t, s)] = out[(t, s)] + w if (t, s) in out else w
    return {k: v for k, v in out.items() if v}


def block_boundary(x: Block) -> Block:
    out = {k: v.boundary() for k, v in x.items()}
    return {k: v for k, v in out.items() if v}


def block_neg(x: Block) -> Block:
    return block_scale(x, -1)


def diagonal_block(elements: Iterable) -> Block:
    return {(i, i): e for i, e in enumerate(elements) if e}


# --- complexes --------------------------------------------------------------------

@dataclass
class DGComplex:
    objects: dict[int, list[MotiveTerm]]
    maps: dict[tuple[int, int], Block]
    algebra: object = None

    def positions(self) -> list[int]:
        return sorted(self.objects)

    def map(self, p: int, q: int) -> Block:
        return self.maps.get((p, q), {})

    def nonzero_maps(self) -> dict[tuple[int, int], Block]:
        return {k: v for k, v in self.maps.items() if v}


@dataclass
class Violation:
    p: int
    q: int
    residual: Block

    def __str__(self) -> str:
        entries = "; ".join(f"[{t},{s}] {v}" for (t, s), v in sorted(self.residual.items()))
        return f"DG identity fails at ({self.p}, {self.q}): {entries}"


@dataclass
class DGReport:
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return f"PASS: {self.checked} DG identities hold"
        return "FAIL\n" + "\n".join(str(v) for v in self.violations)


def dg_residual(K: DGComplex, p: int, q: int) -> Block:
    total = block_boundary(K.map(p, q))
    for r in K.positions():
        if q < r < p:
            total = block_add(total, block_compose(K.map(p, r), K.map(r, q)))
    return total


def check_dg(K: DGComplex) -> DGReport:
    """Evaluate ∂f_pq + Σ f_pr f_rq for every p > q; list the nonzero ones."""
    report = DGReport()
    pos = K.positions()
    for q, p in combinations(pos, 2):
        report.checked += 1
        res = dg_residual(K, p, q)
        if res:
            report.violations.append(Violation(p, q, res))
    return report


# --- resolution -----------------------------------------------------------------------

@dataclass
class ResolutionData:
    """Per-summand data: the resolved summand, i* (I), π* (P) and the standard homotopy H.

    They satisfy I P = 1 and ∂H = 1 - P I.
    """

    term: MotiveTerm
    I: object
    P: object
    H: object


@dataclass
class Resolution:
    source: DGComplex
    complex: DGComplex
    homotopies: dict[tuple[int, int], Block]
    I: dict[int, Block]
    P: dict[int, Block]
    H: dict[int, Block]

    def comparison_residual(self, p: int, q: int) -> Block:
        """∂h_pq - [I_p f_pq - F_pq I_q + Σ_r (h_pr f_rq - F_pr h_rq)]; zero when the comparison map is closed."""
        K, R = self.source, self.complex
        h = self.homotopies
        rhs = block_add(block_compose(self.I[p], K.map(p, q)), block_neg(block_compose(R.map(p, q), self.I[q])))
        for r in K.positions():
            if q < r < p:
                rhs = block_add(rhs, block_compose(h.get((p, r), {}), K.map(r, q)))
                rhs = block_add(rhs, block_neg(block_compose(R.map(p, r), h.get((r, q), {}))))
        return block_add(block_boundary(h.get((p, q), {})), block_neg(rhs))

    def check_comparison(self) -> DGReport:
        report = DGReport()
        for q, p in combinations(self.source.positions(), 2):
            report.checked += 1
            res = self.comparison_residual(p, q)
            if res:
                report.violations.append(Violation(p, q, res))
        return report


def resolve(K: DGComplex, data: Callable[[MotiveTerm], ResolutionData] | None = None) -> Resolution:
    """Transfer K to its resolved terms with the alternating chain sums.

    With G_pq = f_pq - Σ_{q<r<p} f_pr H_r G_rq (the signed sum over chains
    q < r_s < ... < r_1 < p of f H f ... H f), the new maps are
    F_pq = I_p G_pq P_q and the comparison homotopies h_pq = -I_p G_pq H_q.
    """
    data = data or K.algebra.resolution
    pos = K.positions()
    res = {p: [data(t) for t in K.objects[p]] for p in pos}
    I = {p: diagonal_block(d.I for d in res[p]) for p in pos}
    P = {p: diagonal_block(d.P for d in res[p]) for p in pos}
    H = {p: diagonal_block(d.H for d in res[p]) for p in pos}
    G: dict[tuple[int, int], Block] = {}
    for q, p in sorted(combinations(pos, 2), key=lambda qp: qp[1] - qp[0]):
        g = dict(K.map(p, q))
        for r in pos:
            if q < r < p and G.get((r, q)):
                g = block_add(g, block_neg(block_compose(block_compose(K.map(p, r), H[r]), G[(r, q)])))
        G[(p, q)] = g
    F = {(p, q): block_compose(block_compose(I[p], g), P[q]) for (p, q), g in G.items()}
    h = {(p, q): block_neg(block_compose(block_compose(I[p], g), H[q])) for (p, q), g in G.items()}
    objects = {p: [d.term for d in res[p]] for p in pos}
    return Resolution(K, DGComplex(objects, {k: v for k, v in F.items() if v}, K.algebra), h, I, P, H)


# --- double complexes -------------------------------------------------------------------

@dataclass
class DoubleComplex:
    """Objects at (col, row); horizontal maps (col, row) -> (col+1, row), vertical (col, row) -> (col, row+1).

    Both are strict: squares commute and each direction squares to zero.
    """

    objects: dict[tuple[int, int], list[MotiveTerm]]
    horizontal: dict[tuple[int, int], Block]
    vertical: dict[tuple[int, int], Block]
    algebra: object = None

    def transpose(self) -> "DoubleComplex":
        swap = lambda d: {(r, c): v for (c, r), v in d.items()}  # noqa: E731
        return DoubleComplex(swap(self.objects), swap(self.vertical), swap(self.horizontal), self.algebra)


def totalize(D: DoubleComplex) -> DGComplex:
    """Total complex at positions col + row; vertical maps out of column c carry (-1)^c.

    Summands of a position are ordered by (col, row) and then by their index.
    """
    layout: dict[int, list[tuple[int, int, int]]] = {}
    objects: dict[int, list[MotiveTerm]] = {}
    for (c, r) in sorted(D.objects):
        pos = c + r
        for k, term in enumerate(D.objects[(c, r)]):
            layout.setdefault(pos, []).append((c, r, k))
            objects.setdefault(pos, []).append(term)
    index = {pos: {key: i for i, key in enumerate(keys)} for pos, keys in layout.items()}
    maps: dict[tuple[int, int], Block] = {}
    for arrows, step, signed in ((D.horizontal, (1, 0), False), (D.vertical, (0, 1), True)):
        for (c, r), block in arrows.items():
            if not block:
                continue
            src, tgt = c + r, c + r + 1
            tc, tr = c + step[0], r + step[1]
            sign = -1 if signed and c % 2 else 1
            entry = maps.setdefault((tgt, src), {})
            for (t, s), v in block.items():
                key = (index[tgt][(tc, tr, t)], index[src][(c, r, s)])
                val = v * sign
                entry[key] = entry[key] + val if key in entry else val
    return DGComplex(objects, {k: {kk: vv for kk, vv in v.items() if vv} for k, v in maps.items()}, D.algebra)


# --- the opaque algebra ----------------------------------------------------------------------

Word = tuple[str, ...]


class OpaqueAlgebra:
    """Free algebra on named generators with declared degrees, boundaries and rewrite rules.

    Rules replace a contiguous subword by an element and must shorten words.
    ``resolution`` supplies I, P, H generators for each summand with the
    relations I P = 1 and ∂H = 1 - P I.
    """

    def __init__(self):
        self.degrees: dict[str, int] = {}
        self.boundaries: dict[str, "OpaqueElement"] = {}
        self.rules: dict[Word, "OpaqueElement"] = {}
        self.aliases: dict[Word, tuple[str, Fraction]] = {}
        self._resolved: dict[MotiveTerm, ResolutionData] = {}

    def one(self) -> "OpaqueElement":
        return OpaqueElement(self, {(): 1})

    def zero(self) -> "OpaqueElement":
        return OpaqueElement(self, {})

    def generator(self, name: str, degree: int, boundary: "OpaqueElement | None" = None) -> "OpaqueElement":
        if name in self.degrees and self.degrees[name] != degree:
            raise ValueError(f"generator {name} redeclared with another degree")
        self.degrees[name] = degree
        if boundary is not None and boundary:
            self.boundaries[name] = boundary
        return OpaqueElement(self, {(name,): 1})

    def set_boundary(self, name: str, boundary: "OpaqueElement"):
        self.boundaries[name] = boundary

    def word(self, *names: str) -> "OpaqueElement":
        return OpaqueElement(self, {tuple(names): 1})

    def relation(self, lhs: Word, rhs: "OpaqueElement"):
        lhs = tuple(lhs)
        if any(len(w) >= len(lhs) for w in rhs.terms):
            raise ValueError("rewrite rules must shorten words")
        self.rules[lhs] = rhs

    def alias(self, word: Word, name: str, coeff=1):
        """Print ``coeff * word`` as ``name``."""
        self.aliases[tuple(word)] = (name, Fraction(coeff))

    def normalize(self, terms: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        work = [(w, c) for w, c in terms.items() if c]
        while work:
            w, c = work.pop()
            hit = self._find_rule(w)
            if hit is None:
                out[w] = out.get(w, 0) + c
                continue
            i, lhs = hit
            for rw, rc in self.rules[lhs].terms.items():
                work.append((w[:i] + rw + w[i + len(lhs):], c * rc))
        return {w: c for w, c in out.items() if c}

    def _find_rule(self, w: Word):
        for i in range(len(w)):
            for lhs in self.rules:
                if w[i:i + len(lhs)] == lhs:
                    return i, lhs
        return None

    def word_degree(self, w: Word) -> int:
        return sum(self.degrees[g] for g in w)

    def resolution(self, term: MotiveTerm) -> ResolutionData:
        if term not in self._resolved:
            name = term.label or str(term)
            i = self.generator(f"I_{name}", 0)
            p = self.generator(f"P_{name}", 0)
            h = self.generator(f"H_{name}", -1)
            self.relation((f"I_{name}", f"P_{name}"), self.one())
            self.set_boundary(f"H_{name}", self.one() - p @ i)
            self._resolved[term] = ResolutionData(replace(term, resolved=True), i, p, h)
        return self._resolved[term]

    def check_boundary_squares(self) -> list[str]:
        """Generators whose declared boundary does not square to zero."""
        return [g for g, b in self.boundaries.items() if b.boundary()]


class OpaqueElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: OpaqueAlgebra, terms: Mapping[Word, object]):
        self.algebra = algebra
        self.terms = algebra.normalize({tuple(w): Fraction(c) for w, c in terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return OpaqueElement(self.algebra, out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return OpaqueElement(self.algebra, {w: v * c for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        out: dict[Word, Fraction] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                out[u + v] = out.get(u + v, 0) + a * b
        return OpaqueElement(self.algebra, out)

    def boundary(self) -> "OpaqueElement":
        alg = self.algebra
        out = alg.zero()
        for w, c in self.terms.items():
            deg = 0
            for i, g in enumerate(w):
                b = alg.boundaries.get(g)
                if b is not None:
                    sign = -1 if deg % 2 else 1
                    out = out + alg.word(*w[:i]) @ b @ alg.word(*w[i + 1:]) * (c * sign)
                deg += alg.degrees[g]
        return out

    def degrees(self) -> set[int]:
        return {self.algebra.word_degree(w) for w in self.terms}

    def __eq__(self, other):
        return isinstance(other, OpaqueElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self) -> str:
        from .cycles import format_sum
        if not self.terms:
            return "0"
        shown: dict = {}
        for w, c in self.terms.items():
            if w in self.algebra.aliases:
                name, k = self.algebra.aliases[w]
                shown[(1, name)] = shown.get((1, name), 0) + c / k
            else:
                shown[(0, " ".join(w) or "1")] = c
        return format_sum(shown, lambda key: key[1], key=lambda key: key)

    __repr__ = __str__


# --- realization ----------------------------------------------------------------------

@dataclass
class RealizedComplex:
    """Exact cochain complex: spaces by degree and differentials d[deg] : C^deg -> C^(deg+1)."""

    dims: dict[int, int]
    differentials: dict[int, list[list[Fraction]]]

    def d_squared_zero(self) -> bool:
        from .linalg import matmul
        for deg, d in self.differentials.items():
            nxt = self.differentials.get(deg + 1)
            if nxt and d and any(x for r in matmul(nxt, d) for x in r):
                return False
        return True

    def cohomology(self) -> dict[int, int]:
        from .linalg import rank
        ranks = {deg: (rank(d) if d and d[0] else 0) for deg, d in self.differentials.items()}
        out = {}
        for deg, dim in sorted(self.dims.items()):
            h = dim - ranks.get(deg, 0) - ranks.get(deg - 1, 0)
            if h:
                out[deg] = h
        return out


def realize_complex(K: DGComplex, offset: int = 0) -> RealizedComplex:
    """Apply the Betti realization objectwise; only the edge maps f_{p+1,p} survive on cohomology.

    A summand contributes its cohomology classes in degree
    position + class degree - shift - offset.  The algebra must provide
    ``term_basis(term)`` (class degrees of a basis) and
    ``realize(element, source_term, target_term)`` (an exact matrix).
    """
    alg = K.algebra
    basis: dict[int, list[tuple[int, int, int]]] = {}
    for pos in K.positions():
        for s, term in enumerate(K.objects[pos]):
            for k, deg in enumerate(alg.term_basis(term)):
                basis.setdefault(pos + deg - term.shift - offset, []).append((pos, s, k))
    index = {deg: {key: i for i, key in enumerate(keys)} for deg, keys in basis.items()}
    dims = {deg: len(keys) for deg, keys in basis.items()}
    diffs: dict[int, list[list[Fraction]]] = {}
    for deg in dims:
        if deg + 1 in dims:
            diffs[deg] = [[Fraction(0)] * dims[deg] for _ in range(dims[deg + 1])]
    for pos in K.positions():
        block = K.map(pos + 1, pos)
        for (t, s), elem in block.items():
            src, tgt = K.objects[pos][s], K.objects[pos + 1][t]
            mat = alg.realize(elem, src, tgt)
            sdeg = alg.term_basis(src)
            tdeg = alg.term_basis(tgt)
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if not x:
                        continue
                    a = pos + sdeg[j] - src.shift - offset
                    b = pos + 1 + tdeg[i] - tgt.shift - offset
                    if b != a + 1:
                        raise ValueError(f"map {pos}->{pos + 1} does not raise degree by one")
                    diffs[a][index[b][(pos + 1, t, i)]][index[a][(pos, s, j)]] += x
    return RealizedComplex(dims, diffs)
