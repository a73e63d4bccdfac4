"""Morphisms between powers of E as words in correspondences and standard homotopies.

A word alternates closed correspondences (single subtori, with a parity for
the sign rule) and homotopy symbols H_k on E^k:

    C_0 H_k1 C_1 H_k2 ... C_m,

read as a composite, rightmost first.  Adjacent correspondences are
composed on the spot, so a word is in normal form once its slots are
subtori.  ∂ acts on the H_k only, through ∂H_k = 1 - p_k with
p = βα = P_1 + P_2 + ½(Δ - Δ⁻) on each factor.

:func:`standard_homotopy` gives the explicit level-1 cycle behind H_k.
"""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .cohomology import basis
from .correspondences import (
    CorrespondenceCycle, LinearSubtorus, _compose_tori, from_cycle, identity,
)
from .cycles import (
    D, Dm, LinearCycle, Monomial, P, WitnessCycle, Wjk, boundary, diagonal,
)
from .dg import MotiveTerm, ResolutionData

CToken = tuple  # ("C", source, target, torus, parity)
HToken = tuple  # ("H", k)


# --- the projector βα and the standard homotopy as cycles ----------------------------------

def projector_cycle(k: int) -> LinearCycle:
    """(βα)^⊗k on E^k x E^k, factors ordered (x_1..x_k, y_1..y_k)."""
    m = 2 * k
    out = LinearCycle.one(m)
    for i in range(1, k + 1):
        out = out.times(_p_factor(i, k + i, m))
    return out


def _p_factor(i: int, j: int, m: int) -> LinearCycle:
    half = Fraction(1, 2)
    return LinearCycle(m, {Monomial(m, [P(i)]): 1, Monomial(m, [P(j)]): 1,
                           Monomial(m, [Dm(i, j)]): half, Monomial(m, [D(i, j)]): -half})


def identity_cycle(k: int) -> LinearCycle:
    out = LinearCycle.one(2 * k)
    for i in range(1, k + 1):
        out = out.times(diagonal(i, k + i, 2 * k))
    return out


def standard_homotopy(k: int) -> WitnessCycle:
    """H_k = Σ_i p^⊗(i-1) ⊗ h ⊗ 1^⊗(k-i) with h = -½ W(x_i, y_i).

    Its boundary telescopes to 1 - p^⊗k; for k = 0 it is 0.
    """
    m = 2 * k
    out = WitnessCycle(m)
    for i in range(1, k + 1):
        rest = LinearCycle.one(m)
        for l in range(1, k + 1):
            if l < i:
                rest = rest.times(_p_factor(l, k + l, m))
            elif l > i:
                rest = rest.times(diagonal(l, k + l, m))
        out = out + WitnessCycle.single(m, Wjk(i, k + i), coeff=Fraction(-1, 2)).times_cycle(rest)
    return out


def check_standard_homotopy(k: int) -> bool:
    return boundary(standard_homotopy(k)) == identity_cycle(k) - projector_cycle(k)


@lru_cache(maxsize=None)
def projector(k: int) -> CorrespondenceCycle:
    if k == 0:
        return identity(0)
    return from_cycle(projector_cycle(k), k)


# --- words ----------------------------------------------------------------------------

def _c(source: int, target: int, torus: LinearSubtorus, parity: int) -> CToken:
    return ("C", source, target, torus, parity % 2)


def _word_parity(w) -> int:
    return sum(t[4] if t[0] == "C" else 1 for t in w) % 2


@lru_cache(maxsize=None)
def _merge(first: CToken, second: CToken) -> tuple[tuple[CToken, Fraction], ...]:
    """second after first, as a combination of single-subtorus tokens."""
    if first[2] != second[1]:
        raise ValueError(f"E^{first[2]} vs E^{second[1]} in a composite")
    image, mult = _compose_tori(first[3], second[3], first[1], first[2], second[2], False)
    if image is None or not mult:
        return ()
    return ((_c(first[1], second[2], image, first[4] + second[4]), Fraction(mult)),)


class EllipticElement:
    """Rational combination of normal-form words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        self.terms = {w: Fraction(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def correspondence(cls, corr: CorrespondenceCycle, parity: int = 0) -> "EllipticElement":
        return cls({(_c(corr.source, corr.target, t, parity),): c for t, c in corr.terms.items()})

    @classmethod
    def homotopy(cls, k: int) -> "EllipticElement":
        if k == 0:
            return cls()
        ident = next(iter(identity(k).terms))
        return cls({(_c(k, k, ident, 0), ("H", k), _c(k, k, ident, 0)): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return EllipticElement(out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return EllipticElement({w: v * c for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "EllipticElement") -> "EllipticElement":
        """self after other."""
        out: dict[tuple, Fraction] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                for tok, m in _merge(v[0], u[-1]):
                    w = u[:-1] + (tok,) + v[1:]
                    out[w] = out.get(w, 0) + a * b * m
        return EllipticElement(out)

    def boundary(self) -> "EllipticElement":
        out = EllipticElement()
        for w, c in self.terms.items():
            for t, tok in enumerate(w):
                if tok[0] != "H":
                    continue
                k = tok[1]
                sign = -1 if _word_parity(w[:t]) else 1
                prefix = EllipticElement({w[:t]: 1})
                suffix = EllipticElement({w[t + 1:]: 1})
                out = out + (prefix @ _one_minus_p(k) @ suffix) * (c * sign)
        return out

    def realization_terms(self):
        """(torus, source, target, coeff) for the words without homotopies."""
        for w, c in self.terms.items():
            if len(w) == 1:
                _, s, t, torus, _ = w[0]
                yield torus, s, t, c

    def __eq__(self, other):
        return isinstance(other, EllipticElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __str__(self) -> str:
        from .cycles import format_sum
        return format_sum(self.terms, format_word, key=lambda w: (len(w), format_word(w))) if self.terms else "0"

    __repr__ = __str__


@lru_cache(maxsize=None)
def _one_minus_p(k: int) -> EllipticElement:
    return EllipticElement.correspondence(identity(k)) - EllipticElement.correspondence(projector(k))


def format_token(tok) -> str:
    if tok[0] == "H":
        return f"H{tok[1]}"
    _, s, t, torus, parity = tok
    body = str(torus).rsplit(" in ", 1)[0]
    return f"[{s}>{t}{'*' if parity else ''} {body}]"


def format_word(w) -> str:
    return " ".join(format_token(t) for t in w)


# --- the algebra ----------------------------------------------------------------------

class EllipticAlgebra:
    """Morphism algebra for complexes whose summands are Q_{E^k}(m)[p].

    Resolving a summand E^k replaces it by the Karoubi object (E^k, p_k),
    with i* = π* = p_k, so I P = p_k is its identity and P I = 1 - ∂H_k.
    """

    def resolution(self, term: MotiveTerm) -> ResolutionData:
        k = term.power
        p = EllipticElement.correspondence(projector(k))
        return ResolutionData(replace(term, resolved=True), p, p, EllipticElement.homotopy(k))

    @staticmethod
    def term_basis(term: MotiveTerm) -> list[int]:
        """Degrees of the Künneth basis of H*(E^k); p_k realizes to the identity, so Karoubi pieces keep it."""
        return [len(w) for w in basis(term.power)]

    @staticmethod
    def realize(element: EllipticElement, source: MotiveTerm, target: MotiveTerm) -> list[list[Fraction]]:
        """Betti realization; words through a homotopy are level-1 cycles and realize to 0."""
        n_src, n_tgt = 4 ** source.power, 4 ** target.power
        out = [[Fraction(0)] * n_src for _ in range(n_tgt)]
        for torus, s, t, c in element.realization_terms():
            if (s, t) != (source.power, target.power):
                raise ValueError("correspondence does not match the summands")
            mat = _torus_realization(torus, s)
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x:
                        out[i][j] += c * x
        return out

    @staticmethod
    def correspondence(corr: CorrespondenceCycle, parity: int = 1) -> EllipticElement:
        return EllipticElement.correspondence(corr, parity)


@lru_cache(maxsize=None)
def _torus_realization(torus: LinearSubtorus, source: int):
    return CorrespondenceCycle(source, torus.ambient - source, {torus: 1}).realization().rows


# --- Schur content of a resolved summand ------------------------------------------------------

def schur_pieces(term: MotiveTerm) -> list[tuple[int, str]]:
    """(multiplicity, piece) for (Q ⊕ V[-1] ⊕ Q(-1)[-2])^⊗k, split by Young idempotents on V^⊗j.

    The multiplicity of e_Y V^⊗j(m)[p] counts the ways to place j copies of
    V and m copies of Q(-1) among k factors.
    """
    from math import comb
    from .young import format_tableau, standard_tableaux
    k = term.power
    out = []
    for j in range(k + 1):
        for m in range(k - j + 1):
            mult = comb(k, j) * comb(k - j, m)
            twist, shift = term.twist + m, term.shift - j - 2 * m
            tw = f"({-twist})" if twist else ""
            sh = f"[{shift}]" if shift else ""
            if j == 0:
                out.append((mult, f"Q{tw}{sh}"))
            elif j == 1:
                out.append((mult, f"V{tw}{sh}"))
            else:
                for y in standard_tableaux(j):
                    out.append((mult, f"e[{format_tableau(y)}]V^{j}{tw}{sh}"))
    return out
