"""Linear cycles on powers of an elliptic curve, at levels 0 and 1.

Level 0 cycles are rational sums of monomials in the divisors ``P(i)``,
``D(j,k)`` and ``Dm(j,k)``.  Level 1 cycles carry exactly one witness symbol
per term; :func:`boundary` sends them back to level 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class CycleError(ValueError):
    pass


class ImproperIntersection(CycleError):
    """Raised when a monomial would repeat an identical divisor."""


class AmbientMismatch(CycleError):
    pass


_KIND_ORDER = {"P": 0, "D": 1, "Dm": 2}


@dataclass(frozen=True, order=True)
class Factor:
    """One divisor: ``P(i)``, ``D(j,k)`` or ``Dm(j,k)`` (stored with j < k)."""

    rank: int = field(init=False, repr=False, compare=True)
    kind: str
    indices: tuple[int, ...]

    def __init__(self, kind: str, *indices: int):
        if kind not in _KIND_ORDER:
            raise CycleError(f"unknown divisor kind {kind!r}")
        idx = tuple(int(i) for i in indices)
        if kind == "P":
            if len(idx) != 1:
                raise CycleError("P takes one index")
        else:
            if len(idx) != 2 or idx[0] == idx[1]:
                raise CycleError(f"{kind} takes two distinct indices")
            idx = tuple(sorted(idx))
        if min(idx) < 1:
            raise CycleError("indices are positive")
        object.__setattr__(self, "rank", _KIND_ORDER[kind])
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "indices", idx)

    def shifted(self, by: int) -> "Factor":
        return Factor(self.kind, *(i + by for i in self.indices))

    def relabeled(self, mapping: Mapping[int, int]) -> "Factor":
        return Factor(self.kind, *(mapping.get(i, i) for i in self.indices))

    def __str__(self) -> str:
        return f"{self.kind}({','.join(map(str, self.indices))})"


def P(i: int) -> Factor:
    return Factor("P", i)


def D(j: int, k: int) -> Factor:
    return Factor("D", j, k)


def Dm(j: int, k: int) -> Factor:
    return Factor("Dm", j, k)


@dataclass(frozen=True)
class Monomial:
    """Product of pairwise distinct divisors on E^ambient, in canonical order."""

    ambient: int
    factors: tuple[Factor, ...]

    def __init__(self, ambient: int, factors: Iterable[Factor] = ()):
        facs = tuple(sorted(factors))
        for a, b in zip(facs, facs[1:]):
            if a == b:
                raise ImproperIntersection(f"repeated divisor {a}")
        for f in facs:
            if max(f.indices) > ambient:
                raise CycleError(f"{f} does not live on E^{ambient}")
        object.__setattr__(self, "ambient", int(ambient))
        object.__setattr__(self, "factors", facs)

    @property
    def codim(self) -> int:
        return len(self.factors)

    def indices(self) -> set[int]:
        return {i for f in self.factors for i in f.indices}

    def times(self, other: "Monomial") -> "Monomial":
        if other.ambient != self.ambient:
            raise AmbientMismatch("ambient mismatch in product")
        return Monomial(self.ambient, self.factors + other.factors)

    def __str__(self) -> str:
        return "*".join(map(str, self.factors)) if self.factors else "1"


def canonicalize(ambient: int, factors: Iterable[Factor]) -> Monomial:
    return Monomial(ambient, factors)


def _clean(terms: Mapping) -> dict:
    return {k: Fraction(v) for k, v in terms.items() if v}


class _Linear:
    """Shared rational-vector behaviour of level 0 and level 1 cycles."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: int, terms: Mapping | None = None):
        self.ambient = int(ambient)
        self.terms = _clean(terms or {})

    def _new(self, terms):
        return type(self)(self.ambient, terms)

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.ambient != self.ambient:
            raise AmbientMismatch(f"E^{self.ambient} vs E^{other.ambient}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return self._new(out)

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c: Number):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return self._new({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (type(other) is type(self) and other.ambient == self.ambient
                and other.terms == self.terms)

    def __hash__(self):
        return hash((type(self).__name__, self.ambient, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class LinearCycle(_Linear):
    """Rational combination of monomials of one common codimension."""

    def __init__(self, ambient: int, terms: Mapping[Monomial, Number] | None = None):
        super().__init__(ambient, terms)
        codims = {m.codim for m in self.terms}
        if len(codims) > 1:
            raise CycleError(f"mixed codimensions {sorted(codims)}")
        for m in self.terms:
            if m.ambient != self.ambient:
                raise AmbientMismatch(f"monomial on E^{m.ambient} in cycle on E^{self.ambient}")

    @classmethod
    def monomial(cls, ambient: int, *factors: Factor, coeff: Number = 1) -> "LinearCycle":
        return cls(ambient, {Monomial(ambient, factors): coeff})

    @classmethod
    def one(cls, ambient: int) -> "LinearCycle":
        return cls(ambient, {Monomial(ambient): 1})

    @property
    def codim(self) -> int | None:
        return next(iter(self.terms)).codim if self.terms else None

    def times(self, other: "LinearCycle") -> "LinearCycle":
        """Intersection product of cycles on the same E^m (formal, factorwise)."""
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1.times(m2)
                out[m] = out.get(m, 0) + c1 * c2
        return LinearCycle(self.ambient, out)

    def __str__(self) -> str:
        return format_sum(self.terms, str) + f" on E^{self.ambient}"


def linear_combination(coeffs: Iterable[Number], cycles: Iterable[LinearCycle]) -> LinearCycle:
    coeffs, cycles = list(coeffs), list(cycles)
    if len(coeffs) != len(cycles) or not cycles:
        raise CycleError("need matching, nonempty coefficient and cycle lists")
    out = cycles[0] * 0
    for c, z in zip(coeffs, cycles):
        out = out + z * c
    return out


def external_product(c1: LinearCycle, c2: LinearCycle) -> LinearCycle:
    """c1 x c2 on E^(m1+m2); indices of c2 move up by m1."""
    m = c1.ambient + c2.ambient
    out: dict = {}
    for a, x in c1.terms.items():
        for b, y in c2.terms.items():
            mono = Monomial(m, a.factors + tuple(f.shifted(c1.ambient) for f in b.factors))
            out[mono] = out.get(mono, 0) + x * y
    return LinearCycle(m, out)


def diagonal(i: int, j: int, m: int, minus: bool = False) -> LinearCycle:
    """Δ_ij = P_i + P_j - D_ij (or Δ⁻ with Dm) as a linear cycle on E^m."""
    d = Dm(i, j) if minus else D(i, j)
    return LinearCycle(m, {Monomial(m, [P(i)]): 1, Monomial(m, [P(j)]): 1, Monomial(m, [d]): -1})


def permutation_graph(perm: tuple[int, ...], minus: bool = False) -> LinearCycle:
    """Graph of y_perm(i) = x_i (or y_perm(i) = -x_i) on E^n x E^n."""
    n = len(perm)
    out = LinearCycle.one(2 * n)
    for i, s in enumerate(perm, start=1):
        out = out.times(diagonal(i, n + s, 2 * n, minus))
    return out


# --- witnesses ---------------------------------------------------------------

_WITNESS_ARITY = {"Wjk": 2, "Wijk": 3, "Wijkl": 4, "Wpij": 2, "Wdd": 2}
_WITNESS_CODIM = {"Wjk": 1, "Wpij": 2, "Wijk": 2, "Wijkl": 2, "Wdd": 2}


@dataclass(frozen=True, order=True)
class WitnessSymbol:
    """Formal level-1 cycle with a prescribed boundary.

    ``Wjk(j,k)``: D_jk + Dm_jk.  ``Wijk(i,j,k)``: P_i D_jk + D_ij D_ik.
    ``Wijkl``: sum of the three perfect matchings.  ``Wpij(i,j)``: P_i D_ij.
    ``Wdd(j,k)``: D_jk Dm_jk - 2 P_j P_k.
    """

    kind: str
    indices: tuple[int, ...]

    def __init__(self, kind: str, *indices: int):
        if kind not in _WITNESS_ARITY:
            raise CycleError(f"unknown witness kind {kind!r}")
        idx = tuple(int(i) for i in indices)
        if len(idx) != _WITNESS_ARITY[kind] or len(set(idx)) != len(idx):
            raise CycleError(f"{kind} needs {_WITNESS_ARITY[kind]} distinct indices")
        if kind in ("Wjk", "Wdd"):
            idx = tuple(sorted(idx))
        elif kind == "Wijk":
            idx = (idx[0],) + tuple(sorted(idx[1:]))
        elif kind == "Wijkl":
            idx = tuple(sorted(idx))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "indices", idx)

    @property
    def codim(self) -> int:
        return _WITNESS_CODIM[self.kind]

    def relabeled(self, mapping: Mapping[int, int]) -> "WitnessSymbol":
        return WitnessSymbol(self.kind, *(mapping.get(i, i) for i in self.indices))

    def boundary_terms(self) -> list[tuple[Fraction, tuple[Factor, ...]]]:
        ix = self.indices
        if self.kind == "Wjk":
            j, k = ix
            return [(Fraction(1), (D(j, k),)), (Fraction(1), (Dm(j, k),))]
        if self.kind == "Wijk":
            i, j, k = ix
            return [(Fraction(1), (P(i), D(j, k))), (Fraction(1), (D(i, j), D(i, k)))]
        if self.kind == "Wijkl":
            i, j, k, l = ix
            return [(Fraction(1), (D(i, j), D(k, l))), (Fraction(1), (D(i, k), D(j, l))),
                    (Fraction(1), (D(i, l), D(j, k)))]
        if self.kind == "Wpij":
            i, j = ix
            return [(Fraction(1), (P(i), D(i, j)))]
        j, k = ix
        return [(Fraction(1), (D(j, k), Dm(j, k))), (Fraction(-2), (P(j), P(k)))]

    def __str__(self) -> str:
        name = {"Wjk": "W", "Wijk": "W", "Wijkl": "W", "Wpij": "Wp", "Wdd": "Wd"}[self.kind]
        return f"{name}({','.join(map(str, self.indices))})"


def Wjk(j, k): return WitnessSymbol("Wjk", j, k)
def Wijk(i, j, k): return WitnessSymbol("Wijk", i, j, k)
def Wijkl(i, j, k, l): return WitnessSymbol("Wijkl", i, j, k, l)
def Wpij(i, j): return WitnessSymbol("Wpij", i, j)
def Wdd(j, k): return WitnessSymbol("Wdd", j, k)


class WitnessCycle(_Linear):
    """Rational combination of (monomial, witness symbol) pairs."""

    def __init__(self, ambient: int,
                 terms: Mapping[tuple[Monomial, WitnessSymbol], Number] | None = None):
        super().__init__(ambient, terms)
        codims = set()
        for mono, w in self.terms:
            if mono.ambient != self.ambient or max(w.indices) > self.ambient:
                raise AmbientMismatch("witness term outside ambient")
            codims.add(mono.codim + w.codim)
        if len(codims) > 1:
            raise CycleError(f"mixed codimensions {sorted(codims)}")

    @classmethod
    def single(cls, ambient: int, w: WitnessSymbol, *factors: Factor,
               coeff: Number = 1) -> "WitnessCycle":
        return cls(ambient, {(Monomial(ambient, factors), w): coeff})

    @classmethod
    def zero(cls, ambient: int) -> "WitnessCycle":
        return cls(ambient)

    @property
    def codim(self) -> int | None:
        if not self.terms:
            return None
        mono, w = next(iter(self.terms))
        return mono.codim + w.codim

    def times_cycle(self, z: LinearCycle) -> "WitnessCycle":
        """Product with a level 0 cycle on the same ambient (z is closed)."""
        self._check_ambient(z)
        out: dict = {}
        for (m1, w), c1 in self.terms.items():
            for m2, c2 in z.terms.items():
                key = (m1.times(m2), w)
                out[key] = out.get(key, 0) + c1 * c2
        return WitnessCycle(self.ambient, out)

    def _check_ambient(self, z):
        if z.ambient != self.ambient:
            raise AmbientMismatch(f"E^{self.ambient} vs E^{z.ambient}")

    def uses(self, kind: str) -> int:
        return sum(1 for (_, w) in self.terms if w.kind == kind)

    def __str__(self) -> str:
        def show(key):
            mono, w = key
            return f"{mono}*{w}" if mono.factors else str(w)
        return format_sum(self.terms, show) + f" on E^{self.ambient}"


def witness_external_product(w: WitnessCycle, z: LinearCycle) -> WitnessCycle:
    """w x z with indices of z shifted by w's ambient."""
    m = w.ambient + z.ambient
    out: dict = {}
    for (mono, sym), x in w.terms.items():
        for b, y in z.terms.items():
            key = (Monomial(m, mono.factors + tuple(f.shifted(w.ambient) for f in b.factors)), sym)
            out[key] = out.get(key, 0) + x * y
    return WitnessCycle(m, out)


def cycle_witness_external_product(z: LinearCycle, w: WitnessCycle) -> WitnessCycle:
    """z x w with indices of w shifted by z's ambient."""
    m = z.ambient + w.ambient
    shift = {i: i + z.ambient for i in range(1, w.ambient + 1)}
    out: dict = {}
    for a, y in z.terms.items():
        for (mono, sym), x in w.terms.items():
            key = (Monomial(m, a.factors + tuple(f.shifted(z.ambient) for f in mono.factors)),
                   sym.relabeled(shift))
            out[key] = out.get(key, 0) + x * y
    return WitnessCycle(m, out)


def boundary(w: WitnessCycle) -> LinearCycle:
    out: dict = {}
    for (mono, sym), c in w.terms.items():
        for coeff, facs in sym.boundary_terms():
            m = Monomial(w.ambient, mono.factors + facs)
            out[m] = out.get(m, 0) + c * coeff
    return LinearCycle(w.ambient, out)


# --- printing ----------------------------------------------------------------

def format_coeff(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_sum(terms: Mapping, show, key=None) -> str:
    if not terms:
        return "0"
    parts = []
    for k in sorted(terms, key=key or _sort_key):
        c = terms[k]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = show(k)
        text = body if mag == 1 and body != "1" else (
            format_coeff(mag) if body == "1" else f"{format_coeff(mag)}*{body}")
        parts.append((sign, text))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def _sort_key(key):
    if isinstance(key, Monomial):
        return (key.factors, ())
    mono, w = key
    return (mono.factors, (w.kind, w.indices))
