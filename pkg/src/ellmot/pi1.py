"""The relative-motive complex of the truncated fundamental group of X = E - {O}.

Faces of X^n: D_0 = {x_1 = a}, D_i = {x_i = x_(i+1)}, D_n = {x_n = b}.  Each
nonempty intersection D_I is identified with X^(n-|I|) by keeping, in
order, the smallest coordinate of every free class of coordinates.  The
complex  Q_(X^n) -> ⊕ Q_(D_i) -> ...  has the alternating restriction maps;
replacing Q_X by the cone (Q_0(-1)[-2] -> Q_E) turns it into a strict double
complex of powers of E, which is totalized and resolved.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .correspondences import CorrespondenceCycle, graph
from .dg import (
    DGComplex, DoubleComplex, MotiveTerm, OpaqueAlgebra, Resolution, realize_complex, resolve,
    totalize,
)
from .elliptic import EllipticAlgebra, EllipticElement

Coord = tuple  # ("param", index) or ("label", name)


@dataclass(frozen=True)
class BasepointConfig:
    a: str = "a"
    b: str = "b"

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("the base points must be distinct")
        if "O" in (self.a, self.b):
            raise ValueError("the base points must differ from the origin O")


@dataclass(frozen=True)
class Face:
    """D_I with its parametrization: coordinate x_c of X^n is a parameter or a base point."""

    n: int
    subset: tuple[int, ...]
    coords: tuple[Coord, ...]

    def name(self) -> str:
        return "D{" + ",".join(map(str, self.subset)) + "}"


def face(n: int, subset: Iterable[int], cfg: BasepointConfig = BasepointConfig()) -> Face | None:
    """Parametrize D_I, or None when it is empty."""
    subset = tuple(sorted(set(subset)))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x
    for i in subset:
        if 1 <= i <= n - 1:
            ra, rb = find(i - 1), find(i)
            parent[max(ra, rb)] = min(ra, rb)
    fixed: dict[int, str] = {}
    for i, coord, label in ((0, 0, cfg.a), (n, n - 1, cfg.b)):
        if i in subset:
            root = find(coord)
            if fixed.get(root, label) != label:
                return None
            fixed[root] = label
    roots = sorted({find(c) for c in range(n)} - set(fixed))
    param = {r: k for k, r in enumerate(roots)}
    coords = tuple(("label", fixed[find(c)]) if find(c) in fixed else ("param", param[find(c)])
                   for c in range(n))
    return Face(n, subset, coords)


def face_dim(f: Face) -> int:
    return len({c for c in f.coords if c[0] == "param"})


def _inclusion(small: Face, big: Face) -> list[Coord]:
    """For each parameter of ``big``, its value on ``small`` (a parameter of small or a label)."""
    out: list[Coord] = [None] * face_dim(big)
    for cb, cs in zip(big.coords, small.coords):
        if cb[0] == "param":
            out[cb[1]] = cs
    return out


@dataclass
class RelativeMotive:
    n: int
    cfg: BasepointConfig
    faces: dict[int, list[Face]]
    # (s, index in faces[s]) -> list of (index in faces[s+1], sign, inclusion)
    maps: dict[tuple[int, int], list[tuple[int, int, list[Coord]]]] = field(default_factory=dict)


def relative_motive(n: int, cfg: BasepointConfig = BasepointConfig(), sign_rule: str = "cech") -> RelativeMotive:
    """Faces D_I by |I| = s, with restriction maps D_I -> D_(I ∪ {i}).

    The restriction to D_(I ∪ {i}) carries the sign (-1)^#{k in I : k < i}.
    ``sign_rule="face"`` uses (-1)^i instead; both paths from D_I to
    D_(I ∪ {i, j}) then get the same sign and the differential does not square
    to zero.
    """
    if sign_rule not in ("cech", "face"):
        raise ValueError(f"unknown sign rule {sign_rule!r}")
    if n < 1:
        raise ValueError("n must be at least 1")
    faces: dict[int, list[Face]] = {}
    for s in range(n + 2):
        for subset in combinations(range(n + 1), s):
            f = face(n, subset, cfg)
            if f is not None:
                faces.setdefault(s, []).append(f)
    index = {(s, f.subset): k for s, fs in faces.items() for k, f in enumerate(fs)}
    rm = RelativeMotive(n, cfg, faces)
    for s, fs in faces.items():
        for k, f in enumerate(fs):
            for i in range(n + 1):
                if i in f.subset:
                    continue
                bigger = tuple(sorted(f.subset + (i,)))
                if (s + 1, bigger) not in index:
                    continue
                target = faces[s + 1][index[(s + 1, bigger)]]
                flips = sum(1 for x in f.subset if x < i) if sign_rule == "cech" else i
                sign = -1 if flips % 2 else 1
                rm.maps.setdefault((s, k), []).append((index[(s + 1, bigger)], sign, _inclusion(target, f)))
    return rm


def face_boundary_squared(rm: RelativeMotive) -> dict[tuple[int, int, int], CorrespondenceCycle]:
    """Nonzero entries of the composite of two consecutive face differentials, keyed by (s, source, target)."""
    from .correspondences import compose
    out = {}
    for (s, k), arrows in rm.maps.items():
        total: dict[int, CorrespondenceCycle] = {}
        m = face_dim(rm.faces[s][k])
        for k1, sign1, incl1 in arrows:
            m1 = face_dim(rm.faces[s + 1][k1])
            first = restriction_correspondence(incl1, m, m1) * sign1
            for k2, sign2, incl2 in rm.maps.get((s + 1, k1), []):
                m2 = face_dim(rm.faces[s + 2][k2])
                step = compose(first, restriction_correspondence(incl2, m1, m2) * sign2)
                total[k2] = total[k2] + step if k2 in total else step
        for k2, corr in total.items():
            if corr.terms:
                out[(s, k, k2)] = corr
    return out


def restriction_correspondence(incl: list[Coord], source_dim: int, target_dim: int,
                               zero: Iterable[int] = ()) -> CorrespondenceCycle:
    """Pullback along z -> y (y_c = z_j, a base point, or 0 for c in ``zero``) as a correspondence E^dim(y) -> E^dim(z)."""
    zero = set(zero)
    matrix, offset = [], []
    for c, val in enumerate(incl):
        row = [0] * target_dim
        off: dict[str, int] = {}
        if c in zero:
            pass
        elif val[0] == "param":
            row[val[1]] = 1
        else:
            off[val[1]] = 1
        matrix.append(row)
        offset.append(off)
    return graph(matrix, target_dim, offset).transpose()


# --- Gysin expansion ---------------------------------------------------------------------------

def _stratum_label(f: Face, J: tuple[int, ...]) -> str:
    return f.name() + ("|0@" + ",".join(str(j + 1) for j in J) if J else "")


def gysin_expand(rm: RelativeMotive) -> DoubleComplex:
    """Replace each Q_(X^m) by the tensor power of (Q_0(-1)[-2] -> Q_E).

    Column s holds the faces with |I| = s; row -g holds the strata where g
    parameters sit at the origin, as Q_(E^(m-g))(-g)[-2g].  Vertical maps are
    the Gysin pushforwards with Koszul signs; horizontal maps restrict
    strata, and vanish when a base point would meet the origin or when two
    origin coordinates are identified (excess intersection).
    """
    alg = EllipticAlgebra()
    objects: dict[tuple[int, int], list[MotiveTerm]] = {}
    keys: dict[tuple[int, int], list[tuple[int, tuple[int, ...]]]] = {}
    for s, fs in rm.faces.items():
        for k, f in enumerate(fs):
            m = face_dim(f)
            for g in range(m + 1):
                for J in combinations(range(m), g):
                    objects.setdefault((s, -g), []).append(
                        MotiveTerm("E", m - g, g, -2 * g, _stratum_label(f, J)))
                    keys.setdefault((s, -g), []).append((k, J))
    where = {pos: {key: i for i, key in enumerate(ks)} for pos, ks in keys.items()}
    vertical: dict[tuple[int, int], dict] = {}
    horizontal: dict[tuple[int, int], dict] = {}
    for (s, row), ks in keys.items():
        for idx, (k, J) in enumerate(ks):
            m = face_dim(rm.faces[s][k])
            rest = [c for c in range(m) if c not in J]
            # Gysin: put the origin back at coordinate j
            for pos_j, j in enumerate(J):
                J2 = J[:pos_j] + J[pos_j + 1:]
                rest2 = [c for c in range(m) if c not in J2]
                matrix = [[int(c == d) for d in rest] for c in rest2]
                corr = graph(matrix, len(rest)) * (-1 if pos_j % 2 else 1)
                tgt = where[(s, row + 1)][(k, J2)]
                vertical.setdefault((s, row), {})[(tgt, idx)] = alg.correspondence(corr)
            # restrictions to the next faces
            for k2, sign, incl in rm.maps.get((s, k), []):
                image = []
                for j in J:
                    val = incl[j]
                    if val[0] == "label":
                        break
                    image.append(val[1])
                else:
                    if len(set(image)) < len(image):
                        continue  # excess: zero in Chow
                    J2 = tuple(sorted(image))
                    m2 = face_dim(rm.faces[s + 1][k2])
                    rest2 = [c for c in range(m2) if c not in J2]
                    sub = []
                    for c in rest:
                        val = incl[c]
                        if val[0] == "param" and val[1] in J2:
                            sub.append(("zero",))
                        elif val[0] == "param":
                            sub.append(("param", rest2.index(val[1])))
                        else:
                            sub.append(val)
                    zero = {i for i, v in enumerate(sub) if v[0] == "zero"}
                    corr = restriction_correspondence(sub, len(rest), len(rest2), zero) * sign
                    tgt = where[(s + 1, row)][(k2, J2)]
                    horizontal.setdefault((s, row), {})[(tgt, idx)] = alg.correspondence(corr)
    return DoubleComplex(objects, horizontal, vertical, alg)


# --- assembly -----------------------------------------------------------------------------------

@dataclass
class Pi1Result:
    n: int
    complex: DGComplex
    resolution: Resolution | None

    def realized_cohomology(self) -> dict[int, int]:
        return realize_complex(self.complex, offset=self.n).cohomology()

    def resolved_cohomology(self) -> dict[int, int]:
        return realize_complex(self.resolution.complex, offset=self.n).cohomology()

    def totaro_entry(self) -> tuple[EllipticElement, EllipticElement]:
        """F and h entries from the deepest origin stratum to the point (a, ..., a)."""
        K = self.complex
        lo, hi = min(K.positions()), max(K.positions())
        src = next(i for i, t in enumerate(K.objects[lo]) if t.power == 0)
        point = "D{" + ",".join(map(str, range(self.n))) + "}"
        tgt = next(i for i, t in enumerate(K.objects[hi]) if t.label == point)
        F = self.resolution.complex.map(hi, lo).get((tgt, src), EllipticElement())
        h = self.resolution.homotopies.get((hi, lo), {}).get((tgt, src), EllipticElement())
        return F, h


    def totaro_chain(self):
        """The chain sum along the single component

            Q_(0,...,0)(-n)[-2n] -> ... -> Q_(E x 0)(-1)[-2] -> Q_(E^n) -> Q_(a x E^(n-1)) -> ... -> Q_(a,...,a),

        treated on its own: I f H f ... H f P with sign (-1)^(number of H).
        """
        n, K, res = self.n, self.complex, self.resolution
        labels = [_stratum_label(Face(n, (), ()), tuple(range(g, n))) for g in range(n)]
        labels += ["D{" + ",".join(map(str, range(s))) + "}" for s in range(n + 1)]
        pos = K.positions()
        idx = [next(i for i, t in enumerate(K.objects[p]) if t.label == lab) for p, lab in zip(pos, labels)]
        word = res.P[pos[0]][(idx[0], idx[0])]
        for step in range(1, len(pos)):
            f = K.map(pos[step], pos[step - 1]).get((idx[step], idx[step - 1]), EllipticElement())
            word = f @ word
            if step < len(pos) - 1:
                word = res.H[pos[step]][(idx[step], idx[step])] @ word * -1
        return res.I[pos[-1]][(idx[-1], idx[-1])] @ word


def build_pi1_complex(n: int, cfg: BasepointConfig = BasepointConfig(), bound: int = 3,
                      resolved: bool = True) -> Pi1Result:
    if n > bound:
        raise ValueError(f"n = {n} exceeds the configured bound {bound}")
    K = totalize(gysin_expand(relative_motive(n, cfg)))
    return Pi1Result(n, K, resolve(K) if resolved else None)


def free_algebra_dimension(letters: int, max_length: int) -> int:
    """Number of words of length <= max_length on the given letters, by enumeration."""
    words, total = [()], 1
    for _ in range(max_length):
        words = [w + (x,) for w in words for x in range(letters)]
        total += len(words)
    return total


# --- realization of the unexpanded complex, with H*(X) in place of H*(E) ------------------------

def realize_relative_motive(rm: RelativeMotive) -> dict[int, int]:
    """Cohomology ranks of the relative motive computed from H*(X^m) = H*(E^m)/(a_i b_i).

    Restriction maps act by pullback along the face inclusions; degrees are
    shifted by n as in the expanded complex.
    """
    from .cohomology import basis
    from .linalg import rank
    spaces: dict[int, list[tuple[int, int, tuple]]] = {}
    for s, fs in rm.faces.items():
        for k, f in enumerate(fs):
            for w in basis(face_dim(f)):
                if any(2 * i in w and 2 * i + 1 in w for i in range(face_dim(f))):
                    continue
                spaces.setdefault(s + len(w) - rm.n, []).append((s, k, w))
    index = {d: {key: i for i, key in enumerate(ks)} for d, ks in spaces.items()}
    ranks: dict[int, int] = {}
    for d, ks in spaces.items():
        if d + 1 not in spaces:
            continue
        mat = [[Fraction(0)] * len(ks) for _ in spaces[d + 1]]
        for col, (s, k, w) in enumerate(ks):
            m = face_dim(rm.faces[s][k])
            for k2, sign, incl in rm.maps.get((s, k), []):
                m2 = face_dim(rm.faces[s + 1][k2])
                corr = restriction_correspondence(incl, m, m2)
                real = corr.realization()
                src_basis = basis(m)
                tgt_basis = basis(m2)
                j = src_basis.index(w)
                for i, tw in enumerate(tgt_basis):
                    x = real.rows[i][j]
                    if x and (s + 1, k2, tw) in index[d + 1]:
                        mat[index[d + 1][(s + 1, k2, tw)]][col] += sign * x
        ranks[d] = rank(mat) if mat and mat[0] else 0
    out = {}
    for d, ks in sorted(spaces.items()):
        h = len(ks) - ranks.get(d, 0) - ranks.get(d - 1, 0)
        if h:
            out[d] = h
    return out


# --- the projective line walkthrough --------------------------------------------------------------

TOTARO_TOKEN = "(t, 1-t, 1-b/t)"


def p1_walkthrough(b: str = "b", trivial: bool = False):
    """The simplified three-term component over the opaque algebra.

    Q_((A¹-0)x(A¹-1)) -> Q_((A¹-0)x b) -> Q_(b,b), each term contracted by the
    affine homotopy {(x, x - tx, t)} (declared as H with ∂H = 1 - P I).  The
    two restrictions compose to zero in the component, and the chain sum
    F_31 = -I f_32 H f_21 P is the cycle printed as (t, 1-t, 1-b/t).

    With ``trivial`` the one-term component Q_(b,b) is returned instead; it
    has no maps and a zero homotopy entry.
    Returns (complex, resolution, terminal entry).
    """
    alg = OpaqueAlgebra()
    names = ["(A1-0)x(A1-1)", f"(A1-0)x{b}", f"({b},{b})"]
    terms = {p: [MotiveTerm("opaque", label=names[p - 1])] for p in (1, 2, 3)}
    if trivial:
        K = DGComplex({1: terms[3]}, {}, alg)
        res = resolve(K)
        return K, res, alg.zero()
    f21 = alg.generator(f"x2={b}", 1)
    f32 = alg.generator(f"x1={b}", 1)
    alg.relation((f"x1={b}", f"x2={b}"), alg.zero())
    K = DGComplex(terms, {(2, 1): {(0, 0): f21}, (3, 2): {(0, 0): f32}}, alg)
    res = resolve(K)
    word = (f"I_{names[2]}", f"x1={b}", f"H_{names[1]}", f"x2={b}", f"P_{names[0]}")
    alg.alias(word, TOTARO_TOKEN.replace("b", b), -1)
    entry = res.complex.map(3, 1).get((0, 0), alg.zero())
    return K, res, entry
