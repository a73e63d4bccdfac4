"""Exact linear algebra over the rationals and the integers.

Everything here works on plain lists of lists (rows) holding ``int`` or
``Fraction`` entries.  Nothing is floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = [0] * cols
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        new[j] += x * bk[j]
        out.append(new)
    return out


def transpose(a: Sequence[Sequence], cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def sparse_rank(vectors: Sequence[dict]) -> int:
    """Rank of a family of sparse vectors (dicts key -> rational)."""
    basis: dict = {}  # pivot key -> reduced vector with 1 at pivot
    for v in vectors:
        w = {k: Fraction(x) for k, x in v.items() if x}
        while w:
            piv = min(w)
            if piv in basis:
                f = w[piv]
                for k, x in basis[piv].items():
                    y = w.get(k, 0) - f * x
                    if y:
                        w[k] = y
                    else:
                        w.pop(k, None)
            else:
                inv = 1 / w[piv]
                basis[piv] = {k: x * inv for k, x in w.items()}
                break
    return len(basis)


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis (as rows) of {x : A x = 0} over Q."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        basis.append(v)
    return basis


def column_space_basis(cols: Sequence[Sequence]) -> Matrix:
    """Independent subfamily spanning the same space (input and output as vectors)."""
    out: Matrix = []
    red: Matrix = []
    for v in cols:
        trial = red + [list(v)]
        r, _ = rref(trial)
        if len(r) > len(red):
            red = r
            out.append([Fraction(x) for x in v])
    return out


def solve_left_inverse(basis_cols: Matrix, dim: int) -> Matrix:
    """Rows L with L @ B = I for a full-column-rank B given by its columns."""
    k = len(basis_cols)
    if k == 0:
        return []
    b = transpose(basis_cols)  # dim x k
    # L = (B^T B)^{-1} B^T
    bt = basis_cols
    gram = matmul(bt, b)
    inv = inverse(gram)
    return matmul(inv, bt)


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(a: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


# --- integer lattices -------------------------------------------------------

def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U @ A @ V == D, U and V unimodular, D diagonal
    with d_1 | d_2 | ... and nonnegative entries."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):  # row dst += f * row src
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for r in d:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if d[i][j] % d[t][t]), None)
                if bad is not None:
                    add_row(bad[0], t, 1)
                    done = False
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def elementary_divisors(a: Sequence[Sequence[int]]) -> list[int]:
    if not a or not a[0]:
        return []
    _, d, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Saturated basis (as rows) of the integer kernel of the given relations."""
    if not rows:
        return identity(ncols)
    _, d, v = smith_normal_form(rows)
    r = len(elementary_divisors(rows))
    return [[v[i][j] for i in range(ncols)] for j in range(r, ncols)]


def primitive(row: Sequence[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, int(x))
    if g == 0:
        return list(row)
    out = [int(x) // g for x in row]
    first = next(x for x in out if x)
    return [-x for x in out] if first < 0 else out


def saturation(rows: Sequence[Sequence[int]], ncols: int) -> tuple[Matrix, int]:
    """Integer basis of (Q-span of rows) ∩ Z^n and the index of the row lattice in it."""
    if not rows:
        return [], 1
    divs = elementary_divisors(rows)
    index = 1
    for x in divs:
        index *= x
    kernel = integer_kernel(rows, ncols)
    sat = integer_kernel(kernel, ncols) if kernel else identity(ncols)
    return sat, index


def clear_denominators(row: Sequence[Fraction]) -> list[int]:
    lcm = 1
    for x in row:
        x = Fraction(x)
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    return [int(Fraction(x) * lcm) for x in row]
