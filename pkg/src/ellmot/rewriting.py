"""Gelfand-Zetlin normal forms of linear cycles, with homotopy witnesses.

The rewriting runs in three stages, each returning (result, witness) with
``input - result == boundary(witness)``:

* :func:`reduce_signs` turns every Dm(j,k) into -D(j,k);
* :func:`eliminate_shared` removes D-factors sharing an index with another
  D-factor or with a P-factor;
* :func:`gz_sort` applies the four-term Plücker relation until the k-indices
  increase along the j-sorted D-factors.

Witnesses of the stages add up because the identities telescope.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cycles import (
    D, Dm, Factor, LinearCycle, Monomial, P, WitnessCycle, WitnessSymbol, Wdd, Wijk, Wijkl,
    Wjk, Wpij, boundary,
)


class NonTermination(RuntimeError):
    """A rewrite step failed to decrease the termination measure."""


class RewriteError(ValueError):
    """Input outside the domain of a rewriting stage."""


@dataclass(frozen=True)
class RuleApplication:
    rule: str
    redex: str
    witness: str
    extension: bool = False

    def __str__(self) -> str:
        flag = "  [extension]" if self.extension else ""
        return f"{self.rule}: {self.redex} via {self.witness}{flag}"


@dataclass
class NormalFormResult:
    input: LinearCycle
    normal: LinearCycle
    witness: WitnessCycle
    rule_trace: list[RuleApplication] = field(default_factory=list)

    def exact(self) -> bool:
        return boundary(self.witness) == self.input - self.normal

    def in_s(self) -> bool:
        return all(is_in_S(m) for m in self.normal.terms)

    def extension_uses(self) -> dict[str, int]:
        return {k: self.witness.uses(k) for k in ("Wpij", "Wdd")}


def is_in_S(mono: Monomial) -> bool:
    """Distinct indices and the Gelfand-Zetlin condition on the D-pairs."""
    if any(f.kind == "Dm" for f in mono.factors):
        return False
    seen: list[int] = [i for f in mono.factors for i in f.indices]
    if len(seen) != len(set(seen)):
        return False
    pairs = [f.indices for f in mono.factors if f.kind == "D"]
    js = [j for j, _ in pairs]
    ks = [k for _, k in pairs]
    return (all(a < b for a, b in zip(js, js[1:])) and all(a < b for a, b in zip(ks, ks[1:]))
            and all(j < k for j, k in pairs))


# --- small helpers ---------------------------------------------------------

class _Acc:
    """Accumulates result and witness terms of one stage."""

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.result: dict[Monomial, Fraction] = {}
        self.witness: dict[tuple[Monomial, WitnessSymbol], Fraction] = {}
        self.trace: list[RuleApplication] = []

    def add_result(self, factors, c):
        m = Monomial(self.ambient, factors)
        self.result[m] = self.result.get(m, 0) + c

    def add_witness(self, factors, sym: WitnessSymbol, c):
        key = (Monomial(self.ambient, factors), sym)
        self.witness[key] = self.witness.get(key, 0) + c

    def note(self, rule, redex, sym, extension=False):
        self.trace.append(RuleApplication(rule, str(redex), str(sym), extension))

    def finish(self) -> tuple[LinearCycle, WitnessCycle]:
        return LinearCycle(self.ambient, self.result), WitnessCycle(self.ambient, self.witness)


def _without(factors, *drop):
    out = list(factors)
    for f in drop:
        out.remove(f)
    return out


def _check_decrease(before, after, stage):
    if not after < before:
        raise NonTermination(f"{stage}: measure {after} does not decrease from {before}")


# --- stage 1: signs ----------------------------------------------------------

def _dm_count(m: Monomial) -> int:
    return sum(1 for f in m.factors if f.kind == "Dm")


def _reduce_signs_mono(mono: Monomial, c: Fraction, acc: _Acc):
    # a pair carrying both D and Dm is replaced first: D Dm = 2 P_j P_k + ∂Wdd
    pair = next((f.indices for f in mono.factors
                 if f.kind == "D" and Dm(*f.indices) in mono.factors), None)
    if pair is not None:
        j, k = pair
        rest = _without(mono.factors, D(j, k), Dm(j, k))
        sym = Wdd(j, k)
        acc.add_witness(rest, sym, c)
        acc.note("DD-", mono, sym, extension=True)
        new = Monomial(mono.ambient, rest + [P(j), P(k)])
        _check_decrease(_dm_count(mono), _dm_count(new), "reduce_signs")
        _reduce_signs_mono(new, 2 * c, acc)
        return
    ps = [f for f in mono.factors if f.kind == "P"]
    ds = [f for f in mono.factors if f.kind != "P"]
    targets = [D(*f.indices) for f in ds]
    sign = Fraction(1)
    for t, f in enumerate(ds):
        if f.kind == "Dm":
            # ∏_{s<t} G_s (F_t - G_t) ∏_{s>t} F_s with F_t - G_t = ∂Wjk
            sym = Wjk(*f.indices)
            acc.add_witness(ps + targets[:t] + ds[t + 1:], sym, c * sign)
            acc.note("sign", mono, sym)
            sign = -sign
    acc.add_result(ps + targets, c * sign)


def reduce_signs(gamma: LinearCycle) -> tuple[LinearCycle, WitnessCycle]:
    return _run(_reduce_signs_mono, gamma)


# --- stage 2: shared indices ---------------------------------------------------

def _find_r2(mono: Monomial):
    ps = {f.indices[0] for f in mono.factors if f.kind == "P"}
    for f in mono.factors:
        if f.kind == "D":
            for i in f.indices:
                if i in ps:
                    other = f.indices[1] if f.indices[0] == i else f.indices[0]
                    return i, other
    return None


def _find_r1(mono: Monomial):
    ds = [f.indices for f in mono.factors if f.kind == "D"]
    best = None
    for x, y in combinations(ds, 2):
        shared = set(x) & set(y)
        for i in shared:
            a = x[0] if x[1] == i else x[1]
            b = y[0] if y[1] == i else y[1]
            cand = (i, min(a, b), max(a, b))
            if best is None or cand < best:
                best = cand
    return best


def _d_count(m: Monomial) -> int:
    return sum(1 for f in m.factors if f.kind == "D")


def _eliminate_mono(mono: Monomial, c: Fraction, acc: _Acc):
    work = [(mono, c)]
    while work:
        mono, c = work.pop()
        if any(f.kind == "Dm" for f in mono.factors):
            raise RewriteError(f"{mono} is not sign-reduced")
        r2 = _find_r2(mono)
        if r2 is not None:
            i, a = r2
            sym = Wpij(i, a)
            acc.add_witness(_without(mono.factors, P(i), D(i, a)), sym, c)
            acc.note("R2", mono, sym, extension=True)
            continue
        r1 = _find_r1(mono)
        if r1 is None:
            acc.add_result(mono.factors, c)
            continue
        i, a, b = r1
        rest = _without(mono.factors, D(i, a), D(i, b))
        if D(a, b) in rest:
            # triangle: flip D_ab to -Dm_ab, apply R1, then clear Dm_ab D_ab
            rest = _without(rest, D(a, b))
            acc.add_witness(rest + [D(i, a), D(i, b)], Wjk(a, b), c)
            acc.add_witness(rest + [Dm(a, b)], Wijk(i, a, b), -c)
            acc.add_witness(rest + [P(i)], Wdd(a, b), c)
            acc.note("R1-triangle", mono, f"{Wjk(a, b)}, {Wijk(i, a, b)}, {Wdd(a, b)}", extension=True)
            new, coeff = Monomial(mono.ambient, rest + [P(i), P(a), P(b)]), 2 * c
        else:
            sym = Wijk(i, a, b)
            acc.add_witness(rest, sym, c)
            acc.note("R1", mono, sym)
            new, coeff = Monomial(mono.ambient, rest + [P(i), D(a, b)]), -c
        _check_decrease(_d_count(mono), _d_count(new), "eliminate_shared")
        work.append((new, coeff))


def eliminate_shared(gamma: LinearCycle) -> tuple[LinearCycle, WitnessCycle]:
    return _run(_eliminate_mono, gamma)


# --- stage 3: Plücker sorting -----------------------------------------------------

def gz_measure(mono: Monomial) -> int:
    """Sum of (k - j)^2 over D-factors; each Plücker step lowers it by at least 2xz > 0."""
    return sum((f.indices[1] - f.indices[0]) ** 2 for f in mono.factors if f.kind == "D")


def _first_violation(mono: Monomial):
    pairs = [f.indices for f in mono.factors if f.kind == "D"]  # already sorted by j
    for t in range(len(pairs) - 1):
        if pairs[t][1] > pairs[t + 1][1]:
            return pairs[t], pairs[t + 1]
    return None


def _gz_sort_mono(mono: Monomial, c: Fraction, acc: _Acc):
    work = [(mono, c)]
    while work:
        mono, c = work.pop()
        idx = [i for f in mono.factors for i in f.indices]
        if len(idx) != len(set(idx)) or any(f.kind == "Dm" for f in mono.factors):
            raise RewriteError(f"{mono} has shared indices or Dm factors")
        v = _first_violation(mono)
        if v is None:
            acc.add_result(mono.factors, c)
            continue
        (a, b), (cc, d) = v  # a < cc < d < b
        rest = _without(mono.factors, D(a, b), D(cc, d))
        sym = Wijkl(a, b, cc, d)
        acc.add_witness(rest, sym, c)
        acc.note("GZ", mono, sym)
        before = gz_measure(mono)
        for new_facs in ([D(a, cc), D(d, b)], [D(a, d), D(cc, b)]):
            new = Monomial(mono.ambient, rest + new_facs)
            _check_decrease(before, gz_measure(new), "gz_sort")
            work.append((new, -c))


def gz_sort(gamma: LinearCycle) -> tuple[LinearCycle, WitnessCycle]:
    return _run(_gz_sort_mono, gamma)


# --- full pipeline --------------------------------------------------------------------

def _run(inner, gamma: LinearCycle, trace: list[RuleApplication] | None = None):
    acc = _Acc(gamma.ambient)
    for mono, c in gamma.terms.items():
        inner(mono, c, acc)
    if trace is not None:
        trace.extend(acc.trace)
    return acc.finish()


def normal_form(gamma: LinearCycle) -> NormalFormResult:
    """π_S(γ) and h(γ) with γ - π_S(γ) = ∂h(γ), checked before returning."""
    trace: list[RuleApplication] = []
    r1, w1 = _run(_reduce_signs_mono, gamma, trace)
    r2, w2 = _run(_eliminate_mono, r1, trace)
    r3, w3 = _run(_gz_sort_mono, r2, trace)
    witness = w1 + w2 + w3
    result = NormalFormResult(gamma, r3, witness, trace)
    if not result.exact():
        raise AssertionError(f"witness boundary mismatch for {gamma}")
    return result


def verify_with_oracle(result: NormalFormResult) -> bool:
    from .cohomology import cycle_class
    return cycle_class(result.input) == cycle_class(result.normal)


# --- enumeration of the monomials the rewriter accepts -----------------------------

def lz3_monomials(n: int) -> list[Monomial]:
    """All P_I D^±_{j1k1} ... monomials of codimension n on E^(2n) with P-indices
    distinct and disjoint from the D-indices (D-factors may share indices)."""
    m = 2 * n
    idx = range(1, m + 1)
    pairs = list(combinations(idx, 2))
    signed = [(kind, p) for p in pairs for kind in ("D", "Dm")]
    out = []
    for p in range(n + 1):
        q = n - p
        for dfacs in combinations(signed, q):
            used = {i for _, pr in dfacs for i in pr}
            free = [i for i in idx if i not in used]
            for ps in combinations(free, p):
                out.append(Monomial(m, [P(i) for i in ps] + [Factor(k, *pr) for k, pr in dfacs]))
    return out


def s_monomials(n: int) -> list[Monomial]:
    return [mono for mono in lz3_monomials(n) if is_in_S(mono)]
