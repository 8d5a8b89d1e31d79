"""Negative curves on weak del Pezzo surfaces.

(-1)-classes and roots are found by a bounded lattice scan; which of them
are irreducible curves is decided by the configuration: the irreducible
(-2)-curves are the strict exceptional curves ``e_i - e_j`` and declared
incidences of root class, and a (-1)-class is a line iff it meets every
irreducible (-2)-curve nonnegatively.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .lp import lp_solve
from .picard import DivisorClass, SurfaceModel, TOTAL, change_basis, intersect

MINUS1 = "minus1"
ROOT = "root"


class NotADE(ValueError):
    """The (-2)-curves do not form a simply laced Dynkin diagram."""


def _scan(r: int, d: int, total: int, squares: int):
    """All integer vectors m of length r with sum(m) == total, sum(m^2) == squares."""
    out = []
    m = [0] * r

    def rec(i, s_left, q_left):
        left = r - i
        if left == 0:
            if s_left == 0 and q_left == 0:
                out.append(tuple(m))
            return
        # Cauchy-Schwarz on the remaining coordinates
        if s_left * s_left > left * q_left:
            return
        bound = isqrt(q_left)
        for v in range(-bound, bound + 1):
            m[i] = v
            rec(i + 1, s_left - v, q_left - v * v)
        m[i] = 0

    rec(0, total, squares)
    return out


def _degree_bound(r: int, kind: str) -> int:
    # Cauchy-Schwarz: (sum m)^2 <= r * sum m^2 bounds |d| (finite for r <= 8)
    best = 0
    for d in range(64):
        for s in (d, -d):
            if kind == MINUS1:
                ok = (1 - 3 * s) ** 2 <= r * (s * s + 1)
            else:
                ok = 9 * s * s <= r * (s * s + 2)
            if ok:
                best = d
    return best


def enumerate_classes(S: SurfaceModel, kind: str) -> list[DivisorClass]:
    """All classes with (c^2, c.K) = (-1, -1) (``"minus1"``) or (-2, 0) (``"root"``)."""
    if kind not in (MINUS1, ROOT):
        raise ValueError(f"unknown kind {kind!r}")
    key = ("classes", kind)
    if key in S._cache:
        return S._cache[key]
    r = S.r
    out = []
    if r > 0:
        bound = _degree_bound(r, kind)
        for d in range(-bound, bound + 1):
            # c = d h + sum a_i e_i;  c.K = -3d - sum a_i;  c^2 = d^2 - sum a_i^2
            if kind == MINUS1:
                total, squares = 1 - 3 * d, d * d + 1
            else:
                total, squares = -3 * d, d * d + 2
            if squares < 0:
                continue
            for a in _scan(r, d, total, squares):
                out.append(DivisorClass((d,) + a, TOTAL, S.name))
    out.sort(key=lambda c: (abs(c.coords[0]), -c.coords[0], tuple(-x for x in c.coords[1:])))
    S._cache[key] = out
    return out


def irreducible_minus2(S: SurfaceModel) -> list[DivisorClass]:
    """Irreducible (-2)-curves: strict exceptional curves and declared root incidences."""
    key = "minus2"
    if key not in S._cache:
        out = []
        for i in range(1, S.r + 1):
            for j in S.config.children(i):
                out.append(S.e(i) - S.e(j))
        for inc in S.config.incidences:
            c = S.incidence_class(inc)
            if intersect(S, c, c) == -2 and intersect(S, c, S.canonical) == 0:
                out.append(c)
        S._cache[key] = out
    return S._cache[key]


def lines(S: SurfaceModel) -> list[DivisorClass]:
    """Irreducible (-1)-curves."""
    key = "lines"
    if key not in S._cache:
        roots = irreducible_minus2(S)
        S._cache[key] = [c for c in enumerate_classes(S, MINUS1)
                         if all(intersect(S, c, e) >= 0 for e in roots)]
    return S._cache[key]


def negative_curves(S: SurfaceModel) -> list[DivisorClass]:
    """All irreducible negative curves: lines first, then (-2)-curves."""
    return list(lines(S)) + list(irreducible_minus2(S))


@dataclass(frozen=True)
class NegativeCurveSet:
    minus2: tuple[DivisorClass, ...]
    lines: tuple[DivisorClass, ...]
    all_roots: tuple[DivisorClass, ...]
    all_minus1: tuple[DivisorClass, ...]


def negative_curve_set(S: SurfaceModel) -> NegativeCurveSet:
    return NegativeCurveSet(tuple(irreducible_minus2(S)), tuple(lines(S)),
                            tuple(enumerate_classes(S, ROOT)), tuple(enumerate_classes(S, MINUS1)))


# Dynkin diagrams -------------------------------------------------------

POSITIVE_ROOTS = {"A": lambda n: n * (n + 1) // 2, "D": lambda n: n * (n - 1),
                  "E": lambda n: {6: 36, 7: 63, 8: 120}[n]}


@dataclass(frozen=True)
class DynkinComponent:
    letter: str
    rank: int
    members: tuple[DivisorClass, ...]

    @property
    def type(self) -> str:
        return f"{self.letter}{self.rank}"

    @property
    def positive_roots(self) -> int:
        return POSITIVE_ROOTS[self.letter](self.rank)


@dataclass(frozen=True)
class DynkinReport:
    components: tuple[DynkinComponent, ...]
    line_count: int

    @property
    def counter(self) -> Counter:
        return Counter(c.type for c in self.components)

    @property
    def label(self) -> str:
        return type_label(self.counter)

    @property
    def minus2_count(self) -> int:
        return sum(c.rank for c in self.components)


def type_label(counter: Counter) -> str:
    """Canonical text label such as ``A3+2A1``; the empty configuration is ``empty``."""
    if not counter:
        return "empty"

    def key(t):
        return (-int(t[1:]), t[0])

    parts = []
    for t in sorted(counter, key=key):
        n = counter[t]
        parts.append(t if n == 1 else f"{n}{t}")
    return "+".join(parts)


def parse_type(label: str) -> Counter:
    """Inverse of :func:`type_label`; accepts ``A_3+2A_1`` and ``2A1(9)`` forms."""
    import re

    base = label.split("(")[0].replace("_", "").replace(" ", "")
    if base in ("", "empty", "0", "∅"):
        return Counter()
    out = Counter()
    for part in base.split("+"):
        m = re.fullmatch(r"(\d*)([ADE])(\d+)", part)
        if not m:
            raise ValueError(f"bad Dynkin label {label!r}")
        out[f"{m.group(2)}{m.group(3)}"] += int(m.group(1) or 1)
    return out


def _classify(adj: dict[int, set[int]]) -> tuple[str, int]:
    nodes = list(adj)
    n = len(nodes)
    n_edges = sum(len(v) for v in adj.values()) // 2
    if n_edges != n - 1:
        raise NotADE(f"component with {n} nodes and {n_edges} edges is not a tree")
    degrees = sorted(len(adj[v]) for v in nodes)
    if n == 1 or degrees[-1] <= 2:
        return "A", n
    if degrees[-1] > 3 or degrees.count(3) > 1:
        raise NotADE(f"branching pattern {degrees} is not simply laced ADE")
    center = next(v for v in nodes if len(adj[v]) == 3)
    arms = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while len(adj[cur]) == 2:
            prev, cur = cur, next(x for x in adj[cur] if x != prev)
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return "D", n
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return "E", n
    raise NotADE(f"branch arms {arms} do not form an ADE diagram")


def dynkin_type(S: SurfaceModel) -> DynkinReport:
    """Connected components of the (-2)-curve graph matched to ADE diagrams."""
    roots = irreducible_minus2(S)
    adj: dict[int, set[int]] = {i: set() for i in range(len(roots))}
    for i, a in enumerate(roots):
        for j in range(i + 1, len(roots)):
            p = intersect(S, a, roots[j])
            if p not in (0, 1):
                raise NotADE(f"(-2)-curves {a} and {roots[j]} meet with multiplicity {p}")
            if p == 1:
                adj[i].add(j)
                adj[j].add(i)
    seen: set[int] = set()
    comps = []
    for start in range(len(roots)):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comp.sort()
        letter, rank = _classify({v: adj[v] for v in comp})
        comps.append(DynkinComponent(letter, rank, tuple(roots[v] for v in comp)))
    comps.sort(key=lambda c: (-c.rank, c.letter))
    return DynkinReport(tuple(comps), len(lines(S)))


def effective_roots(S: SurfaceModel) -> list[DivisorClass]:
    """Roots that are nonnegative integer combinations of irreducible (-2)-curves."""
    from .linalg import solve

    simple = irreducible_minus2(S)
    if not simple:
        return []
    cols = [c.coords for c in simple]
    rows = [[col[k] for col in cols] for k in range(S.r + 1)]
    out = []
    for c in enumerate_classes(S, ROOT):
        x = solve(rows, c.coords)
        if x is not None and all(v >= 0 and v.denominator == 1 for v in x):
            out.append(c)
    return out


# Effectivity -----------------------------------------------------------

@dataclass(frozen=True)
class EffectiveWitness:
    """A nonnegative rational combination of effective generators."""

    terms: tuple[tuple[DivisorClass, Fraction], ...]

    def total(self, S: SurfaceModel) -> DivisorClass:
        out = S.zero()
        for g, a in self.terms:
            out = out + change_basis(S, g, TOTAL) * a
        return out

    def check(self, S: SurfaceModel, target: DivisorClass) -> bool:
        if any(a < 0 for _, a in self.terms):
            return False
        menu = {g.coords for g in effective_generators(S)}
        if any(change_basis(S, g, TOTAL).coords not in menu for g, _ in self.terms):
            return False
        return self.total(S).coords == change_basis(S, target, TOTAL).coords


def effective_generators(S: SurfaceModel) -> list[DivisorClass]:
    """Fixed menu of effective classes: negative curves, h, h - e_i, h - e_i - e_j."""
    key = "eff_menu"
    if key in S._cache:
        return S._cache[key]
    menu = negative_curves(S) + [S.h]
    menu += [S.h - S.e(i) for i in range(1, S.r + 1)]
    menu += [S.h - S.e(i) - S.e(j) for i in range(1, S.r + 1) for j in range(i + 1, S.r + 1)]
    out, seen = [], set()
    for g in menu:
        if g.coords not in seen:
            seen.add(g.coords)
            out.append(g)
    S._cache[key] = out
    return out


def decompose_effective(S: SurfaceModel, D: DivisorClass) -> EffectiveWitness | None:
    """Write ``D`` as a nonnegative combination of the generator menu, or ``None``."""
    D = change_basis(S, D, TOTAL)
    if D.is_zero():
        return EffectiveWitness(())
    menu = effective_generators(S)
    # a single generator is the most readable witness
    for g in menu:
        k = _multiple_of(D.coords, g.coords)
        if k is not None and k > 0:
            return EffectiveWitness(((g, k),))
    rows = [[g.coords[k] for g in menu] for k in range(S.r + 1)]
    res = lp_solve(rows, D.coords, objective=[1] * len(menu))
    if not res.feasible:
        return None
    return EffectiveWitness(tuple((g, a) for g, a in zip(menu, res.x) if a != 0))


def _multiple_of(v, g):
    k = None
    for a, b in zip(v, g):
        if b == 0:
            if a != 0:
                return None
            continue
        q = Fraction(a) / b
        if k is None:
            k = q
        elif q != k:
            return None
    return k
