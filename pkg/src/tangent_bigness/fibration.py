"""Conic fibrations on weak del Pezzo surfaces and their dual VMRT classes.

A pencil is given by its fibre class ``F`` (``F^2 = 0``, nef).  The
reducible fibres are recovered from the irreducible negative curves
orthogonal to ``F``; each connected cluster of them is one fibre, and its
multiplicities are the unique solution of ``sum a_i C_i = F``.  The
correction divisor collects ``(a_i - 1) C_i`` and the dual VMRT class of
the family of fibres is ``zeta + K + 2F - correction``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .curves import enumerate_classes, irreducible_minus2, negative_curves, ROOT
from .linalg import rank, solve
from .picard import (DivisorClass, STRICT, SurfaceModel, TOTAL, change_basis, format_class,
                     intersect, nef_status)


class NotAPencil(ValueError):
    """The proposed class is not the fibre class of a base-point-free pencil."""


class FixedPointFailure(RuntimeError):
    """Removing the fixed part did not terminate (indicates a bug)."""


class NoIntegralSolution(ValueError):
    """A cluster of fibre components does not assemble into a fibre."""


LINE = "line"
CONIC = "conic"
FROM_LINE = "from-line"


@dataclass(frozen=True)
class PencilClass:
    F: DivisorClass
    kind: str
    points: tuple[int, ...] = ()
    line: DivisorClass | None = None
    fixed: DivisorClass | None = None

    @property
    def label(self) -> str:
        if self.kind == LINE:
            return f"line{self.points[0]}"
        if self.kind == CONIC:
            return "conic" + "".join(map(str, self.points))
        return f"from-line({format_class(self.line)})"

    def to_dict(self) -> dict:
        if self.kind == LINE:
            return {"line_through": self.points[0]}
        if self.kind == CONIC:
            return {"conic_through": list(self.points)}
        return {"from_line": list(self.line.coords)}


@dataclass(frozen=True)
class ReducibleMember:
    components: tuple[tuple[DivisorClass, int], ...]

    def total(self, S: SurfaceModel) -> DivisorClass:
        out = S.zero()
        for c, m in self.components:
            out = out + c * m
        return out

    def correction(self, S: SurfaceModel) -> DivisorClass:
        out = S.zero()
        for c, m in self.components:
            out = out + c * (m - 1)
        return out

    @property
    def reduced(self) -> bool:
        return all(m == 1 for _, m in self.components)


VMRT = "vmrt"
PULLBACK = "pullback-effective"
TRANSFER = "transfer"


@dataclass(frozen=True)
class PTClass:
    """``zeta * zeta_class + pullback(base)`` on the projectivised tangent bundle."""

    zeta: Fraction
    base: DivisorClass
    flags: frozenset = frozenset()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "zeta", Fraction(self.zeta))
        object.__setattr__(self, "flags", frozenset(self.flags))

    @property
    def is_vmrt(self) -> bool:
        return VMRT in self.flags

    @property
    def is_pullback_effective(self) -> bool:
        return PULLBACK in self.flags

    # arithmetic drops the evidence flags: a combination is not itself a VMRT
    def __add__(self, other: PTClass) -> PTClass:
        return PTClass(self.zeta + other.zeta, self.base + other.base)

    def __sub__(self, other: PTClass) -> PTClass:
        return PTClass(self.zeta - other.zeta, self.base - other.base)

    def __mul__(self, k) -> PTClass:
        return PTClass(self.zeta * k, self.base * k)

    __rmul__ = __mul__

    def same_class(self, other: PTClass) -> bool:
        return self.zeta == other.zeta and self.base.coords == other.base.coords

    def render(self, S: SurfaceModel, basis: str = STRICT) -> str:
        return format_pt(self.zeta, change_basis(S, self.base, basis))


def format_pt(zeta, base: DivisorClass) -> str:
    z = Fraction(zeta)
    head = "" if z == 0 else ("ζ" if z == 1 else "-ζ" if z == -1 else f"{z}ζ")
    tail = format_class(base)
    if tail == "0":
        return head or "0"
    if not head:
        return tail
    return head + ("" if tail.startswith("-") else "+") + tail


def pullback(S: SurfaceModel, D: DivisorClass, effective: bool = True, label: str = "") -> PTClass:
    """``Pi^* D`` as a PT class, flagged as pulled back from an effective divisor."""
    D = change_basis(S, D, TOTAL)
    return PTClass(0, D, {PULLBACK} if effective else set(), label or f"Pi*({D})")


# pencils ----------------------------------------------------------------

def _validate(S: SurfaceModel, P: PencilClass) -> PencilClass:
    F = P.F
    if intersect(S, F, F) != 0:
        raise NotAPencil(f"{S.name}: {P.label} has F^2 = {intersect(S, F, F)}")
    st = nef_status(S, F)
    if st.status == "not_nef":
        raise NotAPencil(f"{S.name}: {P.label} class {F} meets {st.witness} negatively")
    if -intersect(S, S.canonical, F) not in (1, 2):
        raise NotAPencil(f"{S.name}: {P.label} has -K.F = {-intersect(S, S.canonical, F)}")
    return P


def pencil(S: SurfaceModel, line_through: int | None = None,
           conic_through=None) -> PencilClass:
    """Lines through a closed point (``h - e_p``) or conics through four points."""
    if (line_through is None) == (conic_through is None):
        raise ValueError("give exactly one of line_through / conic_through")
    if line_through is not None:
        p = int(line_through)
        if not 1 <= p <= S.r:
            raise NotAPencil(f"{S.name}: no point p{p}")
        if not S.config.is_closed(p):
            raise NotAPencil(f"{S.name}: p{p} is infinitely near, lines through it do not move")
        return _validate(S, PencilClass(S.h - S.e(p), LINE, (p,)))
    pts = tuple(int(x) for x in conic_through)
    if len(pts) != 4 or len(set(pts)) != 4 or not all(1 <= p <= S.r for p in pts):
        raise NotAPencil(f"{S.name}: a conic pencil needs four distinct points, got {pts}")
    F = S.h * 2
    for p in pts:
        F = F - S.e(p)
    return _validate(S, PencilClass(F, CONIC, pts))


def pencil_from_line(S: SurfaceModel, l: DivisorClass) -> PencilClass:
    """The conic pencil ``|-K - l - E|`` residual to a line on a cubic surface."""
    if S.degree != 3:
        raise NotAPencil(f"{S.name}: residual pencils of a line need degree 3, not {S.degree}")
    l = change_basis(S, l, TOTAL)
    if intersect(S, l, l) != -1 or intersect(S, l, S.canonical) != -1:
        raise NotAPencil(f"{S.name}: {l} is not a (-1)-class")
    F = -S.canonical - l
    E = S.zero()
    roots = irreducible_minus2(S)
    limit = len(enumerate_classes(S, ROOT)) + 1
    steps = 0
    while True:
        bad = next((c for c in roots if intersect(S, F, c) < 0), None)
        if bad is None:
            break
        F, E = F - bad, E + bad
        steps += 1
        if steps > limit:
            raise FixedPointFailure(f"{S.name}: fixed part of |-K-{l}| did not stabilise")
    return _validate(S, PencilClass(F, FROM_LINE, (), l, E))


def pencil_from_spec(S: SurfaceModel, spec: dict) -> PencilClass:
    """Build a pencil from ``{"line_through": p}``, ``{"conic_through": [...]}`` or ``{"from_line": coords}``."""
    if "line_through" in spec:
        return pencil(S, line_through=spec["line_through"])
    if "conic_through" in spec:
        return pencil(S, conic_through=spec["conic_through"])
    if "from_line" in spec:
        return pencil_from_line(S, S.cls(tuple(spec["from_line"])))
    raise ValueError(f"unknown pencil spec {spec!r}")


# reducible members -----------------------------------------------------

def reducible_members(S: SurfaceModel, P: PencilClass) -> list[ReducibleMember]:
    """Reducible fibres of ``P``, one per connected cluster of orthogonal negative curves."""
    F = P.F
    comps = [c for c in negative_curves(S) if intersect(S, c, F) == 0]
    n = len(comps)
    adj = [[j for j in range(n) if j != i and intersect(S, comps[i], comps[j]) > 0] for i in range(n)]
    seen = [False] * n
    members = []
    for start in range(n):
        if seen[start]:
            continue
        cluster, stack = [], [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            cluster.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        cluster.sort()
        cls = [comps[i] for i in cluster]
        rows = [[c.coords[k] for c in cls] for k in range(S.r + 1)]
        if rank(rows) != len(cls):
            raise NoIntegralSolution(f"{S.name}: fibre components {list(map(str, cls))} are dependent")
        x = solve(rows, F.coords)
        if x is None or any(v <= 0 or v.denominator != 1 for v in x):
            raise NoIntegralSolution(
                f"{S.name}: components {list(map(str, cls))} do not add up to the fibre {F}")
        members.append(ReducibleMember(tuple((c, int(v)) for c, v in zip(cls, x))))
    return members


def correction_divisor(S: SurfaceModel, P: PencilClass) -> DivisorClass:
    out = S.zero()
    for m in reducible_members(S, P):
        out = out + m.correction(S)
    return out


def vmrt_class(S: SurfaceModel, P: PencilClass) -> PTClass:
    """Total dual VMRT of the fibres: ``zeta - Pi^*(-K - 2F + D)`` with the correction ``D``."""
    base = S.canonical + P.F * 2 - correction_divisor(S, P)
    return PTClass(1, base, {VMRT}, f"vmrt[{P.label}]")
