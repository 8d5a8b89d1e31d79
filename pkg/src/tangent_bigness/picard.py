"""Picard lattices of blow-ups of the plane at bubble points.

A surface is described by a :class:`BubbleConfig`: points that are either
closed or infinitely near (at the first level) to an earlier point, plus
declared incidences (lines / conics through listed bubble points).

Classes are stored in the *total* basis ``(h, e_1, ..., e_r)`` with
intersection form ``diag(1, -1, ..., -1)``; coordinates are the signed
coefficients, so ``h - e_1`` is ``(1, -1, 0, ...)``.  The *strict* basis
``(H, E_1, ..., E_r)`` uses the strict transforms ``E_i = e_i - e_j`` where
``p_j`` is the point infinitely near ``p_i``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .linalg import is_negative_definite

TOTAL = "total"
STRICT = "strict"


class MalformedConfig(ValueError):
    """The bubble configuration is structurally invalid."""


class NotWeakDelPezzo(ValueError):
    """The blow-up exists but -K is not nef and big.

    ``witness`` is the offending curve class (total basis), when there is one.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class BubblePoint:
    id: int
    parent: int | None = None


@dataclass(frozen=True)
class Incidence:
    degree: int
    through: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "through", frozenset(self.through))


@dataclass(frozen=True)
class BubbleConfig:
    name: str
    points: tuple[BubblePoint, ...] = ()
    incidences: tuple[Incidence, ...] = ()

    @property
    def r(self) -> int:
        return len(self.points)

    def parent(self, i: int) -> int | None:
        return self.points[i - 1].parent

    def children(self, i: int) -> list[int]:
        return [p.id for p in self.points if p.parent == i]

    def is_closed(self, i: int) -> bool:
        return self.points[i - 1].parent is None

    def check(self) -> None:
        """Raise :class:`MalformedConfig` on structural problems."""
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            raise MalformedConfig(f"{self.name}: duplicate point ids {ids}")
        if ids != list(range(1, len(ids) + 1)):
            raise MalformedConfig(f"{self.name}: point ids must be 1..r in order, got {ids}")
        for p in self.points:
            if p.parent is None:
                continue
            if p.parent not in ids:
                raise MalformedConfig(f"{self.name}: p{p.id} has unknown parent {p.parent}")
            if p.parent >= p.id:
                raise MalformedConfig(
                    f"{self.name}: parent p{p.parent} must precede p{p.id} (cyclic or forward reference)")
        for inc in self.incidences:
            if inc.degree not in (1, 2):
                raise MalformedConfig(f"{self.name}: incidence degree must be 1 or 2, got {inc.degree}")
            if not inc.through or not inc.through <= set(ids):
                raise MalformedConfig(f"{self.name}: incidence through unknown points {sorted(inc.through)}")
            if inc.degree == 1 and len(inc.through) < 2:
                raise MalformedConfig(f"{self.name}: a declared line needs at least two points")

    @classmethod
    def from_dict(cls, data: dict) -> BubbleConfig:
        try:
            points = tuple(BubblePoint(int(p["id"]), None if p.get("parent") is None else int(p["parent"]))
                           for p in data.get("points", []))
            incs = tuple(Incidence(int(i["deg"]), frozenset(int(x) for x in i["through"]))
                         for i in data.get("incidences", []))
            name = str(data["name"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedConfig(f"bad bubble configuration record: {exc!r}") from exc
        return cls(name, points, incs)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "points": [{"id": p.id, "parent": p.parent} for p in self.points],
            "incidences": [{"deg": i.degree, "through": sorted(i.through)} for i in self.incidences],
        }

    @classmethod
    def load(cls, path: str | Path) -> BubbleConfig:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _frac(v):
    f = Fraction(v)
    return int(f) if f.denominator == 1 else f


@dataclass(frozen=True)
class DivisorClass:
    """A class ``coords[0] * h + sum coords[i] * e_i`` (or H, E_i when strict)."""

    coords: tuple
    basis: str = TOTAL
    ambient: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_frac(v) for v in self.coords))
        if self.basis not in (TOTAL, STRICT):
            raise ValueError(f"unknown basis {self.basis!r}")

    @property
    def r(self) -> int:
        return len(self.coords) - 1

    @property
    def degree(self):
        return self.coords[0]

    def _check(self, other: DivisorClass):
        if len(self.coords) != len(other.coords) or self.basis != other.basis:
            raise ValueError("classes live on different lattices or bases")
        if self.ambient and other.ambient and self.ambient != other.ambient:
            raise ValueError(f"classes on different surfaces: {self.ambient} vs {other.ambient}")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)),
                            self.basis, self.ambient or other.ambient)

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return self + (-other)

    def __neg__(self) -> DivisorClass:
        return DivisorClass(tuple(-a for a in self.coords), self.basis, self.ambient)

    def __mul__(self, k) -> DivisorClass:
        return DivisorClass(tuple(k * a for a in self.coords), self.basis, self.ambient)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return format_class(self)


def format_class(c: DivisorClass) -> str:
    h, e = ("H", "E") if c.basis == STRICT else ("h", "e")
    parts = []
    for i, v in enumerate(c.coords):
        if v == 0:
            continue
        name = h if i == 0 else f"{e}{i}"
        mag = abs(v)
        term = name if mag == 1 else f"{mag}{name}"
        parts.append(("-" if v < 0 else "+") + term)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


@dataclass(frozen=True, eq=False)
class SurfaceModel:
    config: BubbleConfig
    canonical: DivisorClass
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return self.config.name

    @property
    def r(self) -> int:
        return self.config.r

    @property
    def degree(self) -> int:
        return 9 - self.r

    # class constructors -------------------------------------------------
    def cls(self, *coords, basis: str = TOTAL) -> DivisorClass:
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction)):
            coords = tuple(coords[0])
        if len(coords) != self.r + 1:
            raise ValueError(f"{self.name}: expected {self.r + 1} coordinates, got {len(coords)}")
        c = DivisorClass(coords, basis, self.name)
        return change_basis(self, c, TOTAL) if basis == STRICT else c

    def zero(self) -> DivisorClass:
        return DivisorClass((0,) * (self.r + 1), TOTAL, self.name)

    @property
    def h(self) -> DivisorClass:
        return self.cls(1, *([0] * self.r))

    def e(self, i: int) -> DivisorClass:
        v = [0] * (self.r + 1)
        v[i] = 1
        return self.cls(v)

    def E(self, i: int) -> DivisorClass:
        """Strict transform of the exceptional curve over ``p_i`` (total basis)."""
        c = self.e(i)
        for j in self.config.children(i):
            c = c - self.e(j)
        return c

    def incidence_class(self, inc: Incidence) -> DivisorClass:
        v = [0] * (self.r + 1)
        v[0] = inc.degree
        for p in inc.through:
            v[p] = -1
        return self.cls(v)

    def structural_curves(self) -> list[DivisorClass]:
        """Irreducible curves fixed by the configuration: the E_i and declared incidences."""
        out = [self.E(i) for i in range(1, self.r + 1)]
        out += [self.incidence_class(inc) for inc in self.config.incidences]
        return out

    def pair(self, a: DivisorClass, b: DivisorClass):
        return intersect(self, a, b)


def _total(S: SurfaceModel, c: DivisorClass) -> DivisorClass:
    if c.basis == TOTAL:
        return c
    return change_basis(S, c, TOTAL)


def intersect(S: SurfaceModel, a: DivisorClass, b: DivisorClass):
    """Intersection number of two classes on ``S``."""
    for c in (a, b):
        if c.r != S.r:
            raise ValueError(f"class {c} does not live on {S.name} (rank mismatch)")
        if c.ambient is not None and c.ambient != S.name:
            raise ValueError(f"class {c} lives on {c.ambient}, not {S.name}")
    x, y = _total(S, a).coords, _total(S, b).coords
    return x[0] * y[0] - sum(p * q for p, q in zip(x[1:], y[1:]))


def change_basis(S: SurfaceModel, c: DivisorClass, target: str) -> DivisorClass:
    """Re-express ``c`` in the ``"total"`` or ``"strict"`` basis."""
    if target not in (TOTAL, STRICT):
        raise ValueError(f"unknown basis {target!r}")
    if c.basis == target:
        return c
    cfg = S.config
    v = list(c.coords)
    out = [v[0]] + [0] * S.r
    if target == STRICT:
        # coefficient of E_j accumulates the e-coefficients along the ancestor chain
        for j in range(1, S.r + 1):
            p = cfg.parent(j)
            out[j] = v[j] + (out[p] if p is not None else 0)
    else:
        for j in range(1, S.r + 1):
            p = cfg.parent(j)
            out[j] = v[j] - (v[p] if p is not None else 0)
    return DivisorClass(tuple(out), target, c.ambient or S.name)


def canonical_class(S: SurfaceModel, basis: str = TOTAL) -> DivisorClass:
    """K = -3h + sum e_i, rendered in the requested basis."""
    return change_basis(S, S.canonical, basis)


def build_surface(config: BubbleConfig) -> SurfaceModel:
    """Validate a configuration and return its weak del Pezzo surface model.

    Checks every structural curve (exceptional strict transforms and
    declared incidences) against -K, pairwise nonnegativity of distinct
    irreducible curves, and negative definiteness of the (-2)-configuration.
    """
    config.check()
    r = config.r
    if r >= 9:
        raise NotWeakDelPezzo(f"{config.name}: K^2 = {9 - r} <= 0")
    K = DivisorClass((-3,) + (1,) * r, TOTAL, config.name)
    S = SurfaceModel(config, K)
    curves = S.structural_curves()
    seen = set()
    for c in curves:
        if c.coords in seen:
            raise MalformedConfig(f"{config.name}: curve {c} declared twice")
        seen.add(c.coords)
        if -intersect(S, K, c) < 0:
            raise NotWeakDelPezzo(f"{config.name}: -K.C < 0 for the curve C = {c}", witness=c)
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            if intersect(S, a, b) < 0:
                raise MalformedConfig(
                    f"{config.name}: distinct irreducible curves {a} and {b} meet negatively "
                    "(an incidence passes through an infinitely near point but not its parent?)")
    roots = [c for c in curves if intersect(S, c, c) == -2]
    if roots:
        gram = [[intersect(S, a, b) for b in roots] for a in roots]
        if not is_negative_definite(gram):
            raise NotWeakDelPezzo(
                f"{config.name}: the (-2)-curves span a non-negative-definite lattice, "
                "so -K is not big", witness=roots[0])
    return S


@dataclass(frozen=True)
class NefStatus:
    status: str  # "not_nef" | "nef" | "ample"
    big: bool
    witness: DivisorClass | None = None
    self_intersection: Fraction | int = 0


def nef_status(S: SurfaceModel, A: DivisorClass) -> NefStatus:
    """Nef / ample / big test against all irreducible (-1)- and (-2)-curves."""
    from .curves import irreducible_minus2, lines

    A = _total(S, A)
    sq = intersect(S, A, A)
    positive = True
    for c in list(lines(S)) + list(irreducible_minus2(S)):
        d = intersect(S, A, c)
        if d < 0:
            return NefStatus("not_nef", False, c, sq)
        if d == 0:
            positive = False
    if S.r == 0:
        # Picard rank one: nef iff nonnegative degree
        if A.coords[0] < 0:
            return NefStatus("not_nef", False, S.h, sq)
        positive = A.coords[0] > 0
    big = sq > 0
    return NefStatus("ample" if positive and big else "nef", big, None, sq)


def parse_class(S: SurfaceModel, text: str, basis: str | None = None) -> DivisorClass:
    """Parse ``"2H-E1-2E2"`` style text (upper case = strict, lower = total)."""
    import re

    s = text.replace(" ", "").replace("*", "")
    if not s or s == "0":
        return S.zero()
    if basis is None:
        basis = STRICT if any(ch in s for ch in "HE") else TOTAL
    v = [Fraction(0)] * (S.r + 1)
    pos = 0
    pat = re.compile(r"([+-]?)(\d+(?:/\d+)?)?([hHeE])(\d*)")
    while pos < len(s):
        m = pat.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse class {text!r} near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        letter, idx = m.group(3).lower(), m.group(4)
        if letter == "h":
            if idx:
                raise ValueError(f"bad term in {text!r}")
            v[0] += sign * coef
        else:
            i = int(idx)
            if not 1 <= i <= S.r:
                raise ValueError(f"index {i} out of range in {text!r}")
            v[i] += sign * coef
        pos = m.end()
    c = DivisorClass(tuple(v), basis, S.name)
    return change_basis(S, c, TOTAL)

