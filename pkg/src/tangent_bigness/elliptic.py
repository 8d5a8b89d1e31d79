"""Singular fibres of rational elliptic surfaces and formal non-bigness identities.

Fibres are symbolic: a fibre of Kodaira type T contributes components
``C_1..C_s`` with multiplicities ``nu_i`` and the relation
``F = sum nu_i C_i``.  The divisor ``Y = zeta + F - E_0`` with
``E_0 = sum (nu_i - 1) C_i`` is rewritten as ``k zeta`` plus a nonzero
effective combination of fibre symbols, modulo the fibre relations.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .linalg import solve
from .lp import lp_solve

SMOOTH_TOTAL = 12  # topological Euler number of a rational elliptic surface


class UnknownFiberType(ValueError):
    pass


class IdentityNotFound(RuntimeError):
    """No identity with k <= 4 exists (should not happen for Euler number 12)."""


@dataclass(frozen=True)
class KodairaType:
    tag: str
    euler: int
    component_multiplicities: tuple[int, ...]

    @property
    def nonreduced(self) -> bool:
        return any(m > 1 for m in self.component_multiplicities)

    def __str__(self):
        return self.tag


_STAR = {"IV*": (8, (1, 1, 1, 2, 2, 2, 3)),
         "III*": (9, (1, 1, 2, 2, 2, 3, 3, 4)),
         "II*": (10, (1, 2, 2, 3, 3, 4, 4, 5, 6))}
_ADDITIVE = {"II": (2, (1,)), "III": (3, (1, 1)), "IV": (4, (1, 1, 1))}


@lru_cache(maxsize=None)
def kodaira_data(tag: str) -> KodairaType:
    """Euler number and component multiplicities of a singular fibre type."""
    t = tag.replace("_", "").replace(" ", "")
    if t in _STAR:
        e, mults = _STAR[t]
        return KodairaType(t, e, mults)
    if t in _ADDITIVE:
        e, mults = _ADDITIVE[t]
        return KodairaType(t, e, mults)
    m = re.fullmatch(r"I(\d+)(\*?)", t)
    if m:
        n = int(m.group(1))
        if m.group(2):
            return KodairaType(t, n + 6, (1, 1, 1, 1) + (2,) * (n + 1))
        if n >= 1:
            return KodairaType(t, n, (1,) * n)
    raise UnknownFiberType(f"unknown singular fibre type {tag!r}")


def singular_types(max_euler: int) -> list[KodairaType]:
    """All singular fibre types with Euler number at most ``max_euler``, in a fixed order."""
    out = [kodaira_data(f"I{n}") for n in range(1, max_euler + 1)]
    out += [kodaira_data(t) for t in ("II", "III", "IV", "IV*", "III*", "II*")]
    out += [kodaira_data(f"I{n}*") for n in range(0, max_euler - 5)]
    return [t for t in out if t.euler <= max_euler]


def enumerate_multisets(total: int) -> list[tuple[KodairaType, ...]]:
    """Every multiset of singular fibre types with Euler sum ``total``."""
    if total < 0:
        return []
    types = singular_types(total)
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(types)):
            t = types[i]
            if t.euler <= left:
                acc.append(t)
                rec(i, left - t.euler, acc)
                acc.pop()

    rec(0, total, [])
    return out


def enumerate_double_nonreduced(total_euler: int) -> list[Counter]:
    """Multisets with Euler sum ``total_euler`` containing at least two non-reduced fibres."""
    out = []
    for ms in enumerate_multisets(total_euler):
        if sum(t.nonreduced for t in ms) >= 2:
            out.append(Counter(t.tag for t in ms))
    return out


@dataclass(frozen=True)
class FiberAssignment:
    fibers: tuple[KodairaType, ...]
    halphen_multiplicity: int = 1

    def __post_init__(self):
        fibers = tuple(kodaira_data(f) if isinstance(f, str) else f for f in self.fibers)
        object.__setattr__(self, "fibers", fibers)
        if self.halphen_multiplicity < 1:
            raise ValueError("multiplicity of the multiple fibre must be >= 1")
        if self.euler != SMOOTH_TOTAL:
            raise ValueError(f"Euler numbers sum to {self.euler}, not {SMOOTH_TOTAL}")

    @property
    def euler(self) -> int:
        return sum(f.euler for f in self.fibers)

    @property
    def nonreduced(self) -> list[int]:
        return [i for i, f in enumerate(self.fibers) if f.nonreduced]

    @property
    def label(self) -> str:
        s = "+".join(f.tag for f in self.fibers)
        return s if self.halphen_multiplicity == 1 else f"{s} (multiple fibre m={self.halphen_multiplicity})"


def enumerate_assignments(min_nonreduced: int = 0) -> list[FiberAssignment]:
    return [FiberAssignment(ms) for ms in enumerate_multisets(SMOOTH_TOTAL)
            if sum(t.nonreduced for t in ms) >= min_nonreduced]


# formal identities ------------------------------------------------------

ZETA = "zeta"
FIBER = "F"


def symbols(a: FiberAssignment) -> list[str]:
    out = [ZETA, FIBER]
    for f, t in enumerate(a.fibers, 1):
        out += [f"{t.tag}#{f}.C{i}" for i in range(1, len(t.component_multiplicities) + 1)]
    if a.halphen_multiplicity > 1:
        out.append("F_mult")
    return out


def relations(a: FiberAssignment) -> list[dict[str, int]]:
    """``F - sum nu_i C_i`` for each fibre, and ``F - m F_mult`` for a multiple fibre."""
    rels = []
    for f, t in enumerate(a.fibers, 1):
        rel = {FIBER: 1}
        for i, nu in enumerate(t.component_multiplicities, 1):
            rel[f"{t.tag}#{f}.C{i}"] = -nu
        rels.append(rel)
    if a.halphen_multiplicity > 1:
        rels.append({FIBER: 1, "F_mult": -a.halphen_multiplicity})
    return rels


def y_class(a: FiberAssignment) -> dict[str, int]:
    """``Y = zeta + F - E_0`` with ``E_0`` the non-reduced part of the fibres."""
    y = {ZETA: 1, FIBER: 1}
    for f, t in enumerate(a.fibers, 1):
        for i, nu in enumerate(t.component_multiplicities, 1):
            if nu > 1:
                y[f"{t.tag}#{f}.C{i}"] = -(nu - 1)
    return y


@dataclass(frozen=True)
class FormalPTIdentity:
    """``k Y == k zeta + sum right[s] * s`` modulo the fibre relations."""

    assignment: FiberAssignment
    k: int
    right: dict = field(compare=False)
    strategy: str = ""

    def effective_part(self) -> dict[str, Fraction]:
        return {s: v for s, v in self.right.items() if s != ZETA and v}

    def verify(self) -> bool:
        a = self.assignment
        syms = symbols(a)
        eff = self.effective_part()
        if not eff or any(v < 0 for v in eff.values()) or self.right.get(ZETA, 0) != self.k:
            return False
        y = y_class(a)
        diff = [Fraction(self.k * y.get(s, 0)) - Fraction(self.right.get(s, 0)) for s in syms]
        rels = relations(a)
        rows = [[Fraction(rel.get(s, 0)) for rel in rels] for s in syms]
        return solve(rows, diff) is not None

    def render(self) -> str:
        lhs = "Y" if self.k == 1 else f"{self.k}Y"
        parts = [f"{self.k}ζ" if self.k != 1 else "ζ"]
        for s, v in self.effective_part().items():
            parts.append(s if v == 1 else f"{v}*{s}")
        return f"{lhs} = " + " + ".join(parts)


def _single_fiber_identity(a: FiberAssignment) -> FormalPTIdentity:
    nr = a.nonreduced
    right = {ZETA: Fraction(1)}
    if not nr:
        right[FIBER] = Fraction(1)
        return FormalPTIdentity(a, 1, right, "no non-reduced fibre: Y = zeta + F")
    f = nr[0] + 1
    t = a.fibers[nr[0]]
    # F - E_0 = sum nu_i C_i - sum (nu_i - 1) C_i = reduced sum of the components
    for i in range(1, len(t.component_multiplicities) + 1):
        right[f"{t.tag}#{f}.C{i}"] = Fraction(1)
    return FormalPTIdentity(a, 1, right, f"one non-reduced fibre {t.tag}: F - E_0 is its reduced support")


def _two_i0star_identity(a: FiberAssignment) -> FormalPTIdentity:
    right = {ZETA: Fraction(2)}
    for idx in a.nonreduced:
        f, t = idx + 1, a.fibers[idx]
        for i, nu in enumerate(t.component_multiplicities, 1):
            if nu == 1:
                right[f"{t.tag}#{f}.C{i}"] = Fraction(1)
    return FormalPTIdentity(a, 2, right, "two I0* fibres: add the two rewritings of Y")


def _lp_identity(a: FiberAssignment, k: int) -> FormalPTIdentity | None:
    syms = symbols(a)
    rels = relations(a)
    y = y_class(a)
    eff = syms[1:]
    # k Y - k zeta = sum r_s s + sum (p_j - q_j) rel_j, r >= 0, sum r >= 1
    n_eff, n_rel = len(eff), len(rels)
    rows, rhs = [], []
    for s in eff:
        row = [Fraction(int(s == e)) for e in eff]
        row += [Fraction(rel.get(s, 0)) for rel in rels] + [Fraction(-rel.get(s, 0)) for rel in rels]
        row.append(Fraction(0))
        rows.append(row)
        rhs.append(Fraction(k * y.get(s, 0)))
    rows.append([Fraction(1)] * n_eff + [Fraction(0)] * (2 * n_rel) + [Fraction(-1)])
    rhs.append(Fraction(1))
    res = lp_solve(rows, rhs)
    if not res.feasible:
        return None
    r = res.x[:n_eff]
    if any(v.denominator != 1 for v in r):
        return None
    right = {ZETA: Fraction(k)}
    right.update({s: v for s, v in zip(eff, r) if v})
    return FormalPTIdentity(a, k, right, f"LP search with k = {k}")


def elliptic_nonbig_identity(a: FiberAssignment) -> FormalPTIdentity:
    """Produce and verify ``k Y = k zeta + (nonzero effective)`` for an assignment."""
    tags = sorted(a.fibers[i].tag for i in a.nonreduced)
    candidates = []
    if len(tags) <= 1:
        candidates.append(_single_fiber_identity(a))
    elif tags == ["I0*", "I0*"]:
        candidates.append(_two_i0star_identity(a))
    for ident in candidates:
        if ident.verify():
            return ident
    for k in range(1, 5):
        ident = _lp_identity(a, k)
        if ident is not None and ident.verify():
            return ident
    raise IdentityNotFound(f"no identity with k <= 4 for {a.label}")
