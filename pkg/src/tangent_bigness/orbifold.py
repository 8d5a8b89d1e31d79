"""Orbifold Chern numbers of the anticanonical model of a weak del Pezzo surface.

Contracting the (-2)-curves gives a surface with du Val singularities.  Each
singularity of type T with n exceptional curves and local group G changes
the topological Euler number by ``-(n + 1) + 1/|G|`` in the orbifold count.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curves import dynkin_type
from .picard import SurfaceModel


@dataclass(frozen=True)
class ADELocalData:
    type: str
    exceptional_count: int
    group_order: int


def group_order(letter: str, n: int) -> int:
    """Order of the binary polyhedral group of a du Val singularity."""
    if letter == "A":
        return n + 1
    if letter == "D":
        if n < 4:
            raise ValueError(f"D{n} is not a Dynkin type")
        return 4 * (n - 2)
    if letter == "E":
        return {6: 24, 7: 48, 8: 120}[n]
    raise ValueError(f"unknown Dynkin letter {letter!r}")


def local_data(type_: str) -> ADELocalData:
    letter, n = type_[0], int(type_[1:])
    return ADELocalData(type_, n, group_order(letter, n))


@dataclass(frozen=True)
class OrbifoldInvariants:
    c1sq: Fraction
    c2: Fraction
    s2: Fraction
    singularities: tuple[ADELocalData, ...] = ()

    def as_dict(self) -> dict:
        return {"c1sq": str(self.c1sq), "c2": str(self.c2), "s2": str(self.s2),
                "singularities": [d.type for d in self.singularities]}


def orbifold_invariants(S: SurfaceModel) -> OrbifoldInvariants:
    """``(c_1^2, c_2, s_2)`` of the orbifold anticanonical model; ``s_2 = c_1^2 - c_2``."""
    sing = tuple(local_data(c.type) for c in dynkin_type(S).components)
    c1sq = Fraction(9 - S.r)
    c2 = Fraction(3 + S.r)
    for d in sing:
        c2 -= d.exceptional_count + 1 - Fraction(1, d.group_order)
    return OrbifoldInvariants(c1sq, c2, c1sq - c2, sing)


def positive_segre(S: SurfaceModel) -> bool:
    return orbifold_invariants(S).s2 > 0
