"""Certificates of (non-)bigness of the tangent bundle, their verifiers and a searcher.

Three kinds of certificate are handled:

* ``nonbig``: a nonnegative combination of dual VMRT classes equal to
  ``k zeta + Pi^* R`` with ``k > 0`` and ``R`` effective;
* ``big``: a strictly positive combination of effective PT classes equal to
  ``m zeta`` whose members span the whole space (rank ``r + 2``), so that
  ``zeta`` is interior to an effective cone;
* ``big-orbifold``: an effective class ``m zeta - Pi^* D`` with ``D`` the sum
  of all (-2)-curves, together with positivity of the orbifold second
  Segre class of the anticanonical model.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from pathlib import Path

from .curves import decompose_effective, effective_generators, irreducible_minus2, lines, negative_curves
from .fibration import (TRANSFER, NotAPencil, NoIntegralSolution, PencilClass,
                        PTClass, pencil, pencil_from_line, pencil_from_spec, pullback, vmrt_class)
from .linalg import rank
from .lp import lp_solve
from .picard import STRICT, TOTAL, DivisorClass, SurfaceModel, change_basis

NONBIG = "nonbig"
BIG = "big"
ORBIFOLD = "big-orbifold"


class NoBlowDown(ValueError):
    """The target configuration is not a blow-up of the source configuration."""


@dataclass(frozen=True)
class Term:
    ptclass: PTClass
    coeff: Fraction
    source: PencilClass | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))


@dataclass(frozen=True)
class NonBigCertificate:
    terms: tuple[Term, ...]
    k: Fraction
    residual: DivisorClass
    name: str = ""
    kind: str = field(default=NONBIG, init=False)


@dataclass(frozen=True)
class BigCertificate:
    terms: tuple[Term, ...]
    m: Fraction
    name: str = ""
    kind: str = field(default=BIG, init=False)


@dataclass(frozen=True)
class OrbifoldCertificate:
    """``sum coeff * term == m zeta - Pi^* D`` with ``D`` the (-2)-locus."""

    terms: tuple[Term, ...]
    m: Fraction
    D: DivisorClass
    name: str = ""
    kind: str = field(default=ORBIFOLD, init=False)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.ok


def _combine(S: SurfaceModel, terms) -> PTClass:
    out = PTClass(0, S.zero())
    for t in terms:
        out = out + PTClass(t.ptclass.zeta, change_basis(S, t.ptclass.base, TOTAL)) * t.coeff
    return out


# pencils and menus ------------------------------------------------------

def default_pencils(S: SurfaceModel) -> list[PencilClass]:
    """Line pencils through closed points, conic pencils through 4 points, residual pencils of lines."""
    key = "pencil_menu"
    if key in S._cache:
        return S._cache[key]
    out = []
    for p in range(1, S.r + 1):
        if S.config.is_closed(p):
            out.append(pencil(S, line_through=p))
    for pts in combinations(range(1, S.r + 1), 4):
        try:
            out.append(pencil(S, conic_through=pts))
        except NotAPencil:
            pass
    if S.degree == 3:
        for l in lines(S):
            out.append(pencil_from_line(S, l))
    uniq, seen = [], set()
    for P in out:
        if P.F.coords not in seen:
            seen.add(P.F.coords)
            uniq.append(P)
    S._cache[key] = uniq
    return uniq


def default_vmrts(S: SurfaceModel) -> list[tuple[PencilClass, PTClass]]:
    key = "vmrt_menu"
    if key not in S._cache:
        S._cache[key] = [(P, vmrt_class(S, P)) for P in default_pencils(S)]
    return S._cache[key]


def _vmrt_evidence(S: SurfaceModel, term: Term) -> str | None:
    """Return ``None`` if ``term`` really is a dual VMRT class, else the reason it is not."""
    pt = term.ptclass
    if not pt.is_vmrt:
        return "term is not flagged as a dual VMRT"
    if term.source is not None:
        try:
            expected = vmrt_class(S, term.source)
        except (NotAPencil, NoIntegralSolution) as exc:
            return f"source pencil invalid: {exc}"
        if not expected.same_class(PTClass(pt.zeta, change_basis(S, pt.base, TOTAL))):
            return f"stated class {pt.render(S)} differs from the VMRT {expected.render(S)} of {term.source.label}"
        return None
    target = PTClass(pt.zeta, change_basis(S, pt.base, TOTAL))
    if any(v.same_class(target) for _, v in default_vmrts(S)):
        return None
    return f"{pt.render(S)} is not the VMRT of any standard pencil"


def _effective_evidence(S: SurfaceModel, term: Term) -> str | None:
    pt = term.ptclass
    if pt.is_vmrt:
        return _vmrt_evidence(S, term)
    if TRANSFER in pt.flags:
        return None if pt.zeta >= 0 else "transferred class has negative zeta coefficient"
    if pt.is_pullback_effective:
        if pt.zeta != 0:
            return "pullback term carries a zeta coefficient"
        if decompose_effective(S, pt.base) is None:
            return f"pullback {change_basis(S, pt.base, STRICT)} is not effective"
        return None
    return "term has no effectivity evidence"


# verifiers --------------------------------------------------------------

def verify_nonbig(S: SurfaceModel, cert: NonBigCertificate) -> Verdict:
    if cert.k <= 0:
        return Verdict(False, f"k = {cert.k} is not positive")
    moved = S.zero()
    for i, t in enumerate(cert.terms):
        if t.coeff < 0:
            return Verdict(False, f"term {i} has negative coefficient {t.coeff}")
        if t.ptclass.is_vmrt:
            why = _vmrt_evidence(S, t)
            if why:
                return Verdict(False, f"term {i}: {why}")
        elif t.ptclass.is_pullback_effective and t.ptclass.zeta == 0:
            # an effective pullback on the left must be absorbed by the residual
            moved = moved + change_basis(S, t.ptclass.base, TOTAL) * t.coeff
        else:
            return Verdict(False, f"term {i} is neither a dual VMRT nor an effective pullback")
    total = _combine(S, cert.terms)
    residual = change_basis(S, cert.residual, TOTAL)
    if total.zeta != cert.k:
        return Verdict(False, f"zeta coefficient is {total.zeta}, expected k = {cert.k}")
    if total.base.coords != residual.coords:
        return Verdict(False, f"sum has base {change_basis(S, total.base, STRICT)}, "
                              f"expected residual {change_basis(S, residual, STRICT)}")
    need = residual - moved
    witness = decompose_effective(S, need)
    if witness is None:
        return Verdict(False, f"residual {change_basis(S, need, STRICT)} is not effective")
    return Verdict(True, "sum of dual VMRTs equals k zeta plus an effective pullback",
                   {"k": cert.k, "residual": need, "witness": witness})


def pt_matrix(S: SurfaceModel, classes) -> list[list[Fraction]]:
    return [[Fraction(p.zeta)] + [Fraction(v) for v in change_basis(S, p.base, TOTAL).coords]
            for p in classes]


def verify_big_interior(S: SurfaceModel, cert: BigCertificate) -> Verdict:
    if cert.m <= 0:
        return Verdict(False, f"m = {cert.m} is not positive")
    for i, t in enumerate(cert.terms):
        if t.coeff <= 0:
            return Verdict(False, f"term {i} has non-positive coefficient {t.coeff}")
        why = _effective_evidence(S, t)
        if why:
            return Verdict(False, f"term {i}: {why}")
    total = _combine(S, cert.terms)
    if total.zeta != cert.m or not total.base.is_zero():
        return Verdict(False, f"sum is {total.render(S)}, expected {cert.m}ζ")
    rk = rank(pt_matrix(S, [t.ptclass for t in cert.terms]))
    if rk != S.r + 2:
        return Verdict(False, f"generators have rank {rk}, need {S.r + 2}", {"rank": rk})
    return Verdict(True, "zeta is interior to a full-rank effective cone", {"rank": rk, "m": cert.m})


def minus2_locus(S: SurfaceModel) -> DivisorClass:
    out = S.zero()
    for c in irreducible_minus2(S):
        out = out + c
    return out


def verify_big_orbifold(S: SurfaceModel, cert: OrbifoldCertificate | None) -> Verdict:
    from .orbifold import orbifold_invariants

    if cert is None or not cert.terms:
        return Verdict(False, "no effective combination given")
    if cert.m <= 0:
        return Verdict(False, f"m = {cert.m} is not positive")
    D = minus2_locus(S)
    if change_basis(S, cert.D, TOTAL).coords != D.coords:
        return Verdict(False, f"D = {change_basis(S, cert.D, STRICT)} is not the sum of all (-2)-curves")
    for i, t in enumerate(cert.terms):
        if t.coeff < 0:
            return Verdict(False, f"term {i} has negative coefficient {t.coeff}")
        why = _effective_evidence(S, t)
        if why:
            return Verdict(False, f"term {i}: {why}")
    total = _combine(S, cert.terms)
    if total.zeta != cert.m or total.base.coords != (-D).coords:
        return Verdict(False, f"combination is {total.render(S)}, expected {cert.m}ζ - Pi*D")
    inv = orbifold_invariants(S)
    if inv.s2 <= 0:
        return Verdict(False, f"orbifold s2 = {inv.s2} is not positive", {"invariants": inv})
    return Verdict(True, "m zeta - Pi*D effective and s2 > 0", {"invariants": inv})


def verify(S: SurfaceModel, cert) -> Verdict:
    if cert.kind == NONBIG:
        return verify_nonbig(S, cert)
    if cert.kind == BIG:
        return verify_big_interior(S, cert)
    return verify_big_orbifold(S, cert)


# blow-up transfer --------------------------------------------------------

def _check_blowup(Z: SurfaceModel, X: SurfaceModel) -> list[int]:
    zc, xc = Z.config, X.config
    if xc.r <= zc.r or xc.points[:zc.r] != zc.points:
        raise NoBlowDown(f"{X.name} does not extend the points of {Z.name}")
    new = list(range(zc.r + 1, xc.r + 1))
    for p in new:
        parent = xc.parent(p)
        if parent is not None and parent > zc.r:
            raise NoBlowDown(f"p{p} lies over another new point; blow up in stages")
    old = set(range(1, zc.r + 1))
    for inc in zc.incidences:
        if not any(j.degree == inc.degree and j.through & old == inc.through for j in xc.incidences):
            raise NoBlowDown(f"incidence {sorted(inc.through)} of {Z.name} is not kept in {X.name}")
    return new


def blowup_transfer(Z: SurfaceModel, X: SurfaceModel, ptclass: PTClass,
                    mode: str = "plain", k: int = 1) -> PTClass:
    """Carry an effective ``xi + Lambda^* D`` on ``Z`` to ``X`` (a blow-up at new points)."""
    new = _check_blowup(Z, X)
    if ptclass.zeta != 1:
        raise ValueError("transfer applies to classes of the form xi + Lambda^* D")
    D = change_basis(Z, ptclass.base, TOTAL)
    fD = X.cls(tuple(D.coords) + (0,) * len(new))
    E = X.zero()
    for p in new:
        E = E + X.e(p)
    if mode == "plain":
        return PTClass(1, fD + E, {TRANSFER}, f"transfer[{ptclass.label}]")
    if mode == "k":
        if k < 1:
            raise ValueError("k must be positive")
        return PTClass(k, fD * k + E * (k - 1), {TRANSFER}, f"transfer{k}[{ptclass.label}]")
    raise ValueError(f"unknown transfer mode {mode!r}")


# search -----------------------------------------------------------------

def _integral_scale(values) -> int:
    den = 1
    for v in values:
        den = lcm(den, Fraction(v).denominator)
    return den


def search_nonbig(S: SurfaceModel, menu=None) -> NonBigCertificate | None:
    vm = default_vmrts(S) if menu is None else menu
    if not vm:
        return None
    gens = effective_generators(S)
    n, g = len(vm), len(gens)
    rows = [[Fraction(1)] * n + [Fraction(0)] * g]
    for k in range(S.r + 1):
        rows.append([v.base.coords[k] for _, v in vm] + [-c.coords[k] for c in gens])
    rhs = [1] + [0] * (S.r + 1)
    res = lp_solve(rows, rhs, objective=[0] * n + [1] * g)
    if not res.feasible:
        return None
    x = res.x[:n]
    scale = _integral_scale(x)
    terms = tuple(Term(v, xi * scale, P) for (P, v), xi in zip(vm, x) if xi)
    residual = S.zero()
    for t in terms:
        residual = residual + t.ptclass.base * t.coeff
    cert = NonBigCertificate(terms, Fraction(scale), residual, f"{S.name}-nonbig-search")
    if not verify_nonbig(S, cert):
        raise AssertionError(f"{S.name}: searched certificate failed verification")
    return cert


def default_big_menu(S: SurfaceModel) -> list[Term]:
    out = [Term(v, 1, P) for P, v in default_vmrts(S)]
    out += [Term(pullback(S, c, label=f"Pi*({c})"), 1) for c in negative_curves(S)]
    return out


def search_big(S: SurfaceModel, menu: list[Term] | None = None) -> BigCertificate | None:
    gens = default_big_menu(S) if menu is None else list(menu)
    if not gens:
        return None
    n = len(gens)
    cols = [[Fraction(t.ptclass.zeta)] + list(change_basis(S, t.ptclass.base, TOTAL).coords) for t in gens]
    rows = [[cols[j][k] for j in range(n)] for k in range(1, S.r + 2)]
    total = [Fraction(0)] * n
    covered = [False] * n
    for i in range(n):
        if covered[i]:
            continue
        lower = [0] * n
        lower[i] = 1
        res = lp_solve(rows, [0] * (S.r + 1), lower=lower)
        if not res.feasible:
            continue
        for j, v in enumerate(res.x):
            if v > 0:
                total[j] += v
                covered[j] = True
    support = [j for j in range(n) if total[j] > 0]
    if not support:
        return None
    if rank([cols[j] for j in support]) != S.r + 2:
        return None
    scale = _integral_scale(total[j] for j in support)
    terms = tuple(Term(gens[j].ptclass, total[j] * scale, gens[j].source) for j in support)
    m = sum((t.coeff * t.ptclass.zeta for t in terms), Fraction(0))
    cert = BigCertificate(terms, m, f"{S.name}-big-search")
    if not verify_big_interior(S, cert):
        raise AssertionError(f"{S.name}: searched certificate failed verification")
    return cert


def search_certificate(S: SurfaceModel, mode: str, menu=None):
    """Look for a certificate; ``None`` means the menu was not enough, not the opposite claim."""
    if mode == NONBIG:
        return search_nonbig(S, menu)
    if mode == BIG:
        return search_big(S, menu)
    raise ValueError(f"unknown search mode {mode!r}")


# JSON -------------------------------------------------------------------

def _rat(v) -> Fraction:
    return Fraction(str(v)) if not isinstance(v, (int, Fraction)) else Fraction(v)


def _rat_out(v):
    v = Fraction(v)
    return int(v) if v.denominator == 1 else str(v)


def _class_in(S: SurfaceModel, coords, basis: str) -> DivisorClass:
    return S.cls(tuple(_rat(v) for v in coords), basis=basis)


def certificate_from_dict(S: SurfaceModel, data: dict):
    basis = data.get("basis", TOTAL)
    terms = []
    for t in data["terms"]:
        source = pencil_from_spec(S, t["pencil"]) if "pencil" in t else None
        flags = set(t.get("flags", []))
        if "base" in t:
            pt = PTClass(_rat(t.get("zeta", 0)), _class_in(S, t["base"], basis), flags, t.get("label", ""))
        elif source is not None:
            pt = vmrt_class(S, source)
        else:
            raise ValueError("certificate term needs a base class or a pencil")
        terms.append(Term(pt, _rat(t.get("coeff", 1)), source))
    kind = data["kind"]
    km = _rat(data["k_or_m"])
    name = data.get("name", "")
    if kind == NONBIG:
        return NonBigCertificate(tuple(terms), km, _class_in(S, data.get("residual", [0] * (S.r + 1)), basis), name)
    if kind == BIG:
        return BigCertificate(tuple(terms), km, name)
    if kind == ORBIFOLD:
        return OrbifoldCertificate(tuple(terms), km, _class_in(S, data["residual"], basis), name)
    raise ValueError(f"unknown certificate kind {kind!r}")


def certificate_to_dict(S: SurfaceModel, cert, basis: str = STRICT) -> dict:
    terms = []
    for t in cert.terms:
        d = {"coeff": _rat_out(t.coeff), "zeta": _rat_out(t.ptclass.zeta),
             "base": [_rat_out(v) for v in change_basis(S, t.ptclass.base, basis).coords],
             "flags": sorted(t.ptclass.flags)}
        if t.source is not None:
            d["pencil"] = t.source.to_dict()
        if t.ptclass.label:
            d["label"] = t.ptclass.label
        terms.append(d)
    out = {"name": cert.name, "surface": S.name, "kind": cert.kind, "basis": basis, "terms": terms}
    if cert.kind == NONBIG:
        out["k_or_m"] = _rat_out(cert.k)
        out["residual"] = [_rat_out(v) for v in change_basis(S, cert.residual, basis).coords]
    elif cert.kind == BIG:
        out["k_or_m"] = _rat_out(cert.m)
    else:
        out["k_or_m"] = _rat_out(cert.m)
        out["residual"] = [_rat_out(v) for v in change_basis(S, cert.D, basis).coords]
    return out


def load_certificate(S: SurfaceModel, path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return certificate_from_dict(S, json.load(fh))
