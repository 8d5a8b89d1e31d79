import dataclasses
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tangent_bigness.certify import (BIG, NONBIG, ORBIFOLD, BigCertificate, NoBlowDown, NonBigCertificate,
                                     OrbifoldCertificate, Term, blowup_transfer, certificate_from_dict,
                                     certificate_to_dict, default_vmrts, load_certificate, minus2_locus,
                                     pt_matrix, search_big, search_certificate, search_nonbig, verify,
                                     verify_big_interior, verify_big_orbifold, verify_nonbig)
from tangent_bigness.corpus import certificate_paths, load_surface, read_json
from tangent_bigness.curves import decompose_effective, irreducible_minus2
from tangent_bigness.fibration import PTClass, pencil, pullback, vmrt_class
from tangent_bigness.linalg import rank
from tangent_bigness.picard import STRICT, TOTAL, BubbleConfig, BubblePoint, build_surface, change_basis

CERTS = certificate_paths()
NONBIG_FIXTURES = ["five_point", "A3_4", "2A1_8", "2A2", "A2+2A1", "D4", "A4", "A3+A1", "4A1", "2A3+A1"]


def load(path):
    data = read_json(path)
    S = load_surface(data["surface"])
    return S, certificate_from_dict(S, data), data


@pytest.mark.parametrize("path", CERTS, ids=[p.stem for p in CERTS])
def test_corpus_certificates_verify(path):
    S, cert, _ = load(path)
    v = verify(S, cert)
    assert v.ok, v.reason


def test_corpus_has_expected_certificates():
    stems = {p.stem for p in CERTS}
    assert {"2A1_9-big", "A3+2A1-big", "E6-orbifold", "A3_4-nonbig", "five_point-nonbig"} <= stems
    assert len(stems) == 12


@pytest.mark.parametrize("path", CERTS, ids=[p.stem for p in CERTS])
def test_json_roundtrip(path):
    S, cert, _ = load(path)
    for basis in (STRICT, TOTAL):
        again = certificate_from_dict(S, json.loads(json.dumps(certificate_to_dict(S, cert, basis))))
        assert verify(S, again).ok
        assert certificate_to_dict(S, again) == certificate_to_dict(S, cert)


# negative controls ---------------------------------------------------------

def test_cleared_vmrt_flag_is_rejected():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "A3_4-nonbig"))
    t = cert.terms[0]
    bad = dataclasses.replace(t, ptclass=PTClass(t.ptclass.zeta, t.ptclass.base))
    v = verify_nonbig(S, dataclasses.replace(cert, terms=(bad,) + cert.terms[1:]))
    assert not v.ok and "neither" in v.reason


def test_altered_vmrt_class_is_rejected():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "A3_4-nonbig"))
    t = cert.terms[0]
    # drop the -E5 of the line pencil class while keeping the flag and the source
    forged = PTClass(1, t.ptclass.base + S.e(5), t.ptclass.flags)
    v = verify_nonbig(S, dataclasses.replace(cert, terms=(dataclasses.replace(t, ptclass=forged),) + cert.terms[1:]))
    assert not v.ok and "differs" in v.reason
    # without a source it must still match some standard pencil
    v = verify_nonbig(S, dataclasses.replace(cert, terms=(Term(forged, 1),) + cert.terms[1:],
                                             residual=cert.residual + S.e(5)))
    assert not v.ok and "not the VMRT" in v.reason


def test_corrupted_residual_is_rejected():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "A3_4-nonbig"))
    v = verify_nonbig(S, dataclasses.replace(cert, residual=cert.residual + S.h))
    assert not v.ok and "residual" in v.reason


def test_non_effective_residual_is_rejected():
    S = load_surface("A3_4")
    P = pencil(S, line_through=5)
    v = vmrt_class(S, P)
    cert = NonBigCertificate((Term(v, 1, P),), Fraction(1), v.base)
    res = verify_nonbig(S, cert)
    assert not res.ok and "not effective" in res.reason


def test_bad_k_and_coefficients():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "A3_4-nonbig"))
    assert not verify_nonbig(S, dataclasses.replace(cert, k=Fraction(0))).ok
    neg = dataclasses.replace(cert.terms[0], coeff=Fraction(-1))
    assert not verify_nonbig(S, dataclasses.replace(cert, terms=(neg,) + cert.terms[1:])).ok
    assert not verify_nonbig(S, dataclasses.replace(cert, k=Fraction(3))).ok


def test_left_side_pullback_is_absorbed():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "A3_4-nonbig"))
    c = irreducible_minus2(S)[0]
    extra = Term(pullback(S, c), 1)
    # residual that includes the pullback is fine
    ok = dataclasses.replace(cert, terms=cert.terms + (extra,), residual=cert.residual + c)
    assert verify_nonbig(S, ok).ok
    # an h pulled back on the left must reappear in the residual
    h = Term(pullback(S, S.h), 1)
    bad = dataclasses.replace(cert, terms=cert.terms + (h,), residual=cert.residual + S.h)
    assert verify_nonbig(S, bad).ok
    assert not verify_nonbig(S, dataclasses.replace(cert, terms=cert.terms + (h,))).ok


def test_big_certificate_controls():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "2A1_9-big"))
    assert verify_big_interior(S, cert).ok
    # dropping a term breaks the sum
    assert not verify_big_interior(S, dataclasses.replace(cert, terms=cert.terms[1:])).ok
    # zero coefficients are not allowed
    zero = dataclasses.replace(cert.terms[0], coeff=Fraction(0))
    assert not verify_big_interior(S, dataclasses.replace(cert, terms=(zero,) + cert.terms[1:])).ok
    # a non-effective pullback is rejected
    t = Term(pullback(S, -S.h), 1)
    u = Term(pullback(S, S.h, effective=False), 1)
    v = verify_big_interior(S, dataclasses.replace(cert, terms=cert.terms + (t, u)))
    assert not v.ok and "not effective" in v.reason


def test_big_rank_deficiency_is_rejected():
    S = load_surface("A3_4")
    P = pencil(S, line_through=5)
    Q = pencil(S, conic_through=[1, 2, 3, 4])
    terms = (Term(vmrt_class(S, P), 1, P), Term(vmrt_class(S, Q), 1, Q))
    v = verify_big_interior(S, BigCertificate(terms, Fraction(2)))
    assert not v.ok and "rank" in v.reason


def test_orbifold_controls():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "E6-orbifold"))
    assert verify_big_orbifold(S, cert).ok
    assert not verify_big_orbifold(S, None).ok
    assert not verify_big_orbifold(S, dataclasses.replace(cert, terms=())).ok
    wrong_D = dataclasses.replace(cert, D=cert.D + irreducible_minus2(S)[0])
    assert "sum of all" in verify_big_orbifold(S, wrong_D).reason
    assert minus2_locus(S) == change_basis(S, cert.D, TOTAL)


def test_orbifold_rejected_on_smooth_cubic():
    S = build_surface(BubbleConfig("smooth", tuple(BubblePoint(i) for i in range(1, 7))))
    P = pencil(S, line_through=1)
    cert = OrbifoldCertificate((Term(vmrt_class(S, P), 1, P),), Fraction(1), S.zero())
    v = verify_big_orbifold(S, cert)
    assert not v.ok


def test_orbifold_needs_positive_s2():
    S = load_surface("4A1")
    D = minus2_locus(S)
    # a transfer-flagged term is trusted, so only the s2 test can fail here
    fake = PTClass(1, -D, {"transfer"})
    res = verify_big_orbifold(S, OrbifoldCertificate((Term(fake, 1),), Fraction(1), D))
    assert not res.ok and "s2" in res.reason


# search --------------------------------------------------------------------

@pytest.mark.parametrize("name", NONBIG_FIXTURES)
def test_search_finds_nonbig(name):
    S = load_surface(name)
    cert = search_certificate(S, NONBIG)
    assert cert is not None and verify(S, cert).ok
    assert search_big(S) is None
    data = certificate_to_dict(S, cert)
    assert verify(S, certificate_from_dict(S, data)).ok


@pytest.mark.parametrize("name", ["2A1_9", "A3+2A1"])
def test_search_finds_big(name):
    S = load_surface(name)
    cert = search_certificate(S, BIG)
    assert cert is not None and verify(S, cert).ok
    assert rank(pt_matrix(S, [t.ptclass for t in cert.terms])) == S.r + 2
    assert search_nonbig(S) is None


@pytest.mark.parametrize("name", ["E6", "3A2"])
def test_search_is_silent_where_menus_run_out(name):
    S = load_surface(name)
    assert search_nonbig(S) is None
    assert search_big(S) is None


def test_search_rejects_unknown_mode():
    with pytest.raises(ValueError):
        search_certificate(load_surface("A3_4"), ORBIFOLD)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=12))
@settings(max_examples=150, deadline=None)
def test_random_vmrt_sums_are_judged_by_residual(coeffs):
    S = load_surface("A2+2A1")
    vm = default_vmrts(S)
    coeffs = (coeffs * len(vm))[:len(vm)]
    if not any(coeffs):
        return
    terms = tuple(Term(v, c, P) for (P, v), c in zip(vm, coeffs) if c)
    k = sum(coeffs)
    residual = S.zero()
    for t in terms:
        residual = residual + t.ptclass.base * t.coeff
    ok = verify_nonbig(S, NonBigCertificate(terms, Fraction(k), residual)).ok
    assert ok == (decompose_effective(S, residual) is not None)


# blow-up transfer ------------------------------------------------------------

def closed(r):
    return build_surface(BubbleConfig(f"closed{r}", tuple(BubblePoint(i) for i in range(1, r + 1))))


def test_blowup_transfer_forms():
    Z, X = closed(4), closed(5)
    P = pencil(Z, line_through=1)
    v = vmrt_class(Z, P)
    plain = blowup_transfer(Z, X, v)
    assert plain.zeta == 1 and plain.base.coords == tuple(v.base.coords) + (1,)
    twice = blowup_transfer(Z, X, v, mode="k", k=2)
    assert twice.zeta == 2 and twice.base.coords == tuple(2 * c for c in v.base.coords) + (1,)
    assert "transfer" in plain.flags
    with pytest.raises(ValueError):
        blowup_transfer(Z, X, v, mode="k", k=0)
    with pytest.raises(ValueError):
        blowup_transfer(Z, X, v, mode="other")
    with pytest.raises(ValueError):
        blowup_transfer(Z, X, v * 2)


def test_blowup_transfer_checks_the_blowup():
    Z = load_surface("A3_4")
    with pytest.raises(NoBlowDown):
        blowup_transfer(Z, closed(6), vmrt_class(Z, pencil(Z, line_through=1)))
    with pytest.raises(NoBlowDown):
        blowup_transfer(closed(5), closed(4), PTClass(1, closed(5).zero()))
    # points added over a new point need a staged blow-up
    Z4 = closed(4)
    X = build_surface(BubbleConfig("stacked", tuple(BubblePoint(i) for i in range(1, 6)) + (BubblePoint(6, 5),)))
    with pytest.raises(NoBlowDown):
        blowup_transfer(Z4, X, PTClass(1, Z4.zero()))


def test_certificate_from_dict_errors():
    S = load_surface("A3_4")
    with pytest.raises(ValueError):
        certificate_from_dict(S, {"kind": "nonbig", "k_or_m": 1, "terms": [{"coeff": 1}]})
    with pytest.raises(ValueError):
        certificate_from_dict(S, {"kind": "huge", "k_or_m": 1, "terms": []})


def test_load_certificate_from_file(tmp_path):
    S, cert, data = load(next(p for p in CERTS if p.stem == "4A1-nonbig"))
    path = tmp_path / "c.json"
    path.write_text(json.dumps(data))
    assert verify(S, load_certificate(S, path)).ok


def test_documented_certificate_shapes():
    S, cert, _ = load(next(p for p in CERTS if p.stem == "2A1_9-big"))
    assert sorted(t.coeff for t in cert.terms) == sorted(map(Fraction, (1, 1, 1, 1, 1, 1, 2, 2, 1)))
    # drop the pulled-back E5 term: the sum is no longer 6 zeta
    e5 = next(t for t in cert.terms if t.ptclass.zeta == 0 and t.ptclass.base == S.e(5))
    v = verify_big_interior(S, dataclasses.replace(cert, terms=tuple(t for t in cert.terms if t is not e5)))
    assert not v.ok and "sum" in v.reason
    E6, orb, _ = load(next(p for p in CERTS if p.stem == "E6-orbifold"))
    pb = next(t for t in orb.terms if t.ptclass.zeta == 0)
    assert str(change_basis(E6, pb.ptclass.base, STRICT)) == "E1+E2+2E3+E4"


def test_plain_transfer_of_zero():
    Z, X = closed(4), closed(5)
    t = blowup_transfer(Z, X, PTClass(1, Z.zero()))
    assert t.zeta == 1 and t.base == X.e(5)
