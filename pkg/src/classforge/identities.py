"""The symbolic identity suite behind the three families, as one runnable list."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from . import exactmath as em
from . import family as fm
from .family import Family, FieldInstance
from .polynomial import IntPoly, discriminant, eisenstein_check, resultant

__all__ = ["identity_suite", "resultant_trio", "disc_closed_form", "SAMPLE_N"]

SAMPLE_N = {
    Family.SEXTIC: (2, -2, 10, 14, 22, -30, 106, 1002),
    Family.QUARTIC: (1, 2, 5, 7, -4, 22, 100, -1001),
    Family.CUBIC: (5, 7, 9, 11, 25, 101, 999),
}


def resultant_trio() -> dict[Family, int]:
    return {
        Family.SEXTIC: int(resultant(IntPoly([-143, 30]), IntPoly([108, 0, 1]))),
        Family.QUARTIC: int(resultant(IntPoly([-7, 6]), IntPoly([16, 0, 1]))),
        Family.CUBIC: int(resultant(IntPoly([7, 6]), IntPoly([-27, 0, -18, 0, 1]))),
    }


def disc_closed_form(family, n: int) -> Fraction:
    fam = Family.parse(family)
    if fam is Family.SEXTIC:
        return Fraction(3 ** 6 * (n * n + 108) ** 5, 2 ** 14)
    if fam is Family.QUARTIC:
        return Fraction(4 * (n * n + 16) ** 3)
    return Fraction(n ** 4 - 18 * n * n - 27)


def _factor_text(v: int) -> str:
    fac = em.factorize(abs(v))
    body = "·".join(f"{p}^{e}" if e > 1 else str(p) for p, e in fac.items())
    return ("-" if v < 0 else "") + body


def _resultant_checks(fam: Family):
    expected = {Family.SEXTIC: 7 ** 6, Family.QUARTIC: 5 ** 4, Family.CUBIC: -(37 ** 2) * 47}[fam]
    v = resultant_trio()[fam]
    yield "resultant", v == expected, f"resultant = {v} = {_factor_text(v)}"
    ex = fm.derive_excluded_primes(fam)
    yield "excluded primes", ex == set(fm.excluded_primes(fam)), f"excluded primes {sorted(ex)}"


def _disc_checks(fam: Family):
    bad = [n for n in SAMPLE_N[fam] if discriminant(fm.defining_poly(fam, n)) != disc_closed_form(fam, n)]
    yield "discriminant closed form", not bad, f"checked n in {list(SAMPLE_N[fam])}"


def _conjugation_checks(fam: Family):
    s = fm.sigma(fam)
    yield "sigma order", s.order() == fam.degree, f"order {s.order()}"
    table_ok = all(fm.conjugate_map(fam, i).same_map(m) for i, m in enumerate(fm.CONJUGATE_TABLE[fam]))
    yield "conjugate table", table_ok, "sigma^i(rho) matches every closed form"
    bad_poly, bad_norm = [], []
    for n in SAMPLE_N[fam][:4]:
        inst = FieldInstance.make(fam, n)
        if s.numerator_poly(inst.f) % inst.f:
            bad_poly.append(n)
        w = fm.w_element(inst, check_norms=False)
        if any(v != 1 for v in fm.subfield_norms(w).values()):
            bad_norm.append(n)
    yield "f_n(sigma(X)) = 0 mod f_n", not bad_poly, f"failures {bad_poly}"
    yield "subfield norms of w", not bad_norm, f"failures {bad_norm}"


def _pnr_checks(fam: Family):
    # both coefficient forms agree (pnr_base_poly raises otherwise), and
    # X^D p(1/X) equals p(X) for the sextic, p(-X) for the quartic
    ns = [n for n in range(-25, 26) if fm.is_admissible(fam, n)]
    ok = True
    for n in ns:
        p = fm.pnr_base_poly(fam, n)
        mirror = p if fam is Family.SEXTIC else IntPoly([c * (-1) ** k for k, c in enumerate(p.coeffs)])
        ok &= p.reversed() == mirror
    yield "p_(n,1) coefficient forms and symmetry", ok, "n in [-25, 25]"
    ns = [n for n in SAMPLE_N[fam][:3] if fam is not Family.SEXTIC or n % 4 == 2]
    good = all(fm.pnr_is_min_poly_check(FieldInstance.make(fam, n)) for n in ns)
    yield "p_(n,1) annihilates the target", good, f"n in {ns}"
    rep = fm.g_identities(fam, 1, 1, 0, 1, m=(0, 1, -1))
    const = -(7 ** 12) if fam is Family.SEXTIC else 625
    yield "g collapse constant", rep["collapse_constant"] == const, f"constant {rep['collapse_constant']}"
    P = fm.script_P(fam, 1)
    want = IntPoly([117649, 286, 1]) if fam is Family.SEXTIC else IntPoly([625, 14, 1])
    yield "script P expansion", P == want, str(P)


def _special_checks(fam: Family):
    if fam is Family.SEXTIC:
        h = fm.h_poly()
        shifted = IntPoly.of(h.shift(1) * 25)
        yield "25 h(X+1) Eisenstein at 13", eisenstein_check(shifted, 13), str(shifted)
        yield "phi_n identity", all(fm.phi_identity(n) for n in (2, 10, 80)), "n in [2, 10, 80]"
        rep = fm.g_identities(fam, 5, _sextic_cr(5), 0, 1, m=0)
        yield "g(X, t) = h(X^r) at r=5", rep["special_ok"], f"t = {rep['special_t']}"
    elif fam is Family.QUARTIC:
        rep = fm.g_identities(fam, 5, 68101, 0, 13, m=(0, 1))
        yield "g(X, t) = -f_-103(X^r) at r=5", rep["special_ok"], f"t = {rep['special_t']}"
        yield "K_-103 unit relation", fm.k103_unit_relation(), "rho = u1^2 u2^3, N(u_i) = +-1"
    else:
        ok = True
        for n in SAMPLE_N[fam]:
            inst = FieldInstance.make(fam, n)
            fm.cubic_cofactor(inst)
            fm.mu_unit(inst)
            # X^3 f_n(1/X) = -f_{-n}(X)
            refl = IntPoly.of(fm.defining_poly(fam, n).reversed())
            ok &= refl == IntPoly([1, n, n, -1])
        yield "cubic cofactor, mu unit, reflection", ok, f"n in {list(SAMPLE_N[fam])}"


def _sextic_cr(r: int) -> int:
    # smallest positive c with c^r = 7^(1-r) mod 30 (the g identities only need the class)
    return next(c for c in range(1, 30) if pow(c, r, 30) == pow(7, 1 - r, 30))


def identity_suite(family=None) -> list[dict]:
    """Run every identity check; each record has name, family, ok and detail."""
    fams = [Family.parse(family)] if family else list(Family)
    out = []
    for fam in fams:
        groups: list[Callable] = [_resultant_checks, _disc_checks]
        if fam.galois:
            groups += [_conjugation_checks, _pnr_checks]
        groups.append(_special_checks)
        for g in groups:
            try:
                for name, ok, detail in g(fam):
                    out.append({"family": fam.value, "name": name, "ok": bool(ok), "detail": detail})
            except fm.IdentityFailure as exc:
                out.append({"family": fam.value, "name": g.__name__.strip("_"), "ok": False, "detail": str(exc)})
    return out
