"""Class-order certificates and their from-scratch verifier.

A certificate names (family, r, n, y) and carries the witnesses a search
found. The verifier trusts none of them: every fact is recomputed from the
raw integers, and a certificate is Valid exactly when the sufficient
conditions for an ideal class of order r hold for these witnesses.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

from . import exactmath as em
from .exactmath import Symbol
from .family import (
    Family, FieldInstance, GcdConstraintViolated, IdentityFailure, InadmissibleParameter,
    check_admissible, check_r, defining_poly, defining_poly_mod, evaluation_point,
    excluded_primes, linear_form, pnr_poly, subfield_norms, target_mod, w_element,
)
from .polynomial import Irreducible, check_irreducibility_evidence, discriminant

__all__ = [
    "CERT_VERSION", "ROLE_CONDITIONS", "ResidueCondition", "BauerWitness", "IdealFactorCert",
    "NonPowerEvidence", "IrreducibilityEvidence", "RamifiedData", "ClassOrderCertificate",
    "Verdict", "MalformedCertificate", "serialize", "parse", "verify_ideal_power",
    "verify_residue_conditions", "verify_nonpower", "verify_certificate", "RAMIFIED_FORM",
]

CERT_VERSION = "1"


class MalformedCertificate(ValueError):
    pass


@dataclass(frozen=True)
class ResidueCondition:
    base: int
    requirement: Symbol


def _conds(*pairs) -> tuple[ResidueCondition, ...]:
    return tuple(ResidueCondition(b, Symbol(s)) for b, s in pairs)


# Symbol pattern each witness prime must realise, per family and role.
ROLE_CONDITIONS: dict[Family, dict[str, tuple[ResidueCondition, ...]]] = {
    Family.SEXTIC: {
        "l1": _conds((2, "R"), (3, "R"), (5, "N")),
        "l2": _conds((3, "R"), (5, "R"), (2, "N")),
    },
    Family.QUARTIC: {
        "l1": _conds((2, "R"), (3, "N")),
        "l2": _conds((3, "R"), (2, "N")),
    },
    Family.CUBIC: {
        "l1": _conds((2, "R"), (37, "R"), (3, "N")),
        "l2": _conds((37, "R"), (2, "N"), (3, "N")),
        "l3": _conds((37, "N"),),
    },
}

# n^2 + D: the prime q must divide it exactly once
RAMIFIED_FORM = {Family.SEXTIC: 108, Family.QUARTIC: 16}


@dataclass(frozen=True)
class BauerWitness:
    p: int
    ell: int
    transcript: tuple[tuple[int, Symbol], ...]
    role: str = ""

    def recheck(self) -> bool:
        try:
            return all(em.power_residue_symbol(b, self.ell, self.p) is s for b, s in self.transcript)
        except em.SharedFactor:
            return False


@dataclass(frozen=True)
class IdealFactorCert:
    ell: int
    root: int
    exponent: int


@dataclass(frozen=True)
class NonPowerEvidence:
    p: int
    ell: int
    root: int
    value: int
    symbol: Symbol = Symbol.NONRESIDUE


@dataclass(frozen=True)
class IrreducibilityEvidence:
    """p_{n,r} irreducible over Q, which rules out p-th roots for every p | r."""

    p: int
    method: str
    primes: tuple[int, ...]
    shift: int = 0


@dataclass(frozen=True)
class RamifiedData:
    q: int
    n0_mod_q2: int


@dataclass(frozen=True)
class ClassOrderCertificate:
    family: Family
    r: int
    n: int
    y: int
    c_r: int | None = None
    bauer_witnesses: tuple[BauerWitness, ...] = ()
    ideal_factors: tuple[IdealFactorCert, ...] = ()
    nonpower_evidence: tuple[NonPowerEvidence | IrreducibilityEvidence, ...] = ()
    ramified_q: RamifiedData | None = None
    version: str = CERT_VERSION


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    checks: tuple[str, ...] = field(default=(), compare=False)

    def __bool__(self):
        return self.ok

    @classmethod
    def valid(cls, checks: Iterable[str] = ()) -> "Verdict":
        return cls(True, "", tuple(checks))

    @classmethod
    def invalid(cls, reason: str, checks: Iterable[str] = ()) -> "Verdict":
        return cls(False, reason, tuple(checks))


# ---------------------------------------------------------------------------
# canonical encoding

_D = em.int_to_decimal


def _to_obj(cert: ClassOrderCertificate) -> dict:
    def ev(e):
        if isinstance(e, IrreducibilityEvidence):
            return {"kind": "irreducible", "p": _D(e.p), "method": e.method,
                    "primes": [_D(x) for x in e.primes], "shift": _D(e.shift)}
        return {"kind": "residue", "p": _D(e.p), "ell": _D(e.ell), "root": _D(e.root),
                "value": _D(e.value), "symbol": e.symbol.value}

    return {
        "family": cert.family.value,
        "r": _D(cert.r),
        "n": _D(cert.n),
        "y": _D(cert.y),
        "c_r": None if cert.c_r is None else _D(cert.c_r),
        "bauer_witnesses": [
            {"p": _D(w.p), "ell": _D(w.ell), "role": w.role,
             "transcript": [[_D(b), s.value] for b, s in w.transcript]}
            for w in cert.bauer_witnesses
        ],
        "ideal_factors": [
            {"ell": _D(f.ell), "root": _D(f.root), "exponent": _D(f.exponent)} for f in cert.ideal_factors
        ],
        "nonpower_evidence": [ev(e) for e in cert.nonpower_evidence],
        "ramified_q": None if cert.ramified_q is None else {
            "q": _D(cert.ramified_q.q), "n0_mod_q2": _D(cert.ramified_q.n0_mod_q2)},
        "version": cert.version,
    }


def serialize(cert: ClassOrderCertificate) -> bytes:
    """Canonical bytes: sorted keys, no insignificant whitespace, decimal-string integers."""
    return json.dumps(_to_obj(cert), sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode("ascii")


def _keys(obj, required: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise MalformedCertificate(f"{where}: expected an object")
    got = set(obj)
    if got != required:
        extra, missing = sorted(got - required), sorted(required - got)
        raise MalformedCertificate(f"{where}: unknown fields {extra}" if extra else f"{where}: missing fields {missing}")
    return obj


def _int(v, where: str) -> int:
    try:
        return em.decimal_to_int(v)
    except ValueError as exc:
        raise MalformedCertificate(f"{where}: {exc}") from None


def _list(v, where: str) -> list:
    if not isinstance(v, list):
        raise MalformedCertificate(f"{where}: expected a list")
    return v


def _symbol(v, where: str) -> Symbol:
    if v not in ("R", "N"):
        raise MalformedCertificate(f"{where}: symbol must be R or N")
    return Symbol(v)


def _str(v, where: str) -> str:
    if not isinstance(v, str):
        raise MalformedCertificate(f"{where}: expected a string")
    return v


def parse(data: bytes | str) -> ClassOrderCertificate:
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedCertificate(f"not a certificate document: {exc}") from None
    top = {"family", "r", "n", "y", "c_r", "bauer_witnesses", "ideal_factors",
           "nonpower_evidence", "ramified_q", "version"}
    _keys(obj, top, "certificate")
    try:
        fam = Family.parse(_str(obj["family"], "family"))
    except ValueError:
        raise MalformedCertificate(f"unknown family {obj['family']!r}") from None
    if obj["version"] != CERT_VERSION:
        raise MalformedCertificate(f"unsupported version {obj['version']!r}")

    witnesses = []
    for i, w in enumerate(_list(obj["bauer_witnesses"], "bauer_witnesses")):
        where = f"bauer_witnesses[{i}]"
        _keys(w, {"p", "ell", "role", "transcript"}, where)
        tr = []
        for j, entry in enumerate(_list(w["transcript"], where + ".transcript")):
            if not isinstance(entry, list) or len(entry) != 2:
                raise MalformedCertificate(f"{where}.transcript[{j}]: expected [base, symbol]")
            tr.append((_int(entry[0], where), _symbol(entry[1], where)))
        witnesses.append(BauerWitness(_int(w["p"], where), _int(w["ell"], where), tuple(tr), _str(w["role"], where)))

    factors = []
    for i, f in enumerate(_list(obj["ideal_factors"], "ideal_factors")):
        where = f"ideal_factors[{i}]"
        _keys(f, {"ell", "root", "exponent"}, where)
        factors.append(IdealFactorCert(_int(f["ell"], where), _int(f["root"], where), _int(f["exponent"], where)))

    evidence: list = []
    for i, e in enumerate(_list(obj["nonpower_evidence"], "nonpower_evidence")):
        where = f"nonpower_evidence[{i}]"
        if not isinstance(e, dict):
            raise MalformedCertificate(f"{where}: expected an object")
        kind = e.get("kind")
        if kind == "residue":
            _keys(e, {"kind", "p", "ell", "root", "value", "symbol"}, where)
            evidence.append(NonPowerEvidence(_int(e["p"], where), _int(e["ell"], where), _int(e["root"], where),
                                             _int(e["value"], where), _symbol(e["symbol"], where)))
        elif kind == "irreducible":
            _keys(e, {"kind", "p", "method", "primes", "shift"}, where)
            evidence.append(IrreducibilityEvidence(
                _int(e["p"], where), _str(e["method"], where),
                tuple(_int(x, where) for x in _list(e["primes"], where)), _int(e["shift"], where)))
        else:
            raise MalformedCertificate(f"{where}: unknown evidence kind {kind!r}")

    ram = None
    if obj["ramified_q"] is not None:
        _keys(obj["ramified_q"], {"q", "n0_mod_q2"}, "ramified_q")
        ram = RamifiedData(_int(obj["ramified_q"]["q"], "ramified_q"), _int(obj["ramified_q"]["n0_mod_q2"], "ramified_q"))

    return ClassOrderCertificate(
        family=fam,
        r=_int(obj["r"], "r"),
        n=_int(obj["n"], "n"),
        y=_int(obj["y"], "y"),
        c_r=None if obj["c_r"] is None else _int(obj["c_r"], "c_r"),
        bauer_witnesses=tuple(witnesses),
        ideal_factors=tuple(factors),
        nonpower_evidence=tuple(evidence),
        ramified_q=ram,
        version=obj["version"],
    )


# ---------------------------------------------------------------------------
# verification

@lru_cache(maxsize=64)
def _disc_numerator(family: Family, n: int) -> int:
    return abs(discriminant(defining_poly(family, n)).numerator)


def _prime_factors(m: int, budget: int) -> dict[int, int]:
    m = abs(m)
    return {} if m <= 1 else em.factorize(m, budget)


def _valuation(m: int, ell: int) -> int:
    v = 0
    while m and m % ell == 0:
        m //= ell
        v += 1
    return v


def verify_ideal_power(cert: ClassOrderCertificate, factor_budget: int = em.DEFAULT_FACTOR_BUDGET) -> Verdict:
    """The ideal generated by w (or 2 - rho) is an r-th power."""
    fam, r, n, y = cert.family, cert.r, cert.n, cert.y
    checks = []
    if r < 1:
        return Verdict.invalid("r must be positive")
    try:
        check_admissible(fam, n)
    except InadmissibleParameter as exc:
        return Verdict.invalid(str(exc))
    if fam is Family.SEXTIC and n % 4 != 2:
        return Verdict.invalid("sextic family needs n = 2 (mod 4) for rho to be integral")
    if fam is Family.CUBIC and (n % 2 == 0 or n < 5):
        return Verdict.invalid("cubic family needs n odd and n >= 5")
    sv = linear_form(fam, n)
    for p in sorted(excluded_primes(fam)):
        if sv % p == 0:
            return Verdict.invalid(f"excluded prime {p} divides special value")
    checks.append("excluded primes avoid the special value")
    if y ** r != sv:
        return Verdict.invalid("y^r differs from the special value")
    checks.append("y^r equals the special value")
    for p in sorted(excluded_primes(fam)):
        if y % p == 0:
            return Verdict.invalid(f"excluded prime {p} divides y")
    try:
        fac = _prime_factors(y, factor_budget)
    except em.FactorizationTimeout:
        return Verdict.invalid("factorization budget exhausted on y")
    listed: dict[int, IdealFactorCert] = {}
    for f in cert.ideal_factors:
        if f.ell in listed:
            return Verdict.invalid(f"ideal factor {f.ell} listed twice")
        listed[f.ell] = f
    if set(listed) != set(fac):
        missing = sorted(set(fac) - set(listed))
        extra = sorted(set(listed) - set(fac))
        return Verdict.invalid(f"ideal factors do not match y: missing {missing}, unexpected {extra}")
    disc = _disc_numerator(fam, n)
    e = evaluation_point(fam)
    for ell, nu in fac.items():
        f = listed[ell]
        if not 0 <= f.root < ell:
            return Verdict.invalid(f"root for {ell} is not reduced modulo {ell}")
        if (f.root - e) % ell:
            return Verdict.invalid(f"root for {ell} is not the evaluation point")
        if defining_poly_mod(fam, n, ell)(f.root) != 0:
            return Verdict.invalid(f"f_n(root) is not 0 modulo {ell}")
        if disc % ell == 0:
            return Verdict.invalid(f"prime {ell} divides the discriminant")
        if f.exponent != r * nu:
            return Verdict.invalid(f"exponent for {ell} is {f.exponent}, expected {r * nu}")
    checks.append(f"{len(fac)} degree-1 prime factors, each unramified with exponent r*nu")
    return Verdict.valid(checks)


def _primes_of(r: int) -> list[int]:
    return sorted(_prime_factors(r, em.DEFAULT_FACTOR_BUDGET))


def verify_residue_conditions(cert: ClassOrderCertificate) -> Verdict:
    """Witness primes realise the required symbol patterns and divide y."""
    fam, r, y = cert.family, cert.r, cert.y
    roles = ROLE_CONDITIONS[fam]
    ps = _primes_of(r)
    checks = []
    seen: dict[tuple[int, str], BauerWitness] = {}
    for w in cert.bauer_witnesses:
        if w.p not in ps:
            return Verdict.invalid(f"witness for p={w.p}, which does not divide r")
        if w.role not in roles:
            return Verdict.invalid(f"unknown witness role {w.role!r}")
        if (w.p, w.role) in seen:
            return Verdict.invalid(f"duplicate witness for p={w.p} role {w.role}")
        seen[(w.p, w.role)] = w
    if cert.c_r is not None:
        c = cert.c_r
        if c == 0 or y % c:
            return Verdict.invalid("c_r does not divide y")
        if fam is Family.SEXTIC and pow(c, r, 30) != pow(7, 1 - r, 30):
            return Verdict.invalid("c_r^r is not 7^(1-r) modulo 30")
        if fam is not Family.SEXTIC and c % 6 != 1:
            return Verdict.invalid("c_r is not 1 modulo 6")
    for p in ps:
        for role, conds in roles.items():
            w = seen.get((p, role))
            if w is None:
                return Verdict.invalid(f"missing witness for p={p} role {role}")
            ell = w.ell
            if ell < 2 or not em.is_prime(ell):
                return Verdict.invalid(f"witness {ell} is not prime")
            if (ell - 1) % p:
                return Verdict.invalid(f"witness {ell} is not 1 modulo {p}")
            if ell in excluded_primes(fam):
                return Verdict.invalid(f"witness {ell} is an excluded prime")
            if y % ell:
                return Verdict.invalid(f"witness {ell} does not divide the special value")
            if cert.c_r is not None and cert.c_r % ell:
                return Verdict.invalid(f"witness {ell} does not divide c_r")
            want = {c.base: c.requirement for c in conds}
            got = dict(w.transcript)
            if len(got) != len(w.transcript) or got != want:
                return Verdict.invalid(f"transcript for {ell} does not state the required pattern")
            for base, sym in want.items():
                try:
                    actual = em.power_residue_symbol(base, ell, p)
                except em.SharedFactor:
                    return Verdict.invalid(f"witness {ell} divides base {base}")
                if actual is not sym:
                    return Verdict.invalid(f"symbol ({base}|{ell})_{p} is {actual.value}, transcript says {sym.value}")
            checks.append(f"p={p} {role}: ell={ell}")
    return Verdict.valid(checks)


def _check_residue_evidence(cert: ClassOrderCertificate, ev: NonPowerEvidence, disc: int) -> str | None:
    fam, p, ell = cert.family, ev.p, ev.ell
    if ell < 3 or not em.is_prime(ell):
        return f"evidence prime {ell} is not an odd prime"
    if (ell - 1) % p:
        return f"evidence prime {ell} is not 1 modulo {p}"
    if disc % ell == 0:
        return "ramified evidence prime"
    if not (0 <= ev.root < ell and 0 <= ev.value < ell):
        return f"evidence residues are not reduced modulo {ell}"
    if defining_poly_mod(fam, cert.n, ell)(ev.root) != 0:
        return f"root is not a root of f_n modulo {ell}"
    value = target_mod(fam, ev.root, ell)
    if value is None:
        return "denominator vanishes at evidence prime"
    if value != ev.value or value == 0:
        return f"target image modulo {ell} is {value}, evidence says {ev.value}"
    if ev.symbol is not Symbol.NONRESIDUE:
        return "evidence symbol must be N"
    if em.power_residue_symbol(value, ell, p) is not Symbol.NONRESIDUE:
        return f"target image is a {p}-th power residue modulo {ell}"
    return None


def verify_nonpower(cert: ClassOrderCertificate) -> Verdict:
    """The target element has no p-th root in K_n, for every p | r."""
    fam = cert.family
    if not fam.galois:
        if cert.nonpower_evidence:
            return Verdict.invalid("cubic certificates carry no non-power evidence")
        return Verdict.valid(["not applicable to the cubic family"])
    ps = _primes_of(cert.r)
    covered = set()
    checks = []
    disc = _disc_numerator(fam, cert.n)
    pnr = None
    for ev in cert.nonpower_evidence:
        if ev.p not in ps:
            return Verdict.invalid(f"evidence for p={ev.p}, which does not divide r")
        if isinstance(ev, IrreducibilityEvidence):
            if pnr is None:
                pnr = pnr_poly(fam, cert.n, cert.r)
            if not check_irreducibility_evidence(pnr, Irreducible(ev.method, ev.primes, ev.shift)):
                return Verdict.invalid(f"irreducibility evidence ({ev.method}) does not check")
            checks.append(f"p={ev.p}: p_(n,r) irreducible by {ev.method}")
        else:
            err = _check_residue_evidence(cert, ev, disc)
            if err:
                return Verdict.invalid(err)
            checks.append(f"p={ev.p}: non-residue at ell*={ev.ell}")
        covered.add(ev.p)
    missing = [p for p in ps if p not in covered]
    if missing:
        return Verdict.invalid(f"no non-power evidence for p in {missing}")
    return Verdict.valid(checks)


def _verify_ramified(cert: ClassOrderCertificate) -> Verdict:
    ram = cert.ramified_q
    if cert.family not in RAMIFIED_FORM:
        return Verdict.invalid("ramified prime data only applies to the cyclic families")
    q = ram.q
    if q < 2 or not em.is_prime(q):
        return Verdict.invalid(f"ramified q={q} is not prime")
    v = cert.n * cert.n + RAMIFIED_FORM[cert.family]
    if v % q:
        return Verdict.invalid(f"q={q} does not divide n^2+{RAMIFIED_FORM[cert.family]}")
    if v % (q * q) == 0:
        return Verdict.invalid(f"q^2 divides n^2+{RAMIFIED_FORM[cert.family]}")
    if (cert.n - ram.n0_mod_q2) % (q * q):
        return Verdict.invalid("n is not congruent to n0 modulo q^2")
    return Verdict.valid([f"q={q} ramifies in the quadratic subfield"])


def _verify_relative(cert: ClassOrderCertificate) -> Verdict:
    inst = FieldInstance.make(cert.family, cert.n)
    try:
        w = w_element(inst, check_norms=False)
        norms = subfield_norms(w)
    except (ZeroDivisionError, IdentityFailure) as exc:
        return Verdict.invalid(f"w could not be formed: {exc}")
    for name, v in norms.items():
        if v != 1:
            return Verdict.invalid(f"norm of w to {name} is not 1")
    return Verdict.valid([f"N(w) = 1 down to {', '.join(sorted(norms))}"])


def verify_certificate(cert: ClassOrderCertificate, factor_budget: int = em.DEFAULT_FACTOR_BUDGET) -> Verdict:
    if cert.version != CERT_VERSION:
        return Verdict.invalid(f"unsupported version {cert.version}")
    try:
        check_r(cert.family, cert.r)
    except GcdConstraintViolated as exc:
        return Verdict.invalid(str(exc))
    checks = [f"r={cert.r} satisfies the family constraint"]
    steps = [
        ("ideal power", lambda: verify_ideal_power(cert, factor_budget)),
        ("residue conditions", lambda: verify_residue_conditions(cert)),
        ("non-power", lambda: verify_nonpower(cert)),
    ]
    if cert.ramified_q is not None:
        steps.append(("ramification", lambda: _verify_ramified(cert)))
    if cert.family.galois:
        steps.append(("relative class", lambda: _verify_relative(cert)))
    for name, step in steps:
        v = step()
        if not v:
            return Verdict.invalid(f"{name}: {v.reason}", checks)
        checks.extend(v.checks)
    return Verdict.valid(checks)
