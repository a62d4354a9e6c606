"""Witness construction and the class-order search loop.

The search follows the constructive route: Bauer primes with prescribed
symbol patterns, c_r assembled from them, y and n steered by congruences,
then a bounded walk over m until a certificate verifies. Existence results
that are not effective (infinitely many good m) become a bounded loop whose
failure is reported.
"""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Iterator, Mapping

from . import exactmath as em
from .certificate import (
    ROLE_CONDITIONS, BauerWitness, ClassOrderCertificate, IdealFactorCert, IrreducibilityEvidence,
    NonPowerEvidence, RamifiedData, ResidueCondition, verify_certificate,
)
from .exactmath import Symbol
from .family import (
    CongruenceViolated, Family, InadmissibleParameter, ParityViolated, check_admissible, check_r,
    defining_poly, defining_poly_mod, evaluation_point, excluded_primes, pnr_poly, script_P, target_mod,
)
from .polynomial import (
    ModPoly, Irreducible, LeadingCoefficientVanishes, discriminant, irreducibility_over_Q,
    roots_mod_q, splits_linearly_mod,
)

__all__ = [
    "ResidueCondition", "BauerWitness", "SearchConfig", "RamifiedSetup", "BoundExhausted",
    "SearchExhausted", "PrimeInadmissible", "find_bauer_prime", "build_cr", "construct_y_n",
    "ramified_prime_setup", "find_ramified_prime", "gather_nonpower_evidence", "run_search",
    "AVOID", "parse_conditions",
]

log = logging.getLogger(__name__)


class BoundExhausted(RuntimeError):
    pass


class SearchExhausted(RuntimeError):
    pass


class PrimeInadmissible(ValueError):
    pass


# Primes never used as witnesses: the symbol bases and the excluded primes.
AVOID = {
    Family.SEXTIC: frozenset({2, 3, 5, 7}),
    Family.QUARTIC: frozenset({2, 3, 5}),
    Family.CUBIC: frozenset({2, 3, 37, 47}),
}


@dataclass(frozen=True)
class SearchConfig:
    scan_bound: int = 1_000_000       # largest prime tried in any auxiliary scan
    m_max: int = 400                  # |m| bound for the walk over m
    factor_budget: int = em.DEFAULT_FACTOR_BUDGET
    precision_budget: int = 1024      # bits, for the regulator scans
    jobs: int = 1
    irreducibility_degree: int = 24   # attempt p_{n,r} irreducibility up to this degree

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise ValueError(f"{f.name} must be positive")

    @classmethod
    def from_mapping(cls, data: Mapping[str, str]) -> "SearchConfig":
        known = {f.name for f in fields(cls)}
        kw = {}
        for k, v in data.items():
            if k not in known:
                raise ValueError(f"unknown config key {k!r}")
            kw[k] = int(v)
        return cls(**kw)

    @classmethod
    def from_file(cls, path: str) -> "SearchConfig":
        return cls.from_mapping(read_config_file(path))


def read_config_file(path: str) -> dict[str, str]:
    """key = value lines; blank lines and # comments ignored."""
    data = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            data[k] = v
    return data


def parse_conditions(text: str) -> list[ResidueCondition]:
    """'2:R,3:N' -> conditions."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        base, _, sym = part.partition(":")
        out.append(ResidueCondition(int(base), Symbol.parse(sym)))
    bases = [c.base for c in out]
    if len(set(bases)) != len(bases):
        raise ValueError("repeated base in condition set")
    return out


# ---------------------------------------------------------------------------
# Bauer primes and c_r

def find_bauer_prime(p: int, conditions: Iterable[ResidueCondition], avoid: Iterable[int] = (),
                     bound: int = 1_000_000, floor: int = 0, role: str = "") -> BauerWitness:
    """Smallest prime ell = 1 (mod p), ell > floor, realising every condition."""
    if not em.is_prime(p):
        raise ValueError(f"p={p} is not prime")
    conds = list(conditions)
    bases = [c.base for c in conds]
    if len(set(bases)) != len(bases):
        raise ValueError("contradictory or repeated conditions")
    skip = set(avoid) | set(bases)
    start = max(floor + 1, p + 1)
    ell = start + ((1 - start) % p)
    while ell <= bound:
        if ell not in skip and em.is_prime(ell):
            transcript = tuple((c.base, em.power_residue_symbol(c.base, ell, p)) for c in conds)
            if all(s is c.requirement for (_, s), c in zip(transcript, conds)):
                return BauerWitness(p, ell, transcript, role)
        ell += p
    raise BoundExhausted(f"no prime below {bound} realises the conditions for p={p}")


def _sextic_cr_class(r: int) -> int:
    """The unit class c mod 30 with c^r = 7^(1-r) (mod 30); unique since r is odd."""
    target = pow(7, 1 - r, 30)
    hits = [c for c in range(1, 30) if math.gcd(c, 30) == 1 and pow(c, r, 30) == target]
    if len(hits) != 1:
        raise CongruenceViolated(f"no unique class for c_r with r={r}")
    return hits[0]


def build_cr(family, r: int, q: int | None = None, bound: int = 1_000_000) -> tuple[int, list[BauerWitness]]:
    """c_r = s * (product of witness primes) meeting the family congruence."""
    fam = Family.parse(family)
    check_r(fam, r)
    avoid = set(AVOID[fam]) | ({q} if q else set())
    witnesses: list[BauerWitness] = []
    for p in sorted(em.factorize(r)) if r > 1 else []:
        for role, conds in ROLE_CONDITIONS[fam].items():
            w = find_bauer_prime(p, conds, avoid, bound, role=role)
            avoid.add(w.ell)
            witnesses.append(w)
    prod = 1
    for w in witnesses:
        prod *= w.ell
    if fam is Family.SEXTIC:
        cls, mod = _sextic_cr_class(r), 30
        bad = {7} | ({q} if q else set())
    else:
        cls, mod = 1, 6
        bad = ({5} | ({q} if q else set())) if fam is Family.QUARTIC else {37, 47}
    s = (cls * pow(prod, -1, mod)) % mod or mod
    while any(s % b == 0 for b in bad):
        s += mod
    c_r = s * prod
    assert c_r % mod == cls
    return c_r, witnesses


# ---------------------------------------------------------------------------
# y and n

def _sextic_d(c_r: int, y0: int, q: int) -> int:
    base = c_r * (30 * y0 - 143)
    res8 = 5 * pow(base % 8, -1, 8) % 8
    # d = 1 (mod 30 q^2) together with the odd class mod 8; 15 q^2 and 8 are coprime
    d = em.crt([(res8, 8), (1, 15 * q * q)]).value
    mod = 120 * q * q
    d = d or mod
    while d % 7 == 0:
        d += mod
    return d


def construct_y_n(family, r: int, c_r: int, y0: int = 0, q: int = 1, m: int = 0) -> tuple[int, int]:
    """(y, n) with y^r equal to the special value of f_n."""
    fam = Family.parse(family)
    q = q or 1
    if fam is Family.SEXTIC:
        if pow(c_r, r, 30) != pow(7, 1 - r, 30):
            raise CongruenceViolated("need c_r^r = 7^(1-r) (mod 30)")
        y = _sextic_d(c_r, y0, q) * c_r * (30 * (y0 + 8 * q * q * m) - 143)
        num, rem = divmod(y ** r + 143, 30)
        if rem:
            raise CongruenceViolated("y^r is not -143 modulo 30")
        n = num
        if n % 4 != 2:
            raise ParityViolated("sextic n should be 2 mod 4")
    elif fam is Family.QUARTIC:
        if c_r % 6 != 1:
            raise CongruenceViolated("need c_r = 1 (mod 6)")
        y = c_r * (30 * (y0 + q * q * m) - 1)
        n, rem = divmod(y ** r + 7, 6)
        if rem:
            raise CongruenceViolated("y^r is not -7 modulo 6")
    else:
        if c_r % 6 != 1:
            raise CongruenceViolated("need c_r = 1 (mod 6)")
        if m < 0:
            raise ValueError("cubic walk uses m >= 0")
        y = c_r * (6 * m + 1)
        if pow(y, r, 4) == 3:
            y = y * y
        n, rem = divmod(y ** r - 7, 6)
        if rem:
            raise CongruenceViolated("y^r is not 7 modulo 6")
        if n % 2 == 0 or n < 5:
            raise ParityViolated("cubic n must be odd and at least 5")
    for p in excluded_primes(fam):
        if y % p == 0:
            raise CongruenceViolated(f"excluded prime {p} divides y")
    check_admissible(fam, n)
    return y, n


# ---------------------------------------------------------------------------
# ramified prime targeting

@dataclass(frozen=True)
class RamifiedSetup:
    q: int
    n0: int
    b0: int
    y0: int
    c_r: int
    splits: bool


def _ramified_params(fam: Family):
    if fam is Family.SEXTIC:
        return 108, (30, -143), 143     # n^2 + D, special value a n + b, y0 offset
    if fam is Family.QUARTIC:
        return 16, (6, -7), 1
    raise PrimeInadmissible("ramified targeting applies to the cyclic families")


def ramified_prime_setup(family, r: int, q: int, c_r: int | None = None,
                         bound: int = 1_000_000) -> RamifiedSetup:
    """n0, an r-th root b0 of the special value mod q^2, and the matching y0."""
    fam = Family.parse(family)
    check_r(fam, r)
    D, (a, b), off = _ramified_params(fam)
    if not em.is_prime(q):
        raise PrimeInadmissible(f"q={q} is not prime")
    if fam is Family.SEXTIC and (210 * r) % q == 0:
        raise PrimeInadmissible(f"q={q} divides 210r")
    if fam is Family.QUARTIC and (q in (2, 3, 5) or r % q == 0):
        raise PrimeInadmissible(f"q={q} divides 30r")
    splits = splits_linearly_mod(script_P(fam, r), q)
    if c_r is None:
        c_r, _ = build_cr(fam, r, q, bound)
    if c_r % q == 0:
        raise PrimeInadmissible("q divides c_r")
    q2 = q * q
    roots = roots_mod_q(ModPoly([D % q, 0, 1], q), q)
    if not roots:
        raise PrimeInadmissible(f"-{D} is not a square modulo {q}")
    for n0 in roots:
        if (n0 * n0 + D) % q2 == 0:
            n0 += q
        c = (a * n0 + b) % q2
        xr = ModPoly([(-c) % q] + [0] * (r - 1) + [1], q)
        bs = roots_mod_q(xr, q)
        if not bs:
            continue
        b0 = bs[0]
        # Hensel: q does not divide r * b0
        b0 = (b0 - (pow(b0, r, q2) - c) * pow(r * pow(b0, r - 1, q2), -1, q2)) % q2
        assert pow(b0, r, q2) == c
        y0 = ((b0 * pow(c_r, -1, q2) + off) * pow(30, -1, q2)) % q2
        return RamifiedSetup(q, n0 % q2, b0, y0, c_r, splits)
    raise PrimeInadmissible(f"special value has no {r}-th root modulo {q}")


def find_ramified_prime(family, r: int, start: int = 2, bound: int = 100_000) -> int:
    """Smallest admissible q >= start for which script P splits into linear factors."""
    fam = Family.parse(family)
    bad = 210 * r if fam is Family.SEXTIC else 30 * r
    P = script_P(fam, r)
    q = start - 1
    while True:
        q = em.next_prime(q)
        if q > bound:
            raise BoundExhausted(f"no split prime below {bound}")
        if bad % q == 0:
            continue
        try:
            if splits_linearly_mod(P, q):
                return q
        except LeadingCoefficientVanishes:
            continue


# ---------------------------------------------------------------------------
# non-power evidence

def gather_nonpower_evidence(family, n: int, p: int, disc_numerator: int | None = None,
                             scan_bound: int = 1_000_000, count: int = 1) -> list[NonPowerEvidence]:
    """Degree-1 primes at which the target element is a p-th power non-residue."""
    fam = Family.parse(family)
    if disc_numerator is None:
        disc_numerator = discriminant(defining_poly(fam, n)).numerator
    out: list[NonPowerEvidence] = []
    step = 2 * p
    ell = 1 + step
    while ell <= scan_bound and len(out) < count:
        if em.is_prime(ell) and disc_numerator % ell:
            for a in roots_mod_q(defining_poly_mod(fam, n, ell), ell):
                v = target_mod(fam, a, ell)
                if v and em.power_residue_symbol(v, ell, p) is Symbol.NONRESIDUE:
                    out.append(NonPowerEvidence(p, ell, a, v))
                    break
        ell += step
    return out


# ---------------------------------------------------------------------------
# the search loop

def _m_walk(fam: Family, m_max: int) -> Iterator[int]:
    if fam is Family.CUBIC:
        yield from range(0, m_max + 1)
        return
    yield 0
    for k in range(1, m_max + 1):
        yield k
        yield -k


def _attempt(fam: Family, r: int, c_r: int, witnesses: tuple, y0: int, q: int,
             ram: RamifiedData | None, m: int, config: SearchConfig) -> ClassOrderCertificate | None:
    try:
        y, n = construct_y_n(fam, r, c_r, y0, q, m)
    except (CongruenceViolated, ParityViolated, InadmissibleParameter):
        return None
    try:
        fac = em.factorize(abs(y), config.factor_budget) if abs(y) > 1 else {}
    except em.FactorizationTimeout:
        log.info("m=%d: factorization budget exhausted", m)
        return None
    e = evaluation_point(fam)
    ideal = tuple(IdealFactorCert(ell, e % ell, r * nu) for ell, nu in sorted(fac.items()))
    evidence: list = []
    if fam.galois and r > 1:
        disc = discriminant(defining_poly(fam, n)).numerator
        for p in sorted(em.factorize(r)):
            found = gather_nonpower_evidence(fam, n, p, disc, config.scan_bound)
            if not found:
                log.info("m=%d: no non-power evidence for p=%d", m, p)
                return None
            evidence.extend(found)
        if 6 * r <= config.irreducibility_degree:
            verdict = irreducibility_over_Q(pnr_poly(fam, n, r))
            if isinstance(verdict, Irreducible):
                for p in sorted(em.factorize(r)):
                    evidence.append(IrreducibilityEvidence(p, verdict.method, tuple(verdict.primes), verdict.shift))
    cert = ClassOrderCertificate(
        family=fam, r=r, n=n, y=y, c_r=c_r, bauer_witnesses=witnesses,
        ideal_factors=ideal, nonpower_evidence=tuple(evidence), ramified_q=ram,
    )
    v = verify_certificate(cert, config.factor_budget)
    if not v:
        log.info("m=%d: candidate rejected (%s)", m, v.reason)
        return None
    return cert


def _attempt_packed(args):
    return _attempt(*args)


def run_search(family, r: int, config: SearchConfig | None = None, q: int | None = None) -> ClassOrderCertificate:
    """Walk over m until a certificate passes the full verifier."""
    fam = Family.parse(family)
    config = config or SearchConfig()
    check_r(fam, r)
    if q is not None and not fam.galois:
        raise PrimeInadmissible("the cubic family has no ramified-prime variant")
    c_r, witnesses = build_cr(fam, r, q, config.scan_bound)
    y0, qq, ram = 0, 1, None
    if q is not None:
        setup = ramified_prime_setup(fam, r, q, c_r, config.scan_bound)
        y0, qq, ram = setup.y0, q, RamifiedData(q, setup.n0)
        log.info("ramified setup q=%d n0=%d y0=%d (script P splits: %s)", q, setup.n0, y0, setup.splits)
    log.info("c_r=%d from witnesses %s", c_r, [w.ell for w in witnesses])
    args = lambda m: (fam, r, c_r, tuple(witnesses), y0, qq, ram, m, config)  # noqa: E731
    walk = _m_walk(fam, config.m_max)
    jobs = config.jobs
    if jobs <= 1:
        for m in walk:
            cert = _attempt(*args(m))
            if cert is not None:
                return cert
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            while True:
                batch = list(itertools.islice(walk, 2 * jobs))
                if not batch:
                    break
                for cert in ex.map(_attempt_packed, [args(m) for m in batch]):
                    if cert is not None:
                        return cert
    raise SearchExhausted(f"no certificate for r={r} within m_max={config.m_max}")

