"""Exact univariate polynomials over Q, Z and GF(q).

RatPoly holds Fraction coefficients (ascending degree); IntPoly is the same
type restricted to integer coefficients. ModPoly wraps the dense GF(q)
kernels from :mod:`classforge.kernels`.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import zip_longest
from typing import Iterable, Sequence, Union

from . import exactmath as em
from .kernels import backend_for

Number = Union[int, Fraction]

__all__ = [
    "RatPoly", "IntPoly", "ModPoly", "FactorPattern", "ModFactorization",
    "IsolatingInterval", "Irreducible", "Reducible", "Unknown",
    "LeadingCoefficientVanishes", "NotSquarefree", "X",
    "resultant", "discriminant", "factor_mod_q", "splits_linearly_mod", "roots_mod_q",
    "irreducibility_over_Q", "check_irreducibility_evidence", "eisenstein_check",
    "compose_power", "sturm_sequence", "count_real_roots", "isolate_real_roots",
    "refine_root", "factor_pattern_degrees",
]


class LeadingCoefficientVanishes(ValueError):
    pass


class NotSquarefree(ValueError):
    pass


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class RatPoly:
    """Immutable polynomial with rational coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    # -- construction helpers
    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "RatPoly":
        return cls([0] * k + [c])

    @classmethod
    def const(cls, c: Number) -> "RatPoly":
        return cls([c])

    # -- basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic
    @staticmethod
    def _coerce(other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatPoly(a + b for a, b in zip_longest(self.coeffs, o.coeffs, fillvalue=Fraction(0)))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly(c * other for c in self.coeffs)
        if not isinstance(other, RatPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result, base = RatPoly.const(1), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "RatPoly"):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return RatPoly(), self
        inv = 1 / other.lc
        quo = [Fraction(0)] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c:
                c *= inv
                quo[k - db] = c
                for j, b in enumerate(other.coeffs):
                    r[k - db + j] -= c * b
        return RatPoly(quo), RatPoly(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "RatPoly") -> "RatPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def __call__(self, x):
        """Evaluate at a number (Horner) or compose with a polynomial."""
        acc = RatPoly() if isinstance(x, RatPoly) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "RatPoly":
        return self * (1 / self.lc) if self.coeffs else self

    def shift(self, a: Number) -> "RatPoly":
        """f(X + a)."""
        return self(RatPoly([a, 1]))

    def reversed(self) -> "RatPoly":
        """X^deg * f(1/X)."""
        return RatPoly(reversed(self.coeffs))

    # -- integrality
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def denominator_lcm(self) -> int:
        return reduce(math.lcm, (c.denominator for c in self.coeffs), 1)

    def to_ints(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    def content(self) -> int:
        return reduce(math.gcd, self.to_ints(), 0)

    def primitive_part(self) -> "IntPoly":
        """Integral primitive polynomial with positive leading coefficient, same roots."""
        d = self.denominator_lcm()
        ints = [int(c * d) for c in self.coeffs]
        g = reduce(math.gcd, ints, 0) or 1
        if ints and ints[-1] < 0:
            g = -g
        return IntPoly(x // g for x in ints)

    def gcd(self, other: "RatPoly") -> "RatPoly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "RatPoly"):
        """(g, s, t) with s*self + t*other = g monic."""
        r0, r1 = self, other
        s0, s1 = RatPoly.const(1), RatPoly()
        t0, t1 = RatPoly(), RatPoly.const(1)
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        inv = 1 / r0.lc
        return r0 * inv, s0 * inv, t0 * inv

    def __repr__(self):
        return f"RatPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if k and a == 1:
                body = mono
            elif k:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


class IntPoly(RatPoly):
    """RatPoly whose coefficients are all integers (checked at construction)."""

    __slots__ = ()

    def __init__(self, coeffs: Iterable[Number] = ()):
        super().__init__(coeffs)
        if not self.is_integral():
            raise ValueError("IntPoly needs integer coefficients")

    @classmethod
    def of(cls, p: RatPoly) -> "IntPoly":
        return p if isinstance(p, IntPoly) else cls(p.coeffs)

    def __repr__(self):
        return f"IntPoly({self})"


X = RatPoly([0, 1])


# ---------------------------------------------------------------------------
# polynomials over GF(q)

class ModPoly:
    """Polynomial over the prime field GF(q); coefficients reduced, ascending."""

    __slots__ = ("q", "c")

    def __init__(self, coeffs: Iterable[int], q: int):
        self.q = q
        cs = [int(x) % q for x in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.c = cs

    @classmethod
    def _raw(cls, cs: list, q: int) -> "ModPoly":
        p = cls.__new__(cls)
        p.q, p.c = q, cs
        return p

    @classmethod
    def reduce(cls, f: RatPoly, q: int) -> "ModPoly":
        """Reduction of a polynomial whose denominators are prime to q."""
        return cls([c.numerator * pow(c.denominator, -1, q) for c in f.coeffs], q)

    @property
    def _k(self):
        return backend_for(self.q)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def __eq__(self, other):
        return isinstance(other, ModPoly) and self.q == other.q and self.c == other.c

    def __hash__(self):
        return hash((self.q, tuple(self.c)))

    def __bool__(self):
        return bool(self.c)

    def __add__(self, o: "ModPoly"):
        return ModPoly((a + b for a, b in zip_longest(self.c, o.c, fillvalue=0)), self.q)

    def __sub__(self, o: "ModPoly"):
        return ModPoly((a - b for a, b in zip_longest(self.c, o.c, fillvalue=0)), self.q)

    def __mul__(self, o):
        if isinstance(o, int):
            return ModPoly((x * o for x in self.c), self.q)
        return ModPoly._raw(self._k.mp_mul(self.c, o.c, self.q), self.q)

    def __divmod__(self, o: "ModPoly"):
        qu, r = self._k.mp_divmod(self.c, o.c, self.q)
        return ModPoly._raw(qu, self.q), ModPoly._raw(r, self.q)

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return ModPoly._raw(self._k.mp_rem(self.c, o.c, self.q), self.q)

    def powmod(self, e: int, m: "ModPoly") -> "ModPoly":
        return ModPoly._raw(self._k.mp_powmod(self.c, e, m.c, self.q), self.q)

    def gcd(self, o: "ModPoly") -> "ModPoly":
        return ModPoly._raw(self._k.mp_gcd(self.c, o.c, self.q), self.q)

    def monic(self) -> "ModPoly":
        return ModPoly._raw(self._k.mp_monic(self.c, self.q), self.q)

    def derivative(self) -> "ModPoly":
        return ModPoly((k * x for k, x in enumerate(self.c) if k), self.q)

    def __call__(self, x: int) -> int:
        return self._k.mp_eval(self.c, x % self.q, self.q)

    def is_one(self) -> bool:
        return self.c == [1]

    def __repr__(self):
        return f"ModPoly({self.c}, q={self.q})"


@dataclass(frozen=True)
class ModFactorization:
    """Monic irreducible factors with multiplicities, plus the leading coefficient."""

    q: int
    lc: int
    factors: tuple  # ((ModPoly, multiplicity), ...)

    @property
    def pattern(self) -> "FactorPattern":
        return FactorPattern(tuple(sorted((f.degree, e) for f, e in self.factors)))

    def product(self) -> ModPoly:
        out = ModPoly([self.lc], self.q)
        for f, e in self.factors:
            for _ in range(e):
                out = out * f
        return out


@dataclass(frozen=True)
class FactorPattern:
    entries: tuple  # ((degree, multiplicity), ...) sorted

    @property
    def total_degree(self) -> int:
        return sum(d * m for d, m in self.entries)

    def all_linear(self) -> bool:
        return all(d == 1 for d, _ in self.entries)

    def __iter__(self):
        return iter(self.entries)


def _pth_root(f: ModPoly) -> ModPoly:
    q = f.q
    return ModPoly(f.c[::q], q)


def _squarefree(f: ModPoly) -> list[tuple[ModPoly, int]]:
    """Squarefree decomposition of a monic polynomial over GF(q)."""
    q = f.q
    out: list[tuple[ModPoly, int]] = []
    if f.degree < 1:
        return out
    d = f.derivative()
    if not d:
        return [(g, e * q) for g, e in _squarefree(_pth_root(f))]
    c = f.gcd(d)
    w = f // c
    i = 1
    while not w.is_one():
        y = w.gcd(c)
        z = w // y
        if not z.is_one():
            out.append((z.monic(), i))
        i += 1
        w, c = y, c // y
    if not c.is_one():
        out += [(g, e * q) for g, e in _squarefree(_pth_root(c.monic()))]
    return out


def _distinct_degree(f: ModPoly) -> list[tuple[ModPoly, int]]:
    q = f.q
    x = ModPoly([0, 1], q)
    out = []
    h = x
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, f)
        g = f.gcd(h - x)
        if not g.is_one():
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _equal_degree(f: ModPoly, d: int, rng: random.Random) -> list[ModPoly]:
    """Split a monic squarefree product of degree-d irreducibles (Cantor-Zassenhaus)."""
    if f.degree == d:
        return [f]
    q = f.q
    n = f.degree
    while True:
        a = ModPoly([rng.randrange(q) for _ in range(n)], q)
        if a.degree < 1:
            continue
        if q == 2:
            t, b = a, a
            for _ in range(d - 1):
                t = t.powmod(2, f)
                b = b + t
        else:
            b = a.powmod((q ** d - 1) // 2, f) - ModPoly([1], q)
        g = f.gcd(b)
        if 0 < g.degree < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor_mod_q(f: RatPoly, q: int) -> ModFactorization:
    """Complete factorization of f over GF(q) into monic irreducibles."""
    g = f if isinstance(f, ModPoly) else None
    if g is None:
        if any(c.denominator % q == 0 for c in f.coeffs):
            raise LeadingCoefficientVanishes(f"denominator divisible by {q}")
        if f.lc.numerator % q == 0:
            raise LeadingCoefficientVanishes(f"{q} divides the leading coefficient")
        g = ModPoly.reduce(f, q)
    elif not g:
        raise LeadingCoefficientVanishes("zero polynomial")
    lc = g.lc
    g = g.monic()
    rng = random.Random(hash((q, tuple(g.c))))
    factors = []
    for part, e in _squarefree(g):
        for block, d in _distinct_degree(part):
            for irr in _equal_degree(block, d, rng):
                factors.append((irr, e))
    factors.sort(key=lambda t: (t[0].degree, t[0].c, t[1]))
    return ModFactorization(q, lc, tuple(factors))


def splits_linearly_mod(f: RatPoly, q: int) -> bool:
    return factor_mod_q(f, q).pattern.all_linear()


def roots_mod_q(f, q: int) -> list[int]:
    """Distinct roots of f in GF(q), ascending."""
    g = f if isinstance(f, ModPoly) else ModPoly.reduce(f, q)
    if not g:
        raise ValueError("zero polynomial has every element as a root")
    if g.degree < 1:
        return []
    g = g.monic()
    x = ModPoly([0, 1], q)
    lin = g.gcd(x.powmod(q, g) - x)
    if lin.degree < 1:
        return []
    rng = random.Random(hash((q, tuple(lin.c))))
    return sorted((-h.c[0]) % q for h in _equal_degree(lin, 1, rng))


def factor_pattern_degrees(pattern: FactorPattern) -> set[int]:
    """Degrees of all products of sub-multisets of the irreducible factors."""
    sums = {0}
    for d, m in pattern:
        for _ in range(m):
            sums |= {s + d for s in sums}
    return sums


# ---------------------------------------------------------------------------
# resultants

def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(r) - 1 - db + 1
    while len(r) - 1 >= db and r:
        c = r[-1]
        k = len(r) - 1 - db
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[k + j] -= c * b[j]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0:
        s = lb ** e
        r = [x * s for x in r]
    return r


def _int_resultant(a: list[int], b: list[int]) -> int:
    """Subresultant PRS resultant of integer polynomials (Cohen, Alg. 3.3.7)."""
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    s = 1
    if da < db:
        a, b, da, db = b, a, db, da
        if da % 2 and db % 2:
            s = -1
    if db == 0:
        return s * b[0] ** da
    ca = reduce(math.gcd, a)
    cb = reduce(math.gcd, b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca ** db * cb ** da
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _int_prem(a, b)
        a = b
        div = g * h ** delta
        b = [x // div for x in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g ** delta // h ** (delta - 1)
        if not b:
            return 0
        if len(b) == 1:
            da = len(a) - 1
            hh = b[0] ** da // h ** (da - 1) if da >= 1 else 1
            return s * t * hh


def resultant(f: RatPoly, g: RatPoly) -> Fraction:
    """Exact resultant Res(f, g) over Q."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    df, dg = f.denominator_lcm(), g.denominator_lcm()
    fi = [int(c * df) for c in f.coeffs]
    gi = [int(c * dg) for c in g.coeffs]
    # Res(df*f, dg*g) = df^deg(g) * dg^deg(f) * Res(f, g)
    r = _int_resultant(fi, gi)
    return Fraction(r, df ** g.degree * dg ** f.degree)


def discriminant(f: RatPoly) -> Fraction:
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


# ---------------------------------------------------------------------------
# irreducibility over Q

@dataclass(frozen=True)
class Irreducible:
    """Checkable irreducibility evidence.

    method is "mod_q" (primes=(q,), reduction irreducible), "eisenstein"
    (primes=(p,), Eisenstein for f(X + shift)) or "degree_sets" (factor-degree
    sets of the listed primes share no proper degree).
    """

    method: str
    primes: tuple
    shift: int = 0

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Reducible:
    factor: RatPoly

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Unknown:
    reason: str = ""

    def __bool__(self):
        return False


def eisenstein_check(f: RatPoly, p: int) -> bool:
    if f.degree < 1:
        raise ValueError("Eisenstein needs a nonconstant polynomial")
    c = f.to_ints()
    return c[-1] % p != 0 and all(x % p == 0 for x in c[:-1]) and c[0] % (p * p) != 0


def _eisenstein_prime(f: RatPoly, budget: int) -> int | None:
    c = f.to_ints()
    g = reduce(math.gcd, c[:-1], 0)
    if g in (0, 1):
        return None
    try:
        primes = em.factorize(g, budget)
    except em.FactorizationTimeout:
        return None
    for p in primes:
        if eisenstein_check(f, p):
            return p
    return None


def _rational_root(f: RatPoly, budget: int) -> Fraction | None:
    c = f.to_ints()
    if c[0] == 0:
        return Fraction(0)
    try:
        num = em.factorize(c[0], budget)
        den = em.factorize(c[-1], budget)
    except em.FactorizationTimeout:
        return None

    def divisors(fac):
        ds = [1]
        for p, e in fac.items():
            ds = [d * p ** k for d in ds for k in range(e + 1)]
        return ds

    dn, dd = divisors(num), divisors(den)
    if len(dn) * len(dd) > 200_000:
        return None
    for a in dn:
        for b in dd:
            for s in (1, -1):
                x = Fraction(s * a, b)
                if x.denominator == b and f(x) == 0:
                    return x
    return None


def _good_primes(f: RatPoly, count: int, start: int = 2):
    lc = f.lc.numerator
    q = start - 1
    found = 0
    while found < count:
        q = em.next_prime(q)
        if lc % q:
            found += 1
            yield q


def irreducibility_over_Q(
    f: RatPoly,
    primes: int = 30,
    shifts: Sequence[int] = (1, -1, 2, -2),
    factor_budget: int = 20_000,
) -> Irreducible | Reducible | Unknown:
    """One-sided irreducibility verdict for a primitive integer polynomial."""
    f = IntPoly.of(f)
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    if f.degree == 1:
        return Irreducible("mod_q", (_first_good_prime(f),))
    sq = f.gcd(f.derivative())
    if sq.degree > 0:
        return Reducible(sq.primitive_part())
    root = _rational_root(f, factor_budget)
    if root is not None:
        return Reducible(IntPoly([-root.numerator, root.denominator]))
    p = _eisenstein_prime(f, factor_budget)
    if p is not None:
        return Irreducible("eisenstein", (p,), 0)
    common: set[int] | None = None
    used: list[int] = []
    for q in _good_primes(f, primes):
        fac = factor_mod_q(f, q)
        pat = fac.pattern
        if len(pat.entries) == 1 and pat.entries[0] == (f.degree, 1):
            return Irreducible("mod_q", (q,))
        if any(m > 1 for _, m in pat):
            continue
        degs = factor_pattern_degrees(pat)
        before = common
        common = degs if common is None else common & degs
        if common != before:
            used.append(q)
        if not (common - {0, f.degree}):
            return Irreducible("degree_sets", tuple(used))
    for a in shifts:
        p = _eisenstein_prime(f.shift(a), factor_budget)
        if p is not None:
            return Irreducible("eisenstein", (p,), a)
    return Unknown("no evidence found within budget")


def _first_good_prime(f: RatPoly) -> int:
    return next(_good_primes(f, 1))


def check_irreducibility_evidence(f: RatPoly, ev: Irreducible) -> bool:
    """Re-derive an Irreducible verdict from scratch."""
    f = IntPoly.of(f)
    n = f.degree
    if n < 1:
        return False
    if ev.method == "eisenstein":
        (p,) = ev.primes
        return em.is_prime(p) and eisenstein_check(f.shift(ev.shift), p)
    if ev.method == "mod_q":
        (q,) = ev.primes
        if not em.is_prime(q) or f.lc.numerator % q == 0:
            return False
        pat = factor_mod_q(f, q).pattern
        return pat.entries == ((n, 1),)
    if ev.method == "degree_sets":
        common = set(range(n + 1))
        for q in ev.primes:
            if not em.is_prime(q) or f.lc.numerator % q == 0:
                return False
            common &= factor_pattern_degrees(factor_mod_q(f, q).pattern)
        return not (common - {0, n})
    return False


def compose_power(f, r: int):
    """f(X^r) for RatPoly or ModPoly."""
    if r < 1:
        raise ValueError("r must be positive")
    if isinstance(f, ModPoly):
        out = [0] * (r * f.degree + 1) if f.c else []
        for k, c in enumerate(f.c):
            out[k * r] = c
        return ModPoly(out, f.q)
    out = [Fraction(0)] * (r * f.degree + 1) if f.coeffs else []
    for k, c in enumerate(f.coeffs):
        out[k * r] = c
    return type(f)(out) if isinstance(f, IntPoly) else RatPoly(out)


# ---------------------------------------------------------------------------
# real roots

@dataclass(frozen=True)
class IsolatingInterval:
    """Open interval (lo, hi) containing exactly one real root of ``poly``."""

    lo: Fraction
    hi: Fraction
    poly: RatPoly = field(compare=False, repr=False, default=None)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, lo, hi) -> bool:
        """Whether this interval lies inside [lo, hi]."""
        return lo <= self.lo and self.hi <= hi


def sturm_sequence(f: RatPoly) -> list[RatPoly]:
    seq = [f, f.derivative()]
    while seq[-1]:
        r = seq[-2] % seq[-1]
        if not r:
            break
        seq.append(-r)
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Iterable[int]) -> int:
    v, prev = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _var_at(seq, x) -> int:
    return _variations(_sign(p(x)) for p in seq)


def _var_inf(seq, positive: bool) -> int:
    return _variations(_sign(p.lc) * (1 if positive or p.degree % 2 == 0 else -1) for p in seq)


def count_real_roots(f: RatPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots in (lo, hi] (unbounded ends when None)."""
    seq = sturm_sequence(f)
    vlo = _var_inf(seq, False) if lo is None else _var_at(seq, _frac(lo))
    vhi = _var_inf(seq, True) if hi is None else _var_at(seq, _frac(hi))
    return vlo - vhi


def _cauchy_bound(f: RatPoly) -> Fraction:
    lc = abs(f.lc)
    return 1 + max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f: RatPoly) -> list[IsolatingInterval]:
    """Disjoint isolating intervals for the real roots of a squarefree f, ascending."""
    if f.degree < 1:
        return []
    if f.gcd(f.derivative()).degree > 0:
        raise NotSquarefree("divide by gcd(f, f') first")
    seq = sturm_sequence(f)
    b = _cauchy_bound(f)
    b = Fraction(math.ceil(b))
    out: list[IsolatingInterval] = []
    stack = [(-b, b, _var_at(seq, -b), _var_at(seq, b))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(lo, hi, f))
            continue
        mid = (lo + hi) / 2
        k = 2
        while f(mid) == 0:
            k += 1
            mid = lo + (hi - lo) * Fraction(k - 1, 2 * k)
        vm = _var_at(seq, mid)
        stack.append((mid, hi, vm, vhi))
        stack.append((lo, mid, vlo, vm))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine_root(iv: IsolatingInterval, width=None, f: RatPoly | None = None) -> IsolatingInterval:
    """Bisect an isolating interval until hi - lo <= width (default 2^-40 of the start)."""
    f = f if f is not None else iv.poly
    width = _frac(width) if width is not None else iv.width / (1 << 40)
    lo, hi = iv.lo, iv.hi
    slo = _sign(f(lo))
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = _sign(f(mid))
        if sm == 0:
            eps = min(width, hi - lo) / 4
            return IsolatingInterval(mid - eps, mid + eps, f)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(lo, hi, f)
