"""The three parametric families and their exact identities.

Elements of K_n = Q[X]/(f_n) are represented by their reduced RatPoly
representative. Galois conjugation in the cyclic families is the Moebius map
sigma applied to rho and extended as a ring homomorphism.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactmath as em
from .polynomial import ModPoly, RatPoly, IntPoly, X, resultant, compose_power

__all__ = [
    "Family", "FieldInstance", "FieldElement", "MobiusMap",
    "InadmissibleParameter", "NonGaloisFamily", "GcdConstraintViolated",
    "CongruenceViolated", "ParityViolated", "IdentityFailure",
    "defining_poly", "defining_poly_mod", "is_admissible", "n_from_special_value", "target_mod", "check_admissible", "special_value", "linear_form",
    "evaluation_point", "excluded_primes", "derive_excluded_primes", "sigma", "conjugate_map",
    "conjugate", "w_element", "target_element", "cubic_cofactor", "pnr_poly",
    "pnr_base_poly", "pnr_is_min_poly_check", "g_identities", "script_P", "mu_unit",
    "cubic_norm_form", "k103_unit_relation", "K103_UNITS", "phi_poly", "phi_identity",
    "h_poly", "subfield_norms", "minimal_polynomial", "check_r",
]


class InadmissibleParameter(ValueError):
    pass


class NonGaloisFamily(ValueError):
    pass


class GcdConstraintViolated(ValueError):
    pass


class CongruenceViolated(ValueError):
    pass


class ParityViolated(ValueError):
    pass


class IdentityFailure(AssertionError):
    """A symbolic identity that should hold exactly did not."""


def _require(cond: bool, what: str):
    if not cond:
        raise IdentityFailure(what)


class Family(enum.Enum):
    SEXTIC = "sextic"
    QUARTIC = "quartic"
    CUBIC = "cubic"

    @classmethod
    def parse(cls, s) -> "Family":
        return s if isinstance(s, cls) else cls(str(s).lower())

    @property
    def degree(self) -> int:
        return {Family.SEXTIC: 6, Family.QUARTIC: 4, Family.CUBIC: 3}[self]

    @property
    def galois(self) -> bool:
        return self is not Family.CUBIC


# ---------------------------------------------------------------------------
# parameters and defining polynomials

def is_admissible(family, n: int) -> bool:
    family = Family.parse(family)
    if family is Family.SEXTIC:
        return n not in (0, 6, -6, 26, -26)
    if family is Family.QUARTIC:
        return n not in (0, 3, -3)
    return n % 2 == 1 and n >= 5


def check_admissible(family, n: int):
    if not is_admissible(family, n):
        raise InadmissibleParameter(f"n={n} is not admissible for the {Family.parse(family).value} family")


def defining_poly(family, n: int) -> RatPoly:
    family = Family.parse(family)
    check_admissible(family, n)
    if family is Family.SEXTIC:
        F = Fraction
        f = RatPoly([1, F(n + 6, 2), 5 * F(n - 6, 4), -20, -5 * F(n + 6, 4), -F(n - 6, 2), 1])
        if (n % 4 == 2) != f.is_integral():
            raise IdentityFailure("sextic integrality should hold exactly when n = 2 mod 4")
        return f
    if family is Family.QUARTIC:
        return IntPoly([1, n, -6, -n, 1])
    return IntPoly([-1, n, n, 1])


def defining_poly_mod(family, n: int, ell: int) -> ModPoly:
    """f_n reduced modulo an odd prime ell, computed from n mod ell."""
    family = Family.parse(family)
    if ell == 2 and family is Family.SEXTIC:
        raise ValueError("sextic reduction needs an odd prime")
    k = n % ell
    if family is Family.SEXTIC:
        h, qt = pow(2, -1, ell), pow(4, -1, ell)
        cs = [1, (k + 6) * h, 5 * (k - 6) * qt, -20, -5 * (k + 6) * qt, -(k - 6) * h, 1]
    elif family is Family.QUARTIC:
        cs = [1, k, -6, -k, 1]
    else:
        cs = [-1, k, k, 1]
    return ModPoly([c % ell for c in cs], ell)


def evaluation_point(family) -> int:
    return {Family.SEXTIC: -3, Family.QUARTIC: -2, Family.CUBIC: 2}[Family.parse(family)]


def linear_form(family, n: int) -> int:
    family = Family.parse(family)
    return {Family.SEXTIC: 30 * n - 143, Family.QUARTIC: 6 * n - 7, Family.CUBIC: 6 * n + 7}[family]


def special_value(family, n: int) -> int:
    """f_n at the family's distinguished point, checked against its linear form."""
    family = Family.parse(family)
    v = defining_poly(family, n)(evaluation_point(family))
    _require(v == linear_form(family, n), "special value disagrees with its linear form")
    return int(v)


def n_from_special_value(family, value: int) -> int | None:
    """Inverse of the linear form, or None when value is not in its image."""
    family = Family.parse(family)
    a, b = {Family.SEXTIC: (30, -143), Family.QUARTIC: (6, -7), Family.CUBIC: (6, 7)}[family]
    n, rem = divmod(value - b, a)
    return None if rem else n


# The quadratic factor of disc(f_n) that can meet the special value.
_DISC_CRITICAL = {
    Family.SEXTIC: IntPoly([108, 0, 1]),
    Family.QUARTIC: IntPoly([16, 0, 1]),
    Family.CUBIC: IntPoly([-27, 0, -18, 0, 1]),
}
_LINEAR = {
    Family.SEXTIC: IntPoly([-143, 30]),
    Family.QUARTIC: IntPoly([-7, 6]),
    Family.CUBIC: IntPoly([7, 6]),
}
# Constant factors of the discriminant besides the critical polynomial.
_DISC_CONSTANT_PRIMES = {Family.SEXTIC: (2, 3), Family.QUARTIC: (2,), Family.CUBIC: ()}


def derive_excluded_primes(family) -> set[int]:
    """Primes that can divide both the special value and disc(f_n), derived from scratch.

    A common prime divisor must divide Res(linear form, critical factor) or one of
    the constant factors; each candidate is then confirmed by a scan of n mod p.
    """
    family = Family.parse(family)
    lin, crit = _LINEAR[family], _DISC_CRITICAL[family]
    res = resultant(lin, crit)
    cands = set(em.factorize(int(res))) | set(_DISC_CONSTANT_PRIMES[family])
    out = set()
    for p in cands:
        for n in range(p):
            if lin(n).numerator % p == 0 and (p in _DISC_CONSTANT_PRIMES[family] or crit(n).numerator % p == 0):
                out.add(p)
                break
    return out


_EXCLUDED = {Family.SEXTIC: frozenset({7}), Family.QUARTIC: frozenset({5}), Family.CUBIC: frozenset({37, 47})}


def excluded_primes(family) -> frozenset[int]:
    return _EXCLUDED[Family.parse(family)]


def check_r(family, r: int):
    """Family constraint on the class order r."""
    family = Family.parse(family)
    if r < 1:
        raise GcdConstraintViolated("r must be positive")
    if family is Family.SEXTIC and math.gcd(r, 6) != 1:
        raise GcdConstraintViolated("sextic family needs gcd(r, 6) = 1")
    if family is Family.QUARTIC and r % 2 == 0:
        raise GcdConstraintViolated("quartic family needs r odd")
    if family is Family.CUBIC and r % 3 == 0:
        raise GcdConstraintViolated("cubic family needs r prime to 3")


# ---------------------------------------------------------------------------
# field instances and elements

@dataclass(frozen=True)
class FieldInstance:
    family: Family
    n: int
    f: RatPoly

    @classmethod
    def make(cls, family, n: int) -> "FieldInstance":
        family = Family.parse(family)
        return cls(family, n, defining_poly(family, n))

    @property
    def degree(self) -> int:
        return self.family.degree

    @property
    def rho(self) -> "FieldElement":
        return self.element(X)

    def element(self, rep) -> "FieldElement":
        if isinstance(rep, (int, Fraction)):
            rep = RatPoly.const(rep)
        return FieldElement(self, rep % self.f)

    def one(self) -> "FieldElement":
        return self.element(1)


class FieldElement:
    """Residue class of a rational polynomial modulo f_n."""

    __slots__ = ("instance", "rep")

    def __init__(self, instance: FieldInstance, rep: RatPoly):
        self.instance = instance
        self.rep = rep if rep.degree < instance.degree else rep % instance.f

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.instance != self.instance:
                raise ValueError("elements of different fields")
            return other
        return self.instance.element(other)

    def __add__(self, other):
        return FieldElement(self.instance, self.rep + self._lift(other).rep)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.instance, -self.rep)

    def __sub__(self, other):
        return FieldElement(self.instance, self.rep - self._lift(other).rep)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return FieldElement(self.instance, (self.rep * o.rep) % self.instance.f)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.rep:
            raise ZeroDivisionError("zero has no inverse")
        g, s, _ = self.rep.xgcd(self.instance.f)
        if g.degree != 0:
            raise ZeroDivisionError("element is a zero divisor (f is reducible)")
        return FieldElement(self.instance, s % self.instance.f)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.instance.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.rep == RatPoly.const(other)
        if isinstance(other, FieldElement):
            return self.instance == other.instance and self.rep == other.rep
        return NotImplemented

    def __hash__(self):
        return hash((self.instance.family, self.instance.n, self.rep))

    def substitute(self, image: "FieldElement") -> "FieldElement":
        """The representative evaluated at another field element (Horner)."""
        acc = image.instance.element(0)
        for c in reversed(self.rep.coeffs):
            acc = acc * image + c
        return acc

    def norm(self) -> Fraction:
        """N_{K|Q}, as Res(f, rep) / lc(f)^deg(rep)."""
        f = self.instance.f
        return resultant(f, self.rep) / f.lc ** max(self.rep.degree, 0)

    def is_rational(self) -> bool:
        return self.rep.degree <= 0

    def to_json(self) -> list[str]:
        return [str(c) for c in self.rep.coeffs]

    @classmethod
    def from_json(cls, instance: FieldInstance, data: Sequence[str]) -> "FieldElement":
        return instance.element(RatPoly(Fraction(s) for s in data))

    def __repr__(self):
        return f"FieldElement({self.rep} mod f_{self.instance.n})"


# ---------------------------------------------------------------------------
# Moebius maps and conjugation

@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("singular Moebius map")

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        """Composition self o other."""
        return MobiusMap(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d,
        )

    def __pow__(self, k: int) -> "MobiusMap":
        out = MobiusMap(1, 0, 0, 1)
        for _ in range(k):
            out = self @ out
        return out

    def is_identity(self) -> bool:
        """Scalar matrix, i.e. the identity map."""
        return self.b == 0 and self.c == 0 and self.a == self.d

    def same_map(self, other: "MobiusMap") -> bool:
        """Equal as maps, i.e. matrices proportional."""
        m, o = (self.a, self.b, self.c, self.d), (other.a, other.b, other.c, other.d)
        return all(m[i] * o[j] == m[j] * o[i] for i in range(4) for j in range(4))

    def order(self, limit: int = 24) -> int:
        for k in range(1, limit + 1):
            if (self ** k).is_identity():
                return k
        raise ValueError("order exceeds limit")

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return (x * self.a + self.b) / (x * self.c + self.d)
        return (self.a * x + self.b) / (self.c * x + self.d)

    def mod(self, x: int, ell: int) -> int | None:
        """Image of x in GF(ell), or None when the denominator vanishes."""
        den = (self.c * x + self.d) % ell
        if den == 0:
            return None
        return (self.a * x + self.b) * pow(den, -1, ell) % ell

    def pole(self) -> Fraction | None:
        return None if self.c == 0 else Fraction(-self.d, self.c)

    def numerator_poly(self, f: RatPoly) -> RatPoly:
        """(cX + d)^deg f * f(M(X)), a polynomial."""
        n = f.degree
        num, den = RatPoly([self.b, self.a]), RatPoly([self.d, self.c])
        out = RatPoly()
        for k, coef in enumerate(f.coeffs):
            out = out + num ** k * den ** (n - k) * coef
        return out


_SIGMA = {Family.SEXTIC: MobiusMap(1, -1, 1, 2), Family.QUARTIC: MobiusMap(1, -1, 1, 1)}

# Closed forms of sigma^i(rho) as printed for each cyclic family.
CONJUGATE_TABLE = {
    Family.SEXTIC: (
        MobiusMap(1, 0, 0, 1),      # rho
        MobiusMap(1, -1, 1, 2),     # (rho - 1)/(rho + 2)
        MobiusMap(0, -1, 1, 1),     # -1/(rho + 1)
        MobiusMap(-1, -2, 2, 1),    # -(rho + 2)/(2 rho + 1)
        MobiusMap(-1, -1, 1, 0),    # -(rho + 1)/rho
        MobiusMap(-2, -1, 1, -1),   # -(2 rho + 1)/(rho - 1)
    ),
    Family.QUARTIC: (
        MobiusMap(1, 0, 0, 1),      # rho
        MobiusMap(1, -1, 1, 1),     # (rho - 1)/(rho + 1)
        MobiusMap(0, -1, 1, 0),     # -1/rho
        MobiusMap(-1, -1, 1, -1),   # -(rho + 1)/(rho - 1)
    ),
}


def sigma(family) -> MobiusMap:
    family = Family.parse(family)
    if not family.galois:
        raise NonGaloisFamily("the cubic family has no Galois action on K_n")
    return _SIGMA[family]


def conjugate_map(family, i: int) -> MobiusMap:
    family = Family.parse(family)
    return sigma(family) ** (i % family.degree)


def conjugate(e: FieldElement, i: int) -> FieldElement:
    """sigma^i applied to e."""
    fam = e.instance.family
    m = conjugate_map(fam, i)
    if m.is_identity():
        return e
    return e.substitute(m(e.instance.rho))


def conjugates_of_rho(inst: FieldInstance) -> list[FieldElement]:
    rho = inst.rho
    return [conjugate_map(inst.family, i)(rho) if i else rho for i in range(inst.degree)]


def subfield_norms(e: FieldElement) -> dict[str, FieldElement]:
    """Relative norms to the proper subfields of a cyclic K_n."""
    fam = e.instance.family
    if fam is Family.SEXTIC:
        return {
            "k2": e * conjugate(e, 2) * conjugate(e, 4),
            "k3": e * conjugate(e, 3),
        }
    if fam is Family.QUARTIC:
        return {"k2": e * conjugate(e, 2)}
    raise NonGaloisFamily("no subfield norms for the cubic family")


# ---------------------------------------------------------------------------
# distinguished elements

def _w_from_conjugates(fam: Family, rhos: Sequence):
    if fam is Family.SEXTIC:
        return (3 + rhos[1]) * (3 + rhos[2]) / ((3 + rhos[4]) * (3 + rhos[5]))
    return (2 + rhos[1]) / (2 + rhos[3])


def _target_from_conjugates(fam: Family, rhos: Sequence):
    w = _w_from_conjugates(fam, rhos)
    if fam is Family.SEXTIC:
        return w * rhos[4] / rhos[1]
    return w / rhos[1]


def w_element(inst: FieldInstance, check_norms: bool = True) -> FieldElement:
    """The element whose ideal is an r-th power: w for the cyclic families, 2 - rho for the cubic."""
    fam = inst.family
    if fam is Family.CUBIC:
        return 2 - inst.rho
    w = _w_from_conjugates(fam, conjugates_of_rho(inst))
    if check_norms:
        for name, v in subfield_norms(w).items():
            _require(v == 1, f"N_(K|{name})(w) != 1")
    return w


def cubic_cofactor(inst: FieldInstance) -> FieldElement:
    """(2 - rho_1)(2 - rho_2) computed inside K_n as f_n(2)/(2 - rho)."""
    if inst.family is not Family.CUBIC:
        raise ValueError("cubic family only")
    rho, n = inst.rho, inst.n
    cof = special_value(Family.CUBIC, n) / (2 - rho)
    _require(cof == rho * rho + (2 + n) * rho + (4 + 3 * n), "cubic cofactor closed form")
    _require(cof + (2 - rho) * (rho + 4 + n) == 5 * n + 12, "cubic combination 5n + 12")
    return cof


def minimal_polynomial(e: FieldElement) -> RatPoly:
    """Monic minimal polynomial over Q, by linear algebra on powers of e."""
    D = e.instance.degree
    rows: list[list[Fraction]] = []   # echelon basis, each with its combination
    combos: list[list[Fraction]] = []
    pivots: list[int] = []
    power = e.instance.one()
    for k in range(D + 1):
        v = [power.rep[i] for i in range(D)]
        comb = [Fraction(0)] * (D + 1)
        comb[k] = Fraction(1)
        for row, cb, piv in zip(rows, combos, pivots):
            if v[piv]:
                t = v[piv] / row[piv]
                v = [a - t * b for a, b in zip(v, row)]
                comb = [a - t * b for a, b in zip(comb, cb)]
        if not any(v):
            return RatPoly(comb[: k + 1]).monic()
        piv = next(i for i, a in enumerate(v) if a)
        rows.append(v)
        combos.append(comb)
        pivots.append(piv)
        power = power * e
    raise IdentityFailure("powers of e are independent beyond the field degree")


def target_element(inst: FieldInstance, check_primitive: bool = True) -> FieldElement:
    """w*rho_4/rho_1 (sextic) or w/rho_1 (quartic)."""
    fam = inst.family
    if not fam.galois:
        raise NonGaloisFamily("target elements exist for the cyclic families only")
    t = _target_from_conjugates(fam, conjugates_of_rho(inst))
    if check_primitive:
        _require(minimal_polynomial(t).degree == inst.degree, "target element is not primitive")
    return t


def target_mod(fam: Family, root: int, ell: int) -> int | None:
    """Image of the target element at the degree-1 prime (ell, rho - root).

    None when some denominator vanishes there.
    """
    rhos = []
    for m in CONJUGATE_TABLE[fam]:
        v = m.mod(root, ell)
        if v is None:
            return None
        rhos.append(v)
    if fam is Family.SEXTIC:
        num = (3 + rhos[1]) * (3 + rhos[2]) * rhos[4]
        den = (3 + rhos[4]) * (3 + rhos[5]) * rhos[1]
    else:
        num = 2 + rhos[1]
        den = (2 + rhos[3]) * rhos[1]
    if den % ell == 0:
        return None
    return num * pow(den, -1, ell) % ell


# ---------------------------------------------------------------------------
# p_{n,r}, g(X, Y), script P

_A2 = (-104149, -128700, -12399357)        # a_2 = a_4 as a polynomial in n
_A3 = (-253298, 171600, -25821164)
_A2_S = (Fraction(-104149, 900), Fraction(-16823807, 450), Fraction(-13841287201, 900))
_A3_S = (Fraction(-253298, 900), Fraction(-16823807, 225), Fraction(-13841287201, 450))


def _sextic_coeffs(n: int) -> list[int]:
    s = 30 * n - 143
    a0 = s * s
    a1 = -6 * a0
    a2 = _A2[0] * n * n + _A2[1] * n + _A2[2]
    a3 = _A3[0] * n * n + _A3[1] * n + _A3[2]
    alt2 = _A2_S[0] * s * s + _A2_S[1] * s + _A2_S[2]
    alt3 = _A3_S[0] * s * s + _A3_S[1] * s + _A3_S[2]
    _require(alt2 == a2, "the two forms of a_2 disagree")
    _require(alt3 == a3, "the two forms of a_3 disagree")
    return [a0, a1, a2, a3, a2, a1, a0]


def _quartic_coeffs(n: int) -> list[int]:
    a0 = 6 * n - 7
    a1 = 7 * n + 96
    return [a0, a1, -6 * a0, -a1, a0]


def pnr_base_poly(family, n: int) -> IntPoly:
    """p_{n,1}."""
    fam = Family.parse(family)
    if fam is Family.SEXTIC:
        return IntPoly(_sextic_coeffs(n))
    if fam is Family.QUARTIC:
        return IntPoly(_quartic_coeffs(n))
    raise NonGaloisFamily("p_{n,r} is defined for the cyclic families")


def pnr_poly(family, n: int, r: int) -> IntPoly:
    fam = Family.parse(family)
    if fam.galois:
        check_r(fam, r)
    return compose_power(pnr_base_poly(fam, n), r)


def pnr_is_min_poly_check(inst: FieldInstance, r: int = 1) -> bool:
    """p_{n,1} annihilates the target element, which has full degree."""
    if r != 1:
        raise ValueError("only r = 1 is checked directly")
    t = target_element(inst, check_primitive=False)
    p = pnr_base_poly(inst.family, inst.n)
    if p.degree != inst.degree:
        return False
    value = inst.element(0)
    for c in reversed(p.coeffs):
        value = value * t + c
    return value == 0 and minimal_polynomial(t).degree == inst.degree


def script_P(family, r: int) -> IntPoly:
    """(X^r + c - k sqrt(-D))(X^r + c + k sqrt(-D)) expanded."""
    fam = Family.parse(family)
    if fam is Family.SEXTIC:
        c, k, D = 143, 30, 108
    elif fam is Family.QUARTIC:
        c, k, D = 7, 6, 16
    else:
        raise NonGaloisFamily("script P belongs to the cyclic families")
    check_r(fam, r)
    base = IntPoly([c * c + k * k * D, 2 * c, 1])
    return compose_power(base, r)


def h_poly() -> RatPoly:
    F = Fraction
    return RatPoly([1, -6, F(-385417749, 25), F(-770836748, 25), F(-385417749, 25), -6, 1])


def _g_T(fam: Family, r: int, c_r: int, y0: int, q: int) -> RatPoly:
    """The r-th power T(Y) with T(m) = special value of n_m."""
    if fam is Family.SEXTIC:
        lin = RatPoly([c_r * (30 * y0 - 143), c_r * 30 * 8 * q * q])
    else:
        lin = RatPoly([c_r * (30 * y0 - 1), c_r * 30 * q * q])
    return lin ** r


def g_coefficients(family, r: int, c_r: int, y0: int, q: int) -> list[RatPoly]:
    """g_0(Y), ..., g_D(Y)."""
    fam = Family.parse(family)
    T = _g_T(fam, r, c_r, y0, q)
    if fam is Family.SEXTIC:
        g0 = T * T
        g1 = g0 * -6
        g2 = g0 * _A2_S[0] + T * _A2_S[1] + _A2_S[2]
        g3 = g0 * _A3_S[0] + T * _A3_S[1] + _A3_S[2]
        return [g0, g1, g2, g3, g2, g1, g0]
    g0 = T
    g1 = (T + 7) * Fraction(7, 6) + 96
    return [g0, g1, g0 * -6, -g1, g0]


def g_specialize(coeffs: Sequence[RatPoly], r: int, y) -> RatPoly:
    """g(X, y) as a polynomial in X."""
    return compose_power(RatPoly([g(y) for g in coeffs]), r)


def g_identities(family, r: int, c_r: int, y0: int = 0, q: int = 1,
                 m: int | Iterable[int] = (0, 1, -1)) -> dict:
    """Machine-check the identities behind the bivariate g(X, Y).

    (i) the collapse of a linear combination of g_k to a constant, (ii)
    g(X, m) = p_{n_m, r}(X) for the given m, (iii) the special specialization.
    """
    fam = Family.parse(family)
    if not fam.galois:
        raise NonGaloisFamily("g(X, Y) belongs to the cyclic families")
    check_r(fam, r)
    if fam is Family.SEXTIC:
        if pow(-143 * c_r, r, 30) != (-143) % 30:
            raise CongruenceViolated("need (c_r * (-143))^r = -143 (mod 30)")
    elif c_r % 6 != 1:
        raise CongruenceViolated("need c_r = 1 (mod 6)")
    ms = [m] if isinstance(m, int) else list(m)
    coeffs = g_coefficients(fam, r, c_r, y0, q)
    T = _g_T(fam, r, c_r, y0, q)
    report: dict = {"family": fam.value, "r": r, "c_r": c_r, "y0": y0, "q": q}

    if fam is Family.SEXTIC:
        g0, g2, g3 = coeffs[0], coeffs[2], coeffs[3]
        c2 = g2 * 900 + g0 * 104149 + T * (2 * 16823807)
        c3 = g3 * 900 + g0 * 253298 + T * (4 * 16823807)
        _require(c2.degree <= 0 and c3.degree <= 0, "collapse is not constant")
        report["collapse_constant"] = int(c2[0])
        report["collapse_constant_g3"] = int(c3[0])
        _require(c2[0] == -(7 ** 12), "900 g2 + 104149 g0 + 2*16823807 sqrt(g0) != -7^12")
    else:
        g0, g1 = coeffs[0], coeffs[1]
        c = g1 * 6 - g0 * 7
        _require(c.degree <= 0, "collapse is not constant")
        report["collapse_constant"] = int(c[0])
        _require(c[0] == 625, "6 g1 - 7 g0 != 625")

    a, b = (30, -143) if fam is Family.SEXTIC else (6, -7)
    checked = []
    for mm in ms:
        sv = T(mm)
        n_m, rem = divmod(int(sv) - b, a)
        _require(rem == 0 and sv.denominator == 1, "T(m) is not a special value")
        _require(g_specialize(coeffs, r, mm) == pnr_poly(fam, n_m, r), f"g(X, {mm}) != p_(n_m, r)")
        checked.append({"m": mm, "n_m": n_m})
    report["specializations"] = checked

    # t with c_r (30 (y0 + k q^2 t) - c) = +-1
    if fam is Family.SEXTIC:
        t = ((Fraction(1, c_r) + 143) / 30 - y0) / (8 * q * q)
        _require(T(t) == 1, "special t does not give T = 1")
        special = compose_power(h_poly(), r)
    else:
        t = ((Fraction(-1, c_r) + 1) / 30 - y0) / (q * q)
        _require(T(t) == -1, "special t does not give T = -1")
        special = -compose_power(RatPoly(defining_poly(Family.QUARTIC, -103).coeffs), r)
    _require(g_specialize(coeffs, r, t) == special, "special specialization mismatch")
    report["special_t"] = str(t)
    report["special_ok"] = True
    return report


# ---------------------------------------------------------------------------
# cubic unit, K_{-103} units, phi_n

def cubic_norm_form(a: int, b: int, c: int, n: int) -> int:
    """N_{K|Q}(a + b rho + c rho^2) for the cubic family, in closed form."""
    return ((a * a * c + a * c * c - a * b * c) * n * n
            - (2 * a * a * c + a * a * b - 2 * a * c * c - a * b * b - b * c * c + b * b * c) * n
            + (a ** 3 + b ** 3 + c ** 3 - 3 * a * b * c))


def mu_unit(inst: FieldInstance) -> FieldElement:
    """mu = ((n + 3)/2)(1 + rho) + rho^2, checked to be a norm-one unit."""
    if inst.family is not Family.CUBIC:
        raise ValueError("cubic family only")
    n = inst.n
    if n % 2 == 0:
        raise ParityViolated("mu needs n odd")
    k = (n + 3) // 2
    rho = inst.rho
    mu = k * (1 + rho) + rho * rho
    _require(cubic_norm_form(k, k, 1, n) == 1, "norm form of mu != 1")
    _require(mu.norm() == 1, "resultant norm of mu != 1")
    _require(mu * (2 * rho) == (rho + 1) ** 3, "mu != (rho + 1)^3 / (2 rho)")
    return mu


K103_UNITS = (
    (Fraction(63, 125), Fraction(-208, 125), Fraction(101, 125), Fraction(1, 125)),
    (Fraction(83, 250), Fraction(156, 125), Fraction(53, 125), Fraction(1, 250)),
    (Fraction(-207, 250), Fraction(-364, 125), Fraction(48, 125), Fraction(1, 250)),
)


def k103_unit_relation() -> bool:
    """Units u_1, u_2, u_3 of K_{-103} have norm +-1 and rho = u_1^2 u_2^3."""
    inst = FieldInstance.make(Family.QUARTIC, -103)
    us = [inst.element(RatPoly(c)) for c in K103_UNITS]
    for u in us:
        _require(abs(u.norm()) == 1, "K_-103 unit with norm other than +-1")
    _require(us[0] ** 2 * us[1] ** 3 == inst.rho, "rho != u_1^2 u_2^3")
    return True


def phi_poly(n: int) -> IntPoly:
    """(X - 1)^6 - (n^2 + 108)(X^2 + X)^2."""
    return IntPoly.of((X - 1) ** 6 - (X * X + X) ** 2 * (n * n + 108))


def phi_identity(n: int) -> bool:
    """phi_n matches its expanded form and annihilates rho_0/rho_3."""
    check_admissible(Family.SEXTIC, n)
    phi = phi_poly(n)
    expected = IntPoly([1, -6, -(n * n + 93), -(2 * n * n + 236), -(n * n + 93), -6, 1])
    _require(phi == expected, "phi_n expansion")
    _require(phi == phi_poly(-n), "phi_n != phi_-n")
    inst = FieldInstance.make(Family.SEXTIC, n)
    rhos = conjugates_of_rho(inst)
    t = rhos[0] / rhos[3]
    value = inst.element(0)
    for c in reversed(phi.coeffs):
        value = value * t + c
    _require(value == 0, "phi_n(rho_0/rho_3) != 0")
    return True
