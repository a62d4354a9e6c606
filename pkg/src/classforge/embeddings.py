"""Certified real-embedding numerics.

All enclosures are closed intervals with rational endpoints. Logarithms are
computed by a fixed-point atanh series whose rounding and truncation errors
are bounded explicitly, so a sign read off an interval is a proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .family import (
    CONJUGATE_TABLE, Family, FieldInstance, check_admissible, defining_poly, phi_poly,
)
from .polynomial import IsolatingInterval, count_real_roots, isolate_real_roots, refine_root

__all__ = [
    "RealInterval", "QuadraticUnit", "PrecisionExhausted", "LabelUnavailable", "PerfectSquare",
    "log_interval", "ln2_interval", "sqrt_interval", "ordered_real_roots", "LabeledRoot",
    "pell_fundamental_unit", "sextic_independence_scan", "sextic_quantity",
    "quartic_regulator_positive", "quartic_regulator", "cubic_independence_check", "cubic_regulator",
    "cubic_root_containments", "phi_root_labels", "quartic_positive_root_count",
]


class PrecisionExhausted(ArithmeticError):
    pass


class LabelUnavailable(ValueError):
    pass


class PerfectSquare(ValueError):
    pass


def _floor_scaled(x: Fraction, bits: int) -> int:
    return (x.numerator << bits) // x.denominator


def _ceil_scaled(x: Fraction, bits: int) -> int:
    return -((-x.numerator << bits) // x.denominator)


@dataclass(frozen=True)
class RealInterval:
    """Closed interval [lo, hi] with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "RealInterval":
        return cls(x, x)

    @staticmethod
    def _coerce(x) -> "RealInterval":
        return x if isinstance(x, RealInterval) else RealInterval.point(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def sign(self) -> int | None:
        """+1 or -1 when certified, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def inside(self, lo, hi) -> bool:
        """Certified lo < x < hi for every x in the interval."""
        return lo < self.lo and self.hi < hi

    def __add__(self, o):
        o = self._coerce(o)
        return RealInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo)

    def __sub__(self, o):
        o = self._coerce(o)
        return RealInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RealInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "RealInterval":
        if not self.excludes_zero():
            raise ZeroDivisionError("interval contains zero")
        return RealInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, o):
        return self * self._coerce(o).reciprocal()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.reciprocal()

    def square(self) -> "RealInterval":
        a = abs(self)
        return RealInterval(a.lo * a.lo, a.hi * a.hi)

    def __pow__(self, k: int):
        if k < 0:
            return (self ** -k).reciprocal()
        if k % 2 == 0:
            return RealInterval(min(abs(self.lo), abs(self.hi)) ** k if self.excludes_zero() else 0,
                                max(abs(self.lo), abs(self.hi)) ** k)
        return RealInterval(self.lo ** k, self.hi ** k)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealInterval(0, max(-self.lo, self.hi))

    def rounded(self, bits: int) -> "RealInterval":
        """Outward rounding to dyadic endpoints with the given fractional bits."""
        return RealInterval(Fraction(_floor_scaled(self.lo, bits), 1 << bits),
                            Fraction(_ceil_scaled(self.hi, bits), 1 << bits))

    def __repr__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


# ---------------------------------------------------------------------------
# logarithms

def _atanh_scaled(z_lo: int, z_hi: int, bits: int) -> tuple[int, int]:
    """Integers bracketing 2^bits * atanh(z) for z in [z_lo, z_hi] / 2^bits, 0 <= z <= 1/2."""
    two_b = 2 * bits
    lo, p, sq, j = 0, z_lo, z_lo * z_lo, 0
    while p:
        lo += p // (2 * j + 1)
        p = (p * sq) >> two_b
        j += 1
    hi, p, sq, j = 0, z_hi, z_hi * z_hi, 0
    while p > 1:
        hi += -(-p // (2 * j + 1))
        p = -(-(p * sq) >> two_b)
        j += 1
    # remaining tail: sum_{i>=j} z^(2i+1)/(2i+1) <= p / (1 - z^2) <= 2p with p <= 1
    return lo, hi + 2


_LN2_CACHE: dict[int, tuple[int, int]] = {}


def _ln2_scaled(bits: int) -> tuple[int, int]:
    if bits not in _LN2_CACHE:
        third = Fraction(1, 3)
        lo, hi = _atanh_scaled(_floor_scaled(third, bits), _ceil_scaled(third, bits), bits)
        _LN2_CACHE[bits] = (2 * lo, 2 * hi)
    return _LN2_CACHE[bits]


def ln2_interval(bits: int = 64) -> RealInterval:
    lo, hi = _ln2_scaled(bits)
    return RealInterval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))


def _log_scaled(x: Fraction, bits: int) -> tuple[int, int]:
    if x <= 0:
        raise ValueError("log of a non-positive number")
    if x == 1:
        return 0, 0
    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / (Fraction(2) ** k)
    if m < 1:
        k -= 1
        m *= 2
    z = (m - 1) / (m + 1)
    a_lo, a_hi = _atanh_scaled(_floor_scaled(z, bits), _ceil_scaled(z, bits), bits)
    l_lo, l_hi = _ln2_scaled(bits)
    if k >= 0:
        return k * l_lo + 2 * a_lo, k * l_hi + 2 * a_hi
    return k * l_hi + 2 * a_lo, k * l_lo + 2 * a_hi


def log_interval(x, bits: int = 64) -> RealInterval:
    """Enclosure of log over a positive interval (or of log of a positive rational)."""
    iv = x if isinstance(x, RealInterval) else RealInterval.point(x)
    if iv.lo <= 0:
        raise ValueError("log needs a positive interval")
    lo, _ = _log_scaled(iv.lo, bits)
    _, hi = _log_scaled(iv.hi, bits)
    return RealInterval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))


def sqrt_interval(D: int, bits: int = 64) -> RealInterval:
    s = math.isqrt(D << (2 * bits))
    hi = s if s * s == D << (2 * bits) else s + 1
    return RealInterval(Fraction(s, 1 << bits), Fraction(hi, 1 << bits))


# ---------------------------------------------------------------------------
# roots and labels

def _mobius_image(m, iv: RealInterval) -> RealInterval:
    pole = m.pole()
    if pole is not None and iv.lo <= pole <= iv.hi:
        raise PrecisionExhausted("root enclosure meets a pole of the conjugation map")
    a, b = m(iv.lo), m(iv.hi)
    return RealInterval(min(a, b), max(a, b))


@dataclass(frozen=True)
class LabeledRoot:
    label: str
    interval: RealInterval


def _root_above_one(f, width: Fraction) -> RealInterval:
    if count_real_roots(f, 1, None) != 1:
        raise LabelUnavailable("expected exactly one root above 1")
    for iv in isolate_real_roots(f):
        lo = max(iv.lo, Fraction(1))
        if iv.hi > 1 and count_real_roots(f, lo, iv.hi) == 1:
            r = refine_root(IsolatingInterval(lo, iv.hi, f), width=width)
            return RealInterval(r.lo, r.hi)
    raise LabelUnavailable("root above 1 not found")  # pragma: no cover


def _galois_roots(inst: FieldInstance, width: Fraction) -> list[RealInterval]:
    rho0 = _root_above_one(inst.f, width)
    return [_mobius_image(m, rho0) if i else rho0 for i, m in enumerate(CONJUGATE_TABLE[inst.family])]


def phi_root_labels(n: int) -> dict[str, tuple[Fraction, Fraction]]:
    """Sign-change intervals of phi_n in the large-n regime, with their reciprocals."""
    if n < 76:
        raise LabelUnavailable("phi_n interval labels need n >= 76")
    phi = phi_poly(n)
    F = Fraction
    base = {
        "rho0/rho3": (F(3 - n), F(4 - n)),
        "rho1/rho4": (F(-1), F(-9, 10)),
        "rho2/rho5": (F(1, n + 5), F(1, n + 4)),
    }
    out = {}
    for name, (a, b) in base.items():
        num, den = name.split("/")
        for lab, (lo, hi) in ((name, (a, b)), (f"{den}/{num}", (1 / b, 1 / a))):
            if phi(lo) * phi(hi) >= 0:
                raise LabelUnavailable(f"phi_{n} has no sign change on ({lo}, {hi})")
            out[lab] = (lo, hi)
    return out


def ordered_real_roots(inst: FieldInstance, width=Fraction(1, 1 << 40)) -> list[LabeledRoot]:
    """Real roots of f_n with conjugate labels.

    Cyclic families: rho_0 is the root above 1 and rho_i its Moebius images.
    Cubic: rho_0 < rho_1 < rho_2. For the sextic family with n >= 76 the ratio
    labels are also confirmed against the phi_n sign-change intervals.
    """
    fam, n = inst.family, inst.n
    if fam is Family.CUBIC:
        roots = isolate_real_roots(inst.f)
        if len(roots) != 3:
            raise LabelUnavailable("cubic is not totally real for this n")
        out = []
        for i, iv in enumerate(roots):
            r = refine_root(iv, width=width)
            out.append(LabeledRoot(f"rho{i}", RealInterval(r.lo, r.hi)))
        return out
    ivs = _galois_roots(inst, Fraction(width))
    out = [LabeledRoot(f"rho{i}", iv) for i, iv in enumerate(ivs)]
    if fam is Family.SEXTIC and n >= 76:
        labels = phi_root_labels(n)
        for name, (lo, hi) in labels.items():
            a, b = (int(s[3:]) for s in name.split("/"))
            ratio = ivs[a] / ivs[b]
            if not ratio.inside(lo, hi):
                raise LabelUnavailable(f"{name} not certified inside ({lo}, {hi})")
            out.append(LabeledRoot(name, ratio))
    return out


def cubic_root_containments(n: int, width=Fraction(1, 1 << 40)) -> dict[str, bool]:
    """Which candidate intervals certifiably contain the cubic roots."""
    inst = FieldInstance.make(Family.CUBIC, n)
    r0, r1, r2 = (lr.interval for lr in ordered_real_roots(inst, width))
    F = Fraction
    return {
        "rho0 in (1-n, 2-n)": r0.inside(1 - n, 2 - n),
        "rho1 in (-1-4/n, -1-1/n)": r1.inside(-1 - F(4, n), -1 - F(1, n)),
        "rho1 in (-1-3/n, -1-1/n)": r1.inside(-1 - F(3, n), -1 - F(1, n)),
        "rho2 in (1/(n+1), 1/n)": r2.inside(F(1, n + 1), F(1, n)),
    }


# ---------------------------------------------------------------------------
# Pell units

@dataclass(frozen=True)
class QuadraticUnit:
    """(x + y sqrt(D)) / 2 with x^2 - D y^2 = +-4."""

    x: int
    y: int
    D: int

    @property
    def norm(self) -> int:
        return (self.x * self.x - self.D * self.y * self.y) // 4

    def check(self) -> bool:
        return self.x * self.x - self.D * self.y * self.y in (4, -4) and self.x > 0 and self.y > 0

    def interval(self, bits: int = 64) -> RealInterval:
        return (self.x + self.y * sqrt_interval(self.D, bits)) / 2

    def log(self, bits: int = 64) -> RealInterval:
        return log_interval(self.interval(bits).rounded(bits), bits)

    def __mul__(self, o: "QuadraticUnit") -> "QuadraticUnit":
        if o.D != self.D:
            raise ValueError("different quadratic fields")
        x = (self.x * o.x + self.D * self.y * o.y) // 2
        y = (self.x * o.y + self.y * o.x) // 2
        return QuadraticUnit(x, y, self.D)


def pell_fundamental_unit(D: int) -> QuadraticUnit:
    """Fundamental unit (> 1) of Z[sqrt D], or of Z[(1 + sqrt D)/2] when D = 1 mod 4.

    Continued fraction of omega = sqrt(D) or (1 + sqrt(D))/2, run with exact
    (P + sqrt D)/Q states until the period closes.
    """
    if D <= 0:
        raise ValueError("D must be positive")
    if math.isqrt(D) ** 2 == D:
        raise PerfectSquare(f"{D} is a perfect square")
    s = math.isqrt(D)
    if D % 4 == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    h_prev, h = 0, 1      # convergent numerators h_{-2}, h_{-1}
    k_prev, k = 1, 0
    first = True
    while True:
        a = (P + s) // Q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if not first and Q == (2 if D % 4 == 1 else 1):
            break
        first = False
        P = a * Q - P
        Q = (D - P * P) // Q
    # the convergent before the period end gives the unit h_prev - k_prev*omega_conj
    hh, kk = h_prev, k_prev
    if D % 4 == 1:
        x, y = 2 * hh - kk, kk      # hh - kk*(1 - sqrt D)/2 = (2hh - kk + kk sqrt D)/2
    else:
        x, y = 2 * hh, 2 * kk
    u = QuadraticUnit(x, y, D)
    if not u.check():
        raise ArithmeticError(f"continued fraction did not produce a unit for D={D}")
    return u


# ---------------------------------------------------------------------------
# regulator quantities

def _log_abs(iv: RealInterval, bits: int) -> RealInterval:
    if not iv.excludes_zero():
        raise PrecisionExhausted("enclosure meets zero")
    return log_interval(abs(iv).rounded(bits + 8) if iv.width else abs(iv), bits)


def sextic_quantity(n: int, bits: int = 64) -> RealInterval:
    """log|rho1/rho4| log|rho3/rho0| - log^2|rho2/rho5| at the given precision."""
    check_admissible(Family.SEXTIC, n)
    inst = FieldInstance.make(Family.SEXTIC, n)
    r = _galois_roots(inst, Fraction(1, 1 << bits))
    a = _log_abs(r[1] / r[4], bits)
    b = _log_abs(r[3] / r[0], bits)
    c = _log_abs(r[2] / r[5], bits)
    return a * b - c.square()


def _escalate(fn, start_bits: int, budget: int):
    bits = start_bits
    last = None
    while bits <= budget:
        try:
            iv = fn(bits)
        except PrecisionExhausted as exc:
            last = str(exc)
        else:
            if iv.excludes_zero():
                return iv, bits
            last = f"enclosure {iv} still meets zero"
        bits *= 2
    raise PrecisionExhausted(last or "precision budget too small")


def sextic_independence_scan(n_range: Iterable[int], precision_budget: int = 1024,
                             jobs: int = 1) -> list[dict]:
    """Certify the 2x2 log quantity is nonzero for each admissible n in range."""
    ns = [n for n in n_range if n not in (0, 6, -6, 26, -26)]
    if jobs > 1 and len(ns) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_scan_one, ns, [precision_budget] * len(ns)))
    return [_scan_one(n, precision_budget) for n in ns]


def _scan_one(n: int, precision_budget: int) -> dict:
    rec: dict = {"n": n}
    try:
        iv, bits = _escalate(lambda b: sextic_quantity(n, b), 32, precision_budget)
    except PrecisionExhausted as exc:
        rec.update(certified=False, reason=str(exc))
        return rec
    rec.update(certified=True, sign=iv.sign(), lo=str(iv.lo), hi=str(iv.hi), bits=bits)
    if n >= 76:
        # -log(9/10) log(n-3) - log^2(n+4), the analytic upper bound
        bound = -log_interval(Fraction(9, 10), bits) * log_interval(n - 3, bits) - log_interval(n + 4, bits).square()
        rec["bound_chain"] = bool(bound.hi < 0 and iv.hi < 0)
        rec["labels"] = sorted(phi_root_labels(n))
    return rec


def quartic_regulator(n: int, bits: int = 64) -> RealInterval:
    """2 log(eps) (log^2 rho0 + log^2 rho1)."""
    check_admissible(Family.QUARTIC, n)
    inst = FieldInstance.make(Family.QUARTIC, n)
    eps = pell_fundamental_unit(n * n + 16)
    r = _galois_roots(inst, Fraction(1, 1 << bits))
    l0, l1 = _log_abs(r[0], bits), _log_abs(r[1], bits)
    return 2 * eps.log(bits) * (l0.square() + l1.square())


def quartic_regulator_positive(n: int, precision_budget: int = 1024) -> bool:
    iv, _ = _escalate(lambda b: quartic_regulator(n, b), 32, precision_budget)
    return iv.lo > 0


def cubic_regulator(n: int, bits: int = 64) -> RealInterval:
    """|log|mu0| log|rho1| - log|rho0| log|mu1|| before the absolute value."""
    inst = FieldInstance.make(Family.CUBIC, n)
    r0, r1, _ = (lr.interval for lr in ordered_real_roots(inst, Fraction(1, 1 << bits)))
    mu0 = (r0 + 1) ** 3 / (2 * r0)
    mu1 = (r1 + 1) ** 3 / (2 * r1)
    return _log_abs(mu0, bits) * _log_abs(r1, bits) - _log_abs(r0, bits) * _log_abs(mu1, bits)


def cubic_independence_check(n: int, precision_budget: int = 1024) -> bool:
    iv, _ = _escalate(lambda b: cubic_regulator(n, b), 32, precision_budget)
    return iv.excludes_zero()


def quartic_positive_root_count(n: int) -> int:
    return count_real_roots(defining_poly(Family.QUARTIC, n), 0, None)
