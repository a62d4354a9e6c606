"""Exact integer arithmetic: modular powers and inverses, CRT, primality,
factorization and p-th power residue symbols.

All functions are pure and operate on Python ints.
"""
from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "ArithmeticFailure", "NotInvertible", "ModuliNotCoprime", "FactorizationTimeout",
    "SharedFactor", "ResidueClass", "Symbol", "mod_pow", "inv_mod", "crt", "is_prime",
    "factorize", "power_residue_symbol", "next_prime", "primes_up_to", "integer_nth_root",
    "is_square", "TRIAL_DIVISION_BOUND", "DEFAULT_FACTOR_BUDGET", "int_to_decimal", "decimal_to_int",
]

# Trial division covers every prime below this bound before Pollard rho starts.
TRIAL_DIVISION_BOUND = 10_000
DEFAULT_FACTOR_BUDGET = 2_000_000

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Miller-Rabin with the bases above (primes to 41) is exact below 3.3e24.
_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_EXTRA_BASES = 40


class ArithmeticFailure(ArithmeticError):
    pass


class NotInvertible(ArithmeticFailure):
    pass


class ModuliNotCoprime(ArithmeticFailure):
    pass


class FactorizationTimeout(ArithmeticFailure):
    """Pollard rho ran out of budget; the caller may retry with a larger one."""


class SharedFactor(ArithmeticFailure):
    pass


@dataclass(frozen=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if not 0 <= self.value < self.modulus:
            raise ValueError("value must lie in [0, modulus)")

    def __int__(self):
        return self.value


class Symbol(enum.Enum):
    RESIDUE = "R"
    NONRESIDUE = "N"

    @classmethod
    def parse(cls, text: str) -> "Symbol":
        t = text.strip().upper()
        if t in ("R", "RESIDUE", "1"):
            return cls.RESIDUE
        if t in ("N", "NR", "NONRESIDUE"):
            return cls.NONRESIDUE
        raise ValueError(f"unknown residue symbol {text!r}")


def mod_pow(base: int, exp: int, modulus: int) -> ResidueClass:
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return ResidueClass(pow(base, exp, modulus), modulus)


def inv_mod(a: int, modulus: int) -> ResidueClass:
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(a, modulus) != 1:
        raise NotInvertible(f"{a} is not invertible modulo {modulus}")
    return ResidueClass(pow(a, -1, modulus), modulus)


def crt(pairs: Iterable[tuple[int, int]]) -> ResidueClass:
    """Combine (residue, modulus) pairs with pairwise coprime moduli."""
    x, m = 0, 1
    for r, mod in pairs:
        if mod < 1:
            raise ValueError("moduli must be positive")
        if math.gcd(m, mod) != 1:
            raise ModuliNotCoprime(f"modulus {mod} shares a factor with {m}")
        # x + m*t == r (mod mod)
        t = ((r - x) * pow(m, -1, mod)) % mod if mod > 1 else 0
        x, m = x + m * t, m * mod
    if m == 1:
        raise ValueError("crt needs a modulus >= 2")
    return ResidueClass(x % m, m)


def _sprp(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(m: int) -> bool:
    """Miller-Rabin: exact below 3.3e24 (fixed prime bases 2..41).

    Above that, 40 extra bases drawn from a PRNG seeded by ``m`` are used, so the
    answer is reproducible; a composite survives with probability below 4**-52.
    """
    if m < 2:
        return False
    for p in _SMALL_PRIMES:
        if m % p == 0:
            return m == p
    if not all(_sprp(m, a) for a in _SMALL_PRIMES):
        return False
    if m < _DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(m)
    return all(_sprp(m, rng.randrange(2, m - 1)) for _ in range(_EXTRA_BASES))


def next_prime(m: int) -> int:
    """Smallest prime strictly greater than m."""
    c = max(m + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


_TRIAL_PRIMES = primes_up_to(TRIAL_DIVISION_BOUND)


def _brent(n: int, c: int, budget: int) -> tuple[int, int]:
    """One Pollard-Brent run; returns (factor or 0, iterations spent)."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    spent = 0
    m = 128
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        spent += r
        r *= 2
        if spent > budget:
            return 0, spent
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return (0 if g == n else g), spent


def _split(n: int, budget: list[int]) -> int:
    for c in range(1, 64):
        d, spent = _brent(n, c, budget[0])
        budget[0] -= spent
        if d:
            return d
        if budget[0] <= 0:
            break
    raise FactorizationTimeout(f"could not split {n} within budget")


def factorize(m: int, budget: int = DEFAULT_FACTOR_BUDGET) -> dict[int, int]:
    """Complete factorization of |m| as {prime: exponent}, primes ascending.

    Trial division to TRIAL_DIVISION_BOUND, then Pollard-Brent with ``budget``
    total iterations. Raises FactorizationTimeout instead of returning a
    partial answer.
    """
    if m == 0:
        raise ValueError("cannot factor 0")
    n = abs(m)
    out: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    stack = [n] if n > 1 else []
    remaining = [budget]
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_prime(c):
            out[c] = out.get(c, 0) + 1
            continue
        r = integer_nth_root(c, 2)
        if r * r == c:
            stack += [r, r]
            continue
        d = _split(c, remaining)
        stack += [d, c // d]
    return dict(sorted(out.items()))


def integer_nth_root(a: int, k: int) -> int:
    """floor(a ** (1/k)) for a >= 0."""
    if a < 0:
        raise ValueError("negative radicand")
    if a < 2 or k == 1:
        return a
    if k == 2:
        return math.isqrt(a)
    x = 1 << -(-a.bit_length() // k)
    while True:
        y = ((k - 1) * x + a // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > a:
        x -= 1
    while (x + 1) ** k <= a:
        x += 1
    return x


def is_square(a: int) -> bool:
    return a >= 0 and math.isqrt(a) ** 2 == a


def power_residue_symbol(a: int, ell: int, p: int) -> Symbol:
    """Whether a is a p-th power modulo the prime ell.

    When p does not divide ell - 1 every unit is a p-th power.
    """
    if a % ell == 0:
        raise SharedFactor(f"{ell} divides {a}")
    if (ell - 1) % p:
        return Symbol.RESIDUE
    return Symbol.RESIDUE if pow(a, (ell - 1) // p, ell) == 1 else Symbol.NONRESIDUE


# Python refuses int <-> str conversions beyond a few thousand digits by
# default; certificates can carry larger integers, so split the work.
_DEC_CHUNK = 4000


def int_to_decimal(x: int) -> str:
    if x < 0:
        return "-" + int_to_decimal(-x)
    if x.bit_length() < 3 * _DEC_CHUNK:
        return str(x)
    k = (x.bit_length() * 30103 // 100000) // 2
    hi, lo = divmod(x, 10 ** k)
    return int_to_decimal(hi) + int_to_decimal(lo).rjust(k, "0")


def decimal_to_int(s: str) -> int:
    """Parse an optionally signed run of ASCII digits, of any length."""
    if not isinstance(s, str):
        raise ValueError("expected a decimal string")
    neg = s.startswith("-")
    body = s[1:] if neg else s
    if not body or not body.isascii() or not body.isdigit():
        raise ValueError(f"not a decimal integer: {s[:40]!r}")
    if len(body) <= _DEC_CHUNK:
        v = int(body)
    else:
        k = len(body) // 2
        v = decimal_to_int(body[:-k]) * 10 ** k + decimal_to_int(body[-k:])
    return -v if neg else v
