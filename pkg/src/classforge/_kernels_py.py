"""Pure-Python kernels for dense polynomial arithmetic over GF(q).

Polynomials are lists of ints in [0, q), ascending degree, with no trailing
zeros ([] is the zero polynomial). ``_kernels.pyx`` implements the same API
in C for q < 2**31.
"""

BACKEND = "python"


def trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def mp_mul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % q for c in out])


def mp_divmod(a, b, q):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r)
    inv = pow(b[-1], -1, q)
    quot = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] % q
        if c:
            c = c * inv % q
            quot[k - db] = c
            off = k - db
            for j in range(db + 1):
                r[off + j] -= c * b[j]
    rem = [x % q for x in r[:db]]
    return trim(quot), trim(rem)


def mp_rem(a, b, q):
    return mp_divmod(a, b, q)[1]


def mp_mulmod(a, b, m, q):
    return mp_rem(mp_mul(a, b, q), m, q)


def mp_powmod(a, e, m, q):
    result = [1] if len(m) > 1 else []
    base = mp_rem(a, m, q)
    while e:
        if e & 1:
            result = mp_mulmod(result, base, m, q)
        e >>= 1
        if e:
            base = mp_mulmod(base, base, m, q)
    return result


def mp_monic(a, q):
    if not a:
        return []
    inv = pow(a[-1], -1, q)
    return [x * inv % q for x in a]


def mp_gcd(a, b, q):
    a, b = list(a), list(b)
    while b:
        a, b = b, mp_rem(a, b, q)
    return mp_monic(a, q)


def mp_eval(a, x, q):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % q
    return acc
