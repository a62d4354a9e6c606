# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""C kernels for dense polynomial arithmetic over GF(q), q < 2**31.

Same API and representation as ``_kernels_py``.
"""
from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

BACKEND = "cython"


cdef inline int64_t _inv(int64_t a, int64_t q):
    cdef int64_t t = 0, nt = 1, r = q, nr = a % q, tmp, quo
    while nr:
        quo = r // nr
        tmp = t - quo * nt; t = nt; nt = tmp
        tmp = r - quo * nr; r = nr; nr = tmp
    if t < 0:
        t += q
    return t


cdef list _to_list(int64_t* buf, Py_ssize_t n):
    while n > 0 and buf[n - 1] == 0:
        n -= 1
    return [buf[i] for i in range(n)]


def trim(list a):
    while a and not a[len(a) - 1]:
        a.pop()
    return a


def mp_mul(list a, list b, long long q):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    if na == 0 or nb == 0:
        return []
    cdef int64_t* x = <int64_t*> malloc(na * sizeof(int64_t))
    cdef int64_t* y = <int64_t*> malloc(nb * sizeof(int64_t))
    cdef int64_t* out = <int64_t*> malloc((na + nb - 1) * sizeof(int64_t))
    cdef int64_t xi
    try:
        for i in range(na):
            x[i] = a[i]
        for j in range(nb):
            y[j] = b[j]
        for i in range(na + nb - 1):
            out[i] = 0
        for i in range(na):
            xi = x[i]
            if xi:
                for j in range(nb):
                    out[i + j] = (out[i + j] + xi * y[j]) % q
        return _to_list(out, na + nb - 1)
    finally:
        free(x); free(y); free(out)


cdef tuple _divmod(list a, list b, int64_t q, bint want_quot):
    cdef Py_ssize_t na = len(a), nb = len(b), k, j, off
    if nb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if na < nb:
        return [], trim(list(a))
    cdef Py_ssize_t db = nb - 1
    cdef int64_t* r = <int64_t*> malloc(na * sizeof(int64_t))
    cdef int64_t* y = <int64_t*> malloc(nb * sizeof(int64_t))
    cdef int64_t* quo = <int64_t*> malloc((na - db) * sizeof(int64_t))
    cdef int64_t c, inv
    try:
        for k in range(na):
            r[k] = a[k]
        for j in range(nb):
            y[j] = b[j]
        inv = _inv(y[db], q)
        for k in range(na - db):
            quo[k] = 0
        for k in range(na - 1, db - 1, -1):
            c = r[k] % q
            if c:
                c = c * inv % q
                quo[k - db] = c
                off = k - db
                for j in range(db + 1):
                    r[off + j] = (r[off + j] - c * y[j]) % q
                    if r[off + j] < 0:
                        r[off + j] += q
        rem = _to_list(r, db)
        return (_to_list(quo, na - db) if want_quot else None), rem
    finally:
        free(r); free(y); free(quo)


def mp_divmod(list a, list b, long long q):
    return _divmod(a, b, q, True)


def mp_rem(list a, list b, long long q):
    return _divmod(a, b, q, False)[1]


def mp_mulmod(list a, list b, list m, long long q):
    return mp_rem(mp_mul(a, b, q), m, q)


def mp_powmod(list a, e, list m, long long q):
    result = [1] if len(m) > 1 else []
    base = mp_rem(a, m, q)
    while e:
        if e & 1:
            result = mp_mulmod(result, base, m, q)
        e >>= 1
        if e:
            base = mp_mulmod(base, base, m, q)
    return result


def mp_monic(list a, long long q):
    if not a:
        return []
    cdef int64_t inv = _inv(a[len(a) - 1], q)
    return [x * inv % q for x in a]


def mp_gcd(list a, list b, long long q):
    a, b = list(a), list(b)
    while b:
        a, b = b, mp_rem(a, b, q)
    return mp_monic(a, q)


def mp_eval(list a, long long x, long long q):
    cdef int64_t acc = 0, xx = x % q
    cdef Py_ssize_t i
    for i in range(len(a) - 1, -1, -1):
        acc = (acc * xx + <int64_t> a[i]) % q
    return acc
