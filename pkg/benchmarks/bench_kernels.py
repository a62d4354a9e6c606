"""Compiled vs pure-Python GF(q) kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

Times the raw kernels on random dense polynomials, then the two end-to-end
paths that dominate a search: root finding for f_n modulo many primes and
the distinct-degree/equal-degree factorisation of script P.
"""
import argparse
import json
import random
import sys
import timeit
from unittest import mock

from classforge import _kernels_py as py
from classforge import exactmath as em
from classforge import polynomial
from classforge.family import Family, defining_poly_mod, script_P
from classforge.polynomial import factor_mod_q, roots_mod_q

try:
    from classforge import _kernels as cy
except ImportError:
    cy = None


def _rand_poly(rng, deg, q):
    return [rng.randrange(q) for _ in range(deg)] + [rng.randrange(1, q)]


def raw_cases(rng):
    q = 2 ** 31 - 1
    a, b = _rand_poly(rng, 200, q), _rand_poly(rng, 200, q)
    ab = py.mp_mul(a, b, q)
    m = _rand_poly(rng, 60, q)
    x = _rand_poly(rng, 59, q)
    return {
        "mp_mul deg 200": lambda k: k.mp_mul(a, b, q),
        "mp_divmod 400/60": lambda k: k.mp_divmod(ab, m, q),
        "mp_powmod deg 60, e=q": lambda k: k.mp_powmod(x, q, m, q),
        "mp_gcd deg 200": lambda k: k.mp_gcd(a, b, q),
    }


def end_to_end_cases():
    primes = [p for p in em.primes_up_to(20000) if p > 7][:400]
    sextic = [(p, defining_poly_mod(Family.SEXTIC, 10, p)) for p in primes]
    P = script_P(Family.SEXTIC, 35)

    def roots(_):
        for p, f in sextic:
            roots_mod_q(f, p)

    return {
        "roots of f_10 mod 400 primes": roots,
        "factor script P (deg 70) mod 10007": lambda _: factor_mod_q(P, 10007),
    }


def time_case(fn, backend, repeat, patch_polynomial):
    def run():
        fn(backend)

    if patch_polynomial:
        with mock.patch.object(polynomial, "backend_for", lambda q: backend):
            return min(timeit.repeat(run, number=1, repeat=repeat))
    return min(timeit.repeat(run, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1

    rng = random.Random(args.seed)
    rows = []
    for patch, cases in ((False, raw_cases(rng)), (True, end_to_end_cases())):
        for name, fn in cases.items():
            t_py = time_case(fn, py, args.repeat, patch)
            t_cy = time_case(fn, cy, args.repeat, patch)
            rows.append({"case": name, "python_s": t_py, "cython_s": t_cy, "speedup": t_py / t_cy})

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        width = max(len(r["case"]) for r in rows)
        print(f"{'case':<{width}}  {'python':>10}  {'cython':>10}  speedup")
        for r in rows:
            print(f"{r['case']:<{width}}  {r['python_s'] * 1e3:8.2f}ms  {r['cython_s'] * 1e3:8.2f}ms"
                  f"  {r['speedup']:6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
