"""The compiled and Python kernels must agree bit for bit."""
import importlib
import json
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from classforge import _kernels_py as py
from classforge import kernels

try:
    from classforge import _kernels as cy
except ImportError:  # pragma: no cover - extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled kernels not built")

PRIMES = [2, 3, 5, 13, 65537, 2 ** 31 - 1]


@st.composite
def poly_pair(draw):
    q = draw(st.sampled_from(PRIMES))
    coeff = st.integers(0, q - 1)
    a = draw(st.lists(coeff, min_size=0, max_size=12))
    b = draw(st.lists(coeff, min_size=1, max_size=8))
    b[-1] = b[-1] or 1
    return py.trim(a), py.trim(b), q


@needs_ext
@given(poly_pair())
def test_mul_divmod_gcd_agree(args):
    a, b, q = args
    assert cy.mp_mul(a, b, q) == py.mp_mul(a, b, q)
    assert cy.mp_divmod(a, b, q) == py.mp_divmod(a, b, q)
    assert cy.mp_rem(a, b, q) == py.mp_rem(a, b, q)
    assert cy.mp_gcd(a, b, q) == py.mp_gcd(a, b, q)
    assert cy.mp_monic(b, q) == py.mp_monic(b, q)


@needs_ext
@given(poly_pair(), st.integers(0, 10 ** 6))
def test_powmod_eval_agree(args, e):
    a, m, q = args
    if len(m) < 2:
        m = [1, 1]
    assert cy.mp_powmod(a, e, m, q) == py.mp_powmod(a, e, m, q)
    assert cy.mp_mulmod(a, a, m, q) == py.mp_mulmod(a, a, m, q)
    x = e % q
    assert cy.mp_eval(a, x, q) == py.mp_eval(a, x, q)


@given(poly_pair())
def test_divmod_identity(args):
    a, b, q = args
    quo, rem = py.mp_divmod(a, b, q)
    back = py.trim([(x + y) % q for x, y in _pad(py.mp_mul(quo, b, q), rem)])
    assert back == a
    assert len(rem) < len(b)


def _pad(u, v):
    n = max(len(u), len(v))
    return zip(u + [0] * (n - len(u)), v + [0] * (n - len(v)))


def test_backend_selection():
    if cy is not None:
        assert kernels.BACKEND == "cython"
        assert kernels.backend_for(101) is cy
    assert kernels.backend_for(2 ** 61 - 1) is py


def test_pure_python_switch():
    env = dict(os.environ, CLASSFORGE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import classforge.kernels as k; print(k.BACKEND, k.backend_for(7).BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.split() == ["python", "python"]


def test_results_identical_across_backends():
    script = (
        "from classforge.search import run_search, SearchConfig\n"
        "from classforge.certificate import serialize\n"
        "import sys; sys.stdout.buffer.write(serialize(run_search('quartic', 7)))"
    )
    outs = []
    for flag in ("", "1"):
        env = dict(os.environ)
        env.pop("CLASSFORGE_PURE_PYTHON", None)
        if flag:
            env["CLASSFORGE_PURE_PYTHON"] = flag
        outs.append(subprocess.run([sys.executable, "-c", script], env=env,
                                   capture_output=True, check=True).stdout)
    assert outs[0] == outs[1] and outs[0]


def test_reload_is_harmless():
    importlib.reload(kernels)
    assert kernels.backend_for(5).mp_mul([1, 1], [1, 1], 5) == [1, 2, 1]


@needs_ext
def test_benchmark_script_runs():
    bench = os.path.join(os.path.dirname(__file__), os.pardir, "benchmarks", "bench_kernels.py")
    out = subprocess.run([sys.executable, bench, "--repeat", "1", "--json"], capture_output=True, text=True,
                         check=True)
    rows = json.loads(out.stdout)
    assert {"mp_mul deg 200", "factor script P (deg 70) mod 10007"} <= {r["case"] for r in rows}
    assert all(r["python_s"] > 0 and r["cython_s"] > 0 for r in rows)
