from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from classforge.polynomial import (
    IntPoly, Irreducible, IsolatingInterval, LeadingCoefficientVanishes, ModPoly, NotSquarefree, RatPoly,
    Reducible, X, check_irreducibility_evidence, compose_power, count_real_roots, discriminant,
    eisenstein_check, factor_mod_q, irreducibility_over_Q, isolate_real_roots, refine_root, resultant,
    roots_mod_q, splits_linearly_mod, sturm_sequence,
)

from oracles import brute_roots_mod, sylvester_discriminant, sylvester_resultant

x = sympy.Symbol("x")
small = st.integers(-30, 30)


def int_poly(min_deg=1, max_deg=6):
    return st.lists(small, min_size=min_deg + 1, max_size=max_deg + 1).filter(lambda c: c[-1] != 0)


def to_sympy(f):
    return sympy.Poly([int(c) for c in reversed(f.coeffs)], x)


@given(int_poly(0, 6), int_poly(0, 5))
def test_resultant_matches_sylvester(a, b):
    assert resultant(IntPoly(a), IntPoly(b)) == sylvester_resultant(a, b)


@given(int_poly(1, 7))
def test_discriminant_matches_oracles(c):
    f = IntPoly(c)
    d = discriminant(f)
    assert d == sylvester_discriminant(c)
    assert d == sympy.discriminant(to_sympy(f))


def test_rational_coefficients():
    f = RatPoly([Fraction(1, 2), Fraction(-3, 4), 1])
    g = RatPoly([Fraction(2, 3), 1])
    assert resultant(f, g) == sylvester_resultant(f.coeffs, g.coeffs)
    assert discriminant(f) == sylvester_discriminant(f.coeffs)


@given(int_poly(0, 5), int_poly(0, 5), int_poly(1, 4))
def test_ring_laws(a, b, c):
    fa, fb, fc = IntPoly(a), IntPoly(b), IntPoly(c)
    assert (fa + fb) * fc == fa * fc + fb * fc
    q, r = divmod(fa * fb, fc)
    assert q * fc + r == fa * fb and r.degree < fc.degree
    assert (fa * fb)(Fraction(3, 7)) == fa(Fraction(3, 7)) * fb(Fraction(3, 7))
    assert fa.shift(2)(Fraction(1, 3)) == fa(Fraction(7, 3))


@given(int_poly(1, 5), st.integers(1, 6))
def test_compose_power(c, r):
    f = IntPoly(c)
    g = compose_power(f, r)
    assert g.degree == r * f.degree
    assert g(Fraction(2, 3)) == f(Fraction(2, 3) ** r)


@st.composite
def mod_poly(draw):
    q = draw(st.sampled_from([2, 3, 5, 7, 13, 101]))
    c = draw(st.lists(st.integers(0, q - 1), min_size=2, max_size=9))
    c[-1] = c[-1] or 1
    return c, q


@given(mod_poly())
def test_factor_mod_q_matches_sympy(args):
    c, q = args
    fac = factor_mod_q(ModPoly(c, q), q)
    _, ref = sympy.Poly(list(reversed(c)), x, modulus=q).factor_list()
    ours = sorted((g.degree, e) for g, e in fac.factors)
    theirs = sorted((p.degree(), e) for p, e in ref)
    assert ours == theirs
    assert fac.product() == ModPoly(c, q)


@given(mod_poly())
def test_roots_mod_q_brute(args):
    c, q = args
    assert roots_mod_q(ModPoly(c, q), q) == brute_roots_mod(c, q)


def test_roots_and_splitting_examples():
    assert roots_mod_q(IntPoly([625, 14, 1]), 13) == [3, 9]
    assert splits_linearly_mod(IntPoly([117649, 286, 1]), 13)
    assert not splits_linearly_mod(IntPoly([1, 0, 1]), 7)
    with pytest.raises(LeadingCoefficientVanishes):
        factor_mod_q(IntPoly([1, 1, 7]), 7)


@given(st.lists(st.integers(-12, 12), min_size=1, max_size=5, unique=True), st.integers(1, 3))
def test_sturm_counts_match_sympy(roots, k):
    f = IntPoly([1])
    for r in roots:
        f = IntPoly.of(f * (X * k - r))
    f = IntPoly.of(f * (X * X + 1))
    real = sorted(sympy.Poly(to_sympy(f)).real_roots())
    assert count_real_roots(f) == len(real)
    assert count_real_roots(f, 0, None) == sum(1 for r in real if r > 0)
    ivs = isolate_real_roots(f)
    assert len(ivs) == len(real)
    for iv, r in zip(ivs, real):
        assert iv.lo < r <= iv.hi
        fine = refine_root(iv, Fraction(1, 10 ** 6))
        assert fine.hi - fine.lo <= Fraction(1, 10 ** 6)
        assert fine.lo <= r <= fine.hi


def test_isolation_irrational_roots():
    f = IntPoly([-2, 0, 0, 1])            # cube root of 2
    (iv,) = isolate_real_roots(f)
    iv = refine_root(iv, Fraction(1, 2 ** 50))
    assert iv.lo ** 3 < 2 < iv.hi ** 3
    assert len(sturm_sequence(f)) >= 2
    with pytest.raises(NotSquarefree):
        isolate_real_roots(IntPoly.of((X - 1) ** 2))
    assert IsolatingInterval(Fraction(0), Fraction(1)).contains(-1, 2)


def test_irreducibility_verdicts():
    red = IntPoly.of((X * X - 2) * (X * X + X + 1))
    # one-sided: a product of quadratics without rational roots is never called irreducible
    assert not isinstance(irreducibility_over_Q(red), Irreducible)
    assert isinstance(irreducibility_over_Q(IntPoly.of((X - 3) * (X * X + 5))), Reducible)
    # X^4 + 1 splits modulo every prime; only the shifted Eisenstein test proves it
    v = irreducibility_over_Q(IntPoly([1, 0, 0, 0, 1]))
    assert isinstance(v, Irreducible) and v.method == "eisenstein" and v.shift != 0
    assert check_irreducibility_evidence(IntPoly([1, 0, 0, 0, 1]), v)
    assert not check_irreducibility_evidence(red, Irreducible("mod_q", (5,)))


@given(int_poly(2, 6))
def test_irreducibility_agrees_with_sympy(c):
    f = IntPoly(c)
    assume(IntPoly.of(f).content() == 1)
    v = irreducibility_over_Q(f)
    sym_irred = sympy.Poly(to_sympy(f)).is_irreducible
    if isinstance(v, Irreducible):
        assert sym_irred
        assert check_irreducibility_evidence(f, v)
    elif isinstance(v, Reducible):
        assert not sym_irred


def test_eisenstein():
    assert eisenstein_check(IntPoly([2, 4, 6, 1]), 2)
    assert not eisenstein_check(IntPoly([4, 2, 1]), 2)
