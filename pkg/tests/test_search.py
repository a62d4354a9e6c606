import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from classforge import exactmath as em
from classforge.certificate import ROLE_CONDITIONS, ResidueCondition, verify_certificate
from classforge.exactmath import Symbol
from classforge.family import CongruenceViolated, Family, ParityViolated, script_P, special_value
from classforge.search import (
    BoundExhausted, PrimeInadmissible, SearchConfig, SearchExhausted, build_cr, construct_y_n,
    find_bauer_prime, find_ramified_prime, gather_nonpower_evidence, parse_conditions, ramified_prime_setup,
    run_search,
)

from oracles import pth_powers

R, N = Symbol.RESIDUE, Symbol.NONRESIDUE


def brute_bauer(p, conds, avoid, bound=20000):
    for ell in range(p + 1, bound, p):
        if ell % p != 1 or ell in avoid or ell in conds or not sympy.isprime(ell):
            continue
        powers = pth_powers(ell, p)
        if all((b % ell in powers) == (s is R) for b, s in conds.items()):
            return ell
    return None


@pytest.mark.parametrize("p,conds,avoid,expected", [
    (5, {37: N}, {2, 3, 37, 47}, 11),
    (5, {2: R, 3: N}, {2, 3, 5}, 151),
    (5, {3: R, 2: N}, {2, 3, 5}, 41),
])
def test_bauer_prime_examples(p, conds, avoid, expected):
    w = find_bauer_prime(p, [ResidueCondition(b, s) for b, s in conds.items()], avoid)
    assert w.ell == expected == brute_bauer(p, conds, avoid)
    assert dict(w.transcript) == conds


@given(st.sampled_from([3, 5, 7, 11]), st.sampled_from(["2:R", "2:N", "2:R,3:N", "3:R,5:N", "2:N,3:N,5:R"]),
       st.integers(0, 300))
def test_bauer_prime_matches_brute_force(p, text, floor):
    conds = parse_conditions(text)
    if any(c.base == p for c in conds):
        return
    w = find_bauer_prime(p, conds, floor=floor, bound=20000)
    assert w.ell > floor and w.ell % p == 1
    ref = brute_bauer(p, {c.base: c.requirement for c in conds}, set(range(floor + 1)))
    assert w.ell == ref


def test_bauer_prime_failures():
    with pytest.raises(BoundExhausted):
        find_bauer_prime(5, parse_conditions("2:R,3:N"), bound=100)
    with pytest.raises(ValueError):
        find_bauer_prime(6, parse_conditions("2:R"))
    with pytest.raises(ValueError):
        parse_conditions("2:R,2:N")
    with pytest.raises(ValueError):
        parse_conditions("2:Q")
    assert parse_conditions(" 2:R , 3:N ,") == [ResidueCondition(2, R), ResidueCondition(3, N)]


def test_build_cr_quartic_with_q():
    c_r, ws = build_cr(Family.QUARTIC, 5, q=13)
    assert c_r == 68101
    assert [w.ell for w in ws] == [151, 41]
    assert c_r % 6 == 1 and c_r % 13 and c_r % 5


@pytest.mark.parametrize("fam,r", [(Family.SEXTIC, 5), (Family.SEXTIC, 7), (Family.SEXTIC, 35),
                                   (Family.QUARTIC, 7), (Family.CUBIC, 5), (Family.CUBIC, 4)])
def test_build_cr_classes(fam, r):
    c_r, ws = build_cr(fam, r)
    if fam is Family.SEXTIC:
        assert pow(c_r, r, 30) == pow(7, 1 - r, 30) and c_r % 7
    else:
        assert c_r % 6 == 1
    primes_of_r = sorted(em.factorize(r))
    assert len(ws) == len(primes_of_r) * len(ROLE_CONDITIONS[fam])
    for w in ws:
        assert c_r % w.ell == 0
        assert brute_bauer(w.p, dict(w.transcript), set()) is not None
        powers = pth_powers(w.ell, w.p)
        assert all((b % w.ell in powers) == (s is R) for b, s in w.transcript)
    assert len({w.ell for w in ws}) == len(ws)


def test_construct_y_n():
    y, n = construct_y_n(Family.QUARTIC, 5, 68101, m=0)
    assert y == -68101 and (y ** 5 + 7) % 6 == 0
    assert special_value(Family.QUARTIC, n) == y ** 5

    c_r, _ = build_cr(Family.SEXTIC, 5)
    hits = 0
    for m in range(-6, 7):
        try:
            y, n = construct_y_n(Family.SEXTIC, 5, c_r, m=m)
        except CongruenceViolated:  # 7 divides y for this m
            continue
        assert pow(y, 5, 30) == 7 and n % 4 == 2 and y % 7
        assert special_value(Family.SEXTIC, n) == y ** 5
        hits += 1
    assert hits >= 8

    c_r, _ = build_cr(Family.CUBIC, 5)
    hits = 0
    for m in range(0, 12):
        try:
            y, n = construct_y_n(Family.CUBIC, 5, c_r, m=m)
        except (CongruenceViolated, ParityViolated):
            continue
        assert n % 2 == 1 and n >= 5 and special_value(Family.CUBIC, n) == y ** 5
        hits += 1
    assert hits >= 6
    with pytest.raises(ValueError):
        construct_y_n(Family.CUBIC, 5, c_r, m=-1)


def test_ramified_setup():
    s = ramified_prime_setup(Family.SEXTIC, 1, 13)
    assert s.splits and s.q == 13
    assert (s.n0 ** 2 + 108) % 13 == 0 and (s.n0 ** 2 + 108) % 169
    assert pow(s.b0, 1, 169) == special_value(Family.SEXTIC, s.n0) % 169
    s5 = ramified_prime_setup(Family.SEXTIC, 5, 13)
    assert not s5.splits
    assert pow(s5.b0, 5, 169) == special_value(Family.SEXTIC, s5.n0) % 169
    with pytest.raises(PrimeInadmissible):
        ramified_prime_setup(Family.SEXTIC, 5, 7)
    with pytest.raises(PrimeInadmissible):
        ramified_prime_setup(Family.QUARTIC, 5, 5)
    with pytest.raises(PrimeInadmissible):
        ramified_prime_setup(Family.SEXTIC, 5, 15)
    with pytest.raises(PrimeInadmissible):
        ramified_prime_setup(Family.CUBIC, 5, 13)


def sympy_splits(f, q):
    x = sympy.Symbol("x")
    poly = sympy.Poly([int(c) for c in reversed(f.coeffs)], x, modulus=q)
    if poly.degree() < f.degree:
        return False
    return all(g.degree() == 1 for g, _ in poly.factor_list()[1])


@pytest.mark.parametrize("fam,r", [(Family.SEXTIC, 5), (Family.SEXTIC, 1), (Family.QUARTIC, 5),
                                   (Family.QUARTIC, 3)])
def test_find_ramified_prime_against_sympy(fam, r):
    q = find_ramified_prime(fam, r)
    bad = (210 if fam is Family.SEXTIC else 30) * r
    P = script_P(fam, r)
    ref = next(p for p in sympy.primerange(2, 10 ** 6) if bad % p and sympy_splits(P, p))
    assert q == ref


def test_nonpower_evidence_gathering():
    c_r, _ = build_cr(Family.SEXTIC, 5)
    _, n = construct_y_n(Family.SEXTIC, 5, c_r)
    ev = gather_nonpower_evidence(Family.SEXTIC, n, 5, count=3)
    assert len(ev) == 3
    for e in ev:
        assert e.ell % 5 == 1 and e.value not in pth_powers(e.ell, 5) and 0 <= e.root < e.ell
    assert gather_nonpower_evidence(Family.QUARTIC, 5, 5, scan_bound=10) == []


def test_config_parsing(tmp_path):
    assert SearchConfig.from_mapping({"m_max": "9", "jobs": "2"}) == SearchConfig(m_max=9, jobs=2)
    with pytest.raises(ValueError):
        SearchConfig.from_mapping({"bogus": "1"})
    with pytest.raises(ValueError):
        SearchConfig(m_max=0)
    with pytest.raises(ValueError):
        SearchConfig.from_mapping({"scan_bound": "ten"})
    path = tmp_path / "search.conf"
    path.write_text("# tuned\nm_max = 12\n\nscan_bound=5000  # small\n")
    assert SearchConfig.from_file(str(path)) == SearchConfig(m_max=12, scan_bound=5000)
    path.write_text("m_max 12\n")
    with pytest.raises(ValueError):
        SearchConfig.from_file(str(path))


def test_run_search_parallel_matches_serial():
    serial = run_search(Family.QUARTIC, 5)
    parallel = run_search(Family.QUARTIC, 5, SearchConfig(jobs=2))
    assert serial == parallel
    assert verify_certificate(parallel)


def test_run_search_failures():
    with pytest.raises(PrimeInadmissible):
        run_search(Family.CUBIC, 5, q=13)
    with pytest.raises((SearchExhausted, BoundExhausted)):
        run_search(Family.SEXTIC, 5, SearchConfig(scan_bound=50))


def test_ramified_search_certificate():
    c = run_search(Family.QUARTIC, 5, q=13)
    assert c.ramified_q.q == 13 and verify_certificate(c)
    d = c.n ** 2 + 16
    assert d % 13 == 0 and d % 169
    assert c.n % 169 == c.ramified_q.n0_mod_q2
