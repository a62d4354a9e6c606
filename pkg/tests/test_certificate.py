import dataclasses
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from classforge.certificate import (
    BauerWitness, ClassOrderCertificate, IrreducibilityEvidence, MalformedCertificate, NonPowerEvidence,
    RamifiedData, parse, serialize, verify_certificate, verify_ideal_power, verify_nonpower,
    verify_residue_conditions,
)
from classforge.exactmath import Symbol
from classforge.family import Family
from classforge.search import run_search


@pytest.fixture(scope="module")
def certs():
    return {
        "sextic": run_search(Family.SEXTIC, 5),
        "quartic": run_search(Family.QUARTIC, 5),
        "cubic": run_search(Family.CUBIC, 5),
        "ramified": run_search(Family.SEXTIC, 5, q=13),
        "quartic35": run_search(Family.QUARTIC, 35),
    }


def test_all_search_outputs_valid(certs):
    for name, c in certs.items():
        v = verify_certificate(c)
        assert v, (name, v.reason)
        assert v.checks


def test_round_trip_is_exact(certs):
    for c in certs.values():
        data = serialize(c)
        back = parse(data)
        assert back == c
        assert serialize(back) == data
        assert parse(data.decode("ascii") + "\n") == c


def test_encoding_is_canonical(certs):
    data = serialize(certs["quartic"])
    obj = json.loads(data)
    assert data == json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    assert isinstance(obj["n"], str) and isinstance(obj["r"], str)
    assert obj["version"] == "1"
    assert sorted(obj) == sorted(["family", "r", "n", "y", "c_r", "bauer_witnesses", "ideal_factors",
                                  "nonpower_evidence", "ramified_q", "version"])


def _tweak(data: bytes, fn) -> bytes:
    obj = json.loads(data)
    fn(obj)
    return json.dumps(obj).encode()


@pytest.mark.parametrize("edit", [
    lambda o: o.update(extra="1"),
    lambda o: o.pop("y"),
    lambda o: o.update(n=5),
    lambda o: o.update(n="12a"),
    lambda o: o.update(version="2"),
    lambda o: o.update(family="quintic"),
    lambda o: o["bauer_witnesses"][0].update(color="red"),
    lambda o: o["bauer_witnesses"][0]["transcript"][0].__setitem__(1, "X"),
    lambda o: o["nonpower_evidence"][0].update(kind="oracle"),
    lambda o: o.update(ideal_factors={}),
])
def test_malformed_documents(certs, edit):
    with pytest.raises(MalformedCertificate):
        parse(_tweak(serialize(certs["quartic"]), edit))


def test_truncated_and_garbage(certs):
    data = serialize(certs["sextic"])
    for cut in (0, 1, len(data) // 2, len(data) - 1):
        with pytest.raises(MalformedCertificate):
            parse(data[:cut])
    with pytest.raises(MalformedCertificate):
        parse(b"\xff\xfe")
    with pytest.raises(MalformedCertificate):
        parse(b"[]")


def test_huge_integers_accepted(certs):
    c = certs["quartic35"]
    assert len(str(c.n)) > 300
    big = dataclasses.replace(c, n=10 ** 5000 + 1)
    assert parse(serialize(big)).n == 10 ** 5000 + 1


def test_cubic_n5_excluded():
    c = ClassOrderCertificate(Family.CUBIC, 1, 5, 37)
    v = verify_certificate(c)
    assert not v and "excluded prime 37 divides special value" in v.reason
    assert not verify_ideal_power(c)


def test_sextic_seven_divides_y(certs):
    c = certs["sextic"]
    v = verify_certificate(dataclasses.replace(c, y=c.y * 7))
    assert not v


def test_perturbations(certs):
    c = certs["cubic"]
    assert not verify_certificate(dataclasses.replace(c, n=c.n + 2))
    assert not verify_certificate(dataclasses.replace(c, r=7))
    assert not verify_certificate(dataclasses.replace(c, c_r=c.c_r + 6))
    f0 = c.ideal_factors[0]
    assert not verify_certificate(dataclasses.replace(
        c, ideal_factors=(dataclasses.replace(f0, exponent=f0.exponent + 5),) + c.ideal_factors[1:]))
    assert not verify_certificate(dataclasses.replace(c, ideal_factors=c.ideal_factors[1:]))


def test_residue_conditions(certs):
    q = certs["quartic"]
    assert verify_residue_conditions(q)
    assert {w.ell for w in q.bauer_witnesses} == {151, 41}
    w0 = q.bauer_witnesses[0]
    (b, s), *rest = w0.transcript
    flip = Symbol.RESIDUE if s is Symbol.NONRESIDUE else Symbol.NONRESIDUE
    bad = dataclasses.replace(q, bauer_witnesses=(dataclasses.replace(w0, transcript=((b, flip), *rest)),)
                              + q.bauer_witnesses[1:])
    assert not verify_residue_conditions(bad)

    cubic = certs["cubic"]
    missing = dataclasses.replace(cubic, bauer_witnesses=tuple(w for w in cubic.bauer_witnesses if w.role != "l3"))
    v = verify_certificate(missing)
    assert not v and "missing witness" in v.reason

    wrong_class = dataclasses.replace(q, bauer_witnesses=(BauerWitness(5, 43, w0.transcript, w0.role),)
                                      + q.bauer_witnesses[1:])
    assert not verify_residue_conditions(wrong_class)


def test_nonpower_evidence(certs):
    s = certs["sextic"]
    assert verify_nonpower(s)
    ev = next(e for e in s.nonpower_evidence if isinstance(e, NonPowerEvidence))
    others = tuple(e for e in s.nonpower_evidence if e is not ev)

    # a prime dividing the discriminant numerator is refused
    bad = dataclasses.replace(s, nonpower_evidence=(dataclasses.replace(ev, ell=3),) + others)
    v = verify_nonpower(bad)
    assert not v

    wrong_value = dataclasses.replace(ev, value=(ev.value + 1) % ev.ell)
    assert not verify_nonpower(dataclasses.replace(s, nonpower_evidence=(wrong_value,) + others))

    stripped = dataclasses.replace(s, nonpower_evidence=tuple(
        e for e in s.nonpower_evidence if not isinstance(e, NonPowerEvidence)))
    assert not verify_certificate(stripped)

    cubic = certs["cubic"]
    assert verify_nonpower(cubic)
    assert not verify_certificate(dataclasses.replace(cubic, nonpower_evidence=(ev,)))


def test_ramified_evidence_prime_message():
    # quartic n = 5: n^2 + 16 = 41 divides the discriminant and 41 = 1 mod 5
    c = ClassOrderCertificate(Family.QUARTIC, 5, 5, 1, nonpower_evidence=(NonPowerEvidence(5, 41, 0, 1),))
    v = verify_nonpower(c)
    assert not v and v.reason == "ramified evidence prime"


def test_irreducibility_evidence_is_rechecked(certs):
    s = certs["sextic"]
    fake = IrreducibilityEvidence(5, "mod_q", (2,), 0)
    v = verify_certificate(dataclasses.replace(s, nonpower_evidence=s.nonpower_evidence + (fake,)))
    assert not v


def test_ramified_checks(certs):
    c = certs["ramified"]
    assert c.ramified_q == RamifiedData(13, c.ramified_q.n0_mod_q2)
    d = c.n ** 2 + 108
    assert d % 13 == 0 and d % 169 != 0
    assert not verify_certificate(dataclasses.replace(c, ramified_q=RamifiedData(17, c.ramified_q.n0_mod_q2)))
    assert not verify_certificate(dataclasses.replace(c, ramified_q=RamifiedData(13, c.ramified_q.n0_mod_q2 + 1)))


def test_r1_is_vacuous():
    c = ClassOrderCertificate(Family.QUARTIC, 1, 1, -1, c_r=None)
    assert verify_nonpower(c)


@given(st.data())
def test_random_integer_mutation_never_valid(certs, data):
    c = certs["quartic"]
    raw = json.loads(serialize(c))
    paths = [("n",), ("y",), ("c_r",)]
    paths += [("bauer_witnesses", i, "ell") for i in range(len(raw["bauer_witnesses"]))]
    paths += [("ideal_factors", i, k) for i in range(len(raw["ideal_factors"])) for k in ("ell", "root", "exponent")]
    paths += [("nonpower_evidence", i, k) for i in range(len(raw["nonpower_evidence"]))
              for k in ("ell", "root", "value")]
    path = data.draw(st.sampled_from(paths))
    delta = data.draw(st.integers(-50, 50).filter(bool))
    node = raw
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = str(int(node[path[-1]]) + delta)
    try:
        mutated = parse(json.dumps(raw))
    except MalformedCertificate:
        return
    assert not verify_certificate(mutated), path


def test_residues_must_be_reduced(certs):
    c = certs["quartic"]
    f0 = min(c.ideal_factors, key=lambda f: f.ell)
    shifted = dataclasses.replace(f0, root=f0.root + f0.ell)
    rest = tuple(f for f in c.ideal_factors if f is not f0)
    v = verify_certificate(dataclasses.replace(c, ideal_factors=(shifted,) + rest))
    assert not v and "not reduced" in v.reason

    s = certs["sextic"]
    ev = next(e for e in s.nonpower_evidence if isinstance(e, NonPowerEvidence))
    others = tuple(e for e in s.nonpower_evidence if e is not ev)
    for bumped in (dataclasses.replace(ev, root=ev.root + ev.ell), dataclasses.replace(ev, value=ev.value + ev.ell)):
        assert not verify_nonpower(dataclasses.replace(s, nonpower_evidence=(bumped,) + others))
