import json
import random
from fractions import Fraction as F

import pytest

from flatiso import catalog, exprio
from flatiso.errors import DenominatorNotUnit, ParseError, SchemaError
from flatiso.ring import Ring


@pytest.fixture(scope="module")
def plain():
    return Ring(["2/7", "3/7", "1"])


def test_parse_basics(plain):
    t1, t2, t3 = plain.gens()
    assert exprio.parse_expr("t1*t3 + 2", plain) == t1 * t3 + 2
    assert exprio.parse_expr("3/4*t2^2", plain) == t2 ** 2 * F(3, 4)
    assert exprio.parse_expr("-t1^2", plain) == -(t1 ** 2)
    assert exprio.parse_expr("(t1+t2)^2", plain) == (t1 + t2) ** 2
    assert exprio.parse_expr(" 2 ^ 3 ^ 2 ", plain) == plain.const(512)
    assert exprio.parse_expr("(-2*t1^3*t2 + t2^3 + 12*t1*t3)/12", plain) == \
        (t1 ** 3 * t2 * (-2) + t2 ** 3 + t1 * t3 * 12) / 12


def test_parse_error_positions(plain):
    with pytest.raises(ParseError) as e:
        exprio.parse_expr("t1 + t2^t3", plain)
    assert e.value.position == 8
    assert "exponent" in str(e.value.expected)
    with pytest.raises(ParseError) as e:
        exprio.parse_expr("t1 + ", plain)
    with pytest.raises(ParseError) as e:
        exprio.parse_expr("t9", plain)
    with pytest.raises(ParseError) as e:
        exprio.parse_expr("t1 $ t2", plain)
    assert e.value.position == 3


def test_serialize_canonical(plain):
    t1, t2, t3 = plain.gens()
    assert exprio.format_elem(plain.zero()) == "0"
    assert exprio.format_elem(t1 * F(2, 4)) == "1/2*t1"
    two = exprio.parse_expr("2/4*t1", plain)
    assert exprio.format_elem(two) == "1/2*t1"
    # graded-lex, z greatest, descending
    e = t3 * t1 + t2 ** 3 - plain.const(5)
    assert exprio.format_elem(e) == "t2^3 + t1*t3 - 5"


def test_round_trip_catalog_entries():
    for entry_id in catalog.catalog_list():
        pvf = catalog.catalog_get(entry_id).pvf
        doc = exprio.serialize_pvf(pvf)
        again = exprio.parse_pvf(doc)
        assert exprio.serialize_pvf(again) == doc
        for a, b in zip(pvf.g, again.g):
            assert a.num == b.num and a.zden == b.zden and a.dden == b.dden


def test_round_trip_random(plain):
    rng = random.Random(42)
    for _ in range(50):
        e = plain.zero()
        for _ in range(rng.randrange(1, 5)):
            term = plain.const(F(rng.randrange(-9, 10) or 1, rng.randrange(1, 7)))
            for i in range(3):
                term = term * plain.var(i) ** rng.randrange(0, 4)
            e = e + term
        text = exprio.format_elem(e)
        assert exprio.parse_expr(text, plain) == e


def test_z_denominators_round_trip():
    pvf = catalog.catalog_get("LT19").pvf
    g1 = pvf.g[0]
    assert g1.zden == 1
    text = exprio.format_elem(g1)
    assert "/" in text
    assert exprio.parse_expr(text, pvf.ring) == g1


def test_denominator_restriction():
    pvf = catalog.catalog_get("H3p").pvf
    ring = pvf.ring
    # rel_z powers are accepted (what the serializer emits for derivatives)
    dz = ring.zgen().partial(1)
    text = exprio.format_elem(dz)
    assert exprio.parse_expr(text, ring) == dz
    with pytest.raises(DenominatorNotUnit):
        exprio.parse_expr("1/(t1 + t2)", ring)


def test_schema_errors():
    base = {"name": "x", "weights": ["1/2", "1"], "g": ["t1", "t2"]}
    exprio.parse_pvf(base)
    bad = dict(base, g=["t1", "t2", "t1"])
    with pytest.raises(SchemaError):
        exprio.parse_pvf(bad)
    with pytest.raises(SchemaError):
        exprio.parse_pvf(dict(base, weights=["1", "1/2"]))
    with pytest.raises(SchemaError):
        exprio.parse_pvf(dict(base, weights=["1/2", "3/2"]))  # last weight != 1
    with pytest.raises(SchemaError):
        exprio.parse_pvf(dict(base, weights=["1/3", "4/3"]))
    with pytest.raises(SchemaError):
        # integer weight difference
        exprio.parse_pvf({"name": "x", "weights": ["1/2", "3/2", "1"],
                          "g": ["t1", "t2", "t3"]})


def test_parse_pvf_json_text():
    doc = json.dumps({"name": "n2", "weights": ["1/2", "1"],
                      "g": ["t1*t2 + t1^3", "1/2*t2^2 + 3/4*t1^4"]})
    pvf = exprio.parse_pvf(doc)
    assert pvf.n == 2 and pvf.name == "n2"


def test_matrix_round_trip(plain):
    t1, t2, t3 = plain.gens()
    mat = [[t1, t2 ** 2], [plain.zero(), t3 / 2]]
    rows = exprio.serialize_matrix(mat)
    again = exprio.parse_matrix(rows, plain)
    for r1, r2 in zip(mat, again):
        for a, b in zip(r1, r2):
            assert a == b
    with pytest.raises(SchemaError):
        exprio.parse_matrix([["t1"], ["t1", "t2"]], plain)
