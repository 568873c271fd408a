import copy
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factories import random_setup
from kslope.corpus import pp2_document, product_of_curves
from kslope.errors import (
    ArityMismatch,
    ConeViolation,
    DimensionMismatch,
    DivisorMismatch,
    MalformedRational,
    NonPositiveVolume,
    SetupError,
)
from kslope.geometry import (
    add,
    intersect,
    load_setup,
    parse_class,
    scale,
    serialize,
    setup_digest,
    setup_to_document,
)


def test_pp2_loads():
    s = load_setup(pp2_document())
    assert s.n == 2 and s.basis == ("H",)
    assert intersect(s, [(1,), (1,)]) == 1
    assert s.c1 == (3,)
    assert s.divisor("conic").total_class == (2,)


def test_product_of_curves_ring():
    s = product_of_curves(2)
    f1, f2, d = (s.basis_vector(b) for b in s.basis)
    assert intersect(s, [d, d]) == -2
    assert intersect(s, [f1, f1]) == 0
    assert intersect(s, [f1, f2]) == 1
    assert intersect(s, [f2, d]) == 1


def test_rejects_bad_documents():
    doc = pp2_document()
    doc["classes"]["omega"] = ["0"]
    with pytest.raises(NonPositiveVolume):
        load_setup(doc)

    doc = pp2_document()
    doc["classes"]["omega"] = ["-1"]  # positive square, negative on lines
    with pytest.raises(ConeViolation):
        load_setup(doc)

    doc = pp2_document()
    doc["divisors"][0]["total_class"] = ["2"]
    with pytest.raises(DivisorMismatch):
        load_setup(doc)

    doc = pp2_document()
    doc["intersection"][0]["monomial"] = ["H"]
    with pytest.raises(DimensionMismatch):
        load_setup(doc)

    doc = pp2_document()
    doc["classes"]["omega"] = ["1/0"]
    with pytest.raises(MalformedRational):
        load_setup(doc)

    doc = pp2_document()
    del doc["basis"]
    with pytest.raises(SetupError):
        load_setup(doc)

    s = product_of_curves(2)
    doc = setup_to_document(s)
    doc["classes"]["omega"] = ["1", "1", "2"]  # omega . delta = 2 - 4 < 0
    with pytest.raises((ConeViolation, NonPositiveVolume)):
        load_setup(doc)


def test_arity():
    s = load_setup(pp2_document())
    with pytest.raises(ArityMismatch):
        intersect(s, [(1,)])


def test_parse_class():
    s = product_of_curves(2)
    assert parse_class(s, "reference") == (1, 1, 0)
    assert parse_class(s, "delta") == (0, 0, 1)
    assert parse_class(s, "1,2,1/2") == (1, 2, Fraction(1, 2))


def test_round_trip_and_digest():
    s = product_of_curves(3)
    again = load_setup(serialize(s))
    assert again == s
    assert serialize(again) == serialize(s)
    assert setup_digest(again) == setup_digest(s)
    assert setup_digest(s).startswith("sha256:")
    assert setup_digest(product_of_curves(2)) != setup_digest(s)


def test_unknown_divisor():
    with pytest.raises(SetupError):
        load_setup(pp2_document()).divisor("cubic")


vectors = st.lists(st.integers(-4, 4), min_size=2, max_size=2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4), st.lists(vectors, min_size=6, max_size=6), st.integers(-3, 3))
def test_form_symmetric_and_multilinear(seed, n, vs, c):
    s = random_setup(random.Random(seed), n, size=2)
    vs = [tuple(Fraction(a) for a in v) for v in vs]
    classes = vs[:n]
    base = intersect(s, classes)
    assert intersect(s, list(reversed(classes))) == base
    extra = vs[5]
    mixed = [add(scale(c, classes[0]), extra)] + classes[1:]
    assert intersect(s, mixed) == c * base + intersect(s, [extra] + classes[1:])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_random_round_trip(seed, n):
    s = random_setup(random.Random(seed), n)
    assert load_setup(serialize(s)) == s
    assert load_setup(copy.deepcopy(setup_to_document(s))) == s
