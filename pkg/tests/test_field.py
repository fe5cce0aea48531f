import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gf_mul_reference, span_by_enumeration
from sumnet.field import (
    DEFAULT_MODULI,
    GF,
    GF2,
    FieldElement,
    FieldMismatchError,
    default_degree_two_sources,
    is_irreducible,
)

GF4 = GF(2)


def test_add_examples():
    for x in range(4):
        assert GF4.add(x, x) == 0
        assert GF4.add(x, 0) == x
    assert GF4.add(2, 3) == 1


def test_mul_examples():
    for x in range(4):
        assert GF4.mul(x, 1) == x
        assert GF4.mul(x, 0) == 0
    assert GF4.mul(2, 3) == 1


def test_gf4_table_by_hand():
    # x^2 = x + 1, elements 0, 1, x=2, x+1=3
    table = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]
    assert [[GF4.mul(a, b) for b in range(4)] for a in range(4)] == table


def test_inverse_examples():
    assert GF4.inverse(1) == 1
    assert GF4.inverse(2) == 3
    with pytest.raises(ZeroDivisionError, match="zero has no inverse"):
        GF4.inverse(0)


def test_out_of_range_element_rejected():
    with pytest.raises(ValueError):
        GF4.add(4, 1)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        FieldElement(GF4, 1) + FieldElement(GF(3), 1)
    with pytest.raises(FieldMismatchError):
        FieldElement(GF4, 1) * FieldElement(GF2, 1)


def test_field_element_operators():
    a, b = GF4.element(2), GF4.element(3)
    assert int(a + b) == 1 and int(a * b) == 1
    assert int(a.inverse()) == 3 and int(a / b) == GF4.div(2, 3)
    assert not GF4.element(0)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        GF(2, 0b101)  # x^2 + 1 = (x + 1)^2
    with pytest.raises(ValueError):
        GF(3, 0b111)  # wrong degree


def test_degree_bounds():
    with pytest.raises(ValueError):
        GF(0)
    with pytest.raises(ValueError):
        GF(17)


@pytest.mark.parametrize("m", sorted(DEFAULT_MODULI))
def test_default_moduli_irreducible_and_degree(m):
    poly = DEFAULT_MODULI[m]
    assert poly.bit_length() - 1 == m and is_irreducible(poly)


def test_default_moduli_named_choices():
    assert DEFAULT_MODULI[2] == 0b111
    assert DEFAULT_MODULI[4] == 0b10011
    assert DEFAULT_MODULI[8] == 0b100011011


def test_irreducible_small_list():
    # irreducibles of degree <= 4, written out by hand
    known = {0b10, 0b11, 0b111, 0b1011, 0b1101, 0b10011, 0b11001, 0b11111}
    found = {p for p in range(2, 32) if is_irreducible(p)}
    assert found == known


def test_default_degree_rule():
    assert default_degree_two_sources(1) == 2
    assert default_degree_two_sources(2) == 2
    assert default_degree_two_sources(3) == 3
    assert default_degree_two_sources(6) == 3
    assert default_degree_two_sources(7) == 4


@pytest.mark.parametrize("m", [1, 2, 3])
def test_field_axioms_exhaustive(m):
    f = GF(m)
    els = range(f.size)
    for a in els:
        for b in els:
            assert f.mul(a, b) == gf_mul_reference(a, b, f.modulus, m)
            assert f.mul(a, b) == f.mul(b, a)
            for c in els:
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        if a:
            assert f.mul(a, f.inverse(a)) == 1


@pytest.mark.parametrize("m", [8, 16])
def test_field_axioms_random(m):
    f = GF(m)
    rng = random.Random(m)
    for _ in range(2000):
        a, b, c = (f.random_element(rng) for _ in range(3))
        assert f.mul(a, b) == gf_mul_reference(a, b, f.modulus, m)
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        if a:
            assert f.mul(a, f.inverse(a)) == 1
            assert f.div(f.mul(a, b), a) == b


def test_custom_non_primitive_modulus():
    # x^4+x^3+x^2+x+1 is irreducible but x is not a generator
    f = GF(4, 0b11111)
    for a in range(1, 16):
        assert gf_mul_reference(a, f.inverse(a), 0b11111, 4) == 1


def test_span_examples():
    assert GF2.in_span((1, 1), [(1, 0), (0, 1)])
    assert not GF2.in_span((1, 1), [(1, 0)])
    assert GF2.in_span((0, 0, 0), [])


def test_rank_examples():
    assert GF2.rank([(1, 0), (0, 1)]) == 2
    assert GF2.rank([(1, 1), (1, 1)]) == 1
    assert GF2.rank([]) == 0


def test_solve_returns_coefficients():
    f = GF(3)
    basis = [(1, 2, 0), (0, 1, 5)]
    v = f.combine([3, 6], basis, 3)
    coeffs = f.solve(v, basis)
    assert f.combine(coeffs, basis, 3) == v
    assert f.solve((0, 0, 1), [(1, 0, 0)]) is None


@pytest.mark.parametrize("m", [1, 2])
def test_in_span_matches_enumeration_exhaustively(m):
    f = GF(m)
    n = 2
    vectors = list(itertools.product(range(f.size), repeat=n))
    for k in range(4):
        for basis in itertools.product(vectors, repeat=k):
            span = span_by_enumeration(f, basis, n)
            for v in vectors:
                assert f.in_span(v, list(basis)) == (v in span)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 2), st.integers(1, 3), st.data())
def test_in_span_matches_enumeration_length3(m, k, data):
    f = GF(m)
    vec = st.tuples(*[st.integers(0, f.size - 1)] * 3)
    basis = data.draw(st.lists(vec, min_size=k, max_size=k))
    v = data.draw(vec)
    assert f.in_span(v, basis) == (v in span_by_enumeration(f, basis, 3))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.data())
def test_rank_invariant_under_permutation_and_scaling(m, data):
    f = GF(m)
    n = data.draw(st.integers(1, 4))
    vec = st.tuples(*[st.integers(0, f.size - 1)] * n)
    vs = data.draw(st.lists(vec, max_size=5))
    perm = data.draw(st.permutations(vs))
    scales = data.draw(st.lists(st.integers(1, f.size - 1), min_size=len(vs), max_size=len(vs)))
    r = f.rank(vs)
    assert f.rank(perm) == r
    assert f.rank([f.scale(c, v) for c, v in zip(scales, vs)]) == r
    assert r <= min(len(vs), n)


def test_fields_compare_by_degree_and_modulus():
    assert GF(4) == GF(4, 0b10011)
    assert GF(4) != GF(4, 0b11111)
