from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nnrep.core import (
    BooleanFunction,
    SpecError,
    SymmetricSpec,
    ThresholdSpec,
    format_rational,
    hamming,
    index_of,
    parse_function,
    parse_rational,
    parse_spec,
    point_from_index,
    scaled_sqdist_matrix,
    sqdist,
    symmetric_levels,
)


def bits(f):
    return "".join(str(f.value_at(i)) for i in range(1 << f.arity))


def test_parity2_table():
    # indices 0..3 are 00, 10, 01, 11 with x_1 least significant
    assert bits(parse_function("parity:2")) == "0110"


def test_ip2_value():
    f = parse_function("ip:2")
    assert f.arity == 4
    # x = (1, 0), y = (1, 0)
    assert f((1, 0, 1, 0)) == 1
    assert f((1, 1, 0, 1)) == 1
    assert f((1, 1, 1, 1)) == 0


def test_ip_matches_formula():
    for n in (1, 2, 3):
        f = parse_function(f"ip:{n}")
        for i in range(1 << (2 * n)):
            p = point_from_index(i, 2 * n)
            expected = sum(p[j] * p[n + j] for j in range(n)) % 2
            assert f(p) == expected


def test_maj3():
    f = parse_function("maj:3")
    assert f.count_ones() == 4
    for i in range(8):
        assert f.value_at(i) == (bin(i).count("1") >= 2)


def test_maj4_is_weight_at_least_two():
    f = parse_function("maj:4")
    assert all(f.value_at(i) == (bin(i).count("1") >= 2) for i in range(16))


def test_threshold_spec_with_weights():
    f = parse_function("th:3:2:2,-1,1")
    for i in range(8):
        x = point_from_index(i, 3)
        assert f(x) == (2 * x[0] - x[1] + x[2] >= 2)


def test_threshold_rational_prescaled():
    spec = parse_spec("th:2:1/2:1/2,1/3").threshold
    assert spec == ThresholdSpec((3, 2), 3)


def test_sym_and_table():
    assert bits(parse_function("sym:3:0,3")) == "10000001"
    f = parse_function("table:2:8")
    assert bits(f) == "0001"
    assert parse_function(str(f)) == f


@pytest.mark.parametrize("text", [
    "parity", "parity:0", "parity:25", "foo:3", "sym:3:4", "sym:2:-1",
    "table:2:1f", "table:2:zz", "th:3:1:1,1", "ip:13", "maj:x",
])
def test_malformed_specs(text):
    with pytest.raises(SpecError):
        parse_spec(text)


@pytest.mark.parametrize("n", range(1, 9))
def test_parity_has_half_ones(n):
    assert parse_function(f"parity:{n}").count_ones() == 1 << (n - 1)


def test_hamming_examples():
    assert hamming((0, 0, 0), (0, 0, 0)) == 0
    assert hamming((1, 0, 1), (0, 0, 1)) == 1
    assert hamming((1, 1), (0, 0)) == 2
    with pytest.raises(ValueError):
        hamming((1,), (1, 0))


def test_sqdist_examples():
    third = Fraction(2, 3)
    # scaled by 3: (3-2)^2 + (3-2)^2 + (0-2)^2 = 6, so 6/9
    assert sqdist((1, 1, 0), (third, third, third)) == Fraction(2, 3)
    p = (Fraction(1, 7), Fraction(-3, 2))
    assert sqdist(p, p) == 0
    assert sqdist((1, 0, 1), (0, 0, 1)) == 1
    with pytest.raises(ValueError):
        sqdist((1, 2), (1,))


@given(st.integers(1, 10).flatmap(
    lambda n: st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1),
                        st.just(n))))
def test_sqdist_equals_hamming_on_boolean_points(args):
    i, j, n = args
    a, b = point_from_index(i, n), point_from_index(j, n)
    assert sqdist(a, b) == hamming(a, b)


@given(st.integers(-10**12, 10**12), st.integers(1, 10**12))
def test_rational_round_trip(p, q):
    r = Fraction(p, q)
    assert parse_rational(format_rational(r)) == r


def test_parse_rational_accepts_noncanonical():
    assert parse_rational("2/4") == Fraction(1, 2)
    assert parse_rational("3/-6") == Fraction(-1, 2)
    assert parse_rational(" -7 ") == -7
    assert format_rational(parse_rational("6/-4")) == "-3/2"
    for bad in ("1.5", "1/0", "", "a/b"):
        with pytest.raises(SpecError):
            parse_rational(bad)


def test_index_round_trip():
    for n in (1, 4, 7):
        for i in range(1 << n):
            assert index_of(point_from_index(i, n)) == i


def test_boolean_function_rejects_bad_tables():
    with pytest.raises(ValueError):
        BooleanFunction(2, 1 << 4)
    with pytest.raises(ValueError):
        BooleanFunction(25, 0)


def test_symmetric_levels_detection():
    assert symmetric_levels(parse_function("maj:5")) == SymmetricSpec(5, {3, 4, 5})
    assert symmetric_levels(parse_function("table:2:2")) is None


def test_scaled_matrix_matches_fraction_distances():
    protos = [(Fraction(1, 3), Fraction(5, 2)), (Fraction(-1, 4), 0), (1, 1)]
    S = scaled_sqdist_matrix(protos, 2)
    den = 12
    for i in range(4):
        x = point_from_index(i, 2)
        for j, p in enumerate(protos):
            assert S[i, j] == sqdist(x, p) * den * den


def test_scaled_matrix_falls_back_to_python_ints():
    big = Fraction(1, 3**40)
    protos = [(big, 0), (0, big)]
    S = scaled_sqdist_matrix(protos, 2)
    assert S.dtype == object
    den = 3**40
    for i in range(4):
        x = point_from_index(i, 2)
        for j, p in enumerate(protos):
            assert S[i, j] == sqdist(x, p) * den * den
