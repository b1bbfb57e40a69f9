from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import representations
from nnrep.constructions import build_symmetric, build_threshold
from nnrep.core import ThresholdSpec, parse_function, parse_spec, point_from_index
from nnrep.ldt import (
    Leaf,
    Test as LinearTest,
    bisector_tree,
    comparison_bound,
    dumps_tree,
    find_disagreement,
    ip_matrix,
    is_monochromatic,
    knn_classify_counted,
    ldt_check,
    ldt_depth,
    ldt_eval,
    loads_tree,
    max_mono_rectangle,
)
from nnrep.representation import (
    KTooLarge,
    Label,
    NNRepresentation,
    WellDefinednessError,
    classify_knn,
)

F = Fraction
X1_TREE = LinearTest((1,), F(1, 2), Leaf(0), Leaf(1))
# x1 + x2 <= 1/2 -> 0, else x1 + x2 <= 3/2 -> 1, else 0: OR refined to XOR
DEPTH2 = LinearTest((1, 1), F(1, 2), Leaf(0), LinearTest((1, 1), F(3, 2), Leaf(1), Leaf(0)))


def test_eval_basics():
    assert ldt_eval(Leaf(1), (0, 1, 0)) == 1
    assert [ldt_eval(X1_TREE, (x,)) for x in (0, 1)] == [0, 1]
    assert ldt_check(X1_TREE, parse_function("th:1:1"))
    assert not ldt_check(X1_TREE, parse_function("table:1:1"))  # complement of x1


def test_depth_two_tree():
    assert [ldt_eval(DEPTH2, point_from_index(i, 2)) for i in range(4)] == [0, 1, 1, 0]
    assert ldt_check(DEPTH2, parse_function("parity:2"))
    assert find_disagreement(DEPTH2, parse_function("table:2:e")) == (1, 1)
    assert ldt_depth(Leaf(0)) == 0
    assert ldt_depth(X1_TREE) == 1
    assert ldt_depth(DEPTH2) == 2


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        ldt_eval(X1_TREE, (0, 1))


def test_tree_round_trip():
    text = dumps_tree(DEPTH2)
    assert loads_tree(text) == DEPTH2
    assert text.startswith('{"test": {"w": ["1", "1"], "t": "1/2"}')
    with pytest.raises(ValueError):
        loads_tree('{"leaf": 2}')


def test_bisector_majority3():
    rep = build_threshold(parse_spec("maj:3").threshold)
    tree = bisector_tree(rep)
    assert ldt_depth(tree) == 1
    assert ldt_check(tree, parse_function("maj:3"))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.integers(-8, 8), min_size=n, max_size=n), st.integers(-20, 20))))
def test_bisector_of_threshold_reps(wt):
    spec = ThresholdSpec(tuple(wt[0]), wt[1])
    rep = build_threshold(spec)
    if rep.size == 2:
        assert ldt_check(bisector_tree(rep), spec.function())


def test_comparison_bound():
    assert comparison_bound(4, 1) == 2 * 4 + 2
    assert comparison_bound(1, 1) == 2
    assert comparison_bound(0, 3) == 0


def test_counted_parity3():
    rep = build_symmetric(parse_spec("parity:3").symmetric)
    label, count = knn_classify_counted(rep, (1, 1, 0), 1)
    assert label is Label.NEGATIVE
    assert count <= 8


def test_counted_full_size_is_free():
    rep = build_symmetric(parse_spec("parity:3").symmetric)
    label, count = knn_classify_counted(rep, (1, 1, 0), 4)
    assert count == 0
    assert label is classify_knn(rep, (1, 1, 0), 4)


def test_counted_errors():
    rep = NNRepresentation(2, [(1, 1)], [(0, 0)])
    with pytest.raises(WellDefinednessError):
        knn_classify_counted(rep, (1, 0), 1)
    with pytest.raises(KTooLarge):
        knn_classify_counted(rep, (1, 0), 3)
    # third equidistant prototype with the other label behind a same-label pair
    rep = NNRepresentation(2, [(1, 0), (0, 1)], [(-1, 0)])
    with pytest.raises(WellDefinednessError):
        knn_classify_counted(rep, (0, 0), 1)
    with pytest.raises(WellDefinednessError):
        classify_knn(rep, (0, 0), 1)


def outcome(fn):
    try:
        return fn()
    except WellDefinednessError:
        return "tie"


@settings(max_examples=300, deadline=None)
@given(representations(max_size=8), st.data())
def test_counted_agrees_and_respects_budget(rep, data):
    n = rep.dimension
    k = data.draw(st.integers(1, rep.size))
    x = point_from_index(data.draw(st.integers(0, (1 << n) - 1)), n)
    expected = outcome(lambda: classify_knn(rep, x, k))
    got = outcome(lambda: knn_classify_counted(rep, x, k))
    if expected == "tie":
        assert got == "tie"
    else:
        label, count = got
        assert label is expected
        assert count <= comparison_bound(rep.size, k)
        if k == 1:
            assert count <= 2 * rep.size


def test_ip_matrix_is_the_function():
    f = parse_function("ip:2")
    mat = ip_matrix(2)
    for x in range(4):
        for y in range(4):
            assert mat[x][y] == f.value_at(x | (y << 2))


def brute_rectangle(n):
    size = 1 << n
    mat = ip_matrix(n)
    best = 0
    subsets = [tuple(s) for r in range(1, size + 1) for s in combinations(range(size), r)]
    for rows in subsets:
        for cols in subsets:
            if len(rows) * len(cols) > best and is_monochromatic(mat, rows, cols):
                best = len(rows) * len(cols)
    return best


@pytest.mark.parametrize("n", [1, 2])
def test_rectangle_matches_pair_enumeration(n):
    area, rows, cols = max_mono_rectangle(n)
    assert area == brute_rectangle(n) == 1 << n
    assert is_monochromatic(ip_matrix(n), rows, cols)
    assert len(rows) * len(cols) == area


def test_rectangle_n1_witness():
    area, rows, cols = max_mono_rectangle(1)
    assert area == 2
    assert is_monochromatic(ip_matrix(1), rows, cols)


def test_rectangle_cap():
    with pytest.raises(ValueError):
        max_mono_rectangle(4)
