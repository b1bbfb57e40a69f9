"""Shared strategies and slow reference oracles for the test suite."""

from fractions import Fraction

from hypothesis import strategies as st

from nnrep.core import BooleanFunction, point_from_index
from nnrep.representation import Label, NNRepresentation, TieError, classify_nn


def pointwise_verify(f, rep):
    """Reference verifier: Fraction arithmetic, one point at a time."""
    bad, ties = [], []
    for i in range(1 << f.arity):
        x = point_from_index(i, f.arity)
        try:
            lab = classify_nn(rep, x)
        except TieError:
            ties.append(x)
            continue
        if lab is not Label.of(f(x)):
            bad.append(x)
    return bad, ties


def naive_sqdist(a, b):
    return sum((Fraction(x) - Fraction(y)) ** 2 for x, y in zip(a, b))


def functions(max_arity=4):
    return st.integers(1, max_arity).flatmap(
        lambda n: st.integers(0, (1 << (1 << n)) - 1).map(lambda t: BooleanFunction(n, t)))


small_rationals = st.fractions(min_value=-2, max_value=3, max_denominator=6)


@st.composite
def representations(draw, n=None, max_size=5, boolean=False):
    if n is None:
        n = draw(st.integers(1, 4))
    coord = st.sampled_from([0, 1]) if boolean else small_rationals
    pts = draw(st.lists(st.tuples(*[coord] * n), min_size=1, max_size=max_size,
                        unique_by=lambda p: tuple(Fraction(c) for c in p)))
    labels = draw(st.lists(st.booleans(), min_size=len(pts), max_size=len(pts)))
    pos = [p for p, lab in zip(pts, labels) if lab]
    neg = [p for p, lab in zip(pts, labels) if not lab]
    return NNRepresentation(n, pos, neg)


@st.composite
def function_and_rep(draw, max_arity=4, max_size=5, boolean=False):
    n = draw(st.integers(1, max_arity))
    f = BooleanFunction(n, draw(st.integers(0, (1 << (1 << n)) - 1)))
    return f, draw(representations(n=n, max_size=max_size, boolean=boolean))


def centroid_inequalities_hold(f, cover):
    """Every centroid of >= 3 same-label sphere points is within squared
    distance < 1 of its own points and >= 1 from every other Boolean point
    except the cell center. Returns the number of centroids checked."""
    from nnrep.constructions import covering_sides

    n = f.arity
    checked = 0
    for c, ones, zeros in covering_sides(f, cover):
        for group in (ones, zeros):
            if len(group) < 3:
                continue
            # |A|^2 * sqdist(x, centroid) = sum_i (|A| x_i - sum_a a_i)^2, all integers
            size = len(group)
            sums = [sum((v >> i) & 1 for v in group) for i in range(n)]
            members = set(group)
            for v in range(1 << n):
                d = sum((size * ((v >> i) & 1) - sums[i]) ** 2 for i in range(n))
                if v in members:
                    assert d < size * size, (c, v, d)
                elif v != c:
                    assert d >= size * size, (c, v, d)
            checked += 1
    return checked


def brute_force_min(f, candidates, max_size, k=1):
    """Smallest labeled subset of ``candidates`` (every labeling tried) that
    classifies ``f`` correctly, using the pointwise Fraction classifiers.
    Returns (size, positives, negatives) or None."""
    from itertools import combinations, product

    from nnrep.representation import WellDefinednessError, classify_knn

    n = f.arity
    pts = [point_from_index(i, n) for i in range(1 << n)]
    for s in range(max(1, k), max_size + 1):
        for chosen in combinations(candidates, s):
            for labels in product((0, 1), repeat=s):
                rep = NNRepresentation(n, [c for c, b in zip(chosen, labels) if b],
                                       [c for c, b in zip(chosen, labels) if not b])
                try:
                    if k == 1:
                        good = all(classify_nn(rep, x) is Label.of(f(x)) for x in pts)
                    else:
                        good = all(classify_knn(rep, x, k) is Label.of(f(x)) for x in pts)
                except (TieError, WellDefinednessError):
                    good = False
                if good:
                    return s, rep.positives, rep.negatives
    return None
