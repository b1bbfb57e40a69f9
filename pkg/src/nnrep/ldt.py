"""Linear decision trees, comparison-counted k-NN classification, and the
monochromatic-rectangle oracle for the inner-product matrix."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import BooleanFunction, as_point, format_rational, parse_rational, point_from_index, sqdist
from .representation import (
    EmptyRepresentation,
    KTooLarge,
    Label,
    NNRepresentation,
    WellDefinednessError,
)


@dataclass(frozen=True)
class Leaf:
    value: int


@dataclass(frozen=True)
class Test:
    """Inner node: go to ``le`` if ``w.x <= t``, else to ``gt``."""

    weights: tuple
    threshold: Fraction
    le: "Node"
    gt: "Node"

    def __post_init__(self):
        object.__setattr__(self, "weights", as_point(self.weights))
        object.__setattr__(self, "threshold", parse_rational(self.threshold))


Node = Union[Leaf, Test]
LinearDecisionTree = Node


def ldt_eval(tree: Node, x: Sequence[int]) -> int:
    node = tree
    while isinstance(node, Test):
        if len(node.weights) != len(x):
            raise ValueError(f"test of dimension {len(node.weights)} on a point of "
                             f"length {len(x)}")
        s = sum(w * xi for w, xi in zip(node.weights, x))
        node = node.le if s <= node.threshold else node.gt
    return node.value


def ldt_depth(tree: Node) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(ldt_depth(tree.le), ldt_depth(tree.gt))


def find_disagreement(tree: Node, f: BooleanFunction):
    """First point (in index order) where the tree and ``f`` differ, or None."""
    for i in range(1 << f.arity):
        x = point_from_index(i, f.arity)
        if ldt_eval(tree, x) != f.value_at(i):
            return x
    return None


def ldt_check(tree: Node, f: BooleanFunction) -> bool:
    return find_disagreement(tree, f) is None


def bisector_tree(rep: NNRepresentation) -> Node:
    """One-test tree for a one-positive, one-negative representation.

    The test is the perpendicular bisector of the two prototypes: ``x`` is
    nearer the positive prototype ``p`` than the negative ``q`` iff
    ``2 (p - q).x > |p|^2 - |q|^2``.
    """
    if len(rep.positives) != 1 or len(rep.negatives) != 1:
        raise ValueError("bisector tree needs exactly one positive and one negative prototype")
    (p,), (q,) = rep.positives, rep.negatives
    w = tuple(2 * (a - b) for a, b in zip(p, q))
    t = sum(a * a for a in p) - sum(b * b for b in q)
    return Test(w, t, Leaf(0), Leaf(1))


def tree_to_dict(tree: Node) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf": tree.value}
    return {
        "test": {"w": [format_rational(c) for c in tree.weights],
                 "t": format_rational(tree.threshold)},
        "le": tree_to_dict(tree.le),
        "gt": tree_to_dict(tree.gt),
    }


def tree_from_dict(data: dict) -> Node:
    if "leaf" in data:
        value = int(data["leaf"])
        if value not in (0, 1):
            raise ValueError(f"leaf value must be 0 or 1, got {value}")
        return Leaf(value)
    test = data["test"]
    return Test(tuple(test["w"]), test["t"], tree_from_dict(data["le"]),
                tree_from_dict(data["gt"]))


def dumps_tree(tree: Node) -> str:
    return json.dumps(tree_to_dict(tree))


def loads_tree(text: str) -> Node:
    return tree_from_dict(json.loads(text))


# -- selection-based k-NN ------------------------------------------------------------

def comparison_bound(m: int, k: int) -> int:
    """Comparison budget ``m (1 + ceil(log2(k+1))) + k ceil(log2 m)``."""
    if m <= 0:
        return 0
    # ceil(log2(v)) == (v - 1).bit_length() for v >= 1
    return m * (1 + k.bit_length()) + k * (m - 1).bit_length()


def knn_classify_counted(rep: NNRepresentation, a: Sequence[int], k: int) -> tuple:
    """k-NN label of ``a`` plus the number of distance comparisons used.

    One pass keeps the ``k + 1`` smallest squared distances in a sorted buffer.
    Each new distance is first compared with the buffer maximum and, only if
    smaller, placed by binary search, so it costs at most
    ``1 + ceil(log2(k+1))`` comparisons. A final comparison of the k-th and
    (k+1)-th entries checks that the k nearest prototypes are well defined.
    Each comparison of two squared distances is one linear test on ``a``.
    """
    if len(a) != rep.dimension:
        raise ValueError("dimension mismatch")
    m = rep.size
    if k < 1:
        raise ValueError("k must be positive")
    if m == 0:
        raise EmptyRepresentation("representation has no prototypes")
    if k > m:
        raise KTooLarge(f"k={k} exceeds representation size {m}")
    protos = rep.prototypes()
    if k == m:
        positives = len(rep.positives)
        return Label.of(2 * positives >= k), 0

    count = 0

    def leq(u, v):
        nonlocal count
        count += 1
        return u <= v

    if k == 1:
        return _nearest_counted(a, protos, leq), count

    cap = k + 1
    dists = []  # sorted by distance
    labels = []
    for p, lab in protos:
        d = sqdist(a, p)
        if len(dists) == cap:
            if leq(dists[-1], d):
                continue
            dists.pop()
            labels.pop()
        # binary search for the insertion point, counting comparisons
        lo, hi = 0, len(dists)
        while lo < hi:
            mid = (lo + hi) // 2
            if leq(dists[mid], d):
                lo = mid + 1
            else:
                hi = mid
        dists.insert(lo, d)
        labels.insert(lo, lab)
    if leq(dists[k], dists[k - 1]):
        raise WellDefinednessError(
            f"at {tuple(a)}: {k}-th and {k + 1}-th smallest distances are both {dists[k]}")
    positives = sum(1 for lab in labels[:k] if lab is Label.POSITIVE)
    return Label.of(2 * positives >= k), count


def _nearest_counted(a, protos, leq) -> Label:
    """Running minimum for k = 1, keeping the labels seen at the minimum.

    At most two comparisons per prototype after the first. Equally near
    prototypes of one label are fine; both labels at the minimum is a tie.
    """
    best = sqdist(a, protos[0][0])
    at_best = {protos[0][1]}
    for p, lab in protos[1:]:
        d = sqdist(a, p)
        if not leq(best, d):
            best, at_best = d, {lab}
        elif leq(d, best):
            at_best.add(lab)
    if len(at_best) > 1:
        raise WellDefinednessError(f"at {tuple(a)}: tie between classes at distance {best}")
    return at_best.pop()


# -- monochromatic rectangles --------------------------------------------------------

def ip_matrix(n: int) -> list:
    """Rows are ``x``, columns ``y``, both in little-endian index order."""
    return [[(x & y).bit_count() & 1 for y in range(1 << n)] for x in range(1 << n)]


def max_mono_rectangle(n: int) -> tuple:
    """Largest monochromatic rectangle ``R x C`` of the IP_n matrix.

    Every nonempty row set is tried; for each color the best column set is all
    columns constant on those rows, which is the largest compatible ``C``.
    Returns ``(area, rows, cols)`` with the first maximum found.
    """
    if not 1 <= n <= 3:
        raise ValueError(f"max_mono_rectangle supports 1 <= n <= 3, got {n}")
    size = 1 << n
    mat = ip_matrix(n)
    ones = [sum(1 << y for y in range(size) if mat[x][y]) for x in range(size)]
    full = (1 << size) - 1
    best = (0, (), ())
    for rows_mask in range(1, 1 << size):
        rows = [x for x in range(size) if (rows_mask >> x) & 1]
        all_one = full
        all_zero = full
        for x in rows:
            all_one &= ones[x]
            all_zero &= full ^ ones[x]
        for cols_mask in (all_zero, all_one):
            area = len(rows) * cols_mask.bit_count()
            if area > best[0]:
                cols = tuple(y for y in range(size) if (cols_mask >> y) & 1)
                best = (area, tuple(rows), cols)
    return best


def is_monochromatic(mat: Sequence[Sequence[int]], rows, cols) -> bool:
    vals = {mat[x][y] for x in rows for y in cols}
    return len(vals) <= 1


__all__ = [
    "Leaf", "Test", "LinearDecisionTree", "ldt_eval", "ldt_depth", "ldt_check",
    "find_disagreement", "bisector_tree", "tree_to_dict", "tree_from_dict",
    "dumps_tree", "loads_tree", "comparison_bound", "knn_classify_counted",
    "ip_matrix", "max_mono_rectangle", "is_monochromatic",
]
