"""Explicit prototype constructions.

Each builder returns an :class:`NNRepresentation` that represents its function
exactly; ``build_covering`` re-verifies its output before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    BooleanFunction,
    SymmetricSpec,
    ThresholdSpec,
    point_from_index,
)
from .representation import NNRepresentation, verify_nn


class ConstructionError(RuntimeError):
    pass


def build_symmetric(spec: SymmetricSpec) -> NNRepresentation:
    """One prototype per weight level, on the main diagonal at ``(l/n, ..., l/n)``."""
    n = spec.arity
    pos, neg = [], []
    for level in range(n + 1):
        p = (Fraction(level, n),) * n
        (pos if level in spec.levels else neg).append(p)
    return NNRepresentation(n, pos, neg)


def build_threshold(spec: ThresholdSpec) -> NNRepresentation:
    """Two prototypes mirrored across the shifted hyperplane ``w.x = t - 1/2``.

    With ``c = (t*/|w|^2) w`` and prototypes ``c + w`` (positive), ``c - w``
    (negative), the difference of squared distances at ``x`` is
    ``4 (w.x - t*)``, which never vanishes on integer inputs.
    """
    n = spec.arity
    w = spec.weights
    norm2 = sum(v * v for v in w)
    if norm2 == 0:
        # constant function: sum is 0 >= t or not
        origin = (Fraction(0),) * n
        if 0 >= spec.threshold:
            return NNRepresentation(n, [origin], [])
        return NNRepresentation(n, [], [origin])
    t_star = Fraction(2 * spec.threshold - 1, 2)
    scale = t_star / norm2
    c = [scale * v for v in w]
    pos = tuple(ci + v for ci, v in zip(c, w))
    neg = tuple(ci - v for ci, v in zip(c, w))
    return NNRepresentation(n, [pos], [neg])


def build_majority_bnn(n: int) -> NNRepresentation:
    """Boolean prototypes for MAJ_n (f = 1 iff weight >= n/2).

    Odd n: all-ones vs all-zeros. Even n: all-zeros negative, plus the
    weight-(n-1) points with their zero at coordinates 1..n/2+1 positive.
    """
    if n < 1:
        raise ValueError("n must be positive")
    zeros = (0,) * n
    if n % 2:
        return NNRepresentation(n, [(1,) * n], [zeros])
    pos = [tuple(0 if j == i else 1 for j in range(n)) for i in range(n // 2 + 1)]
    return NNRepresentation(n, pos, [zeros])


def build_parity_bnn(n: int) -> NNRepresentation:
    if not 1 <= n <= 16:
        raise ValueError(f"parity BNN construction supports 1 <= n <= 16, got {n}")
    pos, neg = [], []
    for i in range(1 << n):
        (pos if i.bit_count() % 2 else neg).append(point_from_index(i, n))
    return NNRepresentation(n, pos, neg)


# -- ball coverings ----------------------------------------------------------------

@dataclass(frozen=True)
class BallCovering:
    """Partition of the cube into cells, each inside the radius-1 ball of its center.

    ``centers`` and ``cells`` hold point indices; ``cells[i]`` lists the
    points of cell ``i`` in increasing index order and contains ``centers[i]``.
    """

    dimension: int
    centers: tuple
    cells: tuple

    @property
    def size(self) -> int:
        return len(self.centers)

    def center_points(self) -> list:
        return [point_from_index(c, self.dimension) for c in self.centers]

    def cell_points(self, i: int) -> list:
        return [point_from_index(v, self.dimension) for v in self.cells[i]]

    def check(self) -> None:
        """Raise if any covering invariant fails."""
        seen = set()
        for c, cell in zip(self.centers, self.cells):
            if c not in cell:
                raise ConstructionError(f"center {c} is not in its own cell")
            for v in cell:
                if (v ^ c).bit_count() > 1:
                    raise ConstructionError(f"point {v} is too far from center {c}")
                if v in seen:
                    raise ConstructionError(f"point {v} lies in two cells")
                seen.add(v)
        if len(seen) != 1 << self.dimension:
            raise ConstructionError("cells do not cover the cube")


def _hamming_code(r: int) -> list:
    """Codewords of the perfect Hamming code of length 2**r - 1, as point indices."""
    n = (1 << r) - 1
    words = []
    for v in range(1 << n):
        syndrome = 0
        for i in range(n):
            if (v >> i) & 1:
                syndrome ^= i + 1
        if syndrome == 0:
            words.append(v)
    return words


def _greedy_centers(n: int) -> list:
    size = 1 << n
    gain = np.full(size, n + 1, dtype=np.int64)
    covered = np.zeros(size, dtype=bool)
    centers = []
    remaining = size
    while remaining:
        # argmax returns the lowest index among ties
        best = int(np.argmax(gain))
        centers.append(best)
        for u in [best] + [best ^ (1 << i) for i in range(n)]:
            if not covered[u]:
                covered[u] = True
                remaining -= 1
                gain[u] -= 1
                for i in range(n):
                    gain[u ^ (1 << i)] -= 1
    return sorted(centers)


def cover_hypercube(n: int) -> BallCovering:
    """Cover ``{0,1}^n`` with radius-1 balls.

    Perfect Hamming code when ``n = 2**r - 1``; greedy max-coverage otherwise.
    Non-centers go to the lowest-index center within distance 1, and every
    center stays in its own cell.
    """
    if not 1 <= n <= 12:
        raise ValueError(f"cover_hypercube supports 1 <= n <= 12, got {n}")
    r = (n + 1).bit_length() - 1
    if (1 << r) - 1 == n:
        centers = _hamming_code(r)
    else:
        centers = _greedy_centers(n)
    center_set = set(centers)
    slot = {c: i for i, c in enumerate(centers)}
    cells = [[] for _ in centers]
    for v in range(1 << n):
        if v in center_set:
            cells[slot[v]].append(v)
            continue
        for c in centers:
            if (v ^ c).bit_count() <= 1:
                cells[slot[c]].append(v)
                break
    cover = BallCovering(n, tuple(centers), tuple(tuple(c) for c in cells))
    cover.check()
    return cover


def centroid(points: Sequence[Sequence[int]]) -> tuple:
    if not points:
        raise ValueError("centroid of an empty set")
    k = len(points)
    return tuple(Fraction(sum(col), k) for col in zip(*points))


def covering_sides(f: BooleanFunction, cover: BallCovering) -> list:
    """Per cell: (center index, positive non-centers, negative non-centers)."""
    sides = []
    for c, cell in zip(cover.centers, cover.cells):
        ones = [v for v in cell if v != c and f.value_at(v)]
        zeros = [v for v in cell if v != c and not f.value_at(v)]
        sides.append((c, ones, zeros))
    return sides


def build_covering(f: BooleanFunction, cover: BallCovering | None = None) -> NNRepresentation:
    """Ball-covering construction: per cell, a centroid for any same-label group
    of three or more sphere points, the group itself otherwise, and the center."""
    n = f.arity
    if n > 12:
        raise ValueError(f"build_covering supports arity <= 12, got {n}")
    if cover is None:
        cover = cover_hypercube(n)
    elif cover.dimension != n:
        raise ValueError("covering dimension does not match the function")

    labeled = {}  # prototype -> label, insertion-ordered by cell

    def add(point, label):
        prev = labeled.setdefault(point, label)
        if prev != label:
            raise ConstructionError(f"prototype {point} produced with both labels")

    for c, ones, zeros in covering_sides(f, cover):
        for group, label in ((ones, 1), (zeros, 0)):
            pts = [point_from_index(v, n) for v in group]
            if len(pts) >= 3:
                add(centroid(pts), label)
            else:
                for p in pts:
                    add(tuple(Fraction(x) for x in p), label)
        add(tuple(Fraction(x) for x in point_from_index(c, n)), f.value_at(c))

    rep = NNRepresentation(n, [p for p, lab in labeled.items() if lab],
                           [p for p, lab in labeled.items() if not lab])
    report = verify_nn(f, rep)
    if not report.ok:
        raise ConstructionError(
            f"covering construction failed verification: "
            f"{len(report.counterexamples)} mislabels, {len(report.tie_points)} ties")
    return rep


def threshold_prototypes(spec: ThresholdSpec) -> list:
    """The prototypes of :func:`build_threshold` as a flat list."""
    rep = build_threshold(spec)
    return list(rep.positives) + list(rep.negatives)


__all__ = [
    "BallCovering",
    "ConstructionError",
    "build_covering",
    "build_majority_bnn",
    "build_parity_bnn",
    "build_symmetric",
    "build_threshold",
    "centroid",
    "cover_hypercube",
    "covering_sides",
    "threshold_prototypes",
]
