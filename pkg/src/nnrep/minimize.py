"""Exhaustive minimum-size searches for prototype representations.

Candidates are enumerated by size, then lexicographically by point index, so
the first verifying candidate is a minimum and the witness is deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .core import (
    BooleanFunction,
    as_point,
    is_boolean_point,
    index_of,
    point_from_index,
    scaled_sqdist_matrix,
)
from .representation import NNRepresentation, verify_knn, verify_nn

MAX_EXACT_ARITY = 4


class ArityTooLarge(ValueError):
    pass


@dataclass
class SearchResult:
    optimum: int | None
    witness: NNRepresentation | None
    explored: int
    exhausted_up_to: int
    elapsed: float = 0.0

    @property
    def known(self) -> bool:
        return self.optimum is not None

    def summary(self) -> dict:
        return {
            "optimum": self.optimum,
            "explored": self.explored,
            "exhausted_up_to": self.exhausted_up_to,
            "wall_time": round(self.elapsed, 6),
        }


class _Deadline:
    def __init__(self, seconds):
        self.stop = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.stop is not None and time.monotonic() > self.stop


def _found(f, rep, k, explored, start) -> SearchResult:
    report = verify_nn(f, rep) if k == 1 else verify_knn(f, rep, k)
    if not report.ok:
        raise AssertionError("search accepted a witness the full verifier rejects")
    return SearchResult(rep.size, rep, explored, rep.size - 1, time.monotonic() - start)


def _boolean_rep(n: int, chosen: Sequence[int], labels: Sequence[int]) -> NNRepresentation:
    pos = [point_from_index(v, n) for v, lab in zip(chosen, labels) if lab]
    neg = [point_from_index(v, n) for v, lab in zip(chosen, labels) if not lab]
    return NNRepresentation(n, pos, neg)


def _rings(n: int) -> list:
    """``rings[x][d]`` is the bitmask of points at Hamming distance ``d`` from ``x``."""
    out = []
    for x in range(1 << n):
        masks = [0] * (n + 1)
        for y in range(1 << n):
            masks[(x ^ y).bit_count()] |= 1 << y
        out.append(masks)
    return out


def _bnn_ok(rings: list, values: Sequence[int], pos_mask: int, neg_mask: int) -> bool:
    """Early-abort NN check for Boolean prototypes given as bitmasks."""
    for x, masks in enumerate(rings):
        want_pos = values[x]
        for ring in masks:
            hit_p = ring & pos_mask
            hit_n = ring & neg_mask
            if hit_p or hit_n:
                if hit_p and hit_n:
                    return False
                if bool(hit_p) != bool(want_pos):
                    return False
                break
    return True


def exact_bnn(f: BooleanFunction, max_size: int | None = None,
              time_limit: float | None = None) -> SearchResult:
    """Minimum Boolean-prototype NN representation of ``f``.

    Labels are forced: a Boolean prototype sits at distance 0 from itself, so
    in any valid representation it carries the label ``f`` gives its point.
    Only subsets of the cube are enumerated. Arity 5 requires ``max_size``.
    """
    n = f.arity
    if n > 5 or (n == 5 and max_size is None):
        raise ArityTooLarge(
            f"exact_bnn needs arity <= {MAX_EXACT_ARITY}, or arity 5 with a size cutoff")
    start = time.monotonic()
    deadline = _Deadline(time_limit)
    size = 1 << n
    limit = size if max_size is None else min(max_size, size)
    values = [f.value_at(x) for x in range(size)]
    rings = _rings(n)
    explored = 0
    for s in range(1, limit + 1):
        for chosen in combinations(range(size), s):
            explored += 1
            pos_mask = neg_mask = 0
            for v in chosen:
                if values[v]:
                    pos_mask |= 1 << v
                else:
                    neg_mask |= 1 << v
            if _bnn_ok(rings, values, pos_mask, neg_mask):
                rep = _boolean_rep(n, chosen, [values[v] for v in chosen])
                return _found(f, rep, 1, explored, start)
            if explored % 4096 == 0 and deadline.expired():
                return SearchResult(None, None, explored, s - 1, time.monotonic() - start)
    return SearchResult(None, None, explored, limit, time.monotonic() - start)


def _knn_labelings_ok(D: np.ndarray, values: np.ndarray, k: int) -> list:
    """All labelings (as bit patterns over the candidate's columns) that make
    the candidate a k-NN representation. ``D`` is points x candidates."""
    m = D.shape[1]
    labelings = np.arange(1 << m, dtype=np.int64)
    # bit j of a labeling is the label of candidate column j
    bits = ((labelings[:, None] >> np.arange(m, dtype=np.int64)) & 1).astype(bool)  # L x m
    want = values.astype(bool)[None, :]
    if k == 1:
        # nearest-neighbor semantics: all equally nearest columns must agree
        tied = D == D.min(axis=1, keepdims=True)  # points x m
        has_pos = (bits[:, None, :] & tied[None, :, :]).any(axis=2)  # L x points
        has_neg = (~bits[:, None, :] & tied[None, :, :]).any(axis=2)
        good = np.all((has_pos != has_neg) & (has_pos == want), axis=1)
        return [int(v) for v in np.flatnonzero(good)]
    order = np.argsort(D, axis=1, kind="stable")
    srt = np.take_along_axis(D, order, axis=1)
    if k < m and np.any(srt[:, k - 1] == srt[:, k]):
        return []
    nearest = order[:, :k]  # points x k
    pos_counts = bits[:, nearest].sum(axis=2)  # L x points
    predicted = 2 * pos_counts >= k
    good = np.all(predicted == want, axis=1)
    return [int(v) for v in np.flatnonzero(good)]


def exact_knn_bnn(f: BooleanFunction, k: int, max_size: int,
                  time_limit: float | None = None) -> SearchResult:
    """Smallest Boolean-prototype k-NN representation, labels free.

    Sizes ``k .. max_size`` are searched; for each subset every labeling is
    tried in increasing bit-pattern order (bit j = label of the j-th point).
    """
    n = f.arity
    if n > MAX_EXACT_ARITY:
        raise ArityTooLarge(f"exact_knn_bnn supports arity <= {MAX_EXACT_ARITY}")
    if k < 1:
        raise ValueError("k must be positive")
    start = time.monotonic()
    deadline = _Deadline(time_limit)
    size = 1 << n
    limit = min(max_size, size)
    full = scaled_sqdist_matrix([point_from_index(v, n) for v in range(size)], n)
    values = f.values()
    explored = 0
    for s in range(k, limit + 1):
        for chosen in combinations(range(size), s):
            explored += 1 << s
            good = _knn_labelings_ok(full[:, list(chosen)], values, k)
            if good:
                lab = good[0]
                labels = [(lab >> j) & 1 for j in range(s)]
                rep = _boolean_rep(n, chosen, labels)
                return _found(f, rep, k, explored, start)
            if deadline.expired():
                return SearchResult(None, None, explored, s - 1, time.monotonic() - start)
    return SearchResult(None, None, explored, limit, time.monotonic() - start)


def default_grid(n: int) -> list:
    """Boolean points followed by the non-Boolean diagonal points ``(l/n, ..., l/n)``."""
    grid = [as_point(point_from_index(v, n)) for v in range(1 << n)]
    grid += [(Fraction(lv, n),) * n for lv in range(1, n)]
    return grid


def grid_candidate_count(grid: Sequence, size: int) -> int:
    """Number of labeled candidates of one size the grid search enumerates."""
    free = sum(1 for p in grid if not is_boolean_point(p))
    fixed = len(grid) - free
    # subsets with j non-Boolean members get 2**j labelings
    return sum(comb(free, j) * comb(fixed, size - j) * (1 << j) for j in range(size + 1))


def grid_nn_upper(f: BooleanFunction, grid: Sequence | None = None,
                  max_size: int | None = None,
                  time_limit: float | None = None) -> SearchResult:
    """Smallest NN representation with prototypes drawn from ``grid``.

    The result is an upper bound on the unrestricted NN complexity. Grid points
    that are Boolean get their label forced by ``f``; the rest are tried with
    both labels.
    """
    n = f.arity
    if grid is None:
        grid = default_grid(n)
    grid = list(dict.fromkeys(as_point(p) for p in grid))
    if not grid:
        raise ValueError("empty grid")
    if any(len(p) != n for p in grid):
        raise ValueError("grid point dimension does not match the function")
    start = time.monotonic()
    deadline = _Deadline(time_limit)
    g = len(grid)
    limit = g if max_size is None else min(max_size, g)
    D = scaled_sqdist_matrix(grid, n)
    values = f.values().astype(bool)
    forced = [None if not is_boolean_point(p) else bool(f.value_at(index_of([int(c) for c in p])))
              for p in grid]
    explored = 0
    for s in range(1, limit + 1):
        for chosen in combinations(range(g), s):
            free = [j for j, c in enumerate(chosen) if forced[c] is None]
            sub = D[:, list(chosen)]
            for pattern in range(1 << len(free)):
                explored += 1
                labels = [forced[c] for c in chosen]
                for b, j in enumerate(free):
                    labels[j] = bool((pattern >> b) & 1)
                lab = np.array(labels, dtype=bool)
                if lab.all():
                    ok = values.all()
                elif not lab.any():
                    ok = not values.any()
                else:
                    min_p = sub[:, lab].min(axis=1)
                    min_n = sub[:, ~lab].min(axis=1)
                    ok = bool(np.all(np.where(values, min_p < min_n, min_n < min_p)))
                if ok:
                    rep = NNRepresentation(
                        n, [grid[c] for c, b in zip(chosen, labels) if b],
                        [grid[c] for c, b in zip(chosen, labels) if not b])
                    return _found(f, rep, 1, explored, start)
            if deadline.expired():
                return SearchResult(None, None, explored, s - 1, time.monotonic() - start)
    return SearchResult(None, None, explored, limit, time.monotonic() - start)


def check_result(f: BooleanFunction, result: SearchResult, k: int = 1) -> bool:
    """Re-verify a search witness with the full-report verifier."""
    if result.witness is None:
        return False
    report = verify_nn(f, result.witness) if k == 1 else verify_knn(f, result.witness, k)
    return report.ok
