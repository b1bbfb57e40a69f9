"""NN and k-NN representations and their exact verification."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    BooleanFunction,
    as_point,
    format_rational,
    index_of,
    point_from_index,
    scaled_sqdist_matrix,
    sqdist,
)

# verification works through the cube in blocks of this many points
_CHUNK = 1 << 15


class Label(enum.Enum):
    POSITIVE = 1
    NEGATIVE = 0

    @classmethod
    def of(cls, value) -> "Label":
        return cls.POSITIVE if value else cls.NEGATIVE

    def __str__(self):
        return self.name.lower()


class RepresentationError(ValueError):
    pass


class TieError(RepresentationError):
    """The nearest positive and nearest negative prototype are equidistant."""


class EmptyRepresentation(RepresentationError):
    pass


class WellDefinednessError(RepresentationError):
    """The k-th and (k+1)-th smallest distances coincide."""


class KTooLarge(RepresentationError):
    pass


@dataclass(frozen=True)
class NNRepresentation:
    dimension: int
    positives: tuple
    negatives: tuple

    def __post_init__(self):
        pos = tuple(as_point(p) for p in self.positives)
        neg = tuple(as_point(p) for p in self.negatives)
        for p in pos + neg:
            if len(p) != self.dimension:
                raise RepresentationError(
                    f"prototype {p} does not have dimension {self.dimension}")
        if len(set(pos)) != len(pos) or len(set(neg)) != len(neg):
            raise RepresentationError("duplicate prototype within one side")
        if set(pos) & set(neg):
            raise RepresentationError("positive and negative prototypes overlap")
        object.__setattr__(self, "positives", pos)
        object.__setattr__(self, "negatives", neg)

    @property
    def size(self) -> int:
        return len(self.positives) + len(self.negatives)

    def __len__(self):
        return self.size

    def prototypes(self) -> list:
        """All prototypes, positives first, each paired with its label."""
        return ([(p, Label.POSITIVE) for p in self.positives]
                + [(q, Label.NEGATIVE) for q in self.negatives])

    def is_boolean(self) -> bool:
        return all(c in (0, 1) for p, _ in self.prototypes() for c in p)

    def permuted(self, perm: Sequence[int]) -> "NNRepresentation":
        """Coordinate ``i`` of the result is coordinate ``perm[i]`` of the input."""
        return NNRepresentation(
            self.dimension,
            [tuple(p[j] for j in perm) for p in self.positives],
            [tuple(p[j] for j in perm) for p in self.negatives])

    def translated(self, shift: Sequence) -> "NNRepresentation":
        shift = as_point(shift)
        return NNRepresentation(
            self.dimension,
            [tuple(c + s for c, s in zip(p, shift)) for p in self.positives],
            [tuple(c + s for c, s in zip(p, shift)) for p in self.negatives])

    # -- serialization --

    def to_dict(self) -> dict:
        return {
            "n": self.dimension,
            "positives": [[format_rational(c) for c in p] for p in self.positives],
            "negatives": [[format_rational(c) for c in p] for p in self.negatives],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "NNRepresentation":
        return cls(int(data["n"]), data.get("positives", []), data.get("negatives", []))

    @classmethod
    def loads(cls, text: str) -> "NNRepresentation":
        return cls.from_dict(json.loads(text))


@dataclass
class VerificationReport:
    ok: bool
    counterexamples: list = field(default_factory=list)
    tie_points: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "counterexamples": [
                {"point": list(p), "expected": str(exp), "observed": str(obs)}
                for p, exp, obs in self.counterexamples],
            "tie_points": [list(p) for p in self.tie_points],
        }


def _check_point(rep: NNRepresentation, a: Sequence[int]) -> tuple:
    if len(a) != rep.dimension:
        raise ValueError(f"point of length {len(a)} for dimension {rep.dimension}")
    return tuple(a)


def classify_nn(rep: NNRepresentation, a: Sequence[int]) -> Label:
    """Label of the strictly nearest prototype class at ``a``.

    An empty side counts as infinitely far away.
    """
    a = _check_point(rep, a)
    if rep.size == 0:
        raise EmptyRepresentation("representation has no prototypes")
    dp = min((sqdist(a, p) for p in rep.positives), default=None)
    dn = min((sqdist(a, q) for q in rep.negatives), default=None)
    if dn is None or (dp is not None and dp < dn):
        return Label.POSITIVE
    if dp is None or dn < dp:
        return Label.NEGATIVE
    raise TieError(f"tie at {a}: nearest squared distance {dp} on both sides")


def _nearest_side(S: np.ndarray, p: int) -> tuple:
    """Masks (positive wins, negative wins) from a distance matrix, positives first."""
    rows = S.shape[0]
    if p == 0:
        return np.zeros(rows, dtype=bool), np.ones(rows, dtype=bool)
    if p == S.shape[1]:
        return np.ones(rows, dtype=bool), np.zeros(rows, dtype=bool)
    min_p = S[:, :p].min(axis=1)
    min_n = S[:, p:].min(axis=1)
    return min_p < min_n, min_n < min_p


def _nn_outcomes(f: BooleanFunction, rep: NNRepresentation, start: int, stop: int):
    """Yield (index, expected, observed-or-None) for mismatching points in a block."""
    idx = np.arange(start, stop, dtype=np.int64)
    protos = list(rep.positives) + list(rep.negatives)
    S = scaled_sqdist_matrix(protos, rep.dimension, idx)
    pos, neg = _nearest_side(S, len(rep.positives))
    vals = f.values()[start:stop].astype(bool)
    bad = np.flatnonzero(~((vals & pos) | (~vals & neg)))
    for j in bad:
        observed = Label.POSITIVE if pos[j] else Label.NEGATIVE if neg[j] else None
        yield int(idx[j]), Label.of(vals[j]), observed


def _check_dims(f: BooleanFunction, rep: NNRepresentation) -> None:
    if f.arity != rep.dimension:
        raise ValueError(f"function arity {f.arity} != representation dimension "
                         f"{rep.dimension}")
    if rep.size == 0:
        raise EmptyRepresentation("representation has no prototypes")


def verify_nn(f: BooleanFunction, rep: NNRepresentation) -> VerificationReport:
    """Check every point of the cube; report all mislabels and ties in index order."""
    _check_dims(f, rep)
    n = f.arity
    counter, ties = [], []
    for start in range(0, 1 << n, _CHUNK):
        stop = min(1 << n, start + _CHUNK)
        for i, expected, observed in _nn_outcomes(f, rep, start, stop):
            pt = point_from_index(i, n)
            if observed is None:
                ties.append(pt)
            else:
                counter.append((pt, expected, observed))
    return VerificationReport(not counter and not ties, counter, ties)


def represents(f: BooleanFunction, rep: NNRepresentation) -> bool:
    """Early-abort form of ``verify_nn(f, rep).ok``."""
    _check_dims(f, rep)
    for start in range(0, 1 << f.arity, _CHUNK):
        stop = min(1 << f.arity, start + _CHUNK)
        for _ in _nn_outcomes(f, rep, start, stop):
            return False
    return True


def classify_knn(rep: NNRepresentation, a: Sequence[int], k: int) -> Label:
    """Majority label among the ``k`` nearest prototypes.

    Positive iff at least ``k/2`` of them are positive. Raises
    :class:`WellDefinednessError` if the k-th and (k+1)-th smallest distances
    are equal, since then "the k nearest" is not a well-defined set.

    ``k = 1`` is plain nearest-neighbor classification: equally near
    prototypes of the same label are harmless, and only a tie between the
    two classes raises.
    """
    a = _check_point(rep, a)
    m = rep.size
    if k < 1:
        raise ValueError("k must be positive")
    if m == 0:
        raise EmptyRepresentation("representation has no prototypes")
    if k > m:
        raise KTooLarge(f"k={k} exceeds representation size {m}")
    if k == 1:
        try:
            return classify_nn(rep, a)
        except TieError as exc:
            raise WellDefinednessError(str(exc)) from None
    dists = sorted(((sqdist(a, p), lab) for p, lab in rep.prototypes()),
                   key=lambda t: t[0])
    if k < m and dists[k - 1][0] == dists[k][0]:
        raise WellDefinednessError(
            f"at {a}: {k}-th and {k + 1}-th smallest distances are both {dists[k][0]}")
    positives = sum(1 for _, lab in dists[:k] if lab is Label.POSITIVE)
    return Label.of(2 * positives >= k)


def verify_knn(f: BooleanFunction, rep: NNRepresentation, k: int) -> VerificationReport:
    _check_dims(f, rep)
    m = rep.size
    if k < 1:
        raise ValueError("k must be positive")
    if k > m:
        raise KTooLarge(f"k={k} exceeds representation size {m}")
    if k == 1:
        return verify_nn(f, rep)
    n = f.arity
    labels = np.array([1] * len(rep.positives) + [0] * len(rep.negatives), dtype=np.int64)
    protos = list(rep.positives) + list(rep.negatives)
    counter, ties = [], []
    for start in range(0, 1 << n, _CHUNK):
        stop = min(1 << n, start + _CHUNK)
        idx = np.arange(start, stop, dtype=np.int64)
        S = scaled_sqdist_matrix(protos, n, idx)
        order = np.argsort(S, axis=1, kind="stable")
        srt = np.take_along_axis(S, order, axis=1)
        if k < m:
            tied = srt[:, k - 1] == srt[:, k]
        else:
            tied = np.zeros(len(idx), dtype=bool)
        pos_count = labels[order[:, :k]].sum(axis=1)
        predicted = 2 * pos_count >= k
        vals = f.values()[start:stop].astype(bool)
        for j in np.flatnonzero(tied | (predicted != vals)):
            pt = point_from_index(int(idx[j]), n)
            if tied[j]:
                ties.append(pt)
            else:
                counter.append((pt, Label.of(vals[j]), Label.of(predicted[j])))
    return VerificationReport(not counter and not ties, counter, ties)


def label_point(f: BooleanFunction, a: Sequence[int]) -> Label:
    return Label.of(f.value_at(index_of(a)))
