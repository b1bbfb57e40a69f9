"""Seeded experiments over random Boolean functions.

Randomness comes from a Philox counter-based generator keyed by the seed,
with the sample index placed in the counter, so sample ``i`` is the same no
matter which samples are run or in what order.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .constructions import (
    build_covering,
    build_majority_bnn,
    build_parity_bnn,
    build_symmetric,
    build_threshold,
    cover_hypercube,
)
from .core import BooleanFunction, SymmetricSpec, ThresholdSpec, majority_spec, parity_function
from .minimize import exact_bnn
from .ptf import compile_ptf, verify_ptf
from .representation import verify_nn

KINDS = ("random-bnn", "covering-size", "compile-sweep")


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of the stream keyed by ``seed``."""
    key = int(seed) % (1 << 64)
    return np.random.Generator(np.random.Philox(key=key, counter=[0, int(index), 0, 0]))


def random_function(n: int, seed: int, index: int) -> BooleanFunction:
    bits = sample_rng(seed, index).integers(0, 2, size=1 << n)
    return BooleanFunction.from_values(n, bits)


def random_threshold_spec(n: int, seed: int, index: int, max_weight: int = 8) -> ThresholdSpec:
    """Integer weights in ``[-max_weight, max_weight]`` and a threshold between
    the smallest and largest achievable weighted sum (plus one)."""
    rng = sample_rng(seed, index)
    w = rng.integers(-max_weight, max_weight + 1, size=n)
    lo = int(w[w < 0].sum())
    hi = int(w[w > 0].sum())
    t = int(rng.integers(lo, hi + 2))
    return ThresholdSpec(tuple(int(v) for v in w), t)


@dataclass
class ExperimentConfig:
    kind: str
    arity: int
    samples: int
    seed: int = 0
    max_size: Optional[int] = None
    time_limit: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        caps = {"random-bnn": 4, "covering-size": 12, "compile-sweep": 6}
        if not 1 <= self.arity <= caps[self.kind]:
            raise ValueError(f"{self.kind} supports arity 1..{caps[self.kind]}")


def _functions(n: int, samples: int, seed: int):
    """Yield (sample index, function). When ``samples`` covers every function of
    arity ``n``, all of them are enumerated in table order instead."""
    total = 1 << (1 << n)
    if samples >= total:
        for table in range(total):
            yield table, BooleanFunction(n, table)
    else:
        for i in range(samples):
            yield i, random_function(n, seed, i)


def _random_bnn(cfg: ExperimentConfig) -> dict:
    rows = []
    hist = {}
    for i, f in _functions(cfg.arity, cfg.samples, cfg.seed):
        res = exact_bnn(f, max_size=cfg.max_size, time_limit=cfg.time_limit)
        rows.append({"sample": i, "table": f.hex(), "constant": f.is_constant(),
                     "optimum": res.optimum, "exhausted_up_to": res.exhausted_up_to})
        key = "unknown" if res.optimum is None else str(res.optimum)
        hist[key] = hist.get(key, 0) + 1
    order = sorted(hist, key=lambda k: (k == "unknown", int(k) if k != "unknown" else 0))
    return {"rows": rows, "summary": {"histogram": {k: hist[k] for k in order}}}


def _covering_size(cfg: ExperimentConfig) -> dict:
    cover = cover_hypercube(cfg.arity)
    s = cover.size
    rows = []
    for i, f in _functions(cfg.arity, cfg.samples, cfg.seed):
        rep = build_covering(f, cover)
        rows.append({"sample": i, "table": f.hex(), "size": rep.size, "cells": s,
                     "bound": 5 * s, "within_bound": rep.size <= 5 * s})
    sizes = [r["size"] for r in rows]
    return {"rows": rows, "summary": {
        "cells": s, "bound": 5 * s, "max_size": max(sizes), "min_size": min(sizes),
        "all_within_bound": all(r["within_bound"] for r in rows)}}


def _compile_row(construction: str, label: str, f: BooleanFunction, rep) -> dict:
    verified = verify_nn(f, rep).ok
    poly, params = compile_ptf(f, rep)
    return {"construction": construction, "function": label, "arity": f.arity,
            "prototypes": rep.size, "terms": len(poly.terms), "nn_ok": verified,
            "ptf_ok": verify_ptf(f, poly), **params.to_dict()}


def compile_sweep_rows(max_arity: int, samples: int, seed: int) -> list:
    rows = []
    for n in range(1, max_arity + 1):
        for mask in range(1 << (n + 1)):
            spec = SymmetricSpec(n, frozenset(lv for lv in range(n + 1) if (mask >> lv) & 1))
            label = "sym:%d:%s" % (n, ",".join(str(lv) for lv in sorted(spec.levels)))
            rows.append(_compile_row("symmetric", label, spec.function(), build_symmetric(spec)))
        for i in range(samples):
            th = random_threshold_spec(n, seed, i)
            label = "th:%d:%d:%s" % (n, th.threshold, ",".join(map(str, th.weights)))
            rows.append(_compile_row("threshold", label, th.function(), build_threshold(th)))
        maj = majority_spec(n).function()
        rows.append(_compile_row("majority-bnn", f"maj:{n}", maj, build_majority_bnn(n)))
        rows.append(_compile_row("parity-bnn", f"parity:{n}", parity_function(n),
                                 build_parity_bnn(n)))
        for i, f in _functions(n, samples, seed):
            rows.append(_compile_row("covering", str(f), f, build_covering(f)))
    return rows


def _compile_sweep(cfg: ExperimentConfig) -> dict:
    rows = compile_sweep_rows(cfg.arity, cfg.samples, cfg.seed)
    return {"rows": rows, "summary": {
        "compiled": len(rows),
        "all_ptf_ok": all(r["ptf_ok"] for r in rows),
        "terms_equal_prototypes": all(r["terms"] == r["prototypes"] for r in rows)}}


def run_experiment(cfg: ExperimentConfig) -> dict:
    runner = {"random-bnn": _random_bnn, "covering-size": _covering_size,
              "compile-sweep": _compile_sweep}[cfg.kind]
    out = runner(cfg)
    return {"config": asdict(cfg), **out}


def to_json(result: dict) -> str:
    return json.dumps(result, indent=2) + "\n"


def to_csv(result: dict) -> str:
    rows = result["rows"]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()
