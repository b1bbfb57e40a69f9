"""Compile NN representations into sign-representing polynomials over {1, 2}.

With ``x~_i = 2**x_i`` every monomial ``2**c * prod(x~_i ** e_i)`` equals
``2**(c + sum(e_i * x_i))``, so evaluation is a signed sum of powers of two
and stays exact in Python integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Sequence

from .core import BooleanFunction, point_from_index
from .representation import NNRepresentation, verify_nn


class CompileInvariantError(RuntimeError):
    pass


class RepresentationRejected(ValueError):
    """The representation does not represent the function, so it cannot be compiled."""


@dataclass(frozen=True)
class MonomialTerm:
    sign: int
    coeff_exp: int
    exponents: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.coeff_exp < 0 or any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative")

    def log2_at(self, x: Sequence[int]) -> int:
        """Exponent of 2 this term takes at Boolean ``x``."""
        return self.coeff_exp + sum(e for e, xi in zip(self.exponents, x) if xi)

    def to_dict(self) -> dict:
        return {"sign": self.sign, "c": self.coeff_exp, "e": list(self.exponents)}


@dataclass(frozen=True)
class SignPolynomial:
    dimension: int
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a sign polynomial needs at least one term")
        for t in self.terms:
            if len(t.exponents) != self.dimension:
                raise ValueError("term exponent vector has the wrong length")

    def __len__(self):
        return len(self.terms)

    def value(self, x: Sequence[int]) -> int:
        return sum(t.sign << t.log2_at(x) for t in self.terms)

    def to_dict(self) -> dict:
        return {"n": self.dimension, "terms": [t.to_dict() for t in self.terms]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SignPolynomial":
        terms = [MonomialTerm(int(t["sign"]), int(t["c"]), tuple(int(e) for e in t["e"]))
                 for t in data["terms"]]
        return cls(int(data["n"]), terms)

    @classmethod
    def loads(cls, text: str) -> "SignPolynomial":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CompilerParams:
    B: int
    M: int
    A: int

    def to_dict(self) -> dict:
        return {"B": self.B, "M": self.M, "A": self.A}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def sqdist_form(p: Sequence[Fraction]) -> list:
    """Coefficients ``[const, c_1..c_n]`` of ``sqdist(x, p)`` as a linear form on
    Boolean ``x`` (``x_i**2 = x_i``)."""
    return [sum(c * c for c in p)] + [1 - 2 * c for c in p]


def _ceil_log2(m: int) -> int:
    return max(1, (m - 1).bit_length())


def compile_ptf(f: BooleanFunction, rep: NNRepresentation,
                check: bool = True) -> tuple:
    """Turn a verified NN representation into a {1,2}-sign-representation.

    Each prototype ``p`` gives the nonnegative form
    ``B * (1 + sum x_i) - sqdist(x, p)``, scaled by ``A`` to integer
    exponents. Positive prototypes contribute ``+2**(...)``, negative ones
    ``-2**(...)``, in representation order. Returns ``(poly, params)``.
    """
    if check:
        report = verify_nn(f, rep)
        if not report.ok:
            raise RepresentationRejected(
                f"representation does not represent f: {len(report.counterexamples)} "
                f"mislabels, {len(report.tie_points)} ties")
    n = rep.dimension
    protos = [(p, 1) for p in rep.positives] + [(q, -1) for q in rep.negatives]
    forms = [sqdist_form(p) for p, _ in protos]

    # smallest integer B with B - coef >= 0 for every coefficient of every form
    B = max(1, max(-((-Fraction(c).numerator) // Fraction(c).denominator)
                   for form in forms for c in form))
    shifted = [[B - c for c in form] for form in forms]
    M = 1
    for form in shifted:
        for c in form:
            M = lcm(M, Fraction(c).denominator)
    A = _ceil_log2(len(protos)) * M

    terms = []
    for (_, sign), form in zip(protos, shifted):
        scaled = [A * c for c in form]
        if any(c.denominator != 1 or c < 0 for c in scaled):
            raise CompileInvariantError(f"non-integer or negative exponent in {scaled}")
        ints = [int(c) for c in scaled]
        terms.append(MonomialTerm(sign, ints[0], tuple(ints[1:])))
    poly = SignPolynomial(n, terms)
    bound = A * B * (n + 1)
    for t in terms:
        if t.coeff_exp + sum(t.exponents) > bound:
            raise CompileInvariantError("term exponent exceeds A*B*(n+1)")
    return poly, CompilerParams(B, M, A)


def eval_sign(poly: SignPolynomial, x: Sequence[int]) -> int:
    """Sign (+1, -1 or 0) of the polynomial at ``x~ = 2**x``."""
    if len(x) != poly.dimension:
        raise ValueError("dimension mismatch")
    v = poly.value(x)
    return (v > 0) - (v < 0)


def verify_ptf(f: BooleanFunction, poly: SignPolynomial) -> bool:
    """True iff ``p(x~) >= 0`` exactly on the points where ``f`` is 1."""
    if f.arity != poly.dimension:
        raise ValueError("dimension mismatch")
    n = f.arity
    return all((eval_sign(poly, point_from_index(i, n)) >= 0) == bool(f.value_at(i))
               for i in range(1 << n))


def margin_holds(f: BooleanFunction, poly: SignPolynomial, x: Sequence[int]) -> bool:
    """Whether the largest term of the winning sign outweighs all opposite terms.

    This is the domination property the compiled polynomial is built to have;
    it implies the correct sign at ``x`` but is stronger.
    """
    want = 1 if f(x) else -1
    mine = [t.log2_at(x) for t in poly.terms if t.sign == want]
    other = sum(1 << t.log2_at(x) for t in poly.terms if t.sign != want)
    if not mine:
        return False
    return (1 << max(mine)) > other


def value_bound(poly: SignPolynomial, params: CompilerParams) -> int:
    """Upper bound ``(p + q) * 2**(A*B*(n+1))`` on ``|p(x~)|``."""
    return len(poly.terms) << (params.A * params.B * (poly.dimension + 1))


def lower_bound_for(family: str) -> int | None:
    """Known minimum term count of any {1,2}-sign-representation for a family spec.

    ``parity:n`` needs ``n + 1`` terms and ``ip:n`` needs ``2**(n/2)``
    (rounded up); other families have no bound here.
    """
    parts = family.strip().split(":")
    name = parts[0].lower()
    if len(parts) < 2:
        return None
    try:
        n = int(parts[1])
    except ValueError:
        return None
    if name == "parity":
        return n + 1
    if name == "ip":
        if n % 2 == 0:
            return 1 << (n // 2)
        # ceil(sqrt(2**n)) for odd n
        return isqrt((1 << n) - 1) + 1
    return None


def term_count_report(family: str, poly: SignPolynomial) -> dict:
    bound = lower_bound_for(family)
    m = len(poly.terms)
    return {
        "family": family,
        "terms": m,
        "bound": bound,
        "meets": None if bound is None else m >= bound,
    }
