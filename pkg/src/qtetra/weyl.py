"""q-Weyl algebra XZ = qZX in Z-left normal form, and its representations.

A ``WeylElement`` is a finite sum of ``c * Z**alpha * X**beta``.  Four
representations act on basis indices:

* ``Z+``: X|m> = |m-1>, Z|m> = q^m |m>            (space F)
* ``Z-``: X|m> = |m+1>, Z|m> = q^{-m} |m>         (space F)
* ``X`` : X|m> = q^m |m>, Z|m> = |m+1>            (space F)
* ``O`` : the ``X`` action restricted to m >= 0   (space F_+)

Every monomial shifts the index by a fixed amount, so operators are banded and
both forward and transposed matrix elements are finite sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .exactnum import Q


class RepTag(str, Enum):
    ZP = "Z+"
    ZM = "Z-"
    X = "X"
    O = "O"

    @property
    def nonnegative(self) -> bool:
        return self is RepTag.O


def rep_for_letter(letter: str, sign: int = 1) -> RepTag:
    if letter == "Z":
        return RepTag.ZP if sign > 0 else RepTag.ZM
    if letter == "X":
        return RepTag.X
    if letter == "O":
        return RepTag.O
    raise ValueError(f"unknown representation letter {letter!r}")


class WeylElement:
    """Immutable normal-ordered Laurent polynomial sum c Z^a X^b."""

    __slots__ = ("q", "terms")

    def __init__(self, q, terms: Mapping[tuple[int, int], object] | None = None):
        self.q = q
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def scalar(cls, q, c) -> "WeylElement":
        return cls(q, {(0, 0): c})

    @classmethod
    def monomial(cls, q, alpha: int, beta: int, c=1) -> "WeylElement":
        return cls(q, {(alpha, beta): c})

    def __repr__(self) -> str:
        parts = [f"{c}*Z^{a}X^{b}" for (a, b), c in sorted(self.terms.items())]
        return " + ".join(parts) or "0"

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple[int, int], object]]:
        return iter(self.terms.items())

    def __add__(self, other) -> "WeylElement":
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return WeylElement(self.q, out)

    __radd__ = __add__

    def __neg__(self) -> "WeylElement":
        return WeylElement(self.q, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "WeylElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "WeylElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "WeylElement":
        if not isinstance(other, WeylElement):
            return WeylElement(self.q, {k: v * other for k, v in self.terms.items()})
        return weyl_mul(self, other)

    def __rmul__(self, other) -> "WeylElement":
        return WeylElement(self.q, {k: other * v for k, v in self.terms.items()})

    def __pow__(self, n: int) -> "WeylElement":
        if n < 0:
            raise ValueError("only nonnegative powers of general elements")
        out = WeylElement.scalar(self.q, 1)
        for _ in range(n):
            out = out * self
        return out

    def _coerce(self, other) -> "WeylElement":
        if isinstance(other, WeylElement):
            return other
        return WeylElement.scalar(self.q, other)


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    """Normal-ordered product, using X^beta Z^alpha = q^{alpha beta} Z^alpha X^beta."""
    q = a.q
    out: dict[tuple[int, int], object] = {}
    for (a1, b1), c1 in a.terms.items():
        for (a2, b2), c2 in b.terms.items():
            key = (a1 + a2, b1 + b2)
            out[key] = out.get(key, 0) + c1 * c2 * q ** (b1 * a2)
    return WeylElement(q, out)


def generators(q) -> tuple[WeylElement, WeylElement]:
    """(Z, X) as elements."""
    return WeylElement.monomial(q, 1, 0), WeylElement.monomial(q, 0, 1)


def embed_oscillator(q, gen: str) -> WeylElement:
    """k -> X, a+ -> Z, a- -> Z^{-1}(1 - X^2)."""
    if gen == "k":
        return WeylElement.monomial(q, 0, 1)
    if gen == "a+":
        return WeylElement.monomial(q, 1, 0)
    if gen == "a-":
        return WeylElement(q, {(-1, 0): 1, (-1, 2): -1})
    raise ValueError(f"unknown oscillator generator {gen!r}")


# --------------------------------------------------------------------------
# banded action of monomials


def mono_shift(tag: RepTag, alpha: int, beta: int) -> int:
    if tag is RepTag.ZP:
        return -beta
    if tag is RepTag.ZM:
        return beta
    return alpha


def mono_factor(tag: RepTag, q, alpha: int, beta: int, m: int):
    """Coefficient c with Z^alpha X^beta |m> = c |m + shift>."""
    if tag is RepTag.ZP:
        return q ** (alpha * (m - beta))
    if tag is RepTag.ZM:
        return q ** (-alpha * (m + beta))
    return q ** (beta * m)


class OscillatorImageError(ValueError):
    """An O-tagged action left F_+ with a nonzero coefficient."""


def apply_rep(tag: RepTag, e: WeylElement, v: Mapping[int, object]) -> dict[int, object]:
    """Exact action of ``e`` on a finite-support vector {m: coefficient}."""
    q = e.q
    out: dict[int, object] = {}
    for m, cm in v.items():
        if tag is RepTag.O and m < 0:
            raise OscillatorImageError(f"negative index {m} in an F_+ vector")
        for (alpha, beta), c in e.terms.items():
            n = m + mono_shift(tag, alpha, beta)
            out[n] = out.get(n, 0) + c * cm * mono_factor(tag, q, alpha, beta, m)
    out = {n: c for n, c in out.items() if c != 0}
    if tag is RepTag.O:
        bad = [n for n in out if n < 0]
        if bad:
            raise OscillatorImageError(f"element maps F_+ outside itself at {bad}")
    return out


def matrix_element(tag: RepTag, e: WeylElement, out: int, inp: int):
    """<out| e |inp>."""
    return apply_rep(tag, e, {inp: Q(1)}).get(out, Q(0))


# --------------------------------------------------------------------------
# algebra relations on a window


@dataclass
class RelationFailure:
    relation: str
    index: int
    lhs: dict
    rhs: dict


def _act(tag, e, m):
    return apply_rep(tag, e, {m: Q(1)})


def check_algebra_relations(tag: RepTag, q, window: Iterable[int], *, action=None):
    """Check XZ = qZX (Weyl tags) or the four oscillator relations (O tag).

    ``action(tag, element, m)`` may be supplied to test an alternative
    (e.g. deliberately broken) representation; it defaults to ``apply_rep``.
    Returns a ``VerificationReport``.
    """
    from .report import VerificationReport

    act = action or _act
    window = list(window)
    report = VerificationReport("algebra-relations", type_tag=tag.value, window=window)

    def compose(tag, factors, m):
        vec = {m: Q(1)}
        for f in reversed(factors):
            nxt: dict[int, object] = {}
            for n, c in vec.items():
                for k, v in act(tag, f, n).items():
                    nxt[k] = nxt.get(k, 0) + c * v
            vec = {k: v for k, v in nxt.items() if v != 0}
        return vec

    def scale(vec, c):
        return {k: v * c for k, v in vec.items() if v * c != 0}

    def plus(u, w):
        out = dict(u)
        for k, v in w.items():
            out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v != 0}

    one = WeylElement.scalar(q, 1)
    if tag is RepTag.O:
        k = embed_oscillator(q, "k")
        ap = embed_oscillator(q, "a+")
        am = embed_oscillator(q, "a-")
        relations = [
            ("k a+ = q a+ k", [k, ap], [ap, k], q, None),
            ("k a- = q^-1 a- k", [k, am], [am, k], 1 / q, None),
            ("a- a+ = 1 - q^2 k^2", [am, ap], [k, k], -q * q, one),
            ("a+ a- = 1 - k^2", [ap, am], [k, k], Q(-1), one),
        ]
    else:
        z, x = generators(q)
        relations = [("X Z = q Z X", [x, z], [z, x], q, None)]

    for m in window:
        for name, lhs_f, rhs_f, c, const in relations:
            report.evaluations += 1
            lhs = compose(tag, lhs_f, m)
            rhs = scale(compose(tag, rhs_f, m), c)
            if const is not None:
                rhs = plus(rhs, compose(tag, [const], m))
            if lhs != rhs:
                report.fail(relation=name, index=m, lhs=lhs, rhs=rhs)
    report.relations = len(relations)
    return report
