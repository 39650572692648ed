"""Exact scalars, parameter points and the q-special functions.

The scalar type ``Q`` is ``gmpy2.mpq`` when gmpy2 is importable and
``fractions.Fraction`` otherwise (or when ``QTETRA_BACKEND=fraction``).
Both are exact; gmpy2 is roughly an order of magnitude faster.
"""

from __future__ import annotations

import os
import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from . import _core

if os.environ.get("QTETRA_BACKEND", "").lower() == "fraction":
    Q = Fraction
    BACKEND = "fraction"
else:
    try:
        from gmpy2 import mpq as Q

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - exercised only without gmpy2
        Q = Fraction
        BACKEND = "fraction"


class DegenerateParameterError(ArithmeticError):
    """A denominator factor vanished at the configured parameter point."""


class MissingWitnessError(KeyError):
    """A half-integer power was requested of a parameter without a square root."""


def to_q(x) -> "Q":
    """Coerce int, Fraction, mpq or a 'num/den' string to the active scalar type."""
    if isinstance(x, str):
        f = Fraction(x)
        return Q(f.numerator, f.denominator)
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


def format_q(x) -> str:
    """Serialize as 'num/den' (or 'num' for integers)."""
    x = to_q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# q-special functions


def qpochhammer(z, b, m: int):
    """(z; b)_m for every integer m, using (z; b)_m = 1/(z b^m; b)_{-m} when m < 0."""
    try:
        return _core.qpoch(z, b, m)
    except ZeroDivisionError as exc:
        raise DegenerateParameterError(str(exc)) from None


def qpochhammer_inv(z, b, m: int):
    """1/(z; b)_m.  For m < 0 this is a finite product and may legitimately be 0."""
    try:
        return _core.qpoch_inv(z, b, m)
    except ZeroDivisionError as exc:
        raise DegenerateParameterError(str(exc)) from None


def qbinomial(n: int, m: int, b):
    """Gaussian binomial in base b; zero unless 0 <= m <= n."""
    if m < 0 or m > n:
        return Q(0)
    m = min(m, n - m)
    num = Q(1)
    den = Q(1)
    for s in range(1, m + 1):
        num *= 1 - b ** (n - m + s)
        den *= 1 - b**s
    if den == 0:
        raise DegenerateParameterError("root of unity base in q-binomial")
    return num / den


def phi21_terminating(alpha, beta, gamma, b, z, depth: int):
    """Terminating 2phi1 summed over n = 0..depth.

    ``depth`` is the caller's exponent bookkeeping: alpha or beta must equal
    b**(-depth), so that every term beyond ``depth`` vanishes.
    """
    if depth < 0:
        raise ValueError("termination depth must be nonnegative")
    target = b ** (-depth)
    if alpha != target and beta != target:
        raise ValueError("series does not terminate at the stated depth")
    total = Q(0)
    term = Q(1)
    for n in range(depth + 1):
        if n:
            den = (1 - gamma * b ** (n - 1)) * (1 - b**n)
            if den == 0:
                raise DegenerateParameterError("vanishing denominator in 2phi1")
            term = term * (1 - alpha * b ** (n - 1)) * (1 - beta * b ** (n - 1)) * z / den
        total += term
    return total


@lru_cache(maxsize=1 << 16)
def phi_tilde(m: int, z, q):
    """Normalized Phi: (z; q^2)_{m/2} for even m, (zq; q^2)_{(m-1)/2} for odd m."""
    b = q * q
    if m % 2 == 0:
        return qpochhammer(z, b, m // 2)
    return qpochhammer(z * q, b, (m - 1) // 2)


@lru_cache(maxsize=1 << 16)
def phi_tilde_inv(m: int, z, q):
    """1/phi_tilde(m, z, q), finite for negative m."""
    b = q * q
    if m % 2 == 0:
        return qpochhammer_inv(z, b, m // 2)
    return qpochhammer_inv(z * q, b, (m - 1) // 2)


# --------------------------------------------------------------------------
# parameter points


@dataclass(frozen=True)
class Constraint:
    """target = sign * source * q**exponent (exponent an integer)."""

    target: str
    source: str
    exponent: int
    sign: int = 1


@dataclass(frozen=True)
class ParameterPoint:
    """Named rational parameters, with square-root witnesses where available.

    ``values`` must contain ``q``.  ``roots[name]**2 == values[name]`` for every
    name in ``roots``.  ``ints`` carries integer sector data (d, d', ...).
    """

    values: Mapping[str, object]
    roots: Mapping[str, object] = field(default_factory=dict)
    ints: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if "q" not in self.values:
            raise ValueError("parameter point needs q")
        q = self.values["q"]
        if q in (0, 1, -1):
            raise ValueError("q must avoid 0 and +-1")
        for name, v in self.values.items():
            if v == 0:
                raise ValueError(f"parameter {name} is zero")
        for name, rho in self.roots.items():
            if rho * rho != self.values[name]:
                raise ValueError(f"bad square-root witness for {name}")

    def __getitem__(self, name: str):
        return self.values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.values

    @property
    def q(self):
        return self.values["q"]

    def root(self, name: str):
        try:
            return self.roots[name]
        except KeyError:
            raise MissingWitnessError(name) from None

    def replace(self, **updates) -> "ParameterPoint":
        """Return a copy with some values replaced; witnesses are squared-checked.

        Pass ``name=(value, root)`` to keep a witness, or a bare value to drop it.
        """
        values = dict(self.values)
        roots = dict(self.roots)
        for name, v in updates.items():
            if isinstance(v, tuple):
                values[name], roots[name] = v
            else:
                values[name] = v
                roots.pop(name, None)
        return ParameterPoint(values, roots, dict(self.ints))

    def with_ints(self, **ints: int) -> "ParameterPoint":
        merged = dict(self.ints)
        merged.update(ints)
        return ParameterPoint(dict(self.values), dict(self.roots), merged)

    def rename(self, mapping: Mapping[str, str]) -> "ParameterPoint":
        """Pick parameters by source name into new names; q is always carried."""
        values = {"q": self.values["q"]}
        roots = {"q": self.roots["q"]} if "q" in self.roots else {}
        for new, old in mapping.items():
            values[new] = self.values[old]
            if old in self.roots:
                roots[new] = self.roots[old]
        return ParameterPoint(values, roots, dict(self.ints))

    def as_json(self) -> dict:
        return {
            "values": {k: format_q(v) for k, v in sorted(self.values.items())},
            "roots": {k: format_q(v) for k, v in sorted(self.roots.items())},
            "ints": dict(sorted(self.ints.items())),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ParameterPoint":
        return cls(
            {k: to_q(v) for k, v in doc["values"].items()},
            {k: to_q(v) for k, v in doc.get("roots", {}).items()},
            {k: int(v) for k, v in doc.get("ints", {}).items()},
        )


def qpow_half(point: ParameterPoint, name: str, e):
    """point[name] ** e for e in (1/2)Z, via the stored witness."""
    twice = Fraction(e) * 2
    if twice.denominator != 1:
        raise ValueError("exponent must be a half-integer")
    return point.root(name) ** int(twice)


QUARTET = ("r", "s", "t", "w")

# Witness numerators/denominators are drawn from here.  Small primes keep the
# rationals short while making accidental q-power coincidences rare.
_WITNESS_POOL = (2, 3, 5, 7, 11, 13)


def _sample_witness(rng: random.Random, *, avoid_unit: bool = False):
    while True:
        num = rng.choice((1,) + _WITNESS_POOL)
        den = rng.choice((1,) + _WITNESS_POOL)
        rho = Q(num, den) * rng.choice((1, -1))
        if avoid_unit and rho * rho == 1:
            continue
        return rho


def sample_parameter_point(
    seed: int,
    names: Iterable[str],
    constraints: Iterable[Constraint] = (),
    *,
    check: Callable[[ParameterPoint], bool] | None = None,
    budget: int = 200,
) -> ParameterPoint:
    """Deterministically sample a nondegenerate point.

    Every freely sampled parameter (and q) is the square of a sampled rational.
    Constrained parameters are derived from their source; they keep a witness
    when the sign allows it.  ``check`` is the caller's nondegeneracy test
    (return False or raise DegenerateParameterError to resample).
    """
    names = [n for n in names if n != "q"]
    constraints = list(constraints)
    derived = {c.target for c in constraints}
    rng = random.Random(seed)
    for _ in range(budget):
        rq = _sample_witness(rng, avoid_unit=True)
        values = {"q": rq * rq}
        roots = {"q": rq}
        for n in names:
            if n in derived:
                continue
            rho = _sample_witness(rng)
            values[n] = rho * rho
            roots[n] = rho
        pending = list(constraints)
        while pending:
            progressed = False
            for c in list(pending):
                if c.source not in values:
                    continue
                values[c.target] = c.sign * values[c.source] * values["q"] ** c.exponent
                if c.sign == 1 and c.source in roots:
                    roots[c.target] = roots[c.source] * rq**c.exponent
                pending.remove(c)
                progressed = True
            if not progressed:
                raise ValueError("constraint sources are cyclic or unsampled")
        try:
            point = ParameterPoint(values, roots)
        except ValueError:
            continue
        if check is None:
            return point
        try:
            if check(point):
                return point
        except DegenerateParameterError:
            pass
    raise RuntimeError("parameter resampling budget exhausted")
