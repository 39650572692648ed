"""Closed-form matrix elements R^{a,b,c}_{i,j,k} of the eleven 3D R operators.

Each formula is a module-level function ``f(P, a, b, c, i, j, k)`` where ``P``
is a ``ParamView``.  Indices range over all integers; vanishing outside the
lattice (F_+ lines) comes out of the q-shifted factorials and the explicit
theta/delta factors, exactly as in the enlarged-index formulas.

Parameter naming: line n of type ``ABC`` carries ``r{n}, s{n}, t{n}, w{n}``
when its letter is Z or X, and ``mu{n}`` when it is O.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .exactnum import (
    Constraint,
    ParameterPoint,
    Q,
    phi_tilde,
    phi_tilde_inv,
    qbinomial,
    qpochhammer as poch,
    qpochhammer_inv as ipoch,
)

KERNEL_TYPES = ("ZZZ", "OZZ", "ZZO", "ZOZ", "OOZ", "ZOO", "OZO", "OOO", "XXZ", "ZXX", "XZX")
LOCALLY_FINITE = frozenset({"OOZ", "ZOO", "OOO"})
SECTOR_TYPES = frozenset({"OOZ", "ZOO", "OZO"})
SEEDED_TYPES = frozenset({"XXZ", "ZXX", "XZX"})


class ParamView:
    """Attribute access to a parameter point: P.r1, P.mu2, P.q, P.q2, and
    square-root witnesses as P.sq_r1 etc."""

    def __init__(self, point: ParameterPoint, d: int | None = None, seeds=(1, 1)):
        for k, v in point.values.items():
            setattr(self, k, v)
        for k, v in point.roots.items():
            setattr(self, "sq_" + k, v)
        self.q2 = self.q * self.q
        self.d = d
        self.seed0, self.seed1 = (Q(s) for s in seeds)


def param_names(typestring: str) -> list[str]:
    names = []
    for n, letter in enumerate(typestring, start=1):
        if letter == "O":
            names.append(f"mu{n}")
        else:
            names.extend(f"{p}{n}" for p in "rstw")
    return names


# --------------------------------------------------------------------------
# ZZZ: factorized, four sectors, Phi replaced by phi_tilde


def zzz_degrees(a, b, c, i, j, k):
    d1 = a + c - j
    d2 = b - i - k
    d3 = -a - b + c + i + j - k
    d4 = a - b - c - i + j + k
    return d1, d2, d3, d4


def zzz_twice_phi(d1, d2, d3, d4) -> int:
    four_phi = (d1 - d2) * (d1 + d2 + d3 + d4) + d3 * d4 - 4 * d1
    if four_phi % 2:
        raise ArithmeticError("phi is not a half-integer")
    return four_phi // 2


def r_zzz(P, a, b, c, i, j, k):
    q = P.q
    d1, d2, d3, d4 = zzz_degrees(a, b, c, i, j, k)
    h1 = P.sq_r2 / (P.sq_t1 * P.sq_t3 * P.sq_w1)
    h2 = P.sq_s2 / (P.sq_t1 * P.sq_t3 * P.sq_w3)
    h3 = P.sq_t2 / (P.sq_s1 * P.sq_t3)
    h4 = P.sq_t2 * P.sq_w2 / (P.sq_s3 * P.sq_t1 * P.sq_w1)
    val = h1**d1 * h2**d2 * h3**d3 * h4**d4 * P.sq_q ** zzz_twice_phi(d1, d2, d3, d4)
    val *= phi_tilde(d2, P.s1 * P.s3 / P.s2, q)
    val *= phi_tilde(d3, P.r3 * P.w2 / (P.s3 * P.w1), q)
    val *= phi_tilde(d4, P.r1 * P.w3 / (P.s1 * P.w2), q)
    val *= phi_tilde_inv(-d1, q * q * P.r1 * P.r3 / P.r2, q)
    val *= phi_tilde_inv(d3 + d4, P.r1 * P.r3 * P.w3 / (P.s1 * P.s3 * P.w1), q)
    return val


# --------------------------------------------------------------------------
# one O line and two Z lines: terminating series


def r_ozz(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    pre = ipoch(q2, q2, a)
    if pre == 0 or i < 0:
        return Q(0)
    pre *= (P.r2 / P.r3) ** a * (P.s3 / P.s2) ** i
    pre *= (P.t2 * P.w2 / (P.mu1 * P.s2)) ** (-b + j) * (-P.mu1 * P.t3 / P.r3) ** (-c + k)
    pre *= q ** ((a - b + j - 1) * c - (i - b + j - 1) * k - a * j + b * i)
    x = P.mu1**2 * P.s2 / (P.r2 * P.w2)
    y = P.r3 * P.w3 / (P.mu1**2 * P.s3)
    total = Q(0)
    for be in range(i + 1):
        total += (
            q ** (be * (be + 2 * j - 2 * b - 1))
            * (-y) ** be
            * qbinomial(i, be, q2)
            * poch(x * q ** (2 * k - 2 * c - 2 * be + 2), q2, a)
        )
    return pre * total


def r_ozz_series(P, a, b, c, i, j, k):
    """Same element via the 2phi1 presentation."""
    q, q2 = P.q, P.q2
    if i < 0:
        return Q(0)
    x = P.mu1**2 * P.s2 / (P.r2 * P.w2)
    y = P.r3 * P.w3 / (P.mu1**2 * P.s3)
    z = x * q ** (2 * k - 2 * c + 2)
    pre = ipoch(q2, q2, a)
    if pre == 0:
        return Q(0)
    pre *= (P.r2 / P.r3) ** a * (P.s3 / P.s2) ** i
    pre *= (P.t2 * P.w2 / (P.mu1 * P.s2)) ** (-b + j) * (-P.mu1 * P.t3 / P.r3) ** (-c + k)
    pre *= poch(z, q2, a) * q ** ((a - b + j - 1) * c - (i - b + j - 1) * k - a * j + b * i)
    return pre * _phi21(q2 ** (-i), q2 / z, q2 ** (1 - a) / z, q2, y * q ** (2 * i + 2 * j - 2 * a - 2 * b), i)


def r_zzo(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    pre = ipoch(q2, q2, c)
    if pre == 0 or k < 0:
        return Q(0)
    pre *= (P.r2 / P.r1) ** c * (P.s1 / P.s2) ** k
    pre *= (P.mu3 * P.t2 / P.s2) ** (-b + j) * (-P.t1 * P.w1 / (P.mu3 * P.r1)) ** (-a + i)
    pre *= q ** ((c - b + j - 1) * a - (k - b + j - 1) * i - c * j + b * k)
    x = P.s2 * P.w2 / (P.mu3**2 * P.r2)
    y = P.mu3**2 * P.r1 / (P.s1 * P.w1)
    total = Q(0)
    for be in range(k + 1):
        total += (
            q ** (be * (be + 2 * j - 2 * b - 1))
            * (-y) ** be
            * qbinomial(k, be, q2)
            * poch(x * q ** (2 * i - 2 * a - 2 * be + 2), q2, c)
        )
    return pre * total


def r_zzo_series(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    if k < 0:
        return Q(0)
    x = P.s2 * P.w2 / (P.mu3**2 * P.r2)
    y = P.mu3**2 * P.r1 / (P.s1 * P.w1)
    z = x * q ** (2 * i - 2 * a + 2)
    pre = ipoch(q2, q2, c)
    if pre == 0:
        return Q(0)
    pre *= (P.r2 / P.r1) ** c * (P.s1 / P.s2) ** k
    pre *= (P.mu3 * P.t2 / P.s2) ** (-b + j) * (-P.t1 * P.w1 / (P.mu3 * P.r1)) ** (-a + i)
    pre *= poch(z, q2, c) * q ** ((c - b + j - 1) * a - (k - b + j - 1) * i - c * j + b * k)
    return pre * _phi21(q2 ** (-k), q2 / z, q2 ** (1 - c) / z, q2, y * q ** (2 * j + 2 * k - 2 * b - 2 * c), k)


def r_zoz(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    if j < 0:
        return Q(0)
    pre = ipoch(q2, q2, b)
    if pre == 0:
        return Q(0)
    pre *= (P.s1 * P.s3) ** b / (P.r1 * P.r3) ** j
    pre *= (P.r1 / (P.mu2 * P.t1)) ** (a - i) * (P.mu2 * P.r3 / (P.t3 * P.w3)) ** (c - k)
    pre *= q ** ((j - b) * (a + c) + b * (a + c - i - k) - (i - a) * (k - c))
    x = P.mu2**2 * P.s1 / (P.r1 * P.w1)
    y = P.mu2**2 * P.r3 / (P.s3 * P.w3)
    total = Q(0)
    for be in range(b + 1):
        total += (
            q ** (be * (be + 2 * i - 2 * a + 1))
            * (-y) ** be
            * qbinomial(b, be, q2)
            * poch(q ** (2 * j + 2 * k - 2 * c - 2 * be) / x, 1 / q2, be)
            * poch(q ** (2 * k - 2 * c - 2 * be + 2) / x, q2, b - be)
        )
    return pre * total


def r_zoz_series(P, a, b, c, i, j, k):
    """The 3phi2-like presentation with (.; q^2)_{2 beta} factors."""
    q, q2 = P.q, P.q2
    if j < 0:
        return Q(0)
    pre = ipoch(q2, q2, b)
    if pre == 0:
        return Q(0)
    x = P.mu2**2 * P.s1 / (P.r1 * P.w1)
    y = P.mu2**2 * P.r3 / (P.s3 * P.w3)
    pre *= (P.s1 * P.s3) ** b / (P.r1 * P.r3) ** j
    pre *= (P.r1 / (P.mu2 * P.t1)) ** (a - i) * (P.mu2 * P.r3 / (P.t3 * P.w3)) ** (c - k)
    pre *= poch(q ** (2 - 2 * c + 2 * k) / x, q2, b)
    pre *= q ** ((j - b) * (a + c) + b * (a + c - i - k) - (i - a) * (k - c))
    total = Q(0)
    for be in range(b + 1):
        num = (
            poch(q ** (-2 * b), q2, be)
            * poch(q ** (2 * c - 2 * k) * x, q2, be)
            * poch(q ** (2 * c - 2 * j - 2 * k) * x, q2, 2 * be)
        )
        if num == 0:
            continue
        den = (
            poch(q2, q2, be)
            * poch(q ** (-2 * b + 2 * c - 2 * k) * x, q2, 2 * be)
            * poch(q ** (2 * c - 2 * j - 2 * k) * x, q2, be)
        )
        total += (q ** (2 * i + 2 * j - 2 * a - 2 * b + 2) * y) ** be * num / den
    return pre * total


def _phi21(alpha, beta, gamma, b, z, depth):
    from .exactnum import phi21_terminating

    if depth < 0:
        return Q(0)
    return phi21_terminating(alpha, beta, gamma, b, z, depth)


# --------------------------------------------------------------------------
# two O lines and one Z line: factorized, sector integer d


def r_ooz(P, a, b, c, i, j, k):
    q, q2, d = P.q, P.q2, P.d
    twice_e = a - c + j + k + d
    if twice_e % 2 or min(i, j) < 0 or a + b != i + j:
        return Q(0)
    e = twice_e // 2
    f = (b + c + i - k - d) // 2
    val = ipoch(q2, q2, f) * ipoch(q ** (2 * a - 2 * e), q2, e - a)
    if val == 0:
        return val
    val *= P.s3**i * (P.mu2 * P.t3) ** (-a) * (P.mu2 * P.s3 / (P.t3 * P.w3)) ** j
    val *= (P.t3**2 * P.w3 / (P.r3 * P.s3)) ** e * q ** (c * j - b * k)
    val *= poch(q ** (2 + 2 * e - 2 * j), q2, j) * poch(q ** (2 * a + 2), q2, i - a)
    return val


def r_zoo(P, a, b, c, i, j, k):
    q, q2, d = P.q, P.q2, P.d
    twice_e = -a + c + i + j - d
    if twice_e % 2 or min(j, k) < 0 or b + c != j + k:
        return Q(0)
    e = twice_e // 2
    f = (a + b - i + k + d) // 2
    val = ipoch(q2, q2, f) * ipoch(q ** (2 * c - 2 * e), q2, e - c)
    if val == 0:
        return val
    val *= P.s1**k * (P.mu2 / (P.t1 * P.w1)) ** c * (P.s1 / (P.mu2 * P.t1)) ** j
    val *= (P.t1**2 * P.w1 / (P.r1 * P.s1)) ** e * q ** (a * j - b * i)
    val *= poch(q ** (2 + 2 * e - 2 * j), q2, j) * poch(q ** (2 + 2 * c), q2, k - c)
    return val


def r_ozo(P, a, b, c, i, j, k):
    q, q2, d = P.q, P.q2, P.d
    twice_e = i + j + k - b - d - 1
    if twice_e % 2 or min(i, k) < 0 or a - c != i - k:
        return Q(0)
    e = twice_e // 2
    f = (a + b + c - j + d + 1) // 2
    val = ipoch(q2, q2, f) * ipoch(q ** (2 * i - 2 * e), q2, e - i)
    if val == 0:
        return val
    val *= P.r2**c * (P.mu3 * P.t2) ** (-k) * (P.mu3 * P.r2 / (P.t2 * P.w2)) ** i
    val *= (P.t2**2 * P.w2 / (P.r2 * P.s2)) ** e * q ** (b * k - c * j)
    val *= poch(q ** (2 + 2 * e - 2 * k), q2, k)
    return val


# --------------------------------------------------------------------------
# OOO: the A_q(sl3) intertwiner


def r_ooo(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    if a + b != i + j or b + c != j + k or min(a, b, c, i, j, k) < 0:
        return Q(0)
    val = (P.mu3 / P.mu2) ** i * (-P.mu1 / P.mu3) ** b * (P.mu2 / P.mu1) ** k
    val *= q ** (i * k + b * (k - i + 1)) * qbinomial(a + b, a, q2)
    depth = min(b, i)
    total = Q(0)
    term = Q(1)
    for n in range(depth + 1):
        if n:
            term = term * (1 - q ** (2 * n - 2 - 2 * b)) * (1 - q ** (2 * n - 2 - 2 * i)) * q ** (-2 * c)
            term = term / ((1 - q ** (2 * n - 2 - 2 * a - 2 * b)) * (1 - q2**n))
        total += term
    return val * total


# --------------------------------------------------------------------------
# XXZ / ZXX / XZX: factorized, two h-sectors with free seeds


def r_xxz(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    if a + b != i + j:
        return Q(0)
    n = a - c + j + k
    h = n % 2
    g = (n - h) // 2
    val = (P.s1 * P.s3 / P.s2) ** i * (P.s1 * P.t3 / P.t2) ** (-a)
    val *= (P.s1 * P.s3 * P.t2 * P.w2 / (P.r1 * P.s2 * P.t3 * P.w3)) ** j
    val *= (P.r2 * P.s2 / (P.t2**2 * P.w2) * P.t3**2 * P.w3 / (P.r3 * P.s3)) ** g
    val *= q ** (c * j - b * k)
    val *= poch(q ** (b + c + i - k + 2) * P.t1 * P.t2 * P.w2 / (P.r1 * P.s2), q2, g - a - b)
    val *= poch(q ** (h + 2) * P.t1 * P.w1 * P.t2 / (P.r2 * P.s1), q2, g)
    val *= poch(q ** (2 * a + 2) * P.t1**2 * P.w1 / (P.r1 * P.s1), q2, i - a)
    val *= ipoch(q ** (-b + c + i - k) * P.r2 * P.t1 / (P.r1 * P.t2), q2, g - a)
    val *= ipoch(q ** (h + 2) * P.s2 * P.t1 * P.w1 / (P.s1 * P.t2 * P.w2), q2, g - j)
    return val * (P.seed1 if h else P.seed0)


def r_zxx(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    if b + c != j + k:
        return Q(0)
    n = -a + c + i + j
    h = n % 2
    g = (n - h) // 2
    val = (P.s1 * P.s3 / P.s2) ** k * (P.s3 * P.t1 * P.w1 / (P.t2 * P.w2)) ** (-c)
    val *= (P.s1 * P.s3 * P.t2 / (P.r3 * P.s2 * P.t1)) ** j
    val *= (P.r2 * P.s2 / (P.t2**2 * P.w2) * P.t1**2 * P.w1 / (P.r1 * P.s1)) ** g
    val *= q ** (a * j - b * i)
    val *= poch(q ** (a + b - i + k + 2) * P.t2 * P.t3 * P.w3 / (P.r3 * P.s2), q2, g - b - c)
    val *= poch(q ** (h + 2) * P.t2 * P.t3 * P.w2 / (P.r2 * P.s3), q2, g)
    val *= poch(q ** (2 * c + 2) * P.t3**2 * P.w3 / (P.r3 * P.s3), q2, k - c)
    val *= ipoch(q ** (a - b - i + k) * P.r2 * P.t3 * P.w3 / (P.r3 * P.t2 * P.w2), q2, g - c)
    val *= ipoch(q ** (h + 2) * P.s2 * P.t3 / (P.s3 * P.t2), q2, g - j)
    return val * (P.seed1 if h else P.seed0)


def r_xzx(P, a, b, c, i, j, k):
    q, q2 = P.q, P.q2
    if a - c != i - k:
        return Q(0)
    n = -b + i + j + k
    h = n % 2
    g = (n - h) // 2
    val = (P.r2 / (P.r1 * P.r3)) ** c * (P.s1 * P.t3 / P.t2) ** k
    val *= (P.r2 * P.t3 * P.w3 / (P.r3 * P.t2 * P.w2)) ** i
    val *= (P.r3 * P.s3 / (P.t3**2 * P.w3) * P.t2**2 * P.w2 / (P.r2 * P.s2)) ** g
    val *= q ** (b * k - c * j)
    val *= poch(-(q ** (h + 1)) * P.t1 * P.t3 * P.w3 / (P.s1 * P.s3), q2, g)
    val *= ipoch(-(q ** (h + 1)) * P.r3 * P.t1 / (P.s1 * P.t3), q2, g - k)
    val *= poch(-(q ** (-h + 1)) * P.s3 * P.t1 * P.w1 / (P.r1 * P.t3 * P.w3), q2, i - g)
    val *= ipoch(-(q ** (-h + 3)) * P.t1 * P.t3 * P.w1 / (P.r1 * P.r3), q2, c + i - g)
    return val * (P.seed1 if h else P.seed0)


FORMULAS: dict[str, Callable] = {
    "ZZZ": r_zzz,
    "OZZ": r_ozz,
    "ZZO": r_zzo,
    "ZOZ": r_zoz,
    "OOZ": r_ooz,
    "ZOO": r_zoo,
    "OZO": r_ozo,
    "OOO": r_ooo,
    "XXZ": r_xxz,
    "ZXX": r_zxx,
    "XZX": r_xzx,
}

SERIES_FORMULAS: dict[str, Callable] = {"OZZ": r_ozz_series, "ZZO": r_zzo_series, "ZOZ": r_zoz_series}


# --------------------------------------------------------------------------
# sector constraints


def sector_constraint(tag: str, d: int) -> Constraint | None:
    """The mu relation a sector-d kernel requires (derived parameter first)."""
    if tag == "OOZ":
        return Constraint("mu1", "mu2", d)
    if tag == "ZOO":
        return Constraint("mu3", "mu2", d)
    if tag == "OZO":
        return Constraint("mu1", "mu3", d, sign=-1)
    return None


def infer_sector(tag: str, point: ParameterPoint, search: int = 64) -> int:
    """Solve the integrality condition for d; ValueError if no integer works."""
    c = sector_constraint(tag, 0)
    target, source = point[c.target], point[c.source] * c.sign
    for d in sorted(range(-search, search + 1), key=abs):
        if target == source * point.q**d:
            return d
    raise ValueError(f"{tag}: no integer d with {c.target} = {'-' if c.sign < 0 else ''}{c.source} q^d")


class SectorError(ValueError):
    """The parameter point does not admit the requested sector."""


@dataclass
class SectorData:
    d1: int | None = None
    d2: int | None = None
    d3: int | None = None
    d4: int | None = None
    phi: Fraction | None = None
    e: Fraction | None = None
    f: Fraction | None = None
    g: int | None = None
    h: int | None = None
    x: object = None
    y: object = None
    z: object = None

    def as_json(self) -> dict:
        from .report import _jsonable

        return {k: _jsonable(v) for k, v in self.__dict__.items() if v is not None}


# --------------------------------------------------------------------------
# the kernel object


@dataclass
class RKernel:
    """One 3D R at a parameter point, with a memoized element evaluator.

    ``signs`` (ZZZ only) selects the index-flipped variant for the Z-minus
    representations; ``formula`` may be overridden for fault injection, and
    ``strict=False`` skips the sector validation (also only for mutants).
    """

    tag: str
    point: ParameterPoint
    d: int | None = None
    seeds: tuple = (1, 1)
    signs: tuple[int, int, int] = (1, 1, 1)
    formula: Callable | None = None
    strict: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.tag not in FORMULAS:
            raise ValueError(f"unknown kernel type {self.tag!r}")
        if self.signs != (1, 1, 1) and self.tag != "ZZZ":
            raise ValueError("sign variants exist only for ZZZ")
        missing = [n for n in param_names(self.tag) if n not in self.point]
        if missing:
            raise ValueError(f"{self.tag} kernel missing parameters {missing}")
        if self.tag in SECTOR_TYPES:
            if self.d is None:
                self.d = self.point.ints.get("d")
            if self.d is None:
                self.d = infer_sector(self.tag, self.point)
            if isinstance(self.d, float) or int(self.d) != self.d:
                raise SectorError(f"{self.tag}: sector d must be an integer, got {self.d}")
            self.d = int(self.d)
            c = sector_constraint(self.tag, self.d)
            if self.strict and self.point[c.target] != c.sign * self.point[c.source] * self.point.q**self.d:
                raise SectorError(f"{self.tag}: parameters violate {c}")
        if self.formula is None:
            self.formula = FORMULAS[self.tag]
        self.view = ParamView(self.point, self.d, self.seeds)

    @property
    def letters(self) -> str:
        return self.tag

    @property
    def locally_finite(self) -> bool:
        return self.tag in LOCALLY_FINITE

    def __call__(self, a, b, c, i, j, k):
        key = (a, b, c, i, j, k)
        v = self._cache.get(key)
        if v is None:
            if self.signs != (1, 1, 1):
                e1, e2, e3 = self.signs
                v = self.formula(self.view, e1 * a, e2 * b, e3 * c, e1 * i, e2 * j, e3 * k)
            else:
                v = self.formula(self.view, a, b, c, i, j, k)
            self._cache[key] = v
        return v

    def element(self, out, inp):
        return self(*out, *inp)

    def support(self, out, inp) -> bool:
        return support(self.tag, self.d, out, inp)

    def sector_of(self, out, inp) -> SectorData:
        return sector_of(self.tag, self.point, self.d, out, inp)

    def with_formula(self, formula: Callable) -> "RKernel":
        return RKernel(self.tag, self.point, self.d, self.seeds, self.signs, formula, self.strict)

    def inverse(self) -> "RKernel":
        return inverse_kernel(self)


def make_kernel(tag: str, point: ParameterPoint, **kw) -> RKernel:
    return RKernel(tag, point, **kw)


# --------------------------------------------------------------------------
# supports


def _lattice_ok(tag: str, out, inp) -> bool:
    for n, letter in enumerate(tag):
        if letter == "O" and (out[n] < 0 or inp[n] < 0):
            return False
    return True


def support(tag: str, d: int | None, out, inp) -> bool:
    """False only where the element is known to vanish."""
    a, b, c = out
    i, j, k = inp
    if not _lattice_ok(tag, out, inp):
        return False
    if tag == "OOZ":
        return (a - c + j + k + d) % 2 == 0 and a + b == i + j and abs(b - i) <= k - c + d <= b + i
    if tag == "ZOO":
        return (-a + c + i + j - d) % 2 == 0 and b + c == j + k and abs(b - k) <= i - a - d <= b + k
    if tag == "OZO":
        return (i + j + k - b - d - 1) % 2 == 0 and a - c == i - k and abs(a - c) <= j - b - d - 1 <= a + c
    if tag == "OOO":
        return a + b == i + j and b + c == j + k
    if tag == "XXZ":
        return a + b == i + j
    if tag == "ZXX":
        return b + c == j + k
    if tag == "XZX":
        return a - c == i - k
    return True


@dataclass(frozen=True)
class LinCon:
    """sum(coeffs[n] * idx[n]) + const  (== 0 | >= 0 | even), idx = (a,b,c,i,j,k)."""

    coeffs: tuple[int, int, int, int, int, int]
    const: int
    kind: str


def support_constraints(tag: str, d: int | None) -> list[LinCon]:
    """Linear form of ``support`` for constraint propagation."""
    cons: list[LinCon] = []

    def add(kind, const=0, **co):
        names = "abcijk"
        cons.append(LinCon(tuple(co.get(n, 0) for n in names), const, kind))

    for n, letter in enumerate(tag):
        if letter == "O":
            add("ge", **{"abc"[n]: 1})
            add("ge", **{"ijk"[n]: 1})
    if tag == "OOZ":
        add("eq", a=1, b=1, i=-1, j=-1)
        add("even", d, a=1, c=-1, j=1, k=1)
        add("ge", d, k=1, c=-1, b=-1, i=1)  # k-c+d >= b-i
        add("ge", d, k=1, c=-1, b=1, i=-1)  # k-c+d >= i-b
        add("ge", -d, b=1, i=1, k=-1, c=1)  # b+i >= k-c+d
    elif tag == "ZOO":
        add("eq", b=1, c=1, j=-1, k=-1)
        add("even", -d, a=-1, c=1, i=1, j=1)
        add("ge", -d, i=1, a=-1, b=-1, k=1)
        add("ge", -d, i=1, a=-1, b=1, k=-1)
        add("ge", d, b=1, k=1, i=-1, a=1)
    elif tag == "OZO":
        add("eq", a=1, c=-1, i=-1, k=1)
        add("even", -d - 1, i=1, j=1, k=1, b=-1)
        add("ge", -d - 1, j=1, b=-1, a=-1, c=1)
        add("ge", -d - 1, j=1, b=-1, a=1, c=-1)
        add("ge", d + 1, a=1, c=1, j=-1, b=1)
    elif tag == "OOO":
        add("eq", a=1, b=1, i=-1, j=-1)
        add("eq", b=1, c=1, j=-1, k=-1)
    elif tag == "XXZ":
        add("eq", a=1, b=1, i=-1, j=-1)
    elif tag == "ZXX":
        add("eq", b=1, c=1, j=-1, k=-1)
    elif tag == "XZX":
        add("eq", a=1, c=-1, i=-1, k=1)
    return cons


def out_fiber(kernel: RKernel, inp) -> list[tuple[int, int, int]]:
    """All out-triples with support = True for a locally finite kernel."""
    tag, d = kernel.tag, kernel.d
    i, j, k = inp
    res = []
    if tag == "OOO":
        for a in range(i + j + 1):
            b = i + j - a
            c = j + k - b
            if c >= 0:
                res.append((a, b, c))
    elif tag == "OOZ":
        for a in range(i + j + 1):
            b = i + j - a
            for s in range(abs(b - i), b + i + 1):  # s = k - c + d
                c = k + d - s
                if support(tag, d, (a, b, c), inp):
                    res.append((a, b, c))
    elif tag == "ZOO":
        for b in range(j + k + 1):
            c = j + k - b
            for s in range(abs(b - k), b + k + 1):  # s = i - a - d
                a = i - d - s
                if support(tag, d, (a, b, c), inp):
                    res.append((a, b, c))
    else:
        raise ValueError(f"{tag} is not locally finite")
    return res


# --------------------------------------------------------------------------
# sector data


def sector_of(tag: str, point: ParameterPoint, d, out, inp) -> SectorData:
    a, b, c = out
    i, j, k = inp
    q = point.q
    sd = SectorData()
    if tag == "ZZZ":
        sd.d1, sd.d2, sd.d3, sd.d4 = zzz_degrees(a, b, c, i, j, k)
        sd.phi = Fraction(zzz_twice_phi(sd.d1, sd.d2, sd.d3, sd.d4), 2)
    elif tag == "OOZ":
        sd.e = Fraction(a - c + j + k + d, 2)
        sd.f = Fraction(b + c + i - k - d, 2)
    elif tag == "ZOO":
        sd.e = Fraction(-a + c + i + j - d, 2)
        sd.f = Fraction(a + b - i + k + d, 2)
    elif tag == "OZO":
        sd.e = Fraction(i + j + k - b - d - 1, 2)
        sd.f = Fraction(a + b + c - j + d + 1, 2)
    elif tag in ("XXZ", "ZXX", "XZX"):
        n = {"XXZ": a - c + j + k, "ZXX": -a + c + i + j, "XZX": -b + i + j + k}[tag]
        sd.h = n % 2
        sd.g = (n - sd.h) // 2
    elif tag == "OZZ":
        sd.x = point["mu1"] ** 2 * point["s2"] / (point["r2"] * point["w2"])
        sd.y = point["r3"] * point["w3"] / (point["mu1"] ** 2 * point["s3"])
        sd.z = sd.x * q ** (2 * k - 2 * c + 2)
    elif tag == "ZZO":
        sd.x = point["s2"] * point["w2"] / (point["mu3"] ** 2 * point["r2"])
        sd.y = point["mu3"] ** 2 * point["r1"] / (point["s1"] * point["w1"])
        sd.z = sd.x * q ** (2 * i - 2 * a + 2)
    elif tag == "ZOZ":
        sd.x = point["mu2"] ** 2 * point["s1"] / (point["r1"] * point["w1"])
        sd.y = point["mu2"] ** 2 * point["r3"] / (point["s3"] * point["w3"])
    return sd


# parity functional shared by every element in one component relation
PARITY_FUNCTIONALS: dict[str, Callable] = {
    "ZZZ": lambda a, b, c, i, j, k: ((a + c - j) % 2, (b - i - k) % 2),
    "OOZ": lambda a, b, c, i, j, k: (a - c + j + k) % 2,
    "XXZ": lambda a, b, c, i, j, k: (a - c + j + k) % 2,
    "ZOO": lambda a, b, c, i, j, k: (-a + c + i + j) % 2,
    "ZXX": lambda a, b, c, i, j, k: (-a + c + i + j) % 2,
    "OZO": lambda a, b, c, i, j, k: (a + b + c - j) % 2,
    "XZX": lambda a, b, c, i, j, k: (-b + i + j + k) % 2,
}


# --------------------------------------------------------------------------
# inverses


def _inv(point: ParameterPoint, name: str):
    v = 1 / point[name]
    if name in point.roots:
        return (v, 1 / point.root(name))
    return v


def _z_line_inverted(point: ParameterPoint, n: int) -> dict:
    """r <-> s, t -> t w, w -> 1/w on line n."""
    r, s, t, w = (f"{p}{n}" for p in "rstw")
    up = {}

    def keep(name, value, root=None):
        up[name] = (value, root) if root is not None else value

    R = point.roots
    keep(r, point[s], R.get(s))
    keep(s, point[r], R.get(r))
    keep(t, point[t] * point[w], R[t] * R[w] if t in R and w in R else None)
    keep(w, 1 / point[w], 1 / R[w] if w in R else None)
    return up


def inverse_kernel(kernel: RKernel) -> RKernel:
    """R^{-1} by parameter substitution, for the locally finite kernels."""
    tag, point = kernel.tag, kernel.point
    if tag not in LOCALLY_FINITE:
        raise ValueError(f"{tag} is not locally finite; no finite inverse is provided")
    up = {}
    if tag == "OOO":
        for n in (1, 2, 3):
            up[f"mu{n}"] = _inv(point, f"mu{n}")
        return RKernel(tag, point.replace(**up))
    if tag == "OOZ":
        up.update(_z_line_inverted(point, 3))
        for n in (1, 2):
            up[f"mu{n}"] = _inv(point, f"mu{n}")
    else:  # ZOO
        up.update(_z_line_inverted(point, 1))
        for n in (2, 3):
            up[f"mu{n}"] = _inv(point, f"mu{n}")
    return RKernel(tag, point.replace(**up), d=-kernel.d)


def generic_monomials(tag: str, point: ParameterPoint) -> list:
    """Parameter monomials that appear, up to q-powers, as Pochhammer bases."""
    p = point.values

    def g(name):
        return p[name]

    if tag == "ZZZ":
        return [
            g("s1") * g("s3") / g("s2"),
            g("r3") * g("w2") / (g("s3") * g("w1")),
            g("r1") * g("w3") / (g("s1") * g("w2")),
            g("r1") * g("r3") / g("r2"),
            g("r1") * g("r3") * g("w3") / (g("s1") * g("s3") * g("w1")),
        ]
    if tag in ("OZZ", "ZZO", "ZOZ"):
        sd = sector_of(tag, point, None, (0, 0, 0), (0, 0, 0))
        return [sd.x, sd.y, sd.x * sd.y]
    if tag == "XXZ":
        return [
            g("t1") * g("t2") * g("w2") / (g("r1") * g("s2")),
            g("t1") * g("w1") * g("t2") / (g("r2") * g("s1")),
            g("t1") ** 2 * g("w1") / (g("r1") * g("s1")),
            g("r2") * g("t1") / (g("r1") * g("t2")),
            g("s2") * g("t1") * g("w1") / (g("s1") * g("t2") * g("w2")),
        ]
    if tag == "ZXX":
        return [
            g("t2") * g("t3") * g("w3") / (g("r3") * g("s2")),
            g("t2") * g("t3") * g("w2") / (g("r2") * g("s3")),
            g("t3") ** 2 * g("w3") / (g("r3") * g("s3")),
            g("r2") * g("t3") * g("w3") / (g("r3") * g("t2") * g("w2")),
            g("s2") * g("t3") / (g("s3") * g("t2")),
        ]
    if tag == "XZX":
        return [
            g("t1") * g("t3") * g("w3") / (g("s1") * g("s3")),
            g("r3") * g("t1") / (g("s1") * g("t3")),
            g("s3") * g("t1") * g("w1") / (g("r1") * g("t3") * g("w3")),
            g("t1") * g("t3") * g("w1") / (g("r1") * g("r3")),
        ]
    return []


def is_generic(tag: str, point: ParameterPoint, span: int = 80) -> bool:
    """No Pochhammer base of the kernel is +-q^n with |n| <= span."""
    q = point.q
    monos = generic_monomials(tag, point)
    if not monos:
        return True
    powers = set()
    v = Q(1)
    for _ in range(span + 1):
        powers.update((v, -v, 1 / v, -1 / v))
        v *= q
    return not any(m in powers for m in monos)


def kernel_point(tag: str, seed: int, d: int | None = None, **kw) -> ParameterPoint:
    """Sample a generic parameter point for a kernel of the given type."""
    from .exactnum import sample_parameter_point

    constraints = []
    if tag in SECTOR_TYPES:
        if d is None:
            d = (seed % 5) - 2
        constraints.append(sector_constraint(tag, d))
    kw.setdefault("check", lambda p: is_generic(tag, p))
    point = sample_parameter_point(seed, param_names(tag), constraints, **kw)
    if d is not None:
        point = point.with_ints(d=d)
    return point


def describe_support_failure(tag: str, d, out, inp) -> str | None:
    """Name the first violated support condition, or None."""
    a, b, c = out
    i, j, k = inp
    for n, letter in enumerate(tag):
        if letter == "O" and (out[n] < 0 or inp[n] < 0):
            return f"F_+ lattice bound on line {n + 1}"
    if d is None:
        d = 0  # only the sector types read d
    checks: Mapping[str, list] = {
        "OOZ": [
            ("a+b = i+j", a + b == i + j),
            ("e integral", (a - c + j + k + d) % 2 == 0),
            ("|b-i| <= k-c+d <= b+i", abs(b - i) <= k - c + d <= b + i),
        ],
        "ZOO": [
            ("b+c = j+k", b + c == j + k),
            ("e integral", (-a + c + i + j - d) % 2 == 0),
            ("|b-k| <= i-a-d <= b+k", abs(b - k) <= i - a - d <= b + k),
        ],
        "OZO": [
            ("a-c = i-k", a - c == i - k),
            ("e integral", (i + j + k - b - d - 1) % 2 == 0),
            ("|a-c| <= j-b-d-1 <= a+c", abs(a - c) <= j - b - d - 1 <= a + c),
        ],
        "OOO": [("a+b = i+j", a + b == i + j), ("b+c = j+k", b + c == j + k)],
        "XXZ": [("a+b = i+j", a + b == i + j)],
        "ZXX": [("b+c = j+k", b + c == j + k)],
        "XZX": [("a-c = i-k", a - c == i - k)],
    }
    for name, ok in checks.get(tag, []):
        if not ok:
            return name
    return None
