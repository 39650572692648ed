"""3D L operators and the triple composites on both sides of RLLL = LLLR."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exactnum import Q
from .weyl import RepTag, WeylElement, embed_oscillator, mono_shift

VIndex = tuple[int, int, int, int, int, int]

# (a, b, i, j) keys of the six weight-conserving entries
ENTRY_KEYS = ((0, 0, 0, 0), (1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0))


@dataclass(frozen=True)
class LOperator:
    """Table (a, b, i, j) -> WeylElement, zero unless a + b == i + j."""

    tag: RepTag
    q: object
    entries: Mapping[tuple[int, int, int, int], WeylElement]
    params: Mapping[str, object] = field(default_factory=dict)

    def entry(self, a: int, b: int, i: int, j: int) -> WeylElement:
        e = self.entries.get((a, b, i, j))
        return e if e is not None else WeylElement(self.q)


def _weyl_entries(q, r, s, t, w) -> dict:
    E = WeylElement
    return {
        (0, 0, 0, 0): E.scalar(q, r),
        (1, 1, 1, 1): E.scalar(q, s),
        (1, 0, 1, 0): E.monomial(q, 0, 1, t * w),
        (0, 1, 0, 1): E.monomial(q, 0, 1, -q * t),
        (1, 0, 0, 1): E.monomial(q, 1, 0),
        (0, 1, 1, 0): E(q, {(-1, 0): r * s, (-1, 2): -t * t * w}),
    }


def build_L(tag: RepTag | str, q, *, r=None, s=None, t=None, w=None, mu=None, scale=1) -> LOperator:
    """L^Z / L^X from a quartet (r, s, t, w), or L^O from mu.

    For the O tag a quartet is accepted only if it equals (1, 1, 1/mu, mu^2).
    ``scale`` multiplies every entry (used for inverses).
    """
    tag = RepTag(tag)
    if tag is RepTag.O:
        if mu is None:
            if None in (r, s, t, w):
                raise ValueError("O-tagged L needs mu")
            mu = 1 / t
            if (r, s, w) != (1, 1, mu * mu):
                raise ValueError("quartet is not of oscillator form (1, 1, 1/mu, mu^2)")
        E = WeylElement
        entries = {
            (0, 0, 0, 0): E.scalar(q, Q(1)),
            (1, 1, 1, 1): E.scalar(q, Q(1)),
            (1, 0, 1, 0): embed_oscillator(q, "k") * mu,
            (0, 1, 0, 1): embed_oscillator(q, "k") * (-q / mu),
            (1, 0, 0, 1): embed_oscillator(q, "a+"),
            (0, 1, 1, 0): embed_oscillator(q, "a-"),
        }
        params = {"mu": mu}
    else:
        if None in (r, s, t, w):
            raise ValueError(f"{tag.value}-tagged L needs r, s, t, w")
        entries = _weyl_entries(q, r, s, t, w)
        params = {"r": r, "s": s, "t": t, "w": w}
    if scale != 1:
        entries = {k: v * scale for k, v in entries.items()}
        params["scale"] = scale
    return LOperator(tag, q, entries, params)


def invert_L(L: LOperator) -> LOperator:
    """(L_{r,s,t,w})^{-1} = (rs)^{-1} L_{s,r,tw,1/w};  (L^O_mu)^{-1} = L^O_{1/mu}."""
    p = L.params
    scale = p.get("scale", 1)
    if L.tag is RepTag.O:
        if scale != 1:
            raise ValueError("scaled oscillator L has no oscillator inverse")
        return build_L(RepTag.O, L.q, mu=1 / p["mu"])
    r, s, t, w = p["r"], p["s"], p["t"], p["w"]
    return build_L(L.tag, L.q, r=s, s=r, t=t * w, w=1 / w, scale=1 / (r * s * scale))


def line_L(letter: str, point, line: int, sign: int = 1) -> LOperator:
    """L operator of letter Z/X/O using parameters r{line}.. or mu{line} from a point."""
    from .weyl import rep_for_letter

    tag = rep_for_letter(letter, sign)
    q = point.q
    if tag is RepTag.O:
        return build_L(tag, q, mu=point[f"mu{line}"])
    return build_L(
        tag, q, r=point[f"r{line}"], s=point[f"s{line}"], t=point[f"t{line}"], w=point[f"w{line}"]
    )


# --------------------------------------------------------------------------
# triple composites


Mono = tuple[int, int]


class TripleOp:
    """Banded operator sum c * (m1 (x) m2 (x) m3) on three index lines.

    Forward and transposed matrix elements are computed without truncation.
    """

    __slots__ = ("q", "tags", "terms", "_compiled")

    def __init__(self, q, tags: Sequence[RepTag], terms: Mapping[tuple[Mono, Mono, Mono], object]):
        self.q = q
        self.tags = tuple(tags)
        self.terms = {k: v for k, v in terms.items() if v != 0}
        self._compiled = None

    @classmethod
    def tensor(cls, tags, e1: WeylElement, e2: WeylElement, e3: WeylElement) -> "TripleOp":
        terms: dict = {}
        for m1, c1 in e1:
            for m2, c2 in e2:
                for m3, c3 in e3:
                    key = (m1, m2, m3)
                    terms[key] = terms.get(key, 0) + c1 * c2 * c3
        return cls(e1.q, tags, terms)

    def __add__(self, other: "TripleOp") -> "TripleOp":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return TripleOp(self.q, self.tags, terms)

    def __mul__(self, c) -> "TripleOp":
        return TripleOp(self.q, self.tags, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, TripleOp) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"TripleOp({len(self.terms)} terms, tags={[t.value for t in self.tags]})"

    def _compile(self):
        if self._compiled is None:
            rows = []
            for (m1, m2, m3), c in self.terms.items():
                shifts = []
                slopes = []
                offset = 0
                for tag, (alpha, beta) in zip(self.tags, (m1, m2, m3)):
                    shifts.append(mono_shift(tag, alpha, beta))
                    if tag is RepTag.ZP:
                        slopes.append(alpha)
                        offset -= alpha * beta
                    elif tag is RepTag.ZM:
                        slopes.append(-alpha)
                        offset -= alpha * beta
                    else:
                        slopes.append(beta)
                rows.append((c, tuple(shifts), tuple(slopes), offset))
            self._compiled = rows
        return self._compiled

    def forward(self, inp: tuple[int, int, int]) -> dict[tuple[int, int, int], object]:
        """op|inp> as {mid: coefficient}; F_+ lines never leave F_+."""
        q = self.q
        i1, i2, i3 = inp
        out: dict = {}
        for c, (h1, h2, h3), (s1, s2, s3), off in self._compile():
            key = (i1 + h1, i2 + h2, i3 + h3)
            out[key] = out.get(key, 0) + c * q ** (s1 * i1 + s2 * i2 + s3 * i3 + off)
        res = {}
        for key, v in out.items():
            if v == 0:
                continue
            if any(t is RepTag.O and m < 0 for t, m in zip(self.tags, key)):
                raise ValueError(f"operator leaves F_+ at {key} from {inp}")
            res[key] = v
        return res

    def transpose(self, out_idx: tuple[int, int, int]) -> dict[tuple[int, int, int], object]:
        """{mid: <out_idx| op |mid>} over lattice points mid."""
        q = self.q
        o1, o2, o3 = out_idx
        res: dict = {}
        t1, t2, t3 = (t is RepTag.O for t in self.tags)
        for c, (h1, h2, h3), (s1, s2, s3), off in self._compile():
            m1, m2, m3 = o1 - h1, o2 - h2, o3 - h3
            if (t1 and m1 < 0) or (t2 and m2 < 0) or (t3 and m3 < 0):
                continue
            key = (m1, m2, m3)
            res[key] = res.get(key, 0) + c * q ** (s1 * m1 + s2 * m2 + s3 * m3 + off)
        return {k: v for k, v in res.items() if v != 0}


def composite(side: str, Ls: Sequence[LOperator], v: VIndex) -> TripleOp:
    """Left: sum L1^{al be}_{ij} (x) L2^{a ga}_{al k} (x) L3^{bc}_{be ga}.
    Right: sum L1^{ab}_{al be} (x) L2^{al c}_{i ga} (x) L3^{be ga}_{jk}.
    """
    L1, L2, L3 = Ls
    a, b, c, i, j, k = v
    tags = (L1.tag, L2.tag, L3.tag)
    total = TripleOp(L1.q, tags, {})
    for al, be, ga in itertools.product((0, 1), repeat=3):
        if side == "left":
            e1, e2, e3 = L1.entry(al, be, i, j), L2.entry(a, ga, al, k), L3.entry(b, c, be, ga)
        elif side == "right":
            e1, e2, e3 = L1.entry(a, b, al, be), L2.entry(al, c, i, ga), L3.entry(be, ga, j, k)
        else:
            raise ValueError("side must be 'left' or 'right'")
        if e1 and e2 and e3:
            total = total + TripleOp.tensor(tags, e1, e2, e3)
    return total


def all_vtuples() -> list[VIndex]:
    return [v for v in itertools.product((0, 1), repeat=6) if v[0] + v[1] + v[2] == v[3] + v[4] + v[5]]


TRIVIAL_VTUPLES = ((0, 0, 0, 0, 0, 0), (1, 1, 1, 1, 1, 1))


def nontrivial_vtuples() -> list[VIndex]:
    return [v for v in all_vtuples() if v not in TRIVIAL_VTUPLES]


def conservation_audit(typestring: str | None = None) -> int:
    """Number of non-trivial component equations (the same for every type)."""
    return len(nontrivial_vtuples())


def compose_check(L: LOperator, Linv: LOperator, window: Iterable[int]) -> list:
    """Return the basis states (v, v', m) where Linv * L differs from identity."""
    from .weyl import apply_rep

    bad = []
    for i, j in itertools.product((0, 1), repeat=2):
        for m in window:
            # L (v_i (x) v_j (x) |m>) = sum_{a,b} v_a (x) v_b (x) L^{ab}_{ij}|m>
            acc: dict = {}
            for a, b in itertools.product((0, 1), repeat=2):
                vec = apply_rep(L.tag, L.entry(a, b, i, j), {m: Q(1)})
                if not vec:
                    continue
                for c, d in itertools.product((0, 1), repeat=2):
                    w = apply_rep(Linv.tag, Linv.entry(c, d, a, b), vec)
                    for n, val in w.items():
                        acc[(c, d, n)] = acc.get((c, d, n), 0) + val
            acc = {k: v for k, v in acc.items() if v != 0}
            if acc != {(i, j, m): 1}:
                bad.append((i, j, m))
    return bad
