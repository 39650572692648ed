"""The quantized coordinate ring A_q(sl3) in the q-Weyl algebra.

Two algebra maps rho_1, rho_2 send the generators t_{lm} to Weyl elements.
Through the Z, X or O representations they give triple tensor operators whose
intertwiners are the OOO and ZZZ 3D R operators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from . import _core
from .exactnum import ParameterPoint, Q
from .kernels import RKernel
from .lops import TripleOp, build_L, composite
from .report import VerificationReport
from .weyl import RepTag, WeylElement, apply_rep

GEN = tuple(itertools.product((1, 2, 3), repeat=2))


@dataclass(frozen=True)
class GeneratorImage:
    """rho_which(t_{lm}) for 1 <= l, m <= 3."""

    which: int
    q: object
    u: object
    g: object
    h: object
    table: Mapping[tuple[int, int], WeylElement] = field(repr=False)

    def __getitem__(self, lm: tuple[int, int]) -> WeylElement:
        return self.table[lm]


def rho_images(which: int, q, u, g, h) -> GeneratorImage:
    if 0 in (u, g, h):
        raise ValueError("u, g, h must be nonzero")
    E = WeylElement
    zero = E(q)
    big = E(q, {(-1, 0): u, (-1, 2): -g * h})  # Z^{-1}(u - g h X^2)
    gx = E.monomial(q, 0, 1, g)
    hx = E.monomial(q, 0, 1, -q * h)
    z = E.monomial(q, 1, 0)
    inv = E.scalar(q, 1 / u)
    if which == 1:
        rows = [[big, gx, zero], [hx, z, zero], [zero, zero, inv]]
    elif which == 2:
        rows = [[inv, zero, zero], [zero, big, gx], [zero, hx, z]]
    else:
        raise ValueError("which must be 1 or 2")
    table = {(l, m): rows[l - 1][m - 1] for l, m in GEN}
    return GeneratorImage(which, q, u, g, h, table)


def rho_o_images(which: int, q, mu) -> GeneratorImage:
    """rho_{O,i}: the X-type image at (u, g, h) = (1, mu, 1/mu), for use on F_+."""
    return rho_images(which, q, Q(1), mu, 1 / mu)


# --------------------------------------------------------------------------
# defining relations


def _perm_length(p) -> int:
    return sum(1 for x in range(3) for y in range(x + 1, 3) if p[x] > p[y])


def coordinate_ring_relations(image: GeneratorImage):
    """Yield (name, lhs, rhs) Weyl-element pairs of every defining relation."""
    t = image.table
    q = image.q
    for (i, k), (j, l) in itertools.product(GEN, repeat=2):
        if i < j and k > l:
            yield f"[t{i}{k},t{j}{l}]=0", t[i, k] * t[j, l] - t[j, l] * t[i, k], WeylElement(q)
        elif i < j and k < l:
            yield (
                f"[t{i}{k},t{j}{l}]=(q-1/q)t{j}{k}t{i}{l}",
                t[i, k] * t[j, l] - t[j, l] * t[i, k],
                t[j, k] * t[i, l] * (q - 1 / q),
            )
    for i, j in itertools.combinations((1, 2, 3), 2):
        for k in (1, 2, 3):
            yield f"t{i}{k}t{j}{k}=q t{j}{k}t{i}{k}", t[i, k] * t[j, k], t[j, k] * t[i, k] * q
            yield f"t{k}{i}t{k}{j}=q t{k}{j}t{k}{i}", t[k, i] * t[k, j], t[k, j] * t[k, i] * q
    det = WeylElement(q)
    for p in itertools.permutations((1, 2, 3)):
        det = det + t[1, p[0]] * t[2, p[1]] * t[3, p[2]] * (-q) ** _perm_length(p)
    yield "qdet=1", det, WeylElement.scalar(q, 1)


def check_coordinate_ring_relations(image: GeneratorImage, tag: RepTag | str, window) -> VerificationReport:
    """Each relation as an operator identity on every basis vector of the window."""
    tag = RepTag(tag)
    window = list(window)
    report = VerificationReport("aqsl3-relations", type_tag=f"rho{image.which}/{tag.value}", window=window)
    for name, lhs, rhs in coordinate_ring_relations(image):
        report.relations += 1
        for m in window:
            report.evaluations += 1
            left = apply_rep(tag, lhs, {m: Q(1)})
            right = apply_rep(tag, rhs, {m: Q(1)})
            if left != right:
                report.fail(relation=name, index=m, lhs=left, rhs=right)
    return report


# --------------------------------------------------------------------------
# coproducts


def coproduct_operator(images, tags, l: int, m: int, primed: bool = False) -> TripleOp:
    """(rho_a (x) rho_b (x) rho_c) applied to Delta t_{lm} (or Delta' t_{lm})."""
    im1, im2, im3 = images
    tags = tuple(RepTag(t) for t in tags)
    q = im1.q
    total = TripleOp(q, tags, {})
    for j, k in itertools.product((1, 2, 3), repeat=2):
        if primed:
            e1, e2, e3 = im1[k, m], im2[j, k], im3[l, j]
        else:
            e1, e2, e3 = im1[l, j], im2[j, k], im3[k, m]
        if e1 and e2 and e3:
            total = total + TripleOp.tensor(tags, e1, e2, e3)
    return total


def coproduct_terms(l: int, m: int, primed: bool = False) -> list[tuple[tuple[int, int], ...]]:
    """The nine index triples of Delta t_{lm} (or Delta' t_{lm}) before representing."""
    out = []
    for j, k in itertools.product((1, 2, 3), repeat=2):
        out.append(((k, m), (j, k), (l, j)) if primed else ((l, j), (j, k), (k, m)))
    return out


# --------------------------------------------------------------------------
# intertwiner configurations


@dataclass
class IntertwinerConfig:
    """Parameters for the intertwining relation in OOO or ZZZ mode.

    OOO: R is the OOO kernel at (mu1, mu2, mu1).  Tensor slot n carries the
    O-restricted image with g = 1/mu_n, h = mu_n on both sides of the relation
    (``slotwise=False`` instead gives rho_{O,i} the parameter mu_i, which only
    intertwines when mu1 == mu2).
    ZZZ: R is the ZZZ kernel at quartets derived from (u, p, h1, h2, t1, t2,
    t3, r1, s3); ``rho_params`` holds (u_i, g_i, h_i) for i = 1, 2.
    """

    mode: str
    point: ParameterPoint
    rho_params: dict
    free: dict = field(default_factory=dict)
    slotwise: bool = True

    def kernel(self) -> RKernel:
        return RKernel(self.mode, self.point)

    def images(self):
        """(rho_1, rho_2) as used in ZZZ mode (or per-index OOO mode)."""
        q = self.point.q
        if self.mode == "OOO":
            return rho_o_images(1, q, self.point["mu1"]), rho_o_images(2, q, self.point["mu2"])
        (u1, g1, h1), (u2, g2, h2) = self.rho_params[1], self.rho_params[2]
        return rho_images(1, q, u1, g1, h1), rho_images(2, q, u2, g2, h2)

    def triples(self):
        """Image triples for Delta' (right of R) and Delta (left of R)."""
        if self.mode == "OOO" and self.slotwise:
            q = self.point.q
            mus = [1 / self.point[f"mu{n}"] for n in (1, 2, 3)]
            left = tuple(rho_o_images(w, q, mu) for w, mu in zip((1, 2, 1), mus))
            right = tuple(rho_o_images(w, q, mu) for w, mu in zip((2, 1, 2), mus))
            return left, right
        im1, im2 = self.images()
        return (im1, im2, im1), (im2, im1, im2)

    def tag(self) -> RepTag:
        return RepTag.O if self.mode == "OOO" else RepTag.ZP


def ooo_config(q, mu1, mu2, slotwise: bool = True) -> IntertwinerConfig:
    point = ParameterPoint({"q": q, "mu1": Q(mu1), "mu2": Q(mu2), "mu3": Q(mu1)})
    rho = {1: (1, mu1, 1 / mu1), 2: (1, mu2, 1 / mu2)}
    return IntertwinerConfig("OOO", point, rho, slotwise=slotwise)


def zzz_config(rq, U, P, h1, h2, T1, T2, T3, R1, S3) -> IntertwinerConfig:
    """Square-root inputs: q = rq^2, u = U^2, p = P^2, t_n = T_n^2, r1 = R1^2, s3 = S3^2.

    The rest follow from the compatibility relations so every quartet entry
    keeps a square-root witness.
    """
    sq = {"q": rq, "t1": T1, "t2": T2, "t3": T3, "r1": R1, "s3": S3}
    sq["r2"] = R1 * T2 / T1
    sq["s2"] = S3 * T2 / T3
    sq["r3"] = sq["r2"] / (U * R1)
    sq["s1"] = U * U * sq["s2"] / S3
    for n in (1, 2, 3):
        sq[f"w{n}"] = P / U * sq[f"r{n}"] * sq[f"s{n}"] / sq[f"t{n}"] ** 2
    sq = {k: Q(v) for k, v in sq.items()}
    point = ParameterPoint({k: v * v for k, v in sq.items()}, sq)
    u, p = Q(U) ** 2, Q(P) ** 2
    h1, h2 = Q(h1), Q(h2)
    rho = {1: (u, p / h1, h1), 2: (u, p / h2, h2)}
    free = {"u": u, "p": p, "h1": h1, "h2": h2}
    return IntertwinerConfig("ZZZ", point, rho, free)


def sample_zzz_config(seed: int) -> IntertwinerConfig:
    import random

    from .exactnum import _sample_witness
    from .kernels import is_generic

    rng = random.Random(f"aqsl3:{seed}")
    for _ in range(200):
        args = [_sample_witness(rng, avoid_unit=True)] + [_sample_witness(rng) for _ in range(2)]
        args += [_sample_witness(rng) ** 2 for _ in range(2)] + [_sample_witness(rng) for _ in range(5)]
        cfg = zzz_config(*args)
        if is_generic("ZZZ", cfg.point):
            return cfg
    raise RuntimeError("could not sample a generic ZZZ configuration")


def sample_ooo_config(seed: int, slotwise: bool = True) -> IntertwinerConfig:
    import random

    from .exactnum import _sample_witness

    rng = random.Random(f"aqsl3-ooo:{seed}")
    rq = _sample_witness(rng, avoid_unit=True)
    while True:
        mu1, mu2 = _sample_witness(rng) ** 2, _sample_witness(rng) ** 2
        if mu1 != mu2:
            return ooo_config(rq * rq, mu1, mu2, slotwise)


def compatibility_residuals(cfg: IntertwinerConfig) -> dict[str, bool]:
    """Which parameter relations hold (True) for a ZZZ configuration."""
    p = cfg.point
    (u1, g1, h1), (u2, g2, h2) = cfg.rho_params[1], cfg.rho_params[2]
    u, pp = u1, g1 * h1
    return {
        "r1/t1=r2/t2": p["r1"] / p["t1"] == p["r2"] / p["t2"],
        "s2/t2=s3/t3": p["s2"] / p["t2"] == p["s3"] / p["t3"],
        "r2/(r1 r3)=u": p["r2"] / (p["r1"] * p["r3"]) == u,
        "s1 s3/s2=u^2": p["s1"] * p["s3"] / p["s2"] == u * u,
        "t1^2 w1/(r1 s1)=p/u": p["t1"] ** 2 * p["w1"] / (p["r1"] * p["s1"]) == pp / u,
        "t2^2 w2/(r2 s2)=p/u": p["t2"] ** 2 * p["w2"] / (p["r2"] * p["s2"]) == pp / u,
        "t3^2 w3/(r3 s3)=p/u": p["t3"] ** 2 * p["w3"] / (p["r3"] * p["s3"]) == pp / u,
        "u1=u2": u1 == u2,
        "g1 h1=g2 h2": g1 * h1 == g2 * h2,
    }


def _scale(point: ParameterPoint, name: str, lam_root) -> tuple:
    return (point[name] * lam_root * lam_root, point.root(name) * lam_root)


def violate(cfg: IntertwinerConfig, which: int, lam=Q(2)) -> IntertwinerConfig:
    """Break exactly one of the nine compatibility relations (which = 0..8)."""
    p = cfg.point
    rho = dict(cfg.rho_params)
    up = {}
    if which == 0:
        up = {"t1": _scale(p, "t1", lam), "w1": _scale(p, "w1", 1 / lam**2)}
    elif which == 1:
        up = {"t3": _scale(p, "t3", lam), "w3": _scale(p, "w3", 1 / lam**2)}
    elif which == 2:
        up = {"r3": _scale(p, "r3", lam), "w3": _scale(p, "w3", lam)}
    elif which == 3:
        up = {"s1": _scale(p, "s1", lam), "w1": _scale(p, "w1", lam)}
    elif which in (4, 5, 6):
        n = which - 3
        up = {f"w{n}": _scale(p, f"w{n}", lam)}
    elif which == 7:
        u2, g2, h2 = rho[2]
        rho[2] = (u2 * lam, g2, h2)
    elif which == 8:
        u2, g2, h2 = rho[2]
        rho[2] = (u2, g2 * lam, h2)
    else:
        raise ValueError("which must be in 0..8")
    point = p.replace(**up) if up else p
    return IntertwinerConfig(cfg.mode, point, rho, dict(cfg.free), cfg.slotwise)


# --------------------------------------------------------------------------
# checks


def _window_triples(tag: RepTag, window) -> list:
    lo, hi = window
    if tag is RepTag.O:
        lo = max(lo, 0)
    return list(itertools.product(range(lo, hi + 1), repeat=3))


def intertwiner_check(cfg: IntertwinerConfig, window=None, *, kernel: RKernel | None = None, max_failures=None):
    """R (rho_a rho_b rho_a)(Delta' t_lm) = (rho_b rho_a rho_b)(Delta t_lm) R for all nine t_lm."""
    tag = cfg.tag()
    if window is None:
        window = (0, 4) if tag is RepTag.O else (-3, 3)
    report = VerificationReport("intertwiner", type_tag=cfg.mode, window=list(window), params=cfg.point)
    kernel = kernel or cfg.kernel()
    prim, unprim = cfg.triples()
    triples = _window_triples(tag, window)
    tags = (tag, tag, tag)
    for l, m in GEN:
        left = coproduct_operator(prim, tags, l, m, primed=True)
        right = coproduct_operator(unprim, tags, l, m, primed=False)
        fwd = [(inp, list(left.forward(inp).items())) for inp in triples]
        trn = [(out, list(right.transpose(out).items())) for out in triples]
        budget = 0 if max_failures is None else max_failures - report.failure_count
        pairs, failures = _core.pair_sweep(fwd, trn, kernel._cache, kernel, budget)
        report.relations += 1
        report.pairs += pairs
        for out, inp, lhs, rhs in failures:
            report.fail(generator=f"t{l}{m}", out=list(out), inp=list(inp), lhs=Q(lhs), rhs=Q(rhs))
        if max_failures is not None and report.failure_count >= max_failures:
            break
    report.evaluations = len(kernel._cache)
    return report


A_TABLE_ABC = {1: (0, 0, 1), 2: (0, 1, 0), 3: (1, 0, 0)}
A_TABLE_IJK_PRIME = {1: (0, 1, 1), 2: (1, 0, 1), 3: (1, 1, 0)}
M_TABLE_IJK = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
M_TABLE_ABC_PRIME = {1: (1, 1, 0), 2: (1, 0, 1), 3: (0, 1, 1)}


def ab_constants(cfg: IntertwinerConfig, printed: bool = False):
    """The 3x3 constants (A_lm), (B_lm) of the composite identities.

    The default values are the ones a direct expansion produces; they satisfy
    A_lm = (-q)^(l-m) B_lm.  ``printed=True`` returns the published tables,
    which differ in five entries of each (see ``PRINTED_MISMATCH``).
    """
    p = cfg.point
    u, pp, h1, h2 = (cfg.free[k] for k in ("u", "p", "h1", "h2"))
    q = p.q
    r2, s2, t1, t3 = p["r2"], p["s2"], p["t1"], p["t3"]
    if printed:
        A = {
            (1, 1): 1 / (r2**2 * s2),
            (1, 2): pp * u / (h1 * r2 * s2 * t3),
            (1, 3): pp**2 / (h1 * h2 * u),
            (2, 1): -q * h1 * t3 / (pp * r2**2 * s2),
            (2, 2): -u / (r2 * s2),
            (2, 3): pp / (h2 * r2 * t1 * u),
            (3, 1): q**2 * h1 * h2 / u,
            (3, 2): -q * h2 * t1 * u / (pp * r2 * s2),
            (3, 3): 1 / (r2 * u),
        }
        B = dict(A)
        B[1, 1] = -A[1, 1]
        B[2, 2] = -A[2, 2]
        return A, B
    B = {
        (1, 1): 1 / (r2**2 * s2),
        (1, 2): pp * u / (h1 * r2 * s2 * t3),
        (1, 3): pp**2 / (h1 * h2 * u * r2 * t1 * t3),
        (2, 1): h1 * t3 / (pp * r2**2 * s2),
        (2, 2): u / (r2 * s2),
        (2, 3): pp / (h2 * r2 * t1 * u),
        (3, 1): h1 * h2 * t1 * t3 / (pp**2 * r2**2 * s2),
        (3, 2): h2 * t1 * u / (pp * r2 * s2),
        (3, 3): 1 / (r2 * u),
    }
    A = {(l, m): (-q) ** (l - m) * b for (l, m), b in B.items()}
    return A, B


# entries where the published constants disagree with a direct expansion
PRINTED_MISMATCH = {
    "A": {(1, 2), (1, 3), (2, 2), (2, 3), (3, 1)},
    "B": {(1, 1), (1, 3), (2, 1), (3, 1), (3, 2)},
}


def ab_indices(l: int, m: int, printed: bool = False):
    """(abc|ijk) for the A form and (a'b'c'|i'j'k') for the B form.

    Only the bit-reversed primed tuples reproduce the tensor-slot pattern of
    the coproduct images; ``printed=True`` returns the tables as published.
    """
    v = A_TABLE_ABC[l] + M_TABLE_IJK[m]
    abc_p, ijk_p = M_TABLE_ABC_PRIME[m], A_TABLE_IJK_PRIME[l]
    if not printed:
        abc_p, ijk_p = abc_p[::-1], ijk_p[::-1]
    return v, abc_p + ijk_p


def _ls(point: ParameterPoint, inverted: bool = False):
    out = []
    for n in (1, 2, 3):
        r, s, t, w = (point[f"{x}{n}"] for x in "rstw")
        if inverted:
            r, s, t, w = s, r, t * w, 1 / w
        out.append(build_L(RepTag.ZP, point.q, r=r, s=s, t=t, w=w))
    return out


def _same_on_window(op1: TripleOp, op2: TripleOp, triples) -> list:
    bad = []
    for inp in triples:
        if op1.forward(inp) != op2.forward(inp):
            bad.append(inp)
    return bad


def ab_constant_check(cfg: IntertwinerConfig, window=(-2, 2), *, printed: bool = False):
    """Coproduct images equal A_lm (resp. B_lm) times the L-composites, entry-wise."""
    if cfg.mode != "ZZZ":
        raise ValueError("the constant identities concern the ZZZ mode")
    report = VerificationReport("ab-constants", type_tag="ZZZ", window=list(window), params=cfg.point)
    A, B = ab_constants(cfg, printed)
    im1, im2 = cfg.images()
    tags = (RepTag.ZP,) * 3
    Ls = _ls(cfg.point)
    Ls_inv = _ls(cfg.point, inverted=True)
    triples = _window_triples(RepTag.ZP, window)
    for l, m in GEN:
        v, vp = ab_indices(l, m, printed)
        lhs1 = coproduct_operator((im1, im2, im1), tags, l, m, primed=True)
        lhs2 = coproduct_operator((im2, im1, im2), tags, l, m, primed=False)
        checks = [
            ("AB1/A", lhs1, composite("left", Ls, v) * A[l, m]),
            ("AB1/B", lhs1, composite("right", Ls_inv, vp) * B[l, m]),
            ("AB2/A", lhs2, composite("right", Ls, v) * A[l, m]),
            ("AB2/B", lhs2, composite("left", Ls_inv, vp) * B[l, m]),
        ]
        for name, x, y in checks:
            report.relations += 1
            report.evaluations += len(triples)
            bad = _same_on_window(x, y, triples)
            if bad:
                report.fail(identity=name, generator=f"t{l}{m}", states=[list(b) for b in bad[:5]])
    return report


def rho_o_relation_check(q, mu, which: int, window=(0, 6)) -> VerificationReport:
    """The defining relations for rho_{O,which} acting on F_+."""
    return check_coordinate_ring_relations(rho_o_images(which, q, mu), RepTag.O, range(window[0], window[1] + 1))
