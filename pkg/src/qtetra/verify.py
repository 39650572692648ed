"""Exact verification of RLLL = LLLR and of kernel property suites.

All comparisons are per matrix element.  For an in-state the left composite
is applied forward (finitely many mids); for an out-state the right composite
is applied transposed.  Neither step truncates anything, so kernels that are
not locally finite are handled exactly.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Sequence

from . import _core
from .exactnum import DegenerateParameterError, ParameterPoint, Q, qpochhammer, qpochhammer_inv
from .kernels import (
    LOCALLY_FINITE,
    PARITY_FUNCTIONALS,
    SECTOR_TYPES,
    SERIES_FORMULAS,
    FORMULAS,
    RKernel,
    describe_support_failure,
    kernel_point,
    out_fiber,
    support,
)
from .lops import composite, line_L, nontrivial_vtuples
from .report import VerificationReport
from .weyl import RepTag

DEFAULT_WINDOW_PLUS = (0, 4)
DEFAULT_WINDOW_F = (-3, 3)
DEFAULT_SEEDS = (11, 23, 37)


def line_ranges(tag: str, window_plus=DEFAULT_WINDOW_PLUS, window_f=DEFAULT_WINDOW_F) -> list[range]:
    out = []
    for letter in tag:
        lo, hi = window_plus if letter == "O" else window_f
        if letter == "O" and lo < 0:
            raise ValueError("F_+ windows start at 0 or above")
        out.append(range(lo, hi + 1))
    return out


def lattice_triples(tag: str, window_plus=DEFAULT_WINDOW_PLUS, window_f=DEFAULT_WINDOW_F) -> list:
    return list(itertools.product(*line_ranges(tag, window_plus, window_f)))


def _line_ops(kernel: RKernel):
    return [line_L(letter, kernel.point, n + 1, sign) for n, (letter, sign) in enumerate(zip(kernel.tag, kernel.signs))]


def rlll_check_pair(kernel: RKernel, v, out, inp):
    """(lhs, rhs) = (<out| R L L L |in>, <out| L L L R |in>) for one v-tuple."""
    a, b, c, i, j, k = v
    if a + b + c != i + j + k:
        raise ValueError("v-tuple violates a+b+c = i+j+k")
    Ls = _line_ops(kernel)
    M = composite("left", Ls, v)
    N = composite("right", Ls, v)
    lhs = Q(0)
    for mid, coef in M.forward(tuple(inp)).items():
        lhs += kernel(*out, *mid) * coef
    rhs = Q(0)
    for mid, coef in N.transpose(tuple(out)).items():
        rhs += coef * kernel(*mid, *inp)
    return lhs, rhs


def rlll_sweep(
    kernel: RKernel,
    *,
    window_plus=DEFAULT_WINDOW_PLUS,
    window_f=DEFAULT_WINDOW_F,
    vtuples: Sequence | None = None,
    max_failures: int | None = None,
    seed: int | None = None,
) -> VerificationReport:
    """All v-tuples x all (out, in) pairs of the window; exact equality.

    ``max_failures`` stops the sweep early (used by fault-injection runs).
    """
    tag = kernel.tag
    signs = "" if kernel.signs == (1, 1, 1) else "(" + ",".join("+" if s > 0 else "-" for s in kernel.signs) + ")"
    report = VerificationReport(
        "rlll",
        type_tag=tag + signs,
        seed=seed,
        window={"F+": list(window_plus), "F": list(window_f)},
        params=kernel.point,
    )
    if kernel.d is not None:
        report.notes["d"] = kernel.d
    triples = lattice_triples(tag, window_plus, window_f)
    Ls = _line_ops(kernel)
    vts = list(vtuples) if vtuples is not None else nontrivial_vtuples()
    report.relations = len(vts)
    cache = kernel._cache
    for v in vts:
        M = composite("left", Ls, v)
        N = composite("right", Ls, v)
        fwd = [(inp, list(M.forward(inp).items())) for inp in triples]
        trn = [(out, list(N.transpose(out).items())) for out in triples]
        budget = 0 if max_failures is None else max_failures - report.failure_count
        pairs, failures = _core.pair_sweep(fwd, trn, cache, kernel, budget)
        report.pairs += pairs
        for out, inp, lhs, rhs in failures:
            report.fail(v=list(v), out=list(out), inp=list(inp), lhs=Q(lhs), rhs=Q(rhs))
        if max_failures is not None and report.failure_count >= max_failures:
            break
    report.evaluations = len(cache)
    return report


def rlll_type_sweep(tag: str, seeds: Iterable[int] = DEFAULT_SEEDS, *, signs=(1, 1, 1), formula=None, **kw):
    """rlll_sweep at several seeded parameter points, folded into one report."""
    total = VerificationReport("rlll", type_tag=tag, window=None)
    seeds = list(seeds)
    total.notes["seeds"] = seeds
    for seed in seeds:
        point = kernel_point(tag, seed)
        kernel = RKernel(tag, point, signs=signs, formula=formula)
        sub = rlll_sweep(kernel, seed=seed, **kw)
        total.window = sub.window
        total.absorb(sub)
        total.relations = sub.relations
        if kw.get("max_failures") and total.failure_count >= kw["max_failures"]:
            break
    return total


# --------------------------------------------------------------------------
# component relations as data (used by the sector audit and the CLI)


def component_relation(tag: str, v, *, point: ParameterPoint | None = None, signs=(1, 1, 1)):
    """The v-component of RLLL = LLLR as shift data.

    Returns (left_terms, right_terms); each term is (out_shift, in_shift,
    coefficient-at-index-zero) meaning the relation at (out, in) involves
    R(out + out_shift | in + in_shift).  Left terms have out_shift = 0, right
    terms have in_shift = 0.
    """
    if point is None:
        point = kernel_point(tag, 1)
    Ls = [line_L(letter, point, n + 1, s) for n, (letter, s) in enumerate(zip(tag, signs))]
    M = composite("left", Ls, v)
    N = composite("right", Ls, v)
    base = tuple(0 if letter != "O" else 2 for letter in tag)
    left = [((0, 0, 0), tuple(m - b for m, b in zip(mid, base)), c) for mid, c in M.forward(base).items()]
    right = [(tuple(m - b for m, b in zip(mid, base)), (0, 0, 0), c) for mid, c in N.transpose(base).items()]
    return sorted(left), sorted(right)


def sector_coupling_audit(tag: str, point: ParameterPoint | None = None, sample: Iterable | None = None):
    """Every element in one component relation shares the parity functional."""
    report = VerificationReport("sector-coupling", type_tag=tag)
    func = PARITY_FUNCTIONALS.get(tag)
    if func is None:
        report.notes["parity"] = "none"
        return report
    rng_pts = list(sample) if sample is not None else [
        (o, i) for o in itertools.product(range(0, 3), repeat=3) for i in itertools.product(range(0, 3), repeat=3)
    ][::37]
    vts = nontrivial_vtuples()
    report.relations = len(vts)
    for v in vts:
        left, right = component_relation(tag, v, point=point)
        for out, inp in rng_pts:
            idx = [tuple(out) + tuple(x + s for x, s in zip(inp, sh)) for _, sh, _ in left]
            idx += [tuple(x + s for x, s in zip(out, sh)) + tuple(inp) for sh, _, _ in right]
            vals = {func(*e) for e in idx}
            report.pairs += 1
            report.evaluations += len(idx)
            if len(vals) > 1:
                report.fail(v=list(v), out=list(out), inp=list(inp), parities=sorted(map(str, vals)))
    return report


# --------------------------------------------------------------------------
# ZZZ recursion oracle


class RecursionOracle:
    """ZZZ elements from the first-order recursions alone, never the closed form.

    Any (a,b,c|i,j,k) is reduced to R^{0,0,0}_{p2,p1,0} with p1, p2 in {0,1}:
    first b, c, k are slid to 0, then a is lowered to 0 one step at a time,
    then j and i are lowered by two.  The four initial values are seeded with
    ``seeds[(p1, p2)]`` (default 1).
    """

    def __init__(self, point: ParameterPoint, seeds=None):
        self.point = point
        self.seeds = seeds or {(0, 0): Q(1), (0, 1): Q(1), (1, 0): Q(1), (1, 1): Q(1)}
        p = point.values
        self.q = p["q"]
        self.p = p
        self.cache: dict = {}

    def __call__(self, a, b, c, i, j, k):
        q, p = self.q, self.p
        m = k - c
        factor = q ** ((c + i - j) * (c - k)) * (p["t1"] * p["t3"] * p["w3"] / p["s2"]) ** m
        factor *= qpochhammer_inv(q ** (b - i - k) * p["s1"] * p["s3"] / p["s2"], q * q, m)
        return factor * self._a_chain(a - b + c, i - k - b + 2 * c, j - b)

    def _a_step(self, a, i, j):
        """R^{a,0,0}_{i,j,0} / R^{a-1,0,0}_{i,j-1,0}."""
        q, p = self.q, self.p
        num = 1 - q ** (a - i + j - 2) * p["r1"] * p["w3"] / (p["s1"] * p["w2"])
        den = 1 - q ** (2 * j - 2) * p["r1"] * p["r3"] * p["w3"] / (p["s1"] * p["s3"] * p["w1"])
        return _ratio(q**i * p["t2"] * p["w2"] / (p["s3"] * p["t1"] * p["w1"]) * num, den)

    def _a_chain(self, a, i, j):
        acc = Q(1)
        while a > 0:
            acc *= self._a_step(a, i, j)
            a, j = a - 1, j - 1
        while a < 0:
            acc /= _nonzero(self._a_step(a + 1, i, j + 1))
            a, j = a + 1, j + 1
        return acc * self._ij_chain(i, j)

    def _j_step(self, i, j):
        """R^{0,0,0}_{i,j,0} / R^{0,0,0}_{i,j-2,0}."""
        q, p = self.q, self.p
        u = p["r1"] * p["r3"] * p["w3"] / (p["s1"] * p["s3"] * p["w1"])
        num = (1 - q ** (j - 2 + i) * p["r3"] * p["w2"] / (p["s3"] * p["w1"]))
        num *= 1 - q ** (j - 2 - i) * p["r1"] * p["w3"] / (p["s1"] * p["w2"])
        den = (1 - q**j * p["r1"] * p["r3"] / p["r2"]) * (1 - q ** (2 * j - 2) * u) * (1 - q ** (2 * j - 4) * u)
        pre = q ** (2 + i) * p["t2"] ** 2 * p["w2"] / (p["r2"] * p["s1"] * p["s3"])
        return _ratio(pre * num, den)

    def _i_step(self, i, j):
        """R^{0,0,0}_{i,j,0} / R^{0,0,0}_{i-2,j,0}."""
        q, p = self.q, self.p
        pre = q ** (-2 * i + j + 2) * p["s3"] * p["t1"] ** 2 * p["w1"] * p["w3"] / (p["s1"] * p["s2"] * p["w2"])
        num = 1 - q ** (i + j - 2) * p["r3"] * p["w2"] / (p["s3"] * p["w1"])
        den = (1 - q ** (-i) * p["s1"] * p["s3"] / p["s2"]) * (1 - q ** (-i + j) * p["r1"] * p["w3"] / (p["s1"] * p["w2"]))
        return _ratio(pre * num, den)

    def _ij_chain(self, i, j):
        key = (i, j)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        acc = Q(1)
        ii, jj = i, j
        while jj > 1:
            acc *= self._j_step(ii, jj)
            jj -= 2
        while jj < 0:
            acc /= _nonzero(self._j_step(ii, jj + 2))
            jj += 2
        while ii > 1:
            acc *= self._i_step(ii, jj)
            ii -= 2
        while ii < 0:
            acc /= _nonzero(self._i_step(ii + 2, jj))
            ii += 2
        val = acc * self.seeds[(jj, ii)]
        self.cache[key] = val
        return val


def _ratio(num, den):
    if den == 0:
        raise DegenerateParameterError("vanishing denominator along the recursion chain")
    return num / den


def _nonzero(x):
    if x == 0:
        raise DegenerateParameterError("vanishing factor along the recursion chain")
    return x


def recursion_oracle_zzz(point: ParameterPoint, out, inp, seeds=None):
    return RecursionOracle(point, seeds)(*out, *inp)


def zzz_parity_sector(a, b, c, i, j, k) -> tuple[int, int]:
    """(p1, p2) = (d1 mod 2, d2 mod 2)."""
    return (a + c - j) % 2, (b - i - k) % 2


def oracle_ratio_check(point: ParameterPoint, sextets: Iterable, *, formula: Callable | None = None):
    """Within each parity sector, oracle / closed form must be one constant."""
    report = VerificationReport("zzz-oracle", type_tag="ZZZ", params=point)
    kernel = RKernel("ZZZ", point, formula=formula)
    oracle = RecursionOracle(point)
    ratios: dict = {}
    counts: dict = {}
    for sx in sextets:
        sx = tuple(sx)
        sector = zzz_parity_sector(*sx)
        closed = kernel(*sx)
        val = oracle(*sx)
        report.evaluations += 2
        report.pairs += 1
        counts[sector] = counts.get(sector, 0) + 1
        if closed == 0 or val == 0:
            report.fail(sextet=list(sx), sector=list(sector), oracle=val, closed=closed, reason="zero value")
            continue
        r = val / closed
        if sector not in ratios:
            ratios[sector] = r
        elif ratios[sector] != r:
            report.fail(sextet=list(sx), sector=list(sector), ratio=r, expected=ratios[sector])
    report.notes["ratios"] = {f"{s[0]}{s[1]}": v for s, v in sorted(ratios.items())}
    report.notes["counts"] = {f"{s[0]}{s[1]}": v for s, v in sorted(counts.items())}
    report.relations = len(ratios)
    return report


def sample_sextets(seed: int, n: int, lo: int = -3, hi: int = 3, *, per_sector: bool = True):
    """Seeded integer sextets; with ``per_sector`` n are drawn for each ZZZ parity sector."""
    import random

    rng = random.Random(seed)
    if not per_sector:
        return [tuple(rng.randint(lo, hi) for _ in range(6)) for _ in range(n)]
    buckets: dict = {(0, 0): [], (0, 1): [], (1, 0): [], (1, 1): []}
    while min(len(b) for b in buckets.values()) < n:
        sx = tuple(rng.randint(lo, hi) for _ in range(6))
        b = buckets[zzz_parity_sector(*sx)]
        if len(b) < n:
            b.append(sx)
    return [sx for key in sorted(buckets) for sx in buckets[key]]


# --------------------------------------------------------------------------
# kernel property suites


def series_equivalence_check(tag: str, point: ParameterPoint, window=(0, 4), *, series=None):
    """The two printed presentations of an OZZ/ZZO/ZOZ kernel agree elementwise."""
    if tag not in SERIES_FORMULAS:
        raise ValueError(f"no second presentation for {tag}")
    report = VerificationReport("series-equivalence", type_tag=tag, window=list(window), params=point)
    direct = RKernel(tag, point)
    other = RKernel(tag, point, formula=series or SERIES_FORMULAS[tag])
    rng = range(window[0], window[1] + 1)
    for sx in itertools.product(rng, repeat=6):
        lhs, rhs = direct(*sx), other(*sx)
        report.pairs += 1
        report.evaluations += 2
        if lhs != rhs:
            report.fail(sextet=list(sx), lhs=lhs, rhs=rhs)
    return report


def ooo_symmetry_check(point: ParameterPoint, bound: int = 6):
    """R^{abc}_{ijk} (q^2)_a (q^2)_b (q^2)_c = (q^2)_i (q^2)_j (q^2)_k R^{ijk}_{abc} at mu = 1."""
    if any(point[f"mu{n}"] != 1 for n in (1, 2, 3)):
        raise ValueError("the OOO symmetry is stated for mu1 = mu2 = mu3 = 1")
    q2 = point.q**2
    kernel = RKernel("OOO", point)
    fact = [qpochhammer(q2, q2, n) for n in range(bound + 1)]
    report = VerificationReport("ooo-symmetry", type_tag="OOO", window=[0, bound], params=point)
    for a, b, c, i, j, k in itertools.product(range(bound + 1), repeat=6):
        report.pairs += 1
        if a + b != i + j or b + c != j + k:
            continue  # both sides vanish by the delta factors
        lhs = kernel(a, b, c, i, j, k) * fact[a] * fact[b] * fact[c]
        rhs = fact[i] * fact[j] * fact[k] * kernel(i, j, k, a, b, c)
        report.evaluations += 2
        if lhs != rhs:
            report.fail(sextet=[a, b, c, i, j, k], lhs=lhs, rhs=rhs)
    return report


def unit_mu_point(q) -> ParameterPoint:
    return ParameterPoint({"q": q, "mu1": Q(1), "mu2": Q(1), "mu3": Q(1)})


def support_exactness_check(kernel: RKernel, box=(0, 6)):
    """support = False must imply a zero element on the whole box."""
    report = VerificationReport("support-exactness", type_tag=kernel.tag, window=list(box), params=kernel.point)
    rng = range(box[0], box[1] + 1)
    zeros_inside = 0
    for sx in itertools.product(rng, repeat=6):
        out, inp = sx[:3], sx[3:]
        report.pairs += 1
        inside = kernel.support(out, inp)
        val = kernel(*sx)
        report.evaluations += 1
        if not inside and val != 0:
            report.fail(sextet=list(sx), value=val, predicate=describe_support_failure(kernel.tag, kernel.d, out, inp))
        elif inside and val == 0:
            zeros_inside += 1
    report.notes["zeros_inside_support"] = zeros_inside
    return report


def local_finiteness_check(kernel: RKernel, window=(0, 4), reach: int = 6):
    """The enumerated out-fiber of each in-triple is finite and holds every nonzero element.

    Outside the fiber, elements are scanned on a box enlarged by ``reach``.
    """
    tag = kernel.tag
    if tag not in LOCALLY_FINITE:
        raise ValueError(f"{tag} is not locally finite")
    report = VerificationReport("local-finiteness", type_tag=tag, window=list(window), params=kernel.point)
    d = kernel.d or 0
    rng = range(window[0], window[1] + 1)
    hi = window[1] + reach + abs(d)
    box = [range(0, hi + 1) if letter == "O" else range(-hi, hi + 1) for letter in tag]
    sizes = []
    for inp in itertools.product(rng, repeat=3):
        fiber = set(out_fiber(kernel, inp))
        sizes.append(len(fiber))
        report.pairs += 1
        for out in itertools.product(*box):
            if out in fiber:
                continue
            report.evaluations += 1
            if kernel(*out, *inp) != 0:
                report.fail(inp=list(inp), out=list(out), value=kernel(*out, *inp))
    report.notes["max_fiber"] = max(sizes)
    return report


def inverse_check(kernel: RKernel, window=(0, 4)):
    """sum_m R(out|m) Rinv(m|in) = delta over the finite fiber of Rinv."""
    inv = kernel.inverse()
    tag = kernel.tag
    report = VerificationReport("inverse", type_tag=tag, window=list(window), params=kernel.point)
    report.notes["inverse_sector"] = inv.d
    lo, hi = window
    rng = range(lo, hi + 1)
    # out-triples: F_+ lines inside the window, the Z line shifted by the sector
    d = kernel.d or 0
    box = []
    for letter in tag:
        box.append(rng if letter == "O" else range(lo - abs(d), hi + abs(d) + 1))
    for inp in itertools.product(*box):
        mids = out_fiber(inv, inp)
        column = {}
        for mid in mids:
            x = inv(*mid, *inp)
            if x == 0:
                continue
            for out in out_fiber(kernel, mid):
                column[out] = column.get(out, 0) + kernel(*out, *mid) * x
        column = {k: v for k, v in column.items() if v != 0}
        report.pairs += 1
        report.evaluations += len(mids)
        if column != {inp: 1}:
            report.fail(inp=list(inp), column={",".join(map(str, k)): v for k, v in column.items()})
    return report


def boundary_value_check(kernel: RKernel, bound: int = 6):
    """R^{abc}_{000}: delta(a,0)delta(b,0)delta(c,d) for OOZ, delta(a,-d)delta(b,0)delta(c,0) for ZOO, 1 at zero for OOO."""
    tag = kernel.tag
    report = VerificationReport("boundary-values", type_tag=tag, window=[-bound, bound], params=kernel.point)
    d = kernel.d
    box = [range(0, bound + 1) if letter == "O" else range(-bound, bound + 1) for letter in tag]
    if tag == "OOO":
        expect = {(0, 0, 0): 1}
    elif tag == "OOZ":
        expect = {(0, 0, d): 1}
    elif tag == "ZOO":
        expect = {(-d, 0, 0): 1}
    else:
        raise ValueError(f"no boundary-value statement for {tag}")
    for out in itertools.product(*box):
        val = kernel(*out, 0, 0, 0)
        report.pairs += 1
        report.evaluations += 1
        if val != expect.get(out, 0):
            report.fail(out=list(out), value=val, expected=expect.get(out, 0))
    return report


def zzz_t_dependence_check(point: ParameterPoint, scales=(Q(2), Q(3, 5), Q(-7, 2)), window=(-2, 2)):
    """Rescaling t_n by lam_n^2 multiplies R by prod lam_n^{2(-out_n + in_n)}."""
    report = VerificationReport("zzz-t-dependence", type_tag="ZZZ", window=list(window), params=point)
    up = {}
    for n, lam in zip((1, 2, 3), scales):
        up[f"t{n}"] = (point[f"t{n}"] * lam * lam, point.root(f"t{n}") * lam)
    base = RKernel("ZZZ", point)
    scaled = RKernel("ZZZ", point.replace(**up))
    lam2 = [lam * lam for lam in scales]
    rng = range(window[0], window[1] + 1)
    for a, b, c, i, j, k in itertools.product(rng, repeat=6):
        expect = base(a, b, c, i, j, k) * lam2[0] ** (i - a) * lam2[1] ** (j - b) * lam2[2] ** (k - c)
        got = scaled(a, b, c, i, j, k)
        report.pairs += 1
        report.evaluations += 2
        if got != expect:
            report.fail(sextet=[a, b, c, i, j, k], got=got, expected=expect)
    return report


def z_entries_lower_check(point: ParameterPoint, window=DEFAULT_WINDOW_F):
    """No L^Z entry contains X^{-1}, so under Z+ each entry maps |m> into span{|n>, n <= m}."""
    from .weyl import apply_rep

    report = VerificationReport("z-invariant-subspace", type_tag="Z+")
    for n in (1, 2, 3):
        L = line_L("Z", point, n)
        for key, entry in L.entries.items():
            report.relations += 1
            if any(beta < 0 for (alpha, beta), _ in entry):
                report.fail(line=n, entry=list(key), reason="contains X^-1")
            for m in range(window[0], window[1] + 1):
                report.evaluations += 1
                image = apply_rep(RepTag.ZP, entry, {m: Q(1)})
                if any(idx > m for idx in image):
                    report.fail(line=n, entry=list(key), m=m, image=sorted(image))
    return report
