"""Finite-sum checks of the RRRR tetrahedron equation for mixed O/Z types.

For a type ABCDEF the six spaces carry the letters A..F.  Space n has
parameters ``mu{n}`` (O) or ``r{n}, s{n}, t{n}, w{n}`` (Z).  The four factors
are R^{ABD} on spaces (1,2,4), R^{ACE} on (1,3,5), R^{BCF} on (2,3,6) and
R^{DEF} on (4,5,6).  For an (out, in) sextet pair the two sides are

    lhs = sum R^{DEF}(d,e,f|x,y,z) R^{BCF}(b,c,z|v,w,n) R^{ACE}(a,w,y|u,k,m) R^{ABD}(u,v,x|i,j,l)
    rhs = sum R^{ABD}(a,b,d|u,v,x) R^{ACE}(u,c,e|i,w,y) R^{BCF}(v,w,f|j,k,z) R^{DEF}(x,y,z|l,m,n)

over intermediate (u,v,w,x,y,z), intermediate index n living on space n+1.
The sums are enumerated exactly from the factors' linear support constraints.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Sequence

from .exactnum import Constraint, ParameterPoint, Q, _sample_witness
from .kernels import (
    SECTOR_TYPES,
    RKernel,
    is_generic,
    out_fiber,
    param_names,
    sector_constraint,
    support,
    support_constraints,
)
from .report import VerificationReport

FINITE_TYPES = (
    "OOOOOO",
    # only locally finite factors
    "ZOOOOO",
    "OOOZOO",
    "OOOOOZ",
    "ZOOOOZ",
    # one factor that is not locally finite on each side
    "OZOOOO",
    "OOOOZO",
    "ZZOOOO",
    "ZOOZOO",
    "OZOZOO",
    "OOOZZO",
    "OOOZOZ",
    "OOOOZZ",
    "ZZOZOO",
    "OOOZZZ",
    # several such factors, still finite through the OZO interval constraint
    "OOZOOO",
    "ZOZOOO",
    "ZOOOZO",
    "OZZOOO",
    "OZOOOZ",
    "OOZZOO",
    "OOZOZO",
    "OOZOOZ",
    "ZOZOZO",
    "OZZOOZ",
)

FACTOR_SPACES = {"ABD": (1, 2, 4), "ACE": (1, 3, 5), "BCF": (2, 3, 6), "DEF": (4, 5, 6)}

# slots: ("c", n) -> n-th fixed index (out a..f = 0..5, in i..n = 6..11); ("v", n) -> intermediate
_C = [("c", n) for n in range(12)]
_V = [("v", n) for n in range(6)]
a_, b_, c_, d_, e_, f_, i_, j_, k_, l_, m_, n_ = _C
u_, v_, w_, x_, y_, z_ = _V

SIDES = {
    "lhs": (
        ("DEF", (d_, e_, f_), (x_, y_, z_)),
        ("BCF", (b_, c_, z_), (v_, w_, n_)),
        ("ACE", (a_, w_, y_), (u_, k_, m_)),
        ("ABD", (u_, v_, x_), (i_, j_, l_)),
    ),
    "rhs": (
        ("ABD", (a_, b_, d_), (u_, v_, x_)),
        ("ACE", (u_, c_, e_), (i_, w_, y_)),
        ("BCF", (v_, w_, f_), (j_, k_, z_)),
        ("DEF", (x_, y_, z_), (l_, m_, n_)),
    ),
}


class WiringError(ValueError):
    """Inconsistent or unsatisfiable parameter demands for a tetrahedron type."""


class EnumerationError(ValueError):
    """The intermediate sum is not provably finite for this wiring."""


def finite_type_list() -> list[str]:
    return list(FINITE_TYPES)


def factor_type(typestring: str, factor: str) -> str:
    return "".join(typestring[n - 1] for n in FACTOR_SPACES[factor])


# --------------------------------------------------------------------------
# wiring


class _MuGraph:
    """Union-find over mu names with relations mu_x = sign * q^e * mu_root."""

    def __init__(self):
        self.parent: dict[str, tuple[str, int, int]] = {}

    def add(self, x):
        self.parent.setdefault(x, (x, 0, 1))

    def find(self, x):
        p, e, s = self.parent[x]
        if p == x:
            return x, 0, 1
        root, e2, s2 = self.find(p)
        self.parent[x] = (root, e + e2, s * s2)
        return root, e + e2, s * s2

    def relate(self, x, y, exponent, sign):
        """Demand mu_x = sign * q^exponent * mu_y; returns False on a sign clash."""
        rx, ex, sx = self.find(x)
        ry, ey, sy = self.find(y)
        if rx == ry:
            return None  # exponent is then determined by the others
        # mu_x = sx q^ex mu_rx,  mu_y = sy q^ey mu_ry
        # mu_rx = (sign sy / sx) q^(exponent + ey - ex) mu_ry
        self.parent[rx] = (ry, exponent + ey - ex, sign * sy * sx)
        return True


@dataclass
class Wiring:
    typestring: str
    point: ParameterPoint
    factors: dict
    sectors: dict = field(default_factory=dict)
    seed: int | None = None

    def kernel(self, name: str) -> RKernel:
        return self.factors[name]

    def as_json(self) -> dict:
        return {
            "type": self.typestring,
            "seed": self.seed,
            "params": self.point.as_json(),
            "sectors": dict(sorted(self.sectors.items())),
        }


def _factor_point(point: ParameterPoint, ftype: str, spaces) -> ParameterPoint:
    mapping = {}
    for local, (letter, space) in enumerate(zip(ftype, spaces), start=1):
        if letter == "O":
            mapping[f"mu{local}"] = f"mu{space}"
        else:
            for p in "rstw":
                mapping[f"{p}{local}"] = f"{p}{space}"
    return point.rename(mapping)


def _global_constraint(ftype: str, spaces, d: int) -> Constraint | None:
    c = sector_constraint(ftype, d)
    if c is None:
        return None
    local = {f"mu{n}": f"mu{space}" for n, space in enumerate(spaces, start=1)}
    return Constraint(local[c.target], local[c.source], c.exponent, c.sign)


def _check_sector(point: ParameterPoint, c: Constraint, span: int = 256) -> int | None:
    ratio = point[c.target] / (c.sign * point[c.source])
    q = point.q
    v = Q(1)
    for e in range(span + 1):
        if ratio == v:
            return e
        if ratio == 1 / v:
            return -e
        v *= q
    return None


def wire_parameters(
    typestring: str,
    seed: int,
    *,
    sector_range: int = 2,
    budget: int = 200,
    point: ParameterPoint | None = None,
) -> Wiring:
    """Sample line parameters and factor sectors for a tetrahedron type.

    Integrality demands are imposed by construction along a spanning forest of
    the mu relations; demands closing a cycle are then verified.  With
    ``point`` given, the sectors are read off (or rejected) instead.
    """
    if len(typestring) != 6 or set(typestring) - set("OZ"):
        raise WiringError(f"not an O/Z six-letter type: {typestring!r}")
    rng = random.Random(f"{typestring}:{seed}")
    for _ in range(budget):
        graph = _MuGraph()
        for n, letter in enumerate(typestring, start=1):
            if letter == "O":
                graph.add(f"mu{n}")
        demands = []
        for fname, spaces in FACTOR_SPACES.items():
            ftype = factor_type(typestring, fname)
            if ftype in SECTOR_TYPES:
                d = rng.randint(-sector_range, sector_range)
                c = _global_constraint(ftype, spaces, d)
                demands.append((fname, ftype, spaces, c))
                if point is None:
                    graph.relate(c.target, c.source, c.exponent, c.sign)
        if point is None:
            rq = _sample_witness(rng, avoid_unit=True)
            values = {"q": rq * rq}
            roots = {"q": rq}
            for n, letter in enumerate(typestring, start=1):
                if letter == "O":
                    continue
                for p in "rstw":
                    rho = _sample_witness(rng)
                    values[f"{p}{n}"], roots[f"{p}{n}"] = rho * rho, rho
            for name in sorted(graph.parent):
                root, e, s = graph.find(name)
                if root == name:
                    rho = _sample_witness(rng)
                    values[name], roots[name] = rho * rho, rho
            for name in sorted(graph.parent):
                root, e, s = graph.find(name)
                if root != name:
                    values[name] = s * values[root] * values["q"] ** e
                    if s == 1:
                        roots[name] = roots[root] * rq**e
            # mu = 1 would make the O-space parameter invisible to mutation checks
            if any(values[name] == 1 for name in values if name.startswith("mu")):
                continue
            try:
                cand = ParameterPoint(values, roots)
            except ValueError:
                continue
        else:
            cand = point
        factors = {}
        sectors = {}
        ok = True
        for fname, spaces in FACTOR_SPACES.items():
            ftype = factor_type(typestring, fname)
            fpoint = _factor_point(cand, ftype, spaces)
            d = None
            if ftype in SECTOR_TYPES:
                c0 = _global_constraint(ftype, spaces, 0)
                d = _check_sector(cand, c0)
                if d is None:
                    if point is not None:
                        raise WiringError(
                            f"{fname} factor of type {ftype} needs {c0.target}/{c0.source} to be "
                            f"{'-' if c0.sign < 0 else ''}q^d with integer d"
                        )
                    ok = False  # sign clash around a cycle; resample
                    break
                sectors[fname] = d
            if not is_generic(ftype, fpoint):
                if point is not None:
                    raise WiringError(f"{fname} factor is singular at the given point")
                ok = False
                break
            factors[fname] = RKernel(ftype, fpoint, d=d)
        if ok:
            return Wiring(typestring, cand, factors, sectors, seed)
    raise WiringError(f"could not wire {typestring}: resampling budget exhausted")


# --------------------------------------------------------------------------
# exact enumeration of the intermediate sextet


NV = 18  # 12 fixed indices then 6 intermediates


def _slot_index(slot) -> int:
    kind, n = slot
    return n if kind == "c" else 12 + n


@dataclass(frozen=True)
class _Ineq:
    coeffs: tuple  # length NV, integers
    const: int

    def normalized(self) -> "_Ineq":
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        if g > 1:
            # sum c x + k >= 0 with c = g c'  <=>  sum c' x + floor(k/g) >= 0 over integers
            return _Ineq(tuple(c // g for c in self.coeffs), self.const // g)
        return self


def _side_constraints(wiring: Wiring, side: str):
    eqs, ineqs, parities = [], [], []
    for fname, out_slots, in_slots in SIDES[side]:
        kernel = wiring.factors[fname]
        slots = [_slot_index(s) for s in out_slots + in_slots]
        for con in support_constraints(kernel.tag, kernel.d):
            vec = [0] * NV
            for coef, idx in zip(con.coeffs, slots):
                vec[idx] += coef
            item = (tuple(vec), con.const)
            if con.kind == "eq":
                eqs.append(item)
            elif con.kind == "ge":
                ineqs.append(item)
            else:
                parities.append(item)
    return eqs, ineqs, parities


class _Plan:
    """Precomputed elimination for one side of one wiring."""

    def __init__(self, wiring: Wiring, side: str):
        eqs, ineqs, parities = _side_constraints(wiring, side)
        self.all_checks = (eqs, ineqs, parities)
        # Gaussian elimination of intermediates via equalities (rational affine forms)
        subst: dict[int, tuple] = {}  # var index -> (vector over NV as Fractions, const)

        def apply(vec, const):
            vec = [Fraction(x) for x in vec]
            const = Fraction(const)
            for piv, (pv, pc) in subst.items():
                c = vec[piv]
                if c:
                    vec[piv] = Fraction(0)
                    for t in range(NV):
                        vec[t] += c * pv[t]
                    const += c * pc
            return vec, const

        pending = list(eqs)
        for vec, const in pending:
            vec, const = apply(vec, const)
            cands = [t for t in range(12, NV) if vec[t] != 0]
            if not cands:
                continue  # constraint only on fixed indices: checked at the root
            piv = min(cands, key=lambda t: (abs(vec[t]) != 1, t))
            c = vec[piv]
            pv = [-x / c for x in vec]
            pv[piv] = Fraction(0)
            pc = -const / c
            # substitute into earlier pivots
            for other, (ov, oc) in list(subst.items()):
                co = ov[piv]
                if co:
                    nv = list(ov)
                    nv[piv] = Fraction(0)
                    for t in range(NV):
                        nv[t] += co * pv[t]
                    subst[other] = (nv, oc + co * pc)
            subst[piv] = (pv, pc)
        self.subst = subst
        self.free = [t for t in range(12, NV) if t not in subst]
        # inequalities in terms of fixed + free variables, integer-scaled
        reduced = []
        for vec, const in ineqs:
            v2, c2 = apply(vec, const)
            den = 1
            for x in v2 + [c2]:
                den = den * x.denominator // gcd(den, x.denominator)
            reduced.append(_Ineq(tuple(int(x * den) for x in v2), int(c2 * den)).normalized())
        self.root_eqs = []
        for vec, const in eqs:
            v2, c2 = apply(vec, const)
            if all(v2[t] == 0 for t in range(12, NV)):
                self.root_eqs.append((v2, c2))
        # Fourier-Motzkin projections: level k sees free[:k+1]
        levels = []
        current = _dedupe(reduced)
        for var in reversed(self.free):
            levels.append((var, [q for q in current if q.coeffs[var] != 0]))
            current = _dedupe(_fm_eliminate(current, var))
        levels.reverse()
        self.levels = levels
        self.root = current  # only fixed indices remain

    def enumerate(self, fixed: Sequence[int]):
        """Yield full 6-tuples of intermediates satisfying the linear constraints."""
        vals = list(fixed) + [0] * 6
        for q in self.root:
            if sum(c * x for c, x in zip(q.coeffs[:12], fixed)) + q.const < 0:
                return
        for v2, c2 in self.root_eqs:
            if sum(c * x for c, x in zip(v2[:12], fixed)) + c2 != 0:
                return
        yield from self._dfs(0, vals)

    def _dfs(self, level, vals):
        if level == len(self.levels):
            full = self._complete(vals)
            if full is not None:
                yield full
            return
        var, cons = self.levels[level]
        lo, hi = None, None
        for q in cons:
            cv = q.coeffs[var]
            rest = q.const
            for t, c in enumerate(q.coeffs):
                if c and t != var:
                    rest += c * vals[t]
            # cv * x + rest >= 0
            if cv > 0:
                bound = ceil(Fraction(-rest, cv))
                lo = bound if lo is None else max(lo, bound)
            else:
                bound = floor(Fraction(rest, -cv))
                hi = bound if hi is None else min(hi, bound)
        if lo is None or hi is None:
            raise EnumerationError("intermediate index is unbounded for this wiring")
        for x in range(lo, hi + 1):
            vals[var] = x
            yield from self._dfs(level + 1, vals)
        vals[var] = 0

    def _complete(self, vals):
        full = list(vals)
        for piv, (pv, pc) in self.subst.items():
            x = pc + sum(c * vals[t] for t, c in enumerate(pv) if c)
            if x.denominator != 1:
                return None
            full[piv] = int(x)
        eqs, ineqs, parities = self.all_checks
        for vec, const in eqs:
            if sum(c * x for c, x in zip(vec, full)) + const != 0:
                return None
        for vec, const in ineqs:
            if sum(c * x for c, x in zip(vec, full)) + const < 0:
                return None
        for vec, const in parities:
            if (sum(c * x for c, x in zip(vec, full)) + const) % 2:
                return None
        return tuple(full[12:])


def _dedupe(qs):
    seen = set()
    out = []
    for q in qs:
        if all(c == 0 for c in q.coeffs):
            if q.const < 0:
                out.append(q)  # infeasible marker kept
            continue
        key = (q.coeffs, q.const)
        if key not in seen:
            seen.add(key)
            out.append(q)
    # drop constraints dominated by a tighter one with identical coefficients
    best: dict = {}
    for q in out:
        if q.coeffs not in best or q.const < best[q.coeffs].const:
            best[q.coeffs] = q
    return list(best.values())


def _fm_eliminate(qs, var):
    pos = [q for q in qs if q.coeffs[var] > 0]
    neg = [q for q in qs if q.coeffs[var] < 0]
    out = [q for q in qs if q.coeffs[var] == 0]
    for p in pos:
        for n in neg:
            cp, cn = p.coeffs[var], -n.coeffs[var]
            coeffs = tuple(cn * x + cp * y for x, y in zip(p.coeffs, n.coeffs))
            out.append(_Ineq(coeffs, cn * p.const + cp * n.const).normalized())
    return out


# --------------------------------------------------------------------------
# evaluation


def _plans(wiring: Wiring):
    cache = wiring.__dict__.setdefault("_plans", {})
    if not cache:
        cache["lhs"] = _Plan(wiring, "lhs")
        cache["rhs"] = _Plan(wiring, "rhs")
    return cache


def _side_value(wiring: Wiring, side: str, out, inp, collect=None):
    plan = _plans(wiring)[side]
    fixed = tuple(out) + tuple(inp)
    total = Q(0)
    terms = 0
    for mids in plan.enumerate(fixed):
        vals = fixed + mids
        prod = Q(1)
        for fname, out_slots, in_slots in SIDES[side]:
            idx = [vals[_slot_index(s)] for s in out_slots + in_slots]
            x = wiring.factors[fname](*idx)
            if x == 0:
                prod = x
                break
            prod *= x
        terms += 1
        if prod != 0:
            total += prod
            if collect is not None:
                collect.append(mids)
    return total, terms


def check_lattice(typestring: str, sextet) -> None:
    for n, (letter, x) in enumerate(zip(typestring, sextet), start=1):
        if letter == "O" and x < 0:
            raise ValueError(f"index {x} on F_+ space {n}")


def rrrr_check_pair(wiring: Wiring, out, inp):
    """(lhs, rhs) of the tetrahedron equation for one transition inp -> out."""
    check_lattice(wiring.typestring, out)
    check_lattice(wiring.typestring, inp)
    lhs, _ = _side_value(wiring, "lhs", out, inp)
    rhs, _ = _side_value(wiring, "rhs", out, inp)
    return lhs, rhs


def brute_force_terms(wiring: Wiring, side: str, out, inp, margin: int):
    """Nonzero intermediate sextets found by scanning a box (for soundness tests).

    The box extends ``margin`` beyond the largest fixed index magnitude.
    """
    import itertools

    fixed = tuple(out) + tuple(inp)
    box = max(abs(x) for x in fixed) + margin
    rngs = [range(0, box + 1) if wiring.typestring[n] == "O" else range(-box, box + 1) for n in range(6)]
    found = set()
    for mids in itertools.product(*rngs):
        vals = fixed + mids
        prod = Q(1)
        for fname, out_slots, in_slots in SIDES[side]:
            idx = [vals[_slot_index(s)] for s in out_slots + in_slots]
            prod *= wiring.factors[fname](*idx)
            if prod == 0:
                break
        if prod != 0:
            found.add(mids)
    return found


def enumerated_terms(wiring: Wiring, side: str, out, inp):
    found: list = []
    _side_value(wiring, side, out, inp, collect=found)
    return set(found)


# --------------------------------------------------------------------------
# sampling and sweeps

IN_BOX_PLUS = (0, 3)
IN_BOX_F = (-2, 2)


def _step_outputs(kernel: RKernel, inp, spread: int = 2):
    """Candidate out-triples of one factor with nonzero element."""
    if kernel.locally_finite:
        cands = out_fiber(kernel, inp)
    else:
        import itertools

        # the sector types shift the Z output by about d, so widen by |d| + 1
        spread += abs(kernel.d or 0) + 1
        rngs = []
        for letter, x in zip(kernel.tag, inp):
            lo = x - spread
            if letter == "O":
                lo = max(lo, 0)
            rngs.append(range(lo, x + spread + 1))
        cands = [o for o in itertools.product(*rngs) if support(kernel.tag, kernel.d, o, inp)]
    return [o for o in cands if kernel(*o, *inp) != 0]


def sample_pairs(wiring: Wiring, seed: int, count: int, *, uniform_fraction: float = 0.1):
    """Deterministic (out, in) pairs, mostly obtained by walking the lhs factors."""
    rng = random.Random(seed)
    ts = wiring.typestring

    def rand_sextet():
        return tuple(
            rng.randint(*(IN_BOX_PLUS if letter == "O" else IN_BOX_F)) for letter in ts
        )

    pairs = []
    attempts = 0
    while len(pairs) < count:
        attempts += 1
        if attempts > 50 * count:
            raise RuntimeError("could not sample enough pairs")
        inp = rand_sextet()
        if rng.random() < uniform_fraction:
            pairs.append((rand_sextet(), inp))
            continue
        state = list(inp)
        dead = False
        for fname in ("ABD", "ACE", "BCF", "DEF"):
            spaces = FACTOR_SPACES[fname]
            local = tuple(state[s - 1] for s in spaces)
            outs = _step_outputs(wiring.factors[fname], local)
            if not outs:
                dead = True
                break
            choice = outs[rng.randrange(len(outs))]
            for s, x in zip(spaces, choice):
                state[s - 1] = x
        if not dead:
            pairs.append((tuple(state), inp))
    return pairs


def rrrr_sweep(typestring: str, seed: int, pairs: int = 500, *, wiring: Wiring | None = None, max_failures=None):
    if typestring not in FINITE_TYPES:
        raise ValueError(f"{typestring} is not a finitely checkable type")
    if wiring is None:
        wiring = wire_parameters(typestring, seed)
    report = VerificationReport("rrrr", type_tag=typestring, seed=seed, params=wiring.point)
    report.notes["sectors"] = dict(sorted(wiring.sectors.items()))
    nonzero = 0
    for out, inp in sample_pairs(wiring, seed, pairs):
        lhs, nl = _side_value(wiring, "lhs", out, inp)
        rhs, nr = _side_value(wiring, "rhs", out, inp)
        report.pairs += 1
        report.evaluations += nl + nr
        if lhs != 0 or rhs != 0:
            nonzero += 1
        if lhs != rhs:
            report.fail(out=list(out), inp=list(inp), lhs=lhs, rhs=rhs)
            if max_failures is not None and report.failure_count >= max_failures:
                break
    report.notes["nonzero_pairs"] = nonzero
    return report


def _reads_mu(tag: str, local: str) -> bool:
    """False for the derived mu of a sector kernel, which enters only via d."""
    c = sector_constraint(tag, 0)
    return c is None or c.target != local


def mu_sites(wiring: Wiring) -> list[tuple[int, str]]:
    """(space, factor) pairs whose mu is read by that factor's formula."""
    sites = []
    for fname, spaces in FACTOR_SPACES.items():
        tag = wiring.factors[fname].tag
        for n, space in enumerate(spaces, start=1):
            if tag[n - 1] == "O" and _reads_mu(tag, f"mu{n}"):
                sites.append((space, fname))
    return sorted(sites)


def invert_mu(wiring: Wiring, space: int, factor: str | None = None) -> Wiring:
    """A deliberately broken wiring: the mu of one O space inverted inside one factor.

    Sector data of the factor is kept as it was, so the mutant is evaluated
    with unchanged d.
    """
    if wiring.typestring[space - 1] != "O":
        raise WiringError(f"space {space} is not an O space")
    names = [factor] if factor else [f for f, sp in FACTOR_SPACES.items() if space in sp]
    fname = names[0]
    spaces = FACTOR_SPACES[fname]
    if space not in spaces:
        raise WiringError(f"factor {fname} does not act on space {space}")
    k = wiring.factors[fname]
    local = f"mu{spaces.index(space) + 1}"
    if not _reads_mu(k.tag, local):
        raise WiringError(f"{fname} ({k.tag}) sees {local} only through its sector integer")
    bad_point = k.point.replace(**{local: 1 / k.point[local]})
    factors = dict(wiring.factors)
    factors[fname] = RKernel(k.tag, bad_point, d=k.d, strict=False)
    return Wiring(wiring.typestring, wiring.point, factors, dict(wiring.sectors), wiring.seed)
