"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 when
the configuration is invalid.  Reports are JSON with rationals as "num/den"
strings; ``elapsed_ms`` is only filled in with ``--timing`` so that repeated
runs with the same flags produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .exactnum import ParameterPoint
from .kernels import KERNEL_TYPES, SECTOR_TYPES, RKernel, SectorError, describe_support_failure, infer_sector, kernel_point
from .report import VerificationReport

PARAMS_SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    type_tag: str | None = None
    seed: int = 1
    window_plus: tuple[int, int] = (0, 4)
    window_f: tuple[int, int] = (-3, 3)
    trials: int = 1
    pairs: int = 500
    params_path: Path | None = None
    output: Path | None = None
    timing: bool = False
    extra: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# parsing helpers


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"window must look like LO..HI, got {text!r}") from None
    if lo > hi:
        raise ConfigError(f"empty window {text!r}")
    return lo, hi


def parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{what} must be an integer, got {text!r}") from None


def parse_triple(text: str, what: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"{what} needs three comma-separated integers")
    return tuple(parse_int(p, what) for p in parts)


def load_params(path: Path) -> tuple[str | None, ParameterPoint]:
    """Read a versioned parameter file: {"schema": 1, "type": ..., "point": {...}}."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read parameter file: {exc}") from None
    if doc.get("schema") != PARAMS_SCHEMA:
        raise ConfigError(f"unsupported parameter schema {doc.get('schema')!r}")
    try:
        return doc.get("type"), ParameterPoint.from_json(doc["point"])
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad parameter file: {exc}") from None


def dump_params(tag: str, point: ParameterPoint) -> str:
    return json.dumps({"schema": PARAMS_SCHEMA, "type": tag, "point": point.as_json()}, indent=2, sort_keys=True)


def _check_type(tag: str | None) -> str:
    if tag not in KERNEL_TYPES:
        raise ConfigError(f"unknown kernel type {tag!r}; expected one of {', '.join(KERNEL_TYPES)}")
    return tag


def _kernel(cfg: RunConfig, seed: int) -> RKernel:
    tag = _check_type(cfg.type_tag)
    d = cfg.extra.get("d")
    signs = cfg.extra.get("signs", (1, 1, 1))
    if cfg.params_path is not None:
        ftag, point = load_params(cfg.params_path)
        if ftag not in (None, tag):
            raise ConfigError(f"parameter file is for {ftag}, not {tag}")
        if tag in SECTOR_TYPES and d is None:
            d = point.ints.get("d")
            if d is None:
                try:
                    d = infer_sector(tag, point)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
    else:
        point = kernel_point(tag, seed, d=d if tag in SECTOR_TYPES else None)
    try:
        return RKernel(tag, point, d=d, signs=signs)
    except (SectorError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid kernel configuration: {exc}") from None


# --------------------------------------------------------------------------
# subcommands


def cmd_rlll(cfg: RunConfig) -> VerificationReport:
    from .verify import rlll_sweep

    total = VerificationReport("rlll", type_tag=_check_type(cfg.type_tag), seed=cfg.seed)
    seeds = [cfg.seed + n for n in range(cfg.trials)]
    kernels = [_kernel(cfg, s) for s in seeds]
    total.notes["seeds"] = seeds
    for seed, kernel in zip(seeds, kernels):
        sub = rlll_sweep(kernel, window_plus=cfg.window_plus, window_f=cfg.window_f, seed=seed)
        total.window = sub.window
        total.relations = sub.relations
        total.absorb(sub)
        total.notes.setdefault("points", []).append(kernel.point)
    return total


def cmd_rrrr(cfg: RunConfig) -> VerificationReport:
    from .tetra import FINITE_TYPES, rrrr_sweep

    if cfg.extra.get("all"):
        types = list(FINITE_TYPES)
    else:
        if cfg.type_tag not in FINITE_TYPES:
            raise ConfigError(f"{cfg.type_tag!r} is not in the finite-sum type list")
        types = [cfg.type_tag]
    total = VerificationReport("rrrr", type_tag="all" if len(types) > 1 else types[0], seed=cfg.seed)
    per_type = {}
    for tag in types:
        sub = rrrr_sweep(tag, cfg.seed, cfg.pairs)
        total.absorb(sub)
        per_type[tag] = {"pairs": sub.pairs, "failures": sub.failure_count, "nonzero": sub.notes["nonzero_pairs"]}
        if len(types) == 1:
            total.params = sub.params
            total.notes.update(sub.notes)
    total.notes["types"] = per_type
    return total


def cmd_element(cfg: RunConfig) -> VerificationReport:
    kernel = _kernel(cfg, cfg.seed)
    out, inp = cfg.extra["out"], cfg.extra["inp"]
    report = VerificationReport("element", type_tag=kernel.tag, seed=cfg.seed, params=kernel.point)
    value = kernel.element(out, inp)
    report.evaluations = 1
    report.notes["out"] = list(out)
    report.notes["in"] = list(inp)
    report.notes["value"] = value
    try:
        report.notes["sector"] = kernel.sector_of(out, inp)
    except ArithmeticError as exc:
        report.notes["sector"] = str(exc)
    if kernel.d is not None:
        report.notes["d"] = kernel.d
    why = describe_support_failure(kernel.tag, kernel.d, out, inp)
    if why is not None:
        report.notes["violated"] = why
    return report


def cmd_intertwiner(cfg: RunConfig) -> VerificationReport:
    from . import aqsl3

    mode = cfg.type_tag or "OOO"
    if mode == "OOO":
        config = aqsl3.sample_ooo_config(cfg.seed)
        window = cfg.window_plus
    elif mode == "ZZZ":
        config = aqsl3.sample_zzz_config(cfg.seed)
        window = cfg.window_f
    else:
        raise ConfigError("intertwiner mode must be OOO or ZZZ")
    violate = cfg.extra.get("violate")
    if violate is not None:
        if mode != "ZZZ" or not 0 <= violate <= 8:
            raise ConfigError("--violate takes 0..8 and needs ZZZ mode")
        config = aqsl3.violate(config, violate)
    report = aqsl3.intertwiner_check(config, window)
    report.seed = cfg.seed
    if mode == "ZZZ":
        report.notes["relations_hold"] = aqsl3.compatibility_residuals(config)
        if violate is None:
            ab = aqsl3.ab_constant_check(config, (max(window[0], -2), min(window[1], 2)))
            report.notes["ab_constants"] = ab.summary()
            report.absorb(ab)
    return report


def cmd_algebra_check(cfg: RunConfig) -> VerificationReport:
    from . import aqsl3
    from .exactnum import Q
    from .weyl import RepTag, check_algebra_relations

    total = VerificationReport("algebra-check", seed=cfg.seed)
    point = kernel_point("OOO", cfg.seed)
    q = point.q
    wf = range(cfg.window_f[0], cfg.window_f[1] + 1)
    wp = range(max(cfg.window_plus[0], 0), cfg.window_plus[1] + 1)
    for tag in RepTag:
        total.absorb(check_algebra_relations(tag, q, wp if tag is RepTag.O else wf))
    u, g, h = Q(3), Q(5, 7), Q(2, 11)
    for which in (1, 2):
        image = aqsl3.rho_images(which, q, u, g, h)
        for tag in (RepTag.ZP, RepTag.X):
            total.absorb(aqsl3.check_coordinate_ring_relations(image, tag, wf))
        o_image = aqsl3.rho_o_images(which, q, point["mu1"])
        total.absorb(aqsl3.check_coordinate_ring_relations(o_image, RepTag.O, wp))
    total.params = point
    return total


def cmd_recursions(cfg: RunConfig) -> VerificationReport:
    """Each component relation at (out, in): the R elements it couples and both sides' values."""
    from .lops import composite, nontrivial_vtuples
    from .verify import _line_ops

    kernel = _kernel(cfg, cfg.seed)
    at = cfg.extra["at"]
    out, inp = tuple(at[:3]), tuple(at[3:])
    report = VerificationReport("recursions", type_tag=kernel.tag, seed=cfg.seed, params=kernel.point)
    Ls = _line_ops(kernel)
    rels = []
    for v in nontrivial_vtuples():
        M = composite("left", Ls, v)
        N = composite("right", Ls, v)
        lhs = [{"coeff": c, "R": list(out) + list(mid)} for mid, c in sorted(M.forward(inp).items())]
        rhs = [{"coeff": c, "R": list(mid) + list(inp)} for mid, c in sorted(N.transpose(out).items())]
        lval = sum((t["coeff"] * kernel.element(out, t["R"][3:]) for t in lhs), 0)
        rval = sum((t["coeff"] * kernel.element(t["R"][:3], inp) for t in rhs), 0)
        report.evaluations += len(lhs) + len(rhs)
        rels.append({"v": "".join(map(str, v)), "lhs": lhs, "rhs": rhs, "lhs_value": lval, "rhs_value": rval})
        if lval != rval:
            report.fail(v=list(v), lhs=lval, rhs=rval)
    report.relations = len(rels)
    report.pairs = 1
    report.notes["at"] = list(at)
    report.notes["relations"] = rels
    return report


COMMANDS = {
    "rlll": cmd_rlll,
    "rrrr": cmd_rrrr,
    "element": cmd_element,
    "intertwiner": cmd_intertwiner,
    "algebra-check": cmd_algebra_check,
    "recursions": cmd_recursions,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtetra", description="Exact checks of 3D R operators.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, *, typed=True):
        if typed:
            p.add_argument("--type", dest="type_tag")
        p.add_argument("--seed", default="1")
        p.add_argument("--output", type=Path)
        p.add_argument("--timing", action="store_true", help="record elapsed_ms in the report")
        p.add_argument("--quiet", action="store_true", help="print only the summary line")

    def kernel_opts(p):
        p.add_argument("--params", type=Path, help="versioned JSON parameter file")
        p.add_argument("--d", help="sector integer for OOZ, ZOO, OZO")
        p.add_argument("--signs", help="ZZZ representation signs, e.g. +,-,+")

    p = sub.add_parser("rlll", help="RLLL = LLLR on a window")
    common(p)
    kernel_opts(p)
    p.add_argument("--window", help="F window LO..HI (F_+ lines are clipped at 0)")
    p.add_argument("--window-plus", help="F_+ window LO..HI")
    p.add_argument("--trials", default="1")

    p = sub.add_parser("rrrr", help="finite-sum tetrahedron equation")
    common(p)
    p.add_argument("--pairs", default="500")
    p.add_argument("--all", action="store_true")

    p = sub.add_parser("element", help="one kernel element with sector data")
    common(p)
    kernel_opts(p)
    p.add_argument("--out", required=True, help="a,b,c")
    p.add_argument("--in", dest="inp", required=True, help="i,j,k")

    p = sub.add_parser("intertwiner", help="A_q(sl3) intertwining relations")
    common(p, typed=False)
    p.add_argument("--mode", dest="type_tag", default="OOO")
    p.add_argument("--window")
    p.add_argument("--violate", help="break one compatibility relation (0..8, ZZZ mode)")

    p = sub.add_parser("algebra-check", help="Weyl, oscillator and coordinate-ring relations")
    common(p, typed=False)
    p.add_argument("--window")

    p = sub.add_parser("recursions", help="the 18 component relations at an index tuple")
    common(p)
    kernel_opts(p)
    p.add_argument("--at", required=True, help="a,b,c,i,j,k")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ns.subcommand, getattr(ns, "type_tag", None), parse_int(ns.seed, "--seed"))
    cfg.output = ns.output
    cfg.timing = ns.timing
    if getattr(ns, "params", None) is not None:
        cfg.params_path = ns.params
    if getattr(ns, "d", None) is not None:
        cfg.extra["d"] = parse_int(ns.d, "--d")
    if getattr(ns, "signs", None):
        signs = tuple(-1 if s.strip() == "-" else 1 if s.strip() == "+" else 0 for s in ns.signs.split(","))
        if len(signs) != 3 or 0 in signs:
            raise ConfigError("--signs takes three of + or -")
        if cfg.type_tag != "ZZZ" and signs != (1, 1, 1):
            raise ConfigError("--signs applies to ZZZ only")
        cfg.extra["signs"] = signs
    if getattr(ns, "window", None):
        lo, hi = parse_window(ns.window)
        cfg.window_f = (lo, hi)
        if cfg.subcommand == "intertwiner" or not getattr(ns, "window_plus", None):
            cfg.window_plus = (max(lo, 0), hi)
    if getattr(ns, "window_plus", None):
        lo, hi = parse_window(ns.window_plus)
        if lo < 0:
            raise ConfigError("F_+ windows start at 0 or above")
        cfg.window_plus = (lo, hi)
    if cfg.window_plus[1] < 0:
        raise ConfigError("F_+ window is empty")
    if getattr(ns, "trials", None) is not None:
        cfg.trials = parse_int(ns.trials, "--trials")
        if cfg.trials < 1:
            raise ConfigError("--trials must be positive")
    if getattr(ns, "pairs", None) is not None:
        cfg.pairs = parse_int(ns.pairs, "--pairs")
        if cfg.pairs < 1:
            raise ConfigError("--pairs must be positive")
    if getattr(ns, "all", False):
        cfg.extra["all"] = True
    if getattr(ns, "out", None) is not None:
        cfg.extra["out"] = parse_triple(ns.out, "--out")
        cfg.extra["inp"] = parse_triple(ns.inp, "--in")
    if getattr(ns, "at", None) is not None:
        parts = ns.at.split(",")
        if len(parts) != 6:
            raise ConfigError("--at needs six comma-separated integers")
        cfg.extra["at"] = tuple(parse_int(p, "--at") for p in parts)
    if getattr(ns, "violate", None) is not None:
        cfg.extra["violate"] = parse_int(ns.violate, "--violate")
    if cfg.subcommand in ("rlll", "element", "recursions"):
        _check_type(cfg.type_tag)
        if "d" in cfg.extra and cfg.type_tag not in SECTOR_TYPES:
            raise ConfigError(f"--d does not apply to {cfg.type_tag}")
    if cfg.subcommand == "rrrr" and not cfg.extra.get("all") and cfg.type_tag is None:
        raise ConfigError("rrrr needs --type or --all")
    return cfg


def run(cfg: RunConfig) -> VerificationReport:
    report = COMMANDS[cfg.subcommand](cfg)
    return report.stop_clock()


VALUE_FLAGS = ("--window", "--window-plus", "--at", "--out", "--in", "--d", "--seed", "--signs")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--window -3..3`` through argparse, which reads -3..3 as a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        report = run(cfg)
    except ConfigError as exc:
        print(f"qtetra: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = report.dumps(timing=cfg.timing)
    if cfg.output is not None:
        cfg.output.write_text(text + "\n")
    if ns.quiet or cfg.output is not None:
        print(report.summary())
    else:
        print(text)
    return EXIT_PASS if report.passed else EXIT_FAIL


__all__ = ["RunConfig", "ConfigError", "main", "build_parser", "config_from_args", "run", "load_params", "dump_params"]
