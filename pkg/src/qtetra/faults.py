"""Single-token mutations of kernel formulas, recompiled from source.

Used to show that the RLLL sweep (and the RRRR sweep through the wired
factors) is sensitive to any small transcription error.
"""

from __future__ import annotations

import ast
import inspect
import textwrap
from dataclasses import dataclass
from typing import Callable

from . import kernels
from .kernels import FORMULAS, RKernel, kernel_point
from .report import VerificationReport

KINDS = ("sign", "constant", "swap")


@dataclass(frozen=True)
class Mutation:
    """``kind`` applied at the ``index``-th eligible site of ``tag``'s formula.

    sign: a binary minus becomes plus, or a unary minus is dropped.
    constant: an integer literal n becomes n + 1.
    swap: a parameter attribute P.<name> becomes P.<other>.
    """

    tag: str
    kind: str
    index: int
    other: str | None = None

    def label(self) -> str:
        extra = f"->{self.other}" if self.other else ""
        return f"{self.tag}:{self.kind}#{self.index}{extra}"


class _Mutator(ast.NodeTransformer):
    def __init__(self, mutation: Mutation):
        self.m = mutation
        self.names = set(kernels.param_names(mutation.tag))
        self.count = 0
        self.applied: str | None = None

    def _hit(self) -> bool:
        hit = self.count == self.m.index
        self.count += 1
        return hit

    def visit_BinOp(self, node):
        self.generic_visit(node)
        if self.m.kind == "sign" and isinstance(node.op, ast.Sub) and self._hit():
            self.applied = ast.unparse(node)
            node.op = ast.Add()
        return node

    def visit_UnaryOp(self, node):
        self.generic_visit(node)
        if self.m.kind == "sign" and isinstance(node.op, ast.USub) and self._hit():
            self.applied = ast.unparse(node)
            return node.operand
        return node

    def visit_Constant(self, node):
        if self.m.kind == "constant" and type(node.value) is int and self._hit():
            self.applied = repr(node.value)
            return ast.copy_location(ast.Constant(node.value + 1), node)
        return node

    def visit_Attribute(self, node):
        self.generic_visit(node)
        if (
            self.m.kind == "swap"
            and isinstance(node.value, ast.Name)
            and node.value.id == "P"
            and _is_param(node.attr)
            and _partner(node.attr, self.names) != node.attr
            and self._hit()
        ):
            self.applied = f"P.{node.attr}"
            node.attr = self.m.other or _partner(node.attr, self.names)
        return node


def _is_param(attr: str) -> bool:
    return attr[:-1] in ("r", "s", "t", "w", "mu", "sq_r", "sq_s", "sq_t", "sq_w") and attr[-1] in "123"


def _partner(attr: str, names) -> str:
    """Same letter on the next line (1 -> 2 -> 3 -> 1) that the type has."""
    for step in (1, 2):
        line = (int(attr[-1]) - 1 + step) % 3 + 1
        cand = f"{attr[:-1]}{line}"
        if cand.removeprefix("sq_") in names:
            return cand
    # no same-letter partner: swap the quartet letter instead (r <-> s, t <-> w)
    head = attr[:-1]
    flip = {"r": "s", "s": "r", "t": "w", "w": "t"}
    base = head.removeprefix("sq_")
    return head.replace(base, flip[base]) + attr[-1] if base in flip else attr


def _formula_tree(fn: Callable) -> ast.FunctionDef:
    src = textwrap.dedent(inspect.getsource(fn))
    return ast.parse(src).body[0]


def count_sites(tag: str, kind: str) -> int:
    """Number of eligible sites of ``kind`` in the formula for ``tag``."""
    probe = _Mutator(Mutation(tag, kind, -1))
    probe.visit(_formula_tree(FORMULAS[tag]))
    return probe.count


def mutate_formula(mutation: Mutation) -> tuple[Callable, str]:
    """Compile the mutated formula; returns (function, text of the replaced token)."""
    if mutation.kind not in KINDS:
        raise ValueError(f"unknown mutation kind {mutation.kind!r}")
    tree = _formula_tree(FORMULAS[mutation.tag])
    mutator = _Mutator(mutation)
    tree = mutator.visit(tree)
    if mutator.applied is None:
        raise IndexError(f"{mutation.label()}: only {mutator.count} sites")
    tree.name = f"{tree.name}_mutant"
    module = ast.fix_missing_locations(ast.Module(body=[tree], type_ignores=[]))
    namespace: dict = {}
    exec(compile(module, f"<mutant {mutation.label()}>", "exec"), vars(kernels), namespace)
    return namespace[tree.name], mutator.applied


# A fixed catalogue: every kernel type, all three kinds.
CATALOGUE: tuple[Mutation, ...] = (
    Mutation("ZZZ", "sign", 0),
    Mutation("ZZZ", "swap", 3),
    Mutation("OZZ", "constant", 4),
    Mutation("ZZO", "sign", 2),
    Mutation("ZOZ", "swap", 0),
    Mutation("OOZ", "constant", 1),
    Mutation("ZOO", "sign", 1),
    Mutation("OZO", "swap", 0),
    Mutation("OOO", "sign", 0),
    Mutation("OOO", "swap", 0),
    Mutation("XXZ", "constant", 6),
    Mutation("ZXX", "swap", 2),
    Mutation("XZX", "sign", 0),
)


def check_fault(mutation: Mutation, seed: int = 11, **sweep_kw) -> VerificationReport:
    """RLLL sweep of the mutated kernel, stopping at the first failure.

    An arithmetic error raised by the mutant also counts as a detection.
    """
    from .verify import rlll_sweep

    fn, token = mutate_formula(mutation)
    point = kernel_point(mutation.tag, seed)
    mutant = RKernel(mutation.tag, point, formula=fn)
    sweep_kw.setdefault("max_failures", 1)
    try:
        report = rlll_sweep(mutant, seed=seed, **sweep_kw)
    except (ArithmeticError, ValueError) as exc:
        report = VerificationReport("rlll", type_tag=mutation.tag, seed=seed, params=point)
        report.fail(error=f"{type(exc).__name__}: {exc}")
    report.suite = "fault"
    report.notes.update(mutation=mutation.label(), token=token)
    return report
