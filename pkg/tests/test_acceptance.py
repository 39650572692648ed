"""The ten acceptance criteria, each at zero tolerance.

Run with ``pytest tests/test_acceptance.py``; a line per criterion is
printed in the terminal summary (and with ``-s`` as each one finishes).
"""

import itertools
from fractions import Fraction

import pytest

from qtetra.aqsl3 import (
    compatibility_residuals,
    intertwiner_check,
    ab_constant_check,
    sample_ooo_config,
    sample_zzz_config,
    violate,
)
from qtetra.exactnum import Q, phi21_terminating, phi_tilde, qpochhammer
from qtetra.faults import CATALOGUE, check_fault
from qtetra.kernels import KERNEL_TYPES, RKernel, kernel_point
from qtetra.tetra import FINITE_TYPES, rrrr_sweep
from qtetra.verify import (
    boundary_value_check,
    inverse_check,
    local_finiteness_check,
    oracle_ratio_check,
    rlll_type_sweep,
    sample_sextets,
    series_equivalence_check,
    ooo_symmetry_check,
    support_exactness_check,
    unit_mu_point,
)


@pytest.fixture
def criterion(record_property):
    def record(n, ok, detail):
        record_property("criterion", (n, detail))
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
        assert ok, detail

    return record


def test_criterion_01_rlll_completeness(criterion):
    bad, pairs = [], 0
    for tag in KERNEL_TYPES:
        report = rlll_type_sweep(tag)
        pairs += report.pairs
        if not report.passed or report.relations != 18:
            bad.append(tag)
    criterion(1, not bad, f"RLLL on 11 types x 3 seeds, {pairs} relation pairs, failing types {bad}")


def test_criterion_02_rrrr(criterion):
    bad, total, nonzero = [], 0, 0
    for tag in FINITE_TYPES:
        report = rrrr_sweep(tag, 7, 500)
        total += report.pairs
        nonzero += report.notes["nonzero_pairs"]
        if not report.passed or report.pairs < 500:
            bad.append(tag)
    ok = not bad and total >= 10000
    criterion(2, ok, f"RRRR on {len(FINITE_TYPES)} types, {total} pairs ({nonzero} nonzero), failing types {bad}")


def test_criterion_03_oracle(criterion):
    reports = [oracle_ratio_check(kernel_point("ZZZ", seed), sample_sextets(seed, 50)) for seed in (11, 23)]
    counts = [min(r.notes["counts"].values()) for r in reports]
    ok = all(r.passed for r in reports) and len(reports[0].notes["counts"]) == 4 and min(counts) >= 50
    criterion(3, ok, f"oracle ratio constant per parity sector, min {min(counts)} sextets per sector")


def test_criterion_04_boundary_values(criterion):
    bad = []
    for tag in ("OOZ", "ZOO"):
        for d in (-3, -1, 0, 2, 4):
            K = RKernel(tag, kernel_point(tag, 11, d=d))
            for x in range(-6, 7):
                got = K(0, 0, x, 0, 0, 0) if tag == "OOZ" else K(x, 0, 0, 0, 0, 0)
                want = 1 if x == (d if tag == "OOZ" else -d) else 0
                if got != want:
                    bad.append((tag, d, x))
            if not boundary_value_check(K).passed:
                bad.append((tag, d, "check"))
    for seed in (11, 23, 37):
        if RKernel("OOO", kernel_point("OOO", seed))(0, 0, 0, 0, 0, 0) != 1:
            bad.append(("OOO", seed))
    criterion(4, not bad, f"boundary values for OOZ, ZOO and OOO, mismatches {bad}")


def test_criterion_05_support(criterion):
    bad = []
    for tag in ("OOZ", "ZOO", "OZO"):
        for d in (-1, 2):
            if not support_exactness_check(RKernel(tag, kernel_point(tag, 5, d=d)), box=(0, 6)).passed:
                bad.append((tag, d, "support"))
    if not support_exactness_check(RKernel("OOO", kernel_point("OOO", 5)), box=(0, 6)).passed:
        bad.append(("OOO", "support"))
    for tag, d in (("OOZ", 1), ("ZOO", -2), ("OOO", None)):
        K = RKernel(tag, kernel_point(tag, 7, d=d))
        if not local_finiteness_check(K).passed:
            bad.append((tag, "finiteness"))
    criterion(5, not bad, f"support exact on [0,6] boxes and out-fibers finite, failures {bad}")


def test_criterion_06_inverses(criterion):
    bad = []
    for tag, d in (("OOZ", 2), ("OOZ", -1), ("ZOO", 1), ("ZOO", -2), ("OOO", None)):
        if not inverse_check(RKernel(tag, kernel_point(tag, 13, d=d))).passed:
            bad.append((tag, d))
    criterion(6, not bad, f"R R^-1 = 1 on windows for OOZ, ZOO, OOO, failures {bad}")


def test_criterion_07_ooo_symmetry(criterion):
    reports = [ooo_symmetry_check(unit_mu_point(q), bound=6) for q in (Q(2, 5), Q(-3, 7))]
    criterion(7, all(r.passed for r in reports), "OOO symmetry at unit mu for all indices <= 6")


def test_criterion_08_intertwiner(criterion):
    problems = []
    for seed in (1, 2):
        if not intertwiner_check(sample_ooo_config(seed)).passed:
            problems.append(f"OOO seed {seed}")
        z = sample_zzz_config(seed)
        if not all(compatibility_residuals(z).values()) or not intertwiner_check(z).passed:
            problems.append(f"ZZZ seed {seed}")
        if not ab_constant_check(z).passed:
            problems.append(f"AB constants seed {seed}")
    z = sample_zzz_config(1)
    for which in range(9):
        if intertwiner_check(violate(z, which), window=(-2, 2), max_failures=1).passed:
            problems.append(f"violation {which} undetected")
    criterion(8, not problems, f"intertwiners, AB constants and 9 violations, problems {problems}")


def _special_function_failures():
    bad = []
    pts = [(Q(2, 3), Q(5, 7)), (Q(-4, 3), Q(3, 2)), (Q(7, 2), Q(-2, 9))]
    for z, b in pts:
        for m, n in itertools.product(range(-6, 7), repeat=2):
            if qpochhammer(z, b, m + n) != qpochhammer(z, b, m) * qpochhammer(z * b**m, b, n):
                bad.append(("cocycle", z, b, m, n))
    for q in (Q(2, 3), Q(-5, 4), Q(3, 11)):
        z = Q(7, 5)
        for m in range(-8, 9):
            if phi_tilde(m + 2, z, q) != (1 - z * q**m) * phi_tilde(m, z, q):
                bad.append(("recurrence", q, m))
    for tag in ("OZZ", "ZZO", "ZOZ"):
        for seed in (17, 29):
            if not series_equivalence_check(tag, kernel_point(tag, seed), window=(0, 3)).passed:
                bad.append(("series", tag, seed))
    for b, beta, gamma, z in [(Q(2, 3), Q(5, 7), Q(-3, 2), Q(4, 9)), (Q(-3, 5), Q(7, 2), Q(2, 11), Q(-5, 3))]:
        for depth in range(0, 9):
            alpha = b ** (-depth)
            direct = Fraction(0)
            for n in range(depth + 1):
                num = qpochhammer(alpha, b, n) * qpochhammer(beta, b, n)
                den = qpochhammer(gamma, b, n) * qpochhammer(b, b, n)
                direct += Fraction(num / den) * Fraction(z) ** n
            if Fraction(phi21_terminating(alpha, beta, gamma, b, z, depth)) != direct:
                bad.append(("2phi1", b, depth))
    return bad


def test_criterion_09_special_functions(criterion):
    bad = _special_function_failures()
    criterion(9, not bad, f"cocycle, recurrence, series forms and 2phi1, failures {bad[:3]}")


def test_criterion_10_fault_sensitivity(criterion):
    missed = [m.label() for m in CATALOGUE if check_fault(m).passed]
    ok = len(CATALOGUE) >= 10 and not missed
    criterion(10, ok, f"{len(CATALOGUE) - len(missed)} of {len(CATALOGUE)} mutants caught, missed {missed}")
