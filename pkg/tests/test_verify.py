import random

import pytest

from qtetra.exactnum import Q
from qtetra.faults import Mutation, mutate_formula
from qtetra.kernels import KERNEL_TYPES, RKernel, kernel_point
from qtetra.lops import nontrivial_vtuples
from qtetra.verify import (
    RecursionOracle,
    component_relation,
    lattice_triples,
    line_ranges,
    oracle_ratio_check,
    recursion_oracle_zzz,
    rlll_check_pair,
    rlll_sweep,
    rlll_type_sweep,
    sample_sextets,
    sector_coupling_audit,
    z_entries_lower_check,
    zzz_parity_sector,
)

SMALL = dict(window_plus=(0, 2), window_f=(-1, 1))


def test_line_ranges():
    assert line_ranges("OZX") == [range(0, 5), range(-3, 4), range(-3, 4)]
    with pytest.raises(ValueError):
        line_ranges("O", window_plus=(-1, 2))
    assert len(lattice_triples("OOO", (0, 1))) == 8


def test_zzz_001001_relation():
    K = RKernel("ZZZ", kernel_point("ZZZ", 2))
    v = (0, 0, 1, 0, 0, 1)
    rng = random.Random(1)
    for _ in range(10):
        out = tuple(rng.randint(-3, 3) for _ in range(3))
        inp = tuple(rng.randint(-3, 3) for _ in range(3))
        lhs, rhs = rlll_check_pair(K, v, out, inp)
        assert lhs == rhs
        a, b, c = out
        i, j, k = inp
        assert K(a, b, c, i, j - 1, k - 1) == K(a, b + 1, c + 1, i, j, k)


@pytest.mark.parametrize("tag", KERNEL_TYPES)
def test_trivial_tuple_gives_element(tag):
    K = RKernel(tag, kernel_point(tag, 5))
    out = tuple(1 if letter == "O" else -1 for letter in tag)
    inp = tuple(2 if letter == "O" else 0 for letter in tag)
    lhs, rhs = rlll_check_pair(K, (0, 0, 0, 0, 0, 0), out, inp)
    assert lhs == rhs
    # the trivial relation is a multiple of the element itself
    if K(*out, *inp) == 0:
        assert lhs == 0


def test_rejects_non_conserving_tuple():
    K = RKernel("OOO", kernel_point("OOO", 5))
    with pytest.raises(ValueError):
        rlll_check_pair(K, (1, 0, 0, 0, 0, 0), (0, 0, 0), (0, 0, 0))


def test_ozz_relations_at_random_indices():
    K = RKernel("OZZ", kernel_point("OZZ", 8))
    rng = random.Random(4)
    for v in nontrivial_vtuples():
        for _ in range(4):
            out = (rng.randint(0, 3), rng.randint(-3, 3), rng.randint(-3, 3))
            inp = (rng.randint(0, 3), rng.randint(-3, 3), rng.randint(-3, 3))
            lhs, rhs = rlll_check_pair(K, v, out, inp)
            assert lhs == rhs


@pytest.mark.parametrize("tag", KERNEL_TYPES)
def test_rlll_small_window(tag):
    report = rlll_sweep(RKernel(tag, kernel_point(tag, 11)), **SMALL)
    assert report.passed, report.failures[:1]
    assert report.relations == 18
    assert report.pairs > 0


def test_ooo_window_zero_to_five():
    report = rlll_sweep(RKernel("OOO", kernel_point("OOO", 3)), window_plus=(0, 5))
    assert report.passed


def test_type_sweep_folds_seeds():
    report = rlll_type_sweep("XXZ", seeds=(1, 2), **SMALL)
    assert report.passed
    assert report.notes["seeds"] == [1, 2]


@pytest.mark.parametrize("signs", [(-1, 1, 1), (1, -1, 1), (1, 1, -1), (-1, -1, -1)])
def test_zzz_sign_variants_satisfy_their_relation(signs):
    K = RKernel("ZZZ", kernel_point("ZZZ", 9), signs=signs)
    assert rlll_sweep(K, window_f=(-2, 2)).passed


def test_sign_flip_mutant_fails():
    fn, _ = mutate_formula(Mutation("ZZZ", "sign", 0))
    K = RKernel("ZZZ", kernel_point("ZZZ", 11), formula=fn)
    report = rlll_sweep(K, max_failures=1)
    assert not report.passed
    assert report.failure_count == 1
    fail = report.failures[0]
    assert fail["lhs"] != fail["rhs"]


def test_oracle_examples():
    p = kernel_point("ZZZ", 11)
    assert recursion_oracle_zzz(p, (0, 0, 0), (0, 0, 0)) == 1
    r1, r3, s1, s3 = p["r1"], p["r3"], p["s1"], p["s3"]
    t1, t2, w1, w2, w3 = p["t1"], p["t2"], p["w1"], p["w2"], p["w3"]
    expect = (t2 * w2 / (s3 * t1 * w1)) * (1 - r1 * w3 / (s1 * w2)) / (1 - r1 * r3 * w3 / (s1 * s3 * w1))
    assert recursion_oracle_zzz(p, (1, 0, 0), (0, 1, 0)) == expect


def test_oracle_seeds_scale_sectors():
    p = kernel_point("ZZZ", 12)
    seeds = {(0, 0): Q(1), (0, 1): Q(3), (1, 0): Q(1), (1, 1): Q(1)}
    plain, seeded = RecursionOracle(p), RecursionOracle(p, seeds)
    for sx in sample_sextets(2, 5):
        factor = 3 if zzz_parity_sector(*sx) == (0, 1) else 1
        assert seeded(*sx) == factor * plain(*sx)


def test_oracle_ratio_constant_per_sector():
    p = kernel_point("ZZZ", 11)
    report = oracle_ratio_check(p, sample_sextets(11, 50))
    assert report.passed, report.failures[:2]
    assert set(report.notes["counts"].values()) == {50}


def test_oracle_catches_mutant():
    fn, _ = mutate_formula(Mutation("ZZZ", "swap", 5))
    report = oracle_ratio_check(kernel_point("ZZZ", 11), sample_sextets(11, 10), formula=fn)
    assert not report.passed


@pytest.mark.parametrize("tag", ["ZZZ", "OOZ", "ZOO", "OZO", "XXZ", "ZXX", "XZX"])
def test_sector_coupling(tag):
    report = sector_coupling_audit(tag, kernel_point(tag, 2))
    assert report.passed, report.failures[:2]
    assert report.relations == 18


def test_component_relation_shape():
    left, right = component_relation("ZZZ", (0, 0, 1, 0, 0, 1))
    assert [sh for _, sh, _ in left] == [(0, -1, -1)]
    assert [sh for sh, _, _ in right] == [(0, 1, 1)]


def test_z_entries_never_raise_index():
    assert z_entries_lower_check(kernel_point("ZZZ", 3)).passed
