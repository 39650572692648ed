import pytest

from qtetra.aqsl3 import (
    GEN,
    PRINTED_MISMATCH,
    ab_constants,
    ab_indices,
    check_coordinate_ring_relations,
    compatibility_residuals,
    coproduct_terms,
    intertwiner_check,
    ooo_config,
    ab_constant_check,
    rho_images,
    rho_o_relation_check,
    sample_ooo_config,
    sample_zzz_config,
    violate,
)
from qtetra.exactnum import Q
from qtetra.verify import rlll_sweep
from qtetra.weyl import WeylElement

q = Q(2, 3)
u, g, h = Q(3), Q(5, 2), Q(-7, 3)


@pytest.fixture(scope="module")
def zcfg():
    return sample_zzz_config(1)


@pytest.mark.parametrize("which", [1, 2])
@pytest.mark.parametrize("tag", ["Z+", "X"])
def test_rho_relations(which, tag):
    report = check_coordinate_ring_relations(rho_images(which, q, u, g, h), tag, range(-3, 4))
    assert report.passed, report.failures[:1]
    assert report.relations > 0


@pytest.mark.parametrize("which", [1, 2])
def test_rho_o_relations(which):
    assert rho_o_relation_check(q, Q(5, 7), which).passed


def test_rho_image_examples():
    im1, im2 = rho_images(1, q, u, g, h), rho_images(2, q, u, g, h)
    assert im1[3, 3] == WeylElement.scalar(q, 1 / u)
    assert im1[2, 1] == WeylElement.monomial(q, 0, 1, -q * h)
    assert im2[1, 1] == WeylElement.scalar(q, 1 / u)
    assert not im1[1, 3] and not im2[3, 1]
    with pytest.raises(ValueError):
        rho_images(3, q, u, g, h)
    with pytest.raises(ValueError):
        rho_images(1, q, Q(0), g, h)


def test_broken_image_fails_relations():
    im = rho_images(1, q, u, g, h)
    table = dict(im.table)
    table[1, 2] = table[1, 2] * 2
    bad = type(im)(1, q, u, g, h, table)
    assert not check_coordinate_ring_relations(bad, "Z+", range(-2, 3)).passed


def test_coproduct_terms():
    for l, m in GEN:
        plain, primed = coproduct_terms(l, m), coproduct_terms(l, m, primed=True)
        assert len(plain) == len(primed) == 9
        for t1, t2, t3 in plain:
            assert t1[0] == l and t3[1] == m and t1[1] == t2[0] and t2[1] == t3[0]
        for t1, t2, t3 in primed:
            assert t3[0] == l and t1[1] == m and t3[1] == t2[0] and t2[1] == t1[0]


def test_ooo_intertwiner_slotwise():
    report = intertwiner_check(sample_ooo_config(1))
    assert report.passed, report.failures[:1]
    assert report.relations == 9


def test_ooo_literal_assignment_needs_equal_mu():
    cfg = sample_ooo_config(1, slotwise=False)
    assert cfg.point["mu1"] != cfg.point["mu2"]
    assert not intertwiner_check(cfg, max_failures=1).passed
    same = ooo_config(Q(4, 9), Q(9, 4), Q(9, 4), slotwise=False)
    assert intertwiner_check(same, window=(0, 3)).passed


def test_ooo_intertwiner_kernel_satisfies_rlll():
    cfg = sample_ooo_config(2)
    assert cfg.point["mu3"] == cfg.point["mu1"]
    assert rlll_sweep(cfg.kernel(), window_plus=(0, 3)).passed


def test_zzz_intertwiner(zcfg):
    assert all(compatibility_residuals(zcfg).values())
    report = intertwiner_check(zcfg, window=(-2, 2))
    assert report.passed, report.failures[:1]


def test_derived_constants(zcfg):
    assert ab_constant_check(zcfg).passed
    A, B = ab_constants(zcfg)
    for (l, m), b in B.items():
        assert A[l, m] == (-zcfg.point.q) ** (l - m) * b


def test_printed_constants_mismatch(zcfg):
    A, B = ab_constants(zcfg)
    Ap, Bp = ab_constants(zcfg, printed=True)
    assert {k for k in A if A[k] != Ap[k]} == PRINTED_MISMATCH["A"]
    assert {k for k in B if B[k] != Bp[k]} == PRINTED_MISMATCH["B"]
    report = ab_constant_check(zcfg, printed=True)
    failed_a = {(int(f["generator"][1]), int(f["generator"][2])) for f in report.failures if f["identity"].endswith("A")}
    assert failed_a == PRINTED_MISMATCH["A"]


def test_ab_indices_bit_reversed():
    v, vp = ab_indices(1, 2)
    assert v == (0, 0, 1, 0, 1, 0)
    _, printed = ab_indices(1, 2, printed=True)
    assert vp[:3] == printed[:3][::-1] and vp[3:] == printed[3:][::-1]


def test_constants_need_zzz_mode():
    with pytest.raises(ValueError):
        ab_constant_check(sample_ooo_config(1))


@pytest.mark.parametrize("which", range(9))
def test_violation_detected(zcfg, which):
    bad = violate(zcfg, which)
    broken = [name for name, ok in compatibility_residuals(bad).items() if not ok]
    assert len(broken) == 1
    assert not intertwiner_check(bad, window=(-2, 2), max_failures=1).passed
