import pytest

from qtetra.faults import CATALOGUE, KINDS, Mutation, check_fault, count_sites, mutate_formula
from qtetra.kernels import FORMULAS, KERNEL_TYPES, RKernel, kernel_point

SMALL = dict(window_plus=(0, 3), window_f=(-2, 2))


def test_catalogue_covers_types_and_kinds():
    assert len(CATALOGUE) >= 10
    assert {m.kind for m in CATALOGUE} == set(KINDS)
    assert {m.tag for m in CATALOGUE} == set(KERNEL_TYPES)


def test_labels():
    assert Mutation("ZZZ", "sign", 0).label() == "ZZZ:sign#0"
    assert Mutation("OOO", "swap", 1, "mu2").label() == "OOO:swap#1->mu2"


def test_zzz_sites():
    assert count_sites("ZZZ", "sign") == 1
    assert count_sites("ZZZ", "constant") == 0
    assert count_sites("ZZZ", "swap") > 0


def test_bad_mutations_rejected():
    with pytest.raises(ValueError):
        mutate_formula(Mutation("ZZZ", "typo", 0))
    with pytest.raises(IndexError):
        mutate_formula(Mutation("ZZZ", "constant", 0))


def test_mutant_differs_from_original():
    fn, token = mutate_formula(Mutation("OOO", "sign", 0))
    assert token
    assert fn is not FORMULAS["OOO"]
    p = kernel_point("OOO", 11)
    good, bad = RKernel("OOO", p), RKernel("OOO", p, formula=fn)
    box = [(a, b, c, i, j, k) for a in range(3) for b in range(3) for c in range(3)
           for i in range(3) for j in range(3) for k in range(3) if a + b == i + j and b + c == j + k]
    assert any(good(*sx) != bad(*sx) for sx in box)


@pytest.mark.parametrize("mutation", CATALOGUE, ids=lambda m: m.label())
def test_catalogue_mutant_caught(mutation):
    report = check_fault(mutation, **SMALL)
    assert not report.passed
    assert report.notes["mutation"] == mutation.label()
