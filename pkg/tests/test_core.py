import pytest

from qtetra import _core, _purecore
from qtetra.exactnum import Q
from qtetra.kernels import RKernel, kernel_point

speedups = pytest.importorskip("qtetra._speedups")

z, b = Q(2, 3), Q(-5, 7)


def test_selected_core():
    assert _core.COMPILED
    assert _core.qpoch is speedups.qpoch


@pytest.mark.parametrize("m", range(-6, 7))
def test_qpoch_agrees(m):
    assert speedups.qpoch(z, b, m) == _purecore.qpoch(z, b, m)
    assert speedups.qpoch_inv(z, b, m) == _purecore.qpoch_inv(z, b, m)


def test_qpoch_zero_denominator():
    for mod in (speedups, _purecore):
        with pytest.raises(ZeroDivisionError):
            mod.qpoch(b, b, -1)
        assert mod.qpoch_inv(b, b, -1) == 0


def test_fiber_sum_agrees():
    table = {(0, 1, 2): Q(3), (0, 1, 3): Q(0), (0, 2, 2): Q(-1, 4)}
    terms = [((1, 2), Q(2)), ((1, 3), Q(5)), ((2, 2), Q(8))]
    for mod in (speedups, _purecore):
        assert mod.fiber_sum(terms, table, (0,)) == 4
        with pytest.raises(KeyError):
            mod.fiber_sum([((9, 9), Q(1))], table, (0,))
    assert speedups.dot([Q(1), Q(2)], [Q(3), 0]) == _purecore.dot([Q(1), Q(2)], [Q(3), 0]) == 3


def test_pair_sweep_agrees():
    K = RKernel("OOO", kernel_point("OOO", 3))
    fwd = [((1, 0, 1), [((1, 0, 1), Q(1)), ((0, 1, 0), Q(2))])]
    trn = [((1, 0, 1), [((1, 0, 1), Q(1))]), ((0, 1, 0), [((0, 1, 0), Q(3))])]
    a = speedups.pair_sweep(fwd, trn, {}, K)
    b2 = _purecore.pair_sweep(fwd, trn, {}, K)
    assert a == b2
    assert a[0] == 2
