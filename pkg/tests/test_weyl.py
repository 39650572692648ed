import random

import pytest

from qtetra.exactnum import Q
from qtetra.weyl import (
    OscillatorImageError,
    RepTag,
    WeylElement,
    apply_rep,
    check_algebra_relations,
    embed_oscillator,
    generators,
    matrix_element,
    weyl_mul,
)

q = Q(3, 5)
Z, X = generators(q)


def mono(alpha, beta, c=1):
    return WeylElement.monomial(q, alpha, beta, Q(c))


def random_element(rng):
    terms = {(rng.randint(-2, 2), rng.randint(-2, 2)): Q(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)}
    return WeylElement(q, terms)


def test_mul_examples():
    assert weyl_mul(X, Z) == mono(1, 1, q)
    assert weyl_mul(X * X, Z) == mono(1, 2, q * q)
    assert weyl_mul(mono(-1, 0), Z) == WeylElement.scalar(q, 1)


def test_mul_associative():
    rng = random.Random(5)
    for _ in range(100):
        a, b, c = (random_element(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_normal_form_prunes_zero():
    assert not (X - X)
    assert (X + 0).terms == {(0, 1): 1}


def test_rep_examples():
    m = 4
    assert apply_rep(RepTag.ZP, X, {m: Q(1)}) == {m - 1: 1}
    assert apply_rep(RepTag.X, Z, {m: Q(1)}) == {m + 1: 1}
    am = embed_oscillator(q, "a-")
    assert apply_rep(RepTag.O, am, {0: Q(1)}) == {}


def test_zplus_and_x_actions():
    for m in range(-3, 4):
        assert apply_rep(RepTag.ZP, Z, {m: Q(1)}) == {m: q**m}
        assert apply_rep(RepTag.X, X, {m: Q(1)}) == {m: q**m}


def test_zminus_variant():
    for m in range(-4, 5):
        assert apply_rep(RepTag.ZM, X, {m: Q(1)}) == {m + 1: 1}
        assert apply_rep(RepTag.ZM, Z, {m: Q(1)}) == {m: q ** (-m)}


def test_embedding_examples():
    assert embed_oscillator(q, "k") == X
    am = embed_oscillator(q, "a-")
    assert am == mono(-1, 0) - mono(-1, 2)
    ap = embed_oscillator(q, "a+")
    assert weyl_mul(am, ap) == WeylElement.scalar(q, 1) - mono(0, 2, q * q)


def test_embedding_reproduces_oscillator_rep():
    k, ap, am = (embed_oscillator(q, g) for g in ("k", "a+", "a-"))
    for m in range(0, 9):
        assert apply_rep(RepTag.O, k, {m: Q(1)}) == {m: q**m}
        assert apply_rep(RepTag.O, ap, {m: Q(1)}) == {m + 1: 1}
        expect = {} if m == 0 else {m - 1: 1 - q ** (2 * m)}
        assert apply_rep(RepTag.O, am, {m: Q(1)}) == expect


def test_o_tag_rejects_negative_support():
    with pytest.raises(OscillatorImageError):
        apply_rep(RepTag.O, X, {-1: Q(1)})
    with pytest.raises(OscillatorImageError):
        apply_rep(RepTag.O, mono(-1, 0), {0: Q(1)})


def test_rep_linear():
    rng = random.Random(2)
    for tag in (RepTag.ZP, RepTag.ZM, RepTag.X):
        for _ in range(20):
            e = random_element(rng)
            m1, m2 = rng.sample(range(-3, 4), 2)
            c1, c2 = Q(rng.randint(1, 9), 7), Q(-rng.randint(1, 9), 5)
            both = apply_rep(tag, e, {m1: c1, m2: c2})
            one = apply_rep(tag, e, {m1: Q(1)})
            two = apply_rep(tag, e, {m2: Q(1)})
            summed = {}
            for vec, c in ((one, c1), (two, c2)):
                for n, v in vec.items():
                    summed[n] = summed.get(n, 0) + c * v
            assert both == {n: v for n, v in summed.items() if v != 0}


def test_matrix_element():
    assert matrix_element(RepTag.ZP, X, 2, 3) == 1
    assert matrix_element(RepTag.ZP, X, 3, 3) == 0


@pytest.mark.parametrize("tag", [RepTag.ZP, RepTag.ZM, RepTag.X])
def test_weyl_relation_holds(tag):
    assert check_algebra_relations(tag, q, range(-4, 5)).passed


def test_oscillator_relations_hold():
    report = check_algebra_relations(RepTag.O, q, range(0, 7))
    assert report.passed
    assert report.relations == 4


def test_broken_rep_is_reported():
    def broken(tag, e, m):
        out = {}
        for (alpha, beta), c in e:
            # X raises instead of lowering
            out[m + beta] = out.get(m + beta, 0) + c * q ** (alpha * (m + beta))
        return out

    assert not check_algebra_relations(RepTag.ZP, q, range(-4, 5), action=broken).passed
