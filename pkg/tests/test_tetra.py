import pytest

from qtetra.exactnum import Q
from qtetra.tetra import (
    FACTOR_SPACES,
    FINITE_TYPES,
    WiringError,
    brute_force_terms,
    enumerated_terms,
    factor_type,
    finite_type_list,
    invert_mu,
    mu_sites,
    rrrr_check_pair,
    rrrr_sweep,
    sample_pairs,
    wire_parameters,
)


def test_type_list():
    types = finite_type_list()
    assert "ZOOOOO" in types
    assert "OZZOOZ" in types
    assert "ZZZZZZ" not in types
    assert types[0] == "OOOOOO"
    assert len(set(types)) == len(types) == 25


def test_factor_types():
    assert factor_type("OOOZOO", "ABD") == "OOZ"
    assert factor_type("OOOZOO", "DEF") == "ZOO"
    assert factor_type("OZZOOZ", "BCF") == "ZZZ"


def test_wiring_ooozoo():
    w = wire_parameters("OOOZOO", 1)
    for n in (1, 2, 3, 5, 6):
        assert f"mu{n}" in w.point
    assert all(f"{p}4" in w.point for p in "rstw")
    assert "mu4" not in w.point
    assert set(w.sectors) == {"ABD", "DEF"}
    for fname, d in w.sectors.items():
        assert w.factors[fname].d == d


def test_wiring_oooooo_has_no_sectors():
    w = wire_parameters("OOOOOO", 1)
    assert w.sectors == {}
    assert all(w.point[f"mu{n}"] != 1 for n in range(1, 7))


def test_wiring_deterministic():
    a, b = wire_parameters("ZOZOZO", 4), wire_parameters("ZOZOZO", 4)
    assert a.point == b.point and a.sectors == b.sectors


def test_wiring_rejects_non_integral_ratio():
    w = wire_parameters("OOOZOO", 2)
    bad = w.point.replace(mu1=w.point["mu1"] * Q(5, 7))
    with pytest.raises(WiringError):
        wire_parameters("OOOZOO", 2, point=bad)
    with pytest.raises(WiringError):
        wire_parameters("OOOXOO", 2)


def test_all_zero_pair():
    w = wire_parameters("OOOOOO", 1)
    lhs, rhs = rrrr_check_pair(w, (0,) * 6, (0,) * 6)
    assert lhs == rhs == 1


def test_random_zooooo_pairs():
    w = wire_parameters("ZOOOOO", 5)
    for out, inp in sample_pairs(w, 5, 10):
        lhs, rhs = rrrr_check_pair(w, out, inp)
        assert lhs == rhs


def test_lattice_violation_rejected():
    w = wire_parameters("OOOOOO", 1)
    with pytest.raises(ValueError):
        rrrr_check_pair(w, (0, 0, 0, 0, 0, -1), (0,) * 6)


@pytest.mark.parametrize("t", ["OOOOOO", "ZOOOOO", "OZOOOO", "OOZOZO", "OZZOOZ", "ZOZOZO"])
def test_enumeration_matches_brute_force(t):
    w = wire_parameters(t, 2)
    pairs = [p for p in sample_pairs(w, 2, 60) if max(abs(x) for x in p[0] + p[1]) <= 3][:2]
    assert pairs
    margin = 2
    for out, inp in pairs:
        box = max(abs(x) for x in out + inp) + margin
        for side in ("lhs", "rhs"):
            found = enumerated_terms(w, side, out, inp)
            inside = {m for m in found if max(abs(x) for x in m) <= box}
            assert inside == brute_force_terms(w, side, out, inp, margin)


@pytest.mark.parametrize("t", FINITE_TYPES)
def test_rrrr_short_sweep(t):
    report = rrrr_sweep(t, 1, 20)
    assert report.passed, report.failures[:1]
    assert report.pairs == 20
    assert report.notes["nonzero_pairs"] >= 10


@pytest.mark.parametrize("t", ["ZOOOOZ", "OOZOZO"])
def test_rrrr_seed7_500(t):
    report = rrrr_sweep(t, 7, 500)
    assert report.passed
    assert report.pairs == 500


def test_sampler_mostly_nonzero():
    report = rrrr_sweep("OZOOOO", 3, 100)
    assert report.notes["nonzero_pairs"] >= 50


@pytest.mark.parametrize("t", ["OOOOOO", "OOOZOO", "OZZOOZ"])
def test_mu_inversion_detected(t):
    w = wire_parameters(t, 3)
    sites = mu_sites(w)
    assert sites
    for space, fname in sites:
        report = rrrr_sweep(t, 3, 60, wiring=invert_mu(w, space, fname), max_failures=1)
        assert not report.passed, (space, fname)


def test_mu_sites_skip_derived_mu():
    w = wire_parameters("OOOZOO", 3)
    # ABD is OOZ on spaces 1, 2, 4; its first mu is fixed by the sector integer
    assert (1, "ABD") not in mu_sites(w)
    assert (2, "ABD") in mu_sites(w)
    with pytest.raises(WiringError):
        invert_mu(w, 1, "ABD")
    with pytest.raises(WiringError):
        invert_mu(w, 4)


def test_factor_spaces_cover_each_space_twice():
    counts = {}
    for spaces in FACTOR_SPACES.values():
        for s in spaces:
            counts[s] = counts.get(s, 0) + 1
    assert counts == {n: 2 for n in range(1, 7)}
