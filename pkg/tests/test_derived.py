import pytest

from cellperv import fixtures
from cellperv.builders import random_constructible
from cellperv.derived import (coaugmentation, costalk_cohomology, excision_les_check,
                              hypercohomology, local_cohomology, restriction_map, sections_complex,
                              shriek_restriction_table, stalk_cohomology, supported_sections,
                              vanishing_propagation_check)
from cellperv.linalg import CochainComplex, cohomology
from cellperv.sheaf import constant_sheaf, skyscraper, zero_sheaf

from oracle import downsets, relative_betti

ALL = sorted(fixtures.FIXTURES)


def sky():
    return skyscraper(fixtures.cone(), ["c"], CochainComplex.concentrated(0))


# -- sections -------------------------------------------------------------------------


@pytest.mark.parametrize("name", ALL)
def test_contractible_stars(name):
    p = fixtures.get(name)
    for a in (constant_sheaf(p, 1), random_constructible(p, 3, size=2)):
        for x in p.cells:
            assert hypercohomology(p.star(x), a) == stalk_cohomology(x, a)
            # and the coaugmentation realizes the quasi-isomorphism
            f = coaugmentation(x, p.star(x), a)
            h = stalk_cohomology(x, a)
            assert all(f.induced_rank(k) == h[k] for k in h.dims)


def test_circle_hypercohomology():
    p = fixtures.circle()
    assert hypercohomology(p.cells, constant_sheaf(p)).dims == {0: 1, 1: 1}


def test_empty_sections():
    p = fixtures.cone()
    assert sections_complex([], constant_sheaf(p)).is_zero()


@pytest.mark.parametrize("name", ALL)
def test_constant_sheaf_matches_order_complex(name):
    p = fixtures.get(name)
    a = constant_sheaf(p)
    opens = {frozenset(p.cells)} | {frozenset(p.cells) - z for z in downsets(p, 4 if name == "bidisk" else 12)}
    for v in opens:
        assert hypercohomology(v, a).dims == relative_betti(p, v)


def test_known_spaces():
    s = fixtures.suspension()
    assert hypercohomology(s.cells, constant_sheaf(s)).dims == {0: 1, 2: 1}
    c = fixtures.cone()
    assert hypercohomology(c.upper(1), constant_sheaf(c)).dims == {0: 1, 1: 1}
    assert hypercohomology(c.star("c") - {"c"}, constant_sheaf(c)).dims == {0: 1, 1: 1}


def test_sections_are_complexes_everywhere():
    p = fixtures.suspension()
    a = random_constructible(p, 5)
    for z in downsets(p, 20):
        sections_complex(frozenset(p.cells) - z, a).check()


def test_open_set_required():
    with pytest.raises(ValueError):
        hypercohomology(["c"], constant_sheaf(fixtures.cone()))


# -- stalks, costalks, local cohomology ----------------------------------------------------


def test_stalks():
    p = fixtures.cone()
    assert stalk_cohomology("t1", constant_sheaf(p, 1)).dims == {-1: 1}
    assert stalk_cohomology("c", zero_sheaf(p)).is_zero()


def test_local_cohomology_full_support_is_stalk():
    p = fixtures.cone()
    a = random_constructible(p, 8)
    for x in p.cells:
        assert local_cohomology(x, p.cells, a) == stalk_cohomology(x, a)


def test_cone_point_local_cohomology():
    p = fixtures.cone()
    assert local_cohomology("c", ["c"], constant_sheaf(p)).dims == {2: 1}
    assert local_cohomology("c", ["c"], constant_sheaf(p, 1)).dims == {1: 1}


def test_costalks():
    p = fixtures.cone()
    a = constant_sheaf(p)
    assert costalk_cohomology("c", a).dims == {2: 1}
    assert costalk_cohomology("t1", a) == stalk_cohomology("t1", a)
    assert costalk_cohomology("v1", a).is_zero()
    circ = fixtures.circle()
    assert costalk_cohomology("v1", constant_sheaf(circ)).dims == {1: 1}


@pytest.mark.parametrize("name", ALL)
def test_constant_costalks_match_relative_cohomology(name):
    p = fixtures.get(name)
    a = constant_sheaf(p)
    for x in p.cells:
        ux = p.star(x)
        assert costalk_cohomology(x, a).dims == relative_betti(p, ux, ux - {x})


@pytest.mark.parametrize("name", ["cone", "suspension", "nodal"])
def test_stalk_and_nerve_models_agree(name):
    p = fixtures.get(name)
    a = random_constructible(p, 21)
    for x in p.cells:
        for z in (p.closure([x]), p.lower(0), frozenset(p.cells)):
            if x not in z:
                continue
            h1 = cohomology(supported_sections(x, z, a, model="stalk"))
            h2 = cohomology(supported_sections(x, z, a, model="nerve"))
            assert h1 == h2


def test_shriek_restriction():
    assert shriek_restriction_table("S0", constant_sheaf(fixtures.point()))["p"].dims == {0: 1}
    p = fixtures.cone()
    a = constant_sheaf(p, 1)
    t = shriek_restriction_table("S1", a)
    assert set(t) == set(p.upper(1)) and all(h.dims == {-1: 1} for h in t.values())
    assert shriek_restriction_table("S0", a)["c"].dims == {1: 1}


# -- restriction maps ---------------------------------------------------------------------


def test_restriction_identity():
    p = fixtures.cone()
    a = constant_sheaf(p, 1)
    f = restriction_map(p.cells, p.cells, a)
    h = hypercohomology(p.cells, a)
    assert all(f.induced_rank(k) == h[k] for k in h.dims)


def test_restriction_to_punctured_cone():
    p = fixtures.cone()
    a = constant_sheaf(p, 1)
    f = restriction_map(p.upper(1), p.cells, a)
    assert hypercohomology(p.cells, a).dims == {-1: 1}
    assert f.induced_rank(-1) == 1


def test_restriction_to_empty():
    p = fixtures.cone()
    a = constant_sheaf(p, 1)
    f = restriction_map([], p.cells, a)
    assert all(f.induced_rank(k) == 0 for k in range(-3, 3))


def test_restrictions_compose():
    p = fixtures.cone()
    a = random_constructible(p, 4)
    w, v, u = frozenset(p.cells), p.upper(1), p.star("a1")
    big = restriction_map(u, v, a) @ restriction_map(v, w, a)
    assert big == restriction_map(u, w, a)


def test_restriction_needs_subset():
    p = fixtures.cone()
    with pytest.raises(ValueError):
        restriction_map(p.cells, p.upper(1), constant_sheaf(p))


# -- excision ----------------------------------------------------------------------------


def test_excision_cone_example():
    p = fixtures.cone()
    r = excision_les_check(p.lower(0), p.cells, constant_sheaf(p), "c")
    assert r.exact
    assert r.tables["closed"].dims == {0: 1}
    assert r.tables["closed_small"].dims == {2: 1}
    assert r.tables["difference"].dims == {0: 1, 1: 1}


def test_excision_degenerate_pairs():
    p = fixtures.cone()
    a = constant_sheaf(p, 1)
    z = p.lower(0)
    r = excision_les_check(z, z, a, "c")
    assert r.exact and r.tables["difference"].is_zero()
    r = excision_les_check([], p.cells, a, "c")
    assert r.exact and r.tables["closed"] == r.tables["difference"]


def excision_triples(p, whole=False):
    keys = {}
    ds = downsets(p)
    for zs in ds:
        for z in ds:
            if not zs <= z:
                continue
            for x in ([None] if whole else []) + list(p.cells):
                v = frozenset(p.cells) if x is None else p.star(x)
                keys.setdefault((v, zs & v, z & v), (zs, z, x))
    return list(keys.values())


def test_excision_all_triples_fixture_sheaves():
    p = fixtures.cone()
    triples = excision_triples(p, whole=True)
    for a in (constant_sheaf(p), constant_sheaf(p, 1), sky()):
        for zs, z, x in triples:
            assert excision_les_check(zs, z, a, x).exact, (zs, z, x)


@pytest.mark.parametrize("seed", range(5))
def test_excision_random(seed):
    p = fixtures.cone()
    a = random_constructible(p, 1000 + seed)
    for zs, z, x in excision_triples(p):
        assert excision_les_check(zs, z, a, x).exact


def test_excision_needs_nested_closed_sets():
    p = fixtures.cone()
    with pytest.raises(ValueError):
        excision_les_check(p.cells, p.lower(0), constant_sheaf(p))


# -- vanishing propagation ------------------------------------------------------------------


def test_vanishing_vacuous_and_confirmed():
    p = fixtures.cone()
    assert vanishing_propagation_check(p.cells, constant_sheaf(p), 0).passed
    r = vanishing_propagation_check(p.cells, constant_sheaf(p, 1), -1)
    assert r.passed and r.hypothesis_holds
    r = vanishing_propagation_check(p.cells, constant_sheaf(p, 1), 0)
    assert r.passed and not r.hypothesis_holds
    assert vanishing_propagation_check(p.cells, sky(), 0).passed


@pytest.mark.parametrize("name", ["cone", "suspension", "nodal"])
def test_vanishing_on_random(name):
    p = fixtures.get(name)
    for seed in range(10):
        a = random_constructible(p, seed)
        lo, hi = a.degree_range() or (0, 0)
        for m in range(p.max_pdim + 1):
            v = p.upper(m)
            for k in range(lo - 1, hi + 3):
                assert vanishing_propagation_check(v, a, k).passed
