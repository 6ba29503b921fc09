import json

import pytest

from cellperv import fixtures
from cellperv.builders import deligne_ic, random_constructible
from cellperv.linalg import CochainComplex
from cellperv.perversity import (CONDITIONS, NotConstructibleError, PerversityReport, check_C1,
                                 check_C2, check_S1, check_S2, check_S2_stalkwise,
                                 check_new_cosupport, check_new_support, cosupp_set,
                                 perversity_report, point_costalk, reverify_witness, supp_set,
                                 verify_lemma_equivalence, verify_proposition,
                                 verify_remark_containment)
from cellperv.sheaf import constant_sheaf, direct_sum, skyscraper, zero_sheaf

GEOMETRIC = list(fixtures.GEOMETRIC)
OPEN_CONE = {"v1", "v2", "e1", "e2", "a1", "a2", "t1", "t2"}


def cone():
    return fixtures.cone()


def sky(p=None, degree=0):
    p = p or cone()
    return skyscraper(p, p.lower(0), CochainComplex.concentrated(degree))


def verdicts(a):
    return perversity_report(a, sets=False).verdicts


# -- support and cosupport sets --------------------------------------------------------


def test_zero_sheaf_sets_empty():
    a = zero_sheaf(cone())
    assert all(not supp_set(k, a) and not cosupp_set(k, a) for k in range(-4, 5))


def test_constant_shift_one_sets():
    p = cone()
    a = constant_sheaf(p, 1)
    assert supp_set(-1, a) == frozenset(p.cells)
    assert all(not supp_set(k, a) for k in range(-5, 5) if k != -1)
    # point costalks by hand: Q in degree 1 at interior points, zero on the rim
    for x in p.cells:
        want = {} if x in {"v1", "v2", "e1", "e2"} else {1: 1}
        assert point_costalk(x, a).dims == want
    assert cosupp_set(1, a) == frozenset(p.cells)
    assert all(not cosupp_set(k, a) for k in range(-5, 5) if k != 1)


# -- the six checks on hand examples ----------------------------------------------------


def test_skyscraper_passes_everything():
    assert all(verdicts(sky()).values())


def test_constant_shift_one_passes_everything():
    assert all(verdicts(constant_sheaf(cone(), 1)).values())


def test_constant_unshifted_fails_support():
    a = constant_sheaf(cone())
    v = verdicts(a)
    assert not v["S1"] and not v["S2"] and not v["newS"]
    assert v["C1"] and v["C2"] and v["newC"]
    s2 = check_S2(a).witnesses
    assert {w.cell for w in s2} == OPEN_CONE and {(w.stratum, w.degree) for w in s2} == {("S1", 0)}
    ns = check_new_support(a).witnesses
    assert {(w.m, w.degree) for w in ns} == {(1, 0)}
    s1 = check_S1(a).witnesses
    assert s1 and all(w.degree == 0 and w.set_dim == 1 for w in s1)


def test_zero_sheaf_passes():
    assert all(verdicts(zero_sheaf(cone())).values())


def test_ic_passes_everything():
    for name in GEOMETRIC:
        p = fixtures.get(name)
        a = deligne_ic(p.merge_strata_by_dimension()).on_base(p)
        assert all(verdicts(a).values()), name


def test_new_cosupport_at_cone_point():
    a = constant_sheaf(cone(), 1)
    assert check_new_cosupport(a).passed


def test_shift_two_fails_cosupport():
    a = constant_sheaf(cone(), 2)
    v = verdicts(a)
    assert v["S2"] and not v["C2"] and not v["newC"] and not v["C1"]


def test_not_constructible_refused():
    p = fixtures.circle()
    a = skyscraper(p, ["v1"], CochainComplex.concentrated(0))
    with pytest.raises(NotConstructibleError):
        check_S2(a)


# -- witnesses ------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["cone", "suspension", "nodal"])
def test_witnesses_reverify(name):
    p = fixtures.get(name)
    for seed in range(15):
        a = random_constructible(p, seed)
        for w in perversity_report(a, sets=False).witnesses:
            assert reverify_witness(w, a), w


def test_stalkwise_s2_agrees():
    for name in GEOMETRIC + ["circle"]:
        p = fixtures.get(name)
        for seed in range(8):
            a = random_constructible(p, seed)
            assert check_S2(a).witnesses == check_S2_stalkwise(a).witnesses


@pytest.mark.parametrize("name", GEOMETRIC)
def test_pointwise_matches_stratumwise_on_geometric(name):
    p = fixtures.get(name)
    for seed in range(15):
        a = random_constructible(p, seed)
        assert check_S1(a).passed == check_S2(a).passed
        assert check_C1(a).passed == check_C2(a).passed


def test_report_json_round_trip():
    a = random_constructible(cone(), 2)
    rep = perversity_report(a)
    text = json.dumps(rep.to_json(), sort_keys=True)
    back = PerversityReport.from_json(json.loads(text))
    assert json.dumps(back.to_json(), sort_keys=True) == text
    assert back.verdicts == rep.verdicts


# -- characterization agreement ---------------------------------------------------------


def test_lemma_fixture_sheaves():
    p = cone()
    for a in (sky(), constant_sheaf(p), constant_sheaf(p, 1), constant_sheaf(p, 2),
              deligne_ic(p), zero_sheaf(p)):
        assert verify_lemma_equivalence(a).agrees


def test_lemma_zero_all_pass():
    rep = verify_lemma_equivalence(zero_sheaf(cone()))
    assert all(r.passed for r in rep.support.values())
    assert all(r.passed for r in rep.cosupport.values())


def test_lemma_random_cone():
    p = cone()
    seen = set()
    for seed in range(100):
        rep = verify_lemma_equivalence(random_constructible(p, seed))
        assert rep.agrees, seed
        seen.add(rep.support["S2"].passed)
        seen.add(rep.cosupport["C2"].passed)
    assert seen == {True, False}


def test_lemma_merges_point_strata():
    p = fixtures.suspension()
    a = direct_sum(sky(p), constant_sheaf(p, 1))
    rep = verify_lemma_equivalence(a)
    assert rep.agrees and rep.support["S2"].passed


# -- proposition ---------------------------------------------------------------------------


def test_proposition_constant_shift_one():
    rep = verify_proposition(constant_sheaf(cone(), 1), 0)
    assert rep.status == "verified"
    rows = {r.degree: r for r in rep.rows}
    assert rows[-1].requirement == "injective" and rows[-1].rank == 1 == rows[-1].dim_total
    assert all(r.dim_total == r.dim_open == 0 for k, r in rows.items() if k <= -2)


def test_proposition_ic():
    for m in (0, 1):
        assert verify_proposition(deligne_ic(cone()), m).status == "verified"


def test_proposition_gate():
    rep = verify_proposition(sky(degree=-2), 0)
    assert rep.status == "hypothesis_not_satisfied" and rep.hypothesis_witnesses
    with pytest.raises(ValueError):
        verify_proposition(sky(), -1)


@pytest.mark.parametrize("name", GEOMETRIC)
def test_proposition_random(name):
    p = fixtures.get(name)
    for seed in range(10 if name != "bidisk" else 3):
        a = random_constructible(p, seed)
        for m in range(p.max_pdim + 1):
            rep = verify_proposition(a, m)
            assert rep.status != "failed", (seed, m)


# -- remark containment ------------------------------------------------------------------------


def test_remark_constant_shift_one():
    rep = verify_remark_containment(constant_sheaf(cone(), 1))
    assert rep.status == "checked" and rep.contained and rep.c2_passed


def test_remark_skyscraper_low_degree():
    rep = verify_remark_containment(sky(degree=-2))
    assert rep.contained is False and rep.c2_passed is False
    assert (-2, "c") in rep.violations


def test_remark_zero_and_non_geometric():
    assert verify_remark_containment(zero_sheaf(cone())).agrees
    assert verify_remark_containment(constant_sheaf(fixtures.circle())).status == "skipped"


@pytest.mark.parametrize("name", GEOMETRIC)
def test_remark_random(name):
    p = fixtures.get(name)
    for seed in range(10 if name != "bidisk" else 3):
        assert verify_remark_containment(random_constructible(p, seed)).agrees


def test_all_condition_names():
    assert set(CONDITIONS) == {"S1", "C1", "S2", "C2", "newS", "newC"}
    assert check_C1(zero_sheaf(cone())).passed and check_C2(zero_sheaf(cone())).passed
