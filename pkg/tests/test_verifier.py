import pytest

from regorb import constructions as cons
from regorb.action import has_regular_orbit_cover
from regorb.ambient import GeneralLinear, enumerate_by_extension, enumerate_by_joins
from regorb.group import is_isomorphic
from regorb import verifier as V

from oracles import subgroup_lattice


def as_sets(u):
    gl = u.ambient
    return {frozenset(tuple(int(x) for x in gl.mats[i].ravel()) for i in ids) for ids in u.groups}


@pytest.fixture(scope="module")
def lattice_gl23():
    return subgroup_lattice(3, 2)


def test_oracle_lattice_sanity(lattice_gl23):
    assert len(lattice_gl23) == 55  # GL(2,3) has 55 subgroups
    assert max(len(s) for s in lattice_gl23) == 48


@pytest.mark.parametrize("method", ["extension", "joins"])
def test_enumeration_matches_lattice(lattice_gl23, method):
    gl = GeneralLinear(2, 3)
    u = enumerate_by_extension(gl, 15) if method == "extension" else enumerate_by_joins(gl, 15)
    expected = {s for s in lattice_gl23 if len(s) <= 15 and len(s) % 3}
    assert as_sets(u) == expected
    assert sorted({len(s) for s in expected}) == [1, 2, 4, 8]


def test_joins_agree_with_extension_gl32():
    gl = GeneralLinear(3, 2)
    a, b = enumerate_by_extension(gl, 21), enumerate_by_joins(gl, 21)
    assert [x.tolist() for x in a.groups] == [x.tolist() for x in b.groups]


def test_every_emitted_group_is_closed():
    u = V.universe_for(2, 5, 19)
    gl = u.ambient
    for ids in u.groups:
        mem = set(ids.tolist())
        prod = gl.mul(ids[:, None], ids[None, :])
        assert set(prod.ravel().tolist()) <= mem


def test_enumeration_examples():
    assert set(V.enumerate_coprime_subgroups(3, 2, 13).counts_by_order()) == {1, 3, 7}
    u = V.enumerate_coprime_subgroups(2, 5)
    assert 16 in u.counts_by_order()
    d8c4 = cons.d8_star_c4(5)
    hits = [V.as_group(u, i) for i, ids in enumerate(u.groups) if len(ids) == 16]
    assert any(is_isomorphic(g, d8c4) for g in hits)


def test_enumeration_rejects():
    with pytest.raises(ValueError):
        V.enumerate_coprime_subgroups(2, 17)
    with pytest.raises(ValueError):
        V.enumerate_coprime_subgroups(2, 5, 20)


def test_census_agrees_with_group_level_checks():
    u = V.universe_for(2, 3, 15)
    records, checks = V.census(u)
    assert checks["cross_checks"] == len(u)
    for r in records:
        cert = has_regular_orbit_cover(V.as_group(u, r.index))
        assert cert.has_regular == r.has_regular
        if r.has_regular:
            assert cert.witness == r.witness


def test_main_theorem_gl23():
    rep = V.verify_main_theorem(2, 3)
    assert rep.theorem_holds
    assert rep.exception_summary() == {"D_8": 3}


def test_main_theorem_gl25():
    rep = V.verify_main_theorem(2, 5)
    assert rep.theorem_holds
    assert set(rep.exception_summary()) == {"D_12", "D8*C4"}


def test_main_theorem_gl32():
    rep = V.verify_main_theorem(3, 2)
    assert rep.theorem_holds and rep.exceptions == []


def test_report_json_has_schema_fields():
    d = V.verify_main_theorem(2, 3).to_json()
    for key in ("n", "p", "bound", "group_count", "exceptions", "theorem_holds"):
        assert key in d
    assert "elapsed_ms" not in d
    assert "elapsed_ms" in V.verify_main_theorem(2, 3, timing=True).to_json()
    for e in d["exceptions"]:
        assert {"order", "shape", "generators"} <= set(e)


@pytest.mark.parametrize("p,max_orbit", [(3, 4), (13, 14), (31, 32)])
def test_converse(p, max_orbit):
    rep = V.verify_converse(p)
    assert rep["ok"] and rep["verdict"] == "none" and rep["max_orbit"] == max_orbit


def test_converse_rejects():
    with pytest.raises(ValueError):
        V.verify_converse(2)
    with pytest.raises(ValueError):
        V.verify_converse(67)


def test_classification_threshold():
    rep = V.verify_classification_threshold()
    assert rep["ok"]
    rows = {r["label"]: r for r in rep["entries"]}
    assert rows["S4"]["m"] == 13 and rows["S4"]["shape"]["tag"].startswith("S3sq_S4_A5")
    assert rows["A5"]["m"] == 31 and rows["A5"]["above_threshold"]
    assert rows["C6"]["m"] == 2 and not rows["C6"]["above_threshold"]


def test_order24():
    rep = V.order24_report()
    assert rep["order"] == 24 and rep["verdict"] == "none"
    assert not rep["isomorphic_to_S4"]
    assert rep["outside_theorem_bound"] and 24 > V.theorem_bound(7)
    assert len(rep["isomorphism_classes"]) >= 1
