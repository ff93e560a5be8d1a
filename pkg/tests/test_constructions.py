import json

import pytest

from regorb import constructions as cons
from regorb.action import has_regular_orbit_cover, has_regular_orbit_direct, orbits
from regorb.gfp import fpow, frobenius_matrix, make_field, regular_rep
from regorb.group import (
    center, close, derived_subgroup, exponent, fingerprint, is_isomorphic, minimal_subgroups,
)
from regorb.linalg import Matrix, apply, mat_mul
from regorb.verifier import frobenius_fixes_orbits


def test_dihedral_action_examples():
    g3 = cons.dihedral_field_action(3)
    assert g3.order == 8 and is_isomorphic(g3, cons.central_product_d8(1, 5))
    g5 = cons.dihedral_field_action(5)
    assert g5.order == 12 and has_regular_orbit_direct(g5).verdict == "none"
    assert orbits(cons.dihedral_field_action(7)).max_size == 8


@pytest.mark.parametrize("p", [2, 9, 67])
def test_dihedral_action_rejects(p):
    with pytest.raises(ValueError):
        cons.dihedral_field_action(p)


@pytest.mark.parametrize("p", cons.DIHEDRAL_PRIMES)
def test_dihedral_action_is_dihedral(p):
    g = cons.dihedral_field_action(p)
    assert g.order == 2 * p + 2
    if g.order <= 64:
        assert is_isomorphic(g, cons.dihedral_reference(2 * p + 2))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_frobenius_stays_in_orbit(p):
    # matrix-level check: F x lies in the orbit of x under h = regular_rep(gamma^(p-1))
    f = make_field(p, 2)
    h = regular_rep(f, fpow(f, f.gen(), p - 1))
    fr = frobenius_matrix(f)
    powers = [Matrix.identity(p, 2)]
    for _ in range(p):
        powers.append(mat_mul(powers[-1], h))
    for a in range(p):
        for b in range(p):
            if a == b == 0:
                continue
            v = (a, b)
            assert apply(fr, v) in {apply(m, v) for m in powers}
    assert frobenius_fixes_orbits(p)


def test_semilinear_examples():
    g = cons.semilinear_gamma_l(2, 3)
    assert g.order == 21 and has_regular_orbit_cover(g).verdict == "none"
    c7 = cons.semilinear_gamma_l(2, 3, "trivial")
    assert c7.order == 7 and has_regular_orbit_cover(c7).verdict == "has_regular"
    assert cons.semilinear_gamma_l(3, 2).order == 16
    assert cons.semilinear_gamma_l(2, 4, 2).order == 30


def test_sylow2_gl23():
    g = cons.sylow2_of_gl23()
    assert g.order == 16
    assert has_regular_orbit_direct(g).verdict == "none"
    cyclic8 = {frozenset(g.cyclic(i)) for i in range(g.order) if g.element_orders[i] == 8}
    assert len(cyclic8) == 1
    fp = fingerprint(g)
    assert dict(fp.order_counts) == {1: 1, 2: 5, 4: 6, 8: 4}
    assert fp.center_order == 2 and fp.exponent == 8
    # srs = r^3 for some generator pair
    r = next(i for i in range(g.order) if g.element_orders[i] == 8)
    assert any(g.element_orders[s] == 2 and g.mul(g.mul(s, r), s) == g.power(r, 3) for s in range(g.order))


def test_central_products():
    assert cons.central_product_d8(2, 5).order == 32
    d8 = cons.central_product_d8(1, 5)
    assert is_isomorphic(d8, cons.dihedral_reference(8))
    with pytest.raises(ValueError):
        cons.central_product_d8(3, 5)


def test_d8_star_c4_search_matches_golden():
    g = cons.d8_star_c4_search(5)
    assert g.order == 16 and has_regular_orbit_cover(g).verdict == "none"
    assert is_isomorphic(g, cons.d8_star_c4(5))
    z = center(g)
    assert z.order == 4 and exponent(g) == 4 and derived_subgroup(g).order == 2
    pinned = cons.golden()["D8*C4_on_C5^2"]["generators"]
    assert [m.rows for m in g.generators] == pinned


def test_order24_matches_golden():
    from regorb.verifier import find_order24_counterexample
    g = find_order24_counterexample()
    assert [m.rows for m in g.generators] == cons.golden()["Order24_on_C7^2"]["generators"]


def test_constructions_are_deterministic():
    a = [m.to_json() for m in cons.sylow2_of_gl23().generators]
    cons_b = [m.to_json() for m in cons.sylow2_of_gl23().generators]
    assert json.dumps(a) == json.dumps(cons_b)
    assert json.dumps(cons.catalog_json()) == json.dumps(cons.catalog_json())


REFERENCE_M = {
    "D8": 5, "D8*D8": 19, "Heisenberg27": 13, "S3^2": 19, "S4": 13, "A5": 31, "S3xD8": 24,
    "C4": 1, "C5": 1, "C6": 2, "Q8": 1, "C9": 1,
}


def test_reference_catalog():
    entries = {e.label: e for e in cons.reference_groups()}
    for label, m in REFERENCE_M.items():
        e = entries[label]
        assert e.group.order == e.expected_order
        assert len(minimal_subgroups(e.group)) == m
    for e in entries.values():
        threshold = e.group.order / 2 - 1
        assert (len(minimal_subgroups(e.group)) > threshold) == e.positive, e.label
    assert exponent(entries["Heisenberg27"].group) == 3


def test_catalog_lookup():
    assert cons.lookup("SD16_on_C3^2").order == 16
    assert cons.lookup("DihedralField_p=7").order == 16
    with pytest.raises(KeyError):
        cons.lookup("nope")
    labels = [d["label"] for d in cons.catalog_json()]
    assert len(labels) == len(set(labels))


def test_descriptor_roundtrip():
    for d in cons.catalog_descriptors():
        assert cons.ConstructionDescriptor.from_json(d.to_json()) == d
    with pytest.raises(ValueError):
        cons.build(cons.ConstructionDescriptor("bogus"))
