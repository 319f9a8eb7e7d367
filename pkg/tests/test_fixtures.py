"""Bundled fixture files: integrity and agreement with generated complexes."""

import pytest

from cohomotopy.chains import homology, mod2_betti
from cohomotopy.complexes import validate_closed_pseudomanifold
from cohomotopy.factory import (
    antipodal_quotient,
    available_fixtures,
    load_fixture,
)
from cohomotopy.linalg import PresentedGroup
from cohomotopy.pipeline import compute_F1


def group(free, *torsion):
    return PresentedGroup(free, tuple(torsion))


def test_fixtures_are_bundled():
    names = available_fixtures()
    for required in ("cp2_9", "rp4", "rp5"):
        assert required in names


@pytest.mark.parametrize("name,dim,chi", [
    ("cp2_9", 4, 3),
    ("rp4", 4, 1),
    ("rp5", 5, 0),
])
def test_fixture_is_closed_manifold(name, dim, chi):
    K = load_fixture(name)
    assert K.dim == dim
    assert K.euler_characteristic() == chi
    assert validate_closed_pseudomanifold(K).is_valid


def test_cp2_fixture_shape():
    K = load_fixture("cp2_9")
    assert K.n_vertices == 9
    assert len(K.facets) == 36
    got = [homology(K, k).rendered() for k in range(5)]
    assert got == ["Z", "0", "Z", "0", "Z"]


def test_rp5_fixture_homology_mod2():
    K = load_fixture("rp5")
    assert [mod2_betti(K, k) for k in range(6)] == [1, 1, 1, 1, 1, 1]


def test_cp2_report_matches_known_values():
    rep = compute_F1(load_fixture("cp2_9"))
    assert rep.f1.is_trivial()
    assert rep.classification.kind == "I"
    assert rep.orientable
    assert rep.w1_coordinates == ()
    assert rep.w2_coordinates == (1,)
    assert rep.all_checks_pass()


def test_rp4_fixture_agrees_with_generated():
    # triangulation independence: the bundled complex and the quotient
    # construction must produce identical reports where comparable
    fix = compute_F1(load_fixture("rp4"))
    gen = compute_F1(antipodal_quotient(4))
    assert fix.f1.same_type(gen.f1)
    assert fix.classification.kind == gen.classification.kind == "I"
    assert fix.orientable == gen.orientable is False
    assert fix.w1_coordinates == gen.w1_coordinates == (1,)
    assert fix.w2_coordinates == gen.w2_coordinates == (0,)
    assert fix.h1_twisted.same_type(gen.h1_twisted)
    for k in range(5):
        assert fix.homology[k].same_type(gen.homology[k])
        assert fix.twisted_homology[k].same_type(gen.twisted_homology[k])
        assert fix.cohomology[k].same_type(gen.cohomology[k])
    assert fix.all_checks_pass() and gen.all_checks_pass()
