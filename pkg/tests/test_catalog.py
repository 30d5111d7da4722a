import json
from fractions import Fraction

import pytest

from lieham.catalog import (
    ParameterRangeError,
    UnknownEntryError,
    all_instances,
    catalog_version,
    get_entry,
    inclusion_facts,
    list_entries,
    show,
    verify_entry,
)
from lieham.expr import E, is_zero

HAMILTONIAN_IDS = ["P1", "P2", "P3", "P5", "I1", "I4", "I5", "I8", "I12", "I14A", "I14B", "I16"]


def components(X):
    return X.xc, X.yc


def test_p2_row():
    e = get_entry("P2")
    expected = [("1", "0"), ("x", "y"), ("x^2-y^2", "2*x*y")]
    assert [tuple(is_zero(c - E(t)) for c, t in zip(components(X), pair)) for X, pair in zip(e.basis, expected)] \
        == [(True, True)] * 3
    assert [g.text for g in e.domain] == ["y != 0"]
    assert e.label == "sl(2)" and e.primitive


def test_single_translation_row():
    e = get_entry("I1")
    assert e.dim == 1 and is_zero(e.basis[0].xc - E("1"))


def test_affine_row_with_hamiltonian_data():
    e = get_entry("I16", {"alpha": -1, "r": 1})
    assert e.dim == 4
    h = e.hamiltonian
    assert h.extension
    assert all(is_zero(a - E(b)) for a, b in zip(h.functions, ["y", "-x", "x*y", "-(x^2)/2"]))


def test_hamiltonian_filter():
    assert list_entries(hamiltonian_only=True) == HAMILTONIAN_IDS


def test_family_count():
    assert len(list_entries()) == 28


def test_primitive_hamiltonian_rows():
    assert list_entries(hamiltonian_only=True, primitive_only=True) == ["P1", "P2", "P3", "P5"]


def test_dimension_filter():
    ids = list_entries(dimension_range=(1, 1))
    assert "I1" in ids and all(get_entry(i).dim == 1 for i in ids)


def test_alpha_split_families_take_their_hamiltonian_parameter():
    params = dict(list_entries(hamiltonian_only=True, with_params=True))
    assert params["P1"] == {"alpha": Fraction(0)}
    assert params["I8"] == {"alpha": Fraction(-1)}


def test_unknown_row():
    with pytest.raises(UnknownEntryError):
        get_entry("Q9")


def test_parameter_out_of_range():
    with pytest.raises(ParameterRangeError):
        get_entry("I12", {"r": 0})


def test_constant_slot_selects_the_second_i14_chart():
    assert get_entry("I14", {"r": 1}, slots={"eta": ["1"]}).id == "I14B"
    assert get_entry("I14", {"r": 1}, slots={"eta": ["x"]}).id == "I14A"


def test_two_photon_row_verifies():
    r = verify_entry(get_entry("P5"))
    assert r.passed
    assert r.details["fingerprint"]["name"] == "sl(2)⋉R^2"
    assert r.details["bracket_table"]["name"] == "h6"
    assert r.details["bracket_table"]["central_extension"]


def test_obstructed_row_verifies_with_witness():
    r = verify_entry(get_entry("I9"))
    assert r.passed and r.details["no_go"]["kind"] != "inconclusive"


def test_translation_row_verifies():
    assert verify_entry(get_entry("I1")).passed


@pytest.mark.parametrize("entry_id", all_instances())
def test_every_shipped_instance_verifies(entry_id):
    r = verify_entry(get_entry(entry_id))
    assert r.passed, {k: v for k, v in r.checks.items() if not v}


def test_show_lists_form_and_functions():
    text = show(get_entry("P2"))
    assert "y != 0" in text and "1/y^2" in text


def test_entry_json_is_serializable():
    data = json.loads(json.dumps(get_entry("P3").to_json()))
    assert data["id"] == "P3" and data["hamiltonian"]["extension"]
    assert data["anchor"].startswith("catalog ")


def test_inclusion_facts_carry_disclaimer():
    facts = inclusion_facts()
    assert facts["facts"] and facts["disclaimer"]


def test_catalog_version_is_an_integer():
    assert isinstance(catalog_version(), int)
