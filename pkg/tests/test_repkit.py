import csv
import io
import json
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superfields.repkit import (
    FAMILIES,
    FormModuleId as Om,
    Weight,
    all_form_modules,
    classify_weight,
    cp_conjugate,
    electric_charges,
    fermion_table,
    form_module_table,
    form_module_weight,
    hypercharge_from_grading,
    irrep_dimension,
)

ids = st.builds(Om, st.sampled_from(FAMILIES), st.integers(0, 5), st.integers(0, 5))
weights = st.builds(
    Weight, st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.fractions(max_denominator=6).map(Q)
)


@pytest.mark.parametrize(
    "w,charges",
    [("(0,1;1;1/3)", ["2/3", "-1/3"]), ("(0,0;0;-2)", ["-1"]), ("(0,0;0;0)", ["0"])],
)
def test_charges_examples(w, charges):
    assert electric_charges(Weight.parse(w)) == [Q(c) for c in charges]


def test_form_weights_examples():
    assert str(form_module_weight(Om("A", 1, 1))) == "(1,0;1;-1/3)"
    assert str(form_module_weight(Om("D", 1, 1))) == "(0,1;1;1/3)"
    assert form_module_weight(Om("A", 0, 0)) == form_module_weight(Om("D", 0, 0)) == Weight(0, 0, 0, 0)


def test_no_go_weights():
    assert classify_weight(Weight.parse("(0,1;0;4/3)")) == []
    assert classify_weight(Weight.parse("(1,0;0;-4/3)")) == []


def test_sterile_neutrino_double_classification():
    assert classify_weight(Weight(0, 0, 0, 0)) == [Om("A", 0, 0), Om("D", 0, 0)]


def test_singlet_lepton_formulas():
    assert form_module_weight(Om("B", 0, 0)).y == 2
    assert form_module_weight(Om("C", 0, 0)).y == -2


def test_cp_examples():
    assert cp_conjugate(Om("A", 1, 1)) == Om("D", 1, 1)
    assert cp_conjugate(Om("B", 0, 0)) == Om("C", 0, 0)


def test_hypercharge_from_grading():
    assert hypercharge_from_grading(1) == Q(1, 3)
    assert hypercharge_from_grading(0) == 0
    assert hypercharge_from_grading(-3) == -1


def test_irrep_dimension():
    assert irrep_dimension(Weight(0, 0, 1, 5)) == 2
    assert irrep_dimension(Weight(1, 0, 0, 0)) == 3
    assert irrep_dimension(Weight(1, 1, 0, 0)) == 8
    assert irrep_dimension(Weight(0, 2, 0, 0)) == 6


def test_weight_validation():
    with pytest.raises(ValueError):
        Weight(-1, 0, 0, 0)
    with pytest.raises(ValueError):
        Weight.parse("(1,2;3)")
    with pytest.raises(ValueError):
        Om("E", 0, 0)


@given(ids)
def test_classify_inverts_formulas(fid):
    assert fid in classify_weight(form_module_weight(fid))


@given(ids)
def test_cp_involution_and_hypercharge(fid):
    assert cp_conjugate(cp_conjugate(fid)) == fid
    assert form_module_weight(cp_conjugate(fid)).y == -form_module_weight(fid).y


@given(weights)
def test_charges_properties(w):
    cs = electric_charges(w)
    assert len(cs) == w.r + 1
    assert all(a - b == 1 for a, b in zip(cs, cs[1:]))
    assert sum(cs) / len(cs) == w.y / 2


@given(weights)
def test_classification_is_sound(w):
    assert all(form_module_weight(f) == w for f in classify_weight(w))


def test_exhaustive_classification_small():
    hits = {}
    for fid in all_form_modules(5):
        hits.setdefault(form_module_weight(fid), []).append(fid)
    for w, fids in hits.items():
        assert classify_weight(w) == sorted(fids, key=lambda f: FAMILIES.index(f.family))
    # only the trivial weight is shared between families
    assert [w for w, f in hits.items() if len(f) > 1] == [Weight(0, 0, 0, 0)]


def test_fermion_table_rows():
    t = fermion_table()
    assert len(t.rows) == 10
    assert t.charges_all_match
    by = {str(r.multiplet): r for r in t.rows}
    lep = by["(0,0;1;-1)"]
    assert lep.charges == (0, -1) and lep.classified == (Om("A", 0, 1),) and not lep.discrepancy
    assert by["(0,1;0;-2/3)"].classified == (Om("D", 1, 0),) and by["(0,1;0;-2/3)"].form_match
    assert by["(0,1;0;4/3)"].form_match and not by["(0,1;0;4/3)"].classified


def test_fermion_table_flags_singlet_swap():
    t = fermion_table()
    flagged = {str(r.multiplet): r for r in t.discrepancies}
    assert set(flagged) == {"(0,0;0;2)", "(0,0;0;-2)"}
    assert flagged["(0,0;0;2)"].classified == (Om("B", 0, 0),)
    assert "printed Omega_C(0,0)" in flagged["(0,0;0;2)"].discrepancy
    assert flagged["(0,0;0;-2)"].classified == (Om("C", 0, 0),)


def test_fermion_table_serialization():
    t = fermion_table()
    data = json.loads(json.dumps(t.to_json()))
    assert data["schema"] == 1 and data["agreements"] == 8 and len(data["discrepancies"]) == 2
    rows = list(csv.DictReader(io.StringIO(t.to_csv())))
    assert len(rows) == 10
    for col in ("multiplet", "charges", "generation1", "generation2", "generation3", "form", "classified_form", "discrepancy"):
        assert col in rows[0]
    assert sum(1 for r in rows if r["discrepancy"]) == 2


def test_form_module_table():
    rows = form_module_table(1)
    assert len(rows) == 16
    a00 = next(r for r in rows if r["form"] == "Omega_A(0,0)")
    assert a00["also"] == "Omega_D(0,0)" and a00["cp_conjugate"] == "Omega_D(0,0)"
