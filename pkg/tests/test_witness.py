from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normevs.errors import BadParams, UnknownFamily
from normevs.norms import INF, SparseVec
from normevs.witness import FAMILIES, family_for, family_scan, nonequivalence_witness


def test_staircase_family():
    fam = nonequivalence_witness("c00_sup_vs_one")
    assert fam.generator(4) == SparseVec(((1, 1.0), (2, 2.0), (3, 3.0), (4, 4.0)))
    assert fam.evaluated_ratio(4) == pytest.approx(2 / 5, rel=1e-15)
    assert fam.ratio_formula(5) == pytest.approx(1 / 3)
    assert nonequivalence_witness("hamel_sup_vs_one").evaluated_ratio(4) == fam.evaluated_ratio(4)


def test_pq_family():
    fam = nonequivalence_witness("p_vs_q", 2, 1)
    assert fam.evaluated_ratio(9) == pytest.approx(1 / 3, rel=1e-15)
    assert fam.generator(3) == SparseVec(((1, 3.0), (2, 3.0), (3, 3.0)))
    assert fam.formula == "n^(1/2 - 1/1)"


def test_bad_requests():
    with pytest.raises(BadParams):
        nonequivalence_witness("p_vs_q", 1, 2)
    with pytest.raises(BadParams):
        nonequivalence_witness("p_vs_q", 2, 0.5)
    with pytest.raises(BadParams):
        nonequivalence_witness("p_vs_q", 3)
    with pytest.raises(UnknownFamily):
        nonequivalence_witness("fibonacci")


@pytest.mark.parametrize("family", FAMILIES)
def test_validation_over_64_terms(family):
    fam = nonequivalence_witness(family, 3, 1.5)
    check = fam.validate(64, rtol=1e-12)
    assert check.ok and check.monotone and check.max_rel_error <= 1e-12


def test_family_for_pairs():
    assert family_for(INF, 1.0).family_id == "c00_sup_vs_one"
    fam = family_for(INF, 2.0)
    assert fam.family_id == "p_vs_q" and fam.exponent == -0.5


def test_scan_examples():
    scan = family_scan([1, 1.5, 2, 3, INF], 50)
    assert len(scan.pairs) == 10 and scan.all_certified
    assert scan.matrix()[0][4] == "nonequivalent_certified" and scan.matrix()[2][2] is None
    single = family_scan([2])
    assert single.pairs == [] and single.all_certified
    with pytest.raises(BadParams):
        family_scan([2, 2])
    with pytest.raises(BadParams):
        family_scan([0.5, 2])


@settings(max_examples=100)
@given(st.floats(min_value=1.0, max_value=50.0), st.floats(min_value=1.0, max_value=50.0), st.integers(1, 200))
def test_pq_ratio_matches_formula(a, b, n):
    p, q = max(a, b), min(a, b)
    if p - q < 1e-6:
        return
    fam = nonequivalence_witness("p_vs_q", p, q)
    assert fam.evaluated_ratio(n) == pytest.approx(fam.ratio_formula(n), rel=1e-12)
