from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normevs.errors import A6Violation, InstanceError, ToleranceError
from normevs.evs_core import (
    AXIOMS,
    EvsInstance,
    Ternary,
    check_axioms,
    check_properties,
    primitives_of,
    replay,
    scalar_pool,
    values_close,
)
from normevs.instances import (
    ConePoint,
    FinitePointSet,
    cone_instance,
    halfray_instance,
    hyperspace_instance,
    mutant_instances,
    signed_norms_mutant,
)
from normevs.norm_evs import norms_instance
from normevs.norms import EUCLID, ONE, SUP, ZERO
from normevs.report import dumps

reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_values_close_band():
    assert values_close(1.0, 1.0 + 1e-12)
    assert not values_close(1.0, 1.1)
    assert values_close(0.0, 1e-13)  # absolute floor
    with pytest.raises(ToleranceError):
        values_close(1.0, 1.0 + 5e-9)


@given(reals, reals)
def test_values_close_is_symmetric(a, b):
    try:
        forward = values_close(a, b)
    except ToleranceError:
        with pytest.raises(ToleranceError):
            values_close(b, a)
        return
    assert values_close(b, a) == forward


def test_ternary_holds():
    assert Ternary.certified().holds and Ternary.sampled().holds
    refuted = Ternary.refuted((1, 1))
    assert not refuted.holds and refuted.witness == (1, 1)
    assert Ternary.of(False, "w").status == "refuted"


def test_scalar_pool_is_seeded_and_keeps_designated_values():
    pool = scalar_pool(3, 12)
    assert pool[:8] == [-1.0, 0.0, 1.0, 0.5, 2.0, -2.5, -0.25, 3.0]
    assert pool == scalar_pool(3, 12)
    assert pool != scalar_pool(4, 12)
    assert len(scalar_pool(0, 3)) == 3


def test_norms_instance_passes_all_axioms_at_seed_7():
    report = check_axioms(norms_instance(2), seed=7, n_samples=16, n_scalars=8)
    assert report.passed, report.failing_axioms()
    assert all(report.axioms[a].trials > 0 for a in AXIOMS)


def test_hyperspace_instance_passes_at_seed_3():
    assert check_axioms(hyperspace_instance(2), seed=3).passed


@pytest.mark.parametrize("axiom", AXIOMS)
def test_each_mutant_fails_only_its_axiom(axiom):
    inst = mutant_instances()[axiom]
    report = check_axioms(inst, seed=1)
    assert report.failing_axioms() == [axiom]
    cx = report.axioms[axiom].counterexample
    assert cx is not None and replay(inst, cx)


def test_signed_scaling_is_caught_with_minus_one():
    inst = signed_norms_mutant(2)
    report = check_axioms(inst, seed=7, n_samples=16, n_scalars=8)
    failing = report.failing_axioms()
    assert "A2" in failing or "A4" in failing
    bad = report.axioms["A2"].counterexample or report.axioms["A4"].counterexample
    assert -1.0 in bad.scalars
    assert replay(inst, bad)


def test_every_counterexample_replays():
    for inst in (hyperspace_instance(2), cone_instance(2)):
        report = check_axioms(inst, seed=5)
        for cx in report.counterexamples():
            assert replay(inst, cx), cx.check


def test_strict_subadditivity_witness_recorded():
    # (1 + (-1)) f = O < 2 f for f != O
    report = check_axioms(norms_instance(3), seed=2)
    witness = report.axioms["A3"].strict_witness
    assert witness is not None
    assert witness.check == "smul_subadditive_strict"


def test_norm_properties_all_hold():
    props = check_properties(norms_instance(3), seed=11, n_samples=40, n_scalars=8)
    assert all(entry.passed for entry in props.values())
    assert props["primitivity_cross_check"].status == "not_refuted"


def test_cone_homogeneity_fails_for_negative_scalars():
    props = check_properties(cone_instance(2), seed=0)
    cx = props["homogeneous"].counterexample
    assert cx is not None
    assert cx.scalars[0] < 0 and any(cx.elements[0].a)


def test_symmetric_hyperspace_is_balanced_under_sign_flips():
    inst = hyperspace_instance(2, symmetric=True)
    a = inst.sampler(0, 6)[-1]
    for alpha in (-1.0, 0.0, 1.0):
        assert inst.leq(inst.smul(alpha, a), a).holds


def test_primitives_below_a_norm_are_zero_only():
    inst = norms_instance(2)
    assert primitives_of(inst, EUCLID, [ZERO, ONE, SUP]) == [ZERO]


def test_primitives_below_a_cone_point():
    inst = cone_instance(2)
    x = ConePoint(2.0, (1.0, -1.0))
    assert primitives_of(inst, x, [inst.zero]) == [ConePoint(0.0, (1.0, -1.0))]


def test_primitives_below_a_finite_set_are_its_singletons():
    inst = hyperspace_instance(1)
    x = FinitePointSet.of([[0], [1], [2]])
    found = primitives_of(inst, x, [inst.zero])
    assert sorted(p.points for p in found) == [((0.0,),), ((1.0,),), ((2.0,),)]


def test_missing_primitive_raises():
    inst = mutant_instances()["A6"]
    x = ConePoint(1.0, (1.0, 0.0))
    with pytest.raises(A6Violation):
        primitives_of(inst, x, [inst.zero])


def test_short_sampler_and_tiny_sample_rejected():
    short = halfray_instance(sampler=lambda seed, count: [0.0, 1.0])
    with pytest.raises(InstanceError):
        check_axioms(short, seed=0, n_samples=5)
    with pytest.raises(ValueError):
        check_axioms(halfray_instance(), seed=0, n_samples=2)


def test_report_json_is_ordered_and_stable():
    a = dumps(check_axioms(cone_instance(2), seed=4).to_dict(), indent=2)
    b = dumps(check_axioms(cone_instance(2), seed=4).to_dict(), indent=2)
    assert a == b
    data = json.loads(a)
    assert list(data) == ["instance", "seed", "axioms", "properties", "n_samples", "n_scalars", "passed"]
    assert list(data["axioms"]) == list(AXIOMS)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_halfray_passes_for_any_seed(seed):
    assert check_axioms(halfray_instance(), seed=seed, n_samples=6, n_scalars=5).passed


def test_custom_instance_through_the_interface():
    # rounding |a| r to an integer breaks the scalar laws of A3
    inst = EvsInstance(
        carrier_id="rounded",
        zero=0,
        add=lambda r, s: r + s,
        smul=lambda a, r: round(abs(a) * r),
        leq=lambda r, s: Ternary.of(r <= s, (r, s)),
        is_primitive=lambda r: r == 0,
        sampler=lambda seed, count: list(range(count)),
        equal=lambda r, s: r == s,
    )
    report = check_axioms(inst, seed=0, n_samples=5)
    assert "A3" in report.failing_axioms()
