from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normevs.errors import DimensionMismatch, InvalidP
from normevs.literals import parse_norm
from normevs.norms import (
    ONE,
    SUP,
    ZERO,
    Scale,
    SparseVec,
    Sum,
    Sup,
    WeightedP,
    converges_pointwise,
    evaluate,
    evs_add,
    evs_smul,
    format_norm,
    is_zero,
    norm_axiom_check,
    normalize,
    p_norm,
)
from oracles import pnorm_rows
from strategies import DIM, exponents, leaves, moderate_points, norm_exprs, points, weights


def test_sup_and_one_on_the_staircase_vector():
    for n in (1, 4, 10):
        x = SparseVec.from_dense(range(1, n + 1))
        assert evaluate(SUP, x) == n
        assert evaluate(ONE, x) == n * (n + 1) / 2


def test_scale_uses_the_modulus():
    assert evaluate(Scale(-2, ONE), [1, 0]) == 2


def test_evs_add_examples():
    assert normalize(evs_add(ZERO, SUP)) == SUP
    assert evaluate(evs_add(ONE, SUP), [1, 1]) == 3
    assert evaluate(evs_add(ONE, ONE), [3, 4]) == 14


def test_evs_smul_examples():
    assert is_zero(evs_smul(0, SUP))
    assert evs_smul(0, SUP) == ZERO
    assert evs_smul(2, Scale(3, ONE)) == Scale(6, ONE)
    x = [0.3, -2.0, 5.0]
    assert evaluate(evs_smul(-1, Sum((ONE, SUP))), x) == evaluate(Sum((ONE, SUP)), x)


def test_invalid_exponents_rejected():
    with pytest.raises(InvalidP):
        WeightedP(0.5)
    with pytest.raises(InvalidP):
        WeightedP(float("nan"))
    with pytest.raises(ValueError):
        WeightedP(2.0, (1.0, -1.0))


def test_canonical_forms():
    assert normalize(WeightedP(math.inf)) == Sup()
    assert normalize(WeightedP(2.0, (1.0, 1.0))) == WeightedP(2.0)
    assert normalize(Sum((SUP, ONE, Scale(2, ONE)))) == Sum((Scale(3.0, ONE), SUP))
    assert normalize(Scale(-4, Scale(0.5, SUP))) == Scale(2.0, SUP)
    assert normalize(Sum((ZERO, Scale(0, ONE)))) == ZERO
    assert format_norm(normalize(parse_norm("sum(scale(2, p(1)), sup)"))) == "sum(scale(2, p(1)), sup)"
    assert format_norm(p_norm(2, (1, 1, 4))) == "p(2; w=1,1,4)"


def test_sparse_vectors():
    x = SparseVec.from_mapping({3: 2.0, 1: -1.0, 2: 0.0})
    assert x.entries == ((1, -1.0), (3, 2.0))
    assert x.max_index == 3
    assert list(x.to_dense(4)) == [-1.0, 0.0, 2.0, 0.0]
    with pytest.raises(DimensionMismatch):
        x.to_dense(2)
    with pytest.raises(ValueError):
        SparseVec(((0, 1.0),))


def test_weighted_leaf_needs_matching_dimension():
    with pytest.raises(DimensionMismatch):
        evaluate(p_norm(2, (1, 2)), [1.0, 2.0, 3.0])


def test_large_exponents_do_not_overflow():
    x = np.array([1e200, 2e200, 3e200])
    assert evaluate(WeightedP(50.0), x) == pytest.approx(3e200 * (1 + (2 / 3) ** 50 + (1 / 3) ** 50) ** (1 / 50))
    assert evaluate(WeightedP(2.0), [1e-200, 0.0]) == pytest.approx(1e-200)


def test_norm_axiom_check_examples():
    assert norm_axiom_check(WeightedP(2.0, (1.0, 1.0))).passed
    assert norm_axiom_check(Sum((ONE, SUP))).passed
    with pytest.raises(ValueError):
        norm_axiom_check(ZERO)


def test_pointwise_convergence():
    probes = [np.array(v, dtype=float) / math.hypot(*v) for v in ([1, 0], [0, 1], [0.6, 0.8], [-1, 2])]
    shrinking = [Scale(1 + 1 / k, ONE) for k in range(1, 2001)]
    assert all(converges_pointwise(shrinking, ONE, probes, 1e-3))
    growing = [Scale(k, ONE) for k in range(1, 50)]
    assert not any(converges_pointwise(growing, ONE, probes, 1e-3))
    assert all(converges_pointwise([SUP] * 3, SUP, probes, 1e-12))


@settings(max_examples=200)
@given(exponents, weights, moderate_points)
def test_leaf_matches_direct_formula(p, w, x):
    expected = pnorm_rows(x, p, w)[0]
    assert evaluate(p_norm(p, w), x) == pytest.approx(expected, rel=1e-12, abs=1e-300)


@settings(max_examples=150, deadline=None)
@given(norm_exprs, norm_exprs, points)
def test_sum_is_pointwise(f, g, x):
    assert evaluate(evs_add(f, g), x) == pytest.approx(evaluate(f, x) + evaluate(g, x), rel=1e-9)


@settings(max_examples=150, deadline=None)
@given(st.floats(min_value=-50, max_value=50), norm_exprs, points)
def test_scalar_multiple_is_modulus_times_value(alpha, f, x):
    assert evaluate(evs_smul(alpha, f), x) == pytest.approx(abs(alpha) * evaluate(f, x), rel=1e-12, abs=1e-300)


@settings(max_examples=150, deadline=None)
@given(norm_exprs)
def test_normalize_is_idempotent(f):
    once = normalize(f)
    assert normalize(once) == once
    assert format_norm(normalize(parse_norm(format_norm(once)))) == format_norm(once)


@settings(max_examples=100, deadline=None)
@given(norm_exprs, points, st.floats(min_value=-20, max_value=20))
def test_norm_values_are_homogeneous_and_nonnegative(f, x, lam):
    fx = evaluate(f, x)
    assert fx >= 0
    assert evaluate(f, lam * x) == pytest.approx(abs(lam) * fx, rel=1e-9, abs=1e-300)
    if np.any(x != 0):
        assert fx > 0


@settings(max_examples=60, deadline=None)
@given(norm_exprs, st.integers(min_value=0, max_value=1000))
def test_every_expression_is_a_norm(f, seed):
    assert norm_axiom_check(f, seed=seed, n_samples=50, dim=DIM).passed


@settings(max_examples=100)
@given(leaves, leaves, points, points)
def test_triangle_inequality(f, g, x, y):
    h = evs_add(f, g)
    assert evaluate(h, x + y) <= (evaluate(h, x) + evaluate(h, y)) * (1 + 1e-12)
