"""Hypothesis strategies for norm expressions on R^DIM."""
from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from normevs.norms import Scale, Sum, p_norm

DIM = 3

exponents = st.one_of(
    st.sampled_from([1.0, 1.5, 2.0, 3.0, 4.0, math.inf]),
    st.floats(min_value=1.0, max_value=8.0),
)
weights = st.one_of(
    st.none(),
    st.lists(st.floats(min_value=0.25, max_value=4.0), min_size=DIM, max_size=DIM).map(tuple),
)
uniform_leaves = st.builds(p_norm, exponents)
leaves = st.builds(p_norm, exponents, weights)
factors = st.floats(min_value=-5.0, max_value=5.0).filter(lambda a: abs(a) > 1e-3)


def _extend(children):
    return st.one_of(
        st.builds(Scale, factors, children),
        st.lists(children, min_size=1, max_size=3).map(lambda cs: Sum(tuple(cs))),
    )


norm_exprs = st.recursive(leaves, _extend, max_leaves=5)
points = st.lists(st.floats(min_value=-100.0, max_value=100.0), min_size=DIM, max_size=DIM).map(np.array)
# coordinates where the naive power-sum formula is itself accurate
moderate_points = st.lists(
    st.one_of(st.just(0.0), st.floats(min_value=1e-6, max_value=100.0), st.floats(min_value=-100.0, max_value=-1e-6)),
    min_size=DIM,
    max_size=DIM,
).map(np.array)
