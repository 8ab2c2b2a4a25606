"""N(X) as an evs: the pointwise order on norms and the harness instance."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .comparing import (
    ComparingConfig,
    _ambient_dim,
    _closed_form,
    certified_lower,
    deterministic_probes,
    minimize_ratio,
)
from .evs_core import EPS_EQ, EvsInstance, Ternary, values_close
from .norms import (
    INF,
    ONE,
    SUP,
    ZERO,
    NormExpr,
    Scale,
    Sum,
    evaluate,
    evs_add,
    evs_smul,
    format_norm,
    normalize,
    p_norm,
    terms,
)

# order decisions inside the axiom harness rely on probes and analytic bounds only
HARNESS_CONFIG = dict(starts=0, max_iters=400)


def _point(x: np.ndarray) -> tuple:
    return tuple(float(v) for v in x)


@lru_cache(maxsize=65536)
def _probe_values(expr: NormExpr, dim: int) -> np.ndarray:
    return evaluate(expr, deterministic_probes(dim))


def leq_norms(f: NormExpr, g: NormExpr, config: ComparingConfig = ComparingConfig()) -> Ternary:
    """Decide ``f <= g`` pointwise, i.e. ``C_f(g) >= 1`` (up to ``eps_eq``).

    Certified when a closed form or analytic lower bound proves it, refuted
    with a point where ``f(x) > g(x) (1 + eps)``, sampled otherwise.
    """
    f, g = normalize(f), normalize(g)
    eps = config.eps_eq
    if not terms(f):
        return Ternary.certified()
    n = _ambient_dim(f, g, config)
    tg = terms(g)
    if all(tg.get(leaf, 0.0) >= c for leaf, c in terms(f).items()):
        return Ternary.certified()  # g dominates f term by term
    if not tg:
        e1 = np.zeros(n)
        e1[0] = 1.0
        return Ternary.refuted(_point(e1))
    fv, gv = _probe_values(f, n), _probe_values(g, n)
    bad = np.flatnonzero(fv > gv * (1 + eps))
    if bad.size:
        return Ternary.refuted(_point(deterministic_probes(n)[bad[0]]))
    if certified_lower(f, g, config) * (1 + eps) >= 1:
        return Ternary.certified()
    exact = _closed_form(terms(f), terms(g), None if config.space == "c00" else n)
    if exact is not None and isinstance(exact.witness, tuple):
        x = np.asarray(exact.witness)
        if evaluate(f, x) > evaluate(g, x) * (1 + eps):
            return Ternary.refuted(_point(x))
    best = minimize_ratio(f, g, n, config)
    x = best.x
    if evaluate(f, x) > evaluate(g, x) * (1 + eps):
        return Ternary.refuted(_point(x))
    return Ternary.sampled()


def norms_equal(f: NormExpr, g: NormExpr, dim: int, eps: float = EPS_EQ) -> bool:
    """Functional equality decided by evaluation on the probe set (never by tree shape alone)."""
    f, g = normalize(f), normalize(g)
    if f == g:
        return True
    return values_close(_probe_values(f, dim), _probe_values(g, dim), eps)


_P_CHOICES = (1.0, 1.5, 2.0, 3.0, 4.0, INF)


def _random_leaf(rng: np.random.Generator, dim: int):
    p = _P_CHOICES[int(rng.integers(len(_P_CHOICES)))]
    weights = None
    if rng.random() < 0.4:
        weights = tuple(round(float(w), 3) for w in rng.uniform(0.5, 2.0, dim))
    return p_norm(p, weights)


def norm_sampler(dim: int):
    """Seeded sampler of norm expressions; designated elements come first."""

    def sample(seed: int, count: int) -> list:
        rng = np.random.default_rng([seed, dim])
        designated = [
            ZERO,
            ONE,
            SUP,
            p_norm(2.0, (1.0,) * dim),
            p_norm(50.0),
            Scale(2.5, ONE),
            Sum((ONE, SUP)),
            p_norm(3.0, tuple(float(i + 1) for i in range(dim))),
        ]
        out = [normalize(e) for e in designated]
        while len(out) < count:
            kind = rng.random()
            leaf = _random_leaf(rng, dim)
            if kind < 0.35:
                expr = leaf
            elif kind < 0.65:
                expr = Scale(round(float(rng.uniform(0.25, 4.0)), 3), leaf)
            elif kind < 0.85:
                expr = Sum((leaf, Scale(round(float(rng.uniform(0.25, 4.0)), 3), _random_leaf(rng, dim))))
            else:
                # a multiple of an earlier element, so that order pairs occur
                base = out[int(rng.integers(1, len(out)))]
                expr = Scale(round(float(rng.uniform(1.0, 3.0)), 3), base)
            out.append(normalize(expr))
        return out[:count]

    return sample


def norms_instance(dim: int = 2, config: ComparingConfig | None = None) -> EvsInstance:
    """N(R^dim): pointwise sum, modulus scaling, pointwise order; X_0 = {O}."""
    cfg = config or ComparingConfig(dim=dim, **HARNESS_CONFIG)

    def leq(f, g):
        return leq_norms(f, g, cfg)

    return EvsInstance(
        carrier_id=f"norms(R^{dim})",
        zero=ZERO,
        add=evs_add,
        smul=evs_smul,
        leq=leq,
        is_primitive=lambda f: not terms(f),
        sampler=norm_sampler(dim),
        equal=lambda f, g: norms_equal(f, g, dim, cfg.eps_eq),
        describe=format_norm,
    )
