"""Comparing functions on N(X) and the norm-equivalence criterion.

For norms f != O and g, ``C_f(g) = inf_{x != 0} g(x)/f(x)``.  Results are
:class:`ComparingResult` brackets: closed forms give exact values; anything
else gets an analytic lower bound (0 when nothing is provable) and an upper
bound from derivative-free minimization of the ratio on the unit sphere.
Two norms are equivalent iff ``C_f(g) C_g(f) != 0``; a verdict is only
issued when that product is certified positive or certified zero.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, ZeroNormError
from .evs_core import EPS_EQ
from .norms import (
    INF,
    Leaf,
    NormExpr,
    SparseVec,
    Sup,
    evaluate,
    format_norm,
    leaf_dim,
    leaf_p,
    normalize,
    terms,
)
from .witness import WitnessSequence, family_for

EXACT = "exact"
BRACKETED = "bracketed"
SPACES = ("rn", "c00")
_SIGN_PATTERN_MAX_DIM = 10


@dataclass(frozen=True)
class ComparingConfig:
    """Numerical settings; ``dim`` is the ambient dimension (truncation size on c00)."""

    dim: int = 3
    space: str = "rn"
    seed: int = 42
    starts: int = 32
    tol_opt: float = 1e-10
    max_iters: int = 10_000
    eps_eq: float = EPS_EQ
    n_probes: int = 1000

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}")
        if self.tol_opt <= 0 or self.eps_eq <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class ComparingResult:
    """Bracket ``lower <= C_f(g) <= upper``; ``witness`` attains ``upper`` when given."""

    lower: float
    upper: float
    witness: tuple | SparseVec | None
    status: str
    method: str
    converged: bool = True
    family: WitnessSequence | None = None

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    @property
    def value(self) -> float | None:
        return self.lower if self.exact else None

    def to_dict(self) -> dict:
        if isinstance(self.witness, SparseVec):
            from .literals import format_sparse

            witness = format_sparse(self.witness)
        elif self.witness is None:
            witness = None
        else:
            witness = list(self.witness)
        out = {
            "lower": self.lower,
            "upper": self.upper,
            "status": self.status,
            "witness": witness,
            "method": self.method,
        }
        if not self.converged:
            out["converged"] = False
        return out


class Interval(NamedTuple):
    lower: float
    upper: float

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper


# -- sphere probes and pattern search ----------------------------------------


@lru_cache(maxsize=64)
def _probe_matrix(dim: int) -> np.ndarray:
    rows = [np.eye(dim), -np.eye(dim), np.ones((1, dim))]
    if dim <= _SIGN_PATTERN_MAX_DIM:
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=dim)))
        rows.append(signs)
    probes = np.vstack(rows)
    probes /= np.linalg.norm(probes, axis=1)[:, None]
    probes.setflags(write=False)
    return probes


def deterministic_probes(dim: int) -> np.ndarray:
    """Signed basis vectors, the all-ones vector and its sign patterns (dim <= 10), on the sphere."""
    return _probe_matrix(dim)


def random_sphere_points(dim: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((count, dim))
    norms = np.linalg.norm(pts, axis=1)
    pts[norms == 0] = 1.0
    return pts / np.linalg.norm(pts, axis=1)[:, None]


class MinimizationResult(NamedTuple):
    ratio: float
    x: np.ndarray
    converged: bool


def _ratio_rows(f: NormExpr, g: NormExpr):
    def ratio(points: np.ndarray) -> np.ndarray:
        return evaluate(g, points) / evaluate(f, points)

    return ratio


def pattern_search(ratio, x0: np.ndarray, tol: float = 1e-10, max_iters: int = 10_000) -> MinimizationResult:
    """Compass search on the unit sphere.

    Polls ``x +- step e_i`` (projected back to the sphere), moves to the best
    improving point, halves the step when nothing improves and stops once the
    step falls below ``tol``.
    """
    n = x0.size
    directions = np.vstack([np.eye(n), -np.eye(n)])
    x = x0 / np.linalg.norm(x0)
    fx = float(ratio(x[None, :])[0])
    step = 0.5
    for _ in range(max_iters):
        if step < tol:
            return MinimizationResult(fx, x, True)
        cand = x + step * directions
        lengths = np.linalg.norm(cand, axis=1)
        keep = lengths > 0
        cand = cand[keep] / lengths[keep, None]
        vals = ratio(cand)
        j = int(np.argmin(vals))
        if vals[j] < fx:
            x, fx = cand[j], float(vals[j])
        else:
            step *= 0.5
    return MinimizationResult(fx, x, step < tol)


def _better(a: MinimizationResult, b: MinimizationResult | None) -> bool:
    if b is None or a.ratio < b.ratio:
        return True
    return a.ratio == b.ratio and tuple(a.x) < tuple(b.x)


def minimize_ratio(
    f: NormExpr,
    g: NormExpr,
    dim: int,
    config: ComparingConfig = ComparingConfig(),
    include_probes: bool = True,
) -> MinimizationResult:
    """Smallest ratio g/f found by probing the sphere and multi-start pattern search.

    The result only bounds ``C_f(g)`` from above.  Ties go to the
    lexicographically smallest point, so the outcome does not depend on
    start order.
    """
    ratio = _ratio_rows(f, g)
    best: MinimizationResult | None = None
    if include_probes:
        probes = deterministic_probes(dim)
        vals = ratio(probes)
        for j in np.flatnonzero(vals == vals.min()):
            cand = MinimizationResult(float(vals[j]), probes[j], True)
            if _better(cand, best):
                best = cand
    converged = True
    for x0 in random_sphere_points(dim, config.starts, config.seed):
        res = pattern_search(ratio, x0, config.tol_opt, config.max_iters)
        converged &= res.converged
        if _better(res, best):
            best = res
    return MinimizationResult(best.ratio, best.x, converged)


# -- closed forms -------------------------------------------------------------


def _unit(dim: int | None, i: int = 0):
    if dim is None:
        return SparseVec(((i + 1, 1.0),))
    e = [0.0] * dim
    e[i] = 1.0
    return tuple(e)


def _ones(dim: int) -> tuple:
    return tuple([1.0 / math.sqrt(dim)] * dim)


def _inv(p: float) -> float:
    return 0.0 if p == INF else 1.0 / p


@lru_cache(maxsize=1024)
def comparing_exact_pq(p: float, q: float, n: int | None) -> ComparingResult:
    """Exact ``C_{||.||_q}(||.||_p)`` for unweighted norms on R^n (``n=None``: on c00).

    On R^n this is ``n^(1/p - 1/q)`` attained at the all-ones direction when
    p > q, and 1 attained at a basis vector otherwise.  On c00 the p > q case
    is 0, certified by a witness family.
    """
    if p <= q:
        return ComparingResult(1.0, 1.0, _unit(n), EXACT, "closed_form")
    if n is None:
        return ComparingResult(0.0, 0.0, None, EXACT, "witness_family", family=family_for(p, q))
    value = float(n) ** (_inv(p) - _inv(q))
    return ComparingResult(value, value, _ones(n), EXACT, "closed_form")


def _uniform_factor(leaf: Leaf) -> float | None:
    """c with leaf = c * ||.||_p when the weights are uniform, else None."""
    if leaf.weights is None:
        return 1.0
    w0 = leaf.weights[0]
    if any(w != w0 for w in leaf.weights):
        return None
    return w0 if isinstance(leaf, Sup) else w0 ** (1.0 / leaf.p)


def _weight_bounds(leaf: Leaf) -> tuple[float, float]:
    """(lo, hi) with lo ||.||_p <= leaf <= hi ||.||_p."""
    if leaf.weights is None:
        return 1.0, 1.0
    lo, hi = min(leaf.weights), max(leaf.weights)
    if isinstance(leaf, Sup):
        return lo, hi
    return lo ** (1.0 / leaf.p), hi ** (1.0 / leaf.p)


def _closed_form(tf: dict, tg: dict, n: int | None) -> ComparingResult | None:
    if not tg:
        return ComparingResult(0.0, 0.0, _unit(n), EXACT, "closed_form")
    if tf.keys() == tg.keys():
        ratios = [tg[k] / tf[k] for k in tf]
        lo, hi = min(ratios), max(ratios)
        if hi - lo <= 4 * np.finfo(float).eps * hi:
            return ComparingResult(lo, lo, _unit(n), EXACT, "closed_form")
        return None
    if len(tf) == 1 and len(tg) == 1:
        (lf, a), (lg, b) = next(iter(tf.items())), next(iter(tg.items()))
        cf, cg = _uniform_factor(lf), _uniform_factor(lg)
        if cf is None or cg is None:
            return None
        base = comparing_exact_pq(leaf_p(lg), leaf_p(lf), n)
        k = (b * cg) / (a * cf)
        return ComparingResult(k * base.lower, k * base.upper, base.witness, EXACT, base.method, family=base.family)
    return None


def _leaf_lower(lf: Leaf, a: float, lg: Leaf, b: float, n: int | None) -> float:
    lo_g = _weight_bounds(lg)[0]
    hi_f = _weight_bounds(lf)[1]
    best = (b * lo_g) / (a * hi_f) * comparing_exact_pq(leaf_p(lg), leaf_p(lf), n).lower
    if leaf_p(lf) == leaf_p(lg) and n is not None:
        # same exponent: the ratio is at least min_i (v_i / w_i)^(1/p), attained at e_i
        w = np.ones(n) if lf.weights is None else np.asarray(lf.weights)
        v = np.ones(n) if lg.weights is None else np.asarray(lg.weights)
        r = float(np.min(v / w))
        if not isinstance(lf, Sup):
            r = r ** (1.0 / lf.p)
        best = max(best, (b / a) * r)
    return best


def _lower(tf: dict, tg: dict, n: int | None) -> float:
    return _lower_items(tuple(tf.items()), tuple(tg.items()), n)


@lru_cache(maxsize=1 << 16)
def _lower_items(f_items: tuple, g_items: tuple, n: int | None) -> float:
    tf, tg = dict(f_items), dict(g_items)
    exact = _closed_form(tf, tg, n)
    if exact is not None:
        return exact.lower
    best = 0.0
    if len(tg) > 1:
        best = max(best, sum(_lower(tf, {k: c}, n) for k, c in tg.items()))
    if len(tf) > 1:
        parts = [_lower({k: c}, tg, n) for k, c in tf.items()]
        if all(v > 0 for v in parts):
            best = max(best, 1.0 / sum(1.0 / v for v in parts))
    if len(tf) == 1 and len(tg) == 1:
        (lf, a), (lg, b) = next(iter(tf.items())), next(iter(tg.items()))
        best = max(best, _leaf_lower(lf, a, lg, b, n))
    return best


def _ambient_dim(f: NormExpr, g: NormExpr, config: ComparingConfig) -> int:
    leaves = list(terms(f)) + list(terms(g))
    dims = {leaf_dim(leaf) for leaf in leaves} - {None}
    if config.space == "c00":
        if dims:
            raise DimensionMismatch("weighted leaves have a fixed dimension and are not defined on c00")
        return config.dim
    if len(dims) > 1:
        raise DimensionMismatch(f"inconsistent weight lengths {sorted(dims)}")
    if dims:
        (d,) = dims
        return d
    return config.dim


def certified_lower(f: NormExpr, g: NormExpr, config: ComparingConfig = ComparingConfig()) -> float:
    """A value provably <= C_f(g), built from closed forms and weight bounds.

    Uses superadditivity in g, ``C_{f1+f2}(g) >= 1/(1/C_{f1}(g) + 1/C_{f2}(g))``
    and ``min(w) ||.||_p <= weighted p-norm <= max(w) ||.||_p``.
    """
    tf, tg = terms(f), terms(g)
    if not tf:
        raise ZeroNormError("C_f is undefined for f = O")
    n = _ambient_dim(f, g, config)
    return _lower(tf, tg, None if config.space == "c00" else n)


def comparing_function(f: NormExpr, g: NormExpr, config: ComparingConfig = ComparingConfig()) -> ComparingResult:
    """``C_f(g) = inf_{x != 0} g(x)/f(x)`` as an exact value or a bracket."""
    tf, tg = terms(f), terms(g)
    if not tf:
        raise ZeroNormError("C_f is undefined for f = O")
    n = _ambient_dim(f, g, config)
    closed = _closed_form(tf, tg, None if config.space == "c00" else n)
    if closed is not None:
        return closed
    lower = _lower(tf, tg, None if config.space == "c00" else n)
    f, g = normalize(f), normalize(g)
    best = minimize_ratio(f, g, n, config)
    upper = max(best.ratio, lower)
    if config.space == "c00":
        witness = SparseVec.from_dense(best.x)
    else:
        witness = tuple(float(v) for v in best.x)
    return ComparingResult(lower, upper, witness, BRACKETED, "minimization", converged=best.converged)


# -- spectrum, order and equivalence -----------------------------------------


@dataclass(frozen=True)
class SpectrumDescriptor:
    """The comparing spectrum: scalars with |lambda| <= C_f(g), a closed disc."""

    lower: float
    upper: float

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def radius(self) -> float | Interval:
        return self.lower if self.exact else Interval(self.lower, self.upper)

    def contains(self, lam: float) -> bool | None:
        """Membership of ``lam``; None when it falls inside an undetermined bracket."""
        r = abs(lam)
        if r == 0 or r <= self.lower:
            return True
        if r > self.upper:
            return False
        return None


def spectrum(f: NormExpr, g: NormExpr, config: ComparingConfig = ComparingConfig()) -> SpectrumDescriptor:
    res = comparing_function(f, g, config)
    return SpectrumDescriptor(res.lower, res.upper)


def probe_points(config: ComparingConfig, dim: int | None = None, count: int | None = None) -> np.ndarray:
    """Deterministic plus seeded random probes (rows) for sampled inequality checks."""
    n = dim or config.dim
    count = config.n_probes if count is None else count
    rng = np.random.default_rng([config.seed, 104729])
    rand = rng.standard_normal((count, n)) * rng.uniform(0.1, 10.0, (count, 1))
    return np.vstack([deterministic_probes(n), rand])


def check_primitive_inequality(f: NormExpr, g: NormExpr, value: float, probes: np.ndarray, eps: float = EPS_EQ) -> bool:
    """True iff ``value * f(x) <= g(x) (1 + eps)`` at every probe row."""
    fx = evaluate(f, probes)
    gx = evaluate(g, probes)
    return bool(np.all(value * fx <= gx * (1 + eps)))


def _require_nonzero(*exprs: NormExpr) -> None:
    for e in exprs:
        if not terms(e):
            raise ZeroNormError("the zero function is not a norm")


def topology_comparison(f: NormExpr, g: NormExpr, config: ComparingConfig = ComparingConfig()) -> bool | None:
    """Is the topology of g finer than that of f, i.e. ``C_f(g) != 0``?  None if undetermined."""
    _require_nonzero(f, g)
    res = comparing_function(f, g, config)
    if res.lower > 0:
        return True
    if res.exact and res.lower == 0:
        return False
    return None


def psi(f: NormExpr, g: NormExpr, config: ComparingConfig = ComparingConfig()) -> Interval:
    """``min(C_f(g), C_g(f))`` as an interval (a point when determined)."""
    _require_nonzero(f, g)
    a = comparing_function(f, g, config)
    b = comparing_function(g, f, config)
    return _psi(a, b)


def _psi(a: ComparingResult, b: ComparingResult) -> Interval:
    return Interval(min(a.lower, b.lower), min(a.upper, b.upper))


@dataclass
class EquivalenceVerdict:
    f: NormExpr
    g: NormExpr
    space: str
    dim: int
    c_fg: ComparingResult
    c_gf: ComparingResult
    equivalent: bool | None
    sandwich: tuple[float, float] | None = None
    divergence_witness: WitnessSequence | None = None
    witness_check: dict | None = field(default=None, repr=False)

    @property
    def psi(self) -> Interval:
        return _psi(self.c_fg, self.c_gf)

    def to_dict(self) -> dict:
        ps = self.psi
        if self.divergence_witness is None:
            family = None
        else:
            family = dict(self.divergence_witness.to_dict(), **(self.witness_check or {}))
        return {
            "f": format_norm(self.f),
            "g": format_norm(self.g),
            "space": self.space if self.space == "c00" else f"R^{self.dim}",
            "c_fg": self.c_fg.to_dict(),
            "c_gf": self.c_gf.to_dict(),
            "psi": ps.lower if ps.is_point else [ps.lower, ps.upper],
            "equivalent": "undetermined" if self.equivalent is None else self.equivalent,
            "sandwich": None if self.sandwich is None else list(self.sandwich),
            "witness_family": family,
        }


def _sandwich_holds(f, g, lam, mu, probes, eps) -> bool:
    fx = evaluate(f, probes)
    gx = evaluate(g, probes)
    return bool(np.all(lam * fx <= gx * (1 + eps)) and np.all(gx <= mu * fx * (1 + eps)))


def equivalence_verdict(f: NormExpr, g: NormExpr, config: ComparingConfig = ComparingConfig()) -> EquivalenceVerdict:
    """Decide equivalence of f and g via ``C_f(g) C_g(f) != 0``.

    Equivalent when both comparing values are certified positive; the
    sandwich ``lam f <= g <= mu f`` uses the certified lower bounds and is
    re-validated on probes.  Not equivalent when either value is certified
    zero.  Otherwise the verdict is None (undetermined).
    """
    _require_nonzero(f, g)
    f, g = normalize(f), normalize(g)
    n = _ambient_dim(f, g, config)
    c_fg = comparing_function(f, g, config)
    c_gf = comparing_function(g, f, config)
    verdict = EquivalenceVerdict(f, g, config.space, n, c_fg, c_gf, None)
    if c_fg.lower > 0 and c_gf.lower > 0:
        lam, mu = c_fg.lower, 1.0 / c_gf.lower
        probes = probe_points(config, n)
        if _sandwich_holds(f, g, lam, mu, probes, config.eps_eq):
            verdict.equivalent = True
            verdict.sandwich = (lam, mu)
        return verdict
    for res in (c_fg, c_gf):
        if res.exact and res.lower == 0:
            verdict.equivalent = False
            if res.family is not None:
                check = res.family.validate()
                verdict.divergence_witness = res.family
                verdict.witness_check = {
                    "n_check": check.n_check,
                    "max_rel_error": check.max_rel_error,
                    "monotone": check.monotone,
                }
            return verdict
    return verdict
