"""Norm expressions over R^n and c00, their evaluation and the evs operations.

A norm is a finite expression tree: weighted p-norm and sup-norm leaves,
combined by pointwise sums and non-negative scalings.  ``evs_add`` and
``evs_smul`` always return the canonical form produced by :func:`normalize`:
a positive linear combination of distinct leaves, sorted by their text form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatch, InvalidP
from .evs_core import EPS_EQ, values_close

INF = math.inf


# -- points -------------------------------------------------------------------


def as_vec(coords) -> np.ndarray:
    """A dense point of R^n as a 1-D float array; all coordinates must be finite."""
    x = np.asarray(coords, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DimensionMismatch(f"expected a non-empty 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector coordinates must be finite")
    return x


@dataclass(frozen=True)
class SparseVec:
    """Finitely supported sequence (an element of c00); indices start at 1."""

    entries: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        for i, v in self.entries:
            if i < 1:
                raise ValueError("SparseVec indices start at 1")
            if v == 0 or not math.isfinite(v):
                raise ValueError("SparseVec stores only finite nonzero values")

    @classmethod
    def from_mapping(cls, mapping) -> SparseVec:
        items = sorted((int(i), float(v)) for i, v in dict(mapping).items() if v != 0)
        return cls(tuple(items))

    @classmethod
    def from_dense(cls, coords) -> SparseVec:
        return cls.from_mapping({i + 1: v for i, v in enumerate(coords)})

    @property
    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def to_dense(self, dim: int | None = None) -> np.ndarray:
        n = self.max_index if dim is None else dim
        if n < self.max_index:
            raise DimensionMismatch(f"support reaches index {self.max_index} > {n}")
        x = np.zeros(max(n, 1))
        for i, v in self.entries:
            x[i - 1] = v
        return x

    def as_dict(self) -> dict[int, float]:
        return dict(self.entries)


# -- expression tree ----------------------------------------------------------


def _check_weights(weights) -> tuple[float, ...] | None:
    if weights is None:
        return None
    w = tuple(float(v) for v in weights)
    if not w or any(not (math.isfinite(v) and v > 0) for v in w):
        raise ValueError("weights must be a non-empty list of positive finite reals")
    return w


@dataclass(frozen=True)
class Zero:
    """The zero function O (the additive identity of N(X))."""


@dataclass(frozen=True)
class WeightedP:
    """(sum_i w_i |x_i|^p)^(1/p), p in [1, inf]; ``weights=None`` means all ones."""

    p: float
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (isinstance(self.p, (int, float)) and self.p >= 1):
            raise InvalidP(f"p must be >= 1, got {self.p!r}")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "weights", _check_weights(self.weights))
        object.__setattr__(self, "_hash", hash((WeightedP, self.p, self.weights)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Sup:
    """max_i w_i |x_i|."""

    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", _check_weights(self.weights))
        object.__setattr__(self, "_hash", hash((Sup, self.weights)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Sum:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "_hash", hash((Sum, self.children)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Scale:
    alpha: float
    child: "NormExpr"

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("scale factor must be finite")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "_hash", hash((Scale, self.alpha, self.child)))

    def __hash__(self):
        return self._hash


NormExpr = Union[Zero, WeightedP, Sup, Sum, Scale]
Leaf = Union[WeightedP, Sup]

ZERO = Zero()
ONE = WeightedP(1.0)
EUCLID = WeightedP(2.0)
SUP = Sup()


def p_norm(p: float, weights=None) -> Leaf:
    """The p-norm leaf; ``p = inf`` gives the sup-norm leaf."""
    if p == INF:
        return Sup(weights)
    return WeightedP(p, weights)


def leaf_p(leaf: Leaf) -> float:
    return INF if isinstance(leaf, Sup) else leaf.p


def leaf_dim(leaf: Leaf) -> int | None:
    return None if leaf.weights is None else len(leaf.weights)


# -- text form ----------------------------------------------------------------


def fmt_num(x: float) -> str:
    """Shortest round-tripping text for a real; integral values print without '.0'."""
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    if float(x).is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


@lru_cache(maxsize=1 << 16)
def format_norm(expr: NormExpr) -> str:
    if isinstance(expr, Zero):
        return "zero"
    if isinstance(expr, WeightedP):
        if expr.weights is None:
            return f"p({fmt_num(expr.p)})"
        return f"p({fmt_num(expr.p)}; w={','.join(fmt_num(w) for w in expr.weights)})"
    if isinstance(expr, Sup):
        if expr.weights is None:
            return "sup"
        return f"sup(w={','.join(fmt_num(w) for w in expr.weights)})"
    if isinstance(expr, Scale):
        return f"scale({fmt_num(expr.alpha)}, {format_norm(expr.child)})"
    if isinstance(expr, Sum):
        return "sum(" + ", ".join(format_norm(c) for c in expr.children) + ")"
    raise TypeError(f"not a norm expression: {expr!r}")


# -- canonical form -----------------------------------------------------------


def _canonical_leaf(leaf: Leaf) -> Leaf:
    weights = leaf.weights
    if weights is not None and all(w == 1.0 for w in weights):
        weights = None
    if isinstance(leaf, WeightedP) and leaf.p == INF:
        return Sup(weights)
    if weights is leaf.weights:
        return leaf
    return type(leaf)(weights) if isinstance(leaf, Sup) else WeightedP(leaf.p, weights)


def terms(expr: NormExpr) -> dict[Leaf, float]:
    """The expression as ``{leaf: positive coefficient}`` with like leaves merged."""
    return dict(_terms(expr))


@lru_cache(maxsize=1 << 16)
def _terms(expr: NormExpr) -> tuple:
    out: dict[Leaf, float] = {}

    def collect(e, factor):
        if factor == 0 or isinstance(e, Zero):
            return
        if isinstance(e, (WeightedP, Sup)):
            leaf = _canonical_leaf(e)
            out[leaf] = out.get(leaf, 0.0) + factor
        elif isinstance(e, Scale):
            collect(e.child, factor * abs(e.alpha))
        elif isinstance(e, Sum):
            for c in e.children:
                collect(c, factor)
        else:
            raise TypeError(f"not a norm expression: {e!r}")

    collect(expr, 1.0)
    return tuple(out.items())


def from_terms(mapping: dict[Leaf, float]) -> NormExpr:
    items = sorted(((format_norm(leaf), leaf, c) for leaf, c in mapping.items() if c != 0), key=lambda t: t[0])
    parts = [leaf if c == 1.0 else Scale(c, leaf) for _, leaf, c in items]
    if not parts:
        return ZERO
    if len(parts) == 1:
        return parts[0]
    return Sum(tuple(parts))


@lru_cache(maxsize=1 << 16)
def normalize(expr: NormExpr) -> NormExpr:
    """Canonical form: Zero, a leaf, Scale(c > 0, leaf), or a sorted Sum of those."""
    return from_terms(dict(_terms(expr)))


def evs_add(f: NormExpr, g: NormExpr) -> NormExpr:
    """Pointwise sum ``(f+g)(x) = f(x) + g(x)``."""
    out = dict(_terms(f))
    for leaf, c in _terms(g):
        out[leaf] = out.get(leaf, 0.0) + c
    return from_terms(out)


def evs_smul(alpha: float, f: NormExpr) -> NormExpr:
    """Modulus scalar multiple ``(alpha f)(x) = |alpha| f(x)``."""
    if not math.isfinite(alpha):
        raise ValueError("scale factor must be finite")
    a = abs(float(alpha))
    return from_terms({leaf: a * c for leaf, c in _terms(f)})


def is_zero(expr: NormExpr) -> bool:
    return not _terms(expr)


def _leaves(expr: NormExpr):
    if isinstance(expr, (WeightedP, Sup)):
        yield expr
    elif isinstance(expr, Scale):
        yield from _leaves(expr.child)
    elif isinstance(expr, Sum):
        for c in expr.children:
            yield from _leaves(c)


def expr_dim(expr: NormExpr) -> int | None:
    """The dimension fixed by weight vectors in ``expr`` (None when unconstrained)."""
    dims = {leaf_dim(leaf) for leaf in _leaves(expr)} - {None}
    if len(dims) > 1:
        raise DimensionMismatch(f"inconsistent weight lengths {sorted(dims)} in {format_norm(expr)}")
    return dims.pop() if dims else None


# -- evaluation ---------------------------------------------------------------


def _eval_leaf(leaf: Leaf, a: np.ndarray) -> np.ndarray:
    # a: (m, n) array of absolute coordinates
    w = None if leaf.weights is None else np.asarray(leaf.weights)
    if w is not None and w.size != a.shape[1]:
        raise DimensionMismatch(f"{format_norm(leaf)} has {w.size} weights, point has {a.shape[1]} coordinates")
    p = leaf_p(leaf)
    if p == INF:
        return (a if w is None else a * w).max(axis=1)
    if p == 1.0:
        return (a if w is None else a * w).sum(axis=1)
    m = a.max(axis=1)
    safe = np.where(m > 0, m, 1.0)
    scaled = (a / safe[:, None]) ** p
    if w is not None:
        scaled = scaled * w
    return np.where(m > 0, safe * scaled.sum(axis=1) ** (1.0 / p), 0.0)


def _eval_rows(expr: NormExpr, a: np.ndarray) -> np.ndarray:
    if isinstance(expr, Zero):
        return np.zeros(a.shape[0])
    if isinstance(expr, (WeightedP, Sup)):
        return _eval_leaf(expr, a)
    if isinstance(expr, Scale):
        return abs(expr.alpha) * _eval_rows(expr.child, a)
    if isinstance(expr, Sum):
        total = np.zeros(a.shape[0])
        for c in expr.children:
            total = total + _eval_rows(c, a)
        return total
    raise TypeError(f"not a norm expression: {expr!r}")


def _dense_for(expr: NormExpr, x: SparseVec) -> np.ndarray:
    dim = expr_dim(expr)
    if dim is None:
        return x.to_dense()
    return x.to_dense(dim)


def evaluate(expr: NormExpr, x) -> float | np.ndarray:
    """Value of the norm at ``x``.

    ``x`` may be a :class:`SparseVec`, a 1-D point (returns a float) or a 2-D
    array of row points (returns one value per row).
    """
    if isinstance(x, SparseVec):
        return float(_eval_rows(expr, np.abs(_dense_for(expr, x))[None, :])[0])
    a = np.asarray(x, dtype=float)
    if a.ndim == 1:
        return float(_eval_rows(expr, np.abs(a)[None, :])[0])
    if a.ndim == 2:
        return _eval_rows(expr, np.abs(a))
    raise DimensionMismatch(f"cannot evaluate at an array of shape {a.shape}")


# -- checks -------------------------------------------------------------------


def converges_pointwise(seq: Sequence[NormExpr], target: NormExpr, probe_points, tol: float) -> list[bool]:
    """Per probe: is the last error below ``tol`` and non-increasing over the last 3 terms?"""
    if not seq:
        raise ValueError("sequence must be non-empty")
    probes = [p for p in probe_points]
    if not probes:
        raise ValueError("need at least one probe point")
    out = []
    for x in probes:
        t = evaluate(target, x)
        errors = [abs(evaluate(f, x) - t) for f in seq]
        tail = errors[-3:]
        monotone = all(b <= a for a, b in zip(tail, tail[1:]))
        out.append(bool(errors[-1] < tol and monotone))
    return out


@dataclass
class NormCheckReport:
    expr: str
    trials: int
    definite: bool = True
    homogeneous: bool = True
    triangle: bool = True
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.definite and self.homogeneous and self.triangle


def norm_axiom_check(expr: NormExpr, seed: int = 0, n_samples: int = 200, dim: int | None = None, eps: float = EPS_EQ) -> NormCheckReport:
    """Sampled definiteness, absolute homogeneity and triangle inequality of ``expr``."""
    if is_zero(expr):
        raise ValueError("the zero function is not a norm")
    n = expr_dim(expr) or dim or 3
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((n_samples, n)) * rng.uniform(0.01, 10.0, (n_samples, 1))
    ys = rng.standard_normal((n_samples, n))
    lam = rng.uniform(-5.0, 5.0, n_samples)
    report = NormCheckReport(format_norm(expr), n_samples)
    fx, fy = evaluate(expr, xs), evaluate(expr, ys)
    if evaluate(expr, np.zeros(n)) != 0 or np.any(fx <= 0):
        report.definite = False
        report.violations.append(("definite", xs[int(np.argmin(fx))].tolist()))
    flx = evaluate(expr, xs * lam[:, None])
    for i in range(n_samples):
        if not values_close(flx[i], abs(lam[i]) * fx[i], eps):
            report.homogeneous = False
            report.violations.append(("homogeneous", xs[i].tolist(), float(lam[i])))
            break
    fxy = evaluate(expr, xs + ys)
    bad = np.nonzero(fxy > (fx + fy) * (1 + eps))[0]
    if bad.size:
        report.triangle = False
        i = int(bad[0])
        report.violations.append(("triangle", xs[i].tolist(), ys[i].tolist()))
    return report
