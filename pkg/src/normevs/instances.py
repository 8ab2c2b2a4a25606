"""Further evs instances for the axiom harness.

* the hyperspace of non-empty finite point sets of R^d (Minkowski sum,
  pointwise scaling, inclusion order; primitives are the singletons);
* the product evs [0, inf) x R^m with ``a(r, v) = (|a| r, a v)`` and
  ``(r, v) <= (s, w)`` iff ``r <= s`` and ``v = w``;
* the half ray [0, inf);
* mutants, each built to violate exactly one axiom.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch
from .evs_core import ABS_FLOOR, EPS_EQ, EvsInstance, Ternary, ToleranceError, values_close
from .norms import evaluate, fmt_num, format_norm, terms
from .norm_evs import norm_sampler
from .comparing import deterministic_probes


def _tol(scale: float, eps: float = EPS_EQ) -> float:
    return max(eps * scale, ABS_FLOOR)


def _clean(v: float) -> float:
    return float(v) + 0.0  # folds -0.0 into 0.0


# -- hyperspace of finite sets -----------------------------------------------


@dataclass(frozen=True)
class FinitePointSet:
    """Non-empty finite subset of R^d, points sorted lexicographically, near-duplicates merged."""

    points: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("a point set must be non-empty")
        if len({len(p) for p in self.points}) != 1:
            raise DimensionMismatch("all points must have the same dimension")
        object.__setattr__(self, "_hash", hash(self.points))

    def __hash__(self):
        return self._hash

    @classmethod
    def of(cls, points, eps: float = EPS_EQ) -> FinitePointSet:
        try:
            arr = np.asarray(points, dtype=float) + 0.0  # folds -0.0 into 0.0
        except ValueError as exc:
            raise DimensionMismatch("all points must have the same dimension") from exc
        if arr.size == 0:
            raise ValueError("a point set must be non-empty")
        if arr.ndim != 2:
            raise DimensionMismatch("all points must have the same dimension")
        pts = sorted(set(map(tuple, arr.tolist())))
        arr = np.asarray(pts)
        tol = np.maximum(eps * np.abs(arr).max(axis=1), ABS_FLOOR)
        dist = np.sqrt(((arr[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2))
        close = dist <= tol[:, None]
        np.fill_diagonal(close, False)
        if not close.any():
            return cls(tuple(pts))
        keep = np.zeros(len(pts), dtype=bool)
        for i in range(len(pts)):
            keep[i] = not np.any(close[i, :i] & keep[:i])
        return cls(tuple(p for p, k in zip(pts, keep) if k))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)

    def array(self) -> np.ndarray:
        return self._array

    @cached_property
    def _array(self) -> np.ndarray:
        arr = np.asarray(self.points, dtype=float)
        arr.setflags(write=False)
        return arr


def _check_dims(a: FinitePointSet, b: FinitePointSet) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"point sets in R^{a.dim} and R^{b.dim}")


def minkowski_sum(a: FinitePointSet, b: FinitePointSet) -> FinitePointSet:
    """``A + B = {a + b : a in A, b in B}``."""
    _check_dims(a, b)
    sums = (a.array()[:, None, :] + b.array()[None, :, :]).reshape(-1, a.dim)
    return FinitePointSet.of(sums)


def set_scale(alpha: float, a: FinitePointSet) -> FinitePointSet:
    """``alpha A = {alpha a : a in A}``; ``alpha = 0`` gives the origin singleton."""
    if alpha == 0:
        return FinitePointSet(((0.0,) * a.dim,))
    return FinitePointSet.of(alpha * a.array())


def _unmatched(a: FinitePointSet, b: FinitePointSet, eps: float = EPS_EQ):
    """First point of ``a`` with no point of ``b`` within tolerance (None if all match)."""
    pa, pb = a.array(), b.array()
    dist = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2).min(axis=1)
    scale = np.abs(pa).max(axis=1)
    tol = np.maximum(eps * scale, ABS_FLOOR)
    hard = np.flatnonzero(dist >= 10 * tol)
    if hard.size:
        return a.points[int(hard[0])]
    if np.any(dist > tol):
        raise ToleranceError("point match inside the indeterminate tolerance band")
    return None


def subset_leq(a: FinitePointSet, b: FinitePointSet) -> Ternary:
    """``A <= B`` iff ``A`` is a subset of ``B``; refutations carry a point of A outside B."""
    _check_dims(a, b)
    miss = _unmatched(a, b)
    return Ternary.certified() if miss is None else Ternary.refuted(miss)


def sets_equal(a: FinitePointSet, b: FinitePointSet) -> bool:
    if a.points == b.points:
        return True
    return a.dim == b.dim and _unmatched(a, b) is None and _unmatched(b, a) is None


def hyperspace_sampler(dim: int, symmetric: bool = False):
    def sample(seed: int, count: int) -> list:
        rng = np.random.default_rng([seed, dim, 17])
        origin = (0.0,) * dim
        e1 = (1.0,) + (0.0,) * (dim - 1)
        e1_2 = (2.0,) + (0.0,) * (dim - 1)
        if symmetric:
            designated = [[origin], [origin, e1, tuple(-v for v in e1)]]
        else:
            designated = [[origin], [e1], [origin, e1], [origin, e1, e1_2]]
        out = [FinitePointSet.of(d) for d in designated]
        while len(out) < count:
            if rng.random() < 0.3 and len(out) > 1:
                # a superset of an earlier element, so that inclusion pairs occur
                base = out[int(rng.integers(1, len(out)))]
                extra = tuple(float(v) for v in rng.integers(-2, 3, dim))
                pts = list(base.points) + [extra]
            else:
                k = int(rng.integers(1, 4))
                pts = [tuple(float(v) for v in rng.integers(-2, 3, dim)) for _ in range(k)]
            if symmetric:
                pts = pts + [tuple(-v for v in p) for p in pts] + [origin]
            out.append(FinitePointSet.of(pts))
        return out[:count]

    return sample


def hyperspace_instance(dim: int = 2, symmetric: bool = False) -> EvsInstance:
    """Finite point sets of R^dim under Minkowski sum and inclusion."""
    from .literals import format_pointset

    return EvsInstance(
        carrier_id=f"hyperspace(R^{dim})" + ("[symmetric]" if symmetric else ""),
        zero=FinitePointSet(((0.0,) * dim,)),
        add=minkowski_sum,
        smul=set_scale,
        leq=subset_leq,
        is_primitive=lambda a: len(a) == 1,
        sampler=hyperspace_sampler(dim, symmetric),
        equal=sets_equal,
        describe=format_pointset,
        primitive_candidates=lambda a: [FinitePointSet((p,)) for p in a.points],
    )


# -- product evs [0, inf) x R^m ------------------------------------------------


@dataclass(frozen=True)
class ConePoint:
    r: float
    a: tuple[float, ...]

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError("the cone coordinate r must be >= 0")
        object.__setattr__(self, "r", _clean(self.r))
        object.__setattr__(self, "a", tuple(_clean(v) for v in self.a))


def _check_cone(x: ConePoint, y: ConePoint) -> None:
    if len(x.a) != len(y.a):
        raise DimensionMismatch(f"cone points over R^{len(x.a)} and R^{len(y.a)}")


def cone_add(x: ConePoint, y: ConePoint) -> ConePoint:
    _check_cone(x, y)
    return ConePoint(x.r + y.r, tuple(u + v for u, v in zip(x.a, y.a)))


def cone_smul(alpha: float, x: ConePoint) -> ConePoint:
    return ConePoint(abs(alpha) * x.r, tuple(alpha * v for v in x.a))


def cone_leq(x: ConePoint, y: ConePoint) -> Ternary:
    _check_cone(x, y)
    same_a = values_close(x.a, y.a)
    ok = same_a and x.r <= y.r + _tol(abs(y.r))
    return Ternary.of(ok, (x, y))


def cone_equal(x: ConePoint, y: ConePoint) -> bool:
    _check_cone(x, y)
    return values_close((x.r,) + x.a, (y.r,) + y.a)


def _cone_vectors(rng: np.random.Generator, m: int) -> list[tuple[float, ...]]:
    return [(0.0,) * m] + [tuple(float(v) for v in rng.integers(-2, 3, m)) for _ in range(2)]


def cone_sampler(m: int, punctured: bool = False):
    def sample(seed: int, count: int) -> list:
        rng = np.random.default_rng([seed, m, 29])
        vecs = _cone_vectors(rng, m)
        a1 = (1.0,) + (0.0,) * (m - 1)
        out = [ConePoint(0.0, (0.0,) * m)]
        designated = [(1.0, a1), (2.0, a1), (1.0, (0.0,) * m)]
        if not punctured:
            designated.insert(0, (0.0, a1))
        out += [ConePoint(r, a) for r, a in designated]
        while len(out) < count:
            a = vecs[int(rng.integers(len(vecs)))]
            r = round(float(rng.uniform(0.0, 3.0)), 3)
            if punctured and r == 0 and any(a):
                continue
            if not punctured and rng.random() < 0.2:
                r = 0.0
            out.append(ConePoint(r, a))
        return out[:count]

    return sample


def cone_instance(m: int = 2) -> EvsInstance:
    """[0, inf) x R^m; the primitive space is {0} x R^m."""
    from .literals import format_cone

    return EvsInstance(
        carrier_id=f"cone([0,inf) x R^{m})",
        zero=ConePoint(0.0, (0.0,) * m),
        add=cone_add,
        smul=cone_smul,
        leq=cone_leq,
        is_primitive=lambda x: x.r == 0,
        sampler=cone_sampler(m),
        equal=cone_equal,
        describe=format_cone,
        primitive_candidates=lambda x: [ConePoint(0.0, x.a)],
    )


# -- half ray and mutants -----------------------------------------------------


def _ray_sampler(negative: bool = False):
    def sample(seed: int, count: int) -> list:
        rng = np.random.default_rng([seed, 31])
        out = [0.0, 1.0, 0.5, 2.0]
        if negative:
            out.append(-1.5)
        while len(out) < count:
            v = round(float(rng.uniform(0.0, 5.0)), 3)
            out.append(-v if negative and rng.random() < 0.5 else v)
        return out[:count]

    return sample


def _ray_leq(r: float, s: float) -> Ternary:
    return Ternary.of(r <= s + _tol(max(abs(r), abs(s))), (r, s))


def _ray_equal(r: float, s: float) -> bool:
    return values_close(r, s)


def halfray_instance(**overrides) -> EvsInstance:
    """[0, inf) with ordinary sum, ``a r = |a| r`` and the usual order."""
    base = dict(
        carrier_id="halfray",
        zero=0.0,
        add=lambda r, s: r + s,
        smul=lambda a, r: abs(a) * r,
        leq=_ray_leq,
        is_primitive=lambda r: r == 0,
        sampler=_ray_sampler(),
        equal=_ray_equal,
        describe=fmt_num,
    )
    base.update(overrides)
    return EvsInstance(**base)


def _punctured_cone(m: int = 2) -> EvsInstance:
    # {theta} together with r > 0: closed under all operations but no (0, a) with a != 0
    from dataclasses import replace

    return replace(
        cone_instance(m),
        carrier_id="mutant[A6](punctured cone)",
        sampler=cone_sampler(m, punctured=True),
        primitive_candidates=None,
    )


def mutant_instances() -> dict[str, EvsInstance]:
    """Instances that each break exactly one axiom, keyed by that axiom."""
    return {
        "A1": halfray_instance(carrier_id="mutant[A1](r + 2s)", add=lambda r, s: r + 2 * s),
        "A2": halfray_instance(
            carrier_id="mutant[A2](signed reals)",
            smul=lambda a, r: a * r,
            is_primitive=lambda r: True,
            sampler=_ray_sampler(negative=True),
        ),
        "A3": halfray_instance(carrier_id="mutant[A3](a^2 r)", smul=lambda a, r: a * a * r),
        "A4": halfray_instance(
            carrier_id="mutant[A4](max, trivial scaling)",
            add=lambda r, s: max(r, s),
            smul=lambda a, r: r,
        ),
        "A5": halfray_instance(carrier_id="mutant[A5](all primitive)", is_primitive=lambda r: True),
        "A6": _punctured_cone(),
    }


# -- signed-scaling variant of N(X) --------------------------------------------


@dataclass(frozen=True)
class SignedCombo:
    """x -> sum_i c_i f_i(x) with signed coefficients (not a norm in general)."""

    items: tuple[tuple[str, float], ...]

    @classmethod
    def build(cls, pairs) -> SignedCombo:
        acc: dict[str, float] = {}
        for key, c in pairs:
            acc[key] = acc.get(key, 0.0) + c
        return cls(tuple(sorted((k, c) for k, c in acc.items() if c != 0)))


def signed_norms_mutant(dim: int = 2) -> EvsInstance:
    """N(R^dim) with ``a f`` taken as ``a * f`` instead of ``|a| * f``."""
    probes = deterministic_probes(dim)
    leaves: dict[str, object] = {}

    def from_expr(expr) -> SignedCombo:
        pairs = []
        for leaf, c in terms(expr).items():
            key = format_norm(leaf)
            leaves[key] = leaf
            pairs.append((key, c))
        return SignedCombo.build(pairs)

    def values(x: SignedCombo) -> np.ndarray:
        total = np.zeros(probes.shape[0])
        for key, c in x.items:
            total = total + c * evaluate(leaves[key], probes)
        return total

    def leq(x, y):
        vx, vy = values(x), values(y)
        slack = np.maximum(EPS_EQ * np.maximum(np.abs(vx), np.abs(vy)), ABS_FLOOR)
        bad = np.flatnonzero(vx > vy + slack)
        return Ternary.refuted(tuple(probes[bad[0]])) if bad.size else Ternary.sampled()

    def sample(seed, count):
        return [from_expr(e) for e in norm_sampler(dim)(seed, count)]

    def describe(x: SignedCombo) -> str:
        return "signed(" + ", ".join(f"{fmt_num(c)}*{k}" for k, c in x.items) + ")"

    return EvsInstance(
        carrier_id=f"mutant(signed norms R^{dim})",
        zero=SignedCombo(()),
        add=lambda x, y: SignedCombo.build(x.items + y.items),
        smul=lambda a, x: SignedCombo.build((k, a * c) for k, c in x.items),
        leq=leq,
        is_primitive=lambda x: not x.items,
        sampler=sample,
        equal=lambda x, y: values_close(values(x), values(y)),
        describe=describe,
    )
