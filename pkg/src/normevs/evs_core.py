"""Generic exponential-vector-space (evs) interface and a sampled axiom checker.

An :class:`EvsInstance` bundles a carrier's operations.  :func:`check_axioms`
evaluates the six evs axioms (and, optionally, the derived properties) on a
deterministic finite sample and returns an :class:`AxiomReport`.  Every
failure carries a :class:`Counterexample` that :func:`replay` re-evaluates.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

import numpy as np

from .errors import A6Violation, InstanceError, ToleranceError

EPS_EQ = 1e-9
ABS_FLOOR = 1e-12

AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6")
PROPERTIES = (
    "single_primitive",
    "zero_primitive",
    "homogeneous",
    "convex",
    "balanced",
    "primitivity_cross_check",
)

_DESIGNATED_SCALARS = (-1.0, 0.0, 1.0, 0.5, 2.0, -2.5, -0.25, 3.0)


def tolerance(scale: float, eps: float = EPS_EQ) -> float:
    return max(eps * scale, ABS_FLOOR)


def values_close(a, b, eps: float = EPS_EQ) -> bool:
    """Elementwise equality of real values, relative ``eps`` with an absolute floor.

    Differences inside ``(tol, 10 tol)`` are neither clearly equal nor clearly
    different; if no entry is clearly different such a band hit raises
    :class:`ToleranceError`.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    diff = np.abs(a - b)
    tol = np.maximum(eps * np.maximum(np.abs(a), np.abs(b)), ABS_FLOOR)
    if np.all(diff <= tol):
        return True
    if np.any(diff >= 10 * tol):
        return False
    raise ToleranceError(f"indeterminate equality: max |a-b|/tol = {float(np.max(diff / tol)):.3g}")


@dataclass(frozen=True)
class Ternary:
    """Outcome of an order decision that may only be sampled, not proved."""

    status: str
    witness: Any = None

    CERTIFIED = "certified"
    SAMPLED = "sampled"
    REFUTED = "refuted"

    @classmethod
    def certified(cls) -> Ternary:
        return cls(cls.CERTIFIED)

    @classmethod
    def sampled(cls) -> Ternary:
        return cls(cls.SAMPLED)

    @classmethod
    def refuted(cls, witness: Any) -> Ternary:
        return cls(cls.REFUTED, witness)

    @classmethod
    def of(cls, flag: bool, witness: Any = None) -> Ternary:
        return cls.certified() if flag else cls.refuted(witness)

    @property
    def holds(self) -> bool:
        return self.status != self.REFUTED

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class EvsInstance:
    """Operations of one evs carrier.

    ``leq`` returns a :class:`Ternary`; ``equal`` decides element equality
    (within the instance's tolerance); ``describe`` renders an element as its
    text literal for reports.  ``primitive_candidates`` may propose primitive
    elements below a given element, to be verified by the checker.
    """

    carrier_id: str
    zero: Any
    add: Callable[[Any, Any], Any]
    smul: Callable[[float, Any], Any]
    leq: Callable[[Any, Any], Ternary]
    is_primitive: Callable[[Any], bool]
    sampler: Callable[[int, int], list]
    equal: Callable[[Any, Any], bool]
    describe: Callable[[Any], str] = repr
    primitive_candidates: Callable[[Any], list] | None = None


@dataclass(frozen=True)
class Counterexample:
    check: str
    elements: tuple
    scalars: tuple
    indices: tuple
    seed: int
    n_samples: int

    def to_dict(self, describe: Callable[[Any], str] = repr) -> dict:
        return {
            "check": self.check,
            "indices": list(self.indices),
            "elements": [describe(e) for e in self.elements],
            "scalars": list(self.scalars),
            "seed": self.seed,
            "n_samples": self.n_samples,
        }


@dataclass
class CheckEntry:
    status: str = "pass"
    trials: int = 0
    counterexample: Counterexample | None = None
    strict_witness: Counterexample | None = None

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self, describe=repr) -> dict:
        out = {
            "status": self.status,
            "trials": self.trials,
            "counterexample": None if self.counterexample is None else self.counterexample.to_dict(describe),
        }
        if self.strict_witness is not None:
            out["strict_witness"] = self.strict_witness.to_dict(describe)
        return out


@dataclass
class AxiomReport:
    instance: str
    seed: int
    n_samples: int
    n_scalars: int
    axioms: dict[str, CheckEntry]
    properties: dict[str, CheckEntry] = field(default_factory=dict)
    describe: Callable[[Any], str] = repr

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.axioms.values())

    def failing_axioms(self) -> list[str]:
        return [name for name, entry in self.axioms.items() if not entry.passed]

    def failing_properties(self) -> list[str]:
        return [name for name, entry in self.properties.items() if not entry.passed]

    def counterexamples(self) -> list[Counterexample]:
        entries = list(self.axioms.values()) + list(self.properties.values())
        return [e.counterexample for e in entries if e.counterexample is not None]

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "seed": self.seed,
            "axioms": {k: v.to_dict(self.describe) for k, v in self.axioms.items()},
            "properties": {k: v.to_dict(self.describe) for k, v in self.properties.items()},
            "n_samples": self.n_samples,
            "n_scalars": self.n_scalars,
            "passed": self.passed,
        }


def scalar_pool(seed: int, n_scalars: int) -> list[float]:
    """Designated scalars (-1, 0, 1, ...) followed by seeded uniform draws in [-3, 3]."""
    scalars = list(_DESIGNATED_SCALARS[:n_scalars])
    extra = n_scalars - len(scalars)
    if extra > 0:
        rng = np.random.default_rng([seed, 7919])
        scalars.extend(round(float(v), 4) for v in rng.uniform(-3.0, 3.0, extra))
    return scalars


# -- predicates ---------------------------------------------------------------
# Each predicate returns True when the law holds for the given elements/scalars.


def _identity(inst, e, s, pool):
    (x,) = e
    return inst.equal(inst.add(x, inst.zero), x) and inst.equal(inst.add(inst.zero, x), x)


def _commutative(inst, e, s, pool):
    x, y = e
    return inst.equal(inst.add(x, y), inst.add(y, x))


def _associative(inst, e, s, pool):
    x, y, z = e
    return inst.equal(inst.add(inst.add(x, y), z), inst.add(x, inst.add(y, z)))


def _order_reflexive(inst, e, s, pool):
    (x,) = e
    return inst.leq(x, x).holds


def _order_antisymmetric(inst, e, s, pool):
    x, y = e
    if inst.leq(x, y).holds and inst.leq(y, x).holds:
        return inst.equal(x, y)
    return True


def _order_transitive(inst, e, s, pool):
    x, y, z = e
    if inst.leq(x, y).holds and inst.leq(y, z).holds:
        return inst.leq(x, z).holds
    return True


def _add_monotone(inst, e, s, pool):
    x, y, z = e
    if not inst.leq(x, y).holds:
        return True
    return inst.leq(inst.add(x, z), inst.add(y, z)).holds


def _smul_monotone(inst, e, s, pool):
    x, y = e
    (a,) = s
    if not inst.leq(x, y).holds:
        return True
    return inst.leq(inst.smul(a, x), inst.smul(a, y)).holds


def _smul_distributes(inst, e, s, pool):
    x, y = e
    (a,) = s
    return inst.equal(inst.smul(a, inst.add(x, y)), inst.add(inst.smul(a, x), inst.smul(a, y)))


def _smul_compose(inst, e, s, pool):
    (x,) = e
    a, b = s
    return inst.equal(inst.smul(a, inst.smul(b, x)), inst.smul(a * b, x))


def _smul_subadditive(inst, e, s, pool):
    (x,) = e
    a, b = s
    return inst.leq(inst.smul(a + b, x), inst.add(inst.smul(a, x), inst.smul(b, x))).holds


def _unit_scalar(inst, e, s, pool):
    (x,) = e
    return inst.equal(inst.smul(1.0, x), x)


def _zero_scalar(inst, e, s, pool):
    (x,) = e
    (a,) = s
    lhs = inst.equal(inst.smul(a, x), inst.zero)
    return lhs == (a == 0 or inst.equal(x, inst.zero))


def _primitive_cancellation(inst, e, s, pool):
    (x,) = e
    return inst.equal(inst.add(x, inst.smul(-1.0, x)), inst.zero) == bool(inst.is_primitive(x))


def _primitive_below(inst, e, s, pool):
    (x,) = e
    return bool(_primitives(inst, x, pool))


def _homogeneous(inst, e, s, pool):
    (x,) = e
    (a,) = s
    return inst.equal(inst.smul(a, x), inst.smul(abs(a), x))


def _convex(inst, e, s, pool):
    (x,) = e
    a, b = (abs(v) for v in s)
    return inst.equal(inst.smul(a + b, x), inst.add(inst.smul(a, x), inst.smul(b, x)))


def _balanced(inst, e, s, pool):
    (x,) = e
    (a,) = s
    return abs(a) > 1 or inst.leq(inst.smul(a, x), x).holds


def _single_primitive(inst, e, s, pool):
    (x,) = e
    return len(_primitives(inst, x, pool)) == 1


def _zero_primitive(inst, e, s, pool):
    (x,) = e
    prims = _primitives(inst, x, pool)
    return len(prims) == 1 and inst.equal(prims[0], inst.zero)


def _primitivity_cross_check(inst, e, s, pool):
    p, y = e
    if not inst.is_primitive(p):
        return True
    return not (inst.leq(y, p).holds and not inst.equal(y, p))


_PREDICATES = {
    "identity": _identity,
    "commutative": _commutative,
    "associative": _associative,
    "order_reflexive": _order_reflexive,
    "order_antisymmetric": _order_antisymmetric,
    "order_transitive": _order_transitive,
    "add_monotone": _add_monotone,
    "smul_monotone": _smul_monotone,
    "smul_distributes": _smul_distributes,
    "smul_compose": _smul_compose,
    "smul_subadditive": _smul_subadditive,
    "unit_scalar": _unit_scalar,
    "zero_scalar": _zero_scalar,
    "primitive_cancellation": _primitive_cancellation,
    "primitive_below": _primitive_below,
    "homogeneous": _homogeneous,
    "convex": _convex,
    "balanced": _balanced,
    "single_primitive": _single_primitive,
    "zero_primitive": _zero_primitive,
    "primitivity_cross_check": _primitivity_cross_check,
}

CHECK_AXIOM = {
    "identity": "A1",
    "commutative": "A1",
    "associative": "A1",
    "order_reflexive": "A2",
    "order_antisymmetric": "A2",
    "order_transitive": "A2",
    "add_monotone": "A2",
    "smul_monotone": "A2",
    "smul_distributes": "A3",
    "smul_compose": "A3",
    "smul_subadditive": "A3",
    "unit_scalar": "A3",
    "zero_scalar": "A4",
    "primitive_cancellation": "A5",
    "primitive_below": "A6",
}


def _dedupe(inst: EvsInstance, items: Sequence) -> list:
    out: list = []
    for item in items:
        if not any(inst.equal(item, seen) for seen in out):
            out.append(item)
    return out


def _primitives(inst: EvsInstance, x, pool: Sequence) -> list:
    candidates = list(pool)
    if inst.primitive_candidates is not None:
        candidates.extend(inst.primitive_candidates(x))
    found = [p for p in candidates if inst.is_primitive(p) and inst.leq(p, x).holds]
    return _dedupe(inst, found)


def primitives_of(instance: EvsInstance, x, candidate_pool: Sequence) -> list:
    """Primitive elements of ``candidate_pool`` (plus instance proposals) lying below ``x``.

    Raises :class:`A6Violation` when none is found.
    """
    found = _primitives(instance, x, candidate_pool)
    if not found:
        raise A6Violation(f"no primitive below {instance.describe(x)} in a pool of {len(candidate_pool)}")
    return found


def _memoized(inst: EvsInstance) -> EvsInstance:
    """Cache leq/equal/add/smul on hashable arguments; results are unchanged."""

    def cache2(fn):
        memo: dict = {}

        def wrapped(a, b):
            key = (a, b)
            try:
                return memo[key]
            except KeyError:
                value = memo[key] = fn(a, b)
                return value
            except TypeError:  # unhashable elements
                return fn(a, b)

        return wrapped

    return replace(
        inst,
        add=cache2(inst.add),
        smul=cache2(inst.smul),
        leq=cache2(inst.leq),
        equal=cache2(inst.equal),
    )


class _Runner:
    def __init__(self, inst: EvsInstance, seed: int, n_samples: int, n_scalars: int):
        if n_samples < 3:
            raise ValueError("n_samples must be at least 3")
        self.inst = _memoized(inst)
        self.seed = seed
        self.n_samples = n_samples
        self.samples = list(inst.sampler(seed, n_samples))
        if len(self.samples) < n_samples:
            raise InstanceError(
                f"sampler for {inst.carrier_id!r} yielded {len(self.samples)} < {n_samples} elements"
            )
        self.samples = self.samples[:n_samples]
        self.scalars = scalar_pool(seed, n_scalars)
        self.pool = self.samples + [inst.zero]

    def run(self, entry: CheckEntry, check: str, idx: tuple, scalars: tuple = ()) -> bool:
        elems = tuple(self.samples[i] for i in idx)
        ok = _PREDICATES[check](self.inst, elems, scalars, self.pool)
        entry.trials += 1
        if not ok and entry.counterexample is None:
            entry.status = "fail"
            entry.counterexample = Counterexample(check, elems, scalars, idx, self.seed, self.n_samples)
        return ok

    def leq_idx(self, i: int, j: int) -> bool:
        return self.inst.leq(self.samples[i], self.samples[j]).holds


def _axiom_entries(r: _Runner) -> dict[str, CheckEntry]:
    n = len(r.samples)
    idx = range(n)
    entries = {name: CheckEntry() for name in AXIOMS}
    leq = [[r.leq_idx(i, j) for j in idx] for i in idx]

    a1 = entries["A1"]
    for i in idx:
        r.run(a1, "identity", (i,))
    for i in idx:
        for j in idx:
            r.run(a1, "commutative", (i, j))
    for i in idx:
        for j in idx:
            for k in idx:
                r.run(a1, "associative", (i, j, k))

    a2 = entries["A2"]
    for i in idx:
        r.run(a2, "order_reflexive", (i,))
    for i in idx:
        for j in idx:
            r.run(a2, "order_antisymmetric", (i, j))
    for i in idx:
        for j in idx:
            if not leq[i][j]:
                a2.trials += n + len(r.scalars)
                continue
            for k in idx:
                if leq[j][k]:
                    r.run(a2, "order_transitive", (i, j, k))
                r.run(a2, "add_monotone", (i, j, k))
            for a in r.scalars:
                r.run(a2, "smul_monotone", (i, j), (a,))

    a3 = entries["A3"]
    for i in idx:
        for j in idx:
            for a in r.scalars:
                r.run(a3, "smul_distributes", (i, j), (a,))
    for i in idx:
        r.run(a3, "unit_scalar", (i,))
        for a in r.scalars:
            for b in r.scalars:
                r.run(a3, "smul_compose", (i,), (a, b))
                if r.run(a3, "smul_subadditive", (i,), (a, b)) and a3.strict_witness is None:
                    x = r.samples[i]
                    lhs = r.inst.smul(a + b, x)
                    rhs = r.inst.add(r.inst.smul(a, x), r.inst.smul(b, x))
                    if not r.inst.equal(lhs, rhs):
                        a3.strict_witness = Counterexample(
                            "smul_subadditive_strict", (x,), (a, b), (i,), r.seed, r.n_samples
                        )

    a4 = entries["A4"]
    for i in idx:
        for a in r.scalars:
            r.run(a4, "zero_scalar", (i,), (a,))

    a5 = entries["A5"]
    for i in idx:
        r.run(a5, "primitive_cancellation", (i,))

    a6 = entries["A6"]
    for i in idx:
        r.run(a6, "primitive_below", (i,))
    return entries


def _property_entries(r: _Runner) -> dict[str, CheckEntry]:
    idx = range(len(r.samples))
    k = len(r.scalars)
    entries = {name: CheckEntry() for name in PROPERTIES}
    unit_scalars = [a if abs(a) <= 1 else 1.0 / a for a in r.scalars]
    for i in idx:
        for j, a in enumerate(r.scalars):
            r.run(entries["homogeneous"], "homogeneous", (i,), (a,))
            r.run(entries["convex"], "convex", (i,), (abs(a), abs(r.scalars[(j + 1) % k])))
            r.run(entries["balanced"], "balanced", (i,), (unit_scalars[j],))
    for name in ("single_primitive", "zero_primitive"):
        entry = entries[name]
        for i in idx:
            r.run(entry, name, (i,))
            entry.trials += len(r.pool) - 1
    cross = entries["primitivity_cross_check"]
    for i in idx:
        if not r.inst.is_primitive(r.samples[i]):
            continue
        for j in idx:
            r.run(cross, "primitivity_cross_check", (i, j))
    if cross.passed:
        cross.status = "not_refuted"
    return entries


def check_axioms(
    instance: EvsInstance,
    seed: int,
    n_samples: int = 12,
    n_scalars: int = 8,
    properties: bool = True,
) -> AxiomReport:
    """Evaluate A1-A6 on every sampled combination; optionally the derived properties."""
    r = _Runner(instance, seed, n_samples, n_scalars)
    report = AxiomReport(instance.carrier_id, seed, n_samples, n_scalars, _axiom_entries(r), describe=instance.describe)
    if properties:
        report.properties = _property_entries(r)
    return report


def check_properties(instance: EvsInstance, seed: int, n_samples: int = 16, n_scalars: int = 8) -> dict[str, CheckEntry]:
    """Homogeneity, convexity, balancedness and primitivity properties on a sample."""
    return _property_entries(_Runner(instance, seed, n_samples, n_scalars))


def replay(instance: EvsInstance, cx: Counterexample) -> bool:
    """Re-evaluate a counterexample from scratch; True if it still violates its law."""
    pool = list(instance.sampler(cx.seed, cx.n_samples))[: cx.n_samples] + [instance.zero]
    return not _PREDICATES[cx.check](instance, cx.elements, cx.scalars, pool)
