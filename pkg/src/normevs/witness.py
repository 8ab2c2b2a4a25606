"""Explicit sequences in c00 whose norm ratio tends to zero.

Each family fixes a numerator norm g and a denominator norm f and a
generator ``n -> x_n`` with an analytic ratio ``g(x_n)/f(x_n)``.  A ratio
tending to zero certifies ``C_f(g) = 0``, hence non-equivalence of f and g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, UnknownFamily
from .evs_core import EPS_EQ
from .norms import INF, NormExpr, SparseVec, evaluate, fmt_num, format_norm, p_norm

FAMILIES = ("c00_sup_vs_one", "hamel_sup_vs_one", "p_vs_q")
N_CHECK = 64


def _inv(p: float) -> float:
    return 0.0 if p == INF else 1.0 / p


@dataclass(frozen=True)
class WitnessCheck:
    n_check: int
    max_rel_error: float
    monotone: bool
    ok: bool


@dataclass(frozen=True)
class WitnessSequence:
    """Witness family driving ``C_{denominator}(numerator)`` to zero.

    ``p`` is the exponent of the numerator norm, ``q`` that of the
    denominator; the families here all satisfy ``p > q``.
    """

    family_id: str
    p: float
    q: float
    numerator: NormExpr = field(init=False)
    denominator: NormExpr = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "numerator", p_norm(self.p))
        object.__setattr__(self, "denominator", p_norm(self.q))

    @property
    def direction(self) -> str:
        return f"C_{{{format_norm(self.denominator)}}}({format_norm(self.numerator)}) -> 0"

    @property
    def formula(self) -> str:
        if self.family_id == "p_vs_q":
            return f"n^(1/{fmt_num(self.p)} - 1/{fmt_num(self.q)})"
        return "2/(n+1)"

    @property
    def exponent(self) -> float:
        return _inv(self.p) - _inv(self.q)

    def generator(self, n: int) -> SparseVec:
        if n < 1:
            raise ValueError("sequence index starts at 1")
        if self.family_id == "p_vs_q":
            # n e_1 + n e_2 + ... + n e_n
            return SparseVec(tuple((i, float(n)) for i in range(1, n + 1)))
        # e_1 + 2 e_2 + ... + n e_n
        return SparseVec(tuple((i, float(i)) for i in range(1, n + 1)))

    def ratio_formula(self, n: int) -> float:
        if self.family_id == "p_vs_q":
            return float(n) ** self.exponent
        return 2.0 / (n + 1)

    def evaluated_ratio(self, n: int) -> float:
        x = self.generator(n)
        return evaluate(self.numerator, x) / evaluate(self.denominator, x)

    def validate(self, n_check: int = N_CHECK, rtol: float = EPS_EQ) -> WitnessCheck:
        """Agreement of evaluated and analytic ratios for n = 1..n_check, plus strict decrease."""
        evaluated = np.array([self.evaluated_ratio(n) for n in range(1, n_check + 1)])
        formula = np.array([self.ratio_formula(n) for n in range(1, n_check + 1)])
        rel = float(np.max(np.abs(evaluated - formula) / formula))
        monotone = bool(np.all(np.diff(formula) < 0) and np.all(np.diff(evaluated) < 0))
        # the limit is analytic: 2/(n+1) -> 0, and n^e -> 0 for e < 0
        ok = rel <= rtol and monotone and self.exponent < 0
        return WitnessCheck(n_check, rel, monotone, ok)

    def rows(self, n_max: int):
        for n in range(1, n_max + 1):
            yield n, self.generator(n), self.evaluated_ratio(n), self.ratio_formula(n)

    def to_dict(self) -> dict:
        return {
            "family": self.family_id,
            "params": {"p": fmt_num(self.p), "q": fmt_num(self.q)},
            "f": format_norm(self.denominator),
            "g": format_norm(self.numerator),
            "direction": self.direction,
            "formula": self.formula,
        }


def nonequivalence_witness(family: str, p: float | None = None, q: float | None = None) -> WitnessSequence:
    """Build a registered witness family.

    ``c00_sup_vs_one`` and ``hamel_sup_vs_one`` use x_n = (1, 2, ..., n) and
    compare the sup-norm against the 1-norm; ``p_vs_q`` uses x_n = (n, ..., n)
    and needs ``p > q >= 1``.
    """
    if family not in FAMILIES:
        raise UnknownFamily(family)
    if family != "p_vs_q":
        return WitnessSequence(family, INF, 1.0)
    if p is None or q is None:
        raise BadParams("p_vs_q needs both p and q")
    p, q = float(p), float(q)
    if math.isnan(p) or math.isnan(q) or q < 1 or p <= q:
        raise BadParams(f"p_vs_q requires p > q >= 1, got p={fmt_num(p)}, q={fmt_num(q)}")
    return WitnessSequence(family, p, q)


def family_for(p: float, q: float) -> WitnessSequence:
    """The family certifying C_{||.||_q}(||.||_p) = 0 on c00 for p > q."""
    if p == INF and q == 1.0:
        return nonequivalence_witness("c00_sup_vs_one")
    return nonequivalence_witness("p_vs_q", p, q)


@dataclass
class FamilyScan:
    p_values: list[float]
    n_check: int
    pairs: list[dict]

    @property
    def all_certified(self) -> bool:
        return all(pair["status"] == "nonequivalent_certified" for pair in self.pairs)

    def matrix(self) -> list[list[str | None]]:
        k = len(self.p_values)
        grid: list[list[str | None]] = [[None] * k for _ in range(k)]
        for pair in self.pairs:
            i, j = pair["i"], pair["j"]
            grid[i][j] = grid[j][i] = pair["status"]
        return grid

    def to_dict(self) -> dict:
        return {
            "p_values": [fmt_num(p) for p in self.p_values],
            "n_check": self.n_check,
            "pairs": [{k: v for k, v in pair.items() if k not in ("i", "j")} for pair in self.pairs],
            "matrix": self.matrix(),
            "all_certified": self.all_certified,
        }


def family_scan(p_values, n_check: int = N_CHECK, rtol: float = EPS_EQ) -> FamilyScan:
    """Certify pairwise non-equivalence of the p-norms on c00 for every pair of distinct p."""
    ps = [float(p) for p in p_values]
    if any(math.isnan(p) or p < 1 for p in ps):
        raise BadParams("every p must be >= 1")
    if len(set(ps)) != len(ps):
        raise BadParams("p values must be distinct")
    pairs = []
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            hi, lo = max(ps[i], ps[j]), min(ps[i], ps[j])
            entry = {"i": i, "j": j, "p": fmt_num(hi), "q": fmt_num(lo)}
            try:
                check = nonequivalence_witness("p_vs_q", hi, lo).validate(n_check, rtol)
            except BadParams as exc:
                entry.update(status="error", detail=str(exc))
            else:
                entry.update(
                    status="nonequivalent_certified" if check.ok else "error",
                    max_rel_error=check.max_rel_error,
                    monotone=check.monotone,
                )
            pairs.append(entry)
    return FamilyScan(ps, n_check, pairs)
