"""Norms of a linear space as an exponential vector space.

Comparing functions ``C_f(g) = inf g/f``, equivalence verdicts with
certified brackets, witness sequences for non-equivalence on c00, and a
property-based checker for the evs axioms.
"""
from __future__ import annotations

from .comparing import (
    ComparingConfig,
    ComparingResult,
    EquivalenceVerdict,
    Interval,
    SpectrumDescriptor,
    certified_lower,
    comparing_exact_pq,
    comparing_function,
    equivalence_verdict,
    minimize_ratio,
    pattern_search,
    psi,
    spectrum,
    topology_comparison,
)
from .errors import (
    A6Violation,
    BadParams,
    DimensionMismatch,
    InstanceError,
    InvalidP,
    NormEvsError,
    ParseError,
    PatternMismatch,
    ToleranceError,
    UnknownFamily,
    ZeroNormError,
)
from .evs_core import AxiomReport, EvsInstance, Ternary, check_axioms, check_properties, primitives_of, replay
from .instances import (
    ConePoint,
    FinitePointSet,
    cone_instance,
    halfray_instance,
    hyperspace_instance,
    mutant_instances,
)
from .literals import format_norm, parse_norm, parse_sparse, parse_vec
from .norm_evs import leq_norms, norms_instance
from .norms import (
    EUCLID,
    ONE,
    SUP,
    ZERO,
    Scale,
    SparseVec,
    Sum,
    Sup,
    WeightedP,
    Zero,
    evaluate,
    evs_add,
    evs_smul,
    normalize,
    p_norm,
)
from .witness import WitnessSequence, family_scan, nonequivalence_witness

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
