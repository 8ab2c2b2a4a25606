"""Command-line front end: compare, check-axioms, witness, family-scan.

Exit codes: ``compare`` returns 0 (equivalent), 1 (not equivalent) or
2 (undetermined); ``check-axioms`` and ``family-scan`` return 0 on success
and 1 otherwise; malformed input returns 64 and internal numerical
failures return 3.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .comparing import ComparingConfig, ComparingResult, equivalence_verdict
from .errors import A6Violation, InstanceError, NormEvsError, ToleranceError
from .evs_core import EPS_EQ, check_axioms
from .instances import cone_instance, hyperspace_instance
from .literals import format_sparse, parse_norm
from .norm_evs import norms_instance
from .norms import fmt_num
from .report import dumps
from .witness import FAMILIES, N_CHECK, family_scan, nonequivalence_witness

EXIT_EQUIVALENT = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_UNDETERMINED = 2
EXIT_INTERNAL = 3
EXIT_USAGE = 64

INSTANCES = ("norms", "hyperspace", "cone")
# evaluated and analytic witness ratios must agree to this relative error
RATIO_RTOL = 1e-12


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    dim: int | None = None
    tol_opt: float = 1e-10
    eps_eq: float = EPS_EQ
    n_samples: int | None = None
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.dim is not None and self.dim < 1:
            raise UsageError("--dim must be >= 1")
        if not (self.tol_opt > 0 and self.eps_eq > 0):
            raise UsageError("tolerances must be positive")
        if self.n_samples is not None and self.n_samples < 1:
            raise UsageError("--samples must be positive")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x: float) -> str:
    return fmt_num(x) if x in (float("inf"), float("-inf")) else format(x, ".12g")


def _bracket(res: ComparingResult) -> str:
    if res.exact:
        return _num(res.lower)
    return f"[{_num(res.lower)}, {_num(res.upper)}]"


# -- commands -----------------------------------------------------------------


def cmd_compare(args, cfg: RunConfig) -> tuple[int, str]:
    f, g = parse_norm(args.f), parse_norm(args.g)
    config = ComparingConfig(
        dim=cfg.dim or 3,
        space=args.space,
        seed=cfg.seed,
        tol_opt=cfg.tol_opt,
        eps_eq=cfg.eps_eq,
        n_probes=cfg.n_samples or 1000,
    )
    verdict = equivalence_verdict(f, g, config)
    code = {True: EXIT_EQUIVALENT, False: EXIT_NOT_EQUIVALENT, None: EXIT_UNDETERMINED}[verdict.equivalent]
    data = verdict.to_dict()
    if cfg.format == "json":
        return code, dumps(data, indent=2)
    psi = verdict.psi
    lines = [
        f"f           {data['f']}",
        f"g           {data['g']}",
        f"space       {data['space']}",
        f"C_f(g)      {_bracket(verdict.c_fg)}  ({verdict.c_fg.status}, {verdict.c_fg.method})",
        f"C_g(f)      {_bracket(verdict.c_gf)}  ({verdict.c_gf.status}, {verdict.c_gf.method})",
        f"psi         {_num(psi.lower) if psi.is_point else f'[{_num(psi.lower)}, {_num(psi.upper)}]'}",
        f"equivalent  {data['equivalent'] if verdict.equivalent is None else ('yes' if verdict.equivalent else 'no')}",
    ]
    if verdict.sandwich is not None:
        lam, mu = verdict.sandwich
        lines.append(f"sandwich    {_num(lam)} f <= g <= {_num(mu)} f")
    fam = data["witness_family"]
    if fam is not None:
        lines.append(f"witness     {fam['family']}: {fam['direction']}, ratio {fam['formula']}")
        lines.append(f"            checked n=1..{fam['n_check']}, max rel error {_num(fam['max_rel_error'])}")
    return code, "\n".join(lines)


def _instance(name: str, dim: int | None):
    if name == "norms":
        return norms_instance(dim or 2)
    if name == "hyperspace":
        return hyperspace_instance(dim or 2)
    if name == "cone":
        return cone_instance(dim or 2)
    raise UsageError(f"unknown instance {name!r}; choose from {', '.join(INSTANCES)}")


def cmd_check_axioms(args, cfg: RunConfig) -> tuple[int, str]:
    inst = _instance(args.instance, cfg.dim)
    kwargs = {} if cfg.n_samples is None else {"n_samples": cfg.n_samples}
    report = check_axioms(inst, cfg.seed, **kwargs)
    # properties are informational; the exit code reflects the axioms only
    code = 0 if report.passed else 1
    if cfg.format == "json":
        return code, dumps(report.to_dict(), indent=2)
    lines = [f"instance {report.instance}  seed {report.seed}  samples {report.n_samples}  scalars {report.n_scalars}"]
    for title, entries in (("axiom", report.axioms), ("property", report.properties)):
        for name, entry in entries.items():
            lines.append(f"{title:<9}{name:<26}{entry.status:<12}{entry.trials:>8} trials")
            if entry.counterexample is not None:
                cx = entry.counterexample.to_dict(report.describe)
                scalars = ", ".join(_num(a) for a in cx["scalars"])
                lines.append(f"{'':<9}  {cx['check']}: {'; '.join(cx['elements'])}" + (f"  scalars {scalars}" if scalars else ""))
    lines.append("axioms pass" if report.passed else "axioms FAIL: " + ", ".join(report.failing_axioms()))
    return code, "\n".join(lines)


def cmd_witness(args, cfg: RunConfig) -> tuple[int, str]:
    if args.N < 1:
        raise UsageError("-N must be >= 1")
    fam = nonequivalence_witness(args.family, args.p, args.q)
    rows = []
    for n, x, ratio, formula in fam.rows(args.N):
        if abs(ratio - formula) > RATIO_RTOL * abs(formula):
            raise ToleranceError(f"n={n}: evaluated ratio {ratio!r} disagrees with formula {formula!r}")
        rows.append({"n": n, "vector": format_sparse(x), "ratio": ratio, "formula_ratio": formula})
    if cfg.format == "json":
        return 0, "\n".join(dumps(r) for r in rows)
    lines = [f"{fam.family_id}: {fam.direction}, ratio {fam.formula}", f"{'n':>4}  {'ratio':<20}{'formula':<20}vector"]
    for r in rows:
        lines.append(f"{r['n']:>4}  {_num(r['ratio']):<20}{_num(r['formula_ratio']):<20}{r['vector']}")
    return 0, "\n".join(lines)


def cmd_family_scan(args, cfg: RunConfig) -> tuple[int, str]:
    if args.N < 2:
        raise UsageError("-N must be >= 2")
    scan = family_scan(args.p_values, args.N)
    code = 0 if scan.all_certified else 1
    if cfg.format == "json":
        return code, dumps(scan.to_dict(), indent=2)
    labels = [fmt_num(p) for p in scan.p_values]
    short = {"nonequivalent_certified": "NE", "error": "ERR", None: "."}
    width = max([4] + [len(s) + 1 for s in labels])
    lines = ["".ljust(width) + "".join(s.rjust(width) for s in labels)]
    for label, row in zip(labels, scan.matrix()):
        lines.append(label.ljust(width) + "".join(short[c].rjust(width) for c in row))
    lines.append(f"{len(scan.pairs)} pairs, n = 1..{scan.n_check}, " + ("all certified" if scan.all_certified else "NOT all certified"))
    return code, "\n".join(lines)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--dim", type=int, default=None, help="ambient dimension (truncation size on c00)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=None, help="sample size (axiom harness) or probe count (compare)")
    common.add_argument("--tol", type=float, default=1e-10, help="step tolerance of the pattern search")
    common.add_argument("--eps", type=float, default=EPS_EQ, help="relative equality tolerance")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", default=None, help="write the report to this path instead of stdout")

    parser = _Parser(prog="normevs", description="Norms as an exponential vector space: comparing functions and equivalence.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="decide equivalence of two norms")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--space", choices=("rn", "c00"), default="rn")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("check-axioms", parents=[common], help="run the axiom harness on an instance")
    p.add_argument("instance", help="one of: " + ", ".join(INSTANCES))
    p.set_defaults(run=cmd_check_axioms)

    p = sub.add_parser("witness", parents=[common], help="print a witness sequence as JSON lines")
    p.add_argument("family", help="one of: " + ", ".join(FAMILIES))
    p.add_argument("-N", type=int, default=10)
    p.add_argument("-p", type=float, default=None)
    p.add_argument("-q", type=float, default=None)
    p.set_defaults(run=cmd_witness)

    p = sub.add_parser("family-scan", parents=[common], help="certify pairwise non-equivalence of p-norms on c00")
    p.add_argument("p_values", nargs="+", type=float)
    p.add_argument("-N", type=int, default=N_CHECK)
    p.set_defaults(run=cmd_family_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            seed=args.seed,
            dim=args.dim,
            tol_opt=args.tol,
            eps_eq=args.eps,
            n_samples=args.samples,
            output=args.output,
            format=args.format,
        )
        code, text = args.run(args, cfg)
    except (ToleranceError, A6Violation, InstanceError) as exc:
        print(f"normevs: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, NormEvsError, ValueError) as exc:
        print(f"normevs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code
