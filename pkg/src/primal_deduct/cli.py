"""Command-line front end.

Subcommands: decide, transform, check-proof, countermodel, oracle, bench.
Exit codes follow one contract throughout: 0 for a positive verdict
(theorem, valid proof, countermodel found), 1 for the negative verdict,
2 for any usage, parse, or capacity error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass, field

from . import oracle as oracle_mod
from .calculi import LogicId, check_proof, parse_proof
from .pel0_decider import decide_pel0, normalize_free_of_equivalents
from .pl_decider import close, decide_pl
from .reductions import ReductionId, apply_reduction, reduce_clor_to_cl
from .semantics import (
    SearchBoundError,
    countermodel_search,
    decide_cl_truthtable,
    format_countermodel,
)
from .syntax import (
    BOT,
    And,
    Formula,
    Imp,
    ParseError,
    Sequent,
    Var,
    contains_or,
    formula_key,
    parse_sequent,
)

__all__ = ["main", "BenchReport", "scaling_input", "run_bench"]


class CliError(Exception):
    pass


def _parse_logic(text: str) -> LogicId:
    try:
        return LogicId.parse(text)
    except ValueError as e:
        raise CliError(str(e))


def _read_sequent(text: str) -> Sequent:
    try:
        return parse_sequent(text)
    except ParseError as e:
        raise CliError(str(e))


# ---------------------------------------------------------------------------
# decide


def _decide_one(logic: LogicId, sequent: Sequent, args) -> int:
    name = logic.name
    if name == "PL" and not logic.with_disjunction:
        verdict = decide_pl(sequent)
        if args.trace:
            for event in close(sequent.antecedents, {sequent.consequent}).events:
                print(event)
    elif name == "PEL0" and not logic.with_disjunction:
        if args.emit_normalized:
            ordered = sorted(sequent.antecedents, key=formula_key) + [sequent.consequent]
            for f, n in zip(ordered, normalize_free_of_equivalents(ordered)):
                print(f"{f}  =>  {n}")
        verdict = decide_pel0(sequent)
    elif name == "CL":
        verdict = decide_cl_truthtable(sequent)
    else:
        raise CliError(
            f"decide supports PL, PEL0, CL and CL+or; use the oracle subcommand for {logic}"
        )
    print("THEOREM" if verdict else "NON-THEOREM")
    if not verdict and args.countermodel:
        if contains_or(sequent.consequent) or any(contains_or(a) for a in sequent.antecedents):
            print("countermodel output needs a disjunction-free sequent", file=sys.stderr)
        else:
            found = countermodel_search(sequent, max_worlds=args.max_worlds)
            if found is None:
                print(f"no countermodel with at most {args.max_worlds} worlds")
            else:
                model, world = found
                sys.stdout.write(format_countermodel(model, world, sequent))
    return 0 if verdict else 1


def _cmd_decide(args) -> int:
    logic = _parse_logic(args.logic)
    if args.stdin_batch:
        status = 0
        for line in sys.stdin:
            line = line.strip()
            if not line:
                continue
            status = max(status, _decide_one(logic, _read_sequent(line), args))
        return status
    if args.sequent is None:
        raise CliError("a sequent argument is required without --stdin-batch")
    return _decide_one(logic, _read_sequent(args.sequent), args)


# ---------------------------------------------------------------------------
# transform


def _cmd_transform(args) -> int:
    sequent = _read_sequent(args.sequent)
    if args.reduction == "cl-to-clor":
        # Disjunction-free sequents pass through; everything else collapses
        # to the canonical falsehood.
        has_or = any(contains_or(f) for f in sequent.formulas())
        image = Sequent((), BOT) if has_or else sequent
    else:
        try:
            reduction = ReductionId(args.reduction)
        except ValueError:
            raise CliError(f"unknown reduction {args.reduction!r}")
        image = apply_reduction(reduction, sequent)
    print(image)
    return 0


# ---------------------------------------------------------------------------
# check-proof


def _cmd_check_proof(args) -> int:
    logic = _parse_logic(args.logic)
    try:
        with open(args.path, encoding="utf-8") as handle:
            proof = parse_proof(handle.read())
    except OSError as e:
        raise CliError(str(e))
    except ValueError as e:
        raise CliError(str(e))
    violation = check_proof(proof, logic)
    if violation is None:
        print(f"VALID under {logic}: {proof.conclusion}")
        return 0
    print(f"INVALID under {logic}: {violation}")
    return 1


# ---------------------------------------------------------------------------
# countermodel


def _cmd_countermodel(args) -> int:
    sequent = _read_sequent(args.sequent)
    try:
        found = countermodel_search(
            sequent, max_worlds=args.max_worlds, semantics=args.semantics
        )
    except SearchBoundError as e:
        raise CliError(str(e))
    if found is None:
        print(f"no countermodel with at most {args.max_worlds} worlds")
        return 1
    model, world = found
    sys.stdout.write(format_countermodel(model, world, sequent))
    return 0


# ---------------------------------------------------------------------------
# oracle


def _cmd_oracle(args) -> int:
    logic = _parse_logic(args.logic)
    sequent = _read_sequent(args.sequent)
    universe = oracle_mod.subformula_universe(sequent.formulas())
    if args.pad_universe:
        universe = oracle_mod.padded_universe(universe, args.pad_universe)
    config = oracle_mod.SaturationConfig(
        logic=logic,
        universe=universe,
        step_bound=args.step_bound,
        full_powerset=args.full_powerset,
    )
    result = oracle_mod.saturate(config, sequent.antecedents)
    if result.derives(sequent):
        print("THEOREM")
        return 0
    if result.partial:
        print("INCONCLUSIVE (step bound exceeded)")
        return 2
    print("NON-THEOREM")
    return 1


# ---------------------------------------------------------------------------
# bench


@dataclass
class BenchReport:
    suite: str
    seed: int
    rows: list[dict] = field(default_factory=list)
    exponent: float | None = None

    def as_text(self) -> str:
        lines = [f"suite = {self.suite}", f"seed = {self.seed}"]
        for row in self.rows:
            prefix = f"row.{row['n']}"
            for key, value in row.items():
                if key == "n":
                    continue
                rendered = f"{value:.6f}" if isinstance(value, float) else str(value)
                lines.append(f"{prefix}.{key} = {rendered}")
        if self.exponent is not None:
            lines.append(f"fit.exponent = {self.exponent:.3f}")
        return "\n".join(lines) + "\n"


def scaling_input(size: int, rng: random.Random) -> tuple[Formula, Formula]:
    """A right-leaning implication/conjunction tower of roughly ``size``
    nodes with planted interderivable-subformula patterns, plus a query.

    The planted patterns (a variable against its self-conjunctions) force
    the normalization loop to do real replacement work.
    """
    names = ("x", "y", "z")

    def pattern() -> Formula:
        v = Var(rng.choice(names))
        roll = rng.random()
        if roll < 0.4:
            return v
        if roll < 0.7:
            return And(v, v)
        if roll < 0.85:
            return And(And(v, v), v)
        return And(v, And(v, v))

    tower = pattern()
    while tower.length < size:
        make = And if rng.random() < 0.5 else Imp
        tower = make(pattern(), tower)
    query = pattern()
    for _ in range(3):
        query = (And if rng.random() < 0.5 else Imp)(pattern(), query)
    return tower, query


def _fit_exponent(points: list[tuple[int, float]]) -> float | None:
    import math

    usable = [(n, t) for n, t in points if t > 0]
    if len(usable) < 3:
        return None
    xs = [math.log(n) for n, _ in usable]
    ys = [math.log(t) for _, t in usable]
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    var = sum((x - mean_x) ** 2 for x in xs)
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return cov / var


def run_bench(suite: str, sizes: list[int], seed: int, timeout: float | None = None) -> BenchReport:
    report = BenchReport(suite, seed)
    if suite == "pel0-scaling":
        points = []
        for n in sizes:
            rng = random.Random(seed * 1_000_003 + n)
            tower, query = scaling_input(n, rng)
            start = time.perf_counter()
            normalized = normalize_free_of_equivalents([tower, query])
            normalize_time = time.perf_counter() - start
            start = time.perf_counter()
            decide_pel0(Sequent({tower}, query))
            decide_time = time.perf_counter() - start
            row = {
                "n": n,
                "input_length": tower.length + query.length,
                "normalized_length": sum(f.length for f in normalized),
                "normalize_seconds": normalize_time,
                "decide_seconds": decide_time,
            }
            timed_out = timeout is not None and normalize_time > timeout
            if timed_out:
                row["timed_out"] = "true"
            report.rows.append(row)
            if not timed_out:
                points.append((tower.length + query.length, normalize_time))
        report.exponent = _fit_exponent(points)
    elif suite == "reduction-blowup":
        from .reductions import reduce_il_to_ml, reduce_ml_to_pel1, reduce_ml_to_pel2

        reductions = [
            ("clor-to-cl", reduce_clor_to_cl),
            ("il-to-ml", reduce_il_to_ml),
            ("ml-to-pel1", reduce_ml_to_pel1),
            ("ml-to-pel2", reduce_ml_to_pel2),
        ]
        for n in sizes:
            rng = random.Random(seed * 1_000_003 + n)
            tower, query = scaling_input(n, rng)
            source = Sequent({tower}, query)
            row = {"n": n, "input_length": source.total_length}
            for name, fn in reductions:
                image = fn(source)
                row[f"{name}.output_length"] = image.total_length
            report.rows.append(row)
    else:
        raise CliError(f"unknown suite {suite!r}")
    return report


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if len(sizes) < 3 or sizes != sorted(sizes):
        raise CliError("--sizes needs at least three ascending entries")
    report = run_bench(args.suite, sizes, args.seed, args.timeout_per_size)
    sys.stdout.write(report.as_text())
    return 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primal-deduct",
        description="decision procedures and proof tools for primal logic and friends",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide derivability (PL, PEL0, CL, CL+or)")
    p.add_argument("--logic", required=True)
    p.add_argument("sequent", nargs="?")
    p.add_argument("--trace", action="store_true", help="print closure events (PL)")
    p.add_argument("--countermodel", action="store_true", help="attempt refutation output")
    p.add_argument("--emit-normalized", action="store_true", help="print the normalized forest (PEL0)")
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--stdin-batch", action="store_true", help="read one sequent per line")
    p.set_defaults(handler=_cmd_decide)

    p = sub.add_parser("transform", help="apply a reduction to a sequent")
    p.add_argument("--reduction", required=True,
                   choices=[r.value for r in ReductionId] + ["cl-to-clor"])
    p.add_argument("sequent")
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("check-proof", help="validate a proof file under a logic")
    p.add_argument("--logic", required=True)
    p.add_argument("path")
    p.set_defaults(handler=_cmd_check_proof)

    p = sub.add_parser("countermodel", help="search for a refuting model")
    p.add_argument("sequent")
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--semantics", choices=["free", "standard"], default="free")
    p.set_defaults(handler=_cmd_countermodel)

    p = sub.add_parser("oracle", help="bounded saturation for any catalogued logic")
    p.add_argument("--logic", required=True)
    p.add_argument("sequent")
    p.add_argument("--step-bound", type=int, default=None)
    p.add_argument("--pad-universe", type=int, default=None,
                   help="pad the universe with combinations up to this length")
    p.add_argument("--full-powerset", action="store_true")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("bench", help="scaling and blowup measurements")
    p.add_argument("--suite", required=True, choices=["pel0-scaling", "reduction-blowup"])
    p.add_argument("--sizes", default="100,200,400,800,1600")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout-per-size", type=float, default=None)
    p.set_defaults(handler=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, oracle_mod.CapExceededError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
