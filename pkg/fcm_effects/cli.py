import argparse
import logging
import sys

import pandas as pd

from . import bench, formats, generator, solver
from .config import DEFAULT_THREADS, EXHAUSTIVE_MAX_N, MAX_ITER, MIN_MAGNITUDE, OUTPUT_DIR, TOLERANCE, configure_logging
from .dynamics import make_activation, simulate
from .errors import (
    BudgetExceeded,
    ConceptOutOfRange,
    DimensionMismatch,
    GraphFormatError,
    InvalidPlan,
    InvalidSpec,
    SameConcept,
)
from .verify import verify_equivalence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with EXIT_USAGE instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_frame(frame: pd.DataFrame, out, header: bool = True):
    if out:
        formats.ensure_parent(out)
        frame.to_csv(out, index=False, header=header, lineterminator="\n")
        print(f"Wrote {out}")
    else:
        frame.to_csv(sys.stdout, index=False, header=header, lineterminator="\n")


def cmd_generate(args):
    spec = generator.make_spec(args.n, args.density, args.seed, args.min_magnitude)
    graph = generator.generate(spec)
    if args.format == "matrix":
        formats.write_matrix(graph.to_dense_matrix(), args.out)
        formats.write_sidecar(args.out, dict(spec.model_dump(), generator=generator.BIT_GENERATOR))
    else:
        generator.write_generated(graph, spec, args.out)
    print(f"Generated FCM: n={graph.n}, e={graph.e}, saved to {args.out}")
    return EXIT_OK


def cmd_analyze(args):
    graph = formats.read_graph(args.input, args.format)
    if args.method == "exhaustive" and graph.n > EXHAUSTIVE_MAX_N and not args.force:
        logger.warning(f"Refusing exhaustive enumeration on n={graph.n} (> {EXHAUSTIVE_MAX_N}); pass --force to run anyway")
        print(f"Refusing --method exhaustive on {graph.n} concepts; use --force to override", file=sys.stderr)
        return EXIT_USAGE

    if args.all_pairs:
        values = solver.total_effects_all_pairs(graph, args.method, n_jobs=args.threads)
        _write_frame(pd.DataFrame(values), args.out, header=False)
        return EXIT_OK

    if args.target is None:
        print("analyze: one of --target or --all-pairs is required", file=sys.stderr)
        return EXIT_USAGE

    if args.source is not None:
        results = [solver.total_effect(graph, args.source, args.target, args.method)]
    else:
        results = solver.total_effects_to_target(graph, args.target, args.method, n_jobs=args.threads)

    frame = pd.DataFrame([r.as_row() for r in results], columns=["source", "value", "critical_index", "path_found"])
    frame["critical_index"] = frame["critical_index"].astype("Int64")
    _write_frame(frame, args.out)
    return EXIT_OK


def cmd_simulate(args):
    graph = formats.read_graph(args.input, args.format)
    initial = formats.read_state(args.initial)
    activation = make_activation(args.activation, args.steepness)
    outcome = simulate(graph, initial, activation, max_iter=args.max_iter, tolerance=args.tolerance)
    if args.out:
        formats.write_trajectory(outcome.trajectory, args.out)
    where = f" at t={outcome.fixed_point_at}" if outcome.converged else ""
    print(f"Status: {outcome.status}{where} after {outcome.iterations_run} iterations")
    print("Final state: " + ",".join(repr(float(v)) for v in outcome.final_state))
    return EXIT_OK


def cmd_bench(args):
    plan = bench.make_plan(
        full_scale=args.full_scale,
        algorithms=args.algorithms,
        sizes=args.sizes,
        exhaustive_sizes=args.exhaustive_sizes,
        densities=args.densities,
        trials=args.trials,
        base_seed=args.base_seed,
        target_policy=args.target_policy,
        budget_s=args.budget,
        warmup=not args.no_warmup,
        allow_large_exhaustive=args.force,
        n_jobs=args.threads,
    )
    records = bench.run_plan(plan)
    paths = bench.write_outputs(records, args.out_dir)
    _, overall = bench.summarize(records)
    print(overall.to_string(index=False))
    print(f"Records: {paths['bench']}\nSummary: {paths['summary']}")
    return EXIT_OK


def cmd_verify(args):
    report = verify_equivalence(args.graphs, args.seed, args.max_n)
    for mismatch in report.mismatches:
        print(f"MISMATCH {mismatch.describe()}")
    print(f"Verified {report.graphs} graphs, {report.pairs} ordered pairs, {len(report.mismatches)} mismatches")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    common.add_argument('-q', '--quiet', action='store_true', help='Only warnings and errors')
    common.add_argument('--threads', type=int, default=DEFAULT_THREADS,
                        help='Worker threads (default: FCM_THREADS or 1)')

    p = _Parser(prog='fcm_effects', description='Total causal effects in fuzzy cognitive maps')
    sp = p.add_subparsers(dest='cmd', parser_class=_Parser)

    p_gen = sp.add_parser('generate', parents=[common], help='Generate a seeded random FCM')
    p_gen.add_argument('--n', type=int, required=True, help='Number of concepts')
    p_gen.add_argument('--density', type=float, required=True, help='Edge density in (0, 1]')
    p_gen.add_argument('--seed', type=int, required=True, help='Generator seed')
    p_gen.add_argument('--min-magnitude', type=float, default=MIN_MAGNITUDE, help='Smallest |weight|')
    p_gen.add_argument('--format', choices=formats.FORMATS, default='edgelist', help='Output format')
    p_gen.add_argument('--out', required=True, help='Output CSV path')
    p_gen.set_defaults(func=cmd_generate)

    p_an = sp.add_parser('analyze', parents=[common], help='Compute total causal effects')
    p_an.add_argument('input', help='Graph CSV (matrix or edge list)')
    p_an.add_argument('--format', choices=formats.FORMATS, default=None, help='Input format (default: detect)')
    p_an.add_argument('--method', choices=solver.METHODS, default='binary', help='Solver')
    p_an.add_argument('--target', type=int, help='0-based target concept')
    p_an.add_argument('--source', type=int, help='0-based source concept (single pair, needs --target)')
    p_an.add_argument('--all-pairs', action='store_true', help='Write the full n x n effect matrix')
    p_an.add_argument('--force', action='store_true', help='Allow exhaustive enumeration on large maps')
    p_an.add_argument('--out', help='Output CSV path (default: stdout)')
    p_an.set_defaults(func=cmd_analyze)

    p_sim = sp.add_parser('simulate', parents=[common], help='Run FCM inference to a fixed point')
    p_sim.add_argument('input', help='Graph CSV (matrix or edge list)')
    p_sim.add_argument('--format', choices=formats.FORMATS, default=None, help='Input format (default: detect)')
    p_sim.add_argument('--initial', required=True, help='Single-row CSV with the initial state')
    p_sim.add_argument('--activation', default='sigmoid',
                       choices=['sigmoid', 'tanh', 'hyperbolic_tangent', 'bivalent', 'trivalent'])
    p_sim.add_argument('--steepness', type=float, default=1.0, help='Lambda for sigmoid / tanh')
    p_sim.add_argument('--max-iter', type=int, default=MAX_ITER, help='Iteration cap T')
    p_sim.add_argument('--tolerance', type=float, default=TOLERANCE, help='Max-norm convergence threshold')
    p_sim.add_argument('--out', help='Trajectory CSV path')
    p_sim.set_defaults(func=cmd_simulate)

    p_b = sp.add_parser('bench', parents=[common], help='Time the solvers on random FCMs')
    p_b.add_argument('--algorithms', nargs='+', choices=list(bench.ALGORITHMS), default=None)
    p_b.add_argument('--sizes', type=int, nargs='+', default=None, help='n for binary / linear')
    p_b.add_argument('--exhaustive-sizes', type=int, nargs='+', default=None, help='n for exhaustive')
    p_b.add_argument('--densities', type=float, nargs='+', default=None)
    p_b.add_argument('--trials', type=int, default=None, help='Graphs per cell (default 10)')
    p_b.add_argument('--base-seed', type=int, default=None)
    p_b.add_argument('--target-policy', choices=['last_concept', 'all_pairs'], default=None)
    p_b.add_argument('--budget', type=float, default=None, help='Seconds per timed solve')
    p_b.add_argument('--no-warmup', action='store_true', help='Skip the untimed warm-up solve')
    p_b.add_argument('--full-scale', action='store_true', help='40 trials and n=1000')
    p_b.add_argument('--force', action='store_true', help='Allow exhaustive sizes above the limit')
    p_b.add_argument('--out-dir', default=OUTPUT_DIR, help='Directory for the CSV outputs')
    p_b.set_defaults(func=cmd_bench)

    p_v = sp.add_parser('verify', parents=[common], help='Check solvers against exhaustive enumeration')
    p_v.add_argument('--graphs', type=int, default=200, help='Number of random maps (R)')
    p_v.add_argument('--seed', type=int, default=0, help='Corpus seed')
    p_v.add_argument('--max-n', type=int, default=9, help='Largest map size (>= 3)')
    p_v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    p = _build_parser()
    args = p.parse_args(argv)
    if not hasattr(args, 'func'):
        p.print_help()
        return EXIT_USAGE

    level = 'DEBUG' if args.verbose else 'WARNING' if args.quiet else None
    configure_logging(level)
    if args.threads < 1:
        p.error('--threads must be at least 1')
    if args.cmd == 'verify' and (args.graphs < 0 or args.max_n < 3):
        p.error('verify needs --graphs >= 0 and --max-n >= 3')

    try:
        return args.func(args)
    except (FileNotFoundError, GraphFormatError, DimensionMismatch) as e:
        logger.error(str(e))
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (SameConcept, ConceptOutOfRange, InvalidSpec, InvalidPlan) as e:
        logger.error(str(e))
        print(f"Usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        logger.error(str(e))
        print(f"Budget exceeded: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
