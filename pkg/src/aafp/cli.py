"""Command-line experiment runner.

Subcommands:
  run     one problem, one solver, optional CSV trace + figure
  align   periodic residual alignment check against a parallel GMRES run
  table1  the Chebyshev bound table as text or CSV
  race    several solvers on one problem, summary table + overlay figure

Configuration comes from flags or from a plain key=value file given with
--config; explicit flags override file values. Exit codes: 0 on success
(convergence for `run`, alignment within tolerance for `align`, a table
produced for `table1`/`race`), 2 when a solve legitimately fails to
converge, 3 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .alternating import ScheduleConfig, aafp_solve
from .anderson import DEFAULT_UNBOUNDED_CAP, UNBOUNDED, WindowCapError, aa_solve
from .bounds import bound_table, bound_table_text
from .fixedpoint import (
    DivergenceError,
    FixedPointMap,
    IterationTrace,
    StopRule,
    fp_solve,
    richardson_map,
)
from .gmres import GmresResult, gmres_solve
from .linalg import (
    CsrMatrix,
    MatrixMarketError,
    jacobi_scale,
    mat_vec,
    norm2,
    read_matrix_market,
)
from .problems import (
    LogisticProblem,
    SeededRng,
    build_permutation_system,
    build_poisson_fd,
    gd_map,
    lasso_admm_map,
    nnls_admm_map,
    parse_libsvm,
    sparse_random,
    tv_admm_map,
)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_CONFIG = 3

LINEAR_PROBLEMS = ("permutation", "poisson", "mtx")
MAP_PROBLEMS = ("tv", "lasso", "nnls", "logistic")


class CliError(Exception):
    """Configuration problem detected after argument parsing."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 by default; the CLI contract reserves
    # 2 for non-convergence, so steer usage errors to 3
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def parse_window(text: str) -> int | float:
    """Window size: a nonnegative integer, or the literal 'inf'."""
    if text.strip().lower() == "inf":
        return UNBOUNDED
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"window must be an integer or 'inf', got {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError("window must be nonnegative")
    return value


@dataclass(frozen=True)
class Problem:
    """A built problem instance: a fixed-point map, plus the linear
    system behind it when there is one (needed by GMRES and align)."""

    name: str
    map: FixedPointMap
    matrix: CsrMatrix | None = None
    rhs: np.ndarray | None = None


def build_problem(args: argparse.Namespace) -> Problem:
    """Construct the problem named by args, consuming its parameters."""
    name = args.problem
    if name == "permutation":
        a, b = build_permutation_system(args.n)
    elif name == "poisson":
        a, b, _ = build_poisson_fd(args.n)
    elif name == "mtx":
        if not args.mtx:
            raise CliError("--problem mtx requires --mtx PATH")
        a = read_matrix_market(args.mtx)
        if a.rows != a.cols:
            raise CliError("matrix file must be square")
        # right-hand side convention: exact solution of all ones
        b = mat_vec(a, np.ones(a.cols))
    elif name == "tv":
        rng = SeededRng(args.seed)
        x_hat = rng.normal(args.n)
        beta = args.beta if args.beta is not None else 0.001 * float(np.abs(x_hat).max())
        return Problem(name, tv_admm_map(x_hat, beta, args.mu if args.mu is not None else 10.0))
    elif name == "lasso":
        rng = SeededRng(args.seed)
        c = sparse_random(rng, args.rows, args.cols, args.density)
        x_hat = rng.normal(args.rows)
        beta = args.beta if args.beta is not None else 1.0
        return Problem(name, lasso_admm_map(c, x_hat, beta, args.mu if args.mu is not None else 10.0))
    elif name == "nnls":
        rng = SeededRng(args.seed)
        c = sparse_random(rng, args.rows, args.cols, args.density)
        x_hat = rng.normal(args.rows)
        return Problem(name, nnls_admm_map(c, x_hat, args.mu if args.mu is not None else 2.0))
    elif name == "logistic":
        if args.libsvm:
            features, labels = parse_libsvm(args.libsvm)
        else:
            features, labels = synthetic_logistic_data(args.seed, args.rows, args.cols, args.density)
        problem = LogisticProblem(features, labels, args.reg)
        return Problem(name, gd_map(problem, args.eta))
    else:
        raise CliError(f"unknown problem {name!r}")

    if args.jacobi:
        a, b = jacobi_scale(a, b)
    return Problem(name, richardson_map(a, b), matrix=a, rhs=b)


def synthetic_logistic_data(
    seed: int, rows: int, cols: int, density: float
) -> tuple[CsrMatrix, np.ndarray]:
    """Separable-ish two-class data from the seeded generator."""
    rng = SeededRng(seed)
    features = sparse_random(rng, rows, cols, density)
    direction = rng.normal(cols)
    margins = mat_vec(features, direction) + 0.5 * rng.normal(rows)
    labels = np.where(margins >= 0.0, 1.0, -1.0)
    return features, labels


def initial_guess(args: argparse.Namespace, dimension: int) -> np.ndarray:
    if args.x0 == "ones":
        return np.ones(dimension)
    return np.zeros(dimension)


def make_stop(args: argparse.Namespace) -> StopRule:
    return StopRule(rel_tol=args.rtol, abs_tol=args.atol, max_iters=args.max_iters)


@dataclass(frozen=True)
class SolverOutcome:
    """Uniform view of one solver run for tables, CSV, and figures."""

    label: str
    residual_norms: list[float]
    step_kinds: list[str]
    step_elapsed: list[float]
    iterations: int
    converged: bool
    elapsed: float


def run_solver(spec: str, problem: Problem, x0: np.ndarray, stop: StopRule,
               rank_tol: float, unbounded_cap: int) -> SolverOutcome:
    """Run one solver spec ('fp', 'aa:m', 'aafp:m:s:t', 'gmres')."""
    parts = spec.split(":")
    kind = parts[0]
    if kind == "fp":
        if len(parts) != 1:
            raise CliError(f"solver spec {spec!r}: fp takes no parameters")
        _, trace = fp_solve(problem.map, x0, stop)
        return _from_trace(spec, trace)
    if kind == "aa":
        if len(parts) != 2:
            raise CliError(f"solver spec {spec!r}: expected aa:m")
        m = parse_window(parts[1])
        _, trace = aa_solve(problem.map, x0, m, stop, rank_tol=rank_tol, unbounded_cap=unbounded_cap)
        return _from_trace(spec, trace)
    if kind == "aafp":
        if len(parts) != 4:
            raise CliError(f"solver spec {spec!r}: expected aafp:m:s:t")
        m = parse_window(parts[1])
        try:
            s, t = int(parts[2]), int(parts[3])
        except ValueError as exc:
            raise CliError(f"solver spec {spec!r}: s and t must be integers") from exc
        cfg = ScheduleConfig(m=m, s=s, t=t, rank_tol=rank_tol, unbounded_cap=unbounded_cap)
        _, trace = aafp_solve(problem.map, x0, cfg, stop)
        return _from_trace(spec, trace)
    if kind == "gmres":
        if len(parts) != 1:
            raise CliError(f"solver spec {spec!r}: gmres takes no parameters")
        if problem.matrix is None:
            raise CliError(f"gmres requires a linear problem, not {problem.name!r}")
        result = gmres_solve(problem.matrix, problem.rhs, x0, stop)
        return _from_gmres(spec, result)
    raise CliError(f"unknown solver {kind!r} (choose fp, aa, aafp, gmres)")


def _from_trace(label: str, trace: IterationTrace) -> SolverOutcome:
    return SolverOutcome(
        label=label,
        residual_norms=list(trace.residual_norms),
        step_kinds=list(trace.step_kinds),
        step_elapsed=list(trace.step_elapsed),
        iterations=trace.iterations,
        converged=trace.converged,
        elapsed=trace.elapsed,
    )


def _from_gmres(label: str, result: GmresResult) -> SolverOutcome:
    return SolverOutcome(
        label=label,
        residual_norms=list(result.residual_norms),
        step_kinds=["GMRES"] * result.iterations,
        step_elapsed=list(result.step_elapsed),
        iterations=result.iterations,
        converged=result.converged,
        elapsed=result.elapsed,
    )


def write_trace_csv(path: str, outcome: SolverOutcome) -> None:
    """One row per recorded residual; row 0 is the initial state.

    Floats are written with repr so the numeric columns round-trip
    exactly; iteration, step_kind, and residual_norm are deterministic
    for a fixed configuration, elapsed_seconds is wall clock.
    """
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "step_kind", "residual_norm", "elapsed_seconds"])
        for i, r_norm in enumerate(outcome.residual_norms):
            kind = "init" if i == 0 else outcome.step_kinds[i - 1]
            elapsed = outcome.step_elapsed[i] if i < len(outcome.step_elapsed) else ""
            writer.writerow([i, kind, repr(float(r_norm)), repr(float(elapsed)) if elapsed != "" else ""])


def _plot_path(csv_path: str) -> str:
    return str(Path(csv_path).with_suffix(".png"))


def cmd_run(args: argparse.Namespace) -> int:
    problem = build_problem(args)
    x0 = initial_guess(args, problem.map.dimension)
    stop = make_stop(args)
    try:
        outcome = run_solver(args.solver_spec(), problem, x0, stop, args.rank_tol, args.cap)
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    rel = outcome.residual_norms[-1] / outcome.residual_norms[0] if outcome.residual_norms[0] else 0.0
    print(
        f"problem={problem.name} solver={outcome.label} iterations={outcome.iterations} "
        f"converged={outcome.converged} final_rel_residual={rel:.3e} elapsed={outcome.elapsed:.3f}s"
    )
    if args.csv:
        write_trace_csv(args.csv, outcome)
        print(f"trace written to {args.csv}")
        if not args.no_plot:
            from .plotting import save_residual_plot

            png = _plot_path(args.csv)
            save_residual_plot(
                png,
                [(outcome.label, outcome.residual_norms)],
                title=f"{problem.name}: residual history",
            )
            print(f"figure written to {png}")
    return EXIT_OK if outcome.converged else EXIT_NOT_CONVERGED


@dataclass(frozen=True)
class AlignmentReport:
    """Worst relative mismatch between the scheduled solver's residual
    at each period boundary and the matching transformed GMRES residual."""

    max_mismatch: float
    boundaries_checked: int
    solver_iterations: int
    gmres_iterations: int


def check_alignment(
    a: CsrMatrix,
    b: np.ndarray,
    x0: np.ndarray,
    t: int,
    stop: StopRule,
    floor: float = 1e-10,
) -> AlignmentReport:
    """Compare the period-boundary residuals of the alternating solver
    with an unbounded window (s = 1) against a parallel GMRES run.

    At every boundary k = j(t+1) the scheduled residual norm should
    match ||M r|| where r is the GMRES residual vector one iteration
    earlier and M maps r to r - A r. Boundaries are only scored while
    the GMRES history is strictly decreasing and above floor relative
    to the initial residual, where the comparison is meaningful in
    floating point.
    """
    q = richardson_map(a, b)
    cap = max(DEFAULT_UNBOUNDED_CAP, a.rows + 1)
    cfg = ScheduleConfig(m=UNBOUNDED, s=1, t=t, unbounded_cap=cap)
    _, trace = aafp_solve(q, x0, cfg, stop)
    gmres = gmres_solve(a, b, x0, stop, keep_iterates=True)

    period = t + 1
    r0 = gmres.residual_norms[0]
    worst = 0.0
    checked = 0
    j = 1
    while True:
        k = j * period
        if k > trace.iterations or k - 1 > gmres.iterations:
            break
        # strictly decreasing GMRES history up to k-1, above the floor
        usable = all(
            gmres.residual_norms[i + 1] < gmres.residual_norms[i] for i in range(k - 1)
        ) and gmres.residual_norms[k - 1] > floor * r0
        if not usable:
            break
        r_g = b - mat_vec(a, gmres.iterates[k - 1])
        reference = norm2(r_g - mat_vec(a, r_g))
        mismatch = abs(trace.residual_norms[k] - reference) / reference
        worst = max(worst, mismatch)
        checked += 1
        j += 1
    return AlignmentReport(worst, checked, trace.iterations, gmres.iterations)


def cmd_align(args: argparse.Namespace) -> int:
    if args.problem not in LINEAR_PROBLEMS:
        raise CliError(f"align requires a linear problem, not {args.problem!r}")
    problem = build_problem(args)
    x0 = initial_guess(args, problem.map.dimension)
    stop = make_stop(args)
    report = check_alignment(problem.matrix, problem.rhs, x0, args.t, stop, floor=args.floor)
    print(
        f"problem={problem.name} t={args.t} boundaries_checked={report.boundaries_checked} "
        f"max_relative_mismatch={report.max_mismatch:.3e} "
        f"solver_iterations={report.solver_iterations} gmres_iterations={report.gmres_iterations}"
    )
    ok = report.boundaries_checked >= 1 and report.max_mismatch <= args.tol
    print("alignment ok" if ok else "alignment FAILED")
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def cmd_table1(args: argparse.Namespace) -> int:
    print(bound_table_text())
    if args.csv:
        with open(args.csv, "w", newline="", encoding="ascii") as handle:
            writer = csv.writer(handle)
            writer.writerow(["a", "b", "m", "c_scaled", "eps_scaled", "cell"])
            for row in bound_table():
                for cell in row:
                    a, b = cell.interval
                    writer.writerow(
                        [repr(a), repr(b), cell.m, repr(cell.c_scaled), repr(cell.eps_scaled), cell.formatted()]
                    )
        print(f"table written to {args.csv}")
    return EXIT_OK


def cmd_race(args: argparse.Namespace) -> int:
    problem = build_problem(args)
    x0 = initial_guess(args, problem.map.dimension)
    stop = make_stop(args)
    specs = [s.strip() for s in args.solvers.split(",") if s.strip()]
    if not specs:
        raise CliError("--solvers must name at least one solver")

    outcomes: list[SolverOutcome] = []
    for spec in specs:
        try:
            outcomes.append(run_solver(spec, problem, x0, stop, args.rank_tol, args.cap))
        except DivergenceError as exc:
            trace = exc.trace
            outcomes.append(
                SolverOutcome(
                    label=spec,
                    residual_norms=list(trace.residual_norms),
                    step_kinds=list(trace.step_kinds),
                    step_elapsed=list(trace.step_elapsed),
                    iterations=trace.iterations,
                    converged=False,
                    elapsed=trace.elapsed,
                )
            )

    width = max(len(o.label) for o in outcomes)
    print(f"problem={problem.name} rel_tol={stop.rel_tol:g} max_iters={stop.max_iters}")
    print(f"{'solver':<{width}}  {'iterations':>10}  {'converged':>9}  {'final_rel':>10}  {'seconds':>8}")
    for o in outcomes:
        rel = o.residual_norms[-1] / o.residual_norms[0] if o.residual_norms and o.residual_norms[0] else float("nan")
        print(
            f"{o.label:<{width}}  {o.iterations:>10}  {str(o.converged):>9}  {rel:>10.3e}  {o.elapsed:>8.3f}"
        )

    if args.csv:
        with open(args.csv, "w", newline="", encoding="ascii") as handle:
            writer = csv.writer(handle)
            writer.writerow(["solver", "iterations", "converged", "final_relative_residual", "elapsed_seconds"])
            for o in outcomes:
                rel = o.residual_norms[-1] / o.residual_norms[0] if o.residual_norms and o.residual_norms[0] else float("nan")
                writer.writerow([o.label, o.iterations, o.converged, repr(rel), repr(o.elapsed)])
        print(f"summary written to {args.csv}")
        if not args.no_plot:
            from .plotting import save_residual_plot

            png = _plot_path(args.csv)
            save_residual_plot(
                png,
                [(o.label, o.residual_norms) for o in outcomes],
                title=f"{problem.name}: residual histories",
            )
            print(f"figure written to {png}")
    return EXIT_OK


def _add_problem_flags(parser: argparse.ArgumentParser, problems: tuple[str, ...]) -> None:
    parser.add_argument("--problem", required=True, choices=problems)
    parser.add_argument("--n", type=int, default=26, help="size for permutation/poisson/tv")
    parser.add_argument("--rows", type=int, default=150)
    parser.add_argument("--cols", type=int, default=300)
    parser.add_argument("--density", type=float, default=0.01)
    parser.add_argument("--beta", type=float, default=None, help="regularization weight (problem default if omitted)")
    parser.add_argument("--mu", type=float, default=None, help="ADMM penalty (problem default if omitted)")
    parser.add_argument("--reg", type=float, default=1e-2, help="logistic ridge weight")
    parser.add_argument("--eta", type=float, default=1.0, help="gradient step length")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--mtx", type=str, default=None, help="Matrix Market file for --problem mtx")
    parser.add_argument("--libsvm", type=str, default=None, help="LIBSVM data file for --problem logistic")
    parser.add_argument("--jacobi", action="store_true", help="diagonally scale a linear system first")
    parser.add_argument("--x0", choices=("zeros", "ones"), default="zeros")


def _add_stop_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rtol", type=float, default=1e-8)
    parser.add_argument("--atol", type=float, default=0.0)
    parser.add_argument("--max-iters", type=int, default=1000)
    parser.add_argument("--rank-tol", type=float, default=1e-14)
    parser.add_argument("--cap", type=int, default=DEFAULT_UNBOUNDED_CAP, help="hard cap for unbounded windows")


def build_parser() -> _Parser:
    parser = _Parser(prog="aafp", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", type=str, default=None, help="key=value file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one solver on one problem")
    _add_problem_flags(run, LINEAR_PROBLEMS + MAP_PROBLEMS)
    run.add_argument("--solver", required=True, choices=("fp", "aa", "aafp", "gmres"))
    run.add_argument("--m", type=parse_window, default=5, help="window size, integer or 'inf'")
    run.add_argument("--s", type=int, default=1)
    run.add_argument("--t", type=int, default=0)
    _add_stop_flags(run)
    run.add_argument("--csv", type=str, default=None, help="write the iteration trace here")
    run.add_argument("--no-plot", action="store_true", help="skip the figure next to the CSV")
    run.set_defaults(handler=cmd_run)

    align = sub.add_parser("align", help="check scheduled residuals against GMRES")
    _add_problem_flags(align, LINEAR_PROBLEMS)
    align.add_argument("--t", type=int, default=3)
    align.add_argument("--tol", type=float, default=1e-6, help="acceptable relative mismatch")
    align.add_argument("--floor", type=float, default=1e-10, help="stop scoring below this relative residual")
    _add_stop_flags(align)
    align.set_defaults(handler=cmd_align)

    table1 = sub.add_parser("table1", help="print the Chebyshev bound table")
    table1.add_argument("--csv", type=str, default=None)
    table1.set_defaults(handler=cmd_table1)

    race = sub.add_parser("race", help="compare several solvers on one problem")
    _add_problem_flags(race, LINEAR_PROBLEMS + MAP_PROBLEMS)
    race.add_argument(
        "--solvers",
        required=True,
        help="comma-separated specs: fp, aa:M, aafp:M:S:T, gmres (M may be 'inf')",
    )
    _add_stop_flags(race)
    race.add_argument("--csv", type=str, default=None, help="write the summary table here")
    race.add_argument("--no-plot", action="store_true")
    race.set_defaults(handler=cmd_race)

    return parser


def _solver_spec(args: argparse.Namespace) -> str:
    if args.solver == "fp" or args.solver == "gmres":
        return args.solver
    if args.solver == "aa":
        m = "inf" if args.m == UNBOUNDED else str(args.m)
        return f"aa:{m}"
    m = "inf" if args.m == UNBOUNDED else str(args.m)
    return f"aafp:{m}:{args.s}:{args.t}"


def read_config_file(path: str) -> dict[str, str]:
    """Parse a plain key=value file; '#' starts a comment line."""
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="ascii") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from exc
    return values


def _apply_config(parser: _Parser, argv: list[str]) -> argparse.Namespace:
    """Parse argv, folding in --config file values as defaults."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    file_values = read_config_file(args.config)
    if not file_values:
        return args
    # find the subparser that handled this command and convert the raw
    # strings with its own option types, then reparse so explicit flags
    # still win
    sub_actions = [a for a in parser._actions if isinstance(a, argparse._SubParsersAction)]
    subparser = sub_actions[0].choices[args.command]
    converted: dict[str, object] = {}
    for key, raw in file_values.items():
        action = next((a for a in subparser._actions if a.dest == key), None)
        if action is None:
            raise CliError(f"config file key {key!r} is not a flag of `{args.command}`")
        if isinstance(action, argparse._StoreTrueAction):
            converted[key] = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                converted[key] = action.type(raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise CliError(f"config file value {key}={raw!r}: {exc}") from exc
        else:
            converted[key] = raw
    subparser.set_defaults(**converted)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
        if hasattr(args, "solver"):
            args.solver_spec = lambda: _solver_spec(args)
        return args.handler(args)
    except (CliError, MatrixMarketError, WindowCapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
