"""Command-line entry point: `delayedgame {eval,pmf,pdf,simulate,validate}`.

Exit codes: 0 success, 1 failed check or disagreeing analytic paths,
2 invalid configuration, 3 computation outside its domain.
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence

import numpy as np
import polars as pl
from pydantic import ValidationError

from delayedgame import __version__
from delayedgame.const import (
    BRANCH_TOLERANCE,
    DUAL_PATH_TOLERANCE,
    EULER_CONVERGENCE_TOLERANCE,
    PMF_NEGATIVE_TOLERANCE,
    POLE_SEPARATION,
    SIGNIFICANT_DIGITS,
)
from delayedgame.enums import Side, SimulationMode
from delayedgame.exceptions import ConfigurationError, DomainError
from delayedgame.inversion import casualty_pmf, tau_pdf_table
from delayedgame.models import GameParams, TransformQuery
from delayedgame.simulation import (
    SimConfig,
    empirical_distributions,
    simulate_batch,
    simulate_outcomes,
)
from delayedgame.transforms import gamma_joint, moments, phi_closed, phi_operator
from delayedgame.validation import results_frame, run_acceptance_suite

from .models import (
    EvalOptions,
    EvalRecord,
    PdfOptions,
    PmfOptions,
    RunConfig,
    RunMetadata,
    SimulateOptions,
    ValidateOptions,
)
from .output import metadata_path, write_csv, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIGURATION = 2
EXIT_DOMAIN = 3

TOLERANCES = {
    "dual_path": DUAL_PATH_TOLERANCE,
    "branch": BRANCH_TOLERANCE,
    "pole_separation": POLE_SEPARATION,
    "euler_convergence": EULER_CONVERGENCE_TOLERANCE,
    "pmf_negative": PMF_NEGATIVE_TOLERANCE,
    "significant_digits": SIGNIFICANT_DIGITS,
}


def _write_metadata(run: RunConfig, method: str | None = None) -> None:
    if run.out is None:
        return
    metadata = RunMetadata(version=__version__, run=run, method=method, tolerances=TOLERANCES)
    write_json(metadata, metadata_path(run.out))


#############
# Commands  #
#############


def cmd_eval(run: RunConfig) -> int:
    """Phi at one point by both analytic paths, their difference and gamma."""
    params, opts = run.params, run.options
    assert isinstance(opts, EvalOptions)
    query = TransformQuery(u=opts.u, v=opts.v, theta=opts.theta)
    closed = phi_closed(params, query) if opts.path in ("closed", "both") else None
    operator = phi_operator(params, query) if opts.path in ("operator", "both") else None
    difference = abs(closed - operator) if closed is not None and operator is not None else None
    record = EvalRecord(
        query=query,
        phi_closed=closed,
        phi_operator=operator,
        difference=difference,
        gamma=gamma_joint(params, query),
        moments=moments(params) if params.closed_form_capable else None,
    )
    write_json(record, run.out)
    _write_metadata(run, method=opts.path)
    if difference is not None and difference > DUAL_PATH_TOLERANCE:
        logger.error("Analytic paths disagree by %.3g", difference)
        return EXIT_FAILED
    return EXIT_OK


def cmd_pmf(run: RunConfig) -> int:
    """pmf of A_rho or B_rho, analytic or from simulated paths."""
    params, opts = run.params, run.options
    assert isinstance(opts, PmfOptions)
    if opts.method == "analytic":
        table = casualty_pmf(params, opts.side, opts.max_k)
    else:
        outcomes = simulate_outcomes(params, SimConfig(n_paths=opts.paths, seed=opts.seed))
        pmf_a, pmf_b, _ = empirical_distributions(outcomes)
        table = pmf_a if opts.side == Side.A else pmf_b
    write_csv(table.to_polars(), run.out)
    _write_metadata(run, method=opts.method)
    return EXIT_OK


def cmd_pdf(run: RunConfig) -> int:
    """Density of tau_rho on the grid 0, t_step, ..., t_max."""
    params, opts = run.params, run.options
    assert isinstance(opts, PdfOptions)
    steps = int(round(opts.t_max / opts.t_step))
    grid = opts.t_step * np.arange(steps + 1)
    table = tau_pdf_table(params, grid, method=opts.method)
    if table.metadata.get("tail_mass") is not None:
        logger.info("Mass beyond t=%g: %.3g", grid[-1], table.metadata["tail_mass"])
    write_csv(table.to_polars(), run.out)
    _write_metadata(run, method=opts.method)
    return EXIT_OK


def cmd_simulate(run: RunConfig) -> int:
    """Monte Carlo run summarised as JSON."""
    params, opts = run.params, run.options
    assert isinstance(opts, SimulateOptions)
    config = SimConfig(
        n_paths=opts.paths,
        seed=opts.seed,
        mode=opts.mode,
        workers=opts.workers,
        query_points=opts.queries,
    )
    write_json(simulate_batch(params, config), run.out)
    _write_metadata(run, method=opts.mode.value)
    return EXIT_OK


def cmd_validate(run: RunConfig) -> int:
    """Acceptance suite; exit 1 names the failing checks."""
    params, opts = run.params, run.options
    assert isinstance(opts, ValidateOptions)
    results = run_acceptance_suite(params, n_paths=opts.paths, seed=opts.seed, workers=opts.workers)
    frame = results_frame(results)
    with pl.Config(tbl_rows=-1, tbl_hide_dataframe_shape=True, fmt_str_lengths=120):
        print(frame)
    if run.out is not None:
        write_csv(frame, run.out)
        _write_metadata(run)
    failed = [result.name for result in results if not result.passed]
    if failed:
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "eval": cmd_eval,
    "pmf": cmd_pmf,
    "pdf": cmd_pdf,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
}


############
# Parsing  #
############


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-parser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON file with the game parameters")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="delayedgame",
        description="Exact and simulated laws of the delayed two-player antagonistic game.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    eval_parser = sub.add_parser("eval", parents=[common], help="joint transform at one point")
    eval_parser.add_argument("--u", type=complex, default=1.0)
    eval_parser.add_argument("--v", type=complex, default=1.0)
    eval_parser.add_argument("--theta", type=complex, default=0.0)
    eval_parser.add_argument("--path", choices=["closed", "operator", "both"], default="both")

    pmf_parser = sub.add_parser("pmf", parents=[common], help="casualty pmf of one player")
    pmf_parser.add_argument("--side", choices=[side.value for side in Side], default="A")
    pmf_parser.add_argument("--max-k", type=int)
    pmf_parser.add_argument("--method", choices=["analytic", "empirical"], default="analytic")
    pmf_parser.add_argument("--paths", type=int, default=1_000_000)
    pmf_parser.add_argument("--seed", type=int, default=0)

    pdf_parser = sub.add_parser("pdf", parents=[common], help="density of the observed ruin time")
    pdf_parser.add_argument("--method", choices=["exact", "numeric"], default="exact")
    pdf_parser.add_argument("--t-max", type=float, default=10.0)
    pdf_parser.add_argument("--t-step", type=float, default=0.01)

    sim_parser = sub.add_parser("simulate", parents=[common], help="Monte Carlo summary")
    sim_parser.add_argument("--paths", type=int, default=1_000_000)
    sim_parser.add_argument("--seed", type=int, default=0)
    sim_parser.add_argument(
        "--mode", choices=[mode.value for mode in SimulationMode], default="interval"
    )
    sim_parser.add_argument("--workers", type=int, default=1)
    sim_parser.add_argument(
        "--query",
        dest="queries",
        nargs=3,
        type=complex,
        action="append",
        default=[],
        metavar=("U", "V", "THETA"),
        help="point at which to estimate the joint transform (repeatable)",
    )

    val_parser = sub.add_parser("validate", parents=[common], help="acceptance suite")
    val_parser.add_argument("--paths", type=int, default=1_000_000)
    val_parser.add_argument("--seed", type=int, default=0)
    val_parser.add_argument("--workers", type=int, default=1)
    return parser


def load_run(args: argparse.Namespace) -> RunConfig:
    """Validated run configuration from parsed arguments."""
    options = {
        key: value
        for key, value in vars(args).items()
        if key not in ("config", "out", "verbose")
    }
    if "queries" in options:
        options["queries"] = [dict(zip(("u", "v", "theta"), q)) for q in options["queries"]]
    return RunConfig.model_validate(
        {"params": GameParams.from_json(path=args.config), "options": options, "out": args.out}
    )


def execute(run: RunConfig) -> int:
    """Run a validated configuration and return its exit code."""
    return COMMANDS[run.options.command](run)


def _guarded(action: Callable[[], int]) -> int:
    try:
        return action()
    except (ConfigurationError, ValidationError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIGURATION
    except DomainError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def rerun_from_metadata(path: str, out: str | None = None) -> int:
    """Repeat the run recorded in a metadata side-file, optionally writing elsewhere."""

    def action() -> int:
        run = RunMetadata.from_json(path=path).run
        if out is not None:
            run = run.model_copy(update={"out": out})
        return execute(run)

    return _guarded(action)


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return _guarded(lambda: execute(load_run(args)))


if __name__ == "__main__":
    sys.exit(main())
