"""CLI entry point for aech-cli-transfunction."""

import json
import logging
import sys
from pathlib import Path
from typing import Annotated, Optional

import typer

from .errors import TransfunctionError
from .runner import RunOptions, run_scenario
from .scenario import ANALYSIS_KINDS, load_context
from .utils import get_file_info

app = typer.Typer(
    help="Analyze transfunctions between finite measure spaces: localization, approximation, graphs, Markov operators and population dynamics.",
    no_args_is_help=True,
    add_completion=False,
)

EXIT_COUNTEREXAMPLE = 1
EXIT_INPUT_ERROR = 2

logger = logging.getLogger("aech_cli_transfunction")

ScenarioArg = Annotated[
    Optional[str], typer.Argument(help="Path to scenario JSON file (reads stdin if omitted)")
]
DeltaMinOpt = Annotated[
    Optional[float], typer.Option("--delta-min", help="Probe floor override (defaults to the grid step)")
]
SeedOpt = Annotated[int, typer.Option("--seed", envvar="AECH_TRANSFUNCTION_SEED", help="Seed for sampling checks")]
TrialsOpt = Annotated[
    int, typer.Option("--trials", envvar="AECH_TRANSFUNCTION_TRIALS", min=1, help="Trials per sampling check")
]
StrictOpt = Annotated[bool, typer.Option("--strict", help="Exit 1 when an analysis finds a counterexample")]
OutOpt = Annotated[
    Optional[str], typer.Option("--out", envvar="AECH_TRANSFUNCTION_OUT", help="Directory for report files")
]
VerboseOpt = Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging to stderr")]


def output_json(data: dict) -> None:
    """Output JSON to stdout."""
    print(json.dumps(data, indent=2))


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _execute(
    scenario: str | None,
    kinds: list[str] | None,
    delta_min: float | None,
    seed: int,
    trials: int,
    strict: bool,
    out: str | None,
    verbose: bool,
) -> None:
    configure_logging(verbose)
    try:
        ctx = load_context(scenario)
        out_dir = Path(out or ctx.scenario.output_dir or "out")
        options = RunOptions(out=out_dir, seed=seed, trials=trials, delta_min=delta_min)
        outcomes = run_scenario(ctx, kinds, options)
    except (TransfunctionError, OSError) as e:
        output_json({
            "success": False,
            "error": str(e),
        })
        raise typer.Exit(EXIT_INPUT_ERROR)
    except Exception as e:
        logger.debug("analysis crashed", exc_info=True)
        output_json({
            "success": False,
            "error": f"internal error: {e}",
        })
        raise typer.Exit(EXIT_INPUT_ERROR)

    found = [o.label for o in outcomes if o.counterexample]
    files = [get_file_info(Path(f)) for o in outcomes for f in o.files]
    envelope = {
        "success": not (strict and found),
        "output_files": files,
        "message": f"{len(outcomes)} analyses run, {len(found)} with counterexamples",
        "analyses": [o.model_dump(mode="json") for o in outcomes],
    }
    if strict and found:
        envelope["error"] = f"counterexample found in {', '.join(found)}"
    output_json(envelope)
    if strict and found:
        raise typer.Exit(EXIT_COUNTEREXAMPLE)


@app.command("localize")
def localize_command(
    scenario: ScenarioArg = None,
    delta_min: DeltaMinOpt = None,
    seed: SeedOpt = 0,
    trials: TrialsOpt = 200,
    strict: StrictOpt = False,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Estimate E (and D_eps when an epsilon is given) per point.

    Output: <out>/<name>_<i>_localize_localization.{json,csv}.
    """
    _execute(scenario, ["localize"], delta_min, seed, trials, strict, out, verbose)


@app.command("approx")
def approx_command(
    scenario: ScenarioArg = None,
    delta_min: DeltaMinOpt = None,
    seed: SeedOpt = 0,
    trials: TrialsOpt = 200,
    strict: StrictOpt = False,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Build sigma-simple, nonuniform or recovered approximants, optionally mollified."""
    _execute(scenario, ["approx"], delta_min, seed, trials, strict, out, verbose)


@app.command("graphs")
def graphs_command(
    scenario: ScenarioArg = None,
    delta_min: DeltaMinOpt = None,
    seed: SeedOpt = 0,
    trials: TrialsOpt = 200,
    strict: StrictOpt = False,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Check graph carriers over the base-ball rectangle family."""
    _execute(scenario, ["graphs"], delta_min, seed, trials, strict, out, verbose)


@app.command("markov")
def markov_command(
    scenario: ScenarioArg = None,
    delta_min: DeltaMinOpt = None,
    seed: SeedOpt = 0,
    trials: TrialsOpt = 200,
    strict: StrictOpt = False,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Run the Markov / transfunction / transport-plan roundtrip suite."""
    _execute(scenario, ["markov"], delta_min, seed, trials, strict, out, verbose)


@app.command("popdyn")
def popdyn_command(
    scenario: ScenarioArg = None,
    delta_min: DeltaMinOpt = None,
    seed: SeedOpt = 0,
    trials: TrialsOpt = 200,
    strict: StrictOpt = False,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Simulate the population model and write trajectory and summary CSV."""
    _execute(scenario, ["popdyn"], delta_min, seed, trials, strict, out, verbose)


@app.command("verify")
def verify_command(
    scenario: ScenarioArg = None,
    delta_min: DeltaMinOpt = None,
    seed: SeedOpt = 0,
    trials: TrialsOpt = 200,
    strict: StrictOpt = False,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Run every registered property check against the scenario objects."""
    _execute(scenario, ["verify"], delta_min, seed, trials, strict, out, verbose)


@app.command("run")
def run_command(
    scenario: Annotated[str, typer.Argument(help="Path to scenario JSON file")],
    analysis: Annotated[
        Optional[str], typer.Argument(help="Analysis kind to run (all analyses if omitted)")
    ] = None,
    delta_min: DeltaMinOpt = None,
    seed: SeedOpt = 0,
    trials: TrialsOpt = 200,
    strict: StrictOpt = False,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Run a scenario's analyses.

    Input: scenario file and an optional analysis kind
    (localize, approx, graphs, markov, popdyn, verify).
    """
    if analysis is not None and analysis not in ANALYSIS_KINDS:
        output_json({
            "success": False,
            "error": f"Invalid analysis: {analysis}. Valid analyses: {', '.join(ANALYSIS_KINDS)}",
        })
        raise typer.Exit(EXIT_INPUT_ERROR)
    _execute(scenario, [analysis] if analysis else None, delta_min, seed, trials, strict, out, verbose)


def run() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    run()
