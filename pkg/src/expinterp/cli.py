"""Command-line front end: run scenario files, validate them, report version.

Exit codes: 0 success, 1 task precondition failure, 2 parse error,
3 validation error, 4 resource cap exceeded.  The default output directory
comes from the EXPINTERP_OUT environment variable when set.
"""

from __future__ import annotations

import datetime
import json
from pathlib import Path

import click

from . import __version__
from .errors import DomainError, PreconditionError, ResourceLimitError
from .scenario import (
    ScenarioError,
    parse_scenario,
    render_report,
    run_scenario,
    validate_scenario,
)

EXIT_PRECONDITION = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RESOURCE = 4


@click.group()
def main():
    """Exponential-sum interpolation: criterion checks, solves, certificates."""


@main.command()
@click.argument("scenario", type=click.Path())
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    envvar="EXPINTERP_OUT",
    default=".",
    show_default=True,
    help="Output directory for the report and plot files.",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--parallel",
    is_flag=True,
    help="Accepted for compatibility; tasks always report in scenario order.",
)
def run(scenario, out, seed, parallel):
    """Run every task of SCENARIO and write <name>.report.json to --out."""
    try:
        sc = parse_scenario(scenario)
    except ScenarioError as exc:
        raise click.exceptions.Exit(_fail(EXIT_PARSE, str(exc)))
    diagnostics = validate_scenario(sc)
    if diagnostics:
        for d in diagnostics:
            click.echo(d, err=True)
        raise click.exceptions.Exit(EXIT_VALIDATION)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        report = run_scenario(sc, seed=seed, out_dir=out_dir)
    except ResourceLimitError as exc:
        raise click.exceptions.Exit(_fail(EXIT_RESOURCE, str(exc)))
    except (PreconditionError, DomainError) as exc:
        raise click.exceptions.Exit(_fail(EXIT_PRECONDITION, str(exc)))
    report_path = out_dir / f"{sc.name}.report.json"
    report_path.write_text(render_report(report))
    meta = {
        "version": __version__,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "scenario_path": str(scenario),
    }
    (out_dir / f"{sc.name}.report.meta.json").write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n"
    )
    click.echo(str(report_path))


def _fail(code: int, message: str) -> int:
    click.echo(message, err=True)
    return code


@main.command()
@click.argument("scenario", type=click.Path())
def validate(scenario):
    """Validate SCENARIO without running it; print one diagnostic per line."""
    try:
        sc = parse_scenario(scenario)
    except ScenarioError as exc:
        raise click.exceptions.Exit(_fail(EXIT_PARSE, str(exc)))
    diagnostics = validate_scenario(sc)
    for d in diagnostics:
        click.echo(d)
    if diagnostics:
        raise click.exceptions.Exit(EXIT_VALIDATION)


@main.command()
def version():
    """Print the package version."""
    click.echo(__version__)


if __name__ == "__main__":
    main()
