"""
Command Line Interface
norm, verify and report commands with stable exit codes
"""

import click
import json
import sys
from typing import NoReturn, Optional
from tabulate import tabulate

from .core.toolkit import OpSpaceToolkit
from .core.error_codes import OpSpaceError, handle_exception
from .reporting.report_generator import ReportFormat
from .testing.suites import SUITES
from loguru import logger

FORMATS = [f.value for f in ReportFormat]


# Color helpers
def success(msg: str) -> str:
    return click.style(msg, fg='green')


def error(msg: str) -> str:
    return click.style(msg, fg='red')


def warning(msg: str) -> str:
    return click.style(msg, fg='yellow')


def info(msg: str) -> str:
    return click.style(msg, fg='cyan')


def fail(exc: Exception) -> NoReturn:
    """Report an error on stderr and exit with its code"""
    err = handle_exception(exc, logger)
    click.echo(error(f"Error: {err}"), err=True)
    if err.context.get("file"):
        click.echo(error(f"  file: {err.context['file']}"), err=True)
    sys.exit(err.exit_code)


def emit(toolkit: OpSpaceToolkit, data: dict, fmt: str) -> None:
    """Write JSON output when --out is set and print the chosen rendering"""
    toolkit.write_output(data)
    click.echo(toolkit.report_generator.render(data, ReportFormat(fmt)), nl=False)


@click.group()
@click.version_option(version='1.0.0', prog_name='opspace-toolkit')
@click.option('--config', '-c', 'config_path', help='Path to configuration file')
@click.option('--seed', type=int, help='Random seed (overrides run.seed)')
@click.option('--out', '-o', 'output', help='Write the JSON result to this path')
@click.option('--level-cap', type=int, help='Highest matrix level searched')
@click.option('--depth', type=int, help='Chain evaluation depth')
@click.pass_context
def cli(ctx, config_path, seed, output, level_cap, depth):
    """
    Operator space toolkit

    Certified norms of matrix-level elements, verification suites for
    categorical constructions, and report aggregation.
    """
    ctx.ensure_object(dict)
    try:
        ctx.obj['toolkit'] = OpSpaceToolkit(
            config_path, seed=seed, output=output, level_cap=level_cap, depth=depth
        )
    except OpSpaceError as e:
        fail(e)


@cli.command()
@click.argument('space_file', type=click.Path())
@click.argument('element_file', type=click.Path())
@click.argument('level', type=int, required=False)
@click.option('--format', '-f', 'fmt', type=click.Choice(FORMATS), default='json', help='Output format')
@click.pass_context
def norm(ctx, space_file, element_file, level, fmt):
    """Level-n norm of an element as a certified interval"""
    toolkit = ctx.obj['toolkit']
    try:
        report = toolkit.norm(space_file, element_file, level)
        emit(toolkit, report.to_dict(), fmt)
    except Exception as e:
        fail(e)


@cli.command()
@click.argument('suite')
@click.argument('inputs', nargs=-1, type=click.Path())
@click.option('--format', '-f', 'fmt', type=click.Choice(FORMATS), default='json', help='Output format')
@click.pass_context
def verify(ctx, suite, inputs, fmt):
    """Run a verification suite (bundled fixture when no INPUTS are given)"""
    toolkit = ctx.obj['toolkit']
    try:
        result = toolkit.verify(suite, list(inputs))
        emit(toolkit, {"command": "verify", **result.to_dict()}, fmt)
    except Exception as e:
        fail(e)

    if not result.passed:
        click.echo(error(f"✗ {len(result.failures)} check(s) failed"), err=True)
        sys.exit(1)


@cli.command()
@click.argument('bundle_dir', type=click.Path())
@click.option('--format', '-f', 'fmt', type=click.Choice(FORMATS), default='json', help='Output format')
@click.pass_context
def report(ctx, bundle_dir, fmt):
    """Aggregate a directory of run outputs"""
    toolkit = ctx.obj['toolkit']
    try:
        summary = toolkit.report(bundle_dir)
        emit(toolkit, summary.to_dict(), fmt)
    except Exception as e:
        fail(e)


@cli.command()
def suites():
    """List verification suites"""
    click.echo(tabulate([[i, s] for i, s in enumerate(SUITES, 1)], headers=['#', 'Suite'], tablefmt='simple'))


@cli.command()
@click.pass_context
def health(ctx):
    """Show toolkit health status"""
    toolkit = ctx.obj['toolkit']

    try:
        status = toolkit.get_health_status()

        click.echo("\n" + "=" * 60)
        click.echo(success("TOOLKIT HEALTH STATUS"))
        click.echo("=" * 60 + "\n")

        click.echo(f"Status: {click.style(status['status'].upper(), fg='green')}")
        click.echo(f"Version: {status['version']}")
        click.echo(f"Seed: {status['seed']}")
        click.echo(f"Suites: {', '.join(status['suites'])}")

        budgets = status['budgets']
        click.echo(info(f"\nBudgets: {budgets['restarts']} restarts, {budgets['iterations']} iterations, level cap {budgets['level_cap']}"))

        perf = status['performance']
        click.echo("\nPerformance:")
        click.echo(f"  Process Memory: {perf.get('process_memory_mb', 0):.1f}MB")
        click.echo(f"  System Memory: {perf.get('system_memory_percent', 0):.1f}%")
        if perf['tasks']:
            rows = [[task, s['execution_count'], f"{s['avg_duration']:.2f}s"] for task, s in sorted(perf['tasks'].items())]
            click.echo(tabulate(rows, headers=['Task', 'Runs', 'Avg'], tablefmt='simple'))

        for message in status['warnings']:
            click.echo(warning(f"warning: {message}"))

        click.echo("\n" + "=" * 60 + "\n")

    except Exception as e:
        fail(e)


@cli.command()
@click.pass_context
def config(ctx):
    """Show current configuration"""
    toolkit = ctx.obj['toolkit']
    click.echo(json.dumps(toolkit.config.to_dict(), indent=2, sort_keys=True))


def main(argv: Optional[list] = None):
    """Main entry point"""
    cli(args=argv, obj={})


if __name__ == '__main__':
    main()
