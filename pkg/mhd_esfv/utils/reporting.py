"""
Console reporting of run outcomes.
"""
from typing import Optional

from rich.console import Console
from rich.table import Table

from mhd_esfv.schemas.run import RunSummary

console = Console()
error_console = Console(stderr=True)


def success_report(summary: RunSummary, out: Optional[Console] = None) -> None:
    """
    Print a run summary as a table of headline figures and artifacts.

    Args:
        summary: Outcome of the experiment
        out: Console to print on, stdout by default
    """
    out = out or console
    table = Table(
        title=f"{summary.experiment.value}: {summary.problem.value} ({summary.flux_kind.value})"
    )
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name, value in summary.figures.items():
        table.add_row(name, f"{value:.6e}")
    for label, steps in summary.steps.items():
        table.add_row(f"steps {label}", str(steps))
    out.print(table)
    for artifact in summary.artifacts:
        out.print(f"[green]wrote[/green] {artifact}")


def error_report(message: str, exit_code: int, out: Optional[Console] = None) -> None:
    """Print a failure line carrying the exit status."""
    out = out or error_console
    out.print(f"[bold red]error[/bold red] (exit {exit_code}): {message}")
