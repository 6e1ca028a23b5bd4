# commands/simulate.py
"""
`sqz simulate`: generate a pulse-stream file from the run configuration.
"""

import click

from tools.pipeline.simulate_run import run_simulate
from .common import CliContext, pass_cli


@click.command("simulate")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Stream file path (default: <out-dir>/<output.stream_name>).")
@click.option("--workers", type=click.IntRange(min=1), default=None,
              help="Threads generating chunks in parallel (output is identical).")
@pass_cli
def simulate(cli: CliContext, out_path, workers):
    """Simulate a pulsed homodyne record of the configured DOPA output."""
    summary = run_simulate(cli.config, out_path=out_path, fmt=cli.fmt, workers=workers)

    click.echo(f"✅ {summary['n_pulses']} pulses written to {summary['path']} ({summary['format']})")
    click.echo(f"  gains       amplification {summary['g_amp']:.4f}, deamplification {summary['g_deamp']:.4f}")
    click.echo(f"  η           {summary['eta']:.4f}")
    click.echo(
        f"  expected    {summary['expected_min_db']:+.2f} dB / {summary['expected_max_db']:+.2f} dB"
    )
    click.echo(f"  sha256      {summary['sha256']}")
