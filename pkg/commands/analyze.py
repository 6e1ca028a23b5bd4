# commands/analyze.py
"""
`sqz analyze STREAM`: squeezing report and plot tables from a pulse stream.
"""

from pathlib import Path

import click

from squeeze_config import DEFAULT_HIST_BINS, DEFAULT_HIST_WINDOW_RAD
from tools.pipeline.analyze_run import run_analyze
from .common import CliContext, pass_cli, resolve_out_dir


@click.command("analyze")
@click.argument("stream", type=click.Path(exists=True, dir_okay=False))
@click.option("--snl", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Raw variance of one SNU; overrides the stream header.")
@click.option("--block-size", type=click.IntRange(min=2), default=None,
              help="Pulses per variance block (default: scan.block_size from the header).")
@click.option("--correct-elec", is_flag=True,
              help="Subtract the electronic noise from the headline values.")
@click.option("--hist-bins", type=click.IntRange(min=2), default=DEFAULT_HIST_BINS, show_default=True)
@click.option("--hist-window", type=click.FloatRange(min=0, min_open=True),
              default=DEFAULT_HIST_WINDOW_RAD, show_default=True,
              help="Half-width in rad of the LO phase window feeding each histogram.")
@click.option("--pulses-csv", "pulses_every", type=click.IntRange(min=1), default=None,
              help="Also write every N-th pulse in SNU to pulses.csv.")
@pass_cli
def analyze(cli: CliContext, stream, snl, block_size, correct_elec, hist_bins, hist_window, pulses_every):
    """Block variances, extremal squeezing levels and quadrature histograms."""
    out_dir = resolve_out_dir(cli, fallback=Path(stream).parent)
    result = run_analyze(
        stream,
        out_dir,
        snl_raw=snl,
        block_size=block_size,
        correct_elec=correct_elec,
        hist_bins=hist_bins,
        hist_window_rad=hist_window,
        pulses_csv_every=pulses_every,
    )

    click.echo(result["report"].to_display_string())
    for label in ("min", "max"):
        fit = result["distributions"][label]["fit"]
        if fit is not None:
            verdict = "pass" if fit["passes_ks"] else "FAIL"
            click.echo(
                f"  KS ({label} window, N={fit['n_samples']}) "
                f"{fit['ks_statistic']:.4f} vs {fit['ks_critical']:.4f}: {verdict}"
            )
    click.echo(f"📁 outputs in {result['out_dir']}")
