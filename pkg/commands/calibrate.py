# commands/calibrate.py
"""
`sqz calibrate`: shot-noise calibration from a LO scan.
"""

import math

import click

from squeeze_config import SHOT_TO_ELEC_THRESHOLD_DB
from tools.pipeline.calibrate_run import DEFAULT_PULSES_PER_LEVEL, run_calibrate
from .common import CliContext, parse_levels, pass_cli, resolve_out_dir


@click.command("calibrate")
@click.argument("streams", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--pairs", "pairs_csv", type=click.Path(exists=True, dir_okay=False), default=None,
              help="CSV of n_lo,variance pairs.")
@click.option("--levels", callback=parse_levels, default=None,
              help="Simulate a vacuum LO scan at these levels, e.g. 5e7,1e8,1.5e8,2e8.")
@click.option("--pulses-per-level", type=click.IntRange(min=2), default=DEFAULT_PULSES_PER_LEVEL, show_default=True)
@click.option("--no-intercept", is_flag=True, help="Fit through the origin (no electronic floor).")
@click.option("--n-lo-ref", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Reference LO level for snl_raw (default: detection.n_lo_photons).")
@pass_cli
def calibrate(cli: CliContext, streams, pairs_csv, levels, pulses_per_level, no_intercept, n_lo_ref):
    """Slope, intercept, R² and the shot-to-electronic noise ratio."""
    if sum([pairs_csv is not None, bool(streams), levels is not None]) != 1:
        raise click.UsageError("give exactly one of STREAMS, --pairs or --levels")

    out_dir = resolve_out_dir(cli)
    result = run_calibrate(
        cli.config,
        out_dir,
        pairs_csv=pairs_csv,
        stream_paths=streams,
        levels=levels,
        pulses_per_level=pulses_per_level,
        fit_intercept=not no_intercept,
        n_lo_ref=n_lo_ref,
    )

    cal = result["calibration"]
    r2 = "n/a" if math.isnan(cal.r_squared) else f"{cal.r_squared:.6f}"
    click.echo(f"📊 Shot-noise calibration ({result['source']}, {cal.n_levels} levels):")
    click.echo(f"  slope      {cal.slope:.6g} per photon")
    click.echo(f"  intercept  {cal.intercept:.6g}")
    click.echo(f"  R²         {r2}")
    click.echo(f"  snl_raw    {cal.snl_raw:.6g} at {cal.n_lo_ref:.3g} photons/pulse")
    ratio = cal.shot_to_elec_db
    verdict = "✅ pass" if result["passed"] else "❌ fail"
    click.echo(f"  shot/elec  {ratio:.2f} dB ({verdict}, threshold {SHOT_TO_ELEC_THRESHOLD_DB:.0f} dB)")
