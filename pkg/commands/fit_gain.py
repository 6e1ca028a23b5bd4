# commands/fit_gain.py
"""
`sqz fit-gain CSV`: fit the plane-wave gain law to measured gain points.
"""

import click

from tools.pipeline.fit_gain_run import DEFAULT_CURVE_POINTS, run_fit_gain
from .common import CliContext, pass_cli, resolve_out_dir


@click.command("fit-gain")
@click.argument("csv_path", metavar="CSV", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-pump-mw", type=click.FloatRange(min=0), default=None,
              help="Drop rows with pump power strictly above this bound before fitting.")
@click.option("--fit-mu", is_flag=True, help="Fit the GID floor μ_gid as well as κ.")
@click.option("--curve-points", type=click.IntRange(min=2), default=DEFAULT_CURVE_POINTS, show_default=True)
@pass_cli
def fit_gain(cli: CliContext, csv_path, max_pump_mw, fit_mu, curve_points):
    """κ (and μ_gid) from a p_pump_mw,g_amp,g_deamp[,weight] table."""
    out_dir = resolve_out_dir(cli)
    summary = run_fit_gain(csv_path, out_dir, fit_mu=fit_mu, max_pump_mw=max_pump_mw, curve_points=curve_points)

    click.echo(summary["result"].to_display_string())
    click.echo(f"  g_amp·g_deamp at the highest pump power: {summary['gain_product_at_max_pump']:.4f}")
    click.echo(f"📁 model curve written to {out_dir / summary['model_curve']}")
