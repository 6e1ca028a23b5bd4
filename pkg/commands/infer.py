# commands/infer.py
"""
`sqz infer`: squeezing levels expected from classical gains.
"""

import click

from squeeze_config import (
    MEASURED_ETA_D,
    MEASURED_ETA_H,
    MEASURED_ETA_SIGMA,
    MEASURED_ETA_T,
    MEASURED_G_AMP_SIGMA,
    MEASURED_G_DEAMP_SIGMA,
)
from tools.pipeline.infer_run import run_infer

_POSITIVE = click.FloatRange(min=0, min_open=True)
_UNIT = click.FloatRange(min=0, max=1)
_SIGMA = click.FloatRange(min=0)


@click.command("infer")
@click.option("--g-amp", type=_POSITIVE, required=True, help="Amplification intensity gain.")
@click.option("--g-deamp", type=_POSITIVE, required=True, help="Deamplification intensity gain.")
@click.option("--eta-t", type=_UNIT, default=MEASURED_ETA_T, show_default=True)
@click.option("--eta-h", type=_UNIT, default=MEASURED_ETA_H, show_default=True)
@click.option("--eta-d", type=_UNIT, default=MEASURED_ETA_D, show_default=True)
@click.option("--sigma-amp", type=_SIGMA, default=MEASURED_G_AMP_SIGMA, show_default=True)
@click.option("--sigma-deamp", type=_SIGMA, default=MEASURED_G_DEAMP_SIGMA, show_default=True)
@click.option("--sigma-eta", type=_SIGMA, default=MEASURED_ETA_SIGMA, show_default=True)
@click.option("--plane-wave-check", is_flag=True,
              help="Warn when the gains violate g_amp ≥ 1 ≥ g_deamp or g_amp·g_deamp ≤ 1.")
@click.option("--measured-db", type=float, default=None,
              help="Measured squeezing (dB) for the efficiency cross-check.")
@click.option("--v-elec", type=_SIGMA, default=0.0, show_default=True,
              help="Electronic noise (SNU) contained in --measured-db.")
def infer(g_amp, g_deamp, eta_t, eta_h, eta_d, sigma_amp, sigma_deamp, sigma_eta,
          plane_wave_check, measured_db, v_elec):
    """η and the inferred squeezed / anti-squeezed levels with 1σ."""
    summary = run_infer(
        g_amp, g_deamp, eta_t, eta_h, eta_d,
        sigma_amp=sigma_amp,
        sigma_deamp=sigma_deamp,
        sigma_eta=sigma_eta,
        plane_wave_check=plane_wave_check,
        measured_db=measured_db,
        v_elec=v_elec,
    )

    click.echo(f"η = {summary['eta']:.3f}")
    click.echo(f"squeezed      {summary['squeezed_db']:+.2f} ± {summary['squeezed_db_err']:.2f} dB")
    click.echo(f"anti-squeezed {summary['anti_squeezed_db']:+.2f} ± {summary['anti_squeezed_db_err']:.2f} dB")
    if "eta_implied" in summary:
        click.echo(f"η implied by {summary['measured_db']:+.2f} dB measured: {summary['eta_implied']:.3f}")
