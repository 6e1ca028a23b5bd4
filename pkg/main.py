"""
sqzlab command line.

    python main.py [--config FILE] [--seed N] [--out-dir DIR] [--format bin|csv] [--verbose] COMMAND ...

Commands: simulate, analyze, fit-gain, infer, calibrate.
"""

import click
import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

import squeeze_config
from commands.analyze import analyze
from commands.calibrate import calibrate
from commands.common import CliContext, DataError, NumericalError
from commands.fit_gain import fit_gain
from commands.infer import infer
from commands.simulate import simulate
from services.dopa import GainFitError
from services.storage import CsvFormatError, StreamFormatError

load_dotenv()


# ======================================================
# ERROR MAPPING
# ======================================================
class SqueezeGroup(click.Group):
    """Turns domain exceptions into click exceptions with the documented exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (click.ClickException, click.exceptions.Exit, click.exceptions.Abort):
            raise
        except ValidationError as e:
            raise click.UsageError(f"invalid configuration: {e}") from e
        except (GainFitError, np.linalg.LinAlgError, FloatingPointError) as e:
            raise NumericalError(str(e)) from e
        except (StreamFormatError, CsvFormatError) as e:
            raise DataError(str(e)) from e
        except (ValueError, OSError) as e:
            raise DataError(str(e)) from e


@click.group(cls=SqueezeGroup)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON run configuration (defaults apply for missing keys).")
@click.option("--seed", type=click.IntRange(min=0, max=2 ** 64 - 1), default=None,
              help="Override scan.seed.")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Override output.out_dir.")
@click.option("--format", "fmt", type=click.Choice(["bin", "csv"]), default="bin", show_default=True,
              help="Pulse-stream format written by simulate.")
@click.option("--verbose", is_flag=True, help="Progress output (also SQZ_VERBOSE=1).")
@click.pass_context
def cli(ctx, config_path, seed, out_dir, fmt, verbose):
    """Pulsed squeezed-light simulator and analysis toolkit."""
    squeeze_config.VERBOSE = verbose or squeeze_config.ENV_VERBOSE
    ctx.obj = CliContext(config_path=config_path, seed=seed, out_dir=out_dir, fmt=fmt, verbose=verbose)


# ======================================================
# COMMANDS
# ======================================================
cli.add_command(simulate)
cli.add_command(analyze)
cli.add_command(fit_gain)
cli.add_command(infer)
cli.add_command(calibrate)


if __name__ == "__main__":
    cli()
