# squeeze_config.py
"""
Defaults and constants shared by the simulator, the estimators and the CLI.

Values marked "measured" are the figures of the pulsed squeezing
experiment this toolkit reproduces; everything else is a convention of
the toolkit. Environment overrides come from .env (SQZ_* variables).
"""

import math
import os

from dotenv import load_dotenv

load_dotenv()

# ═══════════════════════════════════════════════════════════════
# DETECTION CHAIN (measured)
# ═══════════════════════════════════════════════════════════════
MEASURED_ETA_T = 0.92              # overall optical transmission
MEASURED_ETA_H = 0.935             # mode-matching visibility (enters squared)
MEASURED_ETA_D = 0.945             # photodiode quantum efficiency
MEASURED_ETA_SIGMA = 0.01          # quoted uncertainty on the overall efficiency

# Reconstructed: reconciles -1.92 dB inferred with -1.87 dB measured
DEFAULT_V_ELEC_SNU = 0.0073
DEFAULT_N_LO_PHOTONS = 2.5e8
DEFAULT_GAIN_RAW = 1.0

LO_LINEARITY_CEILING = 2.5e8    # photons/pulse, verified shot-noise linearity
SHOT_TO_ELEC_THRESHOLD_DB = 11.0

# ═══════════════════════════════════════════════════════════════
# PARAMETRIC GAINS (measured)
# ═══════════════════════════════════════════════════════════════
MEASURED_G_AMP = 2.51
MEASURED_G_AMP_SIGMA = 0.05
MEASURED_G_DEAMP = 0.53
MEASURED_G_DEAMP_SIGMA = 0.01
MEASURED_BEST_G_AMP = 2.65
MEASURED_BEST_G_DEAMP = 0.40

# ═══════════════════════════════════════════════════════════════
# PHASE SCAN / ACQUISITION
# ═══════════════════════════════════════════════════════════════
DEFAULT_BLOCK_SIZE = 2500
DEFAULT_REP_RATE_HZ = 790_000.0
DEFAULT_PHASE_START = 0.0
DEFAULT_PHASE_END = 2.0 * math.pi
DEFAULT_SEED = 20040101

# Fixed by the stream format: chunk k draws from SeedSequence([seed, k])
CHUNK_SIZE = 65536
RNG_ALGORITHM = "numpy.PCG64+SeedSequence([seed,chunk])/standard_normal/v1"

# ═══════════════════════════════════════════════════════════════
# GAIN-CURVE FIT CONTRACT
# ═══════════════════════════════════════════════════════════════
FIT_STEP_TOLERANCE = 1e-10      # relative step size
FIT_MAX_ITERATIONS = 200
FIT_INITIAL_DAMPING = 1e-3
FIT_MAX_PUMP_MW = 0.5           # "fit for pump powers below 0.5mW"

# ═══════════════════════════════════════════════════════════════
# STATISTICS
# ═══════════════════════════════════════════════════════════════
KS_CRITICAL_COEFF_1PCT = 1.63   # asymptotic KS critical value at 1 %
MIN_FIT_SAMPLES = 30
SYMPLECTIC_TOLERANCE = 1e-9
DEFAULT_HIST_BINS = 101
DEFAULT_HIST_WINDOW_RAD = 0.05  # half-width of the phase window feeding each histogram

# ═══════════════════════════════════════════════════════════════
# SETUP METADATA (header only)
# ═══════════════════════════════════════════════════════════════
META_WAVELENGTH_NM = 846.0
META_PULSE_FWHM_FS = 150.0
META_CRYSTAL_LEN_UM = 100.0
META_CRYSTAL_TEMP_C = -14.0
META_WAIST_UM = 16.0
META_PULSE_ENERGY_NJ = 75.0
META_SHG_EFFICIENCY = 0.28
META_CMRR = 1e-4

# ═══════════════════════════════════════════════════════════════
# ENVIRONMENT
# ═══════════════════════════════════════════════════════════════
OUT_DIR = os.getenv("SQZ_OUT_DIR", "out")
WORKERS = int(os.getenv("SQZ_WORKERS", "1"))
ENV_VERBOSE = os.getenv("SQZ_VERBOSE", "0") == "1"
VERBOSE = ENV_VERBOSE            # the CLI raises this for --verbose
