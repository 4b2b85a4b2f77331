"""
Central configuration for sandpile-resolutions.
All environment variables are loaded here; modules read the constants below.
"""

import os

from dotenv import load_dotenv

load_dotenv()

# ── Reproducibility ─────────────────────────────────────────────────────────
# Seed of the generic point used by the rank-based exactness check.
SEED = int(os.getenv("SANDPILE_SEED", "20130101"))

# Generic-point entries are drawn from [GENERIC_LOW, GENERIC_HIGH]
GENERIC_LOW  = 2
GENERIC_HIGH = 10_000

# ── Degeneration ────────────────────────────────────────────────────────────
DEFAULT_T_WEIGHT = int(os.getenv("SANDPILE_T_WEIGHT", "1"))

# Evaluation point used by the rescaled-fiber check (must be nonzero)
FIBER_T0 = 2

# ── Enumeration limits ──────────────────────────────────────────────────────
# Partition enumeration is exponential; refuse graphs above this size.
MAX_VERTICES = int(os.getenv("SANDPILE_MAX_VERTICES", "8"))

# Entries kept by each graph- or partition-keyed memo cache
CACHE_SIZE = int(os.getenv("SANDPILE_CACHE_SIZE", "65536"))

# ── CLI defaults ────────────────────────────────────────────────────────────
DEFAULT_IDEAL  = "mg"      # "mg" | "ig" | "t"
DEFAULT_FORMAT = "text"    # "text" | "json" | "cas-script"

# ── Logging ─────────────────────────────────────────────────────────────────
LOG_LEVEL = os.getenv("SANDPILE_LOG_LEVEL", "WARNING")
LOG_FILE  = os.getenv("SANDPILE_LOG_FILE", "")
