import os

from dotenv import load_dotenv

load_dotenv()

# Tolerances and defaults (override in .env)
DEFAULT_TOL = float(os.getenv("SOLVCX_TOL", "1e-9"))
DEFAULT_SEED = int(os.getenv("SOLVCX_SEED", "0"))
LOG_LEVEL = os.getenv("SOLVCX_LOG_LEVEL", "INFO")
DATA_DIR = os.getenv(
    "SOLVCX_DATA_DIR", os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
)

# Durand-Kerner
ROOT_MAX_ITER = 500
ROOT_STEP_TOL = 1e-12

# lattice membership must round to exact integers
LATTICE_TOL = 1e-6

# real semisimplicity of Ad(xi)
IMAG_TOL = 1e-8
EIGVEC_COND_MAX = 1e8

# metric signature
SIGNATURE_TOL = 1e-10
