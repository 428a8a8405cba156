from fractions import Fraction


SCHEMA = "hypack/1"

DEFAULT_SEED = 0
DEFAULT_TOL = 1e-6
DEFAULT_THREADS = 1

# Candidate grid for the protrusion fit search
FIT_SCALES = (-2, 2)
FIT_STEP = Fraction(1, 100)

# Default tiling patch used by reproduce
PATCH_I = (-2, 2)
PATCH_J = (-4, 4)

# Saturation search
DEFAULT_KMAX = 2
DEFAULT_BUDGET = 200000

MONTE_CARLO_SAMPLES = 200000
GRID_STEP = Fraction(1, 2)
