"""Default numerical tolerances and experiment parameters."""

# Forward process
DEFAULT_BETA = 0.02
DEFAULT_RECORD_STEPS = (0, 1, 2, 4, 8, 32, 128, 512, 2048, 8192)
DEFAULT_SEED = 0
DEFAULT_STEPS = 8192

# Osmosis
DEFAULT_TAU = 1.0
DEFAULT_GRID_SPACING = 1.0
DEFAULT_SOLVER_TOL = 1e-9
DEFAULT_SOLVER_MAX_ITER = 10_000

# BiCGSTAB
BREAKDOWN_THRESHOLD = 1e-30
TRUE_RESIDUAL_INTERVAL = 50

# Fokker-Planck
DEFAULT_FP_DT = 0.1
DEFAULT_FP_GRID = (-6.0, 6.0, 300)
DEFAULT_FP_TIMES = (10, 50, 250)
BOUNDARY_MASS_LIMIT = 1e-6
MIN_HISTOGRAM_SAMPLES = 1_000
MIN_CHAIN_SAMPLES = 1_000
DEFAULT_FP_SAMPLES = 100_000
DEFAULT_FP_U0 = 1.0

# Entropy estimation
DEFAULT_KNN_NEIGHBORS = 3
MAX_KNN_DIMENSION = 4
KNN_JITTER = 1e-10

# Display transform for noise-range frames
DISPLAY_RANGE = (-4.0, 4.0)
DEFAULT_MAXVAL = 255

# Experiments
DEFAULT_INPUT = "synthetic:481x321x3"
DEFAULT_GUIDANCE = "noise:42"
DEFAULT_ENTROPY_DIMENSION = 1
