import math

import numpy as np

TWO_PI = 2.0 * math.pi

# Euler's constant C_E
EULER_GAMMA = float(np.euler_gamma)

# Ascending series for J and Y
SERIES_TOL = 1e-16
SERIES_MAX_TERMS = 200
BESSEL_MAX_ARGUMENT = 50.0
BRANCH_CUT_ANGLE_TOL = 1e-12
HANKEL_MAX_ORDER = 40
# |H_nu| / |H_0| above this means the recessive J part is lost
RECURRENCE_GROWTH_LIMIT = 1e12

# Default search region Theta = (0, 4) x (-4, 0)
DEFAULT_RE_MIN = 0.0
DEFAULT_RE_MAX = 4.0
DEFAULT_IM_MIN = -4.0
DEFAULT_IM_MAX = 0.0

# Spectral indicator defaults
INDICATOR_RADIUS = 0.1
INDICATOR_NODES = 16
INDICATOR_LOG10_FLOOR = -300.0

# Contour-moment refinement defaults
REFINE_NODES = 64
REFINE_BLOCK = 8
REFINE_RANK_TOL = 1e-8
REFINE_MIN_GAP = 10.0
REFINE_CLUSTER_TOL = 1e-7
REFINE_ACCEPTANCE = 1e-6

# Disk oracle defaults
ORACLE_NU_MAX = 10
ORACLE_NEWTON_MAX_ITER = 60
ORACLE_RESIDUAL_TOL = 1e-12
ORACLE_DEDUP_DISTANCE = 1e-6
ORACLE_MAX_NODES = 2**14
ORACLE_MIN_NODES = 64
ORACLE_INTEGER_TOL = 1e-3
ORACLE_CONTOUR_CLEARANCE = 1e-6
ORACLE_SEEDS = 16
ORACLE_MARGIN = 1e-2
# |pole - Hankel zero| for the unit-disk cross-check
ORACLE_MATCH_TOL = 1e-9

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
