import os

from lipsolve._version import __version__

# Tolerance applied to user-supplied tables, priors and predictive rows
PROBABILITY_TOLERANCE = 1e-12

# The following options are the defaults picked up by SolverConfig
ALGORITHM = "frank-wolfe"
FLOOR = 0.0
MAX_ITERATIONS = 20000
CERTIFICATE_TOLERANCE = 1e-8
LINE_SEARCH_TOLERANCE = 1e-12
STEP_SIZE = 1.0

# Geometric floor schedule 2^-k, k = 1..20, used by annealed solves
ANNEAL_FLOORS = tuple(2.0**-k for k in range(1, 21))
ANNEAL_TOLERANCE = 1e-5
# Last floor of the D_q minimization in the dominator, after the schedule
FINISH_FLOOR = 1e-12

# Reporting conventions
SUPPORT_THRESHOLD = 1e-4
# x-marginals at or below this count as empty when deciding to anneal
MARGINAL_THRESHOLD = 1e-9
DOMINANCE_SLACK = 1e-6

# Experiment defaults
DEFAULT_GRID = tuple(k / 10 for k in range(11))
FIGURE1_N = (0, 5, 20, 100)
FIGURE1_M = (1, 5, 100, 1000)

# Sweep parallelism, overridden by LIPSOLVE_THREADS in lipsolve_sweep
THREADS = os.cpu_count() or 1

USER_AGENT = f"lipsolve/v{__version__}"
