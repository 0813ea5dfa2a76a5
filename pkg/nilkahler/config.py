"""This module contains configuration constants used across the package"""

from fractions import Fraction


# Transversality minimizer
MINIMIZER_RESTARTS = 16
MINIMIZER_ITERATIONS = 60
# Relative to the largest diagonal pairing
MINIMIZER_TOLERANCE = 1e-9
MINIMIZER_CONVERGENCE = 1e-12

# Numeric refutation candidates are rounded to this denominator before the exact recheck
RATIONALIZE_MAX_DENOMINATOR = 10**6

# Randomized falsification of transversality
FALSIFY_TRIALS = 200
FALSIFY_COORDINATE_BOUND = 3
DEFAULT_SEED = 0

# Coefficients tried by the bounded witness searches
WITNESS_SEARCH_SCALARS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2))

# Exit codes of the command line driver
EXIT_CERTIFIED = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3

# Logging
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_LEVEL = "WARNING"
