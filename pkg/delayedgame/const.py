"""Constants for the delayedgame package."""

from typing import Final

# DOMAIN

# Slack on |u| <= 1, |v| <= 1 and Re(theta) >= 0, so that points sampled on the
# unit circle (e.g. exp(2*pi*i*k/n)) are accepted despite rounding.
DOMAIN_TOLERANCE: Final[float] = 1e-12

# SERIES CALCULUS

# |1 - b| at or below this value switches the geometric D-operator to the b = 1 branch.
BRANCH_TOLERANCE: Final[float] = 1e-9
# Between BRANCH_TOLERANCE and this value the geometric sum is evaluated term by term.
NEAR_ONE_WINDOW: Final[float] = 1e-3
# |b| at or below this value degenerates 1/(1 - bx) to 1.
ZERO_TOLERANCE: Final[float] = 1e-14
# Smallest admissible |c_00| for a series reciprocal.
SINGULAR_TOLERANCE: Final[float] = 1e-14

# Cauchy/FFT coefficient extraction used when the inner function is not rational.
CAUCHY_RADIUS: Final[float] = 0.8
CAUCHY_MIN_GRID: Final[int] = 128

# INVERSION

# Minimal distance between two poles of a rational Laplace transform.
POLE_SEPARATION: Final[float] = 1e-9
MAX_TOTAL_MULTIPLICITY: Final[int] = 400

# Erlang mixtures: phase counts are kept up to mean + PHASE_TAIL_SPREAD * sd, and
# Poisson weights are summed over rate * t +- (POISSON_WINDOW * sqrt(rate * t) + 20).
PHASE_TAIL_SPREAD: Final[float] = 40.0
POISSON_WINDOW: Final[float] = 10.0
MIXTURE_BLOCK: Final[int] = 4096

# Abate-Whitt Euler algorithm: discretisation error is about exp(-EULER_A).
EULER_A: Final[float] = 25.0
EULER_TERMS: Final[int] = 38
EULER_AVERAGING: Final[int] = 11
EULER_CONVERGENCE_TOLERANCE: Final[float] = 1e-6

PMF_NEGATIVE_TOLERANCE: Final[float] = 1e-12
PMF_FFT_NEGATIVE_WARNING: Final[float] = 1e-9
PDF_NEGATIVE_TOLERANCE: Final[float] = 1e-9
IMAGINARY_RESIDUE_TOLERANCE: Final[float] = 1e-10

# SIMULATION

BATCH_SIZE: Final[int] = 65_536
MAX_OBSERVATIONS: Final[int] = 10_000_000

# CLI

DUAL_PATH_TOLERANCE: Final[float] = 1e-6
SIGNIFICANT_DIGITS: Final[int] = 17
