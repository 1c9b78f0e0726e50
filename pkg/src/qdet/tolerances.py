"""Numerical tolerances used across the package.

All theory here assumes exact arithmetic; these bands absorb floating-point
error.  Validation is absolute unless a function documents otherwise.
"""

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
ORTHO_TOL = 1e-10
NORM_TOL = 1e-10
PSD_TOL = 1e-10
RECONSTRUCT_TOL = 1e-9
IMAG_TOL = 1e-10

COMPLETENESS_TOL = 1e-10
# Rank decisions use RANK_TOL_BASE * max(1, largest eigenvalue / singular value)
# so that scaled problems are classified consistently.
RANK_TOL_BASE = 1e-10

ETA_ZERO_TOL = 1e-10
FRAME_TOL = 1e-10
