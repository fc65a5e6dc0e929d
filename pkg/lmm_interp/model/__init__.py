"""
Initialization Module for Model
"""

DEFAULT_DELTA = 0.25
TENOR_DATE_TOLERANCE = 1e-12
FINITE_DIFFERENCE_STEP = 1e-6
SENSITIVITY_RELATIVE_STEP = 1e-6
