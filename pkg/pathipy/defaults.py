# -*- coding: utf-8 -*-
"""Place for pathipy defaults"""

TRUNCATION = 4

MLE_MAX_ITER = 10000
MLE_TOL = 1e-10
MLE_DILUTION = 0.5
MLE_MIN_DILUTION = 1e-6
MLE_MAX_DILUTION = 100.
MLE_START_FLOOR = 1e-6  # smallest eigenvalue of the starting estimate

BOOTSTRAP_RESAMPLES = 100
MIN_RESAMPLES = 10

MIN_FRINGE_POINTS = 8

LOG_LEVEL = 'WARNING'

# Experiments
TOMOGRAPHY_RATE = 10000.  # pairs per second
PHASE_SCAN_POINTS = 24
PHASE_SCAN_RATE = 500.
SPECTRUM_MODES = (-2, -1, 0, 1, 2)
STABILITY_STEPS = 60
STABILITY_DRIFT = 0.05  # rad per step without the lock
