# -*- coding: utf-8 -*-
"""Numerical tolerances and fixed conventions shared across the package"""
import math

NORM_TOL = 1e-12  # Unit norm of kets
OPERATOR_TOL = 1e-10  # Hermiticity, trace and positivity of density operators
JONES_TOL = 1e-12

DEG = math.pi / 180.

# Order in which the canonical global phase reference is chosen among equal magnitudes
PHASE_TIE_RTOL = 1e-9

# RNG stream tags, keeps count simulation and bootstrap resampling independent
STREAM_COUNTS = 0
STREAM_BOOTSTRAP = 1
STREAM_STABILITY = 2
