"""Deterministic indoor flight-test platform for micro-quadrotor
inspection missions: world modeling, coverage path planning, vehicle and
localization simulation, mission control, and run analysis.
"""

__version__ = "0.1.0"
