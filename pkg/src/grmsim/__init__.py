"""Deterministic 2D multi-agent simulator for visual collision avoidance.

Agents walk a toroidal arena and stop when generalized regressive motion
(GRM) or looming on their two-eyed retinas exceeds a threshold.  The package
bundles the closed-form geometry the behavior rests on, the perception and
control model, trial execution, encounter classification, and a sweep
harness that maps the safety/mobility tradeoff.
"""

from . import analysis, dynamics, engine, geometry, harness, perception

__all__ = ["analysis", "dynamics", "engine", "geometry", "harness", "perception"]
__version__ = "0.1.0"
