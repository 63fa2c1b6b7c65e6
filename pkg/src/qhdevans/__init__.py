"""Spectral stability toolkit for dispersive shocks of quantum hydrodynamics.

Modules: :mod:`model` (end states, jump conditions), :mod:`profile` (traveling
waves), :mod:`essential` (essential spectrum), :mod:`hfbound` (high-frequency
radius), :mod:`evans` (compound Evans function) and :mod:`contour` (contours,
Kato initialization, winding numbers).
"""
from .model import EndState, ModelParams, ShockData, reference_shock
from .profile import TravelingWave, compute_profile
from .evans import evans_eval
from .contour import ContourSpec, make_contour, evaluate_contour, winding_number
from .hfbound import certified_radius

__all__ = [
    "EndState",
    "ModelParams",
    "ShockData",
    "reference_shock",
    "TravelingWave",
    "compute_profile",
    "evans_eval",
    "ContourSpec",
    "make_contour",
    "evaluate_contour",
    "winding_number",
    "certified_radius",
]
__version__ = "0.1.0"
