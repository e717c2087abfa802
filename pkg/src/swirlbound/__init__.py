"""Axisymmetric Navier-Stokes with swirl: a (Gamma, Omega) simulator and a
harness that checks a priori vorticity bounds against simulated data."""
from .grid import (AnnularGrid, HollowCylinder, ParabolicCylinder, SigmaSchedule,
                   hollow, make_grid, parabolic, region_mask, sigma)
from .evolution import EvolutionConfig, SwirlState, SwirlSystem, simulate

__all__ = [
    "AnnularGrid", "HollowCylinder", "ParabolicCylinder", "SigmaSchedule",
    "hollow", "make_grid", "parabolic", "region_mask", "sigma",
    "EvolutionConfig", "SwirlState", "SwirlSystem", "simulate",
]
__version__ = "0.1.0"
