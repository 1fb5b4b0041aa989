"""Bound states of the radial Klein-Gordon equation.

An algebraic solver (exponent formulas plus Jacobi/Laguerre polynomials of a
normal-form ODE) for seven potentials, and an independent shooting oracle.
"""

__version__ = "0.1.0"

from .eigensolver import BoundState, EnergyWindow, coulomb_energy, solve_energy, spectrum
from .framework import OdeParameters, solve_exponents
from .potentials import (
    CATALOG,
    Coulomb,
    Hulthen,
    KratzerFues,
    Mie,
    NonCentralRadial,
    PoschlTeller,
    WoodsSaxon,
    map_potential,
    spec_from_dict,
)

__all__ = [
    "BoundState",
    "CATALOG",
    "Coulomb",
    "EnergyWindow",
    "Hulthen",
    "KratzerFues",
    "Mie",
    "NonCentralRadial",
    "OdeParameters",
    "PoschlTeller",
    "WoodsSaxon",
    "coulomb_energy",
    "map_potential",
    "solve_energy",
    "solve_exponents",
    "spec_from_dict",
    "spectrum",
]
