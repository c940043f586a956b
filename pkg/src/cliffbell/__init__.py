"""Cliffbell verifies a bivector model of EPR-Bohm correlations in the Clifford algebra Cl(3,0).

It provides a dense Cl(3,0) kernel, the two-point microstate ensemble, the CHSH and
Malus derivations, an independent singlet-state reference, and seeded verification
suites with deterministic JSON/CSV reports.
"""

__author__ = 'Cliffbell Development Team'
from .version import __version__ as __version__
