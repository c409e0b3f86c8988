"""tauvar: variance of the k-fold divisor function in arithmetic progressions.

Subpackages are imported explicitly (tauvar.arith, tauvar.characters,
tauvar.weights, tauvar.specfun, tauvar.constants, tauvar.variance,
tauvar.sweep, tauvar.verify, tauvar.plotting); the command-line surface
lives in tauvar.cli.
"""

from ._version import __version__

__all__ = ["__version__"]
