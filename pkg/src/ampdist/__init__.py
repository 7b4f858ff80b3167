"""Amplitude distributions on extended phase spaces.

Quantum states are represented by complex or quaternion valued amplitude
distributions over product spaces of magnitude values.  Marginal amplitudes
plus Born's rule reproduce the standard quantum predictions for spin
ensembles, singlet correlations, two-slit interference and position-momentum
phase space, while strictly positive classical probability mixtures provably
cannot.
"""

from ampdist._backend import backend_name
from ampdist.algebra import Quaternion, UnitVector3

__version__ = "0.1.0"

__all__ = ["Quaternion", "UnitVector3", "backend_name", "__version__"]
