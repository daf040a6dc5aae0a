"""Exact verification tools for the quantum toroidal algebra of type A1.

The submodules are layered: ``scalars`` and ``polyalg`` supply exact
arithmetic, ``lattice`` and ``fock`` build the Fock module, ``fields`` and
``coproduct`` expand currents on it, and ``verifier`` checks relations and
identities over finite windows.
"""

from qtoroidal.fields import FieldHandle, apply_field_coefficient
from qtoroidal.fock import FockBasisVector, FockState, parse_state
from qtoroidal.lattice import Weight
from qtoroidal.scalars import Scalar
from qtoroidal.verifier import DEFAULT_WINDOW, Report, Window, run_suite

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_WINDOW",
    "FieldHandle",
    "FockBasisVector",
    "FockState",
    "Report",
    "Scalar",
    "Weight",
    "Window",
    "apply_field_coefficient",
    "parse_state",
    "run_suite",
]
