"""Classical and simulated-quantum ground-state energy estimation with
oracle/query cost accounting and speedup bookkeeping."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .eigensolver import (
    EigenResult,
    InverseIterConfig,
    cg_solve,
    dense_smallest_eigenvalue,
    inverse_iterate,
    trivial_estimate,
)
from .grid import (
    GridHamiltonian,
    GridSpec,
    continuum_ground_energy_V0,
    laplacian_mode_energy,
)
from .potential import PotentialOracle, PotentialSpec, parse_potential, validate_class
