"""Exact Bloch bands of the periodic Poschl-Teller potential."""
__version__ = "0.1.0"

from .model import ModelParams, eval_potential_periodic, eval_potential_single
from .susy import bound_spectrum
from .cell_solutions import intertwined_basis
from .dispersion import discriminant, monodromy
from .bands import band_structure, find_band_edges

__all__ = [
    "ModelParams", "eval_potential_single", "eval_potential_periodic", "bound_spectrum",
    "intertwined_basis", "discriminant", "monodromy", "band_structure", "find_band_edges",
]
