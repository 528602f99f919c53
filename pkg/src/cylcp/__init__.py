"""Casimir-Polder free energy of an atom near a hollow cylindrical shell."""
from .asymptotics import regime_parameters
from .free_energy import EvalSettings, PotentialResult
from .materials import AtomModel, Kind, PermittivityModel, atom_preset, material_preset
from .scattering import ShellGeometry

# the evaluator lives at ``cylcp.free_energy.free_energy``; re-exporting it here
# would shadow the submodule
__version__ = "0.1.0"

__all__ = [
    "AtomModel",
    "EvalSettings",
    "Kind",
    "PermittivityModel",
    "PotentialResult",
    "ShellGeometry",
    "atom_preset",
    "material_preset",
    "regime_parameters",
]
