"""Lattice coding theory for GKP codes.

Subpackages mirror the pipeline: exact matrix arithmetic (`exactmat`),
symplectic forms and normal forms (`symplectic`), the code object
(`gkpcode`), named and composite lattice builders (`constructions`), lattice
algorithms (`latalg`), NTRU key/lattice machinery (`ntru`), decoders
(`decode`), logical Clifford tooling (`clifford`), and Fock-space Floquet
numerics (`floquet`).  `gkplat.cli` exposes the command-line front end.
"""

from .enumkernel import BACKEND as ENUM_BACKEND

__version__ = "0.1.0"
__all__ = ["ENUM_BACKEND", "__version__"]
