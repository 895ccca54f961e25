"""Projection hybrid FV/FE solver for low Mach number flows.

Subpackages
-----------
mesh        box tetrahedral meshes and the face-centred dual FV mesh
adr1d       1D advection-diffusion-reaction schemes with variable coefficients
transport   3D transport-diffusion stage on the dual mesh
projection  pre-projection thermodynamics and the P1 pressure correction
cases       manufactured test cases and the source-term residual oracle
harness     error norms, CFL control, convergence drivers
"""

__version__ = "0.1.0"

from . import adr1d, cases, harness, mesh, projection, transport  # noqa: F401,E402
from ._backend import kernel_backend, set_kernel_backend  # noqa: F401,E402
