"""Planar Hamiltonian reductions of a critical nonlinear Dirac equation.

Subpackages:
    numerics    - adaptive RK integration, root finding, endpoint-weighted quadrature
    clifford    - exact anticommuting matrix families and the chirality operator
    ansatz      - radial two-function spinor fields and profile transforms
    autonomous  - conservative planar system: orbits, periods, bifurcation count
    dissipative - nonautonomous system: shooting classification and rescaled limit
    cli         - batch command-line interface with CSV/JSON/SVG outputs
"""

from . import ansatz, autonomous, clifford, dissipative, numerics, serialize, svg

__all__ = ["ansatz", "autonomous", "clifford", "dissipative", "numerics",
           "serialize", "svg"]
__version__ = "0.1.0"
