"""latshell: exact shell enumeration and spherical design verification.

The package verifies, with exact arithmetic everywhere it matters, the
standard facts used when classifying integral lattices by the design
strength of their small shells: theta coefficients, shell configurations,
moment-criterion design tests, root system decompositions, and the
block-design / binary-code bridges for the sixteen-dimensional cases.
"""

from .lattice import Lattice, hnf_basis
from .shells import ShellSet, enumerate_shell, minimum, theta_prefix
from .design import (
    Configuration,
    c_coefficient,
    configuration,
    design_strength,
    distance_set,
    is_t_design,
    moment_sum,
)

__version__ = "0.1.0"

__all__ = [
    "Lattice",
    "hnf_basis",
    "ShellSet",
    "enumerate_shell",
    "minimum",
    "theta_prefix",
    "Configuration",
    "c_coefficient",
    "configuration",
    "design_strength",
    "distance_set",
    "is_t_design",
    "moment_sum",
    "__version__",
]
