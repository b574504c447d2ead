"""Contour-integral solutions of quarter-plane heat and linear KdV problems.

Modules
-------
contour     paths in the spectral plane and adaptive quadrature along them
transforms  half-line transforms of the data (u0, g0, f)
heat        u_t = u_xx + f: boundary-step solution, its time derivatives, general data
kdv         u_t + u_xxx = f: the same for linear KdV
nonuniq     certified non-uniqueness witnesses
verify      sampled checks of PDE, traces, compatibility, decay, L2 integrability
oracle      closed-form references independent of the contour engine
expr        expression language with exact derivatives, for user data
catalog     built-in data
cli         command-line front end
"""

from .contour import DEFAULT_TOL, QuadratureError
from .heat import example1_u, example1_v, heat_un, solve_heat
from .kdv import example2_u, example2_v, kdv_un, solve_kdv
from .transforms import HalfLineData
from .catalog import builtin_data
from .expr import from_expressions

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "QuadratureError",
    "HalfLineData",
    "builtin_data",
    "from_expressions",
    "example1_v",
    "example1_u",
    "heat_un",
    "solve_heat",
    "example2_v",
    "example2_u",
    "kdv_un",
    "solve_kdv",
]
