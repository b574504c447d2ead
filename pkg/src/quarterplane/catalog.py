"""Named built-in data triples (u0, g0, f).

Built-ins carry closed-form transforms where they exist, so solver calls
on them avoid numerical half-line quadrature.
"""

from .expr import from_expressions

__all__ = ["BUILTIN_DATA", "builtin_data"]


def _exp_hat(lam):
    return 1.0 / (1.0 + 1j * lam)


# name -> (u0, g0, f, u0_hat, description)
BUILTIN_DATA = {
    "zero": ("0", "0", "0", None, "zero data; the UTM solution vanishes"),
    "step": ("0", "1", "0", None, "boundary step u0 = 0, g0 = 1: incompatible at the corner"),
    "exp-decay": ("exp(-x)", "1", "0", _exp_hat,
                  "u0 = exp(-x), g0 = 1; continuous at the corner only"),
    "exp-compat": ("exp(-x)", "exp(t)", "0", _exp_hat,
                   "u0 = exp(-x), g0 = exp(t); solution exp(t - x) for both equations"),
}


def builtin_data(name):
    try:
        u0, g0, f, u0_hat, _ = BUILTIN_DATA[name]
    except KeyError:
        raise KeyError(f"unknown built-in datum {name!r}; "
                       f"choose from {', '.join(sorted(BUILTIN_DATA))}") from None
    return from_expressions(u0, g0, f, u0_hat=u0_hat, name=name)
