"""Numerical checks for conformal deformations of minimal cones."""

from ._conelab import (
    Error,
    covering,
    deflection_radius,
    h_eval,
    indicial_exponent,
    kappa_difference,
    lambda0,
    lambda0_closed_form,
    list_scenarios,
    run_scenario,
)

__all__ = [
    "Error",
    "covering",
    "deflection_radius",
    "h_eval",
    "indicial_exponent",
    "kappa_difference",
    "lambda0",
    "lambda0_closed_form",
    "list_scenarios",
    "run_scenario",
]
