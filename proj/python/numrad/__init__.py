"""Numerical radius r(A) = max |x*Ax| over unit x, by level sets, cutting planes or both."""

import json

import numpy as np

from . import _core
from ._core import (
    cuts_needed,
    disk_min_planes,
    disk_refined_planes,
    fiedler_curvature,
    gallery_families,
    grid_oracle,
    optimal_angle_rate,
    read_matrix_market,
    rho_derivatives,
    simulate_optimal_recursion,
    simulate_uhlig_recursion,
    uhlig_angle_rate,
    uhlig_modulus_rate,
    write_matrix_market,
)


class NonConvergence(RuntimeError):
    """Raised when a solver stops before reaching its tolerance; `.report` holds the partial result."""

    def __init__(self, report):
        super().__init__(f"{report['method']} did not converge (rel_err={report['rel_err']})")
        self.report = report


_SOLVERS = {"levelset": _core.levelset, "cutting": _core.cutting, "hybrid": _core.hybrid}


def solve(a, method="hybrid", tol=1e-14, **kwargs):
    """Return the solver report as a dict. Raises NonConvergence on a capped run."""
    if method not in _SOLVERS:
        raise ValueError(f"unknown method {method!r}; use one of {sorted(_SOLVERS)}")
    if method == "hybrid" and isinstance(kwargs.get("cost_model"), dict):
        kwargs["cost_model"] = json.dumps(kwargs["cost_model"])
    a = np.asarray(a, dtype=np.complex128)
    converged, text = _SOLVERS[method](a, tol, **kwargs)
    report = json.loads(text)
    if not converged:
        raise NonConvergence(report)
    return report


def numerical_radius(a, method="hybrid", tol=1e-14):
    return solve(a, method, tol)["r"]


def gallery(family, n=0, seed=0, **params):
    return _core.gallery(family, n, {k: float(v) for k, v in params.items()}, seed)


def calibrate(n, samples=3):
    return json.loads(_core.calibrate(n, samples))


__all__ = [
    "NonConvergence",
    "calibrate",
    "cuts_needed",
    "disk_min_planes",
    "disk_refined_planes",
    "fiedler_curvature",
    "gallery",
    "gallery_families",
    "grid_oracle",
    "numerical_radius",
    "optimal_angle_rate",
    "read_matrix_market",
    "rho_derivatives",
    "simulate_optimal_recursion",
    "simulate_uhlig_recursion",
    "solve",
    "uhlig_angle_rate",
    "uhlig_modulus_rate",
    "write_matrix_market",
]
