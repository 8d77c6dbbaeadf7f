"""Exact and numerical checks of high-low temperature duality for beta ensembles."""

import json

from . import _core
from ._core import (
    ConvergenceError,
    OrderUnderflow,
    PoleError,
    density_moment,
    exact_moment,
    harmonic_two_point,
    high_temp_density,
    high_temp_resolvent,
    moments_text,
    poly_zeros,
    sample_spectrum,
    stieltjes_pv,
)

__all__ = [
    "ConvergenceError",
    "OrderUnderflow",
    "PoleError",
    "cli",
    "crystallize",
    "density_moment",
    "dual_check",
    "exact_moment",
    "harmonic_two_point",
    "high_temp_density",
    "high_temp_resolvent",
    "mc_moments",
    "moments",
    "moments_text",
    "poly_zeros",
    "sample_spectrum",
    "stieltjes_pv",
]


def moments(family, order, regime="low", source="rederived"):
    return json.loads(_core.moments_json(family, order, regime, source))


def dual_check(identity, order):
    return json.loads(_core.dual_check_json(identity, order))


def crystallize(family, n, a=0.0, b=0.0, tol=1e-12):
    return json.loads(_core.crystallize_json(family, n, a, b, tol))


def mc_moments(family, n, kappa, a=0.0, k_max=4, samples=10000, seed=1):
    return json.loads(_core.mc_moments_json(family, n, kappa, a, k_max, samples, seed))


def cli(*args):
    """Run the command-line tool in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
