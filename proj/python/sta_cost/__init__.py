"""Intrinsic cost of counterdiabatic harmonic-oscillator shortcuts."""

import json

from ._core import (
    AccuracyError,
    ConfigError,
    StaError,
    ValidityError,
    counterdiabatic_omega2,
    delta_n,
    f_curve,
    laguerre,
    sta_beta_sq,
    wigner,
)
from . import _core

__all__ = [
    "AccuracyError",
    "ConfigError",
    "StaError",
    "ValidityError",
    "cost",
    "counterdiabatic_omega2",
    "delta_n",
    "f_curve",
    "laguerre",
    "run",
    "sta_beta_sq",
    "validity",
    "wigner",
]


def cost(omega0, delta, tau, **drive):
    """CostReport of an arctan protocol as a dict."""
    return json.loads(_core.cost(omega0, delta, tau, **drive))


def validity(omega0, delta, tau):
    """Minimum of Omega^2 and whether the analytic bound holds."""
    return json.loads(_core.validity(omega0, delta, tau))


def run(command, config, fmt="", seed=None, threads=1):
    """Run a subcommand on a config dict; returns (exit_code, text)."""
    return _core.run(command, json.dumps(config), fmt, seed, threads)
