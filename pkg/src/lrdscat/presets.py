"""Shipped run recipes.

Each preset is a complete ``RunConfig`` dictionary plus a one-line
description and an anchor naming the figure or result it reproduces.
"""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass

from .config import RunConfig
from .errors import ConfigError

_LRD_01 = {"beta": 0.1, "envelope": {"kind": "constant", "c": 1.0}, "cutoff": 36.0}
_SRD = {"beta": 1.0, "envelope": {"kind": "lorentzian", "c": 1.0, "scale": 1.0}, "cutoff": 36.0, "short_range": True}
_LRD_03 = {"beta": 0.3, "envelope": {"kind": "constant", "c": 1.0}, "cutoff": math.pi}
_LRD_07 = {"beta": 0.7, "envelope": {"kind": "constant", "c": 1.0}, "cutoff": math.pi}
_DB8 = {"kind": "daubechies", "order": 8}
_MEXHAT = {"kind": "mexican_hat"}
_H123 = {"kind": "hermite_sum", "weights": {"1": 1.0, "2": 1.0, "3": 1.0}}
_H12 = {"kind": "hermite_sum", "weights": {"1": 1.0, "2": 1.0}}
_LAPLACE = {"kind": "laplace", "c1": 0.0, "c2": 1.0}


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    anchor: str
    config: dict

    def run_config(self, **overrides):
        d = copy.deepcopy(self.config)
        d["preset"] = self.name
        d.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(d)

    def summary(self):
        return {"name": self.name, "subcommand": self.config["subcommand"],
                "description": self.description, "anchor": self.anchor}


def _assumption5(model, ratio, grid, n, descriptive):
    # dt = 1/16 is the coarsest dyadic step whose Nyquist band covers the cutoff 36
    return {
        "subcommand": "validate",
        "model": model,
        "wavelet": _DB8,
        "subordinator": _H123,
        "campaign": {
            "operations": ["assumption5_ratio"],
            "j1_grid": grid,
            "ratio": ratio,
            "replicates": 200,
            "n": n,
            "dt": 0.0625,
            "time_average": True,
            "descriptive": descriptive,
        },
    }


# j2 = round(1.1 j1) equals j1 + 1 for j1 in 5..14, so the 1.1 grids start at 5
_CATALOG = [
    Preset("figure4a", "E[D^2] and E[D~^2] for H1+H2+H3 of a beta=0.1 process, db8, j2 = j1",
           "Figure 4, j₂(j₁)=j₁", _assumption5(_LRD_01, 1.0, list(range(3, 11)), 2**18, False)),
    Preset("figure4b", "E[D^2] and E[D~^2] for H1+H2+H3 of a beta=0.1 process, db8, j2 = round(1.1 j1)",
           "Figure 4, j₂(j₁)=1.1j₁", _assumption5(_LRD_01, 1.1, list(range(5, 11)), 2**19, False)),
    Preset("figure5a", "Same moments for a short-range input (1+lam^2)^-1 on (0,36), j2 = j1, descriptive only",
           "Figure 5, j₂(j₁)=j₁", _assumption5(_SRD, 1.0, list(range(3, 11)), 2**18, True)),
    Preset("figure5b", "Same moments for a short-range input (1+lam^2)^-1 on (0,36), j2 = round(1.1 j1), descriptive only",
           "Figure 5, j₂(j₁)=1.1j₁", _assumption5(_SRD, 1.1, list(range(5, 11)), 2**19, True)),
    Preset("prop33", "Gaussian input, beta=0.3, r=1.2: covariance distance and marginal KS to the Gaussian limit",
           "Gaussian-input double scaling limit of the second-order transform", {
               "subcommand": "validate",
               "model": _LRD_03,
               "wavelet": _MEXHAT,
               "subordinator": None,
               "campaign": {"operations": ["fdd_convergence"], "j1_grid": [4, 6, 8, 10], "ratio": 1.2,
                            "replicates": 2000, "n": 2**16, "dt": 1.0, "t_points": [-1.0, 0.0, 1.0]},
           }),
    Preset("thm34", "Laplace-marginal input, beta=0.3: folded-normal limit at r=1.2 and a counterexample run at r=2.5",
           "Non-Gaussian double scaling limit |C_A,1| |V|", {
               "subcommand": "validate",
               "model": _LRD_03,
               "wavelet": _MEXHAT,
               "subordinator": _LAPLACE,
               "campaign": {
                   "operations": ["theorem_convergence"], "replicates": 2000, "n": 2**16, "t_points": [0.0],
                   "runs": [
                       {"label": "inside", "j1_grid": [4, 6, 8, 10], "ratio": 1.2, "dt": 1.0},
                       # dt = 1/4 keeps j2 = round(2.5 j1) inside a 2^16 path
                       {"label": "counterexample", "j1_grid": [1, 2, 3, 4], "ratio": 2.5, "dt": 0.25,
                        "counterexample": True},
                   ],
               },
           }),
    Preset("rates", "Variance slopes of S and T (beta 0.3 and 0.7) and the normalized E[D^2] decay (beta 0.3, r=1.2)",
           "Variance scaling of S and T; normalized E[D^2] envelope", {
               "subcommand": "validate",
               "model": _LRD_03,
               "wavelet": _MEXHAT,
               "subordinator": _H12,
               "campaign": {
                   "j1_grid": [4, 5, 6, 7, 8, 9, 10], "ratio": 1.2, "replicates": 200, "n": 2**16, "dt": 1.0,
                   "time_average": True,
                   "runs": [
                       {"label": "variance-beta0.3", "operations": ["variance_scaling"]},
                       {"label": "variance-beta0.7", "operations": ["variance_scaling"], "model": _LRD_07},
                       {"label": "decay-beta0.3", "operations": ["prop31_decay"], "subordinator": _H123},
                   ],
               },
           }),
    Preset("mexhat-beta05", "Limit constants for the Mexican hat with C_G(0)=1, beta=0.5 (sigma2 = Gamma(9/4))",
           "Closed-form sigma^2 of the Mexican hat", {
               "subcommand": "constants",
               "model": {"beta": 0.5, "envelope": {"kind": "constant", "c": 1.0}, "cutoff": math.pi},
               "wavelet": _MEXHAT,
               "constants": {"m": 8},
           }),
    Preset("rectangle-beta05", "Limit constants for a flat spectrum on |lam|<1 (box wavelet, weight exponent cancelled)",
           "Rectangle spectrum, gamma_2 = 1/2 (sinc^2 oracle)", {
               "subcommand": "constants",
               "model": {"beta": 0.5, "envelope": {"kind": "constant", "c": 1.0}, "cutoff": math.pi},
               "wavelet": {"kind": "box", "power": 0.25, "lo": 0.0, "hi": 1.0},
               "constants": {"m": 8},
           }),
]

PRESETS = {p.name: p for p in _CATALOG}


def list_presets():
    return [p.summary() for p in _CATALOG]


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
