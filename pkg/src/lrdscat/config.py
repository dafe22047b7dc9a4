"""Declarative run configuration with strict, path-reporting validation.

A config is a JSON object whose nested keys mirror ``RunConfig``.  Unknown
keys and ill-typed values raise ``ConfigError`` naming the dotted key path
(``model.beta``, ``campaign.runs[1].ratio``, ...).
"""
from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

from .errors import ConfigError

SUBCOMMANDS = ("simulate", "scatter", "constants", "diagrams", "validate", "fit", "list-presets")
OPERATIONS = ("assumption5_ratio", "variance_scaling", "fdd_convergence", "theorem_convergence", "prop31_decay")

NUM = (int, float)
OPT_NUM = (int, float, type(None))
INT = (int,)
STR = (str,)
BOOL = (bool,)
FREE_MAP = "free-map"  # string keys, numeric values

ENVELOPE = {"kind": STR, "c": NUM, "scale": NUM}
MODEL = {
    "beta": NUM,
    "envelope": ENVELOPE,
    "cutoff": OPT_NUM,
    "short_range": BOOL,
    "convention": STR,
    "degenerate": BOOL,
}
WAVELET = {"kind": STR, "omega0": NUM, "order": INT, "power": NUM, "lo": NUM, "hi": NUM, "name": STR}
SUBORDINATOR = {"kind": STR, "shift": NUM, "weights": FREE_MAP, "c1": NUM, "c2": NUM, "path": STR}
CAMPAIGN_KEYS = {
    "operations": ("list", STR),
    "j1_grid": ("list", INT),
    "ratio": OPT_NUM,
    "j2_map": FREE_MAP,
    "replicates": INT,
    "n": INT,
    "dt": OPT_NUM,
    "t_points": ("list", NUM),
    "counterexample": BOOL,
    "time_average": BOOL,
    "descriptive": BOOL,
    "label": STR,
}
RUN = {**CAMPAIGN_KEYS, "model": MODEL, "wavelet": WAVELET, "subordinator": SUBORDINATOR, "gaussian_input": BOOL}
CAMPAIGN = {**CAMPAIGN_KEYS, "runs": ("list", RUN)}

SCHEMA = {
    "subcommand": STR,
    "preset": (str, type(None)),
    "seed": INT,
    "workers": INT,
    "out": STR,
    "model": MODEL,
    "wavelet": WAVELET,
    "subordinator": (SUBORDINATOR, type(None)),
    "campaign": CAMPAIGN,
    "simulate": {"n": INT, "dt": NUM, "method": STR, "replicates": INT, "format": STR},
    "scatter": {"input": STR, "n": INT, "dt": NUM, "j1": INT, "j2": INT, "ratio": NUM, "t_points": ("list", NUM),
                "counterexample": BOOL},
    "constants": {"m": INT},
    "diagrams": {"order": ("list", INT), "cov": ("list", ("list", NUM)), "enumerate": BOOL},
    "fit": {"input": STR, "dt": NUM, "segment_length": INT, "n_boot": INT, "grid_points": INT, "z_max": NUM},
}


def _type_name(types):
    names = [t.__name__ for t in types]
    return " or ".join("null" if n == "NoneType" else n for n in names)


def _check(value, rule, path):
    if rule == FREE_MAP:
        if not isinstance(value, dict):
            raise ConfigError(path, "expected an object")
        for k, v in value.items():
            if isinstance(v, bool) or not isinstance(v, NUM):
                raise ConfigError(f"{path}.{k}", "expected a number")
        return
    if isinstance(rule, dict):
        if not isinstance(value, dict):
            raise ConfigError(path, "expected an object")
        for k, v in value.items():
            sub = f"{path}.{k}" if path else k
            if k not in rule:
                raise ConfigError(sub, "unknown key")
            _check(v, rule[k], sub)
        return
    if isinstance(rule, tuple) and rule and rule[0] == "list":
        if not isinstance(value, list):
            raise ConfigError(path, "expected a list")
        for i, v in enumerate(value):
            _check(v, rule[1], f"{path}[{i}]")
        return
    # a tuple of alternatives: python types, or a nested schema plus None
    if any(isinstance(r, dict) for r in rule):
        if value is None and type(None) in rule:
            return
        _check(value, next(r for r in rule if isinstance(r, dict)), path)
        return
    if isinstance(value, bool) and bool not in rule:
        raise ConfigError(path, f"expected {_type_name(rule)}, got a boolean")
    if not isinstance(value, rule):
        raise ConfigError(path, f"expected {_type_name(rule)}, got {type(value).__name__}")
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(path, "must be finite")


@dataclass
class RunConfig:
    subcommand: str
    preset: str | None = None
    seed: int = 0
    workers: int = 1
    out: str = "out"
    model: dict = field(default_factory=dict)
    wavelet: dict = field(default_factory=dict)
    subordinator: dict | None = None
    campaign: dict = field(default_factory=dict)
    simulate: dict = field(default_factory=dict)
    scatter: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    fit: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d):
        _check(d, SCHEMA, "")
        if "subcommand" not in d:
            raise ConfigError("subcommand", "missing")
        cfg = cls(**copy.deepcopy(d))
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"not valid JSON ({exc.msg} at line {exc.lineno})") from None
        return cls.from_dict(d)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_dict(self):
        d = asdict(self)
        # drop empty sections so the canonical form stays small
        return {k: v for k, v in d.items() if v not in ({}, None) or k in ("subcommand",)}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def canonical(self):
        """The config without fields that cannot change results (output location, worker count)."""
        d = self.to_dict()
        for k in ("out", "workers"):
            d.pop(k, None)
        return d

    def config_hash(self):
        return hashlib.sha256(json.dumps(self.canonical(), sort_keys=True).encode()).hexdigest()[:16]

    def merged(self, overrides):
        d = self.to_dict()
        _deep_update(d, overrides)
        return RunConfig.from_dict(d)

    # -- semantic checks --------------------------------------------------------
    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError("subcommand", f"must be one of {', '.join(SUBCOMMANDS)}")
        if self.workers < 1:
            raise ConfigError("workers", "must be at least 1")
        if self.seed < 0:
            raise ConfigError("seed", "must be nonnegative")
        if self.model:
            _check_model(self.model, "model")
        for i, run in enumerate(self.campaign.get("runs", [])):
            if "model" in run:
                _check_model(run["model"], f"campaign.runs[{i}].model")
        for key in ("operations",):
            for i, op in enumerate(self.campaign.get(key, [])):
                if op not in OPERATIONS:
                    raise ConfigError(f"campaign.operations[{i}]", f"unknown operation {op!r}")
        for i, run in enumerate(self.campaign.get("runs", [])):
            for k, op in enumerate(run.get("operations", [])):
                if op not in OPERATIONS:
                    raise ConfigError(f"campaign.runs[{i}].operations[{k}]", f"unknown operation {op!r}")
        for name, sec in (("simulate", self.simulate), ("campaign", self.campaign)):
            n = sec.get("n")
            if n is not None and (n <= 0 or n & (n - 1)):
                raise ConfigError(f"{name}.n", f"must be a power of two, got {n}")
        return self


def _check_model(m, path):
    short = m.get("short_range", False)
    if "beta" not in m:
        raise ConfigError(f"{path}.beta", "missing")
    b = m["beta"]
    if short:
        if b != 1:
            raise ConfigError(f"{path}.beta", "short-range models use beta = 1")
    elif not 0 < b < 1:
        raise ConfigError(f"{path}.beta", f"must lie strictly in (0, 1), got {b}")
    c = m.get("cutoff")
    if c is not None and c <= 0:
        raise ConfigError(f"{path}.cutoff", "must be positive")
    if m.get("convention", "standard") not in ("standard", "caption"):
        raise ConfigError(f"{path}.convention", "must be 'standard' or 'caption'")
    env = m.get("envelope", {})
    if env.get("kind", "constant") not in ("constant", "gaussian", "lorentzian"):
        raise ConfigError(f"{path}.envelope.kind", "must be constant, gaussian or lorentzian")
    if env.get("kind", "constant") == "constant" and c is None:
        raise ConfigError(f"{path}.cutoff", "a constant envelope needs a cutoff to be integrable")


def _deep_update(d, overrides):
    for k, v in overrides.items():
        if isinstance(v, dict) and isinstance(d.get(k), dict) and k not in ("weights", "j2_map"):
            _deep_update(d[k], v)
        else:
            d[k] = v


# -- builders -------------------------------------------------------------------------
def _wrap(path, func, *args):
    try:
        return func(*args)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(path, str(exc)) from None


def build_model(d, path="model"):
    from .spectral import SpectralModel

    if not d:
        raise ConfigError(path, "missing")
    _check_model(d, path)
    return _wrap(path, SpectralModel.from_dict, d)


def build_wavelet(d, path="wavelet"):
    from .wavelets import Wavelet

    d = dict(d or {"kind": "mexican_hat"})
    if "name" in d:
        name = d.pop("name")
        if d:
            raise ConfigError(f"{path}.name", "give either a name or explicit fields")
        return _wrap(f"{path}.name", Wavelet.from_name, name)
    return _wrap(path, Wavelet.from_dict, d)


def build_subordinator(d, path="subordinator"):
    from . import hermite

    if d is None:
        return None
    if "kind" not in d:
        raise ConfigError(f"{path}.kind", "missing")
    return _wrap(path, hermite.from_dict, d)
