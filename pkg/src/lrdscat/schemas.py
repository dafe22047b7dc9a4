"""JSON Schema descriptions of every JSON artifact the CLI writes."""

_NUM = {"type": "number"}
_HASH = {"type": "string", "pattern": "^[0-9a-f]{16}$"}
_HEADER = {"config_hash": _HASH, "config": {"type": "object"}, "seed": {"type": "integer"}}

REPORT = {
    "type": "object",
    "required": ["operation", "rows", "fits", "checks", "passed", "notes", "provenance"],
    "properties": {
        "operation": {"type": "string"},
        "label": {"type": "string"},
        "rows": {"type": "array", "items": {"type": "object", "required": ["j1"]}},
        "fits": {"type": "object"},
        "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "passed": {"type": "boolean"},
        "notes": {"type": "array", "items": {"type": "string"}},
        "provenance": {"type": "object", "required": ["config_hash", "seed"]},
    },
}

VALIDATE = {
    "type": "object",
    "required": ["config_hash", "config", "seed", "reports", "passed"],
    "properties": {**_HEADER, "reports": {"type": "array", "items": REPORT}, "passed": {"type": "boolean"}},
}

CONSTANTS = {
    "type": "object",
    "required": ["config_hash", "sigma2", "gammas", "gamma_orders", "kappa", "truncation", "truncation_tail",
                 "limit_variance"],
    "properties": {
        **_HEADER,
        "sigma2": _NUM,
        "gammas": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "gamma_orders": {"type": "array", "items": {"type": "integer"}},
        "kappa": _NUM,
        "truncation": {"type": "integer"},
        "truncation_tail": _NUM,
        "limit_variance": _NUM,
        "coupling_window": {"type": ["array", "null"]},
    },
}

DIAGRAMS = {
    "type": "object",
    "required": ["config_hash", "order", "total", "regular", "non_regular"],
    "properties": {
        **_HEADER,
        "order": {"type": "array", "items": {"type": "integer"}},
        "total": {"type": "integer"},
        "regular": {"type": "integer"},
        "non_regular": {"type": "integer"},
        "moment": {"type": ["number", "null"]},
    },
}

HURST = {
    "type": "object",
    "required": ["config_hash", "beta", "ci_low", "ci_high", "short_range", "n_frequencies"],
    "properties": {
        **_HEADER,
        "beta": _NUM,
        "ci_low": _NUM,
        "ci_high": _NUM,
        "slope": _NUM,
        "short_range": {"type": "boolean"},
        "n_frequencies": {"type": "integer"},
        "n_segments": {"type": "integer"},
        "segment_length": {"type": "integer"},
    },
}

SCATTER = {
    "type": "object",
    "required": ["config_hash", "j1", "j2", "rounding", "factor"],
    "properties": {
        **_HEADER,
        "j1": {"type": "integer"},
        "j2": {"type": "integer"},
        "rounding": {"type": "string"},
        "factor": _NUM,
        "t_points": {"type": "array", "items": _NUM},
        "rescaled": {"type": "array", "items": _NUM},
    },
}

SIMULATE = {
    "type": "object",
    "required": ["config_hash", "files", "model_id", "n", "dt"],
    "properties": {**_HEADER, "files": {"type": "array", "items": {"type": "string"}}, "model_id": {"type": "string"},
                   "n": {"type": "integer"}, "dt": _NUM},
}

PRESETS = {
    "type": "array",
    "items": {"type": "object", "required": ["name", "subcommand", "description", "anchor"]},
}

BY_NAME = {
    "validate": VALIDATE,
    "constants": CONSTANTS,
    "diagrams": DIAGRAMS,
    "fit": HURST,
    "scatter": SCATTER,
    "simulate": SIMULATE,
    "list-presets": PRESETS,
}
