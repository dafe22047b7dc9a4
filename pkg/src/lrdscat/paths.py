"""Uniformly sampled paths and their on-disk formats.

CSV: optional ``#`` provenance lines, then a ``t,value`` header row.
Binary: little-endian header ``b"LRDP" | u32 version | u64 n | f64 dt |
i64 seed | 16-byte model hash`` followed by ``n`` float64 values.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import LengthError, ParseError

MAGIC = b"LRDP"
VERSION = 1
_HEADER = struct.Struct("<4sIQdq16s")


def is_power_of_two(n):
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True, eq=False)
class SampledPath:
    values: np.ndarray
    dt: float = 1.0
    seed: int | None = None
    model_id: str = ""
    lineage: tuple = field(default=())

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("path values must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    @property
    def n(self):
        return self.values.size

    @property
    def times(self):
        return self.dt * np.arange(self.n)

    def derive(self, values, step):
        """New path on the same grid, recording ``step`` in the lineage."""
        return replace(self, values=values, lineage=self.lineage + (step,))

    def require_fft_length(self):
        if not is_power_of_two(self.n):
            raise LengthError(f"path length {self.n} is not a power of two")

    # -- CSV ----------------------------------------------------------------
    def to_csv(self, path, provenance=None):
        with open(path, "w") as fh:
            for k, v in (provenance or {}).items():
                fh.write(f"# {k}={v}\n")
            fh.write(f"# dt={float(self.dt)!r}\n# seed={self.seed}\n# model_id={self.model_id}\n")
            fh.write("t,value\n")
            for t, x in zip(self.times, self.values):
                fh.write(f"{float(t)!r},{float(x)!r}\n")

    @classmethod
    def from_csv(cls, path):
        meta, ts, xs = {}, [], []
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].strip().partition("=")
                    meta[key.strip()] = val.strip()
                    continue
                if line.lower().startswith("t,"):
                    continue
                parts = line.split(",")
                try:
                    if len(parts) == 1:
                        xs.append(float(parts[0]))
                    else:
                        ts.append(float(parts[0]))
                        xs.append(float(parts[1]))
                except ValueError as exc:
                    raise ParseError(lineno, str(exc)) from None
        if "dt" in meta:
            dt = float(meta["dt"])
        elif len(ts) >= 2:
            dt = ts[1] - ts[0]
        else:
            dt = 1.0
        seed = meta.get("seed")
        seed = int(seed) if seed not in (None, "", "None") else None
        return cls(np.array(xs), dt, seed, meta.get("model_id", ""))

    # -- binary -------------------------------------------------------------
    def to_binary(self, path):
        h = hashlib.sha256(self.model_id.encode()).digest()[:16]
        seed = -1 if self.seed is None else int(self.seed)
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, VERSION, self.n, float(self.dt), seed, h))
            fh.write(self.values.astype("<f8").tobytes())

    @classmethod
    def from_binary(cls, path):
        with open(path, "rb") as fh:
            raw = fh.read()
        magic, version, n, dt, seed, _ = _HEADER.unpack_from(raw)
        if magic != MAGIC or version != VERSION:
            raise ValueError("not a path file of a supported version")
        vals = np.frombuffer(raw, dtype="<f8", count=n, offset=_HEADER.size).copy()
        return cls(vals, dt, None if seed < 0 else seed, "")

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            head = fh.read(4)
        return cls.from_binary(path) if head == MAGIC else cls.from_csv(path)
