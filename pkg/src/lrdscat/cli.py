"""Command-line entry point.

    lrdscat [--seed N] [--workers N] [--out DIR] [--config FILE] <subcommand> [options]

Exit status: 0 on success, 1 when a validation check fails, 2 on a usage or
configuration error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import re
import sys

import numpy as np

from . import config as cfgmod
from .config import RunConfig
from .errors import ConfigError, LrdScatError
from .presets import get_preset, list_presets

log = logging.getLogger("lrdscat")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output helpers ---------------------------------------------------------------------
def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_table(path, columns, rows, meta):
    """CSV with ``# key=value`` provenance lines, then a header naming each column."""
    with open(path, "w") as fh:
        for k, v in meta.items():
            fh.write(f"# {k}={v}\n")
        fh.write(",".join(columns) + "\n")
        for r in rows:
            fh.write(",".join(_cell(x) for x in r) + "\n")


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _header(cfg):
    return {"config_hash": cfg.config_hash(), "config": cfg.canonical(), "seed": cfg.seed}


def _outdir(cfg):
    d = os.path.join(cfg.out, cfg.preset or cfg.subcommand)
    os.makedirs(d, exist_ok=True)
    return d


# -- subcommands --------------------------------------------------------------------------
def cmd_simulate(cfg):
    from .paths import SampledPath
    from .simulate import model_id, simulate_gaussian

    model = cfgmod.build_model(cfg.model)
    s = cfg.simulate
    n, dt = s.get("n", 2**14), s.get("dt", 1.0)
    method, reps, fmt = s.get("method", "spectral"), s.get("replicates", 1), s.get("format", "csv")
    if fmt not in ("csv", "binary"):
        raise ConfigError("simulate.format", "must be csv or binary")
    sub = cfgmod.build_subordinator(cfg.subordinator)
    out = _outdir(cfg)
    files = []
    for rep in range(reps):
        g = simulate_gaussian(model, n, dt, cfg.seed, replicate=rep, method=method)
        if sub is not None:
            g = SampledPath(np.asarray(sub(g.values), dtype=float), g.dt, g.seed, g.model_id, g.lineage + (sub.name,))
        name = f"path_{rep:04d}." + ("csv" if fmt == "csv" else "bin")
        if fmt == "csv":
            g.to_csv(os.path.join(out, name), {"config_hash": cfg.config_hash(), "replicate": rep})
        else:
            g.to_binary(os.path.join(out, name))
        files.append(name)
    write_json(os.path.join(out, "simulate.json"),
               {**_header(cfg), "files": files, "model_id": model_id(model), "n": n, "dt": dt})
    return EXIT_OK


def cmd_scatter(cfg):
    from .paths import SampledPath
    from .scattering import ScatteringConfig, first_order, normalization_factor, sample_indices, second_order, valid_slice
    from .simulate import simulate_gaussian

    s = cfg.scatter
    if "j1" not in s:
        raise ConfigError("scatter.j1", "missing")
    if ("j2" in s) == ("ratio" in s):
        raise ConfigError("scatter.j2", "give exactly one of scatter.j2 and scatter.ratio")
    wavelet = cfgmod.build_wavelet(cfg.wavelet)
    if "input" in s:
        path = SampledPath.load(s["input"])
        beta = cfg.model.get("beta", 0.5) if cfg.model else 0.5
    else:
        model = cfgmod.build_model(cfg.model)
        path = simulate_gaussian(model.normalized(), s.get("n", 2**14), s.get("dt", 1.0), cfg.seed)
        sub = cfgmod.build_subordinator(cfg.subordinator)
        if sub is not None:
            path = path.derive(np.asarray(sub(path.values), dtype=float), sub.name)
        beta = model.beta
    try:
        sc = ScatteringConfig(wavelet, beta, s["j1"], s.get("j2"), s.get("ratio"), s.get("counterexample", False))
    except LrdScatError as exc:
        raise ConfigError("scatter.ratio", str(exc)) from None
    j1, j2, rounding = sc.scales()
    u1 = first_order(path, wavelet, j1).values
    u2 = second_order(path, wavelet, j1, j2).values
    sl = valid_slice(path.n, path.dt, j1, j2)
    t = (np.arange(path.n) - path.n // 2) * path.dt
    out = _outdir(cfg)
    meta = {"config_hash": cfg.config_hash(), "j1": j1, "j2": j2, "dt": repr(path.dt),
            "units": "t in input time units; values in input units"}
    rows = zip(t[sl], path.values[sl], u1[sl], u2[sl])
    write_table(os.path.join(out, "scatter.csv"), ["t", "x", "U1", "U2"], rows, meta)
    res = {**_header(cfg), "j1": j1, "j2": j2, "rounding": rounding, "factor": normalization_factor(beta, j1, j2)}
    if "t_points" in s:
        idx, _ = sample_indices(path.n, path.dt, j2, s["t_points"], j1, j2)
        res.update(t_points=s["t_points"], rescaled=(res["factor"] * u2[idx]).tolist())
    write_json(os.path.join(out, "scatter.json"), res)
    return EXIT_OK


def cmd_constants(cfg):
    from .limits import coupling_window, limit_constants

    model = cfgmod.build_model(cfg.model)
    wavelet = cfgmod.build_wavelet(cfg.wavelet)
    m = cfg.constants.get("m", 8)
    if m < 1:
        raise ConfigError("constants.m", "must be at least 1")
    lc = limit_constants(model, wavelet, m)
    d = lc.to_dict()
    d["limit_variance"] = lc.kappa**2 * wavelet.norm2
    d["coupling_window"] = None if model.short_range else list(coupling_window(model.beta))
    out = _outdir(cfg)
    write_json(os.path.join(out, "constants.json"), {**_header(cfg), **d})
    write_table(os.path.join(out, "gammas.csv"), ["ell", "gamma"], sorted(lc.gammas.items()),
                {"config_hash": cfg.config_hash(), "units": "dimensionless"})
    return EXIT_OK


def cmd_diagrams(cfg):
    from .diagrams import enumerate_diagrams, hermite_moment, tally

    d = cfg.diagrams
    if "order" not in d:
        raise ConfigError("diagrams.order", "missing")
    order = d["order"]
    res = {**_header(cfg), **tally(order)}
    res["moment"] = hermite_moment(order, d["cov"]) if "cov" in d else None
    out = _outdir(cfg)
    if d.get("enumerate", False):
        p = len(order)
        pairs = [(i, k) for i in range(p) for k in range(i + 1, p)]
        rows = []
        for idx, dg in enumerate(enumerate_diagrams(order)):
            rows.append([idx, int(dg.regular)] + [dg.count(i, k) for i, k in pairs])
        write_table(os.path.join(out, "diagrams.csv"), ["index", "regular"] + [f"edges_{i}_{k}" for i, k in pairs],
                    rows, {"config_hash": cfg.config_hash(), "order": " ".join(map(str, order))})
    write_json(os.path.join(out, "diagrams.json"), res)
    return EXIT_OK


def cmd_fit(cfg):
    from .estimation import estimate_hurst, fit_subordinator, load_csv

    f = cfg.fit
    if "input" not in f:
        raise ConfigError("fit.input", "missing")
    data = load_csv(f["input"], f.get("dt", 1.0), f.get("segment_length"))
    sub = fit_subordinator(data)
    est = estimate_hurst(data, n_boot=f.get("n_boot", 200), seed=cfg.seed)
    zmax, k = f.get("z_max", 3.0), f.get("grid_points", 121)
    z = np.linspace(-zmax, zmax, k)
    out = _outdir(cfg)
    meta = {"config_hash": cfg.config_hash(), "source": f["input"]}
    write_table(os.path.join(out, "fitted_A.csv"), ["z", "A"], zip(z, sub(z)),
                {**meta, "units": "z standard normal; A in data units"})
    write_table(os.path.join(out, "spectrum.csv"), ["lambda", "periodogram"], zip(est.frequencies, est.periodogram),
                {**meta, "units": "lambda in rad per time unit; periodogram segment-averaged, lowest band only"})
    write_json(os.path.join(out, "hurst.json"), {**_header(cfg), **est.to_dict(), "n_segments": data.n_segments,
                                                 "segment_length": data.segment_length})
    return EXIT_OK


def _campaigns(cfg):
    """One ``(label, Campaign, operations, descriptive)`` per configured run."""
    from .limits import coupling_window
    from .validation import Campaign

    base = {k: v for k, v in cfg.campaign.items() if k != "runs"}
    runs = cfg.campaign.get("runs") or [{}]
    out = []
    for i, run in enumerate(runs):
        where = f"campaign.runs[{i}]" if cfg.campaign.get("runs") else "campaign"
        r = {**base, **run}
        model = cfgmod.build_model(r.get("model", cfg.model), f"{where}.model" if "model" in run else "model")
        wavelet = cfgmod.build_wavelet(r.get("wavelet", cfg.wavelet))
        sub_spec = r["subordinator"] if "subordinator" in run else cfg.subordinator
        sub = None if r.get("gaussian_input") else cfgmod.build_subordinator(sub_spec)
        for key in ("j1_grid", "operations"):
            if key not in r:
                raise ConfigError(f"{where}.{key}", "missing")
        j2_map = r.get("j2_map")
        if j2_map is not None:
            j2_map = {int(k): int(v) for k, v in j2_map.items()}
        try:
            c = Campaign(model, wavelet, tuple(r["j1_grid"]), sub, ratio=r.get("ratio"), j2_map=j2_map,
                         replicates=r.get("replicates", 200), n=r.get("n", 2**16), dt=r.get("dt"), seed=cfg.seed,
                         t_points=tuple(r.get("t_points", (0.0,))), counterexample=r.get("counterexample", False),
                         time_average=r.get("time_average", False), workers=cfg.workers, label=r.get("label", ""))
        except (LrdScatError, ValueError) as exc:
            raise ConfigError(where, str(exc)) from None
        windowed = {"theorem_convergence", "prop31_decay"} & set(r["operations"])
        if windowed and c.ratio is not None and not c.counterexample and not c.in_window():
            lo, hi = coupling_window(c.beta) if not c.model.short_range else (1.0, 1.0)
            raise ConfigError(f"{where}.ratio", f"{c.ratio} is outside the coupling window ({lo}, {hi:.6g}) "
                              f"needed by {', '.join(sorted(windowed))}; set counterexample to run it anyway")
        out.append((r.get("label", f"run{i}"), c, r["operations"], r.get("descriptive", False)))
    return out


def cmd_validate(cfg):
    from .validation import OPERATIONS

    if not cfg.campaign:
        raise ConfigError("campaign", "missing")
    plans = _campaigns(cfg)
    out = _outdir(cfg)
    reports = []
    for label, c, ops, descriptive in plans:
        for op in ops:
            log.info("running %s (%s)", op, label)
            kwargs = {"assert_decay": not descriptive} if op == "assumption5_ratio" else {}
            try:
                rep = OPERATIONS[op](c, **kwargs)
            except (LrdScatError, ValueError) as exc:
                raise ConfigError(f"campaign.operations ({label})", str(exc)) from None
            rep.provenance["run_config_hash"] = cfg.config_hash()
            stem = f"{label}_{op}" if label else op
            rep.write_csv(os.path.join(out, stem + ".csv"))
            d = rep.to_dict()
            d["label"] = label
            reports.append(d)
            status = "PASS" if rep.passed else "FAIL"
            print(f"{status} {label or '-'} {op} " + " ".join(f"{k}={v}" for k, v in rep.checks.items()))
    passed = all(r["passed"] for r in reports)
    write_json(os.path.join(out, "summary.json"), {**_header(cfg), "reports": reports, "passed": passed})
    return EXIT_OK if passed else EXIT_FAIL


def cmd_list_presets(cfg):
    cat = list_presets()
    for p in cat:
        print(f"{p['name']:<18} {p['subcommand']:<10} {p['description']}  [{p['anchor']}]")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "scatter": cmd_scatter,
    "constants": cmd_constants,
    "diagrams": cmd_diagrams,
    "validate": cmd_validate,
    "fit": cmd_fit,
    "list-presets": cmd_list_presets,
}


# -- argument parsing ----------------------------------------------------------------------
def _global_flags(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="master seed (default 0)")
    p.add_argument("--workers", type=int, default=d, help="worker processes for Monte Carlo runs (default 1)")
    p.add_argument("--out", default=d, help="output directory (default ./out)")
    p.add_argument("--config", default=d, help="JSON run configuration")
    p.add_argument("-v", "--verbose", action="store_true", default=d)


HELP = {
    "simulate": "write seeded Gaussian (or subordinated) sample paths",
    "scatter": "compute U[j1]X and U[j1,j2]X on one path",
    "constants": "limit constants sigma^2, gamma_l, kappa",
    "diagrams": "count complete diagrams and Hermite product moments",
    "validate": "run Monte Carlo campaigns and their checks",
    "fit": "fit A and beta from a recorded signal",
    "list-presets": "show the shipped presets",
}


def build_parser():
    p = _Parser(prog="lrdscat", description="Second-order scattering of long-memory processes.")
    _global_flags(p, False)
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=HELP[name], description=HELP[name])
        _global_flags(sp, True)
        if name != "list-presets":
            sp.add_argument("--preset", help="start from a shipped preset")
            sp.add_argument("--set", action="append", default=[], metavar="KEY.PATH=VALUE",
                            help="override one config entry (value parsed as JSON when possible)")
        if name == "simulate":
            sp.add_argument("--n", type=int)
            sp.add_argument("--dt", type=float)
            sp.add_argument("--method", choices=("spectral", "circulant"))
            sp.add_argument("--replicates", type=int)
        elif name == "fit":
            sp.add_argument("--input")
            sp.add_argument("--dt", type=float)
            sp.add_argument("--segment-length", type=int)
        elif name == "diagrams":
            sp.add_argument("--order", help="comma-separated level sizes, e.g. 3,3,4,4")
            sp.add_argument("--enumerate", action="store_true", default=None)
        elif name == "constants":
            sp.add_argument("--m", type=int)
        elif name == "scatter":
            sp.add_argument("--input")
            sp.add_argument("--j1", type=int)
            sp.add_argument("--j2", type=int)
            sp.add_argument("--ratio", type=float)
    return p


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


_INDEXED = re.compile(r"^([A-Za-z_][\w-]*)((?:\[\d+\])*)$")


def _set_path(d, dotted, value):
    """Assign ``value`` at a dotted path; ``runs[1]`` style indices address list items."""
    steps = []
    for part in dotted.split("."):
        m = _INDEXED.match(part)
        if not m:
            raise ConfigError(dotted, f"malformed key {part!r}")
        steps.append(m.group(1))
        steps.extend(int(i) for i in re.findall(r"\d+", m.group(2)))
    cur = d
    for pos, k in enumerate(steps[:-1]):
        where = dotted if pos == len(steps) - 2 else k
        if isinstance(k, int):
            if not isinstance(cur, list) or k >= len(cur):
                raise ConfigError(dotted, f"index {k} is out of range")
            cur = cur[k]
            continue
        if not isinstance(cur, dict):
            raise ConfigError(dotted, f"{k} is not inside an object")
        if cur.get(k) is None:
            cur[k] = [] if isinstance(steps[pos + 1], int) else {}
        cur = cur[k]
        if not isinstance(cur, (dict, list)):
            raise ConfigError(dotted, f"{where} is not an object or list")
    last = steps[-1]
    if isinstance(last, int):
        if not isinstance(cur, list) or last >= len(cur):
            raise ConfigError(dotted, f"index {last} is out of range")
    elif not isinstance(cur, dict):
        raise ConfigError(dotted, f"{last} is not inside an object")
    cur[last] = value


def assemble_config(args):
    name = args.subcommand
    d = {"subcommand": name}
    preset = getattr(args, "preset", None)
    if preset:
        p = get_preset(preset)
        if p.config["subcommand"] != name:
            raise ConfigError("preset", f"{preset!r} is a {p.config['subcommand']} preset, not {name}")
        d = json.loads(json.dumps(p.config))
        d["preset"] = preset
    if getattr(args, "config", None):
        with open(args.config) as fh:
            try:
                file_cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError("<root>", f"{args.config} is not valid JSON ({exc.msg})") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        if file_cfg.get("subcommand", name) != name:
            raise ConfigError("subcommand", f"config is for {file_cfg['subcommand']!r}, command line asks for {name!r}")
        cfgmod._check(file_cfg, cfgmod.SCHEMA, "")
        cfgmod._deep_update(d, file_cfg)
    section = {"simulate": "simulate", "fit": "fit", "diagrams": "diagrams", "constants": "constants",
               "scatter": "scatter"}.get(name)
    flags = {
        "simulate": ("n", "dt", "method", "replicates"),
        "fit": ("input", "dt", "segment_length"),
        "diagrams": ("order", "enumerate"),
        "constants": ("m",),
        "scatter": ("input", "j1", "j2", "ratio"),
    }.get(name, ())
    for f in flags:
        v = getattr(args, f, None)
        if v is None:
            continue
        if f == "order":
            try:
                v = [int(x) for x in v.split(",")]
            except ValueError:
                raise ConfigError("diagrams.order", f"expected comma-separated integers, got {v!r}") from None
        d.setdefault(section, {})[f] = v
    for item in getattr(args, "set", []) or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(item, "expected KEY.PATH=VALUE")
        _set_path(d, key.strip(), _parse_value(val))
    for g in ("seed", "workers", "out"):
        v = getattr(args, g, None)
        if v is not None:
            d[g] = v
    return RunConfig.from_dict(d)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.subcommand:
            raise UsageError("a subcommand is required")
        logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                            format="%(levelname)s %(message)s")
        cfg = assemble_config(args)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lrdscat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"lrdscat: config error at {exc.key_path}: {str(exc).split(': ', 1)[-1]}", file=sys.stderr)
        return EXIT_USAGE
    except (LrdScatError, OSError) as exc:
        print(f"lrdscat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
