"""Command-line front end for the parameter sweeps.

Usage::

    tightfocus profile --f 100 --z-in 1e3,3e3,1e4,3e4,1e5,3e5 --output profile.csv
    tightfocus angular --f 500 --z-in 3e4 --output angular.csv --plot-script angular.gp
    tightfocus rs-sweep --f 2.5,5,10,25,50,100,250,500,1000 --workers 4

Every option may also come from an INI file given with ``--config``; keys
in its ``[tightfocus]`` section use the long option names (``z-in`` or
``z_in``). Flags on the command line override the file.

Exit status is 0 on success, 1 for an invalid configuration and 2 when a
quadrature does not converge.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import sweeps
from .atom import AtomSpec
from .beams import BeamOrder, BeamSpec, z_in_for_rayleigh
from .numerics import QuadratureError, QuadratureSpec
from .scatter import PositionPolicy

COMMANDS = ("profile", "focal-plane", "angular", "g2-width", "k-ratio", "rs-sweep")
CONFIG_SECTION = "tightfocus"

# per-command defaults for the lens and incoming beam
_DEFAULT_F = {"profile": "100", "focal-plane": "100", "angular": "500",
              "g2-width": "500", "k-ratio": "500",
              "rs-sweep": "2.5,5,10,25,50,100,250,500,1000"}
_DEFAULT_Z_IN = {"profile": "1e3,3e3,1e4,3e4,1e5,3e5",
                 "focal-plane": "1e3,3e3,1e4,3e4,1e5,3e5", "angular": "3e4"}


class ConfigError(ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def _float_list(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from None


def _position(text):
    text = str(text).strip()
    if text in ("max", "z0"):
        return text
    return float(text)


def _models(text):
    text = str(text).strip()
    if text == "both":
        return ["exact", "paraxial"]
    if text not in ("exact", "paraxial"):
        raise ValueError(f"expected exact, paraxial or both, got {text!r}")
    return [text]


# name -> (converter, built-in default, help)
OPTIONS = {
    "wavelength": (float, "1", "wavelength; all lengths use its unit (default 1)"),
    "f": (_float_list, None, "focal length(s), comma-separated"),
    "z-in": (_float_list, None, "incoming Rayleigh range(s), comma-separated"),
    "z-r": (_float_list, None, "outgoing Rayleigh range(s); alternative to --z-in"),
    "order": (str, "gaussian", "incoming beam: gaussian, lg_plus or lg_minus"),
    "beam": (_models, "exact", "field model: exact, paraxial or both"),
    "gamma": (float, "1", "atomic decay rate"),
    "detuning": (float, "0", "laser-atom detuning in the units of --gamma"),
    "drive": (float, "1e-3", "drive strength |C|/Gamma"),
    "position": (_position, "max", "atom position: max, z0 or an explicit z"),
    "radius": (float, "50", "far-field evaluation distance"),
    "points": (int, "400", "grid points per curve"),
    "z-min": (float, "-20", "profile window start, (z - z_0) in wavelengths"),
    "z-max": (float, "10", "profile window end"),
    "rho-max": (float, "3", "focal-plane transverse extent"),
    "phi-max": (float, "0.5", "largest polar angle, in units of pi"),
    "w-min": (float, None, "smallest width parameter"),
    "w-max": (float, None, "largest width parameter"),
    "w-points": (int, "25", "number of widths in width sweeps"),
    "rel-tol": (float, "1e-9", "quadrature relative tolerance"),
    "abs-tol": (float, "1e-12", "quadrature absolute tolerance"),
    "max-subdivisions": (int, "20000", "quadrature panel budget per integral"),
    "workers": (int, "1", "worker processes for the sweeps"),
    "format": (str, "csv", "output format: csv or json"),
    "output": (str, None, "output path (default: stdout)"),
    "plot-script": (str, None, "also write a gnuplot script to this path"),
}


def build_parser():
    parser = _Parser(prog="tightfocus",
                     description="Sweep data for strongly focused beams and one atom.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="INI file with a [tightfocus] section")
    for name, (_, default, help_text) in OPTIONS.items():
        # None marks "not given"; defaults are merged in resolve()
        shown = f" [{default}]" if default is not None else ""
        parser.add_argument(f"--{name}", default=None, help=help_text + shown)
    return parser


def _read_config(path):
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).splitlines()[0]) from None
    if not cp.has_section(CONFIG_SECTION):
        raise ConfigError("config", f"missing [{CONFIG_SECTION}] section in {path}")
    out = {}
    for key, value in cp.items(CONFIG_SECTION):
        name = key.replace("_", "-")
        if name not in OPTIONS:
            raise ConfigError(key, "unknown configuration key")
        out[name] = value
    return out


def resolve(argv):
    """Parse flags and the optional config file into a plain dict."""
    ns = build_parser().parse_args(argv)
    raw = {}
    if ns.config:
        raw.update(_read_config(ns.config))
    for name in OPTIONS:
        val = getattr(ns, name.replace("-", "_"))
        if val is not None:
            raw[name] = val
    cmd = ns.command
    if "f" not in raw:
        raw["f"] = _DEFAULT_F[cmd]
    if "beam" not in raw and cmd in ("g2-width", "k-ratio"):
        raw["beam"] = "both"
    if "z-in" not in raw and "z-r" not in raw and cmd in _DEFAULT_Z_IN:
        raw["z-in"] = _DEFAULT_Z_IN[cmd]
    cfg = {"command": cmd}
    for name, (conv, default, _) in OPTIONS.items():
        text = raw.get(name, default)
        if text is None:
            cfg[name] = None
            continue
        try:
            cfg[name] = conv(text)
        except ValueError as exc:
            raise ConfigError(name, str(exc)) from None
    _validate(cfg)
    return cfg


def _validate(cfg):
    cmd = cfg["command"]
    positive = ["wavelength", "gamma", "radius", "rel-tol", "abs-tol", "rho-max",
                "phi-max", "w-min", "w-max"]
    for name in positive:
        v = cfg[name]
        if v is not None and not (math.isfinite(v) and v > 0):
            raise ConfigError(name, f"must be positive, got {v!r}")
    for name in ("f", "z-in", "z-r"):
        for v in cfg[name] or []:
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(name, f"must be positive, got {v!r}")
    if not cfg["f"]:
        raise ConfigError("f", "at least one focal length is required")
    for name in ("points", "w-points"):
        if cfg[name] < 2:
            raise ConfigError(name, "needs at least 2 grid points")
    if cfg["workers"] < 1:
        raise ConfigError("workers", "must be at least 1")
    if not math.isfinite(cfg["detuning"]):
        raise ConfigError("detuning", "must be finite")
    if not (math.isfinite(cfg["drive"]) and cfg["drive"] >= 0):
        raise ConfigError("drive", "must be non-negative")
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError("format", f"expected csv or json, got {cfg['format']!r}")
    try:
        BeamOrder(cfg["order"])
    except ValueError:
        raise ConfigError("order", f"unknown beam order {cfg['order']!r}") from None
    if cfg["z-max"] <= cfg["z-min"]:
        raise ConfigError("z-max", "must exceed z-min")
    if cfg["w-min"] and cfg["w-max"] and cfg["w-max"] <= cfg["w-min"]:
        raise ConfigError("w-max", "must exceed w-min")
    if cfg["z-in"] and cfg["z-r"]:
        raise ConfigError("z-r", "give either z-in or z-r, not both")
    if cmd in ("profile", "focal-plane", "angular"):
        if not (cfg["z-in"] or cfg["z-r"]):
            raise ConfigError("z-in", "required for this command")
        if cmd == "angular" and (len(cfg["f"]) != 1 or len(_z_ins(cfg)) != 1):
            raise ConfigError("f", "angular takes a single focal length and z-in")
        if cmd != "rs-sweep" and len(cfg["f"]) != 1:
            raise ConfigError("f", "this command takes a single focal length")
    elif cmd in ("g2-width", "k-ratio") and len(cfg["f"]) != 1:
        raise ConfigError("f", "this command takes a single focal length")
    if cfg["order"] != "gaussian" and (cmd != "profile" or "paraxial" in cfg["beam"]):
        raise ConfigError("order", "LG beams are only available for exact profiles")
    if cmd in ("g2-width", "k-ratio", "rs-sweep"):
        w_top = cfg["w-max"]
        for f in cfg["f"]:
            if w_top is not None and w_top > sweeps.max_width(f, cfg["wavelength"]) * (1 + 1e-12):
                raise ConfigError("w-max", f"exceeds the largest width reachable "
                                  f"with f={f:g} ({sweeps.max_width(f):.4g})")
    elif len(cfg["beam"]) != 1 and cmd != "profile":
        raise ConfigError("beam", "this command takes one field model")


def _z_ins(cfg):
    if cfg["z-in"]:
        return cfg["z-in"]
    f = cfg["f"][0]
    try:
        return [z_in_for_rayleigh(zr, f) for zr in cfg["z-r"]]
    except ValueError as exc:
        raise ConfigError("z-r", str(exc)) from None


def _quad(cfg):
    try:
        return QuadratureSpec(relative_tolerance=cfg["rel-tol"],
                              absolute_tolerance=cfg["abs-tol"],
                              max_subdivisions=cfg["max-subdivisions"])
    except ValueError as exc:
        raise ConfigError("max-subdivisions", str(exc)) from None


def _scaled(values, lam):
    return [v * lam for v in values]


def run_sweep(cfg):
    """Dispatch the configured sweep and return a :class:`sweeps.Table`."""
    cmd, lam = cfg["command"], cfg["wavelength"]
    quad, workers = _quad(cfg), cfg["workers"]
    policy = cfg["position"]
    if isinstance(policy, str):
        policy = PositionPolicy(policy)
    else:
        policy = policy * lam
    f = cfg["f"][0] * lam
    if cmd == "profile":
        z_ins = _scaled(_z_ins(cfg), lam)
        tables = [sweeps.profile(f, z_ins, (cfg["z-min"], cfg["z-max"]), cfg["points"],
                                 m, cfg["order"], quad, workers, wavelength=lam)
                  for m in cfg["beam"]]
        return _merge_models(tables, cfg["beam"])
    if cmd == "focal-plane":
        return sweeps.focal_plane(f, _scaled(_z_ins(cfg), lam), cfg["rho-max"],
                                  cfg["points"], cfg["beam"][0], policy, quad, workers,
                                  wavelength=lam)
    atom = AtomSpec(wavelength=lam, decay_rate=cfg["gamma"], detuning=cfg["detuning"])
    if cmd == "angular":
        spec = BeamSpec(wavelength=lam, focal_length=f, z_in=_z_ins(cfg)[0] * lam)
        return sweeps.angular(spec, cfg["points"], cfg["beam"][0], atom, cfg["drive"],
                              policy, cfg["radius"] * lam, cfg["phi-max"], quad, workers)
    if cmd in ("g2-width", "k-ratio"):
        widths = sweeps.width_grid(cfg["w-min"] or 0.05,
                                   cfg["w-max"] or sweeps.max_width(cfg["f"][0]),
                                   cfg["w-points"])
        fn = sweeps.g2_width if cmd == "g2-width" else sweeps.k_ratio_width
        return fn(widths, f, tuple(cfg["beam"]), atom=atom, drive=cfg["drive"],
                  position=policy, radius=cfg["radius"] * lam, quad=quad,
                  workers=workers, wavelength=lam)
    return sweeps.rs_sweep([v * lam for v in cfg["f"]], cfg["w-points"],
                           cfg["w-min"] or 0.05, cfg["beam"][0], policy, quad,
                           workers, w_max=cfg["w-max"], wavelength=lam)


def _merge_models(tables, models):
    if len(tables) == 1:
        return tables[0]
    cols, units, derived = [tables[0].columns[0]], [tables[0].units[0]], []
    for t, m in zip(tables, models):
        cols += [f"{c}_{m}" for c in t.columns[1:]]
        units += t.units[1:]
        derived += [dict(d, model=m) for d in t.derived]
    rows = [[r[0]] + [v for t in tables for v in t.rows[i][1:]]
            for i, r in enumerate(tables[0].rows)]
    return sweeps.Table(cols, units, rows, derived)


# ---------------------------------------------------------------------------
# output

def _num(x):
    """Stable text form of a number (shortest round-trip repr)."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, PositionPolicy):
        return obj.value
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else _num(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def metadata(cfg, table):
    """Resolved configuration plus derived parameters of every beam."""
    return {"config": _jsonable(cfg), "columns": table.columns, "units": table.units,
            "derived": _jsonable(table.derived)}


def render_csv(cfg, table):
    meta = metadata(cfg, table)
    lines = [f"# tightfocus {cfg['command']}"]
    lines += [f"# {k} = {json.dumps(v, sort_keys=True)}"
              for k, v in sorted(meta["config"].items())]
    for d in meta["derived"]:
        lines.append("# derived " + json.dumps(d, sort_keys=True))
    lines.append(",".join(f"{c} [{u}]" for c, u in zip(table.columns, table.units)))
    lines += [",".join(_num(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def render_json(cfg, table):
    doc = dict(metadata(cfg, table),
               rows=[[_jsonable(float(v)) for v in row] for row in table.rows])
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def plot_script(cfg, table, data_path):
    """gnuplot script plotting every data column against the first one."""
    x = table.columns[0]
    lines = ["set datafile separator ','", "set key outside",
             f"set xlabel '{x} [{table.units[0]}]'",
             f"set title 'tightfocus {cfg['command']}'"]
    if cfg["command"] == "rs-sweep":
        lines += ["set logscale x", "set ylabel 'R_s'"]
        plots = [f"'{data_path}' using ($1=={f:g}*{cfg['wavelength']:g} ? $2 : 1/0):4 "
                 f"with lines title 'f={f:g}'" for f in cfg["f"]]
    else:
        if cfg["command"] in ("g2-width", "k-ratio"):
            lines.append("set logscale x")
        if cfg["command"] == "k-ratio":
            lines.append("set logscale y")
        plots = [f"'{data_path}' using 1:{j + 1} with lines title '{c}'"
                 for j, c in enumerate(table.columns) if j > 0]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = resolve(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            table = run_sweep(cfg)
    except ConfigError as exc:
        print(f"tightfocus: configuration error in {exc}", file=sys.stderr)
        return 1
    except QuadratureError as exc:
        print(f"tightfocus: numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # raised by the beam/atom constructors on inconsistent parameters
        print(f"tightfocus: configuration error in parameters: {exc}", file=sys.stderr)
        return 1
    text = render_csv(cfg, table) if cfg["format"] == "csv" else render_json(cfg, table)
    meta = json.dumps(metadata(cfg, table), indent=1, sort_keys=True) + "\n"
    out = cfg["output"]
    if out:
        path = Path(out)
        path.write_text(text, encoding="utf-8")
        Path(str(path) + ".meta.json").write_text(meta, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if cfg["plot-script"]:
        data = out or "data.csv"
        Path(cfg["plot-script"]).write_text(plot_script(cfg, table, data), encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
