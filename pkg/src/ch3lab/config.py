"""Flat ``section.key = value`` experiment configs.

Lines are ``key = value`` with dotted keys; ``#`` starts a comment.  Values
are parsed by the type of the target field.  Environment variables named
``CH3LAB_<SECTION>__<KEY>`` (e.g. ``CH3LAB_GRID__N=2048``) override the file.
"""

from __future__ import annotations

import dataclasses
import inspect
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

ENV_PREFIX = "CH3LAB_"


class ConfigError(ValueError):
    pass


@dataclass
class GridSection:
    n: int = 1024
    L: float = 40.0


@dataclass
class InitialSection:
    generator: str = "gaussian"
    params: dict = field(default_factory=dict)


@dataclass
class ControlSection:
    dt: float = 0.005
    cfl_target: float = 0.5
    dt_min: float = 1e-7
    slope_threshold: float | None = None
    slope_cfl: float = 0.02
    plunge_window: int = 5
    max_tail: float | None = None
    auto_dt_min: bool = False


@dataclass
class RunSection:
    t_end: float = 10.0
    cadence: float = 0.1


@dataclass
class DiagnosticsSection:
    weighted: list = field(default_factory=list)
    decay_sides: list = field(default_factory=lambda: ["left", "right"])
    riccati: bool = True
    snapshots: bool = True


@dataclass
class SweepSection:
    deltas: list = field(default_factory=lambda: [1.0, 0.5, 0.25, 0.1, 0.05])
    alphas: list = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    Ns: list = field(default_factory=lambda: [1, 2, 4, 8, 16])
    points: int = 10_000


@dataclass
class TravelingSection:
    synthetic: bool = False
    speed: float = 2.0


@dataclass
class OutputSection:
    dir: str = "out"


@dataclass
class SimConfig:
    grid: GridSection = field(default_factory=GridSection)
    initial: InitialSection = field(default_factory=InitialSection)
    control: ControlSection = field(default_factory=ControlSection)
    run: RunSection = field(default_factory=RunSection)
    diagnostics: DiagnosticsSection = field(default_factory=DiagnosticsSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    traveling: TravelingSection = field(default_factory=TravelingSection)
    output: OutputSection = field(default_factory=OutputSection)
    seed: int = 0


# ---------------------------------------------------------------------------
# generators: name -> (function name in waves, parameter defaults)

GENERATORS: dict[str, dict] = {
    "zero": {},
    "gaussian": {"amplitudes": [0.3, 0.2, -0.15], "centers": [-4.0, 0.0, 4.0], "widths": [4.0, 4.0, 4.0]},
    "sech": {"amplitudes": [0.3, 0.2, 0.1], "rate": 0.5, "centers": [0.0, 0.0, 0.0]},
    "potential_sech": {"amplitudes": [0.3, 0.2, 0.1], "rate": 1.5, "centers": [0.0, 0.0, 0.0]},
    "steep_front": {"amplitude": 1.0, "delta": 0.5, "sigma": 1.0},
    "peakon": {"positions": [0.0], "p": [1.0], "r": [0.0], "s": [0.0], "epsilon": 0.1},
    "random": {"bumps": 4, "min_width": 1.0, "spread": 6.0},
}


def _parse_scalar(text: str, kind):
    t = text.strip()
    if kind is bool:
        low = t.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ValueError(f"expected a boolean, got {t!r}")
    if kind is int:
        return int(t)
    if kind is float:
        v = float(t)
        if math.isnan(v):
            raise ValueError("NaN is not allowed")
        return v
    return t


def _parse_list(text: str, elem=None):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if elem is None:
        out = []
        for s in items:
            try:
                out.append(int(s))
            except ValueError:
                try:
                    out.append(float(s))
                except ValueError:
                    out.append(s)
        return out
    return [_parse_scalar(s, elem) for s in items]


def _param_value(text: str, default):
    if isinstance(default, list):
        return _parse_list(text, float)
    if isinstance(default, bool):
        return _parse_scalar(text, bool)
    if isinstance(default, int):
        return _parse_scalar(text, int)
    if isinstance(default, float):
        return _parse_scalar(text, float)
    return text.strip()


_FIELD_KIND = {
    "int": int,
    "float": float,
    "str": str,
    "bool": bool,
    "float | None": "optfloat",
    "list": list,
}


def _assign(cfg: SimConfig, key: str, text: str) -> None:
    parts = key.split(".")
    if parts == ["seed"]:
        cfg.seed = _parse_scalar(text, int)
        return
    if len(parts) != 2:
        raise KeyError(f"unknown key {key!r} (expected section.key)")
    sec_name, name = parts
    if sec_name == "initial" and name != "generator":
        gen = cfg.initial.generator
        defaults = GENERATORS.get(gen)
        if defaults is None or name not in defaults:
            raise KeyError(f"generator {gen!r} has no parameter {name!r}")
        cfg.initial.params[name] = _param_value(text, defaults[name])
        return
    section = getattr(cfg, sec_name, None)
    if section is None or not dataclasses.is_dataclass(section):
        raise KeyError(f"unknown section {sec_name!r}")
    fields = {f.name: f for f in dataclasses.fields(section)}
    if name not in fields:
        raise KeyError(f"unknown key {key!r}")
    kind = _FIELD_KIND.get(str(fields[name].type), str)
    if kind == "optfloat":
        value = None if text.strip().lower() in ("none", "auto", "") else _parse_scalar(text, float)
    elif kind is list:
        value = _parse_list(text)
    else:
        value = _parse_scalar(text, kind)
    if sec_name == "initial" and name == "generator":
        if value not in GENERATORS:
            raise KeyError(f"unknown generator {value!r}; choose from {', '.join(GENERATORS)}")
        if value != cfg.initial.generator:
            cfg.initial.params = {}
    setattr(section, name, value)


def parse_lines(lines, source: str = "<config>", cfg: SimConfig | None = None) -> SimConfig:
    cfg = cfg or SimConfig()
    pending = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        pending.append((lineno, key.strip(), value))
    # the generator must be known before its parameters
    pending.sort(key=lambda item: item[1] != "initial.generator")
    origins = cfg.__dict__.setdefault("_origins", {})
    for lineno, key, value in pending:
        origins[key] = f"{source}:{lineno}"
        try:
            _assign(cfg, key, value)
        except (KeyError, ValueError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise ConfigError(f"{source}:{lineno}: {key}: {msg}") from None
    return cfg


def apply_env(cfg: SimConfig, environ=None) -> SimConfig:
    environ = os.environ if environ is None else environ
    items = sorted((k, v) for k, v in environ.items() if k.startswith(ENV_PREFIX))
    items.sort(key=lambda kv: kv[0] != ENV_PREFIX + "INITIAL__GENERATOR")
    for name, value in items:
        key = name[len(ENV_PREFIX):].lower().replace("__", ".")
        if key == "grid.l":
            key = "grid.L"
        if key == "sweep.ns":
            key = "sweep.Ns"
        cfg.__dict__.setdefault("_origins", {})[key] = f"environment {name}"
        try:
            _assign(cfg, key, value)
        except (KeyError, ValueError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise ConfigError(f"environment {name}: {msg}") from None
    return cfg


def load(path=None, environ=None) -> SimConfig:
    cfg = SimConfig()
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
        parse_lines(text.splitlines(), str(path), cfg)
    apply_env(cfg, environ)
    validate(cfg)
    return cfg


def where(cfg: SimConfig, key: str) -> str:
    """'path:line: ' prefix for a key set from a file or the environment."""
    origin = cfg.__dict__.get("_origins", {}).get(key)
    return f"{origin}: " if origin else ""


def _fail(cfg: SimConfig, key: str, msg: str):
    raise ConfigError(f"{where(cfg, key)}{key}: {msg}")


def validate(cfg: SimConfig) -> None:
    g = cfg.grid
    n = g.n
    if n < 16 or n & (n - 1):
        _fail(cfg, "grid.n", f"must be a power of two >= 16, got {n}")
    if not g.L > 0:
        _fail(cfg, "grid.L", f"must be positive, got {g.L}")
    c = cfg.control
    if not c.dt > 0:
        _fail(cfg, "control.dt", "must be positive")
    if not 0 < c.dt_min < c.dt:
        _fail(cfg, "control.dt_min", "need 0 < dt_min < dt")
    if not 0 < c.cfl_target <= 1:
        _fail(cfg, "control.cfl_target", "must lie in (0, 1]")
    if c.slope_threshold is not None and not c.slope_threshold > 0:
        _fail(cfg, "control.slope_threshold", "must be positive or none")
    if not c.slope_cfl > 0:
        _fail(cfg, "control.slope_cfl", "must be positive")
    if c.plunge_window < 2:
        _fail(cfg, "control.plunge_window", "must be >= 2")
    if c.max_tail is not None and not 0 < c.max_tail < 1:
        _fail(cfg, "control.max_tail", "must lie in (0, 1) or be none")
    r = cfg.run
    if not r.t_end >= 0:
        _fail(cfg, "run.t_end", "must be non-negative")
    if not r.cadence > 0:
        _fail(cfg, "run.cadence", "must be positive")
    for side in cfg.diagnostics.decay_sides:
        if side not in ("left", "right"):
            _fail(cfg, "diagnostics.decay_sides", f"unknown side {side!r}")
    for spec in cfg.diagnostics.weighted:
        parse_weight_spec(spec)


def parse_weight_spec(spec: str) -> tuple[str, float, int]:
    """'J:0.5:4' -> ('J', 0.5, 4)."""
    try:
        form, a, n = str(spec).split(":")
        return form, float(a), int(n)
    except ValueError:
        raise ConfigError(f"diagnostics.weighted: expected FORM:alpha:N, got {spec!r}") from None


def generator_params(cfg: SimConfig) -> dict:
    out = dict(GENERATORS[cfg.initial.generator])
    out.update(cfg.initial.params)
    return out


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, list):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def dump(cfg: SimConfig) -> str:
    lines = []
    for f in dataclasses.fields(cfg):
        sec = getattr(cfg, f.name)
        if not dataclasses.is_dataclass(sec):
            lines.append(f"{f.name} = {_fmt(sec)}")
            continue
        lines.append(f"# [{f.name}]")
        for sf in dataclasses.fields(sec):
            if f.name == "initial" and sf.name == "params":
                continue
            lines.append(f"{f.name}.{sf.name} = {_fmt(getattr(sec, sf.name))}")
        if f.name == "initial":
            for k, v in generator_params(cfg).items():
                lines.append(f"initial.{k} = {_fmt(v)}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def signature_ok(func, params: dict) -> bool:
    names = set(inspect.signature(func).parameters)
    return set(params) <= names
