"""Text configuration files for runs and sweeps.

INI-style, with keys named exactly like the RunConfig fields.  Top-level
keys come before the first section; nested fields live in ``[grid]``,
``[profile]``, ``[model]``, ``[model.coupling]`` and ``[refine]``, and sweep
settings in ``[sweep]``::

    scheme = tssp
    dt = 2e-5
    t_max = 3

    [grid]
    dim = 1
    L = 8
    Np = 8192

    [profile]
    kind = two_hump
    C = 4
    phase = log_cosh

    [model]
    sigma = 2

    [model.coupling]
    kind = constant
    lam = 2.0

    [sweep]
    axis = lambda
    values = 1.0, 1.5, 2.0

Overrides use dotted names, e.g. ``grid.Np=4096`` or ``model.coupling.lam=2``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields

from .harness import ConfigError, GridSpec, RefineSpec, RunConfig
from .initial_data import ProfileSpec
from .model import CouplingMode, ModelParams

_TOP = "run"
_SECTIONS = (_TOP, "grid", "profile", "model", "model.coupling", "refine", "sweep")
_NONE = {"none", "null", ""}


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]
    workers: int = 1


def _parser() -> configparser.ConfigParser:
    p = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    p.optionxform = str  # keep L, Np, C as written
    return p


def _float(v: str) -> float:
    return float(v)


def _opt_float(v: str) -> float | None:
    return None if v.strip().lower() in _NONE else float(v)


def _bool(v: str) -> bool:
    s = v.strip().lower()
    if s in {"1", "true", "yes", "on"}:
        return True
    if s in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {v!r}")


_TYPES = {
    _TOP: {"scheme": str, "dt": _float, "t_max": _float, "record_every": int,
           "threshold": _float, "max_phase": _opt_float, "max_halvings": int},
    "grid": {"dim": int, "L": _float, "Np": int},
    "profile": {"kind": str, "C": _float, "phase": str, "shift": _float, "chirp": _opt_float},
    "model": {"n": int, "sigma": _float},
    "model.coupling": {"kind": str, "lam": _float, "delta": _float, "a": _opt_float},
    "refine": {"enabled": _bool, "t_star_tol": _float, "max_levels": int},
    "sweep": {"axis": str, "values": str, "workers": int},
}


def _section_values(p: configparser.ConfigParser, name: str) -> dict:
    if not p.has_section(name):
        return {}
    types = _TYPES[name]
    out = {}
    for key, raw in p.items(name):
        if key not in types:
            raise ConfigError(f"unknown key {key!r} in [{name}]")
        try:
            out[key] = types[key](raw)
        except ValueError as exc:
            raise ConfigError(f"[{name}] {key}: {exc}") from exc
    return out


def apply_overrides(p: configparser.ConfigParser, overrides) -> None:
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        section, _, name = key.rpartition(".")
        section = section or _TOP
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section in override {key!r}")
        if not p.has_section(section):
            p.add_section(section)
        p.set(section, name, value)


def parse_text(text: str, overrides=None) -> tuple[RunConfig, SweepSpec | None]:
    p = _parser()
    try:
        p.read_string(f"[{_TOP}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    for s in p.sections():
        if s not in _SECTIONS:
            raise ConfigError(f"unknown section [{s}]")
    apply_overrides(p, overrides)
    return build(p)


def load_config(path=None, overrides=None) -> tuple[RunConfig, SweepSpec | None]:
    """Read a config file (optional) and apply ``key=value`` overrides."""
    text = ""
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_text(text, overrides)


def build(p: configparser.ConfigParser) -> tuple[RunConfig, SweepSpec | None]:
    top = _section_values(p, _TOP)
    grid = GridSpec(**_section_values(p, "grid"))
    prof = _section_values(p, "profile")
    if "kind" not in prof:
        raise ConfigError("[profile] kind is required")
    model = _section_values(p, "model")
    model.setdefault("n", grid.dim)
    model.setdefault("sigma", 2.0 / model["n"])
    if grid.dim == 2:
        top.setdefault("t_max", 1.5)
        top.setdefault("record_every", 10)
    try:
        coupling = CouplingMode(**_section_values(p, "model.coupling"))
        cfg = RunConfig(
            profile=ProfileSpec(**prof),
            model=ModelParams(model["n"], model["sigma"], coupling),
            grid=grid,
            refine=RefineSpec(**_section_values(p, "refine")),
            **top,
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    sweep = None
    sw = _section_values(p, "sweep")
    if sw:
        if "axis" not in sw or "values" not in sw:
            raise ConfigError("[sweep] needs axis and values")
        try:
            values = tuple(float(v) for v in sw["values"].replace(",", " ").split())
        except ValueError as exc:
            raise ConfigError(f"[sweep] values: {exc}") from exc
        sweep = SweepSpec(sw["axis"], values, sw.get("workers", 1))
    return cfg, sweep


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return str(v).lower()
    return repr(v) if isinstance(v, float) else str(v)


def dump_config(cfg: RunConfig, sweep: SweepSpec | None = None) -> str:
    """Text form of ``cfg`` that ``parse_text`` reads back to an equal config."""
    lines = [f"{f.name} = {_fmt(getattr(cfg, f.name))}" for f in fields(cfg)
             if f.name not in {"profile", "model", "grid", "refine"}]

    def section(name, obj, skip=()):
        lines.append("")
        lines.append(f"[{name}]")
        for f in fields(obj):
            if f.name not in skip:
                lines.append(f"{f.name} = {_fmt(getattr(obj, f.name))}")

    section("grid", cfg.grid)
    section("profile", cfg.profile)
    section("model", cfg.model, skip=("coupling",))
    section("model.coupling", cfg.model.coupling)
    section("refine", cfg.refine)
    if sweep is not None:
        lines += ["", "[sweep]", f"axis = {sweep.axis}",
                  "values = " + ", ".join(repr(v) for v in sweep.values),
                  f"workers = {sweep.workers}"]
    return "\n".join(lines) + "\n"
