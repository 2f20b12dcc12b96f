"""TOML run configuration: strict schema, defaults, overrides, round-trip dump.

Sections and keys (every key optional, unknown keys rejected)::

    [grid]      width, height, link_latency, router_latency
    [scenario]  preset ("canonical" | "dynamic" | "custom"), dim,
                [[scenario.components]] shape, center, extent, weight, start, end
    [learning]  eps_initial, eps_final, sigma_initial, sigma_final, schedule,
                activity_rate, h_min, init
    [pruning]   w, activity_floor, warmup_steps, enabled, log_removals
    [run]       seed, steps, log_every, eval_size, online_window, engine,
                sweep_w, sweep_seeds
"""
from __future__ import annotations

import copy
import sys
from pathlib import Path
from typing import Any

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .environment import PRESETS, SHAPES, Component, DensityScenario
from .errors import ConfigError
from .experiments import ENGINES, RunConfig
from .plasticity import PruneParams
from .som import CONSTANT, GEOMETRIC, LearnParams
from .topology import GridGeometry

INT, FLOAT, STR, BOOL = "int", "float", "str", "bool"

# key -> (type, default)
SCHEMA: dict[str, dict[str, tuple[str, Any]]] = {
    "grid": {
        "width": (INT, 10),
        "height": (INT, 10),
        "link_latency": (INT, 1),
        "router_latency": (INT, 1),
    },
    "scenario": {
        "preset": (STR, "canonical"),
        "dim": (INT, 2),
        "components": ("components", []),
    },
    "learning": {
        "eps_initial": (FLOAT, 0.5),
        "eps_final": (FLOAT, 0.01),
        "sigma_initial": (FLOAT, 3.0),
        "sigma_final": (FLOAT, 0.5),
        "schedule": (STR, GEOMETRIC),
        "activity_rate": (FLOAT, 0.01),
        "h_min": (FLOAT, 0.01),
        "init": (STR, "uniform"),
    },
    "pruning": {
        "w": (FLOAT, 0.0),
        "activity_floor": (FLOAT, 0.01),
        "warmup_steps": (INT, 0),
        "enabled": (BOOL, True),
        "log_removals": (BOOL, False),
    },
    "run": {
        "seed": (INT, 0),
        "steps": (INT, 100_000),
        "log_every": (INT, 1000),
        "eval_size": (INT, 1000),
        "online_window": (INT, 500),
        "engine": (STR, "fast"),
        "sweep_w": ("floats", [0.0, 1e-7, 3e-7, 1e-6]),
        "sweep_seeds": ("ints", list(range(10))),
    },
}

COMPONENT_SCHEMA = {
    "shape": (STR, "uniform-box"),
    "center": ("floats", None),
    "extent": (FLOAT, None),
    "weight": (FLOAT, 1.0),
    "start": (INT, 0),
    "end": (INT, None),
}

# (path, predicate, message)
RANGES = [
    ("grid.width", lambda v: v >= 1, "must be >= 1"),
    ("grid.height", lambda v: v >= 1, "must be >= 1"),
    ("grid.link_latency", lambda v: v >= 0, "must be >= 0"),
    ("grid.router_latency", lambda v: v >= 0, "must be >= 0"),
    ("scenario.preset", lambda v: v in (*PRESETS, "custom"), f"must be one of {(*PRESETS, 'custom')}"),
    ("scenario.dim", lambda v: v >= 1, "must be >= 1"),
    ("learning.eps_initial", lambda v: 0 < v <= 1, "must lie in (0, 1]"),
    ("learning.eps_final", lambda v: 0 < v <= 1, "must lie in (0, 1]"),
    ("learning.sigma_initial", lambda v: v > 0, "must be > 0"),
    ("learning.sigma_final", lambda v: v > 0, "must be > 0"),
    ("learning.schedule", lambda v: v in (GEOMETRIC, CONSTANT), f"must be {GEOMETRIC!r} or {CONSTANT!r}"),
    ("learning.activity_rate", lambda v: 0 < v < 1, "must lie in (0, 1)"),
    ("learning.h_min", lambda v: 0 < v < 1, "must lie in (0, 1)"),
    ("learning.init", lambda v: v in ("uniform", "center"), "must be 'uniform' or 'center'"),
    ("pruning.w", lambda v: v >= 0, "must be >= 0"),
    ("pruning.activity_floor", lambda v: v > 0, "must be > 0"),
    ("pruning.warmup_steps", lambda v: v >= 0, "must be >= 0"),
    ("run.seed", lambda v: v >= 0, "must be >= 0"),
    ("run.steps", lambda v: v >= 0, "must be >= 0"),
    ("run.log_every", lambda v: v >= 1, "must be >= 1"),
    ("run.eval_size", lambda v: v >= 1, "must be >= 1"),
    ("run.online_window", lambda v: v >= 1, "must be >= 1"),
    ("run.engine", lambda v: v in ENGINES, f"must be one of {ENGINES}"),
    ("run.sweep_w", lambda v: len(v) >= 1 and all(w >= 0 for w in v), "needs >= 1 value, all >= 0"),
    ("run.sweep_seeds", lambda v: len(v) >= 1 and all(s >= 0 for s in v), "needs >= 1 seed, all >= 0"),
]


def _coerce(kind: str, value: Any, path: str, problems: list) -> Any:
    def bad(expected):
        problems.append((path, f"expected {expected}, got {value!r}"))
        return None

    if kind == INT:
        return value if isinstance(value, int) and not isinstance(value, bool) else bad("an integer")
    if kind == FLOAT:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        return bad("a number")
    if kind == STR:
        return value if isinstance(value, str) else bad("a string")
    if kind == BOOL:
        return value if isinstance(value, bool) else bad("true or false")
    if kind == "floats":
        if isinstance(value, list) and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                           for v in value):
            return [float(v) for v in value]
        return bad("a list of numbers")
    if kind == "ints":
        if isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            return list(value)
        return bad("a list of integers")
    if kind == "components":
        if not isinstance(value, list):
            return bad("an array of tables")
        return [_component(c, f"{path}[{i}]", problems) for i, c in enumerate(value)]
    raise AssertionError(kind)


def _component(raw: Any, path: str, problems: list) -> dict:
    if not isinstance(raw, dict):
        problems.append((path, "expected a table"))
        return {}
    out = {}
    for key in raw:
        if key not in COMPONENT_SCHEMA:
            problems.append((f"{path}.{key}", "unknown key"))
    for key, (kind, default) in COMPONENT_SCHEMA.items():
        if key in raw:
            out[key] = _coerce(kind, raw[key], f"{path}.{key}", problems)
        elif default is None and key != "end":
            problems.append((f"{path}.{key}", "required"))
        elif default is not None:
            out[key] = default
    if out.get("shape") is not None and out["shape"] not in SHAPES:
        problems.append((f"{path}.shape", f"must be one of {SHAPES}"))
    if out.get("extent") is not None and out["extent"] < 0:
        problems.append((f"{path}.extent", "must be >= 0"))
    if out.get("weight") is not None and out["weight"] < 0:
        problems.append((f"{path}.weight", "must be >= 0"))
    if out.get("center") is not None and any(not 0 <= c <= 1 for c in out["center"]):
        problems.append((f"{path}.center", "must lie in [0, 1]^d"))
    return out


def normalize(raw: dict) -> dict:
    """Fill defaults and check types/ranges; raises :class:`ConfigError`."""
    problems: list = []
    eff: dict = {}
    if not isinstance(raw, dict):
        raise ConfigError(("<root>", "expected a table"))
    for section in raw:
        if section not in SCHEMA:
            problems.append((section, "unknown section"))
    for section, keys in SCHEMA.items():
        given = raw.get(section, {})
        if not isinstance(given, dict):
            problems.append((section, "expected a table"))
            given = {}
        for key in given:
            if key not in keys:
                problems.append((f"{section}.{key}", "unknown key"))
        eff[section] = {}
        for key, (kind, default) in keys.items():
            value = given[key] if key in given else copy.deepcopy(default)
            eff[section][key] = _coerce(kind, value, f"{section}.{key}", problems)
    for path, ok, msg in RANGES:
        section, key = path.split(".")
        value = eff.get(section, {}).get(key)
        if value is not None and not ok(value):
            problems.append((path, msg))
    learning = eff["learning"]
    if None not in (learning["eps_final"], learning["eps_initial"]) and learning["eps_final"] > learning["eps_initial"]:
        problems.append(("learning.eps_final", "must be <= learning.eps_initial"))
    if None not in (learning["sigma_final"], learning["sigma_initial"]) and learning["sigma_final"] > learning["sigma_initial"]:
        problems.append(("learning.sigma_final", "must be <= learning.sigma_initial"))
    run = eff["run"]
    if run["steps"] is not None and run["log_every"] and run["log_every"] > 0 and run["steps"] % run["log_every"]:
        problems.append(("run.log_every", f"must divide run.steps ({run['steps']})"))
    scen = eff["scenario"]
    if scen["preset"] == "custom" and not scen["components"]:
        problems.append(("scenario.components", "required when preset = 'custom'"))
    if scen["preset"] != "custom" and scen["components"]:
        problems.append(("scenario.components", "only allowed when preset = 'custom'"))
    if scen["preset"] in PRESETS and scen["dim"] != 2:
        problems.append(("scenario.dim", "built-in presets are 2-dimensional"))
    if problems:
        raise ConfigError(problems)
    try:
        build(eff)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(("scenario", str(exc))) from None
    return eff


def build(eff: dict) -> RunConfig:
    """Turn a normalized config dict into a :class:`RunConfig`."""
    g, s, lr, p, r = (eff[k] for k in ("grid", "scenario", "learning", "pruning", "run"))
    steps = r["steps"]
    if s["preset"] == "custom":
        comps = []
        for i, c in enumerate(s["components"]):
            if len(c["center"]) != s["dim"]:
                raise ConfigError((f"scenario.components[{i}].center", f"must have {s['dim']} entries"))
            comps.append(Component(c["shape"], tuple(c["center"]), c["extent"], c["weight"],
                                   c["start"], c.get("end")))
        scenario = DensityScenario(s["dim"], tuple(comps), steps)
    else:
        scenario = PRESETS[s["preset"]](steps)
    learn = LearnParams(lr["eps_initial"], lr["eps_final"], lr["sigma_initial"], lr["sigma_final"],
                        steps, lr["schedule"], lr["activity_rate"], lr["h_min"])
    prune = PruneParams(p["w"], p["activity_floor"], p["warmup_steps"], p["enabled"])
    return RunConfig(GridGeometry(g["width"], g["height"]), scenario, learn, prune, r["seed"],
                     r["log_every"], r["eval_size"], r["online_window"], lr["init"], r["engine"],
                     g["link_latency"], g["router_latency"], p["log_removals"])


def parse_value(text: str) -> Any:
    """TOML literal if it parses as one, else the raw string."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    raw = copy.deepcopy(raw)
    problems = []
    for item in overrides:
        key, sep, value = item.partition("=")
        key = key.strip()
        parts = key.split(".")
        if not sep or len(parts) != 2:
            problems.append((key or item, "override must look like section.key=value"))
            continue
        section, name = parts
        if section not in SCHEMA:
            problems.append((key, "unknown section"))
            continue
        if name not in SCHEMA[section]:
            problems.append((key, "unknown key"))
            continue
        raw.setdefault(section, {})[name] = parse_value(value.strip())
    if problems:
        raise ConfigError(problems)
    return raw


def load(path: str | Path | None = None, overrides: list[str] = (), seed: int | None = None) -> dict:
    """Read, override and normalize a config; returns the effective dict."""
    raw: dict = {}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(("--config", f"no such file: {p}"))
        try:
            raw = tomllib.loads(p.read_text())
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(("--config", f"not valid TOML: {exc}")) from None
    raw = apply_overrides(raw, list(overrides))
    if seed is not None:
        raw.setdefault("run", {})["seed"] = seed
    return normalize(raw)


def dumps(eff: dict) -> str:
    out = copy.deepcopy(eff)
    for comp in out["scenario"]["components"]:
        if comp.get("end") is None:
            comp.pop("end", None)
    return tomli_w.dumps(out)


def loads(text: str) -> dict:
    return normalize(tomllib.loads(text))
