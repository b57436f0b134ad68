"""Experiment configuration: TOML schema, validation, and serialization.

A config file has the sections

    [experiment]  kind, label
    [system]      name plus the catalog parameters it accepts
    [profile]     name, amplitude, optional n and radius
    [grid]        x_min, x_max, nx, t_end, optional dt / cfl / bc
    [data]        kind (zero | bump | eta-pulse | xi-pulse), amplitude,
                  optional epsilon (normalizes the measured smallness),
                  center, width, component
    [energy]      delta, row_stride, l_max, track

plus one optional kind-specific table ([violation], [boost],
[amplification], [convergence], or [sweep]).  Unknown sections or keys are
rejected rather than ignored, so a typo cannot silently change an
experiment.  ``dump_config`` emits TOML that round-trips bit-exactly
through ``parse_config``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError
from .solver import GridSpec

__all__ = [
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "config_to_dict",
    "dump_config",
]

EXPERIMENT_KINDS = (
    "zero-perturbation",
    "stability",
    "amplification",
    "violation",
    "boost-equivalence",
    "convergence",
    "sweep",
)

DATA_KINDS = ("zero", "bump", "eta-pulse", "xi-pulse", "standing-wave")

_FLOAT = (float, int)

# section -> key -> (accepted types, required, default)
_SCHEMA = {
    "experiment": {
        "kind": (str, True, None),
        "label": (str, False, ""),
        "seed": (int, False, 0),
    },
    "system": {
        "name": (str, True, None),
        "alpha": (_FLOAT, False, None),
        "beta": (_FLOAT, False, None),
        "gamma": (_FLOAT, False, None),
        "kappa": (_FLOAT, False, None),
        "scale": (_FLOAT, False, None),
    },
    "profile": {
        "name": (str, True, None),
        "amplitude": (_FLOAT, False, 1.0),
        "n": (int, False, None),
        "radius": (_FLOAT, False, None),
    },
    "grid": {
        "x_min": (_FLOAT, True, None),
        "x_max": (_FLOAT, True, None),
        "nx": (int, True, None),
        "t_end": (_FLOAT, True, None),
        "dt": (_FLOAT, False, None),
        "cfl": (_FLOAT, False, 0.4),
        "bc": (str, False, "compact"),
    },
    "data": {
        "kind": (str, True, None),
        "amplitude": (_FLOAT, False, 1.0),
        "epsilon": (_FLOAT, False, None),
        "center": (_FLOAT, False, 0.0),
        "width": (_FLOAT, False, 2.0),
        "component": (int, False, 0),
    },
    "energy": {
        "delta": (_FLOAT, False, 0.5),
        "row_stride": (int, False, 1),
        "l_max": (int, False, None),
        "track": (bool, False, True),
    },
    "violation": {
        "compliant_system": (str, False, "semilinear-bilinear"),
        "t_cap": (_FLOAT, False, None),
    },
    "boost": {
        "margin": (_FLOAT, False, 0.01),
    },
    "amplification": {
        "window_margin": (_FLOAT, False, 5.0),
    },
    "convergence": {
        "levels": (int, False, 4),
        "exact": (str, False, "none"),
    },
    "sweep": {
        "parameter": (str, True, None),
        "values": (list, True, None),
        "base_kind": (str, False, "stability"),
    },
}

_KIND_TABLES = ("violation", "boost", "amplification", "convergence", "sweep")


@dataclass
class ExperimentConfig:
    kind: str
    label: str
    seed: int
    system_name: str
    system_params: dict
    profile_name: str
    amplitude: float
    n_components: int | None
    radius: float | None
    grid: GridSpec
    data_kind: str
    data: dict
    delta: float
    row_stride: int
    l_max: int | None
    track: bool
    extras: dict = field(default_factory=dict)


def _validate_section(name: str, raw: dict) -> dict:
    schema = _SCHEMA[name]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ConfigError(f"[{name}] has unknown keys: {sorted(unknown)}")
    out = {}
    for key, (types, required, default) in schema.items():
        if key in raw:
            val = raw[key]
            if types is _FLOAT:
                if isinstance(val, bool) or not isinstance(val, _FLOAT):
                    raise ConfigError(f"[{name}].{key} must be a number")
                val = float(val)
            elif types is int:
                if isinstance(val, bool) or not isinstance(val, int):
                    raise ConfigError(f"[{name}].{key} must be an integer")
            elif not isinstance(val, types):
                raise ConfigError(
                    f"[{name}].{key} must be {getattr(types, '__name__', types)}"
                )
            out[key] = val
        elif required:
            raise ConfigError(f"[{name}].{key} is required")
        else:
            out[key] = default
    return out


def parse_config(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a table")
    unknown = set(doc) - set(_SCHEMA)
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    for required in ("experiment", "system", "profile", "grid", "data"):
        if required not in doc:
            raise ConfigError(f"missing [{required}] section")

    exp = _validate_section("experiment", doc["experiment"])
    if exp["kind"] not in EXPERIMENT_KINDS:
        raise ConfigError(
            f"[experiment].kind must be one of {EXPERIMENT_KINDS}"
        )
    system = _validate_section("system", doc["system"])
    profile = _validate_section("profile", doc["profile"])
    grid_raw = _validate_section("grid", doc["grid"])
    data = _validate_section("data", doc["data"])
    if data["kind"] not in DATA_KINDS:
        raise ConfigError(f"[data].kind must be one of {DATA_KINDS}")
    energy = _validate_section("energy", doc.get("energy", {}))
    if not 0.0 < energy["delta"] <= 1.0:
        raise ConfigError("[energy].delta must lie in (0, 1]")

    table_kind = {
        "violation": "violation",
        "boost": "boost-equivalence",
        "amplification": "amplification",
        "convergence": "convergence",
        "sweep": "sweep",
    }
    extras = {}
    for table in _KIND_TABLES:
        if table in doc:
            if table_kind[table] != exp["kind"]:
                raise ConfigError(
                    f"[{table}] is only valid for kind {table_kind[table]!r}"
                )
            extras[table] = _validate_section(table, doc[table])
    if "sweep" in extras:
        vals = extras["sweep"]["values"]
        if not vals or not all(
            isinstance(v, _FLOAT) and not isinstance(v, bool) for v in vals
        ):
            raise ConfigError("[sweep].values must be a nonempty number list")
        extras["sweep"]["values"] = [float(v) for v in vals]

    system_params = {
        k: v for k, v in system.items() if k != "name" and v is not None
    }
    try:
        grid = GridSpec(
            x_min=grid_raw["x_min"], x_max=grid_raw["x_max"],
            nx=grid_raw["nx"], t_end=grid_raw["t_end"], dt=grid_raw["dt"],
            cfl=grid_raw["cfl"], bc=grid_raw["bc"],
        )
    except ValueError as exc:
        raise ConfigError(f"[grid] invalid: {exc}") from exc

    return ExperimentConfig(
        kind=exp["kind"],
        label=exp["label"],
        seed=exp["seed"],
        system_name=system["name"],
        system_params=system_params,
        profile_name=profile["name"],
        amplitude=profile["amplitude"],
        n_components=profile["n"],
        radius=profile["radius"],
        grid=grid,
        data_kind=data["kind"],
        data={k: v for k, v in data.items() if k != "kind"},
        delta=energy["delta"],
        row_stride=energy["row_stride"],
        l_max=energy["l_max"],
        track=energy["track"],
        extras=extras,
    )


def load_config(path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    return parse_config(doc)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """The TOML document (as a dict) that parses back to this config."""
    doc: dict = {
        "experiment": {"kind": cfg.kind, "label": cfg.label, "seed": cfg.seed},
        "system": {"name": cfg.system_name, **cfg.system_params},
        "profile": {"name": cfg.profile_name, "amplitude": cfg.amplitude},
        "grid": {
            "x_min": cfg.grid.x_min, "x_max": cfg.grid.x_max,
            "nx": cfg.grid.nx, "t_end": cfg.grid.t_end,
            "cfl": cfg.grid.cfl, "bc": cfg.grid.bc,
        },
        "data": {"kind": cfg.data_kind, **cfg.data},
        "energy": {
            "delta": cfg.delta, "row_stride": cfg.row_stride,
            "track": cfg.track,
        },
    }
    if cfg.n_components is not None:
        doc["profile"]["n"] = cfg.n_components
    if cfg.radius is not None:
        doc["profile"]["radius"] = cfg.radius
    if cfg.grid.dt is not None:
        doc["grid"]["dt"] = cfg.grid.dt
    if cfg.l_max is not None:
        doc["energy"]["l_max"] = cfg.l_max
    if cfg.data.get("epsilon") is None:
        doc["data"] = {
            k: v for k, v in doc["data"].items() if k != "epsilon"
        }
    for table, body in cfg.extras.items():
        doc[table] = {k: v for k, v in body.items() if v is not None}
    return doc


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(item) for item in v) + "]"
    raise ConfigError(f"cannot serialize {type(v).__name__} to TOML")


def dump_config(cfg: ExperimentConfig) -> str:
    """Serialize to TOML text (round-trips through :func:`parse_config`)."""
    doc = config_to_dict(cfg)
    lines = []
    for section, body in doc.items():
        lines.append(f"[{section}]")
        for key, val in body.items():
            lines.append(f"{key} = {_toml_value(val)}")
        lines.append("")
    return "\n".join(lines)
