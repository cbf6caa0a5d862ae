"""Run configuration: strict JSON schema, presets, and problem assembly.

The configuration document is a single JSON object with sections model,
bath, grid, initial_state and (optionally) outputs.  Unknown fields are
rejected everywhere so typos in physics parameters fail fast.  Complex
matrix entries are written as plain numbers or two-element [re, im] arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .hybridization import FlatBandParams, load_tabulated, sample_flat_band
from .liouville import LindbladModel, build_liouvillian
from .nca import NcaProblem

ANNIHILATION_2 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class ModelConfig:
    eps0: float
    gamma_l: float
    gamma_p: float
    gamma_d: float


@dataclass(frozen=True)
class BathConfig:
    kind: str
    eta: float | None = None
    w: float | None = None
    path: str | None = None


@dataclass(frozen=True)
class GridConfig:
    dt: float
    t_max: float


@dataclass(frozen=True)
class InitialStateConfig:
    basis_label: int | None = None
    matrix: tuple | None = None  # nested tuple of complex entries


@dataclass(frozen=True)
class OutputsConfig:
    occupation: bool = True
    spectrum: bool = True
    states: bool = False
    out_dir: str = "."


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig
    bath: BathConfig
    grid: GridConfig
    initial_state: InitialStateConfig
    outputs: OutputsConfig = field(default_factory=OutputsConfig)


def _require_number(section, data, key):
    if key not in data:
        raise ConfigError(f"{section}.{key}", "missing required field")
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key}", f"expected a number, got {value!r}")
    return float(value)


def _reject_unknown(section, data, allowed):
    for key in data:
        if key not in allowed:
            name = f"{section}.{key}" if section else key
            raise ConfigError(name, "unknown field")


def _complex_entry(section, value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(section, f"matrix entries must be numbers or [re, im] pairs, got {value!r}")


def run_config_from_dict(data):
    """Parse and validate a configuration dictionary (strict: unknown fields fail)."""
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    _reject_unknown("", data, {"model", "bath", "grid", "initial_state", "outputs"})
    for section in ("model", "bath", "grid", "initial_state"):
        if section not in data:
            raise ConfigError(section, "missing required section")
        if not isinstance(data[section], dict):
            raise ConfigError(section, "must be an object")

    mdata = data["model"]
    _reject_unknown("model", mdata, {"eps0", "gamma_l", "gamma_p", "gamma_d"})
    model = ModelConfig(
        eps0=_require_number("model", mdata, "eps0"),
        gamma_l=_require_number("model", mdata, "gamma_l"),
        gamma_p=_require_number("model", mdata, "gamma_p"),
        gamma_d=_require_number("model", mdata, "gamma_d"),
    )
    for name in ("gamma_l", "gamma_p", "gamma_d"):
        if getattr(model, name) < 0:
            raise ConfigError(f"model.{name}", "rate must be nonnegative")

    bdata = data["bath"]
    _reject_unknown("bath", bdata, {"kind", "eta", "w", "path"})
    kind = bdata.get("kind")
    if kind == "flat_band":
        if "path" in bdata:
            raise ConfigError("bath.path", "not allowed for kind=flat_band")
        bath = BathConfig(
            kind=kind,
            eta=_require_number("bath", bdata, "eta"),
            w=_require_number("bath", bdata, "w"),
        )
        if bath.eta < 0:
            raise ConfigError("bath.eta", "must be nonnegative")
        if bath.w <= 0:
            raise ConfigError("bath.w", "must be positive")
    elif kind == "tabulated":
        for key in ("eta", "w"):
            if key in bdata:
                raise ConfigError(f"bath.{key}", "not allowed for kind=tabulated")
        path = bdata.get("path")
        if not isinstance(path, str) or not path:
            raise ConfigError("bath.path", "missing or not a string")
        bath = BathConfig(kind=kind, path=path)
    else:
        raise ConfigError("bath.kind", f"must be 'flat_band' or 'tabulated', got {kind!r}")

    gdata = data["grid"]
    _reject_unknown("grid", gdata, {"dt", "t_max"})
    grid = GridConfig(
        dt=_require_number("grid", gdata, "dt"),
        t_max=_require_number("grid", gdata, "t_max"),
    )
    if grid.dt <= 0:
        raise ConfigError("grid.dt", "must be positive")
    if grid.t_max < grid.dt:
        raise ConfigError("grid.t_max", "must be at least grid.dt")

    sdata = data["initial_state"]
    _reject_unknown("initial_state", sdata, {"basis_label", "matrix"})
    if ("basis_label" in sdata) == ("matrix" in sdata):
        raise ConfigError("initial_state", "specify exactly one of basis_label or matrix")
    if "basis_label" in sdata:
        label = sdata["basis_label"]
        if label not in (0, 1) or isinstance(label, bool):
            raise ConfigError("initial_state.basis_label", f"must be 0 or 1, got {label!r}")
        state = InitialStateConfig(basis_label=int(label))
    else:
        raw = sdata["matrix"]
        if not (isinstance(raw, list) and len(raw) == 2
                and all(isinstance(r, list) and len(r) == 2 for r in raw)):
            raise ConfigError("initial_state.matrix", "must be a 2x2 nested array")
        entries = tuple(
            tuple(_complex_entry("initial_state.matrix", v) for v in row) for row in raw
        )
        mat = np.array(entries, dtype=complex)
        if np.abs(mat - mat.conj().T).max() > 1e-9 * max(np.abs(mat).max(), 1.0):
            raise ConfigError("initial_state.matrix", "must be Hermitian")
        if abs(np.trace(mat) - 1.0) > 1e-9:
            raise ConfigError("initial_state.matrix", f"trace is {np.trace(mat).real}, expected 1")
        state = InitialStateConfig(matrix=entries)

    odata = data.get("outputs", {})
    if not isinstance(odata, dict):
        raise ConfigError("outputs", "must be an object")
    _reject_unknown("outputs", odata, {"occupation", "spectrum", "states", "out_dir"})
    for key in ("occupation", "spectrum", "states"):
        if key in odata and not isinstance(odata[key], bool):
            raise ConfigError(f"outputs.{key}", "must be a boolean")
    out_dir = odata.get("out_dir", ".")
    if not isinstance(out_dir, str):
        raise ConfigError("outputs.out_dir", "must be a string")
    outputs = OutputsConfig(
        occupation=odata.get("occupation", True),
        spectrum=odata.get("spectrum", True),
        states=odata.get("states", False),
        out_dir=out_dir,
    )

    return RunConfig(model=model, bath=bath, grid=grid, initial_state=state, outputs=outputs)


def load_run_config(path):
    """Read and validate a JSON configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError("config", f"file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    return run_config_from_dict(data)


def _json_number(z):
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


def config_to_dict(cfg):
    """Plain-JSON form of a RunConfig (used for the summary echo)."""
    bath = {"kind": cfg.bath.kind}
    if cfg.bath.kind == "flat_band":
        bath.update(eta=cfg.bath.eta, w=cfg.bath.w)
    else:
        bath.update(path=cfg.bath.path)
    if cfg.initial_state.basis_label is not None:
        state = {"basis_label": cfg.initial_state.basis_label}
    else:
        state = {"matrix": [[_json_number(v) for v in row] for row in cfg.initial_state.matrix]}
    return {
        "model": {
            "eps0": cfg.model.eps0,
            "gamma_l": cfg.model.gamma_l,
            "gamma_p": cfg.model.gamma_p,
            "gamma_d": cfg.model.gamma_d,
        },
        "bath": bath,
        "grid": {"dt": cfg.grid.dt, "t_max": cfg.grid.t_max},
        "initial_state": state,
        "outputs": {
            "occupation": cfg.outputs.occupation,
            "spectrum": cfg.outputs.spectrum,
            "states": cfg.outputs.states,
            "out_dir": cfg.outputs.out_dir,
        },
    }


def n_steps(cfg):
    """Number of solver steps, t_max / dt rounded to the nearest integer."""
    return max(1, int(round(cfg.grid.t_max / cfg.grid.dt)))


def initial_state_matrix(cfg):
    """The initial density matrix of a configuration."""
    if cfg.initial_state.basis_label is not None:
        rho = np.zeros((2, 2), dtype=complex)
        rho[cfg.initial_state.basis_label, cfg.initial_state.basis_label] = 1.0
        return rho
    return np.array(cfg.initial_state.matrix, dtype=complex)


def lindblad_model(model_cfg):
    """Single fermionic mode with loss d, pump d^dag, and dephasing d^dag d."""
    d = ANNIHILATION_2
    number = d.conj().T @ d
    return LindbladModel(
        hamiltonian=model_cfg.eps0 * number,
        jumps=(
            (d, model_cfg.gamma_l),
            (d.conj().T, model_cfg.gamma_p),
            (number, model_cfg.gamma_d),
        ),
    )


def problem_from_config(cfg):
    """Assemble the solver problem of a configuration; returns (problem, d)."""
    d = ANNIHILATION_2
    steps = n_steps(cfg)
    if cfg.bath.kind == "flat_band":
        table = sample_flat_band(FlatBandParams(cfg.bath.eta, cfg.bath.w), cfg.grid.dt, steps)
        dt = cfg.grid.dt
    else:
        table = load_tabulated(cfg.bath.path)
        if abs(table.dt - cfg.grid.dt) > 1e-9 * cfg.grid.dt:
            raise ConfigError(
                "bath.path",
                f"tabulated grid step {table.dt} does not match grid.dt = {cfg.grid.dt}",
            )
        if table.L < steps:
            raise ConfigError(
                "bath.path",
                f"tabulated range covers {table.L} steps, run needs {steps}",
            )
        dt = table.dt  # exact-match requirement: adopt the table grid
    liou = build_liouvillian(lindblad_model(cfg.model))
    prob = NcaProblem(liouvillian=liou, d_ops=(d,), hyb=table, dt=dt, L=steps, xi=-1)
    return prob, d


_FIG3_MODEL = {"eps0": 5.0, "gamma_l": 0.5, "gamma_p": 0.5, "gamma_d": 0.5}
_FIG4_MODEL = {"eps0": 1.0, "gamma_l": 0.5, "gamma_p": 0.5, "gamma_d": 0.5}
_CASE_BATH = {"kind": "flat_band", "eta": 1.0, "w": 10.0}
_CASE_GRID = {"dt": 0.02, "t_max": 10.0}
_GROUND_STATE = {"basis_label": 0}


@dataclass(frozen=True)
class PresetSpec:
    """A named configuration, optionally with a default sweep attached."""

    config: RunConfig
    sweep_param: str | None = None
    sweep_values: tuple = ()


def _preset_config(model):
    return run_config_from_dict(
        {
            "model": dict(model),
            "bath": dict(_CASE_BATH),
            "grid": dict(_CASE_GRID),
            "initial_state": dict(_GROUND_STATE),
            "outputs": {"occupation": True, "spectrum": True, "states": False},
        }
    )


def preset(name):
    """Built-in parameter sets of the case-study figures."""
    if name == "fig3":
        return PresetSpec(config=_preset_config(_FIG3_MODEL))
    fig4 = _preset_config(_FIG4_MODEL)
    if name == "fig4-eta":
        return PresetSpec(config=fig4, sweep_param="eta", sweep_values=(0.0, 1.0, 2.0))
    if name == "fig4-w":
        return PresetSpec(config=fig4, sweep_param="w", sweep_values=(10.0, 20.0, 40.0))
    if name == "fig4-deph":
        return PresetSpec(config=fig4, sweep_param="gamma_d", sweep_values=(0.0, 0.5, 1.0))
    if name == "fig4-scan":
        return PresetSpec(
            config=fig4,
            sweep_param="eps0",
            sweep_values=tuple(float(x) for x in range(-8, 9, 2)),
        )
    raise ConfigError("preset", f"unknown preset {name!r}")


PRESET_NAMES = ("fig3", "fig4-eta", "fig4-w", "fig4-deph", "fig4-scan")
