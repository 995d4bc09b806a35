"""Run configuration: flat ``key = value`` files plus flag overrides.

Lines may carry ``#`` comments; keys are the ones listed in KEY_HELP.
``lengths``, ``T`` and ``steps`` have no defaults and must be supplied by
the file or by flags.  Validation failures point at the offending line.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, replace

from .errors import ConfigFileError
from .lattice import INIT_MODES, LatticeGeometry, build_geometry
from .model import CONVENTIONS, BondCoupling, UniformCoupling
from .sampler import SCHEDULES, ChainParams

DEFAULT_OUTPUT_DIR_ENV = "CORRLAT_OUTPUT_DIR"

COUPLING_KINDS = ("uniform", "pm", "interval")

AXIS_NAMES = {"x": 0, "y": 1, "z": 2}

KEY_HELP = {
    "lengths": "sites per axis, 1-3 integers >= 2 (e.g. '60 60 60'); required",
    "T": "temperature (social-economic activity), > 0; required",
    "steps": "elementary trial moves to run, >= 1; required",
    "seed": "64-bit chain seed (default 0)",
    "schedule": "random_site | sequential_sweep (default random_site)",
    "init_mode": "random | all_corrupt | all_honest (default random)",
    "p_corrupt": "corrupt probability for random init (default 0.5)",
    "coupling": "uniform | pm | interval (default uniform)",
    "J": "interaction strength for uniform coupling and +-J disorder (default 1.0)",
    "j_low": "lower bound of interval disorder (default -1.0)",
    "j_high": "upper bound of interval disorder (default 1.0)",
    "disorder_seed": "seed of the quenched-disorder stream (default 1)",
    "measure_every": "measurement cadence in steps; 0 = auto (max(steps//1000, 1))",
    "snapshot_every": "plane-snapshot cadence in steps; 0 = disabled (default)",
    "snapshot_plane": "'<axis> <index>' for d=3 slices, e.g. 'z 30'; default: axis 0, middle",
    "output_dir": f"output directory (default ${DEFAULT_OUTPUT_DIR_ENV} or ./corrlat_out)",
    "objective_convention": "bond_once | literal (default bond_once)",
    "checkpoint_every": "checkpoint cadence in steps; 0 = disabled (default)",
}


@dataclass(frozen=True)
class RunConfig:
    lengths: tuple
    temperature: float
    steps: int
    seed: int = 0
    schedule: str = "random_site"
    init_mode: str = "random"
    p_corrupt: float = 0.5
    coupling: str = "uniform"
    j: float = 1.0
    j_low: float = -1.0
    j_high: float = 1.0
    disorder_seed: int = 1
    measure_every: int = 0
    snapshot_every: int = 0
    snapshot_plane: tuple | None = None  # (axis, index)
    output_dir: str = ""
    objective_convention: str = "bond_once"
    checkpoint_every: int = 0

    def effective_measure_every(self) -> int:
        if self.measure_every > 0:
            return self.measure_every
        return max(self.steps // 1000, 1)

    def effective_output_dir(self) -> str:
        if self.output_dir:
            return self.output_dir
        return os.environ.get(DEFAULT_OUTPUT_DIR_ENV, "corrlat_out")

    def effective_plane(self, geometry: LatticeGeometry) -> tuple:
        if self.snapshot_plane is not None:
            axis, index = self.snapshot_plane
        else:
            axis, index = 0, geometry.lengths[0] // 2
        if not 0 <= axis < geometry.ndim:
            raise ConfigFileError(
                f"snapshot_plane axis {axis} outside 0..{geometry.ndim - 1}"
            )
        if not 0 <= index < geometry.lengths[axis]:
            raise ConfigFileError(
                f"snapshot_plane index {index} outside axis length {geometry.lengths[axis]}"
            )
        return axis, index


def _parse_lengths(text: str):
    for sep in (",", "x", "X"):
        text = text.replace(sep, " ")
    try:
        lengths = tuple(int(tok) for tok in text.split())
    except ValueError:
        raise ConfigFileError(f"lengths must be integers, got {text!r}") from None
    if not lengths:
        raise ConfigFileError("lengths must list at least one axis")
    return lengths


def _parse_plane(text: str):
    toks = text.split()
    if len(toks) != 2:
        raise ConfigFileError(f"snapshot_plane needs '<axis> <index>', got {text!r}")
    axis_tok, index_tok = toks
    if axis_tok.lower() in AXIS_NAMES:
        axis = AXIS_NAMES[axis_tok.lower()]
    else:
        try:
            axis = int(axis_tok)
        except ValueError:
            raise ConfigFileError(f"bad plane axis {axis_tok!r}") from None
    try:
        index = int(index_tok)
    except ValueError:
        raise ConfigFileError(f"bad plane index {index_tok!r}") from None
    return axis, index


def _converter(key: str):
    return {
        "lengths": _parse_lengths,
        "T": float,
        "steps": int,
        "seed": int,
        "schedule": str,
        "init_mode": str,
        "p_corrupt": float,
        "coupling": str,
        "J": float,
        "j_low": float,
        "j_high": float,
        "disorder_seed": int,
        "measure_every": int,
        "snapshot_every": int,
        "snapshot_plane": _parse_plane,
        "output_dir": str,
        "objective_convention": str,
        "checkpoint_every": int,
    }[key]

_FIELD_OF_KEY = {
    "lengths": "lengths",
    "T": "temperature",
    "steps": "steps",
    "seed": "seed",
    "schedule": "schedule",
    "init_mode": "init_mode",
    "p_corrupt": "p_corrupt",
    "coupling": "coupling",
    "J": "j",
    "j_low": "j_low",
    "j_high": "j_high",
    "disorder_seed": "disorder_seed",
    "measure_every": "measure_every",
    "snapshot_every": "snapshot_every",
    "snapshot_plane": "snapshot_plane",
    "output_dir": "output_dir",
    "objective_convention": "objective_convention",
    "checkpoint_every": "checkpoint_every",
}


def parse_config_file(path) -> dict:
    """Read a config file into {key: (raw_value, line_number)}."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigFileError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in KEY_HELP:
                raise ConfigFileError(
                    f"{path}:{lineno}: unknown key {key!r} (known: {', '.join(KEY_HELP)})"
                )
            if key in values:
                raise ConfigFileError(f"{path}:{lineno}: duplicate key {key!r}")
            values[key] = (value, lineno)
    return values


def build_run_config(file_values: dict | None = None, overrides: dict | None = None,
                     path: str = "<config>") -> RunConfig:
    """Merge file values and flag overrides into a validated RunConfig."""
    fields = {}
    for key, (raw, lineno) in (file_values or {}).items():
        try:
            fields[_FIELD_OF_KEY[key]] = _converter(key)(raw)
        except (ValueError, ConfigFileError) as exc:
            raise ConfigFileError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        try:
            value = _converter(key)(raw) if isinstance(raw, str) else raw
        except (ValueError, ConfigFileError) as exc:
            raise ConfigFileError(f"flag --{key}: {exc}") from None
        fields[_FIELD_OF_KEY[key]] = value

    for required in ("lengths", "temperature", "steps"):
        if required not in fields:
            key = {"temperature": "T"}.get(required, required)
            raise ConfigFileError(f"{path}: missing required key {key!r}")

    rc = RunConfig(**fields)
    _validate(rc)
    return rc


def _validate(rc: RunConfig) -> None:
    build_geometry(rc.lengths)  # raises InvalidGeometryError on bad lengths
    if not rc.temperature > 0:
        raise ConfigFileError(f"T must be > 0, got {rc.temperature}")
    if rc.steps < 1:
        raise ConfigFileError(f"steps must be >= 1, got {rc.steps}")
    if rc.schedule not in SCHEDULES:
        raise ConfigFileError(f"schedule must be one of {SCHEDULES}, got {rc.schedule!r}")
    if rc.init_mode not in INIT_MODES:
        raise ConfigFileError(f"init_mode must be one of {INIT_MODES}, got {rc.init_mode!r}")
    if not 0.0 <= rc.p_corrupt <= 1.0:
        raise ConfigFileError(f"p_corrupt must be in [0, 1], got {rc.p_corrupt}")
    if rc.coupling not in COUPLING_KINDS:
        raise ConfigFileError(f"coupling must be one of {COUPLING_KINDS}, got {rc.coupling!r}")
    if rc.coupling == "interval" and not rc.j_low < rc.j_high:
        raise ConfigFileError(f"need j_low < j_high, got [{rc.j_low}, {rc.j_high})")
    if rc.objective_convention not in CONVENTIONS:
        raise ConfigFileError(
            f"objective_convention must be one of {CONVENTIONS}, got {rc.objective_convention!r}"
        )
    for name in ("measure_every", "snapshot_every", "checkpoint_every"):
        if getattr(rc, name) < 0:
            raise ConfigFileError(f"{name} must be >= 0, got {getattr(rc, name)}")


def make_geometry(rc: RunConfig) -> LatticeGeometry:
    return build_geometry(rc.lengths)


def make_coupling(rc: RunConfig, geometry: LatticeGeometry):
    if rc.coupling == "uniform":
        return UniformCoupling(rc.j)
    if rc.coupling == "pm":
        return BondCoupling.random_sign(geometry, rc.j, rc.disorder_seed)
    return BondCoupling.random_interval(geometry, rc.j_low, rc.j_high, rc.disorder_seed)


def make_chain_params(rc: RunConfig) -> ChainParams:
    return ChainParams(
        temperature=rc.temperature,
        steps=rc.steps,
        schedule=rc.schedule,
        seed=rc.seed,
        init_mode=rc.init_mode,
        p_corrupt=rc.p_corrupt,
        objective_convention=rc.objective_convention,
    )


def canonical_text(rc: RunConfig) -> str:
    """Canonical serialization of the dynamics-relevant configuration.

    Excludes output_dir and checkpoint_every, which do not affect the
    produced series or snapshots.
    """
    plane = "auto" if rc.snapshot_plane is None else f"{rc.snapshot_plane[0]} {rc.snapshot_plane[1]}"
    pairs = [
        ("lengths", " ".join(str(n) for n in rc.lengths)),
        ("T", repr(rc.temperature)),
        ("steps", str(rc.steps)),
        ("seed", str(rc.seed)),
        ("schedule", rc.schedule),
        ("init_mode", rc.init_mode),
        ("p_corrupt", repr(rc.p_corrupt)),
        ("coupling", rc.coupling),
        ("J", repr(rc.j)),
        ("j_low", repr(rc.j_low)),
        ("j_high", repr(rc.j_high)),
        ("disorder_seed", str(rc.disorder_seed)),
        ("measure_every", str(rc.measure_every)),
        ("snapshot_every", str(rc.snapshot_every)),
        ("snapshot_plane", plane),
        ("objective_convention", rc.objective_convention),
    ]
    return "".join(f"{k}={v}\n" for k, v in pairs)


def config_hash(rc: RunConfig) -> str:
    return hashlib.sha256(canonical_text(rc).encode()).hexdigest()


def with_overrides(rc: RunConfig, **kwargs) -> RunConfig:
    return replace(rc, **kwargs)
