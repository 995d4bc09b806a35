"""On-disk formats: series CSV, plane snapshots, lattice dumps, checkpoints.

All writers are deterministic byte for byte given the same data.  Floats
are serialized with ``repr`` so every emitted value re-parses to the exact
in-memory double.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import CheckpointError, CheckpointMismatchError, SnapshotFormatError
from .lattice import LatticeGeometry, build_geometry
from .observables import Measurement
from .rng import Xoshiro256pp
from .sampler import ChainState

SERIES_HEADER = "step,W,U,m"

PGM_CORRUPT = 255
PGM_HONEST = 0


def format_series_row(meas: Measurement) -> str:
    return f"{meas.step},{meas.w!r},{meas.u},{meas.m!r}"


def parse_series_row(line: str) -> Measurement:
    step, w, u, m = line.split(",")
    return Measurement(step=int(step), w=float(w), u=int(u), m=float(m))


def write_series_csv(path, series) -> None:
    with open(path, "w") as fh:
        fh.write(SERIES_HEADER + "\n")
        for meas in series:
            fh.write(format_series_row(meas) + "\n")


def read_series_csv(path) -> list[Measurement]:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != SERIES_HEADER:
            raise SnapshotFormatError(f"bad series header {header!r} in {path}")
        return [parse_series_row(line) for line in fh if line.strip()]


def plane_slice(geometry: LatticeGeometry, states: np.ndarray, axis: int, index: int) -> np.ndarray:
    """2D section of the configuration along one axis (the grid itself for d <= 2)."""
    grid = states.reshape(geometry.lengths)
    if geometry.ndim == 1:
        return grid.reshape(1, -1)
    if geometry.ndim == 2:
        return grid
    if not 0 <= axis < geometry.ndim:
        raise SnapshotFormatError(f"plane axis {axis} outside 0..{geometry.ndim - 1}")
    if not 0 <= index < geometry.lengths[axis]:
        raise SnapshotFormatError(
            f"plane index {index} outside axis length {geometry.lengths[axis]}"
        )
    return np.take(grid, index, axis=axis)


def write_pgm(path, grid: np.ndarray, step: int) -> None:
    """P2 portable graymap with one gray level per agent state."""
    height, width = grid.shape
    rows = ["P2", f"# corrlat snapshot step={step}", f"{width} {height}", "255"]
    gray = np.where(grid > 0, PGM_CORRUPT, PGM_HONEST)
    for r in range(height):
        rows.append(" ".join(str(v) for v in gray[r]))
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def write_ascii_grid(path, grid: np.ndarray) -> None:
    with open(path, "w") as fh:
        for r in range(grid.shape[0]):
            fh.write("".join("+" if v > 0 else "-" for v in grid[r]) + "\n")


def dump_lines(geometry: LatticeGeometry, states: np.ndarray, step: int) -> list[str]:
    """Full-lattice dump: ``d L1 .. Ld step`` header, then +/- per site row-major."""
    header = " ".join(
        [str(geometry.ndim)] + [str(n) for n in geometry.lengths] + [str(step)]
    )
    chars = "".join("+" if v > 0 else "-" for v in states)
    row_len = geometry.lengths[-1]
    lines = [header]
    for start in range(0, len(chars), row_len):
        lines.append(chars[start : start + row_len])
    return lines


def write_lattice_dump(path, geometry: LatticeGeometry, states: np.ndarray, step: int) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(dump_lines(geometry, states, step)) + "\n")


def read_lattice_dump(path):
    """Parse a full-lattice dump; returns (geometry, states, step)."""
    with open(path) as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines:
        raise SnapshotFormatError(f"empty dump file {path}")
    fields = lines[0].split()
    try:
        d = int(fields[0])
        if not 1 <= d <= 3 or len(fields) != d + 2:
            raise ValueError
        lengths = [int(x) for x in fields[1 : 1 + d]]
        step = int(fields[1 + d])
    except (ValueError, IndexError):
        raise SnapshotFormatError(f"bad dump header {lines[0]!r} in {path}") from None
    geometry = build_geometry(lengths)
    chars = "".join(line.strip() for line in lines[1:])
    if len(chars) != geometry.site_count or set(chars) - {"+", "-"}:
        raise SnapshotFormatError(
            f"dump body has {len(chars)} usable characters, "
            f"expected {geometry.site_count} of '+'/'-'"
        )
    states = np.frombuffer(chars.encode(), dtype=np.int8).copy()
    states[states == ord("+")] = 1
    states[states == ord("-")] = -1
    return geometry, states, step


def write_cluster_csv(path, rep) -> None:
    with open(path, "w") as fh:
        fh.write("cluster_id,size\n")
        for cid, size in enumerate(rep.sizes):
            fh.write(f"{cid},{size}\n")


# --- checkpoints -----------------------------------------------------------

_CKPT_MAGIC = "corrlat-checkpoint 1"


@dataclass(frozen=True)
class CheckpointData:
    config_hash: str
    step_count: int
    sweep_pos: int
    w: float
    rng_words: tuple
    n_accepted: int
    n_real_draws: int
    n_site_draws: int
    states: np.ndarray


def checkpoint_text(config_hash: str, state: ChainState) -> str:
    body = "\n".join(
        [
            _CKPT_MAGIC,
            f"config {config_hash}",
            f"step {state.step_count}",
            f"sweep_pos {state.sweep_pos}",
            f"w {state.w!r}",
            "rng " + " ".join(str(x) for x in state.rng.state),
            f"counters {state.n_accepted} {state.n_real_draws} {state.n_site_draws}",
            "states " + "".join("+" if v > 0 else "-" for v in state.states),
        ]
    )
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"\ncheck {digest}\n"


def write_checkpoint(path, config_hash: str, state: ChainState) -> None:
    with open(path, "w") as fh:
        fh.write(checkpoint_text(config_hash, state))


def read_checkpoint(path) -> CheckpointData:
    with open(path) as fh:
        text = fh.read()
    lines = text.splitlines()
    if len(lines) != 9 or lines[0] != _CKPT_MAGIC or not lines[-1].startswith("check "):
        raise CheckpointError(f"malformed checkpoint file {path}")
    body = "\n".join(lines[:-1])
    digest = lines[-1].split(" ", 1)[1]
    if hashlib.sha256(body.encode()).hexdigest() != digest:
        raise CheckpointError(f"checkpoint {path} failed its integrity check")
    try:
        fields = {}
        for line in lines[1:-1]:
            key, value = line.split(" ", 1)
            fields[key] = value
        chars = fields["states"]
        if set(chars) - {"+", "-"}:
            raise ValueError("bad state characters")
        states = np.frombuffer(chars.encode(), dtype=np.int8).copy()
        states[states == ord("+")] = 1
        states[states == ord("-")] = -1
        counters = [int(x) for x in fields["counters"].split()]
        return CheckpointData(
            config_hash=fields["config"],
            step_count=int(fields["step"]),
            sweep_pos=int(fields["sweep_pos"]),
            w=float(fields["w"]),
            rng_words=tuple(int(x) for x in fields["rng"].split()),
            n_accepted=counters[0],
            n_real_draws=counters[1],
            n_site_draws=counters[2],
            states=states,
        )
    except (KeyError, ValueError, IndexError) as exc:
        raise CheckpointError(f"malformed checkpoint file {path}: {exc}") from None


def restore_chain(
    ckpt: CheckpointData,
    geometry: LatticeGeometry,
    coupling,
    params,
    expected_hash: str,
) -> ChainState:
    """Rebuild a ChainState from a checkpoint, refusing on config mismatch."""
    if ckpt.config_hash != expected_hash:
        raise CheckpointMismatchError(
            "checkpoint belongs to a different run configuration "
            f"(checkpoint {ckpt.config_hash[:12]}.., current {expected_hash[:12]}..)"
        )
    if ckpt.states.shape[0] != geometry.site_count:
        raise CheckpointError(
            f"checkpoint has {ckpt.states.shape[0]} sites, geometry {geometry.site_count}"
        )
    return ChainState(
        geometry=geometry,
        states=ckpt.states.copy(),
        coupling=coupling,
        params=params,
        rng=Xoshiro256pp.from_state(ckpt.rng_words),
        step_count=ckpt.step_count,
        w=ckpt.w,
        sweep_pos=ckpt.sweep_pos,
        n_accepted=ckpt.n_accepted,
        n_real_draws=ckpt.n_real_draws,
        n_site_draws=ckpt.n_site_draws,
    )
