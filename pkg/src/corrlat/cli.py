"""Command-line front end.

Subcommands: ``run`` (one chain, emitting series.csv, snapshots, a final
lattice dump and cluster report), ``sweep`` (temperature/seed grid with a
summary table), ``enumerate`` (exact small-lattice marginals), ``clusters``
(cluster report of a dump file), ``resume`` (continue from a checkpoint)
and ``bench`` (compiled vs pure-Python kernel timing).

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numeric or
contract violation.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import _core, __version__
from .clusters import label_clusters, report
from .config import (
    KEY_HELP,
    RunConfig,
    build_run_config,
    config_hash,
    make_chain_params,
    make_coupling,
    make_geometry,
    parse_config_file,
    with_overrides,
)
from .errors import (
    CheckpointError,
    CheckpointMismatchError,
    ConfigFileError,
    ContractViolationError,
    EnumerationTooLargeError,
    InvalidGeometryError,
    InvalidParamsError,
    InvalidSiteError,
    SnapshotFormatError,
)
from .io import (
    SERIES_HEADER,
    format_series_row,
    plane_slice,
    read_checkpoint,
    read_lattice_dump,
    read_series_csv,
    restore_chain,
    write_ascii_grid,
    write_checkpoint,
    write_cluster_csv,
    write_lattice_dump,
    write_pgm,
)
from .lattice import build_geometry
from .model import BondCoupling, UniformCoupling, convention_factor
from .oracle import enumerate_distribution, observable_marginal
from .sampler import run_chain
from .observables import total_profit

CHECKPOINT_NAME = "checkpoint.ckpt"


def _add_runconfig_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="run configuration file")
    for key, help_text in KEY_HELP.items():
        parser.add_argument(f"--{key}", dest=f"key_{key}", metavar="V", help=help_text)


def _load_run_config(args) -> RunConfig:
    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {
        key: getattr(args, f"key_{key}")
        for key in KEY_HELP
        if getattr(args, f"key_{key}", None) is not None
    }
    return build_run_config(file_values, overrides, path=args.config or "<flags>")


def _snapshot_writer(outdir: Path, geometry, plane):
    axis, index = plane

    def on_snapshot(state, snap):
        grid = plane_slice(geometry, snap, axis, index)
        stem = outdir / f"snap_{state.step_count:012d}"
        write_pgm(stem.with_suffix(".pgm"), grid, state.step_count)
        write_ascii_grid(stem.with_suffix(".txt"), grid)

    return on_snapshot


def _finalize_run(outdir: Path, geometry, state, plane) -> None:
    axis, index = plane
    grid = plane_slice(geometry, state.states, axis, index)
    write_pgm(outdir / "snap_final.pgm", grid, state.step_count)
    write_ascii_grid(outdir / "snap_final.txt", grid)
    write_lattice_dump(outdir / "final.dump", geometry, state.states, state.step_count)
    rep = report(label_clusters(geometry, state.states))
    write_cluster_csv(outdir / "clusters.csv", rep)
    m = geometry.site_count
    u = total_profit(state.states)
    print(
        f"done: {state.step_count} steps, {state.n_accepted} accepted, "
        f"U={u}, m={(2 * u - m) / m:.6f}, n_clusters={rep.n_clusters}, "
        f"largest={rep.largest}"
    )


def _run_with_outputs(rc: RunConfig, start_state=None, halt_at=None) -> int:
    geometry = make_geometry(rc)
    coupling = make_coupling(rc, geometry)
    params = make_chain_params(rc)
    plane = rc.effective_plane(geometry)
    outdir = Path(rc.effective_output_dir())
    outdir.mkdir(parents=True, exist_ok=True)
    series_path = outdir / "series.csv"
    rc_hash = config_hash(rc)

    kept_rows: list[str] = []
    if start_state is not None:
        # keep only measurements at or before the checkpoint step
        for meas in read_series_csv(series_path):
            if meas.step <= start_state.step_count:
                kept_rows.append(format_series_row(meas))

    def on_checkpoint(state):
        tmp = outdir / (CHECKPOINT_NAME + ".tmp")
        write_checkpoint(tmp, rc_hash, state)
        tmp.replace(outdir / CHECKPOINT_NAME)

    with open(series_path, "w") as fh:
        fh.write(SERIES_HEADER + "\n")
        for row in kept_rows:
            fh.write(row + "\n")

        def on_measure(state, meas):
            fh.write(format_series_row(meas) + "\n")

        result = run_chain(
            geometry,
            coupling,
            params,
            measure_every=rc.effective_measure_every(),
            snapshot_every=rc.snapshot_every or None,
            on_measure=on_measure,
            on_snapshot=_snapshot_writer(outdir, geometry, plane),
            checkpoint_every=rc.checkpoint_every or None,
            on_checkpoint=on_checkpoint,
            halt_at=halt_at,
            start_state=start_state,
            collect_snapshots=False,
        )

    state = result.state
    if state.step_count < params.steps:
        print(f"halted at step {state.step_count}; resume with 'corrlat resume'")
        return 0
    _finalize_run(outdir, geometry, state, plane)
    return 0


def cmd_run(args) -> int:
    rc = _load_run_config(args)
    return _run_with_outputs(rc, halt_at=args.halt_at)


def cmd_resume(args) -> int:
    rc = _load_run_config(args)
    outdir = Path(rc.effective_output_dir())
    ckpt_path = Path(args.checkpoint) if args.checkpoint else outdir / CHECKPOINT_NAME
    ckpt = read_checkpoint(ckpt_path)
    geometry = make_geometry(rc)
    coupling = make_coupling(rc, geometry)
    params = make_chain_params(rc)
    state = restore_chain(ckpt, geometry, coupling, params, config_hash(rc))
    print(f"resuming at step {state.step_count} of {params.steps}")
    return _run_with_outputs(rc, start_state=state, halt_at=args.halt_at)


def _final_half_means(rc: RunConfig) -> tuple:
    """Run one sweep chain; means of |m|, U and cluster count over the last half."""
    geometry = make_geometry(rc)
    coupling = make_coupling(rc, geometry)
    params = make_chain_params(rc)
    cutoff = rc.steps / 2
    acc = {"n": 0, "abs_m": 0.0, "u": 0.0, "ncl": 0.0}

    def on_measure(state, meas):
        if meas.step <= cutoff:
            return
        _, n_clusters = _core.label_corrupt(state.states, geometry.neighbor_table)
        acc["n"] += 1
        acc["abs_m"] += abs(meas.m)
        acc["u"] += meas.u
        acc["ncl"] += n_clusters

    run_chain(
        geometry,
        coupling,
        params,
        measure_every=rc.effective_measure_every(),
        on_measure=on_measure,
        collect_snapshots=False,
    )
    n = max(acc["n"], 1)
    return acc["abs_m"] / n, acc["u"] / n, acc["ncl"] / n


def _sweep_job(rc: RunConfig) -> tuple:
    mean_abs_m, mean_u, mean_ncl = _final_half_means(rc)
    return rc.temperature, rc.seed, mean_abs_m, mean_u, mean_ncl


def cmd_sweep(args) -> int:
    temperatures = [float(tok) for tok in args.temperatures.split()]
    if not temperatures:
        raise ConfigFileError("--temperatures must list at least one value")
    if args.key_T is None:
        args.key_T = repr(temperatures[0])  # satisfy the required key; overridden per job
    rc = _load_run_config(args)
    seeds = [rc.seed + k for k in range(args.seeds)]
    jobs = [
        with_overrides(rc, temperature=t, seed=s) for t in temperatures for s in seeds
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(job) for job in jobs]

    outdir = Path(rc.effective_output_dir())
    outdir.mkdir(parents=True, exist_ok=True)
    out_path = Path(args.out) if args.out else outdir / "summary.csv"
    with open(out_path, "w") as fh:
        fh.write("T,seed,mean_abs_m,mean_U,mean_n_clusters\n")
        for t, s, am, u, ncl in rows:
            fh.write(f"{t!r},{s},{am!r},{u!r},{ncl!r}\n")
    print(f"wrote {out_path} ({len(rows)} rows)")
    return 0


def cmd_enumerate(args) -> int:
    geometry = build_geometry([int(tok) for tok in args.lengths.replace(",", " ").split()])
    if args.coupling == "uniform":
        coupling = UniformCoupling(args.J)
    elif args.coupling == "pm":
        coupling = BondCoupling.random_sign(geometry, args.J, args.disorder_seed)
    else:
        coupling = BondCoupling.random_interval(
            geometry, args.j_low, args.j_high, args.disorder_seed
        )
    scale = convention_factor(args.objective_convention)
    if not args.T > 0:
        raise ConfigFileError(f"T must be > 0, got {args.T}")
    dist = enumerate_distribution(geometry, coupling, (1.0 / args.T) * scale)
    values, masses = observable_marginal(dist, args.observable)
    if args.observable == "W":
        values = values * scale
    lines = ["value,probability"]
    for v, p in zip(values, masses):
        if args.observable == "U":
            lines.append(f"{int(v)},{float(p)!r}")
        else:
            lines.append(f"{float(v)!r},{float(p)!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out} ({len(values)} values)")
    else:
        sys.stdout.write(text)
    return 0


def cmd_clusters(args) -> int:
    geometry, states, step = read_lattice_dump(args.snapshot)
    rep = report(label_clusters(geometry, states))
    print(
        f"step={step} n_clusters={rep.n_clusters} total_corrupt={rep.total_corrupt} "
        f"largest={rep.largest} mean_size={rep.mean_size!r} "
        f"size_weighted_mean={rep.size_weighted_mean!r}"
    )
    if args.out:
        write_cluster_csv(args.out, rep)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write("cluster_id,size\n")
        for cid, size in enumerate(rep.sizes):
            sys.stdout.write(f"{cid},{size}\n")
    return 0


def cmd_bench(args) -> int:
    from .bench import run_benchmark

    run_benchmark(
        lengths=[int(tok) for tok in args.lengths.replace(",", " ").split()],
        temperature=args.T,
        steps=args.steps,
        seed=args.seed,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrlat",
        description="Metropolis Monte Carlo for corruption activity on periodic lattices",
    )
    parser.add_argument("--version", action="version", version=f"corrlat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one chain and write its artifacts")
    _add_runconfig_flags(p_run)
    p_run.add_argument(
        "--halt-at",
        type=int,
        metavar="STEP",
        help="stop early at STEP after writing a checkpoint (resume later)",
    )
    p_run.set_defaults(func=cmd_run)

    p_resume = sub.add_parser("resume", help="continue a checkpointed run")
    _add_runconfig_flags(p_resume)
    p_resume.add_argument("--checkpoint", metavar="FILE", help="checkpoint file (default: <output_dir>/checkpoint.ckpt)")
    p_resume.add_argument("--halt-at", type=int, metavar="STEP", help=argparse.SUPPRESS)
    p_resume.set_defaults(func=cmd_resume)

    p_sweep = sub.add_parser("sweep", help="run a temperature/seed grid")
    _add_runconfig_flags(p_sweep)
    p_sweep.add_argument(
        "--temperatures", required=True, metavar="LIST", help="temperatures, e.g. '0.5 4.0 5.0'"
    )
    p_sweep.add_argument("--seeds", type=int, default=1, metavar="N", help="chains per temperature (seeds seed..seed+N-1)")
    p_sweep.add_argument("--workers", type=int, default=1, metavar="N", help="parallel worker processes")
    p_sweep.add_argument("--out", metavar="FILE", help="summary CSV path (default: <output_dir>/summary.csv)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_enum = sub.add_parser("enumerate", help="exact observable marginal for a small lattice")
    p_enum.add_argument("--lengths", required=True, metavar="L", help="axis lengths (<= 24 sites)")
    p_enum.add_argument("--T", type=float, required=True, help="temperature")
    p_enum.add_argument("--observable", choices=("U", "W", "m"), default="U")
    p_enum.add_argument("--coupling", choices=("uniform", "pm", "interval"), default="uniform")
    p_enum.add_argument("--J", type=float, default=1.0)
    p_enum.add_argument("--j_low", type=float, default=-1.0)
    p_enum.add_argument("--j_high", type=float, default=1.0)
    p_enum.add_argument("--disorder_seed", type=int, default=1)
    p_enum.add_argument("--objective_convention", choices=("bond_once", "literal"), default="bond_once")
    p_enum.add_argument("--out", metavar="FILE", help="write CSV here instead of stdout")
    p_enum.set_defaults(func=cmd_enumerate)

    p_clusters = sub.add_parser("clusters", help="cluster report of a lattice dump")
    p_clusters.add_argument("snapshot", help="full-lattice dump file")
    p_clusters.add_argument("--out", metavar="FILE", help="write cluster_id,size CSV here")
    p_clusters.set_defaults(func=cmd_clusters)

    p_bench = sub.add_parser("bench", help="compare the compiled and pure-Python kernels")
    p_bench.add_argument("--lengths", default="32 32 32", metavar="L")
    p_bench.add_argument("--T", type=float, default=2.0)
    p_bench.add_argument("--steps", type=int, default=1_000_000)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CheckpointMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        ConfigFileError,
        InvalidParamsError,
        InvalidGeometryError,
        InvalidSiteError,
        EnumerationTooLargeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, CheckpointError, SnapshotFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ContractViolationError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
