"""Command-line driver: replay sequences, generate synthetic ones, audit a step.

Subcommands:
  run    replay a manifest and emit one metrics row per step (CSV)
  gen    generate a synthetic dynamic-sparsity sequence (manifest + files)
  check  build a decomposition for one matrix and audit every invariant
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from .assembler import assemble
from .driver import Parth, ParthConfig
from .errors import ParthError
from .graph import build_dual, compress_by_dim
from .hgd import default_max_level, hgd_build
from .metrics import CSV_HEADER, RESET_RECOMMENDED, degradation_monitor, step_metrics
from .oracle import symbolic_analyze
from .ordering import is_permutation, make_ordering_engine
from .separator import make_engine
from .sequence_io import (
    SequenceStep,
    read_manifest,
    read_matrix_market,
    read_node_map,
    write_manifest,
    write_matrix_market,
    write_node_map,
)
from .synchronizer import DirtyState
from .synthetic import grid_laplacian, inject_contacts, patch_remesh, radius_for_fraction


def _now_us() -> int:
    return time.perf_counter_ns() // 1000


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=1, help="matrix rows per graph node")
    p.add_argument("--max-level", default="auto", help="tree depth, or 'auto'")
    p.add_argument("--target-leaf", type=int, default=256, help="target graph nodes per leaf")
    p.add_argument("--separator", default="level_set", help="separator engine name")
    p.add_argument("--local-ordering", default="mindeg", choices=("mindeg", "natural"))
    p.add_argument(
        "--aggressive-reuse",
        nargs="?",
        const=0.5,
        default=None,
        type=float,
        metavar="THETA",
        help="defuse large coarse regions by moving one endpoint into the separator",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def _config_from_args(args) -> ParthConfig:
    seed = int(os.environ.get("PARTH_SEED", args.seed))
    max_level = None if args.max_level == "auto" else int(args.max_level)
    return ParthConfig(
        dim=args.dim,
        max_level=max_level,
        target_leaf=args.target_leaf,
        separator=args.separator,
        local_ordering=args.local_ordering,
        aggressive=args.aggressive_reuse is not None,
        theta=args.aggressive_reuse if args.aggressive_reuse is not None else 0.5,
        seed=seed,
        threads=args.threads,
    )


def cmd_run(args) -> int:
    config = _config_from_args(args)
    try:
        steps = read_manifest(args.manifest)
    except (ParthError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not steps:
        print("error: manifest has no steps", file=sys.stderr)
        return 1

    parth = Parth(config)
    rows = []
    history: list[float] = []
    for num, stp in enumerate(steps, start=1):
        try:
            pattern, _ = read_matrix_market(stp.matrix_path)
            if parth.tree is None:
                state = parth.start(pattern)
                dirty = DirtyState(
                    np.zeros(parth.tree.size, dtype=bool),
                    frozenset(),
                    frozenset(),
                    parth.graph.n_nodes,
                )
            else:
                node_map = None
                if stp.map_path is not None:
                    n_new = pattern.n_rows // config.dim
                    node_map = read_node_map(stp.map_path, n_new, parth.graph.n_nodes)
                dirty, state = parth.step(pattern, node_map)

            baseline_perm, t_baseline = None, 0
            if args.baseline == "full":
                tb = _now_us()
                baseline_perm = Parth(config).start(pattern).matrix_perm
                t_baseline = _now_us() - tb

            m = step_metrics(
                state,
                dirty,
                pattern,
                baseline_perm,
                step=num,
                label=stp.label,
                t_sync_us=parth.last_sync_us,
                t_assemble_us=parth.last_assemble_us,
                t_baseline_us=t_baseline,
            )
            history.append(m.fill_dev)
            m.reset_recommended = degradation_monitor(history) == RESET_RECOMMENDED
            rows.append(m.csv_row())
        except (ParthError, OSError) as exc:
            print(f"step {num} ({stp.label or stp.matrix_path.name}): {exc}", file=sys.stderr)
            return 1

    out = "\n".join([CSV_HEADER] + rows) + "\n"
    if args.out_csv:
        Path(args.out_csv).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0


def cmd_check(args) -> int:
    config = _config_from_args(args)
    failures = []
    try:
        pattern, _ = read_matrix_market(args.matrix)
        g = build_dual(pattern) if config.dim == 1 else compress_by_dim(pattern, config.dim)
        max_level = (
            config.max_level
            if config.max_level is not None
            else default_max_level(max(g.n_nodes, 1), config.target_leaf)
        )
        sep_engine = make_engine(config.separator)
        ord_engine = make_ordering_engine(config.local_ordering)
        tree = hgd_build(g, max_level, sep_engine, config.seed)
        state = assemble(
            tree, g, np.zeros(tree.size, dtype=bool), ord_engine, config.seed, config.dim
        )
    except ParthError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1

    try:
        tree.validate_partition(g.n_nodes)
    except ParthError as exc:
        failures.append(f"partition: {exc}")
    bad = tree.separator_violations(g)
    if bad:
        failures.append(f"separator property violated at tree nodes {bad}")
    if not is_permutation(state.graph_perm, g.n_nodes):
        failures.append("graph permutation is not a bijection")
    if not is_permutation(state.matrix_perm, pattern.n_rows):
        failures.append("matrix permutation is not a bijection")

    natural = symbolic_analyze(pattern, np.arange(pattern.n_rows, dtype=np.int64)).nnz_l
    produced = symbolic_analyze(pattern, state.matrix_perm).nnz_l
    print(f"n={pattern.n_rows} nnz={pattern.nnz} max_level={max_level}")
    print(f"nnz(L) natural ordering:  {natural}")
    print(f"nnz(L) produced ordering: {produced}")
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    print("check: " + ("FAIL" if failures else "PASS"))
    return 1 if failures else 0


def cmd_gen(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(int(os.environ.get("PARTH_SEED", args.seed)))

    pattern, values = grid_laplacian(args.nx, args.ny)
    steps = [SequenceStep(out_dir / "step000.mtx", None, "base")]
    write_matrix_market(steps[0].matrix_path, pattern, values)

    for s in range(1, args.steps + 1):
        name = f"step{s:03d}"
        kind = args.kind
        if kind == "mixed":
            kind = "contacts" if s % 2 == 1 else "remesh"
        center = int(rng.integers(pattern.n_rows))
        radius = radius_for_fraction(pattern, center, args.patch_frac)
        seed_s = int(rng.integers(2**31))
        if kind == "contacts":
            pattern = inject_contacts(pattern, center, radius, args.contacts, seed_s)
            mpath = out_dir / f"{name}.mtx"
            write_matrix_market(mpath, pattern)
            steps.append(SequenceStep(mpath, None, kind))
        else:
            pattern, node_map = patch_remesh(pattern, center, radius, args.densify, seed_s)
            mpath = out_dir / f"{name}.mtx"
            npath = out_dir / f"{name}.map"
            write_matrix_market(mpath, pattern)
            write_node_map(npath, node_map)
            steps.append(SequenceStep(mpath, npath, kind))

    manifest = out_dir / "manifest.txt"
    write_manifest(manifest, steps)
    print(manifest)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parth",
        description="Incremental fill-reducing ordering over dynamic sparsity sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a manifest, emit metrics CSV")
    p_run.add_argument("manifest")
    _add_engine_flags(p_run)
    p_run.add_argument("--baseline", choices=("full", "none"), default="full")
    p_run.add_argument("--out-csv", default=None)
    p_run.set_defaults(func=cmd_run)

    p_gen = sub.add_parser("gen", help="generate a synthetic sequence")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--kind", choices=("contacts", "remesh", "mixed"), default="mixed")
    p_gen.add_argument("--nx", type=int, default=64)
    p_gen.add_argument("--ny", type=int, default=64)
    p_gen.add_argument("--steps", type=int, default=4)
    p_gen.add_argument("--patch-frac", type=float, default=0.02)
    p_gen.add_argument("--contacts", type=int, default=16)
    p_gen.add_argument("--densify", type=float, default=1.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.set_defaults(func=cmd_gen)

    p_check = sub.add_parser("check", help="audit all invariants on one matrix")
    p_check.add_argument("matrix")
    _add_engine_flags(p_check)
    p_check.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
