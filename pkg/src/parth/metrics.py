"""Per-step measurement and quality-degradation tracking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import median

import numpy as np

from .assembler import AssemblyState
from .graph import SparsityPattern
from .oracle import fill_deviation
from .synchronizer import DirtyState

CSV_HEADER = (
    "step,label,n,nnz,reuse_ratio,fill_dev,recomp_tree,recomp_nodes,"
    "t_sync_us,t_assemble_us,t_baseline_us,reset_recommended"
)

OK = "ok"
RESET_RECOMMENDED = "reset_recommended"


@dataclass
class StepMetrics:
    step: int
    label: str
    n: int
    nnz: int
    reuse_ratio: float
    fill_dev: float
    recomp_tree: int
    recomp_nodes: int
    t_sync_us: int
    t_assemble_us: int
    t_baseline_us: int
    reset_recommended: bool = False

    def csv_row(self) -> str:
        dev = "" if math.isnan(self.fill_dev) else f"{self.fill_dev:.6f}"
        return (
            f"{self.step},{self.label},{self.n},{self.nnz},"
            f"{self.reuse_ratio:.6f},{dev},{self.recomp_tree},{self.recomp_nodes},"
            f"{self.t_sync_us},{self.t_assemble_us},{self.t_baseline_us},"
            f"{int(self.reset_recommended)}"
        )


def step_metrics(
    state: AssemblyState,
    dirty: DirtyState,
    pattern: SparsityPattern,
    baseline_perm: np.ndarray | None,
    *,
    step: int = 0,
    label: str = "",
    t_sync_us: int = 0,
    t_assemble_us: int = 0,
    t_baseline_us: int = 0,
) -> StepMetrics:
    """Assemble one measurement row; baseline_perm may be None to skip fill."""
    n_graph = int(state.graph_perm.size)
    dev = float("nan")
    if baseline_perm is not None:
        dev = fill_deviation(state.matrix_perm, baseline_perm, pattern)
    return StepMetrics(
        step=step,
        label=label,
        n=pattern.n_rows,
        nnz=pattern.nnz,
        reuse_ratio=state.reused_nodes / n_graph,
        fill_dev=dev,
        recomp_tree=int(np.count_nonzero(~dirty.reuse_mask)),
        recomp_nodes=n_graph - state.reused_nodes,
        t_sync_us=t_sync_us,
        t_assemble_us=t_assemble_us,
        t_baseline_us=t_baseline_us,
    )


def degradation_monitor(history, threshold: float = 0.15, window: int = 5) -> str:
    """Flag a recommended reset when the trailing-median deviation drifts high.

    The reset itself is left to the caller; this only reports.
    """
    values = [v for v in history if not math.isnan(v)]
    if not values:
        return OK
    tail = values[-window:]
    return RESET_RECOMMENDED if median(tail) > threshold else OK
