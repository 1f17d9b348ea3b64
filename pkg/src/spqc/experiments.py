"""The three benchmark experiments and their CSV artefacts."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .datasets import make_star_dataset, make_step_dataset
from .engine import BatchModel
from .model import PqcModelSpec, ReadoutSpec, SpqcModelSpec, depth_matched
from .training import MetricSummary, RunRecord, TrainConfig, train_seeds

log = logging.getLogger(__name__)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) or isinstance(v, str):
        return str(v)
    return f"{float(v):.17g}"


def write_csv(path: Path, header: Sequence[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


@dataclass
class ModelResult:
    name: str
    spec: object
    runs: list[RunRecord]

    @property
    def summary(self) -> MetricSummary:
        return MetricSummary.from_runs([r.metrics for r in self.runs])

    @property
    def mean_predictions(self) -> np.ndarray:
        return np.mean([r.predictions for r in self.runs], axis=0)

    @property
    def mean_losses(self) -> np.ndarray:
        return np.mean([r.losses for r in self.runs], axis=0)

    def row(self, names: Sequence[str]) -> list:
        s = self.summary
        out = []
        for k in names:
            out += [s.mean(k), s.std(k)]
        return out


def _metric_header(names):
    return [f"{k}_{stat}" for k in names for stat in ("mean", "std")]


# ------------------------------------------------------------ step-compare


@dataclass
class StepCompareConfig:
    n: int = 2
    m: int = 2
    depth: int = 6
    depth_multiplier: int = 4
    num_points: int = 200
    periods: int = 2
    mixing_depth: int = 1
    angle_range: float = 4.0
    train: TrainConfig = field(default_factory=TrainConfig)


def run_step_compare(cfg: StepCompareConfig) -> tuple[ModelResult, ModelResult, object]:
    data = make_step_dataset(cfg.num_points, cfg.periods)
    spqc = SpqcModelSpec(cfg.n, cfg.m, cfg.depth, 1, readout=ReadoutSpec(cfg.mixing_depth), angle_range=cfg.angle_range)
    pqc = depth_matched(spqc, cfg.depth_multiplier)
    results = []
    for name, spec in (("SPQC", spqc), ("PQC", pqc)):
        log.info("step-compare: training %s", name)
        results.append(ModelResult(name, spec, train_seeds(spec, data.xs, data.ys, cfg.train)))
    return results[0], results[1], data


def write_step_compare(out: Path, spqc: ModelResult, pqc: ModelResult, data) -> list[Path]:
    names = ("mse", "mae", "r2")
    out = Path(out)
    t1 = write_csv(out / "table1.csv", ["model"] + _metric_header(names), [[r.name] + r.row(names) for r in (spqc, pqc)])
    f4 = write_csv(
        out / "fig4.csv",
        ["x", "target", "spqc_pred_mean", "pqc_pred_mean"],
        zip(data.xs, data.ys, spqc.mean_predictions, pqc.mean_predictions),
    )
    lc = write_csv(
        out / "fig4_loss.csv",
        ["epoch", "spqc_loss_mean", "pqc_loss_mean"],
        zip(range(1, len(spqc.mean_losses) + 1), spqc.mean_losses, pqc.mean_losses),
    )
    return [t1, f4, lc]


# ------------------------------------------------------------ ancilla-scan


@dataclass
class AncillaScanConfig:
    n: int = 1
    ms: tuple[int, ...] = (1, 2, 3, 4)
    depth: int = 6
    num_points: int = 200
    periods: int = 2
    mixing_depth: int = 1
    angle_range: float = 4.0
    train: TrainConfig = field(default_factory=TrainConfig)


def run_ancilla_scan(cfg: AncillaScanConfig) -> tuple[list[ModelResult], object]:
    data = make_step_dataset(cfg.num_points, cfg.periods)
    results = []
    for m in cfg.ms:
        spec = SpqcModelSpec(cfg.n, m, cfg.depth, 1, readout=ReadoutSpec(cfg.mixing_depth), angle_range=cfg.angle_range)
        log.info("ancilla-scan: training m=%d", m)
        results.append(ModelResult(f"m={m}", spec, train_seeds(spec, data.xs, data.ys, cfg.train)))
    return results, data


def write_ancilla_scan(out: Path, results: list[ModelResult], data) -> list[Path]:
    names = ("mse", "mae", "r2")
    out = Path(out)
    t2 = write_csv(
        out / "table2.csv", ["m"] + _metric_header(names), [[r.spec.m] + r.row(names) for r in results]
    )
    f5 = write_csv(
        out / "fig5.csv",
        ["x", "target"] + [f"pred_m{r.spec.m}_mean" for r in results],
        (
            [x, y] + [r.mean_predictions[i] for r in results]
            for i, (x, y) in enumerate(zip(data.xs, data.ys))
        ),
    )
    return [t2, f5]


# -------------------------------------------------------------------- star


@dataclass
class StarConfig:
    n: int = 2
    m: int = 3
    depth: int = 2
    grid_side: int = 40
    boundary_side: int = 60
    mixing_depth: int = 1
    angle_range: float = 1.0
    train: TrainConfig = field(default_factory=lambda: TrainConfig(loss="mse_on_labels"))


def run_star(cfg: StarConfig) -> tuple[ModelResult, ModelResult, object]:
    data = make_star_dataset(cfg.grid_side)
    results = []
    for name, r in (("linear", 1), ("quadratic", 2)):
        spec = SpqcModelSpec(
            cfg.n,
            cfg.m,
            cfg.depth,
            r,
            num_features=2,
            input_low=-1.0,
            input_high=1.0,
            readout=ReadoutSpec(cfg.mixing_depth),
            angle_range=cfg.angle_range,
        )
        log.info("star: training %s model (%d qubits)", name, spec.total_qubits)
        runs = train_seeds(spec, data.points, data.labels, cfg.train, classification=True)
        results.append(ModelResult(name, spec, runs))
    return results[0], results[1], data


def write_star(out: Path, linear: ModelResult, quad: ModelResult, data, boundary_side: int = 60) -> list[Path]:
    names = ("mse", "mae", "accuracy")
    out = Path(out)
    t3 = write_csv(
        out / "table3.csv",
        ["model", "qubits"] + _metric_header(names),
        [[r.name, r.spec.total_qubits] + r.row(names) for r in (linear, quad)],
    )
    axis = np.linspace(-1.0, 1.0, boundary_side)
    gx, gy = np.meshgrid(axis, axis, indexing="xy")
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    cols = []
    for res in (linear, quad):
        bm = BatchModel(res.spec, grid)
        cols.append(np.mean([bm.predict(run.theta) for run in res.runs], axis=0))
    boundary = write_csv(
        out / "fig6_boundary.csv",
        ["x0", "x1", "linear_pred_mean", "quadratic_pred_mean"],
        ([p[0], p[1], a, b] for p, a, b in zip(grid, cols[0], cols[1])),
    )
    loss = write_csv(
        out / "fig6_loss.csv",
        ["epoch", "linear_loss_mean", "quadratic_loss_mean"],
        zip(range(1, len(linear.mean_losses) + 1), linear.mean_losses, quad.mean_losses),
    )
    return [t3, boundary, loss]
