"""Losses, metrics, gradients, Adam and the multi-seed training loop."""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, MetricError, TrainingDivergedError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-2
    epochs: int = 5000
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    loss: str = "mse"
    fd_step: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    gradient: str = "analytic"
    divergence_threshold: float = 1e6

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigurationError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if not self.seeds:
            raise ConfigurationError("at least one seed is required")
        if self.loss not in ("mse", "mse_on_labels"):
            raise ConfigurationError(f"unknown loss {self.loss!r}")
        if self.gradient not in ("analytic", "fd"):
            raise ConfigurationError(f"unknown gradient engine {self.gradient!r}")
        if not self.fd_step > 0:
            raise ConfigurationError(f"fd_step must be > 0, got {self.fd_step}")


# ---------------------------------------------------------------- metrics


def _pair(preds, targets):
    preds = np.asarray(preds, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if preds.shape != targets.shape or preds.ndim != 1 or preds.size < 1:
        raise ConfigurationError(f"need equal-length 1-D inputs, got {preds.shape} and {targets.shape}")
    return preds, targets


def loss_mse(preds, targets) -> float:
    preds, targets = _pair(preds, targets)
    return float(np.mean((preds - targets) ** 2))


def metric_mae(preds, targets) -> float:
    preds, targets = _pair(preds, targets)
    return float(np.mean(np.abs(preds - targets)))


def metric_r2(preds, targets) -> float:
    """Coefficient of determination ``1 - SS_res / SS_tot``."""
    preds, targets = _pair(preds, targets)
    ss_tot = float(np.sum((targets - targets.mean()) ** 2))
    if ss_tot == 0:
        raise MetricError("R2 is undefined for constant targets")
    return 1.0 - float(np.sum((preds - targets) ** 2)) / ss_tot


def metric_accuracy(preds, labels) -> float:
    """Percentage of predictions whose sign matches a +-1 label (zero counts as +1)."""
    preds, labels = _pair(preds, labels)
    if not np.all(np.isin(labels, (-1.0, 1.0))):
        raise ConfigurationError("labels must be -1 or +1")
    signs = np.where(preds >= 0, 1.0, -1.0)
    return float(np.mean(signs == labels) * 100.0)


@dataclass
class Metrics:
    mse: float
    mae: float
    r2: float
    accuracy: float | None = None

    @classmethod
    def evaluate(cls, preds, targets, classification: bool = False) -> "Metrics":
        return cls(
            mse=loss_mse(preds, targets),
            mae=metric_mae(preds, targets),
            r2=metric_r2(preds, targets),
            accuracy=metric_accuracy(preds, targets) if classification else None,
        )


@dataclass
class MetricSummary:
    """Per-seed values with mean and (population) standard deviation."""

    values: dict[str, list[float]]

    def mean(self, name: str) -> float:
        return float(np.mean(self.values[name]))

    def std(self, name: str) -> float:
        return float(np.std(self.values[name]))

    @classmethod
    def from_runs(cls, metrics: Sequence[Metrics]) -> "MetricSummary":
        names = [k for k, v in asdict(metrics[0]).items() if v is not None]
        return cls({k: [float(getattr(m, k)) for m in metrics] for k in names})


# -------------------------------------------------------------- gradients


def gradient_fd(fn: Callable[[np.ndarray], float], theta, fd_step: float = 1e-4) -> np.ndarray:
    """Central finite differences, one coordinate at a time."""
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for k in range(theta.size):
        up = theta.copy()
        dn = theta.copy()
        up[k] += fd_step
        dn[k] -= fd_step
        grad[k] = (fn(up) - fn(dn)) / (2 * fd_step)
    return grad


def directional_derivative(fn: Callable[[np.ndarray], float], theta, direction, h: float = 1e-3) -> float:
    """Five-point stencil estimate of ``d/dt fn(theta + t * u)`` at ``t = 0`` for unit ``u``."""
    theta = np.asarray(theta, dtype=float)
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    f = lambda t: fn(theta + t * u)
    return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)


# ------------------------------------------------------------------ adam


def adam_update(theta, grad, m, v, t, lr=1e-2, beta1=0.9, beta2=0.999, eps=1e-8):
    """Bias-corrected Adam update; returns ``(theta, m, v)``.

    Uses plain arithmetic only, so it runs unchanged on numpy arrays and
    inside traced jax code.  ``t`` is the 1-based step count.
    """
    m = beta1 * m + (1 - beta1) * grad
    v = beta2 * v + (1 - beta2) * grad * grad
    m_hat = m / (1 - beta1**t)
    v_hat = v / (1 - beta2**t)
    return theta - lr * m_hat / (v_hat**0.5 + eps), m, v


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, size: int) -> "AdamState":
        return cls(np.zeros(size), np.zeros(size), 0)


def adam_step(
    theta, grad, state: AdamState, lr: float = 1e-2, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8
) -> np.ndarray:
    """One Adam step on numpy arrays; advances ``state`` in place and returns the new parameters."""
    state.t += 1
    theta, state.m, state.v = adam_update(
        np.asarray(theta, dtype=float), np.asarray(grad, dtype=float), state.m, state.v, state.t, lr, beta1, beta2, eps
    )
    return theta


# -------------------------------------------------------------- training


def init_params(num_params: int, seed: int) -> np.ndarray:
    """Angles ~ Uniform[0, 2pi) from a Philox stream keyed by ``seed``; readout scale 1, bias 0."""
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    theta = rng.uniform(0.0, 2 * math.pi, num_params)
    theta[-2] = 1.0
    theta[-1] = 0.0
    return theta


@dataclass
class RunRecord:
    seed: int
    losses: np.ndarray
    theta: np.ndarray
    metrics: Metrics
    predictions: np.ndarray = field(repr=False, default=None)


CHUNK_EPOCHS = 250


def _compile_chunk(loss_fn, config: TrainConfig, length: int):
    import jax
    import jax.numpy as jnp

    if config.gradient == "analytic":
        value_and_grad = jax.value_and_grad(loss_fn)
    else:
        h = config.fd_step

        def value_and_grad(theta):
            eye = jnp.eye(theta.size) * h
            up = jax.vmap(loss_fn)(theta + eye)
            dn = jax.vmap(loss_fn)(theta - eye)
            return loss_fn(theta), (up - dn) / (2 * h)

    def run(carry, ts):
        def step(c, t):
            theta, m, v = c
            loss, grad = value_and_grad(theta)
            theta, m, v = adam_update(theta, grad, m, v, t, config.learning_rate, config.beta1, config.beta2, config.eps)
            return (theta, m, v), loss

        return jax.lax.scan(step, carry, ts)

    return jax.jit(jax.vmap(run, in_axes=(0, None)))


def train_seeds(spec, X, y, config: TrainConfig, classification: bool = False) -> list[RunRecord]:
    """Full-batch Adam on the mean squared error, one run per seed in ``config.seeds``.

    All seeds advance together as one vectorised computation.  Training
    stops with :class:`TrainingDivergedError` as soon as a recorded loss is
    NaN or above ``config.divergence_threshold``; the check runs every
    ``CHUNK_EPOCHS`` epochs.
    """
    import jax.numpy as jnp

    from .engine import BatchModel

    batch = BatchModel(spec, X).bind_targets(y)
    thetas = np.stack([init_params(batch.num_params, s) for s in config.seeds])
    carry = (jnp.asarray(thetas), jnp.zeros(thetas.shape), jnp.zeros(thetas.shape))
    compiled = {}
    chunks = []
    done = 0
    while done < config.epochs:
        length = min(CHUNK_EPOCHS, config.epochs - done)
        if length not in compiled:
            compiled[length] = _compile_chunk(batch.loss_fn, config, length)
        ts = jnp.arange(done + 1, done + length + 1, dtype=jnp.float64)
        carry, losses = compiled[length](carry, ts)
        losses = np.asarray(losses)
        bad = ~np.isfinite(losses) | (losses > config.divergence_threshold)
        if bad.any():
            s, e = np.argwhere(bad)[0]
            raise TrainingDivergedError(done + int(e), float(losses[s, e]))
        chunks.append(losses)
        done += length
    losses = np.concatenate(chunks, axis=1)
    final = np.asarray(carry[0])
    records = []
    for k, seed in enumerate(config.seeds):
        preds = batch.predict(final[k])
        metrics = Metrics.evaluate(preds, y, classification)
        log.info("seed %d: final loss %.3e, mse %.3e", seed, losses[k, -1], metrics.mse)
        records.append(RunRecord(int(seed), losses[k], final[k], metrics, preds))
    return records


def train(spec, X, y, config: TrainConfig, seed: int, classification: bool = False) -> RunRecord:
    """Single-seed convenience wrapper around :func:`train_seeds`."""
    from dataclasses import replace

    return train_seeds(spec, X, y, replace(config, seeds=(seed,)), classification)[0]
