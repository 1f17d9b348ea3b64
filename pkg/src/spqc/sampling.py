"""Shot-level simulation of post-selection.

Readout mixing acts only on the address register, so it commutes with the
measurement of the data registers; the whole register is therefore
measured once, after mixing, and shots in which any data qubit reads 1 are
discarded.  Shot ``i`` uses the ``i``-th uniform of a Philox stream keyed
by the seed, so a report is a pure function of its arguments.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .circuits import run_ops
from .errors import ConfigurationError, EstimationError
from .model import SpqcModelSpec, forward, superposed_state


@dataclass
class ShotReport:
    shots_total: int
    shots_retained: int
    retention_rate: float
    estimated_expectation: float
    expectation_stderr: float
    estimated_prediction: float
    prediction_stderr: float
    exact_success_prob: float
    approx_success_prob: float
    exact_expectation: float
    exact_prediction: float

    def to_text(self) -> str:
        return "\n".join(f"{k} = {v:.17g}" if isinstance(v, float) else f"{k} = {v}" for k, v in asdict(self).items())


def sample_outcomes(probs: np.ndarray, shots: int, rng_seed: int) -> np.ndarray:
    """Basis-state indices drawn from ``probs`` by inverse-CDF lookup."""
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    u = np.random.Generator(np.random.Philox(key=int(rng_seed))).random(shots)
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(probs) - 1)


def sample_forward(spec: SpqcModelSpec, theta, x, shots: int, rng_seed: int) -> ShotReport:
    if shots < 1:
        raise ConfigurationError(f"shots must be >= 1, got {shots}")
    _, mixing_theta, scale, bias = spec.split(theta)
    exact_pred, diag = forward(spec, theta, x)

    state = superposed_state(spec, theta, x)
    mix = spec.readout.mixing_ansatz(spec.m)
    if mix is not None:
        state = run_ops(state, mix.ops(mixing_theta, spec.address_qubits))
    outcomes = sample_outcomes(state.probabilities(), shots, rng_seed)

    data_mask = (1 << (spec.r * spec.n)) - 1
    kept = outcomes[(outcomes & data_mask) == 0]
    retained = int(kept.size)
    if retained == 0:
        raise EstimationError(f"none of {shots} shots survived post-selection")
    z = 1.0 - 2.0 * ((kept >> spec.address_qubits[0]) & 1)
    mean = float(z.mean())
    stderr = math.sqrt(float(z.var()) / retained)

    single_copy = float(np.mean(np.abs(diag.p) ** 2))
    return ShotReport(
        shots_total=int(shots),
        shots_retained=retained,
        retention_rate=retained / shots,
        estimated_expectation=mean,
        expectation_stderr=stderr,
        estimated_prediction=scale * mean + bias,
        prediction_stderr=abs(scale) * stderr,
        exact_success_prob=diag.success_prob,
        approx_success_prob=single_copy**spec.r,
        exact_expectation=diag.expectation,
        exact_prediction=exact_pred,
    )
