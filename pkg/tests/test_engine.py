"""The batched training engine must reproduce the gate-by-gate reference."""
import numpy as np
import pytest

from spqc.engine import BatchModel
from spqc.errors import ConfigurationError
from spqc.model import PqcModelSpec, ReadoutSpec, SpqcModelSpec, forward, pqc_forward
from spqc.training import gradient_fd

SPQC_CASES = [
    SpqcModelSpec(1, 1, 1),
    SpqcModelSpec(2, 2, 2),
    SpqcModelSpec(1, 3, 2, 2),
    SpqcModelSpec(2, 1, 1, 2, readout=ReadoutSpec(0)),
    SpqcModelSpec(2, 2, 1, 3, readout=ReadoutSpec(2)),
    SpqcModelSpec(2, 3, 2, 2, num_features=2, input_low=-1, input_high=1),
    SpqcModelSpec(1, 2, 3, angle_range=4.0, rotations=("RX", "RY", "RZ")),
]


@pytest.mark.parametrize("spec", SPQC_CASES, ids=lambda s: f"n{s.n}m{s.m}d{s.depth}r{s.r}f{s.num_features}")
def test_spqc_predictions_match_reference(spec):
    rng = np.random.default_rng(spec.num_params)
    theta = rng.uniform(0, 2 * np.pi, spec.num_params)
    theta[-2:] = rng.normal(size=2)
    X = rng.uniform(spec.input_low, spec.input_high, (6, spec.num_features))
    batch = BatchModel(spec, X).predict(theta)
    ref = [forward(spec, theta, x)[0] for x in X]
    assert np.max(np.abs(batch - ref)) < 1e-12


@pytest.mark.parametrize("spec", [PqcModelSpec(1, 3), PqcModelSpec(2, 4), PqcModelSpec(3, 2, angle_range=2.0)])
def test_pqc_predictions_match_reference(spec):
    rng = np.random.default_rng(1)
    theta = rng.uniform(0, 2 * np.pi, spec.num_params)
    X = rng.uniform(0, 1, 5)
    batch = BatchModel(spec, X).predict(theta)
    assert np.allclose(batch, [pqc_forward(spec, theta, x) for x in X], atol=1e-12)


def test_autodiff_gradient_matches_finite_differences():
    spec = SpqcModelSpec(2, 2, 1, 2)
    X = np.linspace(0, 1, 9)
    y = np.sign(np.sin(5 * X))
    model = BatchModel(spec, X).bind_targets(y)
    theta = np.random.default_rng(5).uniform(0, 2 * np.pi, spec.num_params)
    value, grad = model.loss_and_grad(theta)
    assert value == pytest.approx(model.loss(theta))
    assert np.allclose(grad, gradient_fd(model.loss, theta, 1e-5), atol=1e-8)


def test_predict_inputs_validates_domain():
    spec = SpqcModelSpec(1, 1, 1)
    model = BatchModel(spec, [0.1, 0.2])
    with pytest.raises(ConfigurationError):
        model.predict_inputs(np.zeros(spec.num_params), [1.5])
