"""Batched, differentiable evaluation of the models for training.

The reference forward pass in :mod:`spqc.model` simulates the full register
one input at a time.  Here the same circuit is evaluated block by block:
every address block of the superposed state evolves independently, so the
data register of branch ``j`` is simulated directly (batched over inputs and
branches) and the all-zeros projection of the ``r`` identical replicas in
block ``j`` is ``<0|psi_j>**r``.  Readout mixing then acts on the
normalised address vector.  Agreement with the reference pass is checked in
the test suite.
"""
from __future__ import annotations

import numpy as np
import jax
import jax.numpy as jnp

from .model import PqcModelSpec, SpqcModelSpec

jax.config.update("jax_enable_x64", True)


def _rot(name, t):
    c, s = jnp.cos(t / 2), jnp.sin(t / 2)
    if name == "RY":
        rows = [[c, -s], [s, c]]
        return jnp.stack([jnp.stack(r, -1) for r in rows], -2).astype(jnp.complex128)
    if name == "RX":
        rows = [[c + 0j, -1j * s], [-1j * s, c + 0j]]
        return jnp.stack([jnp.stack(r, -1) for r in rows], -2)
    if name == "RZ":
        e = c - 1j * s
        z = jnp.zeros_like(e)
        return jnp.stack([jnp.stack([e, z], -1), jnp.stack([z, jnp.conj(e)], -1)], -2)
    raise ValueError(name)


def _apply_1q(psi, u, q, nq):
    # psi: (..., 2**nq); u: (..., 2, 2) with the same leading dims as psi
    shape = psi.shape
    a = psi.reshape(shape[:-1] + (1 << (nq - 1 - q), 2, 1 << q))
    a0, a1 = a[..., 0, :], a[..., 1, :]
    u = u[..., None, None, :, :]
    b0 = u[..., 0, 0] * a0 + u[..., 0, 1] * a1
    b1 = u[..., 1, 0] * a0 + u[..., 1, 1] * a1
    return jnp.stack([b0, b1], -2).reshape(shape)


def _cnot_perm(control, target, nq):
    idx = np.arange(1 << nq)
    return np.where((idx >> control) & 1, idx ^ (1 << target), idx)


def _ansatz_layer(psi, angles, ansatz, nq, lead):
    # angles: (..., nq, rotations) broadcastable to the leading dims `lead`
    for q in range(nq):
        for k, rot in enumerate(ansatz.rotations):
            u = jnp.broadcast_to(_rot(rot, angles[..., q, k]), lead + (2, 2))
            psi = _apply_1q(psi, u, q, nq)
    for c, t in ansatz.entangler_pairs():
        psi = psi[..., _cnot_perm(c, t, nq)]
    return psi


def _encode(psi, angles, nq, lead):
    # angles: (B, nq); lead starts with B
    for q in range(nq):
        u = _rot("RY", angles[:, q])
        u = u.reshape((u.shape[0],) + (1,) * (len(lead) - 1) + (2, 2))
        psi = _apply_1q(psi, jnp.broadcast_to(u, lead + (2, 2)), q, nq)
    return psi


def encode_inputs(encoding, X) -> np.ndarray:
    """Encoding angles for a batch of inputs, shape ``(B, num_data_qubits)``."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return np.stack([encoding.angles(x) for x in X])


def spqc_amplitudes(spec: SpqcModelSpec, theta, angles):
    """Branch amplitudes ``p`` with shape ``(B, L)``."""
    n, L = spec.n, spec.L
    ans = spec.ansatz
    branch = theta[: spec.num_branch_params].reshape(L, spec.depth, n, ans.rotations_per_qubit)
    B = angles.shape[0]
    lead = (B, L)
    psi = jnp.zeros((B, L, 1 << n), jnp.complex128).at[..., 0].set(1.0)
    for layer in range(spec.depth):
        psi = _encode(psi, angles, n, lead)
        psi = _ansatz_layer(psi, branch[None, :, layer], ans, n, lead)
    return psi[..., 0]


def spqc_expectation(spec: SpqcModelSpec, theta, angles):
    """``<Z_0>`` on the address register after post-selection and mixing, shape ``(B,)``."""
    p = spqc_amplitudes(spec, theta, angles) ** spec.r
    v = p / jnp.linalg.norm(p, axis=-1, keepdims=True)
    mix = spec.readout.mixing_ansatz(spec.m)
    if mix is not None:
        nb = spec.num_branch_params
        mt = theta[nb : nb + spec.num_mixing_params].reshape(mix.depth, spec.m, mix.rotations_per_qubit)
        lead = v.shape[:-1]
        for layer in range(mix.depth):
            v = _ansatz_layer(v, mt[layer], mix, spec.m, lead)
    sign = 1.0 - 2.0 * (np.arange(spec.L) & 1)
    return jnp.abs(v) ** 2 @ sign


def spqc_success_probability(spec: SpqcModelSpec, theta, angles):
    p = spqc_amplitudes(spec, theta, angles)
    return jnp.mean(jnp.abs(p) ** (2 * spec.r), axis=-1)


def pqc_expectation(spec: PqcModelSpec, theta, angles):
    n, ans = spec.n, spec.ansatz
    th = theta[:-2].reshape(spec.depth, n, ans.rotations_per_qubit)
    B = angles.shape[0]
    psi = jnp.zeros((B, 1 << n), jnp.complex128).at[..., 0].set(1.0)
    for layer in range(spec.depth):
        psi = _encode(psi, angles, n, (B,))
        psi = _ansatz_layer(psi, th[layer], ans, n, (B,))
    sign = 1.0 - 2.0 * (np.arange(1 << n) & 1)
    return jnp.abs(psi) ** 2 @ sign


def expectation_fn(spec):
    if isinstance(spec, SpqcModelSpec):
        return lambda theta, angles: spqc_expectation(spec, theta, angles)
    if isinstance(spec, PqcModelSpec):
        return lambda theta, angles: pqc_expectation(spec, theta, angles)
    raise TypeError(f"unsupported model spec {type(spec).__name__}")


def predict_fn(spec):
    """``f(theta, angles) -> scale * <Z> + bias`` for a batch, jax-traceable."""
    expect = expectation_fn(spec)

    def predict(theta, angles):
        return theta[-2] * expect(theta, angles) + theta[-1]

    return predict


class BatchModel:
    """Jitted prediction, loss and gradient for one model spec over a fixed input batch."""

    def __init__(self, spec, X):
        self.spec = spec
        self.angles = jnp.asarray(encode_inputs(spec.encoding, X))
        self._predict = jax.jit(predict_fn(spec))
        self._loss_grad = None
        self._loss = None
        self.loss_fn = None

    @property
    def num_params(self) -> int:
        return self.spec.num_params

    def predict(self, theta, angles=None) -> np.ndarray:
        angles = self.angles if angles is None else angles
        return np.asarray(self._predict(jnp.asarray(theta, dtype=jnp.float64), angles))

    def predict_inputs(self, theta, X) -> np.ndarray:
        return self.predict(theta, jnp.asarray(encode_inputs(self.spec.encoding, X)))

    def bind_targets(self, y):
        y = jnp.asarray(np.asarray(y, dtype=float))
        predict = predict_fn(self.spec)
        angles = self.angles

        def loss(theta):
            return jnp.mean((predict(theta, angles) - y) ** 2)

        self.loss_fn = loss
        self._loss = jax.jit(loss)
        self._loss_grad = jax.jit(jax.value_and_grad(loss))
        return self

    def loss(self, theta) -> float:
        return float(self._loss(jnp.asarray(theta, dtype=jnp.float64)))

    def loss_and_grad(self, theta) -> tuple[float, np.ndarray]:
        value, grad = self._loss_grad(jnp.asarray(theta, dtype=jnp.float64))
        return float(value), np.asarray(grad)
