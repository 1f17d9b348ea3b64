"""Reference statevector forward pass of the superposed model.

Register layout for ``r`` replicas of an ``n``-qubit data register and an
``m``-qubit address register (``r*n + m`` qubits in total)::

    qubits [k*n, (k+1)*n)       data replica k
    qubits [r*n, r*n + m)       address, address qubit 0 first

The address qubits are the most significant bits, so the block of branch
``j`` is the contiguous slice ``[j * 2**(r*n), (j+1) * 2**(r*n))``.

Parameter vector layout::

    [ branch 0 | branch 1 | ... | branch L-1 | readout mixing | scale, bias ]

Each branch block holds ``ansatz.params_per_branch()`` angles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import AnsatzSpec, EncodingSpec, run_ops
from .errors import ConfigurationError, ForwardError, PostSelectionError
from .ffqram import BranchParams, apply_branch_unitaries, prepare_address_superposition
from .statevector import (
    MAX_QUBITS,
    POSTSELECT_FLOOR,
    StateVector,
    expectation_z,
    inner_product,
    new_zero_state,
    project_postselect,
)


@dataclass(frozen=True)
class ReadoutSpec:
    """Trainable mixing ansatz on the address register, then ``scale * <Z_0> + bias``."""

    mixing_depth: int = 1
    rotations: tuple[str, ...] = ("RY", "RZ")

    def __post_init__(self):
        if self.mixing_depth < 0:
            raise ConfigurationError(f"mixing_depth must be >= 0, got {self.mixing_depth}")

    def mixing_ansatz(self, num_qubits: int) -> AnsatzSpec | None:
        if self.mixing_depth == 0:
            return None
        return AnsatzSpec(num_qubits, self.mixing_depth, self.rotations)

    def num_params(self, num_qubits: int) -> int:
        mix = self.mixing_ansatz(num_qubits)
        return (mix.params_per_branch() if mix else 0) + 2


@dataclass(frozen=True)
class SpqcModelSpec:
    n: int
    m: int
    depth: int
    activation_degree: int = 1
    num_features: int = 1
    input_low: float = 0.0
    input_high: float = 1.0
    readout: ReadoutSpec = field(default_factory=ReadoutSpec)
    rotations: tuple[str, ...] = ("RY", "RZ")
    angle_range: float = 1.0

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise ConfigurationError(f"need n >= 1 and m >= 0, got n={self.n}, m={self.m}")
        if self.activation_degree < 1:
            raise ConfigurationError(f"activation degree must be >= 1, got {self.activation_degree}")
        if self.total_qubits > MAX_QUBITS:
            raise ConfigurationError(f"model needs {self.total_qubits} qubits, cap is {MAX_QUBITS}")
        if self.m == 0 and self.readout.mixing_depth:
            raise ConfigurationError("readout mixing needs at least one address qubit")

    @property
    def L(self) -> int:
        return 1 << self.m

    @property
    def r(self) -> int:
        return self.activation_degree

    @property
    def total_qubits(self) -> int:
        return self.r * self.n + self.m

    @property
    def ansatz(self) -> AnsatzSpec:
        return AnsatzSpec(self.n, self.depth, self.rotations)

    @property
    def encoding(self) -> EncodingSpec:
        return EncodingSpec(
            self.n, self.num_features, self.input_low, self.input_high, reuploads=self.depth, angle_range=self.angle_range
        )

    @property
    def params_per_branch(self) -> int:
        return self.ansatz.params_per_branch()

    @property
    def num_branch_params(self) -> int:
        return self.L * self.params_per_branch

    @property
    def num_mixing_params(self) -> int:
        return self.readout.num_params(self.m) - 2 if self.m else 0

    @property
    def num_params(self) -> int:
        return self.num_branch_params + self.num_mixing_params + 2

    def data_qubits(self, replica: int) -> list[int]:
        return list(range(replica * self.n, (replica + 1) * self.n))

    @property
    def address_qubits(self) -> list[int]:
        return list(range(self.r * self.n, self.r * self.n + self.m))

    def split(self, theta):
        """Return ``(branch_theta[L, P], mixing_theta, scale, bias)``."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.num_params,):
            raise ConfigurationError(f"expected {self.num_params} parameters, got shape {theta.shape}")
        nb, nm = self.num_branch_params, self.num_mixing_params
        return (
            theta[:nb].reshape(self.L, self.params_per_branch),
            theta[nb : nb + nm],
            float(theta[-2]),
            float(theta[-1]),
        )


@dataclass
class BranchAmplitudes:
    """Per-branch outputs ``p_j`` and post-selection bookkeeping.

    ``address_amplitudes`` is the address register right after
    post-selection (before readout mixing); it equals
    ``2**(-m/2) * p**r / normalizer``.
    """

    p: np.ndarray
    success_prob: float
    normalizer: float
    address_amplitudes: np.ndarray
    expectation: float


def branch_amplitude(spec: SpqcModelSpec, theta_j, x) -> complex:
    """``<0| U(theta_j) S(x) |0>`` on a lone data register."""
    qubits = list(range(spec.n))
    state = new_zero_state(spec.n)
    enc, ans = spec.encoding, spec.ansatz
    for layer in range(spec.depth):
        state = run_ops(state, enc.ops(x, qubits))
        state = run_ops(state, ans.ops(theta_j, qubits, [layer]))
    return inner_product(new_zero_state(spec.n), state)


def _mix_and_measure(spec: SpqcModelSpec, state: StateVector, mixing_theta) -> float:
    mix = spec.readout.mixing_ansatz(spec.m)
    if mix is not None:
        state = run_ops(state, mix.ops(mixing_theta, spec.address_qubits))
    return expectation_z(state, spec.address_qubits[0])


def superposed_state(spec: SpqcModelSpec, theta, x, method: str = "blocks") -> StateVector:
    """Full register after encoding and the branch-indexed layer, before any measurement."""
    branch_theta, _, _, _ = spec.split(theta)
    params = BranchParams(branch_theta)
    state = new_zero_state(spec.total_qubits)
    if spec.m:
        state = prepare_address_superposition(state, spec.address_qubits)
    enc, ans = spec.encoding, spec.ansatz
    for layer in range(spec.depth):
        for k in range(spec.r):
            state = run_ops(state, enc.ops(x, spec.data_qubits(k)))
        for k in range(spec.r):
            state = apply_branch_unitaries(
                state, ans, params, spec.data_qubits(k), spec.address_qubits, layers=[layer], method=method
            )
    return state


def forward(spec: SpqcModelSpec, theta, x, method: str = "blocks") -> tuple[float, BranchAmplitudes]:
    """Prediction ``scale * <Z_0> + bias`` and branch diagnostics for input ``x``.

    Every data replica is post-selected on all zeros; the surviving address
    amplitudes are proportional to ``p_j**r``.
    """
    if spec.m == 0:
        raise ConfigurationError("forward needs at least one address qubit; use pqc_forward for a single branch")
    branch_theta, mixing_theta, scale, bias = spec.split(theta)
    state = superposed_state(spec, theta, x, method)
    data = [q for k in range(spec.r) for q in spec.data_qubits(k)]
    try:
        prob, projected = project_postselect(state, data, [0] * len(data))
    except PostSelectionError as exc:
        raise ForwardError(exc.probability, np.atleast_1d(x)) from None
    address_amps = projected.amps[:: 1 << (spec.r * spec.n)].copy()
    z = _mix_and_measure(spec, projected, mixing_theta)
    p = np.array([branch_amplitude(spec, t, x) for t in branch_theta])
    diag = BranchAmplitudes(
        p=p,
        success_prob=prob,
        normalizer=math.sqrt(prob),
        address_amplitudes=address_amps,
        expectation=z,
    )
    return scale * z + bias, diag


@dataclass(frozen=True)
class PqcModelSpec:
    """Single-branch baseline: same encoding and ansatz family, ``<Z_0>`` on data qubit 0."""

    n: int
    depth: int
    num_features: int = 1
    input_low: float = 0.0
    input_high: float = 1.0
    rotations: tuple[str, ...] = ("RY", "RZ")
    angle_range: float = 1.0

    def __post_init__(self):
        if self.n < 1 or self.depth < 1:
            raise ConfigurationError(f"need n >= 1 and depth >= 1, got n={self.n}, depth={self.depth}")

    @property
    def ansatz(self) -> AnsatzSpec:
        return AnsatzSpec(self.n, self.depth, self.rotations)

    @property
    def encoding(self) -> EncodingSpec:
        return EncodingSpec(
            self.n, self.num_features, self.input_low, self.input_high, reuploads=self.depth, angle_range=self.angle_range
        )

    @property
    def num_params(self) -> int:
        return self.ansatz.params_per_branch() + 2

    def split(self, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.num_params,):
            raise ConfigurationError(f"expected {self.num_params} parameters, got shape {theta.shape}")
        return theta[:-2], float(theta[-2]), float(theta[-1])


def depth_matched(spec: SpqcModelSpec, depth_multiplier: int | None = None) -> PqcModelSpec:
    """Baseline whose ansatz parameter count equals the SPQC's ``L * params_per_branch``."""
    mult = spec.L if depth_multiplier is None else depth_multiplier
    return PqcModelSpec(
        spec.n, spec.depth * mult, spec.num_features, spec.input_low, spec.input_high, spec.rotations, spec.angle_range
    )


def pqc_forward(spec: PqcModelSpec, theta, x) -> float:
    ansatz_theta, scale, bias = spec.split(theta)
    qubits = list(range(spec.n))
    state = new_zero_state(spec.n)
    for layer in range(spec.depth):
        state = run_ops(state, spec.encoding.ops(x, qubits))
        state = run_ops(state, spec.ansatz.ops(ansatz_theta, qubits, [layer]))
    return scale * expectation_z(state, 0) + bias


def depth_matched_pqc_forward(n: int, depth_multiplier: int, theta, x, **spec_kwargs) -> float:
    """Forward pass of a PQC whose depth is ``depth_multiplier`` times a base depth.

    The base depth is recovered from ``len(theta)``; the count must split
    into ``depth_multiplier`` whole base-depth blocks plus ``(scale, bias)``.
    """
    theta = np.asarray(theta, dtype=float)
    rotations = spec_kwargs.get("rotations", ("RY", "RZ"))
    per_layer = n * len(rotations)
    n_ansatz = theta.size - 2
    if depth_multiplier < 1 or n_ansatz <= 0 or n_ansatz % (per_layer * depth_multiplier):
        raise ConfigurationError(
            f"{theta.size} parameters do not form {depth_multiplier} x (base depth x {per_layer}) ansatz angles + 2"
        )
    depth = n_ansatz // per_layer
    return pqc_forward(PqcModelSpec(n, depth, **spec_kwargs), theta, x)
