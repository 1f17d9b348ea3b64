"""Declarative gate layouts for the data map and the variational block.

Both the superposed layer and the brute-force oracle build their circuits
from here, so the layouts are defined exactly once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError
from .statevector import Gate, StateVector, apply_gate

# (gate, target, controls) triples
Op = tuple[Gate, int, tuple]

_ROTATIONS = ("RX", "RY", "RZ")


@dataclass(frozen=True)
class AnsatzSpec:
    """Hardware-efficient layered ansatz.

    Each layer applies ``rotations`` (in order) to every qubit, then the
    entangler.  ``"ring"`` is a CNOT from qubit ``i`` to ``i+1 mod n``; it is
    skipped for a single qubit.
    """

    num_qubits: int
    depth: int
    rotations: tuple[str, ...] = ("RY", "RZ")
    entangler: str = "ring"

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ConfigurationError(f"ansatz needs at least one qubit, got {self.num_qubits}")
        if self.depth < 1:
            raise ConfigurationError(f"ansatz depth must be >= 1, got {self.depth}")
        if not self.rotations or any(r not in _ROTATIONS for r in self.rotations):
            raise ConfigurationError(f"rotations must be drawn from {_ROTATIONS}, got {self.rotations}")
        if self.entangler not in ("ring", "none"):
            raise ConfigurationError(f"unknown entangler {self.entangler!r}")

    @property
    def rotations_per_qubit(self) -> int:
        return len(self.rotations)

    @property
    def params_per_layer(self) -> int:
        return self.num_qubits * self.rotations_per_qubit

    def params_per_branch(self) -> int:
        return self.depth * self.params_per_layer

    @property
    def layout(self) -> list[tuple[tuple[str, ...], list[tuple[int, int]]]]:
        return [(self.rotations, self.entangler_pairs()) for _ in range(self.depth)]

    def entangler_pairs(self) -> list[tuple[int, int]]:
        if self.entangler == "none" or self.num_qubits == 1:
            return []
        n = self.num_qubits
        return [(i, (i + 1) % n) for i in range(n)]

    def layer_ops(self, theta: Sequence[float], layer: int, qubits: Sequence[int]) -> list[Op]:
        """Gates of one layer; ``theta`` is the full per-branch parameter vector."""
        if len(qubits) != self.num_qubits:
            raise ConfigurationError(f"ansatz acts on {self.num_qubits} qubits, got {len(qubits)}")
        base = layer * self.params_per_layer
        ops: list[Op] = []
        k = base
        for q in qubits:
            for rot in self.rotations:
                ops.append((Gate(rot, float(theta[k])), q, ()))
                k += 1
        for c, t in self.entangler_pairs():
            ops.append((Gate("X"), qubits[t], ((qubits[c], True),)))
        return ops

    def ops(self, theta: Sequence[float], qubits: Sequence[int], layers: Iterable[int] | None = None) -> list[Op]:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.params_per_branch(),):
            raise ConfigurationError(f"expected {self.params_per_branch()} ansatz parameters, got shape {theta.shape}")
        layers = range(self.depth) if layers is None else layers
        out: list[Op] = []
        for layer in layers:
            out.extend(self.layer_ops(theta, layer, qubits))
        return out


@dataclass(frozen=True)
class EncodingSpec:
    """Angle encoding: one ``RY(angle)`` per data qubit, re-uploaded before each ansatz layer.

    Feature ``k`` is mapped linearly from ``[low, high]`` onto
    ``[0, angle_range * pi]``; data qubit ``q`` carries feature
    ``q mod num_features``.
    """

    num_data_qubits: int
    num_features: int = 1
    low: float = 0.0
    high: float = 1.0
    reuploads: int = 1
    angle_range: float = 1.0

    def __post_init__(self):
        if self.num_data_qubits < 1 or self.num_features < 1:
            raise ConfigurationError("encoding needs at least one qubit and one feature")
        if not self.high > self.low:
            raise ConfigurationError(f"encoding domain [{self.low}, {self.high}] is empty")
        if self.reuploads < 1:
            raise ConfigurationError(f"reuploads must be >= 1, got {self.reuploads}")
        if not (self.angle_range > 0 and math.isfinite(self.angle_range)):
            raise ConfigurationError(f"angle_range must be positive, got {self.angle_range}")

    def angles(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.num_features,):
            raise ConfigurationError(f"expected {self.num_features} features, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ConfigurationError(f"non-finite input {x}")
        tol = 1e-9 * (self.high - self.low)
        if np.any(x < self.low - tol) or np.any(x > self.high + tol):
            raise ConfigurationError(f"input {x} outside encoding domain [{self.low}, {self.high}]")
        scaled = self.angle_range * math.pi * (x - self.low) / (self.high - self.low)
        return scaled[np.arange(self.num_data_qubits) % self.num_features]

    def ops(self, x, qubits: Sequence[int]) -> list[Op]:
        if len(qubits) != self.num_data_qubits:
            raise ConfigurationError(f"encoding acts on {self.num_data_qubits} qubits, got {len(qubits)}")
        return [(Gate("RY", float(a)), q, ()) for a, q in zip(self.angles(x), qubits)]


def with_controls(ops: Iterable[Op], controls: Sequence[tuple[int, bool]]) -> list[Op]:
    """Add ``controls`` to every gate in ``ops``."""
    controls = tuple(controls)
    return [(g, t, tuple(c) + controls) for g, t, c in ops]


def run_ops(state: StateVector, ops: Iterable[Op]) -> StateVector:
    for gate, target, controls in ops:
        state = apply_gate(state, gate, target, controls)
    return state
