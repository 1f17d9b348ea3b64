"""Dense statevector simulation.

Qubit ``q`` is bit ``q`` of the basis-state index (qubit 0 is the least
significant bit), so ``|q2 q1 q0>`` has index ``4*q2 + 2*q1 + q0``.

Rotations follow ``R_A(t) = exp(-i t A / 2)``.  Controlled gates are applied
by masked updates over basis indices; no ``2^n x 2^n`` matrix is ever built.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, DimensionError, PostSelectionError, QubitIndexError, StateError

MAX_QUBITS = 24
POSTSELECT_FLOOR = 1e-14

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """A single-qubit gate: one of H, X, RX, RY, RZ."""

    name: str
    angle: float | None = None

    def __post_init__(self):
        if self.name not in ("H", "X", "RX", "RY", "RZ"):
            raise ConfigurationError(f"unknown gate {self.name!r}")
        if self.name.startswith("R"):
            if self.angle is None or not math.isfinite(self.angle):
                raise ConfigurationError(f"{self.name} needs a finite angle, got {self.angle!r}")
        elif self.angle is not None:
            raise ConfigurationError(f"{self.name} takes no angle")

    def matrix(self) -> np.ndarray:
        return gate_matrix(self.name, self.angle)


def H() -> Gate:
    return Gate("H")


def X() -> Gate:
    return Gate("X")


def RX(angle: float) -> Gate:
    return Gate("RX", float(angle))


def RY(angle: float) -> Gate:
    return Gate("RY", float(angle))


def RZ(angle: float) -> Gate:
    return Gate("RZ", float(angle))


def gate_matrix(name: str, angle: float | None = None) -> np.ndarray:
    if name == "H":
        return np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex)
    if name == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    if name == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if name == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "RZ":
        return np.array([[complex(c, -s), 0], [0, complex(c, s)]], dtype=complex)
    raise ConfigurationError(f"unknown gate {name!r}")


@dataclass
class StateVector:
    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (1 << self.num_qubits,):
            raise DimensionError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, got shape {self.amps.shape}"
            )

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amps.copy())

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def _check_size(num_qubits: int) -> None:
    if not isinstance(num_qubits, (int, np.integer)) or not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigurationError(f"num_qubits must be an integer in [1, {MAX_QUBITS}], got {num_qubits!r}")


def new_zero_state(num_qubits: int) -> StateVector:
    """Return ``|0...0>`` on ``num_qubits`` qubits."""
    _check_size(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(int(num_qubits), amps)


def from_amplitudes(amps: Sequence[complex], normalize: bool = False) -> StateVector:
    amps = np.asarray(amps, dtype=complex)
    n = int(round(math.log2(len(amps)))) if len(amps) else 0
    if len(amps) != (1 << n):
        raise DimensionError(f"amplitude count {len(amps)} is not a power of two")
    _check_size(n)
    if normalize:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ConfigurationError("cannot normalise the zero vector")
        amps = amps / norm
    elif abs(float(np.vdot(amps, amps).real) - 1.0) > 1e-10:
        raise StateError(f"amplitudes are not normalised (norm^2 = {float(np.vdot(amps, amps).real)!r})")
    return StateVector(n, amps)


def _check_qubit(q: int, num_qubits: int) -> int:
    if not isinstance(q, (int, np.integer)) or not 0 <= q < num_qubits:
        raise QubitIndexError(f"qubit index {q!r} out of range for {num_qubits} qubits")
    return int(q)


def normalize_controls(controls: Iterable, target: int, num_qubits: int) -> tuple[tuple[int, bool], ...]:
    """Validate a control list of ``(qubit, polarity)`` pairs.

    Polarity ``True``/``1``/``"positive"`` conditions on ``|1>``;
    ``False``/``0``/``"negative"`` conditions on ``|0>``.
    """
    out = []
    seen = set()
    for q, pol in controls:
        q = _check_qubit(q, num_qubits)
        if q == target:
            raise QubitIndexError(f"target qubit {target} also listed as control")
        if q in seen:
            raise QubitIndexError(f"control qubit {q} listed twice")
        seen.add(q)
        if isinstance(pol, str):
            if pol not in ("positive", "negative"):
                raise ConfigurationError(f"unknown control polarity {pol!r}")
            pol = pol == "positive"
        out.append((q, bool(pol)))
    return tuple(out)


@lru_cache(maxsize=512)
def _pair_indices(num_qubits: int, target: int, controls: tuple[tuple[int, bool], ...]):
    # Indices with the target bit clear that satisfy every control; partners have it set.
    idx = np.arange(1 << num_qubits, dtype=np.int64)
    mask = ((idx >> target) & 1) == 0
    for q, pol in controls:
        mask &= ((idx >> q) & 1) == int(pol)
    i0 = idx[mask]
    i1 = i0 | (1 << target)
    i0.setflags(write=False)
    i1.setflags(write=False)
    return i0, i1


def apply_matrix(state: StateVector, matrix: np.ndarray, target: int, controls: Iterable = ()) -> StateVector:
    """Apply an arbitrary 2x2 unitary to ``target`` under ``controls``."""
    target = _check_qubit(target, state.num_qubits)
    ctrl = normalize_controls(controls, target, state.num_qubits)
    i0, i1 = _pair_indices(state.num_qubits, target, ctrl)
    amps = state.amps.copy()
    a0 = state.amps[i0]
    a1 = state.amps[i1]
    amps[i0] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    amps[i1] = matrix[1, 0] * a0 + matrix[1, 1] * a1
    return StateVector(state.num_qubits, amps)


def apply_gate(state: StateVector, gate: Gate, target: int, controls: Iterable = ()) -> StateVector:
    """Apply ``gate`` to ``target``, conditioned on ``controls``.

    Amplitudes of basis states that violate the control pattern are copied
    unchanged.  Returns a new state; the input is not modified.
    """
    return apply_matrix(state, gate.matrix(), target, controls)


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    return apply_gate(state, X(), target, [(control, True)])


def _register_mask(num_qubits: int, register: Sequence[int], bitstring: Sequence[int]) -> np.ndarray:
    if len(register) != len(bitstring):
        raise ConfigurationError(f"register has {len(register)} qubits but bitstring has {len(bitstring)} bits")
    qs = [_check_qubit(q, num_qubits) for q in register]
    if len(set(qs)) != len(qs):
        raise QubitIndexError(f"register qubits must be distinct, got {list(register)}")
    idx = np.arange(1 << num_qubits, dtype=np.int64)
    mask = np.ones(idx.shape, dtype=bool)
    for q, b in zip(qs, bitstring):
        if b not in (0, 1):
            raise ConfigurationError(f"bitstring entries must be 0 or 1, got {b!r}")
        mask &= ((idx >> q) & 1) == b
    return mask


def register_probability(state: StateVector, register: Sequence[int], bitstring: Sequence[int]) -> float:
    """Probability that measuring ``register`` yields ``bitstring``."""
    mask = _register_mask(state.num_qubits, register, bitstring)
    return float(np.sum(np.abs(state.amps[mask]) ** 2))


def project_postselect(
    state: StateVector, register: Sequence[int], bitstring: Sequence[int]
) -> tuple[float, StateVector]:
    """Project ``register`` onto ``bitstring`` and renormalise.

    Returns ``(success_prob, projected_state)``.  Raises
    :class:`PostSelectionError` when the success probability is below 1e-14.
    """
    mask = _register_mask(state.num_qubits, register, bitstring)
    amps = np.where(mask, state.amps, 0.0)
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob < POSTSELECT_FLOOR:
        raise PostSelectionError(prob)
    return prob, StateVector(state.num_qubits, amps / math.sqrt(prob))


def expectation_z(state: StateVector, qubit: int) -> float:
    """<Z> on ``qubit``: +1 weight for bit 0, -1 for bit 1."""
    qubit = _check_qubit(qubit, state.num_qubits)
    idx = np.arange(1 << state.num_qubits, dtype=np.int64)
    sign = 1.0 - 2.0 * ((idx >> qubit) & 1)
    return float(np.dot(sign, np.abs(state.amps) ** 2))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise DimensionError(f"inner product of {a.num_qubits}- and {b.num_qubits}-qubit states")
    return complex(np.vdot(a.amps, b.amps))


def marginal_probabilities(state: StateVector, register: Sequence[int]) -> np.ndarray:
    """Distribution over the values of ``register``; ``register[k]`` is bit ``k`` of the value."""
    qs = [_check_qubit(q, state.num_qubits) for q in register]
    idx = np.arange(1 << state.num_qubits, dtype=np.int64)
    value = np.zeros_like(idx)
    for k, q in enumerate(qs):
        value |= ((idx >> q) & 1) << k
    return np.bincount(value, weights=np.abs(state.amps) ** 2, minlength=1 << len(qs))
