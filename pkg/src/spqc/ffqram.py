"""Flip-flop QRAM layer: address superposition plus branch-indexed unitaries.

After :func:`prepare_address_superposition` and
:func:`apply_branch_unitaries` the state is

    (1/sqrt(L)) sum_j |j>_a (x) U(theta_j) |data>

Address qubit ``address_qubits[k]`` holds bit ``k`` of the branch index ``j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .circuits import AnsatzSpec, run_ops, with_controls
from .errors import ConfigurationError, QubitIndexError, StateError
from .statevector import H, StateVector, apply_gate, register_probability


@dataclass
class BranchParams:
    """Per-branch angles, shape ``(branch_count, params_per_branch)``."""

    theta: np.ndarray

    def __post_init__(self):
        self.theta = np.array(self.theta, dtype=float)
        if self.theta.ndim != 2:
            raise ConfigurationError(f"branch parameters must be 2-D, got shape {self.theta.shape}")
        L = self.theta.shape[0]
        if L < 1 or L & (L - 1):
            raise ConfigurationError(f"branch count must be a power of two, got {L}")
        if not np.all(np.isfinite(self.theta)):
            raise ConfigurationError("branch parameters contain non-finite values")

    @property
    def branch_count(self) -> int:
        return self.theta.shape[0]


def _check_registers(num_qubits: int, *registers: Sequence[int]) -> None:
    flat = [q for reg in registers for q in reg]
    for q in flat:
        if not 0 <= q < num_qubits:
            raise QubitIndexError(f"qubit {q} out of range for {num_qubits} qubits")
    if len(set(flat)) != len(flat):
        raise QubitIndexError(f"registers overlap or repeat qubits: {registers}")


def prepare_address_superposition(state: StateVector, address_qubits: Sequence[int]) -> StateVector:
    """Hadamard every address qubit; the register must start in ``|0...0>``."""
    _check_registers(state.num_qubits, address_qubits)
    p0 = register_probability(state, address_qubits, [0] * len(address_qubits))
    if abs(p0 - 1.0) > 1e-12:
        raise StateError(f"address register is not in |0...0> (probability {p0!r})")
    for q in address_qubits:
        state = apply_gate(state, H(), q)
    return state


@lru_cache(maxsize=128)
def _block_indices(num_qubits: int, address: tuple[int, ...]) -> tuple[np.ndarray, ...]:
    # blocks[j][v] = full index whose address bits spell j and whose remaining
    # qubits, renumbered in ascending order, spell v.
    idx = np.arange(1 << num_qubits, dtype=np.int64)
    rest = [q for q in range(num_qubits) if q not in address]
    addr_val = np.zeros_like(idx)
    for k, q in enumerate(address):
        addr_val |= ((idx >> q) & 1) << k
    rest_val = np.zeros_like(idx)
    for k, q in enumerate(rest):
        rest_val |= ((idx >> q) & 1) << k
    blocks = []
    for j in range(1 << len(address)):
        sel = idx[addr_val == j]
        blocks.append(sel[np.argsort(rest_val[sel], kind="stable")])
    return tuple(blocks)


def _validate(state, ansatz, params, data_qubits, address_qubits):
    _check_registers(state.num_qubits, data_qubits, address_qubits)
    L = 1 << len(address_qubits)
    if params.branch_count != L:
        raise ConfigurationError(f"{len(address_qubits)} address qubits need {L} branches, got {params.branch_count}")
    if params.theta.shape[1] != ansatz.params_per_branch():
        raise ConfigurationError(
            f"ansatz needs {ansatz.params_per_branch()} parameters per branch, got {params.theta.shape[1]}"
        )
    if len(data_qubits) != ansatz.num_qubits:
        raise ConfigurationError(f"ansatz acts on {ansatz.num_qubits} qubits, got {len(data_qubits)} data qubits")


def apply_branch_unitaries(
    state: StateVector,
    ansatz: AnsatzSpec,
    params: BranchParams,
    data_qubits: Sequence[int],
    address_qubits: Sequence[int],
    layers: Iterable[int] | None = None,
    method: str = "blocks",
) -> StateVector:
    """Apply ``U(theta_j)`` to the data register wherever the address reads ``j``.

    ``method="blocks"`` acts on each address block directly (a contiguous
    slice when the address qubits are the most significant ones).
    ``method="controlled"`` expands every gate into a multi-controlled gate
    with one control pattern per branch; it is slow and kept as a reference.
    ``layers`` restricts the ansatz to a subset of its layers.
    """
    _validate(state, ansatz, params, data_qubits, address_qubits)
    layers = list(range(ansatz.depth) if layers is None else layers)
    if method == "controlled":
        for j, theta in enumerate(params.theta):
            pattern = [(a, bool((j >> k) & 1)) for k, a in enumerate(address_qubits)]
            state = run_ops(state, with_controls(ansatz.ops(theta, data_qubits, layers), pattern))
        return state
    if method != "blocks":
        raise ConfigurationError(f"unknown method {method!r}")

    address = tuple(address_qubits)
    rest = [q for q in range(state.num_qubits) if q not in address]
    renum = {q: i for i, q in enumerate(rest)}
    local_data = [renum[q] for q in data_qubits]
    amps = state.amps.copy()
    for j, sel in enumerate(_block_indices(state.num_qubits, address)):
        block = StateVector(len(rest), amps[sel])
        block = run_ops(block, ansatz.ops(params.theta[j], local_data, layers))
        amps[sel] = block.amps
    return StateVector(state.num_qubits, amps)
