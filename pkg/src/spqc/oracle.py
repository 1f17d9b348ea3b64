"""Brute-force reference for the superposed model.

Every branch is run as its own standalone data-register circuit, one after
another, and the post-selected address state is assembled from the
resulting amplitudes.  Nothing here touches the address-controlled layer.
"""
from __future__ import annotations

import numpy as np

from .circuits import run_ops
from .errors import ConfigurationError
from .statevector import new_zero_state


def _single_branch_amplitude(spec, theta_j, x) -> complex:
    qubits = list(range(spec.n))
    state = new_zero_state(spec.n)
    for layer in range(spec.depth):
        state = run_ops(state, spec.encoding.ops(x, qubits))
        state = run_ops(state, spec.ansatz.ops(theta_j, qubits, [layer]))
    return complex(state.amps[0])


def oracle_branch_vector(spec, theta, x) -> np.ndarray:
    """``p_j`` for every branch, from ``L`` independent runs."""
    branch_theta, _, _, _ = spec.split(theta)
    return np.array([_single_branch_amplitude(spec, t, x) for t in branch_theta])


def oracle_postselected_state(p, r: int) -> np.ndarray:
    """``p**r`` scaled to unit norm."""
    v = np.asarray(p, dtype=complex) ** int(r)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ConfigurationError("branch vector is zero; no post-selected state exists")
    return v / norm


def oracle_success_probability(p, r: int) -> float:
    """Joint all-zeros probability ``(1/L) sum_j |p_j|**(2r)``."""
    p = np.asarray(p, dtype=complex)
    return float(np.mean(np.abs(p) ** (2 * int(r))))
