import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spqc.circuits import AnsatzSpec, EncodingSpec, run_ops
from spqc.errors import ConfigurationError, QubitIndexError, StateError
from spqc.ffqram import BranchParams, apply_branch_unitaries, prepare_address_superposition
from spqc.statevector import X, apply_gate, new_zero_state


def branch_unitary(ansatz, theta):
    """Dense matrix of one branch's ansatz, column by column."""
    n = ansatz.num_qubits
    cols = []
    for k in range(1 << n):
        s = new_zero_state(n)
        for q in range(n):
            if (k >> q) & 1:
                s = apply_gate(s, X(), q)
        cols.append(run_ops(s, ansatz.ops(theta, list(range(n)))).amps)
    return np.array(cols).T


# ---------------------------------------------------------------- circuits


def test_ansatz_parameter_counts():
    a = AnsatzSpec(3, 4)
    assert a.params_per_layer == 6
    assert a.params_per_branch() == 24
    assert len(a.layout) == 4


def test_ring_entangler():
    assert AnsatzSpec(1, 1).entangler_pairs() == []
    assert AnsatzSpec(2, 1).entangler_pairs() == [(0, 1), (1, 0)]
    assert AnsatzSpec(3, 1).entangler_pairs() == [(0, 1), (1, 2), (2, 0)]
    assert AnsatzSpec(3, 1, entangler="none").entangler_pairs() == []


def test_layer_gate_order():
    ops = AnsatzSpec(2, 1).ops([0.1, 0.2, 0.3, 0.4], [5, 7])
    names = [(g.name, g.angle, t, c) for g, t, c in ops]
    assert names == [
        ("RY", 0.1, 5, ()),
        ("RZ", 0.2, 5, ()),
        ("RY", 0.3, 7, ()),
        ("RZ", 0.4, 7, ()),
        ("X", None, 7, ((5, True),)),
        ("X", None, 5, ((7, True),)),
    ]


@pytest.mark.parametrize(
    "kwargs", [dict(num_qubits=0, depth=1), dict(num_qubits=1, depth=0), dict(num_qubits=1, depth=1, rotations=("RW",))]
)
def test_ansatz_validation(kwargs):
    with pytest.raises(ConfigurationError):
        AnsatzSpec(**kwargs)


def test_ansatz_rejects_wrong_parameter_count():
    with pytest.raises(ConfigurationError):
        AnsatzSpec(2, 1).ops([0.0] * 3, [0, 1])


def test_encoding_angles():
    enc = EncodingSpec(3, num_features=2, low=-1, high=1)
    assert np.allclose(enc.angles([-1.0, 1.0]), [0.0, math.pi, 0.0])
    assert np.allclose(EncodingSpec(1, angle_range=4.0).angles(0.5), [2 * math.pi])


@pytest.mark.parametrize("x", [1.5, -0.1, float("nan")])
def test_encoding_rejects_out_of_domain(x):
    with pytest.raises(ConfigurationError):
        EncodingSpec(1).angles(x)


def test_encoding_tolerates_rounding_at_the_edge():
    assert EncodingSpec(1).angles(1.0 + 1e-12)[0] == pytest.approx(math.pi)


# ------------------------------------------------------------------ ffqram


def test_branch_params_validation():
    with pytest.raises(ConfigurationError):
        BranchParams(np.zeros((3, 2)))
    with pytest.raises(ConfigurationError):
        BranchParams(np.zeros(4))
    with pytest.raises(ConfigurationError):
        BranchParams(np.full((2, 2), np.nan))
    assert BranchParams(np.zeros((4, 2))).branch_count == 4


def test_address_superposition_is_uniform():
    s = prepare_address_superposition(new_zero_state(4), [2, 3])
    probs = s.probabilities()
    assert np.allclose(probs[[0, 4, 8, 12]], 0.25)
    assert probs.sum() == pytest.approx(1.0)


def test_address_superposition_requires_zero_register():
    s = apply_gate(new_zero_state(3), X(), 2)
    with pytest.raises(StateError):
        prepare_address_superposition(s, [2])


def test_overlapping_registers_rejected():
    ans = AnsatzSpec(1, 1)
    s = prepare_address_superposition(new_zero_state(2), [1])
    with pytest.raises(QubitIndexError):
        apply_branch_unitaries(s, ans, BranchParams(np.zeros((2, 2))), [1], [1])


def test_branch_count_must_match_address_width():
    ans = AnsatzSpec(1, 1)
    s = prepare_address_superposition(new_zero_state(3), [1, 2])
    with pytest.raises(ConfigurationError):
        apply_branch_unitaries(s, ans, BranchParams(np.zeros((2, 2))), [0], [1, 2])


def test_each_block_carries_its_own_unitary():
    rng = np.random.default_rng(4)
    ans = AnsatzSpec(2, 2)
    params = BranchParams(rng.uniform(0, 2 * np.pi, (4, ans.params_per_branch())))
    s = prepare_address_superposition(new_zero_state(4), [2, 3])
    out = apply_branch_unitaries(s, ans, params, [0, 1], [2, 3])
    for j in range(4):
        block = out.amps[4 * j : 4 * (j + 1)]
        expect = branch_unitary(ans, params.theta[j])[:, 0] / 2
        assert np.allclose(block, expect, atol=1e-14)


def test_address_bit_order_with_scattered_registers():
    # address qubit list [3, 0]: bit 0 of j lives on qubit 3, bit 1 on qubit 0
    rng = np.random.default_rng(8)
    ans = AnsatzSpec(1, 1)
    params = BranchParams(rng.uniform(0, 2 * np.pi, (4, 2)))
    s = prepare_address_superposition(new_zero_state(4), [3, 0])
    out = apply_branch_unitaries(s, ans, params, [2], [3, 0])
    for j in range(4):
        base = (((j >> 0) & 1) << 3) | (((j >> 1) & 1) << 0)
        u = branch_unitary(ans, params.theta[j])
        assert out.amps[base] == pytest.approx(u[0, 0] / 2, abs=1e-14)
        assert out.amps[base | (1 << 2)] == pytest.approx(u[1, 0] / 2, abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 2), m=st.integers(1, 3), depth=st.integers(1, 2))
def test_block_and_controlled_constructions_agree(seed, n, m, depth):
    rng = np.random.default_rng(seed)
    ans = AnsatzSpec(n, depth)
    params = BranchParams(rng.uniform(0, 2 * np.pi, (1 << m, ans.params_per_branch())))
    s = new_zero_state(n + m)
    for q in range(n):
        s = apply_gate(s, X(), q) if rng.integers(2) else s
    addr = list(range(n, n + m))
    s = prepare_address_superposition(s, addr)
    a = apply_branch_unitaries(s, ans, params, list(range(n)), addr, method="blocks")
    b = apply_branch_unitaries(s, ans, params, list(range(n)), addr, method="controlled")
    assert np.max(np.abs(a.amps - b.amps)) < 1e-12
    assert abs(a.norm_sq() - 1.0) < 1e-12


def test_layer_subsets_compose():
    rng = np.random.default_rng(9)
    ans = AnsatzSpec(2, 3)
    params = BranchParams(rng.uniform(0, 2 * np.pi, (2, ans.params_per_branch())))
    s = prepare_address_superposition(new_zero_state(3), [2])
    full = apply_branch_unitaries(s, ans, params, [0, 1], [2])
    step = s
    for layer in range(3):
        step = apply_branch_unitaries(step, ans, params, [0, 1], [2], layers=[layer])
    assert np.allclose(full.amps, step.amps, atol=1e-14)


def test_unknown_method_rejected():
    s = prepare_address_superposition(new_zero_state(2), [1])
    with pytest.raises(ConfigurationError):
        apply_branch_unitaries(s, AnsatzSpec(1, 1), BranchParams(np.zeros((2, 2))), [0], [1], method="magic")
