"""Self-checks run by ``spqc verify``.

Each check returns ``(passed, detail)``; :func:`run_all` collects them.
"""
from __future__ import annotations

import time
from typing import Callable

import numpy as np

from .ffqram import BranchParams, apply_branch_unitaries, prepare_address_superposition
from .circuits import AnsatzSpec
from .model import ReadoutSpec, SpqcModelSpec, depth_matched, forward
from .oracle import oracle_branch_vector, oracle_postselected_state
from .statevector import Gate, apply_gate, from_amplitudes, new_zero_state, project_postselect
from .training import directional_derivative, gradient_fd

ORACLE_TOL = 1e-10
NORM_TOL = 1e-12


def random_instance(rng, n, m, r, depth=2, mixing_depth=1):
    spec = SpqcModelSpec(n, m, depth, r, readout=ReadoutSpec(mixing_depth))
    theta = rng.uniform(0, 2 * np.pi, spec.num_params)
    theta[-2:] = rng.normal(size=2)
    x = float(rng.uniform(0, 1))
    return spec, theta, x


def check_oracle_equivalence(instances: int = 120, seed: int = 7) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    while count < instances:
        for n in (1, 2):
            for m in (1, 2, 3):
                for r in (1, 2):
                    spec, theta, x = random_instance(rng, n, m, r)
                    _, diag = forward(spec, theta, x)
                    expect = oracle_postselected_state(oracle_branch_vector(spec, theta, x), r)
                    worst = max(worst, float(np.max(np.abs(diag.address_amplitudes - expect))))
                    count += 1
    return worst < ORACLE_TOL, f"{count} instances, max deviation {worst:.2e}"


def check_squaring_law(instances: int = 20, seed: int = 11) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        for n, r in ((1, 2), (2, 2), (1, 3)):
            spec, theta, x = random_instance(rng, n, int(rng.integers(1, 4)), r)
            _, diag = forward(spec, theta, x)
            p = diag.p
            worst = max(worst, float(np.max(np.abs(diag.address_amplitudes - p**r / np.linalg.norm(p**r)))))
    return worst < ORACLE_TOL, f"max deviation {worst:.2e}"


def check_block_vs_controlled(instances: int = 10, seed: int = 5) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n, m = int(rng.integers(1, 3)), int(rng.integers(1, 4))
        ans = AnsatzSpec(n, 2)
        params = BranchParams(rng.uniform(0, 2 * np.pi, (1 << m, ans.params_per_branch())))
        state = new_zero_state(n + m)
        for q in range(n):
            state = apply_gate(state, Gate("RY", float(rng.uniform(0, 3))), q)
        addr = list(range(n, n + m))
        state = prepare_address_superposition(state, addr)
        a = apply_branch_unitaries(state, ans, params, list(range(n)), addr, method="blocks")
        b = apply_branch_unitaries(state, ans, params, list(range(n)), addr, method="controlled")
        worst = max(worst, float(np.max(np.abs(a.amps - b.amps))))
    return worst < NORM_TOL, f"max deviation {worst:.2e}"


def _loss_on(spec, X, y):
    from .engine import BatchModel

    return BatchModel(spec, X).bind_targets(y).loss


def gradient_variants():
    rng = np.random.default_rng(3)
    X = np.linspace(0, 1, 7)
    y = np.sign(np.sin(6 * X) + 1e-9)
    spqc1 = SpqcModelSpec(1, 2, 2, 1)
    spqc2 = SpqcModelSpec(2, 1, 1, 2)
    out = []
    for name, spec in (("spqc r=1", spqc1), ("spqc r=2", spqc2), ("pqc", depth_matched(spqc1))):
        theta = rng.uniform(0, 2 * np.pi, spec.num_params)
        out.append((name, _loss_on(spec, X, y), theta))
    return out


def check_gradients(directions: int = 10, seed: int = 13) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst_rel = worst_dir = 0.0
    for _, fn, theta in gradient_variants():
        g1 = gradient_fd(fn, theta, 1e-4)
        g2 = gradient_fd(fn, theta, 1e-5)
        worst_rel = max(worst_rel, float(np.linalg.norm(g1 - g2) / np.linalg.norm(g1)))
        for _ in range(directions):
            u = rng.normal(size=theta.size)
            u /= np.linalg.norm(u)
            worst_dir = max(worst_dir, abs(float(g1 @ u) - directional_derivative(fn, theta, u)))
    ok = worst_rel <= 1e-4 and worst_dir <= 1e-5
    return ok, f"step-halving rel {worst_rel:.2e}, directional abs {worst_dir:.2e}"


def check_normalization(applications: int = 10_000, seed: int = 17) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    n = 5
    state = new_zero_state(n)
    worst = 0.0
    names = ("H", "X", "RX", "RY", "RZ")
    for _ in range(applications):
        name = names[rng.integers(len(names))]
        gate = Gate(name, float(rng.uniform(-7, 7))) if name.startswith("R") else Gate(name)
        target = int(rng.integers(n))
        others = [q for q in range(n) if q != target]
        k = int(rng.integers(0, 3))
        ctrl = [(int(q), bool(rng.integers(2))) for q in rng.choice(others, size=k, replace=False)]
        state = apply_gate(state, gate, target, ctrl)
        worst = max(worst, abs(state.norm_sq() - 1.0))
    # projection probabilities over every bitstring of a 3-qubit register
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    psi = from_amplitudes(amps, normalize=True)
    reg = [0, 2, 4]
    total = 0.0
    for v in range(8):
        bits = [(v >> k) & 1 for k in range(3)]
        total += project_postselect(psi, reg, bits)[0]
    ok = worst < NORM_TOL and abs(total - 1.0) < NORM_TOL
    return ok, f"max norm drift {worst:.2e}, projection sum error {abs(total - 1):.2e}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "oracle-equivalence": check_oracle_equivalence,
    "squaring-law": check_squaring_law,
    "ffqram-block-vs-controlled": check_block_vs_controlled,
    "gradients": check_gradients,
    "normalization": check_normalization,
}


def run_all(echo: Callable[[str], None] = print) -> bool:
    ok_all = True
    for name, check in CHECKS.items():
        start = time.perf_counter()
        ok, detail = check()
        ok_all &= ok
        echo(f"{'PASS' if ok else 'FAIL'}  {name:<28} {detail} ({time.perf_counter() - start:.1f}s)")
    echo("ALL CHECKS PASSED" if ok_all else "VERIFICATION FAILED")
    return ok_all
