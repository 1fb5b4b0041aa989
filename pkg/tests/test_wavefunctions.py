from dataclasses import replace

import numpy as np
import pytest

from kgbound.eigensolver import solve_energy, trial_state
from kgbound.errors import InvalidParameters, NonDecayingTail, TrivialSolution
from kgbound.potentials import Coulomb, Hulthen, KratzerFues, Mie, NonCentralRadial, PoschlTeller, WoodsSaxon
from kgbound.wavefunctions import (
    RadialGrid,
    count_nodes,
    default_grid,
    evaluate,
    inner_product,
    normalize,
    normalized_state,
    ode_residual,
    psi_of_s,
    relative_ode_residual,
    residual_points,
)

SPECS = (
    Coulomb(0.2),
    Mie(0.1, 1.0),
    KratzerFues(0.25, 1.0),
    NonCentralRadial(-0.2, 0.75),
    Hulthen(0.05, 0.05, 0.1),
    WoodsSaxon(0.5, 2.0, 2.0, 30.0),
    PoschlTeller(2.0, 0.1, 0.5),
)


def test_coulomb_ground_state_shape():
    state = solve_energy(Coulomb(0.2), 1.0, 0, 0)
    wf = evaluate(state)
    assert wf.node_count == 0
    kappa = np.sqrt(1 - state.energy**2)
    ratio = wf.values / (np.exp(-kappa * wf.r) * wf.r**state.exponents.q)
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_nodes_equal_radial_quantum_number(spec):
    for n in range(2):
        ell = 0 if spec.kind == "noncentral" else 1
        wf = evaluate(solve_energy(spec, 1.0, n, ell))
        assert wf.node_count == n


def test_kratzer_excited_nodes_match_laguerre_roots():
    state = solve_energy(KratzerFues(0.25, 1.0), 1.0, 2, 0)
    wf = evaluate(state)
    assert wf.node_count == 2
    exps = state.exponents
    # L_2^k(z) has two positive roots; mapped back to r they must lie on the grid
    k = exps.k
    roots = np.roots([0.5, -(k + 2), (k + 1) * (k + 2) / 2])
    r_roots = np.sort(roots.real / exps.z_scale)
    changes = wf.r[1:][np.sign(wf.values[1:]) != np.sign(wf.values[:-1])]
    np.testing.assert_allclose(changes, r_roots, rtol=1e-2)


def test_count_nodes_deadband():
    assert count_nodes([1.0, -1.0, 1.0]) == 2
    assert count_nodes([1.0, -1e-14, 1.0]) == 0
    assert count_nodes([0.0, 0.0]) == 0


def test_normalize_idempotent_and_scale_invariant():
    state = solve_energy(Coulomb(0.2), 1.0, 1, 1)
    wf = evaluate(state)
    once = normalize(wf)
    twice = normalize(once)
    np.testing.assert_allclose(twice.values, once.values, rtol=1e-12)
    assert once.grid.integrate(once.values**2 * once.r**2, once.r) == pytest.approx(1.0, abs=1e-12)
    scaled = normalize(replace(wf, values=7.0 * wf.values))
    np.testing.assert_allclose(scaled.values, once.values, rtol=1e-12)
    assert scaled.norm == pytest.approx(once.norm / 7.0, rel=1e-12)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_norm_converged_under_grid_doubling(spec):
    state = solve_energy(spec, 1.0, 1, 0)
    grid = default_grid(state)
    fine = RadialGrid(grid.r_min, grid.r_max, 2 * grid.count - 1)
    n1 = normalize(evaluate(state, grid)).norm
    n2 = normalize(evaluate(state, fine)).norm
    assert abs(n1 - n2) / n2 <= 1e-8


def test_normalized_state_records_constant():
    state, wf = normalized_state(solve_energy(Coulomb(0.2), 1.0, 0, 0))
    assert state.norm_constant == wf.norm > 0


def test_normalize_errors():
    state = solve_energy(Coulomb(0.2), 1.0, 0, 0)
    wf = evaluate(state)
    with pytest.raises(TrivialSolution):
        normalize(replace(wf, values=np.zeros_like(wf.values)))
    short = evaluate(state, RadialGrid(1e-3, 2.0, 256))
    with pytest.raises(NonDecayingTail):
        normalize(short)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_ode_residual_small_at_eigenvalue_and_large_off_it(spec):
    state = solve_energy(spec, 1.0, 0, 0)
    at = ode_residual(state)
    assert at <= 1e-6
    s, t, h = residual_points(state)
    for shift in (-1e-3, 1e-3):
        off = trial_state(spec, 1.0, 0, 0, state.energy + shift)
        # the polynomial degree stays n: the ansatz no longer solves the ODE
        assert relative_ode_residual(psi_of_s(state), off.params, s, h, t) >= 10 * max(at, 1e-12)


def test_trivial_solution_raises():
    state = solve_energy(Coulomb(0.2), 1.0, 0, 0)
    s, t, h = residual_points(state)
    with pytest.raises(TrivialSolution):
        relative_ode_residual(lambda s, t=None: np.zeros_like(s), state.params, s, h, t)


def test_orthogonality_in_nonrelativistic_regime():
    spec = Coulomb(0.01)
    states = [solve_energy(spec, 1.0, n, 0) for n in range(3)]
    grid = RadialGrid(1e-4, 15000.0, 20001)
    wfs = [normalize(evaluate(s, grid)) for s in states]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(inner_product(wfs[i], wfs[j])) <= 1e-3


def test_grid_validation():
    with pytest.raises(InvalidParameters):
        RadialGrid(0.0, 1.0)
    with pytest.raises(InvalidParameters):
        RadialGrid(1.0, 2.0, count=10)
    with pytest.raises(InvalidParameters):
        RadialGrid(1.0, 2.0, spacing="cheb")
    a = evaluate(solve_energy(Coulomb(0.2), 1.0, 0, 0), RadialGrid(1e-3, 100.0, 200))
    b = evaluate(solve_energy(Coulomb(0.2), 1.0, 1, 0), RadialGrid(1e-3, 101.0, 200))
    with pytest.raises(InvalidParameters):
        inner_product(a, b)


def test_uniform_grid_integration_matches_log():
    state = solve_energy(Coulomb(0.2), 1.0, 0, 0)
    log_norm = normalize(evaluate(state, RadialGrid(1e-6, 200.0, 8001))).norm
    uni_norm = normalize(evaluate(state, RadialGrid(1e-6, 200.0, 40001, "uniform"))).norm
    assert uni_norm == pytest.approx(log_norm, rel=1e-8)
