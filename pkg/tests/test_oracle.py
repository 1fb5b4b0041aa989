import numpy as np
import pytest

from kgbound.eigensolver import EnergyWindow, coulomb_energy, solve_energy
from kgbound.errors import InvalidParameters, MismatchedProblem, NoTransitionInWindow
from kgbound.oracle import (
    APPROXIMATE,
    EXACT,
    EffectiveProblem,
    LogGrid,
    compare,
    default_grid,
    golden_rows,
    integrate_u,
    read_goldens,
    shoot,
    write_goldens,
)
from kgbound.potentials import Coulomb, Hulthen, KratzerFues, Mie, NonCentralRadial, PoschlTeller
from kgbound.suites import SWEEPS, run_sweep

KRATZER_GROUND = 1.2971565081774


def test_free_equation_has_no_bound_state():
    problem = EffectiveProblem(Mie(0.0, 1.0), 1.0, 0)
    run = integrate_u(problem, 0.5, LogGrid(1e-6, 50.0, 1e-3), keep=True)
    assert run.nodes == 0
    assert run.tail_ratio == 1.0
    kappa = np.sqrt(1 - 0.25)
    r = LogGrid(1e-6, 50.0, 1e-3).points()
    # u grows like sinh(kappa r)
    ratio = run.values / np.sinh(kappa * r)
    assert abs(ratio[-1] / ratio[len(r) // 2] - 1) <= 1e-6


def test_coulomb_tail_at_closed_form_energy():
    problem = EffectiveProblem(Coulomb(0.2), 1.0, 0)
    energy = coulomb_energy(0.2, 1.0, 0, 0)
    # 20 Bohr radii: the exact tail is ~1e-7 of the peak
    grid = default_grid(problem, r_max=100.0)
    assert integrate_u(problem, energy, grid).tail_ratio <= 1e-6
    for shift in (-1e-3, 1e-3):
        assert integrate_u(problem, energy + shift, grid).tail_ratio >= 1e-2


def test_shoot_matches_closed_form():
    for n, ell in ((0, 0), (1, 0), (2, 1)):
        state = shoot(EffectiveProblem(Coulomb(0.2), 1.0, ell), n)
        assert abs(state.energy - coulomb_energy(0.2, 1.0, n, ell)) <= 1e-10
        assert state.nodes == n


def test_kratzer_golden_from_oracle():
    state = shoot(EffectiveProblem(KratzerFues(0.25, 1.0), 1.0, 0), 0)
    assert state.energy == pytest.approx(KRATZER_GROUND, abs=1e-10)


def test_empty_window():
    problem = EffectiveProblem(Coulomb(0.2), 1.0, 0)
    with pytest.raises(NoTransitionInWindow):
        shoot(problem, 0, window=(0.5, 0.5))
    with pytest.raises(NoTransitionInWindow):
        shoot(problem, 0, window=EnergyWindow(0.99, 0.999, scan_points=64), max_growth=2.0)


def test_compare_coulomb_pair():
    algebraic = solve_energy(Coulomb(0.2), 1.0, 1, 1)
    numeric = shoot(EffectiveProblem(Coulomb(0.2), 1.0, 1), 1)
    record = compare(algebraic, numeric, case="c")
    assert record.passed
    assert record.abs_diff <= 1e-6
    assert record.overlap >= 1 - 1e-9
    assert record.nodes_algebraic == record.nodes_numeric == 1
    assert record.to_dict()["case"] == "c"


def test_compare_guards():
    algebraic = solve_energy(Coulomb(0.2), 1.0, 0, 1)
    with pytest.raises(MismatchedProblem):
        compare(algebraic, shoot(EffectiveProblem(Coulomb(0.2), 1.0, 2), 0))
    with pytest.raises(MismatchedProblem):
        compare(algebraic, shoot(EffectiveProblem(Coulomb(0.3), 1.0, 1), 0))
    spec = Hulthen(0.05, 0.05, 0.1)
    algebraic = solve_energy(spec, 1.0, 0, 1)
    exact = shoot(EffectiveProblem(spec, 1.0, 1, EXACT), 0)
    with pytest.raises(MismatchedProblem):
        compare(algebraic, exact)
    record = compare(algebraic, exact, allow_centrifugal_mismatch=True)
    assert record.overlap_target is None
    assert record.centrifugal_algebraic == APPROXIMATE and record.centrifugal_numeric == EXACT


def test_same_approximation_agrees():
    spec = PoschlTeller(2.0, 0.1, 0.5)
    algebraic = solve_energy(spec, 1.0, 0, 1)
    numeric = shoot(EffectiveProblem(spec, 1.0, 1, APPROXIMATE), 0)
    record = compare(algebraic, numeric)
    assert record.passed and record.abs_diff <= 1e-6


def test_hulthen_delta_sweep_shrinks():
    sweep = next(s for s in SWEEPS if s.case == "hulthen_sweep")
    result = run_sweep(sweep)
    assert result.monotone
    assert result.gaps[-1] < result.gaps[0] / 10


def test_problem_validation():
    with pytest.raises(InvalidParameters):
        EffectiveProblem(Coulomb(0.2), 1.0, 0, centrifugal="none")
    with pytest.raises(InvalidParameters):
        EffectiveProblem(Coulomb(0.2), 0.0, 0)
    with pytest.raises(InvalidParameters):
        EffectiveProblem(NonCentralRadial(-0.2, 0.75), 1.0, 1)
    with pytest.raises(InvalidParameters):
        shoot(EffectiveProblem(Coulomb(0.2), 1.0, 0), -1)


def test_exact_centrifugal_flag():
    assert EffectiveProblem(Hulthen(0.1, 0, 0.1), 1.0, 1, APPROXIMATE).uses_approximation
    assert not EffectiveProblem(Hulthen(0.1, 0, 0.1), 1.0, 0, APPROXIMATE).uses_approximation
    assert not EffectiveProblem(Coulomb(0.2), 1.0, 1, APPROXIMATE).uses_approximation


def test_golden_round_trip(tmp_path):
    states = [shoot(EffectiveProblem(Coulomb(0.2), 1.0, 0), n) for n in range(2)]
    rows = golden_rows("coulomb", states, 1e-6)
    path = tmp_path / "golden.csv"
    write_goldens(path, rows)
    back = read_goldens(path)
    assert back == [("coulomb", n, 0, s.energy, 1e-6) for n, s in enumerate(states)]
    assert path.read_text().splitlines()[0] == "case,n,ell,energy,tolerance"
