"""Algebraic energies against oracle values frozen in tests/golden.

Regenerate with ``kgbound verify --suite NAME --seed-goldens --out tests/golden``.
"""

from pathlib import Path

import pytest

from kgbound.eigensolver import solve_energy
from kgbound.oracle import read_goldens
from kgbound.suites import SUITES

GOLDEN = Path(__file__).parent / "golden"
CASES = {case.case: case for suite in SUITES.values() for case in suite.cases}


def _rows(name):
    return read_goldens(GOLDEN / f"golden_{name}.csv")


@pytest.mark.parametrize("name", ["coulomb", "exact_mapping", "approximation"])
def test_golden_file_covers_suite(name):
    suite = SUITES[name.replace("_", "-")]
    expected = {(c.case, n, ell) for c in suite.cases for n, ell in c.states}
    assert {row[:3] for row in _rows(name)} == expected


@pytest.mark.parametrize("name", ["coulomb", "exact_mapping", "approximation"])
def test_algebraic_energies_match_goldens(name):
    for case_id, n, ell, energy, tolerance in _rows(name):
        case = CASES[case_id]
        state = solve_energy(case.spec, case.mass, n, ell)
        assert abs(state.energy - energy) <= tolerance * case.mass, (case_id, n, ell)
