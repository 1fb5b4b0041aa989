"""Reference parameter sets and the verification runs built on them.

Every energy is in units of the mass (m = 1).  State lists name only states
that exist for the given parameters; short-range wells have finite spectra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .eigensolver import solve_energy
from .errors import InvalidParameters
from .oracle import APPROXIMATE, EXACT, EffectiveProblem, compare, shoot
from .potentials import (
    Coulomb,
    Hulthen,
    KratzerFues,
    Mie,
    NonCentralRadial,
    PoschlTeller,
    WoodsSaxon,
)


def grid_states(n_max, ell_max):
    return tuple((n, ell) for ell in range(ell_max + 1) for n in range(n_max + 1))


@dataclass(frozen=True)
class VerifyCase:
    """One potential, the states to check and the allowed |dE| / m."""

    case: str
    spec: object
    states: tuple
    mass: float = 1.0
    tolerance: float = 1e-6


@dataclass(frozen=True)
class SweepCase:
    """Algebraic (approximate centrifugal) vs oracle (exact centrifugal).

    ``specs`` are ordered by decreasing range parameter; the energy gap is
    expected to be nonincreasing along them.
    """

    case: str
    parameter: str
    values: tuple
    specs: tuple
    n: int
    ell: int
    mass: float = 1.0


@dataclass(frozen=True)
class Suite:
    name: str
    cases: tuple = ()
    sweeps: tuple = field(default=())


COULOMB = VerifyCase("coulomb_za0.2", Coulomb(0.2), grid_states(3, 2))

EXACT_MAPPING = (
    VerifyCase("mie_v0.1_a1", Mie(0.1, 1.0), grid_states(3, 2)),
    VerifyCase("kratzer_ve0.25_re1", KratzerFues(0.25, 1.0), grid_states(3, 2)),
    VerifyCase("noncentral_a-0.2_lam0.75", NonCentralRadial(-0.2, 0.75), grid_states(3, 0)),
)

APPROXIMATION = (
    VerifyCase(
        "hulthen_v0.05_s0.05_d0.1", Hulthen(0.05, 0.05, 0.1),
        ((0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2)),
    ),
    VerifyCase("woods_saxon_v0.5_s2_a2_r30", WoodsSaxon(0.5, 2.0, 2.0, 30.0), grid_states(1, 2)),
    VerifyCase(
        "poschl_teller_v2_w0.1_a0.5", PoschlTeller(2.0, 0.1, 0.5),
        ((0, 0), (1, 0), (0, 1), (1, 1), (0, 2)),
    ),
)

_DELTAS = (0.04, 0.02, 0.01, 0.005)
_ALPHAS = (0.4, 0.2, 0.1, 0.05)
_RADII = (10.0, 20.0, 40.0, 80.0)

SWEEPS = (
    SweepCase(
        "hulthen_sweep", "delta", _DELTAS,
        tuple(Hulthen(0.2 * d, 0.0, d) for d in _DELTAS), n=0, ell=1,
    ),
    SweepCase(
        "woods_saxon_sweep", "1/r_big", tuple(1.0 / r for r in _RADII),
        tuple(WoodsSaxon(0.5, 2.0, 2.0, r) for r in _RADII), n=0, ell=1,
    ),
    SweepCase(
        "poschl_teller_sweep", "alpha", _ALPHAS,
        tuple(PoschlTeller(8.0 * a * a, 0.5 * a * a, a) for a in _ALPHAS), n=0, ell=1,
    ),
)

SUITES = {
    "coulomb": Suite("coulomb", (COULOMB,)),
    "exact-mapping": Suite("exact-mapping", EXACT_MAPPING),
    "approximation": Suite("approximation", APPROXIMATION, SWEEPS),
}


def get_suite(name):
    try:
        return SUITES[name]
    except KeyError:
        raise InvalidParameters(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None


@dataclass(frozen=True)
class CaseResult:
    case: VerifyCase
    records: tuple
    states: tuple
    numerics: tuple


def run_case(case, tol=1e-12):
    """Algebraic and shooting energies for every state of ``case``."""
    records, states, numerics = [], [], []
    for n, ell in case.states:
        algebraic = solve_energy(case.spec, case.mass, n, ell, tol=tol)
        numeric = shoot(EffectiveProblem(case.spec, case.mass, ell, APPROXIMATE), n)
        records.append(compare(algebraic, numeric, case.tolerance, case=case.case))
        states.append(algebraic)
        numerics.append(numeric)
    return CaseResult(case, tuple(records), tuple(states), tuple(numerics))


@dataclass(frozen=True)
class SweepResult:
    sweep: SweepCase
    gaps: tuple
    monotone: bool

    def to_dict(self):
        return {
            "case": self.sweep.case,
            "parameter": self.sweep.parameter,
            "values": list(self.sweep.values),
            "n": self.sweep.n,
            "ell": self.sweep.ell,
            "gaps": list(self.gaps),
            "monotone": self.monotone,
        }


def run_sweep(sweep, tol=1e-12):
    """Energy gaps along the sweep, exact centrifugal on the oracle side."""
    gaps = []
    for spec in sweep.specs:
        algebraic = solve_energy(spec, sweep.mass, sweep.n, sweep.ell, tol=tol)
        numeric = shoot(EffectiveProblem(spec, sweep.mass, sweep.ell, EXACT), sweep.n)
        record = compare(algebraic, numeric, case=sweep.case, allow_centrifugal_mismatch=True)
        gaps.append(record.abs_diff)
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    return SweepResult(sweep, tuple(gaps), monotone)
