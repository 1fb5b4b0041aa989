"""Bound-state energies from the quantization conditions.

Coulomb has a closed form.  Everywhere else the quantization residual is
scanned over an energy window, sign changes are bracketed and bisected.
Bisection rather than a secant-type method because the residual contains
square roots whose domain edges can sit right next to a root.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import framework as fw
from .errors import (
    DiscriminantLostMidBracket,
    InvalidParameters,
    KGBoundError,
    NoRootInWindow,
    SupercriticalCoupling,
)
from .potentials import KratzerFues, map_potential

log = logging.getLogger(__name__)

PARTICLE = "particle"
ANTIPARTICLE = "antiparticle"
DEFAULT_TOL = 1e-12
DEFAULT_SCAN_POINTS = 2048


@dataclass(frozen=True)
class EnergyWindow:
    lo: float
    hi: float
    sign: str = PARTICLE
    scan_points: int = DEFAULT_SCAN_POINTS

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidParameters(f"empty energy window [{self.lo}, {self.hi}]")
        if self.sign not in (PARTICLE, ANTIPARTICLE):
            raise InvalidParameters(f"window sign must be particle/antiparticle, got {self.sign!r}")
        if self.scan_points < 64:
            raise InvalidParameters("scan_points must be at least 64")


def default_window(spec, m, sign=PARTICLE, scan_points=DEFAULT_SCAN_POINTS):
    """Bound-state energy window for ``spec``.

    ``(-m, m)`` except Kratzer-Fues, whose potential tends to ``Ve`` at large
    r and so binds up to ``m + 2 Ve`` when S = V.
    """
    hi = m
    if isinstance(spec, KratzerFues) and spec.ve > 0:
        hi = m + 2.0 * spec.ve
    return EnergyWindow(-m, hi, sign, scan_points)


@dataclass(frozen=True)
class BoundState:
    """One solved (or trial) state of the algebraic method."""

    n: int
    ell: int
    energy: float
    spec: object
    mass: float
    params: fw.OdeParameters
    exponents: fw.ExponentSolution
    transform: object
    residual: float = 0.0
    bracket: tuple[float, float] | None = None
    excised: tuple[tuple[float, float], ...] = ()
    norm_constant: float | None = None

    @property
    def branch(self):
        return self.exponents.branch


def coulomb_energy(z_alpha, m, n, ell, branch=PARTICLE):
    """Closed-form Klein-Gordon Coulomb level.

    ``E = m [1 + (Z a)^2 / (n + 1/2 + sqrt((l + 1/2)^2 - (Z a)^2))^2]^(-1/2)``,
    with a minus sign for ``branch="antiparticle"``.
    """
    disc = (ell + 0.5) ** 2 - z_alpha**2
    if disc < 0:
        raise SupercriticalCoupling(f"(Z alpha)^2 = {z_alpha**2} exceeds (l + 1/2)^2")
    if n < 0:
        raise InvalidParameters("n must be non-negative")
    big_n = n + 0.5 + math.sqrt(disc)
    energy = m / math.sqrt(1.0 + z_alpha**2 / big_n**2)
    return energy if branch == PARTICLE else -energy


def trial_state(spec, m, n, ell, energy):
    """Assemble the ansatz at an arbitrary energy (no quantization imposed)."""
    params, transform = map_potential(spec, m, energy, ell)
    exps = fw.solve_exponents(params, transform.q_sign, transform.p_sign)
    res = fw.quantization_residual(params, exps, n).value
    return BoundState(n, ell, energy, spec, m, params, exps, transform, residual=res)


def residual_at(spec, m, n, ell, energy):
    """Quantization residual at ``energy``; raises if a precondition fails."""
    return trial_state(spec, m, n, ell, energy).residual


def is_admissible(state):
    """Reject roots of the energy condition that pick the unphysical branch at s = inf."""
    if state.transform.sigma_root is None:
        return True
    lower, upper = fw.infinity_exponents(state.params)
    sigma = state.exponents.q - state.exponents.p + state.n
    if state.transform.sigma_root == "lower":
        return abs(sigma - lower) < abs(sigma - upper)
    return abs(sigma - upper) < abs(sigma - lower)


def scan_energies(window):
    """Scan points clustered towards both window ends (cosine spacing).

    Levels accumulate at threshold like 1/N^2, so uniform spacing misses them.
    """
    t = np.linspace(0.0, 1.0, window.scan_points)
    return window.lo + (window.hi - window.lo) * 0.5 * (1.0 - np.cos(np.pi * t))


def _scan(spec, m, n, ell, window):
    energies = scan_energies(window)
    values = np.full(energies.shape, np.nan)
    for i, e in enumerate(energies):
        try:
            values[i] = residual_at(spec, m, n, ell, float(e))
        except KGBoundError:
            pass
    return energies, values


def _excised_runs(energies, values):
    bad = ~np.isfinite(values)
    runs = []
    i = 0
    while i < len(bad):
        if bad[i]:
            j = i
            while j + 1 < len(bad) and bad[j + 1]:
                j += 1
            runs.append((float(energies[i]), float(energies[j])))
            i = j + 1
        else:
            i += 1
    return tuple(runs)


def _bisect(spec, m, n, ell, lo, hi, f_lo, width):
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        try:
            f_mid = residual_at(spec, m, n, ell, mid)
        except KGBoundError as exc:
            raise DiscriminantLostMidBracket(
                f"precondition failed at E={mid!r} inside [{lo!r}, {hi!r}]: {exc}", (lo, hi)
            ) from exc
        if f_mid == 0.0:
            return mid, mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return lo, hi


def solve_energy(spec, m, n, ell, window=None, tol=DEFAULT_TOL):
    """Solve the quantization condition for state (n, ell).

    Parameters
    ----------
    spec : PotentialSpec
    m : float
        Particle mass (natural units).
    n, ell : int
        Polynomial degree (radial quantum number) and angular momentum.
    window : EnergyWindow, optional
        Defaults to :func:`default_window`.
    tol : float
        Final bracket width in units of ``m``.

    Returns
    -------
    BoundState

    Raises
    ------
    NoRootInWindow
        No admissible sign change at scan resolution.
    DiscriminantLostMidBracket
        The residual became undefined strictly inside a bracket.
    """
    if tol <= 0:
        raise InvalidParameters("tol must be positive")
    if window is None:
        window = default_window(spec, m)
    energies, values = _scan(spec, m, n, ell, window)
    excised = _excised_runs(energies, values)
    if excised:
        log.debug("n=%d l=%d: excised %d sub-interval(s) %s", n, ell, len(excised), excised)

    roots = []
    for i in range(len(energies) - 1):
        fa, fb = values[i], values[i + 1]
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        if fa == 0.0:
            lo = hi = float(energies[i])
        elif (fa > 0) != (fb > 0):
            lo, hi = _bisect(spec, m, n, ell, float(energies[i]), float(energies[i + 1]),
                             fa, tol * m)
        else:
            continue
        energy = 0.5 * (lo + hi)
        state = trial_state(spec, m, n, ell, energy)
        if is_admissible(state):
            roots.append((state, (lo, hi)))
        else:
            log.debug("n=%d l=%d: dropped root E=%.15g on the unphysical branch", n, ell, energy)

    if not roots:
        raise NoRootInWindow(
            f"no admissible root for n={n}, l={ell} in [{window.lo}, {window.hi}]"
        )
    pick = max if window.sign == PARTICLE else min
    state, bracket = pick(roots, key=lambda item: item[0].energy)
    return BoundState(
        state.n, state.ell, state.energy, spec, m, state.params, state.exponents,
        state.transform, residual=state.residual, bracket=bracket, excised=excised,
    )


@dataclass
class SpectrumResult:
    """States sorted by (ell, n) plus the combinations that were not found."""

    states: list = field(default_factory=list)
    missing: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, index):
        return self.states[index]


def thread_count():
    try:
        return max(1, int(os.environ.get("KGBOUND_THREADS", "1")))
    except ValueError:
        return 1


def spectrum(spec, m, n_max, ell_max, window=None, tol=DEFAULT_TOL, threads=None):
    """Solve every (n, ell) with ``n <= n_max`` and ``ell <= ell_max``.

    Entries are independent; results are merged in (ell, n) order whatever
    the completion order.  Failures are collected in ``missing`` as
    ``(n, ell, message)``.
    """
    if n_max < 0 or ell_max < 0:
        raise InvalidParameters("n_max and ell_max must be non-negative")
    jobs = [(n, ell) for ell in range(ell_max + 1) for n in range(n_max + 1)]

    def run(job):
        n, ell = job
        try:
            return solve_energy(spec, m, n, ell, window, tol)
        except KGBoundError as exc:
            return exc

    workers = threads or thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]

    result = SpectrumResult()
    for (n, ell), outcome in zip(jobs, outcomes):
        if isinstance(outcome, BoundState):
            result.states.append(outcome)
        else:
            result.missing.append((n, ell, f"{type(outcome).__name__}: {outcome}"))
    return result
