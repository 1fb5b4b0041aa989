"""Numerical shooting oracle for the raw radial Klein-Gordon equation.

Integrates ``u'' = W(r, E) u`` with

    W = (m + S)^2 - (E - V)^2 + l(l+1) c(r)

where c(r) is either 1/r^2 or the case's stand-in for it.  Integration is
Numerov on a uniform grid in x = ln r, with u = e^(x/2) phi so that
``phi'' = (r^2 W + 1/4) phi`` has no first-derivative term.  Energies are
located by the node count of u: bracket the E at which the count steps from
n to n + 1, then bisect.  Nothing here uses the normal-form machinery.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np
from scipy.integrate import simpson

from ._io import atomic_write_text, csv_text
from .eigensolver import EnergyWindow, default_window, thread_count
from .errors import (
    InvalidParameters,
    MismatchedProblem,
    NoTransitionInWindow,
    NonDecayingTail,
    SupercriticalCoupling,
)
from .potentials import NonCentralRadial, WoodsSaxon, centrifugal_approximation
from .wavefunctions import count_nodes, radial_values

log = logging.getLogger(__name__)

EXACT = "exact"
APPROXIMATE = "approximate"

DEFAULT_TOL = 1e-12
DEFAULT_STEP = 1e-3
TAIL_EXPONENT = 30.0
OVERLAP_TARGET = 1.0 - 1e-6
RESCALE = 1e150

GOLDEN_HEADER = ("case", "n", "ell", "energy", "tolerance")


@numba.njit(cache=True, nogil=True)
def _numerov(g, sqrt_r, h, phi0, phi1, dphi, out):
    """March ``phi'' = g phi``; returns (nodes, u_last, max|u|, rescales).

    Summed form: with ``d = h^2 g / 12`` and ``z = (1 - d) phi`` the first
    difference ``z[i+1] - z[i]`` is carried and updated by ``12 d phi``, so
    the small ``d`` never sits next to 1 in a sum.  ``dphi`` is
    ``phi1 - phi0`` computed without cancellation.

    ``out`` receives phi when it has nonzero length.  Values are rescaled
    by 1/RESCALE whenever they exceed RESCALE, stored history included.
    """
    n = g.size
    store = out.size == n
    c = h * h / 12.0
    d0 = c * g[0]
    d1 = c * g[1]
    y1 = phi1
    z1 = y1 - d1 * y1
    diff = dphi - (d1 * phi1 - d0 * phi0)
    nodes = 0
    rescales = 0
    peak = max(abs(phi0 * sqrt_r[0]), abs(phi1 * sqrt_r[1]))
    if store:
        out[0] = phi0
        out[1] = phi1
    if phi0 * phi1 < 0.0:
        nodes += 1
    for i in range(1, n - 1):
        diff += 12.0 * d1 * y1
        z2 = z1 + diff
        d2 = c * g[i + 1]
        y2 = z2 / (1.0 - d2)
        if y2 * y1 < 0.0:
            nodes += 1
        if abs(y2) > RESCALE:
            y2 /= RESCALE
            z2 /= RESCALE
            diff /= RESCALE
            peak /= RESCALE
            rescales += 1
            if store:
                for j in range(i + 1):
                    out[j] /= RESCALE
        if store:
            out[i + 1] = y2
        u = abs(y2 * sqrt_r[i + 1])
        if u > peak:
            peak = u
        y1, z1, d1 = y2, z2, d2
    return nodes, y1 * sqrt_r[n - 1], peak, rescales


@dataclass(frozen=True)
class EffectiveProblem:
    """The radial equation of one potential at fixed (m, l).

    ``centrifugal`` is ``"exact"`` (l(l+1)/r^2) or ``"approximate"`` (the
    case's stand-in, identical to exact for potentials that use none).
    """

    spec: object
    mass: float
    ell: int
    centrifugal: str = EXACT

    def __post_init__(self):
        if self.centrifugal not in (EXACT, APPROXIMATE):
            raise InvalidParameters(f"centrifugal must be exact/approximate, got {self.centrifugal!r}")
        if self.mass <= 0:
            raise InvalidParameters("mass must be positive")
        if self.ell < 0 or int(self.ell) != self.ell:
            raise InvalidParameters("ell must be a non-negative integer")
        if isinstance(self.spec, NonCentralRadial) and self.ell != 0:
            raise InvalidParameters("non-central: the angular momentum lives in lambda_sep; use ell = 0")

    @property
    def uses_approximation(self):
        return self.centrifugal == APPROXIMATE and self.spec.approximated_centrifugal and self.ell > 0

    @property
    def length(self):
        return self.spec.length_scale(self.mass)

    @property
    def r_domain(self):
        return (0.0, math.inf)

    def angular(self, r):
        r = np.asarray(r, dtype=float)
        if isinstance(self.spec, NonCentralRadial):
            return self.spec.lambda_sep / r**2
        big_l = self.ell * (self.ell + 1)
        if big_l == 0:
            return np.zeros_like(r)
        if self.uses_approximation:
            return big_l * centrifugal_approximation(self.spec, r)
        return big_l / r**2

    def W(self, r, E):
        """Effective coefficient; the difference of squares is factored to avoid cancellation."""
        r = np.asarray(r, dtype=float)
        m = self.mass
        S = self.spec.scalar(r)
        V = self.spec.vector(r)
        return (m + S - E + V) * (m + S + E - V) + self.angular(r)

    def origin_series(self, E):
        """``(nu, a1)`` of the start-up series ``u ~ r^nu (1 + a1 r)``.

        With ``W ~ A/r^2 + B/r`` near the origin, ``nu (nu - 1) = A`` and
        ``a1 = B / (2 nu)``.  A and B are read off W numerically.
        """
        r0, r1 = 1e-12 * self.length, 1e-7 * self.length
        big_a = float(r0 * r0 * self.W(r0, E))
        big_b = float((r1 * r1 * self.W(r1, E) - big_a) / r1)
        disc = 0.25 + big_a
        if disc < 0:
            raise SupercriticalCoupling(f"origin exponent is complex (1/4 + A = {disc:.6g})")
        nu = 0.5 + math.sqrt(disc)
        return nu, big_b / (2.0 * nu)

    def initial_r_max(self):
        extra = self.spec.r_big if isinstance(self.spec, WoodsSaxon) else 0.0
        return 30.0 * self.length + extra


@dataclass(frozen=True)
class LogGrid:
    """Uniform grid in x = ln r."""

    r_min: float
    r_max: float
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise InvalidParameters("need 0 < r_min < r_max")
        if not self.step > 0:
            raise InvalidParameters("step must be positive")

    @property
    def count(self):
        return int(math.ceil(math.log(self.r_max / self.r_min) / self.step)) + 1

    def x(self):
        return np.linspace(math.log(self.r_min), math.log(self.r_max), self.count)

    def points(self):
        return np.exp(self.x())

    @property
    def h(self):
        return math.log(self.r_max / self.r_min) / (self.count - 1)


def default_grid(problem, r_max=None, step=DEFAULT_STEP, window=None):
    """Log grid from 1e-6 length scales to ``r_max``.

    The step is reduced below ``step`` when needed for 40 points per local
    wavelength and for Numerov stability (h^2 g / 12 <= 0.1) at the window
    ends.
    """
    r_max = problem.initial_r_max() if r_max is None else r_max
    r_min = 1e-6 * problem.length
    if window is not None:
        r = np.geomspace(r_min, r_max, 2000)
        g = np.concatenate([
            r * r * problem.W(r, e) + 0.25
            for e in np.linspace(window.lo, window.hi, 5)[1:-1].tolist() + [window.lo, window.hi]
        ])
        g = g[np.isfinite(g)]
        if g.size:
            if g.max() > 0:
                step = min(step, math.sqrt(1.2 / g.max()))
            if g.min() < 0:
                step = min(step, 2.0 * math.pi / (40.0 * math.sqrt(-g.min())))
    return LogGrid(r_min, r_max, step)


@dataclass(frozen=True)
class Integration:
    nodes: int
    u_last: float
    peak: float
    rescales: int
    values: np.ndarray | None = None

    @property
    def tail_ratio(self):
        return abs(self.u_last) / self.peak if self.peak > 0 else math.inf


def integrate_u(problem, E, grid, keep=False):
    """Integrate u outward from the series start at ``grid.r_min``.

    Parameters
    ----------
    problem : EffectiveProblem
    E : float
        Trial energy.
    grid : LogGrid
    keep : bool
        Return the sampled u (up to an overall constant) in ``values``.

    Returns
    -------
    Integration
        Node count, final and peak |u|, number of overflow rescales.
    """
    x = grid.x()
    r = np.exp(x)
    h = grid.h
    g = r * r * problem.W(r, E) + 0.25
    if not np.all(np.isfinite(g)):
        raise InvalidParameters(f"W is not finite on the grid at E={E!r}")
    nu, a1 = problem.origin_series(E)
    phi0 = 1.0 + a1 * r[0]
    phi1 = math.exp((nu - 0.5) * h) * (1.0 + a1 * r[1])
    dphi = math.expm1((nu - 0.5) * h) * (1.0 + a1 * r[1]) + a1 * (r[1] - r[0])
    out = np.empty(r.size if keep else 0)
    nodes, u_last, peak, rescales = _numerov(g, np.sqrt(r), h, phi0, phi1, dphi, out)
    if rescales:
        log.debug("E=%.17g: %d overflow rescale(s)", E, rescales)
    values = out * np.sqrt(r) if keep else None
    return Integration(int(nodes), float(u_last), float(peak), int(rescales), values)


def _as_window(problem, window):
    if window is None:
        return default_window(problem.spec, problem.mass)
    if isinstance(window, EnergyWindow):
        return window
    lo, hi = window
    if not lo < hi:
        raise NoTransitionInWindow(f"empty energy window [{lo}, {hi}]")
    return EnergyWindow(lo, hi)


def _scan_nodes(problem, grid, energies, threads):
    def count(e):
        return integrate_u(problem, float(e), grid).nodes

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(count, energies))
    return [count(e) for e in energies]


def _bracket(problem, n, window, grid, scan_points, threads):
    t = np.linspace(0.0, 1.0, scan_points)
    width = window.hi - window.lo
    # keep off the exact endpoints, where W may be degenerate
    energies = window.lo + width * (1e-9 + (1.0 - 2e-9) * 0.5 * (1.0 - np.cos(np.pi * t)))
    counts = _scan_nodes(problem, grid, energies, threads)
    for i in range(1, len(energies)):
        if counts[i - 1] <= n < counts[i]:
            return float(energies[i - 1]), float(energies[i])
    raise NoTransitionInWindow(
        f"node count never steps past n={n} in [{window.lo}, {window.hi}]"
        f" (counts {counts[0]}..{counts[-1]})"
    )


def _bisect_nodes(problem, n, grid, lo, hi, width):
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if integrate_u(problem, mid, grid).nodes <= n:
            lo = mid
        else:
            hi = mid
    return lo, hi


def decay_exponent(problem, E, grid):
    """``int sqrt(W) dr`` from the outermost classical turning point to r_max."""
    r = grid.points()
    w = problem.W(r, E)
    allowed = np.nonzero(w < 0)[0]
    start = allowed[-1] + 1 if allowed.size else 0
    if start >= r.size - 1:
        return 0.0
    return float(simpson(np.sqrt(w[start:]) * r[start:], x=np.log(r[start:])))


@dataclass(frozen=True)
class NumericState:
    """A shooting eigenvalue with its sampled u(r)."""

    problem: EffectiveProblem
    n: int
    energy: float
    bracket: tuple[float, float]
    grid: LogGrid
    r: np.ndarray
    u: np.ndarray
    nodes: int
    tail_ratio: float
    decay_exponent: float

    def radial(self):
        """Normalized R = u / r with ``int R^2 r^2 dr = 1``."""
        norm = math.sqrt(_integrate_log(self.u**2, self.r))
        return self.u / (norm * self.r)


def _integrate_log(f, r):
    """``int f dr`` on a log grid."""
    return float(simpson(f * r, x=np.log(r)))


def shoot(problem, n, window=None, tol=DEFAULT_TOL, step=DEFAULT_STEP, scan_points=128,
          threads=None, max_growth=64.0):
    """Eigenvalue with exactly n interior nodes of u, by node-count bracketing.

    Parameters
    ----------
    problem : EffectiveProblem
    n : int
        Required node count.
    window : EnergyWindow or (lo, hi), optional
        Search interval; defaults to the eigensolver's bound-state window.
    tol : float
        Final bracket width in units of ``problem.mass``.
    step : float
        Largest grid spacing in ln r.
    max_growth : float
        r_max starts at 30 length scales and may grow by at most this
        factor while looking for a transition or a decayed tail.

    Returns
    -------
    NumericState

    Raises
    ------
    NoTransitionInWindow
        The node count never passes from n to n + 1 inside the window.
    NonDecayingTail
        r_max could not be pushed far enough into the forbidden region.
    """
    if n < 0:
        raise InvalidParameters("n must be non-negative")
    window = _as_window(problem, window)
    threads = threads or thread_count()
    r_max = problem.initial_r_max()
    r_cap = max_growth * r_max
    failure = None
    while r_max <= r_cap:
        grid = default_grid(problem, r_max, step, window)
        try:
            lo, hi = _bracket(problem, n, window, grid, scan_points, threads)
        except NoTransitionInWindow as exc:
            # high states may simply not fit inside r_max yet
            failure = exc
            r_max *= 2.0
            continue
        lo, hi = _bisect_nodes(problem, n, grid, lo, hi, tol * problem.mass)
        energy = 0.5 * (lo + hi)
        exponent = decay_exponent(problem, energy, grid)
        if exponent >= TAIL_EXPONENT:
            break
        failure = NonDecayingTail(
            f"decay exponent {exponent:.3g} < {TAIL_EXPONENT} at r_max={r_max:.6g}"
        )
        r_max *= 1.5
    else:
        raise failure
    run = integrate_u(problem, energy, grid, keep=True)
    r = grid.points()
    u, tail = _truncate_tail(problem, energy, r, run.values)
    return NumericState(problem, n, energy, (lo, hi), grid, r, u, count_nodes(u), tail, exponent)


def _truncate_tail(problem, E, r, u):
    """Zero u beyond the smallest |u| in the outer forbidden region.

    Any residual energy error excites the growing solution there; cutting at
    the minimum leaves an error of the size of that minimum.
    """
    w = problem.W(r, E)
    allowed = np.nonzero(w < 0)[0]
    start = allowed[-1] + 1 if allowed.size else 0
    cut = start + int(np.argmin(np.abs(u[start:])))
    if cut > 0 and u[cut] * u[cut - 1] < 0:
        # the minimum sits just past the growing solution's zero crossing
        cut -= 1
    u = u.copy()
    u[cut + 1:] = 0.0
    peak = np.max(np.abs(u))
    if not peak > 0:
        raise NonDecayingTail("numeric solution vanished after truncation")
    return u, float(abs(u[cut]) / peak)


# -- comparison --------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRecord:
    case: str
    kind: str
    n: int
    ell: int
    energy_algebraic: float
    energy_numeric: float
    abs_diff: float
    rel_diff: float
    tolerance: float
    overlap: float
    overlap_target: float | None
    nodes_algebraic: int
    nodes_numeric: int
    centrifugal_algebraic: str
    centrifugal_numeric: str
    passed: bool

    def to_dict(self):
        return dict(vars(self))


def algebraic_centrifugal(state):
    """Treatment of l(l+1)/r^2 implied by the algebraic solution."""
    if state.spec.approximated_centrifugal and state.ell > 0:
        return APPROXIMATE
    return EXACT


def effective_centrifugal(problem):
    return APPROXIMATE if problem.uses_approximation else EXACT


def compare(algebraic, numeric, tolerance=1e-6, case="", allow_centrifugal_mismatch=False):
    """Compare an algebraic state with a shooting result for the same problem.

    Parameters
    ----------
    algebraic : BoundState
    numeric : NumericState
    tolerance : float
        Allowed |dE| in units of the mass.
    allow_centrifugal_mismatch : bool
        Permit exact centrifugal on one side against the approximation on the
        other (approximation-quality studies).  The overlap target is then
        not applied.

    Raises
    ------
    MismatchedProblem
        Different potential, mass, n or l, or different centrifugal
        treatment without ``allow_centrifugal_mismatch``.
    """
    prob = numeric.problem
    if algebraic.spec != prob.spec or algebraic.mass != prob.mass:
        raise MismatchedProblem("algebraic and numeric sides solve different potentials")
    if algebraic.n != numeric.n or algebraic.ell != prob.ell:
        raise MismatchedProblem(
            f"quantum numbers differ: (n, l) = ({algebraic.n}, {algebraic.ell})"
            f" vs ({numeric.n}, {prob.ell})"
        )
    cent_a, cent_n = algebraic_centrifugal(algebraic), effective_centrifugal(prob)
    if cent_a != cent_n and not allow_centrifugal_mismatch:
        raise MismatchedProblem(f"centrifugal treatment differs: {cent_a} vs {cent_n}")

    r = numeric.r
    numeric_r = numeric.radial()
    alg = radial_values(algebraic, r)
    alg_norm = math.sqrt(_integrate_log((alg * r) ** 2, r))
    overlap = abs(_integrate_log(alg * numeric_r * r * r, r)) / alg_norm
    diff = abs(algebraic.energy - numeric.energy)
    rel = diff / abs(numeric.energy) if numeric.energy != 0 else math.inf
    target = OVERLAP_TARGET if cent_a == cent_n else None
    passed = diff <= tolerance * prob.mass and (target is None or overlap >= target)
    return ComparisonRecord(
        case=case, kind=prob.spec.kind, n=algebraic.n, ell=algebraic.ell,
        energy_algebraic=algebraic.energy, energy_numeric=numeric.energy,
        abs_diff=diff, rel_diff=rel, tolerance=tolerance, overlap=overlap,
        overlap_target=target, nodes_algebraic=count_nodes(alg),
        nodes_numeric=numeric.nodes, centrifugal_algebraic=cent_a,
        centrifugal_numeric=cent_n, passed=bool(passed),
    )


# -- golden files ------------------------------------------------------------


def golden_rows(case, states, tolerance):
    return [(case, s.n, s.problem.ell, s.energy, tolerance) for s in states]


def write_goldens(path, rows):
    """CSV with columns case, n, ell, energy, tolerance (17 significant digits)."""
    atomic_write_text(path, csv_text(GOLDEN_HEADER, rows))


def read_goldens(path):
    with open(os.fspath(path), newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        return [
            (row["case"], int(row["n"]), int(row["ell"]), float(row["energy"]), float(row["tolerance"]))
            for row in reader
        ]
