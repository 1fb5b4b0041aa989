"""Radial wavefunctions assembled from the exponent data of a BoundState."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import simpson

from .errors import InvalidParameters, NonDecayingTail, TrivialSolution
from .framework import Branch
from .special import jacobi_P, laguerre_L

TAIL_RATIO = 1e-10
NODE_DEADBAND = 1e-12


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    count: int = 4001
    spacing: str = "log"

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise InvalidParameters("need 0 < r_min < r_max")
        if self.count < 128:
            raise InvalidParameters("grid count must be at least 128")
        if self.spacing not in ("log", "uniform"):
            raise InvalidParameters(f"unknown spacing {self.spacing!r}")

    def points(self):
        if self.spacing == "log":
            return np.geomspace(self.r_min, self.r_max, self.count)
        return np.linspace(self.r_min, self.r_max, self.count)

    def integrate(self, f, r=None):
        """Composite Simpson of ``f`` over r (in ln r for log grids)."""
        r = self.points() if r is None else r
        if self.spacing == "log":
            return float(simpson(f * r, x=np.log(r)))
        return float(simpson(f, x=r))


@dataclass(frozen=True)
class SampledWavefunction:
    grid: RadialGrid
    r: np.ndarray
    values: np.ndarray
    node_count: int
    norm: float = 1.0


def log_psi(state, r):
    """``log|psi|`` and ``sign(psi)`` of the normal-form solution at radii r."""
    exps = state.exponents
    tr = state.transform
    log_s, log_t, s, t = tr.log_s_t(r)
    if exps.branch is Branch.LAGUERRE:
        poly = laguerre_L(state.n, exps.k, exps.z_scale * s)
        base = -exps.p * s + exps.q * log_s
    else:
        poly = jacobi_P(state.n, exps.alpha, exps.beta, 2.0 * t - 1.0)
        base = exps.q * log_s - exps.p * log_t
    poly = np.asarray(poly, dtype=float)
    with np.errstate(divide="ignore"):
        return base + np.log(np.abs(poly)), np.sign(poly)


def radial_values(state, r):
    """R(r) with unit prefactor; divides by r when the unknown was u = rR."""
    r = np.asarray(r, dtype=float)
    log_abs, sign = log_psi(state, r)
    if state.transform.uses_u_substitution:
        log_abs = log_abs - np.log(r)
    return sign * np.exp(log_abs)


def count_nodes(values, deadband=NODE_DEADBAND):
    """Strict sign changes, ignoring samples below ``deadband * max|values|``."""
    values = np.asarray(values, dtype=float)
    peak = np.max(np.abs(values)) if values.size else 0.0
    if peak == 0.0:
        return 0
    kept = values[np.abs(values) > deadband * peak]
    signs = np.sign(kept)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def decay_rate(state):
    """Asymptotic e-folding rate of u(r) at large r (1/length)."""
    exps, tr = state.exponents, state.transform
    if exps.branch is Branch.LAGUERRE:
        return exps.p
    if tr.kind == "hulthen_s":
        return -exps.p * tr.scale
    if tr.kind == "woods_saxon_s":
        return exps.q * tr.scale
    sigma = exps.q - exps.p + state.n
    return -2.0 * sigma * tr.scale


def default_grid(state, count=4001):
    """Log grid from 1e-6 length scales out to where |u| <= 1e-10 of its peak."""
    length = state.spec.length_scale(state.mass)
    r_min = 1e-6 * length
    rate = decay_rate(state)
    if not rate > 0:
        raise NonDecayingTail(f"state has non-positive decay rate {rate!r}")
    r_max = max(20.0 * length, 40.0 / rate) + state.transform.shift
    for _ in range(60):
        grid = RadialGrid(r_min, r_max, count)
        r = grid.points()
        u = np.abs(radial_values(state, r) * r)
        if u[-1] <= TAIL_RATIO * np.max(u):
            return grid
        r_max *= 1.5
    raise NonDecayingTail("could not find a grid on which the state decays")


def evaluate(state, grid=None):
    """Sample R(r) of ``state`` on ``grid`` (unnormalized, prefactor 1).

    With ``grid=None`` a default grid is built and extended until the tail
    criterion holds.
    """
    grid = default_grid(state) if grid is None else grid
    r = grid.points()
    state.transform.s_of_r(r)
    values = radial_values(state, r)
    return SampledWavefunction(grid, r, values, count_nodes(values))


def normalize(wf):
    """Scale so that ``int |R|^2 r^2 dr = 1``; ``norm`` accumulates the factor."""
    u = np.abs(wf.values * wf.r)
    peak = np.max(u)
    if not peak > 0:
        raise TrivialSolution("cannot normalize a vanishing function")
    if u[-1] > 1e-6 * peak:
        raise NonDecayingTail(f"|u(r_max)| / max|u| = {u[-1] / peak:.3g}")
    integral = wf.grid.integrate(wf.values**2 * wf.r**2, wf.r)
    factor = 1.0 / math.sqrt(integral)
    return replace(wf, values=wf.values * factor, norm=wf.norm * factor)


def normalized_state(state, grid=None):
    """``state`` with ``norm_constant`` filled in, plus its sampled form."""
    wf = normalize(evaluate(state, grid))
    return replace(state, norm_constant=wf.norm), wf


def inner_product(wf_a, wf_b):
    """``int R_a R_b r^2 dr`` for two functions sampled on the same grid."""
    if wf_a.grid != wf_b.grid:
        raise InvalidParameters("wavefunctions live on different grids")
    return wf_a.grid.integrate(wf_a.values * wf_b.values * wf_a.r**2, wf_a.r)


# -- residual of the normal-form ODE ----------------------------------------


def psi_of_s(state):
    """The normal-form solution as a function of ``(s, t)``, t = 1 + c3 s.

    Taking t separately keeps stencil points next to s = -1/c3 exact.
    """
    exps, params = state.exponents, state.params
    n = state.n

    if exps.branch is Branch.LAGUERRE:
        def psi(s, t=None):
            s = np.asarray(s, dtype=float)
            return np.exp(-exps.p * s) * s**exps.q * laguerre_L(n, exps.k, exps.z_scale * s)
    else:
        def psi(s, t):
            s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
            return (np.abs(t) ** -exps.p * np.abs(s) ** exps.q
                    * jacobi_P(n, exps.alpha, exps.beta, 2.0 * t - 1.0))
    return psi


def relative_ode_residual(psi, params, s, h, t=None):
    """Max over points of |LHS| / (|psi''| + |P psi'| + |Q psi|).

    ``psi(s, t)`` is sampled on five-point central stencils with per-point
    steps ``h``; ``t = 1 + c3 s`` may be supplied to avoid cancellation.
    """
    s = np.asarray(s, dtype=float)
    h = np.asarray(h, dtype=float)
    t = 1.0 + params.c3 * s if t is None else np.asarray(t, dtype=float)
    c3 = params.c3
    f = {k: psi(s + k * h, t + c3 * k * h) for k in (-2, -1, 0, 1, 2)}
    d1 = (-f[2] + 8 * f[1] - 8 * f[-1] + f[-2]) / (12 * h)
    d2 = (-f[2] + 16 * f[1] - 30 * f[0] + 16 * f[-1] - f[-2]) / (12 * h * h)
    p_coef = (params.c1 + params.c2 * s) / (s * t)
    q_coef = (-params.lambda1 * s * s + params.lambda2 * s - params.lambda3) / (s * s * t * t)
    terms = np.abs(d2) + np.abs(p_coef * d1) + np.abs(q_coef * f[0])
    if not np.any(terms > 0):
        raise TrivialSolution("function vanishes on every test point")
    lhs = np.abs(d2 + p_coef * d1 + q_coef * f[0])
    mask = terms > 0
    return float(np.max(lhs[mask] / terms[mask]))


def residual_points(state, grid=None, count=200, rel_step=5e-3):
    """Interior ``(s, t)`` points (where |u| >= 1e-8 of peak) and FD steps."""
    grid = default_grid(state) if grid is None else grid
    r = grid.points()[1:-1]
    u = np.abs(radial_values(state, r) * r)
    keep = u >= 1e-8 * np.max(u)
    r = r[keep]
    idx = np.unique(np.linspace(0, len(r) - 1, min(count, len(r))).astype(int))
    r = r[idx]
    _, _, s, t = state.transform.log_s_t(r)
    exps, params = state.exponents, state.params
    scale = np.abs(s)
    if params.c3 != 0:
        scale = np.minimum(scale, np.abs(t / params.c3))
    else:
        scale = np.minimum(scale, 1.0 / max(exps.z_scale, 1e-300))
    return s, t, rel_step * scale / (state.n + 1)


def ode_residual(state, grid=None, count=200, rel_step=5e-3):
    """Relative residual of the normal-form ODE along the state's s-range."""
    s, t, h = residual_points(state, grid, count, rel_step)
    return relative_ode_residual(psi_of_s(state), state.params, s, h, t)
