"""Normal-form ODE and its algebraic bound-state conditions.

Every radial problem handled by kgbound is first brought to

    psi'' + (c1 + c2 s) / (s (1 + c3 s)) psi'
          + (-L1 s^2 + L2 s - L3) / (s^2 (1 + c3 s)^2) psi = 0

For ``c3 != 0`` the bound states are
``(1 + c3 s)^-p s^q P_n^(alpha, beta)(1 + 2 c3 s)``; for ``c3 == 0`` they are
``exp(-p s) s^q L_n^k((2p - c2) s)``.  This module holds the exponent
formulas, the polynomial parameters and the two quantization conditions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import BranchMismatch, NegativeDiscriminant, NonpositiveScale, ZeroC3


class Branch(str, enum.Enum):
    JACOBI = "jacobi"
    LAGUERRE = "laguerre"


@dataclass(frozen=True)
class OdeParameters:
    """The six constants of the normal form (bracket is -L1 s^2 + L2 s - L3)."""

    c1: float
    c2: float
    c3: float
    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "lambda1", "lambda2", "lambda3"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")

    @property
    def branch(self):
        return Branch.LAGUERRE if self.c3 == 0 else Branch.JACOBI

    def coefficients(self, s):
        """First-derivative and potential coefficients ``(P(s), Q(s))``."""
        t = 1.0 + self.c3 * s
        p_coef = (self.c1 + self.c2 * s) / (s * t)
        q_coef = (-self.lambda1 * s * s + self.lambda2 * s - self.lambda3) / (s * s * t * t)
        return p_coef, q_coef


@dataclass(frozen=True)
class ExponentSolution:
    """Exponents of the factorized ansatz plus the polynomial parameters.

    Jacobi branch fills ``alpha``/``beta``; Laguerre branch fills ``k`` and
    ``z_scale``.  The unused fields are ``None``.
    """

    branch: Branch
    q: float
    p: float
    alpha: float | None = None
    beta: float | None = None
    k: float | None = None
    z_scale: float | None = None


@dataclass(frozen=True)
class QuantizationResidual:
    value: float
    n: int
    branch: Branch


def _signed_root(centre, disc, sign, what):
    if disc < 0:
        raise NegativeDiscriminant(f"{what}: discriminant {disc:.6g} < 0")
    if sign not in (1, -1):
        raise ValueError(f"root sign must be +1 or -1, got {sign!r}")
    return centre + sign * math.sqrt(disc)


def origin_exponents(params):
    """Both roots of the indicial equation at s = 0, ``(lower, upper)``."""
    centre = (1.0 - params.c1) / 2.0
    disc = centre * centre + params.lambda3
    if disc < 0:
        raise NegativeDiscriminant(f"q: discriminant {disc:.6g} < 0")
    root = math.sqrt(disc)
    return centre - root, centre + root


def jacobi_d_h(params):
    """The shifted constants D and H entering the p-exponent."""
    c1, c2, c3 = params.c1, params.c2, params.c3
    d = c2 / c3 - c1 - 1.0
    h = params.lambda1 / (c3 * c3) + params.lambda2 / c3 + params.lambda3
    return d, h


def solve_exponents_jacobi(params, q_sign=1, p_sign=1):
    """Exponents and Jacobi parameters for ``c3 != 0``.

    Parameters
    ----------
    params : OdeParameters
    q_sign, p_sign : {+1, -1}
        Which root of each quadratic to take.  The defaults are the ``+``
        roots; physical mappings in :mod:`kgbound.potentials` override them
        according to where r = 0 and r = inf land in s.

    Raises
    ------
    ZeroC3
        ``params.c3 == 0``; use :func:`solve_exponents_laguerre`.
    NegativeDiscriminant
        Either exponent is complex.
    """
    if params.c3 == 0:
        raise ZeroC3("c3 == 0: use the Laguerre branch")
    c1, c2, c3 = params.c1, params.c2, params.c3
    centre = (1.0 - c1) / 2.0
    q = _signed_root(centre, centre * centre + params.lambda3, q_sign, "q")
    d, h = jacobi_d_h(params)
    p = _signed_root(d / 2.0, d * d / 4.0 + h, p_sign, "p")
    alpha = 2.0 * q + c1 - 1.0
    beta = -2.0 * p - c1 + c2 / c3 - 1.0
    return ExponentSolution(Branch.JACOBI, q=q, p=p, alpha=alpha, beta=beta)


def solve_exponents_laguerre(params):
    """Exponents and Laguerre order for ``c3 == 0`` (``+`` roots)."""
    if params.c3 != 0:
        raise BranchMismatch("c3 != 0: use the Jacobi branch")
    c1, c2 = params.c1, params.c2
    centre = (1.0 - c1) / 2.0
    q = _signed_root(centre, centre * centre + params.lambda3, 1, "q")
    p = _signed_root(c2 / 2.0, c2 * c2 / 4.0 + params.lambda1, 1, "p")
    z_scale = 2.0 * p - c2
    if not z_scale > 0:
        raise NonpositiveScale(f"2p - c2 = {z_scale:.6g} is not positive")
    k = c1 + 2.0 * q - 1.0
    return ExponentSolution(Branch.LAGUERRE, q=q, p=p, k=k, z_scale=z_scale)


def solve_exponents(params, q_sign=1, p_sign=1):
    if params.c3 == 0:
        return solve_exponents_laguerre(params)
    return solve_exponents_jacobi(params, q_sign, p_sign)


def quantization_residual_jacobi(params, exp, n):
    """Left minus right side of the Jacobi energy condition.

    ``(q-p)^2 + (c2/c3 + 2n - 1)(q-p) + n(n + c2/c3 - 1) - L1/c3^2``
    """
    if exp.branch is not Branch.JACOBI or params.c3 == 0:
        raise BranchMismatch("Jacobi residual needs Jacobi exponents and c3 != 0")
    if n < 0:
        raise ValueError("n must be non-negative")
    ratio = params.c2 / params.c3
    x = exp.q - exp.p
    value = x * x + (ratio + 2 * n - 1) * x + n * (n + ratio - 1) - params.lambda1 / params.c3**2
    return QuantizationResidual(value, n, Branch.JACOBI)


def quantization_residual_laguerre(params, exp, n):
    """``c1 p - q (c2 - 2p) - L2 - n (c2 - 2p)``; zero at an eigenvalue."""
    if exp.branch is not Branch.LAGUERRE or params.c3 != 0:
        raise BranchMismatch("Laguerre residual needs Laguerre exponents and c3 == 0")
    if n < 0:
        raise ValueError("n must be non-negative")
    c1, c2 = params.c1, params.c2
    p, q = exp.p, exp.q
    value = c1 * p - q * (c2 - 2 * p) - params.lambda2 - n * (c2 - 2 * p)
    return QuantizationResidual(value, n, Branch.LAGUERRE)


def quantization_residual(params, exp, n):
    if exp.branch is Branch.JACOBI:
        return quantization_residual_jacobi(params, exp, n)
    return quantization_residual_laguerre(params, exp, n)


def infinity_exponents(params):
    """Roots ``(lower, upper)`` of the indicial equation at s = inf (c3 != 0).

    A Jacobi-branch solution of degree n behaves as ``s^(q - p + n)`` there,
    so the energy condition says ``q - p + n`` is one of these roots.
    """
    ratio = params.c2 / params.c3
    b = ratio - 1.0
    disc = b * b + 4.0 * params.lambda1 / params.c3**2
    if disc < 0:
        raise NegativeDiscriminant(f"infinity exponent discriminant {disc:.6g} < 0")
    root = math.sqrt(disc)
    return (-b - root) / 2.0, (-b + root) / 2.0
