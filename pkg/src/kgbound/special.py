"""Jacobi and associated Laguerre polynomials for real parameters.

Both families are evaluated with their three-term recurrences, which stay
accurate for non-integer and negative parameters and for arguments far
outside the orthogonality interval.  The explicit hypergeometric sum is used
only when the Jacobi recurrence has a vanishing denominator.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateRecurrence, NonpositiveArgument

# |alpha + beta + m| below this, for an integer m that zeroes a recurrence
# denominator, switches jacobi_P to the finite sum.
DEGENERATE_WINDOW = 1e-9


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    return int(n)


def _as_output(value, z):
    if np.ndim(z) == 0:
        return float(value)
    return value


def jacobi_is_degenerate(n, alpha, beta):
    """True when the recurrence for degree ``n`` divides by (nearly) zero.

    Step k (1 <= k < n) divides by ``(k + a + b + 1)`` and ``(2k + a + b)``.
    """
    ab = alpha + beta
    for k in range(1, n):
        if abs(ab + k + 1) < DEGENERATE_WINDOW or abs(ab + 2 * k) < DEGENERATE_WINDOW:
            return True
    return False


def _series(n, alpha, beta, w):
    total = np.zeros_like(w)
    for m in range(n + 1):
        coef = 1.0
        for j in range(m):
            coef *= (-n + j) * (n + alpha + beta + 1 + j) / (j + 1)
        for j in range(n - m):
            coef *= alpha + m + 1 + j
        total = total + coef * w**m
    return total / math.factorial(n)


def jacobi_sum(n, alpha, beta, z):
    """Jacobi polynomial from its terminating hypergeometric series.

    Written with rising factorials only, so it is finite for every real
    ``alpha`` and ``beta``::

        P_n(z) = sum_m (-n)_m (n+a+b+1)_m (a+m+1)_(n-m) / (m! n!) ((1-z)/2)^m

    Points with z < 0 use the reflection P_n^(a,b)(z) = (-1)^n P_n^(b,a)(-z),
    which keeps the expansion variable small near z = -1.
    """
    n = _check_degree(n)
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    upper = z >= 0
    out[upper] = _series(n, alpha, beta, (1.0 - z[upper]) / 2.0)
    out[~upper] = (-1) ** n * _series(n, beta, alpha, (1.0 + z[~upper]) / 2.0)
    return _as_output(out, z)


def jacobi_P(n, alpha, beta, z):
    """Jacobi polynomial P_n^(alpha, beta)(z) for real parameters.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    alpha, beta : float
        Real parameters; need not exceed -1.
    z : float or array_like
        Evaluation point(s); any real value.

    Returns
    -------
    float or numpy.ndarray
        Same shape as ``z``.
    """
    n = _check_degree(n)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ValueError("Jacobi parameters must be finite")
    z = np.asarray(z, dtype=float)
    if n == 0:
        return _as_output(np.ones_like(z), z)
    if jacobi_is_degenerate(n, alpha, beta):
        return jacobi_sum(n, alpha, beta, z)

    a, b = alpha, beta
    p_prev = np.ones_like(z)
    p_curr = (a + 1.0) + (a + b + 2.0) * (z - 1.0) / 2.0
    for k in range(1, n):
        c = 2 * k + a + b
        den = 2.0 * (k + 1) * (k + a + b + 1) * c
        if den == 0.0:
            raise DegenerateRecurrence(f"zero denominator at k={k}")
        a1 = (c + 1) * ((c + 2) * c * z + a * a - b * b)
        a2 = 2.0 * (k + a) * (k + b) * (c + 2)
        p_prev, p_curr = p_curr, (a1 * p_curr - a2 * p_prev) / den
    return _as_output(p_curr, z)


def laguerre_L(n, k, z):
    """Associated Laguerre polynomial L_n^k(z) by upward recurrence.

    ``(j+1) L_{j+1} = (2j + k + 1 - z) L_j - (j + k) L_{j-1}``
    """
    n = _check_degree(n)
    if not math.isfinite(k):
        raise ValueError("Laguerre order must be finite")
    z = np.asarray(z, dtype=float)
    l_prev = np.ones_like(z)
    if n == 0:
        return _as_output(l_prev, z)
    l_curr = 1.0 + k - z
    for j in range(1, n):
        l_prev, l_curr = l_curr, ((2 * j + k + 1 - z) * l_curr - (j + k) * l_prev) / (j + 1)
    return _as_output(l_curr, z)


def log_gamma(x):
    """Natural log of the Gamma function for ``x > 0``."""
    if not x > 0:
        raise NonpositiveArgument(f"log_gamma needs x > 0, got {x!r}")
    return math.lgamma(x)
