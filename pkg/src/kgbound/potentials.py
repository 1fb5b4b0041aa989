"""Physical potentials and their reduction to the normal-form ODE.

Each potential maps (mass m, trial energy E, angular momentum l) to an
:class:`~kgbound.framework.OdeParameters` in the normal-form convention plus
a :class:`VariableTransform` that records s(r), the s-domain, whether the
unknown is R(r) or u(r) = r R(r), and which exponent roots are physical.

All Lambda lists below were derived directly from the radial Klein-Gordon
equation ``u'' + [(E - V)^2 - (m + S)^2 - l(l+1)/r^2] u = 0`` through the
stated change of variable.

Root selection
--------------
The exponent quadratics have two roots each.  Which one is physical depends
on where r = 0 and r = inf land in s:

========== ================= ================== =========================
kind       r = 0             r = inf            roots (q, p, at s = inf)
========== ================= ================== =========================
identity_r s = 0             s = inf            q+, p+ (Laguerre branch)
hulthen_s  s = inf (q = 1)   s = 1              q-, p-, lower
woods_s    s < 1 (regular)   s = 0              q+, p-, --
cosh_sq    s = 1             s = inf            q-, p-, lower
========== ================= ================== =========================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import ClassVar

import numpy as np

from .errors import (
    HulthenDeformationUnsupported,
    InvalidParameters,
    TransformDomainViolation,
    UnsupportedCoupling,
)
from .framework import OdeParameters

VECTOR = "vector"
EQUAL = "equal"
MIXED = "mixed"


def _require(condition, message):
    if not condition:
        raise InvalidParameters(message)


def _finite(spec):
    for name, value in vars(spec).items():
        if isinstance(value, float | int) and not math.isfinite(value):
            raise InvalidParameters(f"{type(spec).__name__}.{name} must be finite")


@dataclass(frozen=True)
class PotentialSpec:
    """Base class; subclasses are the seven supported potentials."""

    kind: ClassVar[str] = ""
    supported_coupling: ClassVar[str] = EQUAL
    approximated_centrifugal: ClassVar[bool] = False
    parameter_docs: ClassVar[dict] = {}

    def __post_init__(self):
        _finite(self)
        if self.coupling != self.supported_coupling:
            raise UnsupportedCoupling(
                f"{self.kind} supports only '{self.supported_coupling}' coupling,"
                f" got '{self.coupling}'"
            )
        self.validate()

    def validate(self):
        pass

    def vector(self, r):
        raise NotImplementedError

    def scalar(self, r):
        return self.vector(r)

    def length_scale(self, m):
        return 1.0 / m

    def to_dict(self):
        out = {"kind": self.kind}
        out.update({k: v for k, v in vars(self).items() if k != "coupling"})
        return out


@dataclass(frozen=True)
class Coulomb(PotentialSpec):
    """Vector Coulomb ``V = -Z alpha / r`` with no scalar part."""

    kind: ClassVar[str] = "coulomb"
    parameter_docs: ClassVar[dict] = {"z_alpha": "coupling Z alpha (dimensionless), 0 <= Z alpha < l + 1/2"}
    supported_coupling: ClassVar[str] = VECTOR
    z_alpha: float
    coupling: str = VECTOR

    def vector(self, r):
        return -self.z_alpha / r

    def scalar(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def length_scale(self, m):
        """Bohr radius ``1 / (m Z alpha)``."""
        return 1.0 / (m * self.z_alpha) if self.z_alpha > 0 else 1.0 / m


@dataclass(frozen=True)
class Mie(PotentialSpec):
    """``V = V0 [ (a/r)^2 / 2 - a/r ]`` with S = V."""

    kind: ClassVar[str] = "mie"
    parameter_docs: ClassVar[dict] = {"v0": "strength V0 (energy)", "a": "range a > 0 (length)"}
    v0: float
    a: float
    coupling: str = EQUAL

    def validate(self):
        _require(self.a > 0, "Mie: a must be positive")

    def vector(self, r):
        x = self.a / r
        return self.v0 * (0.5 * x * x - x)

    def length_scale(self, m):
        return self.a


@dataclass(frozen=True)
class KratzerFues(PotentialSpec):
    """``V = Ve (r - re)^2 / r^2`` with S = V."""

    kind: ClassVar[str] = "kratzer"
    parameter_docs: ClassVar[dict] = {"ve": "dissociation energy Ve (energy)", "re": "equilibrium distance re > 0 (length)"}
    ve: float
    re: float
    coupling: str = EQUAL

    def validate(self):
        _require(self.re > 0, "Kratzer-Fues: re must be positive")

    def vector(self, r):
        return self.ve * (r - self.re) ** 2 / (r * r)

    def length_scale(self, m):
        return self.re


@dataclass(frozen=True)
class NonCentralRadial(PotentialSpec):
    """Radial part ``alpha_c / r`` of the non-central potential, S = V.

    The angular piece is folded into the separation constant ``lambda_sep``,
    which plays the role of l(l+1) in the radial equation.
    """

    kind: ClassVar[str] = "noncentral"
    parameter_docs: ClassVar[dict] = {"alpha_c": "Coulomb-like strength (energy x length)", "lambda_sep": "angular separation constant (replaces l(l+1)), >= -1/4"}
    alpha_c: float
    lambda_sep: float
    coupling: str = EQUAL

    def validate(self):
        _require(self.lambda_sep >= -0.25, "non-central: lambda_sep must be >= -1/4")

    def vector(self, r):
        return self.alpha_c / r

    def length_scale(self, m):
        return 1.0 / (m * abs(self.alpha_c)) if self.alpha_c != 0 else 1.0 / m


@dataclass(frozen=True)
class Hulthen(PotentialSpec):
    """Generalized Hulthen ``-V0 e^(-delta r) / (1 - q e^(-delta r))``.

    The scalar part has the same shape with depth ``s0``.
    """

    kind: ClassVar[str] = "hulthen"
    parameter_docs: ClassVar[dict] = {"v0": "vector depth V0 (energy)", "s0": "scalar depth S0 (energy)", "delta": "screening parameter delta > 0 (1/length)", "q_def": "deformation q, nonzero and <= 1; l > 0 needs q = 1"}
    supported_coupling: ClassVar[str] = MIXED
    approximated_centrifugal: ClassVar[bool] = True
    v0: float
    s0: float
    delta: float
    q_def: float = 1.0
    coupling: str = MIXED

    def validate(self):
        _require(self.q_def != 0, "Hulthen: q != 0 is the deformation parameter")
        _require(self.q_def <= 1, "Hulthen: q > 1 makes the potential singular at finite r")
        _require(self.delta > 0, "Hulthen: delta must be positive")

    def _shape(self, r):
        w = np.exp(-self.delta * np.asarray(r, dtype=float))
        if self.q_def == 1:
            return w / -np.expm1(-self.delta * np.asarray(r, dtype=float))
        return w / (1.0 - self.q_def * w)

    def vector(self, r):
        return -self.v0 * self._shape(r)

    def scalar(self, r):
        return -self.s0 * self._shape(r)

    def length_scale(self, m):
        return 1.0 / self.delta


def pekeris_coefficients(a, r_big, q_def=1.0):
    """Taylor-matched ``(D0, D1, D2)`` for ``1/r^2 ~ (D0 + D1 s + D2 s^2)/R^2``.

    Matches value, first and second r-derivative of ``R^2/r^2`` at r = R, with
    ``s = 1/(1 + q exp((r - R)/a))``.
    """
    nu = 1.0 / a
    s0 = 1.0 / (1.0 + q_def)
    ds = -nu * s0 * (1.0 - s0)
    d2s = nu * nu * s0 * (1.0 - s0) * (1.0 - 2.0 * s0)
    f0, fr, frr = 1.0, -2.0 / r_big, 6.0 / r_big**2
    fs = fr / ds
    fss = (frr - fs * d2s) / (ds * ds)
    d2 = fss / 2.0
    d1 = fs - fss * s0
    d0 = f0 - d1 * s0 - d2 * s0 * s0
    return d0, d1, d2


@dataclass(frozen=True)
class WoodsSaxon(PotentialSpec):
    """Deformed Woods-Saxon ``-V0 / (1 + q e^((r - R)/a))``, scalar depth ``s0``.

    ``d0, d1, d2`` are the Pekeris coefficients of the centrifugal
    approximation; left as ``None`` they are Taylor-matched at r = R.
    """

    kind: ClassVar[str] = "woods_saxon"
    parameter_docs: ClassVar[dict] = {"v0": "vector depth V0 (energy)", "s0": "scalar depth S0 (energy)", "a": "diffuseness a > 0 (length)", "r_big": "radius R > 0 (length)", "q_def": "deformation q > 0", "d0": "Pekeris coefficient (default: matched at r = R)", "d1": "Pekeris coefficient (default: matched at r = R)", "d2": "Pekeris coefficient (default: matched at r = R)"}
    supported_coupling: ClassVar[str] = MIXED
    approximated_centrifugal: ClassVar[bool] = True
    v0: float
    s0: float
    a: float
    r_big: float
    q_def: float = 1.0
    d0: float | None = None
    d1: float | None = None
    d2: float | None = None
    coupling: str = MIXED

    def __post_init__(self):
        if self.a > 0 and self.r_big > 0 and self.q_def > 0:
            defaults = pekeris_coefficients(self.a, self.r_big, self.q_def)
            for name, value in zip(("d0", "d1", "d2"), defaults):
                if getattr(self, name) is None:
                    object.__setattr__(self, name, value)
        super().__post_init__()

    def validate(self):
        _require(self.a > 0, "Woods-Saxon: a must be positive")
        _require(self.r_big > 0, "Woods-Saxon: R must be positive")
        _require(self.q_def > 0, "Woods-Saxon: q must be positive")

    def shape(self, r):
        x = (np.asarray(r, dtype=float) - self.r_big) / self.a + math.log(self.q_def)
        return 0.5 * (1.0 - np.tanh(0.5 * x))

    def vector(self, r):
        return -self.v0 * self.shape(r)

    def scalar(self, r):
        return -self.s0 * self.shape(r)

    def length_scale(self, m):
        return self.a


@dataclass(frozen=True)
class PoschlTeller(PotentialSpec):
    """``V = -V1 / cosh^2(alpha r) + V2 / sinh^2(alpha r)`` with S = V."""

    kind: ClassVar[str] = "poschl_teller"
    parameter_docs: ClassVar[dict] = {"v1": "well depth V1 (energy)", "v2": "barrier strength V2 >= 0 (energy)", "alpha_pt": "range parameter alpha > 0 (1/length)"}
    approximated_centrifugal: ClassVar[bool] = True
    v1: float
    v2: float
    alpha_pt: float
    coupling: str = EQUAL

    def validate(self):
        _require(self.alpha_pt > 0, "Poschl-Teller: alpha must be positive")
        _require(self.v2 >= 0, "Poschl-Teller: V2 >= 0 is needed for regularity at r = 0")

    def vector(self, r):
        e2 = np.exp(-2.0 * self.alpha_pt * np.asarray(r, dtype=float))
        inv_cosh2 = 4.0 * e2 / (1.0 + e2) ** 2
        inv_sinh2 = 4.0 * e2 / np.expm1(-2.0 * self.alpha_pt * np.asarray(r, dtype=float)) ** 2
        return -self.v1 * inv_cosh2 + self.v2 * inv_sinh2

    def length_scale(self, m):
        return 1.0 / self.alpha_pt


CATALOG = {
    cls.kind: cls
    for cls in (Coulomb, Mie, KratzerFues, NonCentralRadial, Hulthen, WoodsSaxon, PoschlTeller)
}


def spec_from_dict(data):
    """Build a spec from ``{"kind": ..., **parameters}``."""
    data = dict(data)
    kind = data.pop("kind", None)
    if kind not in CATALOG:
        raise InvalidParameters(f"unknown potential kind {kind!r}")
    try:
        return CATALOG[kind](**data)
    except TypeError as exc:
        raise InvalidParameters(f"{kind}: {exc}") from None


# -- centrifugal approximations ----------------------------------------------


def centrifugal_hulthen(delta, r):
    """``delta^2 e^(-delta r) / (1 - e^(-delta r))^2``."""
    x = delta * np.asarray(r, dtype=float)
    den = np.expm1(-x)
    out = delta * delta * np.exp(-x) / (den * den)
    return float(out) if np.ndim(out) == 0 else out


def centrifugal_pekeris(spec, r):
    """``(D0 + D1 s + D2 s^2) / R^2`` with the Woods-Saxon s(r)."""
    s = spec.shape(r)
    out = (spec.d0 + spec.d1 * s + spec.d2 * s * s) / spec.r_big**2
    return float(out) if np.ndim(out) == 0 else out


def centrifugal_sinh(alpha_pt, r):
    """``alpha^2 / sinh^2(alpha r)``."""
    x = 2.0 * alpha_pt * np.asarray(r, dtype=float)
    out = 4.0 * alpha_pt**2 * np.exp(-x) / np.expm1(-x) ** 2
    return float(out) if np.ndim(out) == 0 else out


def centrifugal_approximation(spec, r):
    """The case's stand-in for 1/r^2, or exact 1/r^2 where none is used."""
    if isinstance(spec, Hulthen):
        return centrifugal_hulthen(spec.delta, r)
    if isinstance(spec, WoodsSaxon):
        return centrifugal_pekeris(spec, r)
    if isinstance(spec, PoschlTeller):
        return centrifugal_sinh(spec.alpha_pt, r)
    return 1.0 / np.asarray(r, dtype=float) ** 2


# -- variable transforms -----------------------------------------------------


@dataclass(frozen=True)
class VariableTransform:
    """How r maps to s, and which exponent roots are physical.

    ``log_s_t(r)`` returns ``log|s|``, ``log|t|``, ``s`` and ``t = 1 + c3 s``,
    each computed without cancellation near the endpoints.
    """

    kind: str
    s_domain: tuple[float, float]
    uses_u_substitution: bool
    c3: float = 0.0
    scale: float = 1.0
    shift: float = 0.0
    deform: float = 1.0
    q_sign: int = 1
    p_sign: int = 1
    sigma_root: str | None = None
    experimental: bool = False
    notes: tuple[str, ...] = field(default=())

    def log_s_t(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "identity_r":
            return np.log(r), np.zeros_like(r), r, np.ones_like(r)
        if self.kind == "hulthen_s":
            x = self.scale * r
            if self.deform == 1:
                one_minus = -np.expm1(-x)
            else:
                one_minus = 1.0 - self.deform * np.exp(-x)
            log_s = -np.log(one_minus)
            w = self.deform * np.exp(-x)
            log_t = math.log(abs(self.deform)) - x + log_s
            return log_s, log_t, 1.0 / one_minus, -w / one_minus
        if self.kind == "woods_saxon_s":
            x = self.scale * (r - self.shift) + math.log(self.deform)
            soft = np.logaddexp(0.0, x)
            return -soft, x - soft, np.exp(-soft), np.exp(x - soft)
        if self.kind == "cosh_squared":
            x = self.scale * r
            e2 = np.exp(-2.0 * x)
            log_s = 2.0 * (x + np.log1p(e2) - math.log(2.0))
            log_t = 2.0 * (x + np.log1p(-e2) - math.log(2.0))
            return log_s, log_t, np.cosh(x) ** 2, -np.sinh(x) ** 2
        raise ValueError(f"unknown transform kind {self.kind!r}")

    def s_of_r(self, r):
        s = self.log_s_t(r)[2]
        lo, hi = min(self.s_domain), max(self.s_domain)
        arr = np.atleast_1d(s)
        if np.any(arr < lo * (1 - 1e-12) - 1e-300) or np.any(arr > hi * (1 + 1e-12)):
            raise TransformDomainViolation(f"s(r) left the domain {self.s_domain}")
        return s

    def ds_dr(self, r):
        """Derivative ds/dr, used to map finite-difference steps."""
        r = np.asarray(r, dtype=float)
        _, _, s, _ = self.log_s_t(r)
        if self.kind == "identity_r":
            return np.ones_like(r)
        if self.kind == "hulthen_s":
            return self.scale * s * (1.0 - s)
        if self.kind == "woods_saxon_s":
            return -self.scale * s * (1.0 - s)
        return self.scale * np.sinh(2.0 * self.scale * r)


# -- mapping -----------------------------------------------------------------


def _transform_for(spec):
    if isinstance(spec, Hulthen):
        q = spec.q_def
        if q == 1:
            domain = (1.0, math.inf)
        else:
            domain = (1.0 / (1.0 - q), 1.0)
        return VariableTransform(
            "hulthen_s", domain, True, c3=-1.0, scale=spec.delta, deform=q,
            q_sign=-1, p_sign=-1, sigma_root="lower" if q == 1 else None,
            experimental=q != 1,
            notes=() if q == 1 else ("r = 0 is a regular point of the s-equation; "
                                     "u(0) = 0 is not enforced",),
        )
    if isinstance(spec, WoodsSaxon):
        s_origin = 1.0 / (1.0 + spec.q_def * math.exp(-spec.r_big / spec.a))
        return VariableTransform(
            "woods_saxon_s", (0.0, s_origin), True, c3=-1.0, scale=1.0 / spec.a,
            shift=spec.r_big, deform=spec.q_def, q_sign=1, p_sign=-1,
            notes=("solution extends the surface region to r -> -inf; "
                   "u(0) is exponentially small, not zero",),
        )
    if isinstance(spec, PoschlTeller):
        return VariableTransform(
            "cosh_squared", (1.0, math.inf), True, c3=-1.0, scale=spec.alpha_pt,
            q_sign=-1, p_sign=-1, sigma_root="lower",
        )
    return VariableTransform("identity_r", (0.0, math.inf), False)


def base_parameters(spec, m, E):
    """Normal-form parameters at l = 0 (exact for every case)."""
    if m <= 0:
        raise InvalidParameters("mass must be positive")
    e2 = E * E - m * m
    if isinstance(spec, Coulomb):
        za = spec.z_alpha
        return OdeParameters(2.0, 0.0, 0.0, -e2, 2.0 * E * za, -za * za)
    if isinstance(spec, Mie):
        g = (E + m) * spec.v0
        return OdeParameters(2.0, 0.0, 0.0, -e2, 2.0 * g * spec.a, g * spec.a**2)
    if isinstance(spec, KratzerFues):
        g = (E + m) * spec.ve
        return OdeParameters(2.0, 0.0, 0.0, 2.0 * g - e2, 4.0 * g * spec.re, 2.0 * g * spec.re**2)
    if isinstance(spec, NonCentralRadial):
        return OdeParameters(2.0, 0.0, 0.0, -e2, -2.0 * (E + m) * spec.alpha_c, spec.lambda_sep)
    if isinstance(spec, Hulthen):
        d2, q = spec.delta**2, spec.q_def
        a_ = (spec.s0**2 - spec.v0**2) / (d2 * q * q)
        b_ = (2.0 * m * spec.s0 + 2.0 * E * spec.v0) / (d2 * q)
        c_ = e2 / d2
        return OdeParameters(1.0, -2.0, -1.0, a_, 2.0 * a_ + b_, a_ + b_ - c_)
    if isinstance(spec, WoodsSaxon):
        a2 = spec.a**2
        return OdeParameters(
            1.0, -2.0, -1.0,
            (spec.s0**2 - spec.v0**2) * a2,
            2.0 * a2 * (E * spec.v0 + m * spec.s0),
            -a2 * e2,
        )
    if isinstance(spec, PoschlTeller):
        k2 = 4.0 * spec.alpha_pt**2
        g = (E + m) / (2.0 * spec.alpha_pt**2)
        return OdeParameters(
            0.5, -1.0, -1.0,
            -e2 / k2,
            -e2 / k2 - g * (spec.v2 - spec.v1),
            g * spec.v1,
        )
    raise InvalidParameters(f"unsupported potential {type(spec).__name__}")


def modified_parameters(base, spec, m, E, ell):
    """Add the angular-momentum term to l = 0 parameters.

    Exact for the ``c3 == 0`` cases; uses the case's centrifugal
    approximation for Hulthen, Woods-Saxon and Poschl-Teller.
    """
    if ell < 0 or int(ell) != ell:
        raise InvalidParameters("ell must be a non-negative integer")
    if ell == 0:
        return base
    big_l = ell * (ell + 1)
    if isinstance(spec, NonCentralRadial):
        raise InvalidParameters("non-central: the angular momentum lives in lambda_sep; use ell = 0")
    if isinstance(spec, Hulthen):
        if spec.q_def != 1:
            raise HulthenDeformationUnsupported("Hulthen with l > 0 requires q = 1")
        return replace(base, lambda1=base.lambda1 + big_l, lambda2=base.lambda2 + big_l)
    if isinstance(spec, WoodsSaxon):
        f = big_l * spec.a**2 / spec.r_big**2
        return replace(
            base,
            lambda1=base.lambda1 + f * spec.d2,
            lambda2=base.lambda2 - f * spec.d1,
            lambda3=base.lambda3 + f * spec.d0,
        )
    if isinstance(spec, PoschlTeller):
        return replace(base, lambda2=base.lambda2 - big_l / 4.0)
    return replace(base, lambda3=base.lambda3 + big_l)


def map_potential(spec, m, E, ell):
    """Normal-form parameters and variable transform for one trial energy."""
    if not math.isfinite(E):
        raise InvalidParameters("energy must be finite")
    params = modified_parameters(base_parameters(spec, m, E), spec, m, E, ell)
    return params, _transform_for(spec)
