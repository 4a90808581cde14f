"""Barotropic equation of state P = A rho^gamma (1 + Lambda(A rho^(gamma-1))).

The correction Lambda is any smooth function with Lambda(0) = 0; the default
is identically zero, in which case pressure, enthalpy and the pressure
potential all have closed forms:

    P   = A rho^gamma
    u   = A gamma / (gamma - 1) rho^(gamma - 1)
    Psi = P / (gamma - 1)

All state functions return exactly 0 in vacuum (rho = 0, or u <= 0 for the
inversion); negative densities are rejected.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError, NumericError

_QUAD_EPSABS = 1e-14
_QUAD_EPSREL = 1e-10


@dataclass(frozen=True)
class GasLaw:
    """Pressure law parameters.

    Parameters
    ----------
    A : float
        Pressure constant, > 0.
    gamma : float
        Adiabatic exponent; the physical range is 1 < gamma < 2, and the
        boundary gamma = 2 is accepted for test configurations. Values
        outside (1, 2) raise a warning but are not rejected beyond
        gamma > 1.
    lambda_fn, lambda_deriv : callable, optional
        Smooth correction Lambda(s) with Lambda(0) = 0 and its derivative
        Lambda'(s), both functions of s = A rho^(gamma - 1). Supply both or
        neither. The law must keep dP/drho > 0; construction samples a log
        grid of densities and fails if monotonicity is violated there.
    """

    A: float
    gamma: float
    lambda_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    lambda_deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None
    check_rho_max: float = field(default=1e6, repr=False)

    def __post_init__(self):
        if not (self.A > 0):
            raise DomainError(f"pressure constant A must be positive, got {self.A}")
        if not (self.gamma > 1.0):
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")
        if self.gamma > 2.0:
            warnings.warn(
                f"gamma = {self.gamma} is outside the physical range (1, 2]",
                stacklevel=2,
            )
        if (self.lambda_fn is None) != (self.lambda_deriv is None):
            raise DomainError("lambda_fn and lambda_deriv must be supplied together")
        if self.lambda_fn is not None:
            rho = np.geomspace(1e-8, self.check_rho_max, 200)
            if np.any(dpressure_drho(self, rho) <= 0.0):
                raise DomainError(
                    "supplied Lambda violates dP/drho > 0 on the sample grid"
                )

    @property
    def has_correction(self) -> bool:
        return self.lambda_fn is not None

    def s_of(self, rho):
        """Correction argument s = A rho^(gamma - 1)."""
        return self.A * np.asarray(rho, dtype=float) ** (self.gamma - 1.0)

    # -- config round trip -------------------------------------------------

    def to_config(self) -> dict:
        """Serialize to the toolkit config mapping.

        Only the polynomial correction class survives serialization:
        ``lambda`` is either ``"none"`` or a list [c1, c2, ...] meaning
        Lambda(s) = c1 s + c2 s^2 + ... (no constant term, so Lambda(0) = 0).
        """
        cfg = {"A": self.A, "gamma": self.gamma, "lambda": "none"}
        coeffs = getattr(self.lambda_fn, "poly_coeffs", None)
        if self.lambda_fn is not None:
            if coeffs is None:
                raise DomainError(
                    "only polynomial Lambda corrections are serializable"
                )
            cfg["lambda"] = list(coeffs)
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "GasLaw":
        lam = cfg.get("lambda", "none")
        if lam == "none" or lam is None:
            return cls(A=float(cfg["A"]), gamma=float(cfg["gamma"]))
        fn, deriv = polynomial_correction(lam)
        return cls(
            A=float(cfg["A"]), gamma=float(cfg["gamma"]),
            lambda_fn=fn, lambda_deriv=deriv,
        )


def polynomial_correction(coeffs):
    """Build (Lambda, Lambda') for Lambda(s) = sum_k coeffs[k] s^(k+1)."""
    coeffs = [float(c) for c in coeffs]

    def lam(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for k, c in enumerate(coeffs):
            out = out + c * s ** (k + 1)
        return out

    def dlam(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for k, c in enumerate(coeffs):
            out = out + (k + 1) * c * s**k
        return out

    lam.poly_coeffs = coeffs
    return lam, dlam


def _check_rho(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("density must be non-negative")
    return rho


def pressure(law: GasLaw, rho):
    """Pressure P(rho) = A rho^gamma (1 + Lambda(A rho^(gamma-1)))."""
    rho = _check_rho(rho)
    base = law.A * rho**law.gamma
    if law.has_correction:
        base = base * (1.0 + law.lambda_fn(law.s_of(rho)))
    return base if base.ndim else float(base)


def dpressure_drho(law: GasLaw, rho):
    """Squared sound speed dP/drho."""
    rho = _check_rho(rho)
    g = law.gamma
    out = law.A * g * rho ** (g - 1.0)
    if law.has_correction:
        s = law.s_of(rho)
        out = out * (1.0 + law.lambda_fn(s)) + (
            law.A**2 * (g - 1.0) * rho ** (2.0 * (g - 1.0)) * law.lambda_deriv(s)
        )
    return out if out.ndim else float(out)


def enthalpy(law: GasLaw, rho):
    """Specific enthalpy u(rho) = int_0^rho dP / rho.

    With the substitution s = A rho^(gamma-1) the integrand loses its
    1/rho weight:

        u = 1/(gamma-1) * int_0^s [gamma (1 + Lambda) + sigma Lambda'] dsigma,

    which the general-Lambda branch integrates adaptively (abs 1e-14,
    rel 1e-10); the Lambda = 0 branch is the closed form.
    """
    rho = _check_rho(rho)
    g = law.gamma
    if not law.has_correction:
        out = law.A * g / (g - 1.0) * rho ** (g - 1.0)
        return out if out.ndim else float(out)

    def integrand(sigma):
        return (g * (1.0 + law.lambda_fn(sigma)) + sigma * law.lambda_deriv(sigma)) / (
            g - 1.0
        )

    def one(r):
        if r == 0.0:
            return 0.0
        s = law.A * r ** (g - 1.0)
        val, _ = quad(integrand, 0.0, s, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL)
        return val

    if rho.ndim == 0:
        return one(float(rho))
    return np.array([one(r) for r in rho.ravel()]).reshape(rho.shape)


def psi(law: GasLaw, rho):
    """Pressure potential Psi(rho) = int_0^rho u drho.

    Integration by parts reduces it to Psi = rho u - P exactly, which the
    general branch uses; for Lambda = 0 this equals P / (gamma - 1).
    """
    rho = _check_rho(rho)
    if not law.has_correction:
        out = law.A * rho**law.gamma / (law.gamma - 1.0)
        return out if out.ndim else float(out)
    return rho * enthalpy(law, rho) - pressure(law, rho)


def density_from_enthalpy(law: GasLaw, u):
    """Invert the enthalpy: rho(u) with vacuum truncation.

    Returns [(gamma-1) max(u, 0) / (A gamma)]^(1/(gamma-1)) for the exact
    power law; the general-Lambda branch root-finds enthalpy(rho) = u.
    Any u <= 0 maps to rho = 0.
    """
    u = np.asarray(u, dtype=float)
    g = law.gamma
    if not law.has_correction:
        out = ((g - 1.0) * np.maximum(u, 0.0) / (law.A * g)) ** (1.0 / (g - 1.0))
        return out if out.ndim else float(out)

    def one(val):
        if val <= 0.0:
            return 0.0
        # bracket by the closed-form guess, then expand
        guess = ((g - 1.0) * val / (law.A * g)) ** (1.0 / (g - 1.0))
        lo, hi = guess, guess
        for _ in range(200):
            if enthalpy(law, lo) <= val:
                break
            lo *= 0.5
        else:
            raise NumericError(f"no lower bracket for u = {val}")
        for _ in range(200):
            if enthalpy(law, hi) >= val:
                break
            hi *= 2.0
        else:
            raise NumericError(f"no upper bracket for u = {val}")
        if lo == hi:
            return lo
        try:
            return brentq(lambda r: enthalpy(law, r) - val, lo, hi, xtol=1e-300,
                          rtol=8.9e-16, maxiter=300)
        except RuntimeError as exc:  # pragma: no cover - brentq rarely fails
            raise NumericError(
                f"enthalpy inversion failed for u = {val}: {exc}"
            ) from exc

    if u.ndim == 0:
        return one(float(u))
    return np.array([one(v) for v in u.ravel()]).reshape(u.shape)
