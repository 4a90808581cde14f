"""Coordinate charts and velocity-component transforms.

Three charts cover the toolkit: Cartesian (x1, x2, x3), cylindrical
(w, phi, z) with w the distance from the rotation axis, and the
spherical-zeta chart (r, zeta, phi) with zeta = cos(theta) = z / r.

Axisymmetric velocity fields are carried by component triples rather than
Cartesian vectors: (V, Omega, W) in the cylindrical sense and
(v, w, Omega) in the (r, zeta) sense, where Omega is the angular velocity
d(phi)/dt in both charts. The component forms are genuinely singular on
the axis (w = 0) and at the poles (|zeta| = 1); operations there raise
ChartSingularityError instead of extending silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ChartSingularityError, DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CartPoint:
    x1: float
    x2: float
    x3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3], dtype=float)


@dataclass(frozen=True)
class CylPoint:
    w: float
    phi: float
    z: float

    def __post_init__(self):
        if self.w < 0:
            raise DomainError(f"cylindrical radius must be >= 0, got {self.w}")


@dataclass(frozen=True)
class RZetaPoint:
    r: float
    zeta: float
    phi: float

    def __post_init__(self):
        if self.r < 0:
            raise DomainError(f"radius must be >= 0, got {self.r}")
        if abs(self.zeta) > 1.0 + 1e-14:
            raise DomainError(f"zeta must lie in [-1, 1], got {self.zeta}")


@dataclass(frozen=True)
class CylVelocity:
    """Cylindrical components: V radial, Omega angular, W vertical."""

    V: float
    Omega: float
    W: float


@dataclass(frozen=True)
class RZetaVelocity:
    """(r, zeta) components: v = dr/dt, w = dzeta/dt, Omega = dphi/dt."""

    v: float
    w: float
    Omega: float


def _norm_phi(phi: float) -> float:
    return float(np.mod(phi, TWO_PI))


# -- point transforms -------------------------------------------------------


def cart_from_cyl(p: CylPoint) -> CartPoint:
    return CartPoint(p.w * math.cos(p.phi), p.w * math.sin(p.phi), p.z)


def cyl_from_cart(p: CartPoint) -> CylPoint:
    w = math.hypot(p.x1, p.x2)
    phi = _norm_phi(math.atan2(p.x2, p.x1)) if w > 0.0 else 0.0
    return CylPoint(w, phi, p.x3)


def cart_from_rzeta(p: RZetaPoint) -> CartPoint:
    s = math.sqrt(max(1.0 - p.zeta**2, 0.0))
    return CartPoint(
        p.r * s * math.cos(p.phi), p.r * s * math.sin(p.phi), p.r * p.zeta
    )


def rzeta_from_cart(p: CartPoint) -> RZetaPoint:
    r = math.sqrt(p.x1**2 + p.x2**2 + p.x3**2)
    if r == 0.0:
        return RZetaPoint(0.0, 0.0, 0.0)
    zeta = min(max(p.x3 / r, -1.0), 1.0)
    w = math.hypot(p.x1, p.x2)
    phi = _norm_phi(math.atan2(p.x2, p.x1)) if w > 0.0 else 0.0
    return RZetaPoint(r, zeta, phi)


# -- velocity transforms ----------------------------------------------------


def velocity_cart_from_cyl(vel: CylVelocity, p: CylPoint) -> np.ndarray:
    """Cartesian velocity ((V/w) x1 - Omega x2, (V/w) x2 + Omega x1, W)."""
    if p.w == 0.0:
        raise ChartSingularityError("cylindrical velocity components are singular on the axis")
    x = cart_from_cyl(p)
    a = vel.V / p.w
    return np.array(
        [a * x.x1 - vel.Omega * x.x2, a * x.x2 + vel.Omega * x.x1, vel.W]
    )


def velocity_cart_from_rzeta(vel: RZetaVelocity, p: RZetaPoint) -> np.ndarray:
    """Cartesian velocity of the (v, w, Omega) component triple."""
    if p.r == 0.0 or abs(p.zeta) >= 1.0:
        raise ChartSingularityError(
            "(r, zeta) velocity components are singular at r = 0 and |zeta| = 1"
        )
    x = cart_from_rzeta(p)
    a = vel.v / p.r - p.zeta * vel.w / (1.0 - p.zeta**2)
    return np.array(
        [
            a * x.x1 - vel.Omega * x.x2,
            a * x.x2 + vel.Omega * x.x1,
            p.zeta * vel.v + p.r * vel.w,
        ]
    )


def speed_squared(vel: RZetaVelocity, r: float, zeta: float) -> float:
    """|v|^2 = v^2 + r^2 w^2 / (1 - zeta^2) + r^2 (1 - zeta^2) Omega^2."""
    if abs(zeta) >= 1.0:
        raise ChartSingularityError("speed form is singular at |zeta| = 1")
    one_m = 1.0 - zeta**2
    return vel.v**2 + r**2 * vel.w**2 / one_m + r**2 * one_m * vel.Omega**2


def cyl_components_from_rzeta(vel: RZetaVelocity, p: RZetaPoint) -> CylVelocity:
    """Cylindrical (V, Omega, W) matching the same physical velocity.

    Composing through Cartesian components collapses to the closed form
    V = s v - r zeta w / s, W = zeta v + r w with s = sqrt(1 - zeta^2);
    Omega is chart invariant.
    """
    if p.r == 0.0 or abs(p.zeta) >= 1.0:
        raise ChartSingularityError(
            "(r, zeta) velocity components are singular at r = 0 and |zeta| = 1"
        )
    s = math.sqrt(1.0 - p.zeta**2)
    V = s * vel.v - p.r * p.zeta * vel.w / s
    W = p.zeta * vel.v + p.r * vel.w
    return CylVelocity(V=V, Omega=vel.Omega, W=W)


# -- equatorial reflection --------------------------------------------------

# parity of each field under z -> -z (zeta -> -zeta)
EQUATORIAL_PARITY_CYL = {"rho": +1, "V": +1, "Omega": +1, "W": -1, "Phi": +1}
EQUATORIAL_PARITY_RZETA = {"rho": +1, "v": +1, "w": -1, "Omega": +1, "Phi": +1}


def mirror_point_cyl(p: CylPoint) -> CylPoint:
    return CylPoint(p.w, p.phi, -p.z)


def mirror_point_rzeta(p: RZetaPoint) -> RZetaPoint:
    return RZetaPoint(p.r, -p.zeta, p.phi)


def mirror_velocity_cyl(vel: CylVelocity) -> CylVelocity:
    """Component values of the mirrored field at the mirrored point."""
    return CylVelocity(V=vel.V, Omega=vel.Omega, W=-vel.W)


def mirror_velocity_rzeta(vel: RZetaVelocity) -> RZetaVelocity:
    return RZetaVelocity(v=vel.v, w=-vel.w, Omega=vel.Omega)
