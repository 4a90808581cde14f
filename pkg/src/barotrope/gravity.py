"""Newton-potential kernels and potential operators for axisymmetric fields.

The azimuthal average of the Newton kernel over a ring reduces every
kernel here to one master integral,

    I(d_min, d_max) = int_0^{pi/2} dt / sqrt(d_min^2 cos^2 t + d_max^2 sin^2 t),

where d_min and d_max are the nearest and farthest distances from the
field point to the source ring. The cylindrical kernel K_I and the
(r, zeta) kernel K_II are both I / pi with the appropriate distances, so
they agree pointwise at corresponding physical points. The spherical
kernel K_III = min(1/r, 1/r') closes the family.

Evaluation is by Gauss-Legendre quadrature in the ring angle. Near the
singular diagonal (d_min << d_max) the angle integral develops a sharp
peak; there the range [0, pi/4] is remapped by tan t = (d_min/d_max)
sinh s, a graded substitution that resolves the peak with a fixed node
count, and [pi/4, pi/2] keeps a plain rule.

Potentials evaluated on or near the source grid handle the integrable
log singularity of K_II by constant-ball singularity subtraction: with
f the source field, R its support radius and f_p = f(p),

    Phi[f](p) = Q[(f - f_p 1_{r<=R}) K_II r'^2] + f_p Phi_ball(p; R),

where Q is the tensor quadrature (trapezoid radially, Gauss in zeta)
with the coincident-node product zeroed, and Phi_ball is the closed-form
potential of the unit-density ball,

    Phi_ball(p) = -2 pi G (R^2 - r_p^2 / 3)   for r_p <= R,
                  -(4 pi G / 3) R^3 / r_p      for r_p > R.

The subtracted integrand vanishes at the singular point, so the plain
product rule converges at its smooth-field order; the subtraction is
validated against the uniform-sphere oracle. Gradients use the same
construction with the differentiated kernel and the ball field
d Phi_ball / dr = (4 pi G / 3) r_p inside, (4 pi G / 3) R^3 / r_p^2
outside.

The even-Legendre expansion of the potential of an equatorially
symmetric density uses coefficients f_n(r, r') = r_<^n / r_>^(n+1). Its
overall normalization, fixed numerically against the kernel quadrature,
is

    Phi = -2 pi G sum_n P_n(zeta) int f_n(r, r') c_n(r') r'^2 dr',
    c_n(r') = int_{-1}^{1} P_n(zeta') rho(r', zeta') dzeta',

i.e. a factor 4 pi when the sum is restricted to even n and the zeta'
integral to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from scipy.special import ellipe, ellipkm1

from .errors import DomainError, GridMismatchError, KernelSingularityError
from .fields import AxiField
from .grids import (
    fd_diff_matrix,
    gauss_legendre,
    legendre_vandermonde,
    spectral_diff_matrix,
    trapezoid_weights,
)

FOUR_PI = 4.0 * math.pi

_COINCIDENT_RATIO2 = 1e-24  # (d_min/d_max)^2 below which points count as coincident


@dataclass(frozen=True)
class KernelQuadSpec:
    """Quadrature controls for the ring-kernel integrals.

    n_beta plain Gauss nodes cover the ring angle away from the diagonal;
    when d_min/d_max drops below split_threshold, the near-singular part
    is remapped with n_split graded nodes.
    """

    n_beta: int = 64
    split_threshold: float = 0.15
    n_split: int = 64

    def __post_init__(self):
        if self.n_beta < 16:
            raise DomainError("n_beta must be at least 16")
        if self.n_split < self.n_beta:
            raise DomainError("n_split must be at least n_beta")


DEFAULT_SPEC = KernelQuadSpec()


@lru_cache(maxsize=32)
def _plain_nodes(n: int):
    t, w = gauss_legendre(n, 0.0, 0.5 * math.pi)
    return np.cos(t) ** 2, np.sin(t) ** 2, w


@lru_cache(maxsize=32)
def _unit_nodes(n: int):
    return gauss_legendre(n, 0.0, 1.0)


def _split_nodes(dmin: np.ndarray, dmax: np.ndarray, n: int):
    """Graded + plain angle nodes (t, weight) for near-singular rings.

    On [0, pi/4] substitutes tan t = (dmin/dmax) sinh s, which stretches
    the peak of width ~dmin/dmax to unit scale; [pi/4, pi/2] is regular.
    Returns arrays of shape (..., 2 n).
    """
    x01, w01 = _unit_nodes(n)
    ratio = dmin / dmax
    s1 = np.arcsinh(1.0 / ratio)[..., None]
    s = s1 * x01
    q = ratio[..., None] * np.sinh(s)
    t_a = np.arctan(q)
    jac_a = s1 * w01 * ratio[..., None] * np.cosh(s) / (1.0 + q * q)
    t2, w2 = gauss_legendre(n, 0.25 * math.pi, 0.5 * math.pi)
    t_b = np.broadcast_to(t2, dmin.shape + (n,))
    jac_b = np.broadcast_to(w2, dmin.shape + (n,))
    return np.concatenate([t_a, t_b], axis=-1), np.concatenate([jac_a, jac_b], axis=-1)


def _prepare(dmin2, dmax2):
    dmin2 = np.asarray(dmin2, dtype=float)
    dmax2 = np.asarray(dmax2, dtype=float)
    scalar = dmin2.ndim == 0 and dmax2.ndim == 0
    shape = np.broadcast_shapes(dmin2.shape, dmax2.shape)
    dmin2 = np.broadcast_to(np.atleast_1d(dmin2), shape or (1,))
    dmax2 = np.broadcast_to(np.atleast_1d(dmax2), shape or (1,))
    if np.any(dmax2 <= 0.0):
        raise KernelSingularityError("kernel evaluated with both points at the origin")
    if np.any(dmin2 / dmax2 <= _COINCIDENT_RATIO2):
        raise KernelSingularityError("kernel evaluated at a coincident source point")
    return dmin2, dmax2, scalar


def _ring_values(dmin2, dmax2, spec: KernelQuadSpec) -> np.ndarray:
    """Master integral I(d_min, d_max) for arrays of squared distances."""
    dmin2, dmax2, scalar = _prepare(dmin2, dmax2)
    ratio2 = dmin2 / dmax2
    out = np.empty(dmin2.shape)
    near = ratio2 < spec.split_threshold**2
    far = ~near
    if np.any(far):
        c2, s2, w = _plain_nodes(spec.n_beta)
        h = dmin2[far, None] * c2 + dmax2[far, None] * s2
        out[far] = (w / np.sqrt(h)).sum(axis=-1)
    if np.any(near):
        a = np.sqrt(dmin2[near])
        b = np.sqrt(dmax2[near])
        t, jac = _split_nodes(a, b, spec.n_split)
        h = (a[:, None] * np.cos(t)) ** 2 + (b[:, None] * np.sin(t)) ** 2
        out[near] = (jac / np.sqrt(h)).sum(axis=-1)
    return float(out[0]) if scalar else out


def _ring_grad_values(dmin2, dmax2, gmin, gmax, spec: KernelQuadSpec) -> np.ndarray:
    """Derivative of the master integral given d(d_min^2), d(d_max^2).

    dI = -1/2 int (gmin cos^2 t + gmax sin^2 t) h^(-3/2) dt.
    """
    dmin2, dmax2, scalar = _prepare(dmin2, dmax2)
    gmin = np.broadcast_to(np.atleast_1d(np.asarray(gmin, dtype=float)), dmin2.shape)
    gmax = np.broadcast_to(np.atleast_1d(np.asarray(gmax, dtype=float)), dmin2.shape)
    ratio2 = dmin2 / dmax2
    out = np.empty(dmin2.shape)
    near = ratio2 < spec.split_threshold**2
    far = ~near
    if np.any(far):
        c2, s2, w = _plain_nodes(spec.n_beta)
        h = dmin2[far, None] * c2 + dmax2[far, None] * s2
        num = gmin[far, None] * c2 + gmax[far, None] * s2
        out[far] = -0.5 * (w * num * h**-1.5).sum(axis=-1)
    if np.any(near):
        a = np.sqrt(dmin2[near])
        b = np.sqrt(dmax2[near])
        t, jac = _split_nodes(a, b, spec.n_split)
        c2 = np.cos(t) ** 2
        s2 = 1.0 - c2
        h = dmin2[near, None] * c2 + dmax2[near, None] * s2
        num = gmin[near, None] * c2 + gmax[near, None] * s2
        out[near] = -0.5 * (jac * num * h**-1.5).sum(axis=-1)
    return float(out[0]) if scalar else out


def _ring_values_fast(dmin2, dmax2):
    """Closed form of the master integral: K(1 - q) / d_max with q = ratio^2.

    Identical to the graded quadrature (cross-checked in the tests); used
    in the potential assembly where tens of millions of pairs make the
    scipy elliptic ufunc the right tool.
    """
    q = dmin2 / dmax2
    return ellipkm1(q) / np.sqrt(dmax2)


def _ring_grad_fast(dmin2, dmax2, gmin, gmax):
    """Closed-form dI = gmin dI/d(dmin^2) + gmax dI/d(dmax^2).

    With m = 1 - q and K'(m) = (E(m) - q K(m)) / (2 (1 - q) q):
        dI/d(dmin^2) = -K'(m) / dmax^3,
        dI/d(dmax^2) = K'(m) dmin^2 / dmax^5 - K(m) / (2 dmax^3).
    """
    q = np.minimum(dmin2 / dmax2, 1.0 - 1e-14)
    b3 = dmax2 ** 1.5
    K = ellipkm1(q)
    E = ellipe(1.0 - q)
    Kp = (E - q * K) / (2.0 * (1.0 - q) * q)
    return (-Kp / b3) * gmin + (Kp * q / b3 - K / (2.0 * b3)) * gmax


# -- ring distances ----------------------------------------------------------


def _cyl_distances(w, wp, dz):
    dmin2 = (w - wp) ** 2 + dz**2
    dmax2 = (w + wp) ** 2 + dz**2
    return dmin2, dmax2


def _rzeta_distances(r, zeta, rp, zetap):
    s = np.sqrt(np.maximum(1.0 - np.asarray(zeta, dtype=float) ** 2, 0.0))
    sp = np.sqrt(np.maximum(1.0 - np.asarray(zetap, dtype=float) ** 2, 0.0))
    A = r**2 + rp**2 - 2.0 * r * rp * zeta * zetap
    B = 2.0 * r * rp * s * sp
    return np.maximum(A - B, 0.0), A + B


def _rzeta_distance_grads(r, zeta, rp, zetap):
    """d(d_min^2), d(d_max^2) with respect to the field point (r, zeta)."""
    s = np.sqrt(np.maximum(1.0 - np.asarray(zeta, dtype=float) ** 2, 0.0))
    sp = np.sqrt(np.maximum(1.0 - np.asarray(zetap, dtype=float) ** 2, 0.0))
    dA_dr = 2.0 * r - 2.0 * rp * zeta * zetap
    dB_dr = 2.0 * rp * s * sp
    dA_dz = -2.0 * r * rp * zetap
    dB_dz = -2.0 * r * rp * sp * (zeta / np.where(s > 0.0, s, 1.0))
    return dA_dr - dB_dr, dA_dr + dB_dr, dA_dz - dB_dz, dA_dz + dB_dz


# -- public kernels ----------------------------------------------------------


def kernel_KI(w, wp, dz, spec: KernelQuadSpec = DEFAULT_SPEC):
    """Cylindrical ring kernel (1/pi) int_0^{pi/2} da / chord(a)."""
    dmin2, dmax2 = _cyl_distances(
        np.asarray(w, dtype=float), np.asarray(wp, dtype=float), np.asarray(dz, dtype=float)
    )
    return _ring_values(dmin2, dmax2, spec) / math.pi


def kernel_KII(r, zeta, rp, zetap, spec: KernelQuadSpec = DEFAULT_SPEC):
    """(r, zeta) ring kernel (1/4pi) int_0^{2pi} dbeta / chord(beta)."""
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    dmin2, dmax2 = _rzeta_distances(
        r, np.asarray(zeta, dtype=float), rp, np.asarray(zetap, dtype=float)
    )
    return _ring_values(dmin2, dmax2, spec) / math.pi


def kernel_KIII(r, rp):
    """Spherical kernel min(1/r, 1/r'); r = 0 falls back to 1/r'."""
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    if np.any((r == 0.0) & (rp == 0.0)):
        raise DomainError("kernel_KIII undefined at r = r' = 0")
    out = 1.0 / np.maximum(r, rp)
    return float(out) if out.ndim == 0 else out


def legendre_f(n: int, r, rp):
    """Expansion coefficient f_n = r_<^n / r_>^(n+1); f_0 equals K_III."""
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    if np.any((r == 0.0) & (rp == 0.0)):
        raise DomainError("legendre_f undefined at r = r' = 0")
    lo = np.minimum(r, rp)
    hi = np.maximum(r, rp)
    out = lo**n / hi ** (n + 1)
    return float(out) if out.ndim == 0 else out


# -- potential assembly --------------------------------------------------------


def clamped_radial_weights(r: np.ndarray, support_radius: float) -> np.ndarray:
    """Trapezoid weights clamped at the support boundary.

    Nodes beyond the support get zero weight and the last in-support node
    gets the end-of-interval half weight, so a density cut off exactly at
    a grid node is integrated over [r_min, R] instead of ramping through
    the first vacuum cell.
    """
    mask = r <= support_radius
    if not np.any(mask):
        raise DomainError("no grid nodes inside the support radius")
    w = np.zeros_like(r)
    w[mask] = trapezoid_weights(r[mask])
    return w


def _source_geometry(rho: AxiField):
    if rho.chart != "rzeta":
        raise DomainError("potential operators require the rzeta chart")
    if not math.isfinite(rho.support_radius):
        raise DomainError("density must have finite support_radius")
    if rho.x1[-1] < rho.support_radius:
        raise DomainError("grid must cover the support radius")
    r = rho.x1
    z = rho.x2
    return r, z, clamped_radial_weights(r, rho.support_radius), rho.zeta_weights()


def _kernel_rows(
    targets_r: np.ndarray,
    targets_z: np.ndarray,
    rho: AxiField,
    spec: KernelQuadSpec,
    which: str = "phi",
    chunk: int = 128,
) -> np.ndarray:
    """Quadrature weight rows: value = -4 pi G (rows @ f_flat).

    Row entries are kernel(target, source) * r'^2 * cell weight;
    coincident pairs are zeroed (the caller compensates by singularity
    subtraction).
    """
    r, z, wr, wz = _source_geometry(rho)
    nr, nz = len(r), len(z)
    RR = np.repeat(r, nz)
    ZZ = np.tile(z, nr)
    WW = np.repeat(wr, nz) * np.tile(wz, nr) * RR**2

    n_t = len(targets_r)
    rows = np.empty((n_t, nr * nz))
    for lo in range(0, n_t, chunk):
        hi = min(lo + chunk, n_t)
        tr = targets_r[lo:hi, None]
        tz = targets_z[lo:hi, None]
        dmin2, dmax2 = _rzeta_distances(tr, tz, RR[None, :], ZZ[None, :])
        coincident = dmin2 <= _COINCIDENT_RATIO2 * dmax2
        safe = np.where(coincident, dmax2, dmin2)
        if which == "phi":
            vals = _ring_values_fast(safe, dmax2) / math.pi
        else:
            gmin_r, gmax_r, gmin_z, gmax_z = _rzeta_distance_grads(
                tr, tz, RR[None, :], ZZ[None, :]
            )
            gmin, gmax = (gmin_r, gmax_r) if which == "dr" else (gmin_z, gmax_z)
            gmin = np.where(coincident, gmax, gmin)
            vals = _ring_grad_fast(safe, dmax2, gmin, gmax) / math.pi
        vals = np.where(coincident, 0.0, vals)
        rows[lo:hi] = vals * WW[None, :]
    return rows


def _ball_potential(r_p: np.ndarray, R: float, G: float) -> np.ndarray:
    """Closed-form potential of the unit-density ball of radius R."""
    r_p = np.asarray(r_p, dtype=float)
    inside = -2.0 * math.pi * G * (R**2 - r_p**2 / 3.0)
    outside = -(FOUR_PI * G / 3.0) * R**3 / np.maximum(r_p, 1e-300)
    return np.where(r_p <= R, inside, outside)


def _ball_potential_dr(r_p: np.ndarray, R: float, G: float) -> np.ndarray:
    r_p = np.asarray(r_p, dtype=float)
    inside = (FOUR_PI * G / 3.0) * r_p
    outside = (FOUR_PI * G / 3.0) * R**3 / np.maximum(r_p, 1e-300) ** 2
    return np.where(r_p <= R, inside, outside)


def _sample_source(rho: AxiField, tr: np.ndarray, tz: np.ndarray, self_grid: bool) -> np.ndarray:
    """Source value at the targets: grid samples where exact, spline otherwise."""
    if self_grid:
        return rho.values.ravel().copy()
    interp = rho.interpolator()
    vals = interp.ev(np.clip(tr, rho.x1[0], rho.x1[-1]), np.clip(tz, rho.x2[0], rho.x2[-1]))
    vals = np.where(tr > rho.support_radius, 0.0, vals)
    return vals


def _resolve_eval_points(rho: AxiField, eval_points):
    """Normalize eval_points into flat (r, zeta) arrays plus output shape info."""
    if eval_points is None:
        R, Z = np.meshgrid(rho.x1, rho.x2, indexing="ij")
        return R.ravel(), Z.ravel(), ("grid", rho.x1, rho.x2)
    if isinstance(eval_points, tuple) and len(eval_points) == 2:
        r_nodes = np.asarray(eval_points[0], dtype=float)
        z_nodes = np.asarray(eval_points[1], dtype=float)
        R, Z = np.meshgrid(r_nodes, z_nodes, indexing="ij")
        return R.ravel(), Z.ravel(), ("grid", r_nodes, z_nodes)
    pts = np.asarray(eval_points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("eval_points must be None, (r_nodes, zeta_nodes), or (N, 2)")
    return pts[:, 0].copy(), pts[:, 1].copy(), ("points",)


def _package(values: np.ndarray, how, symmetric: bool):
    if how[0] == "points":
        return values
    _, r_nodes, z_nodes = how
    vals = values.reshape(len(r_nodes), len(z_nodes))
    sym = symmetric and np.allclose(z_nodes, -z_nodes[::-1], atol=1e-12)
    return AxiField(
        chart="rzeta",
        x1=r_nodes,
        x2=z_nodes,
        values=vals,
        support_radius=math.inf,
        equatorially_symmetric=bool(sym),
        _skip_checks=True,
    )


def _ball_indicator(rho: AxiField) -> np.ndarray:
    R, _ = np.meshgrid(rho.x1, rho.x2, indexing="ij")
    return (R.ravel() <= rho.support_radius).astype(float)


def potential(
    rho: AxiField,
    eval_points=None,
    spec: KernelQuadSpec = DEFAULT_SPEC,
    G: float = 1.0,
) -> Union[AxiField, np.ndarray]:
    """Newton potential Phi = -4 pi G int K_II rho r'^2 dr' dzeta'.

    eval_points may be None (the source grid itself; the singular diagonal
    is handled by constant-ball singularity subtraction), a tuple
    (r_nodes, zeta_nodes) defining a tensor grid, or an (N, 2) array of
    scattered (r, zeta) points. Grid-shaped requests return an AxiField,
    scattered ones a plain array.
    """
    tr, tz, how = _resolve_eval_points(rho, eval_points)
    rows = _kernel_rows(tr, tz, rho, spec, which="phi")
    f_p = _sample_source(rho, tr, tz, eval_points is None)
    ball = _ball_indicator(rho)
    vals = (
        -FOUR_PI * G * (rows @ rho.values.ravel() - f_p * (rows @ ball))
        + f_p * _ball_potential(tr, rho.support_radius, G)
    )
    return _package(vals, how, rho.equatorially_symmetric)


def potential_gradient(
    rho: AxiField,
    eval_points=None,
    spec: KernelQuadSpec = DEFAULT_SPEC,
    G: float = 1.0,
) -> Tuple[Union[AxiField, np.ndarray], Union[AxiField, np.ndarray]]:
    """(dPhi/dr, dPhi/dzeta) by quadrature of the differentiated kernel."""
    tr, tz, how = _resolve_eval_points(rho, eval_points)
    flat = rho.values.ravel()
    f_p = _sample_source(rho, tr, tz, eval_points is None)
    ball = _ball_indicator(rho)
    rows_r = _kernel_rows(tr, tz, rho, spec, which="dr")
    dr = (
        -FOUR_PI * G * (rows_r @ flat - f_p * (rows_r @ ball))
        + f_p * _ball_potential_dr(tr, rho.support_radius, G)
    )
    rows_z = _kernel_rows(tr, tz, rho, spec, which="dz")
    dz = -FOUR_PI * G * (rows_z @ flat - f_p * (rows_z @ ball))
    return _package(dr, how, False), _package(dz, how, False)


class AxiPotentialOperator:
    """Self-grid potential operator with a cached weight matrix.

    Maps source samples f on a fixed (r, zeta) grid to the potential of
    f as a density, -4 pi G int K_II f r'^2, on the same grid. The
    singularity subtraction folds into the matrix (the coincident-node
    column picks up the exact-ball correction), so applications are
    plain matvecs and the operator is linear in f.
    """

    def __init__(
        self,
        template: AxiField,
        spec: KernelQuadSpec = DEFAULT_SPEC,
        G: float = 1.0,
    ):
        if not math.isfinite(template.support_radius):
            raise DomainError("operator template needs a finite support_radius")
        self.template = template
        self.spec = spec
        self.G = G
        R, Z = np.meshgrid(template.x1, template.x2, indexing="ij")
        tr, tz = R.ravel(), Z.ravel()
        rows = _kernel_rows(tr, tz, template, spec, which="phi")
        ball = _ball_indicator(template)
        # fold the subtraction into the coincident-node column:
        # M[t, t] = -(rows_t @ ball) - Phi_ball(p_t) / (4 pi G)
        diag = -(rows @ ball) - _ball_potential(tr, template.support_radius, G) / (
            FOUR_PI * G
        )
        n = rows.shape[0]
        rows[np.arange(n), np.arange(n)] = diag
        self._rows = rows
        self._scale = -FOUR_PI * G

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Potential of the source sample `values` (grid shaped)."""
        values = np.asarray(values, dtype=float)
        flat = self._rows @ values.ravel()
        return (self._scale * flat).reshape(values.shape)


def potential_expansion(
    rho: AxiField,
    m_max: int,
    eval_points=None,
    G: float = 1.0,
) -> Union[AxiField, np.ndarray]:
    """Even-Legendre expansion of the potential of a symmetric density.

    Truncates at Legendre degree 2 m_max. Input must be flagged (and
    validated) equatorially symmetric. See the module docstring for the
    normalization constant, which was fixed against `potential`.
    """
    if m_max < 0:
        raise DomainError("m_max must be non-negative")
    if not rho.equatorially_symmetric:
        raise DomainError("potential_expansion requires an equatorially symmetric density")
    r, z, wr, wz = _source_geometry(rho)
    n_max = 2 * m_max
    P_src = legendre_vandermonde(z, n_max)
    c = (P_src * wz) @ rho.values.T  # c[n, i] = int P_n rho(r_i, zeta') dzeta'

    tr, tz, how = _resolve_eval_points(rho, eval_points)
    P_tgt = legendre_vandermonde(tz, n_max)
    out = np.zeros(len(tr))
    for n in range(0, n_max + 1, 2):
        f = legendre_f(n, tr[:, None], r[None, :])
        out += P_tgt[n] * (f @ (c[n] * r**2 * wr))
    return _package(-2.0 * math.pi * G * out, how, True)


def poisson_residual(phi: AxiField, rho: AxiField, G: float = 1.0) -> AxiField:
    """Discrete residual of the Poisson equation in the (r, zeta) chart.

    Laplacian (1/r^2) d_r (r^2 d_r Phi) + (1/r^2) d_zeta ((1-zeta^2)
    d_zeta Phi), with 4th-order finite differences radially and the exact
    Gauss-node differentiation matrix in zeta; returns Lap(Phi) - 4 pi G rho.
    """
    if not phi.same_grid(rho):
        raise GridMismatchError("phi and rho must share a grid")
    if phi.chart != "rzeta":
        raise DomainError("poisson_residual requires the rzeta chart")
    r = phi.x1
    z = phi.x2
    if r[0] <= 0.0:
        raise DomainError("radial nodes must be positive")
    Dr = fd_diff_matrix(r, order=1, stencil=5)
    Dz = spectral_diff_matrix(z)
    F = phi.values
    radial = (Dr @ (r[:, None] ** 2 * (Dr @ F))) / r[:, None] ** 2
    angular = ((1.0 - z[None, :] ** 2) * (F @ Dz.T)) @ Dz.T / r[:, None] ** 2
    res = radial + angular - FOUR_PI * G * rho.values
    return phi.with_values(res)
