"""Quadrature nodes and differentiation matrices for the (r, zeta) grids.

The zeta direction always carries Gauss-Legendre nodes, differentiated
spectrally through the barycentric interpolation formula; the radial
direction uses finite differences on arbitrary increasing nodes with
Fornberg stencil weights.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0):
    """Gauss-Legendre nodes and weights mapped to the interval [a, b]."""
    x, w = leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def gauss_cell_edges(nodes: np.ndarray, weights: np.ndarray, a: float = -1.0) -> np.ndarray:
    """Cell boundaries assigning each Gauss node its own weight-measure cell.

    Edge k sits at a + sum(weights[:k]); the cells partition [a, a + sum(w)].
    """
    edges = np.empty(len(nodes) + 1)
    edges[0] = a
    edges[1:] = a + np.cumsum(weights)
    return edges


def barycentric_weights(x: np.ndarray) -> np.ndarray:
    """Barycentric weights for interpolation nodes x (scaled for stability)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    # rescale to O(1) spread so products neither overflow nor underflow
    scale = 4.0 / (x.max() - x.min())
    w = np.ones(n)
    for j in range(n):
        diff = (x[j] - x) * scale
        diff[j] = 1.0
        w[j] = 1.0 / np.prod(diff)
    return w / np.max(np.abs(w))


def spectral_diff_matrix(x: np.ndarray) -> np.ndarray:
    """Differentiation matrix of the polynomial interpolant on nodes x.

    Exact (to roundoff) for polynomials of degree < len(x); intended for
    Gauss-Legendre node sets of moderate size.
    """
    x = np.asarray(x, dtype=float)
    w = barycentric_weights(x)
    n = len(x)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = (w[j] / w[i]) / (x[i] - x[j])
        D[i, i] = -np.sum(D[i, :])
    return D


def fornberg_weights(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights for derivatives 0..m at z from nodes x.

    Returns an array of shape (m + 1, len(x)); row k holds the weights of
    the k-th derivative. Standard recursive construction.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def fd_diff_matrix(x: np.ndarray, order: int = 1, stencil: int = 5) -> np.ndarray:
    """Banded finite-difference matrix for d^order/dx^order on nodes x.

    Interior rows use centered stencils of the requested width; rows near
    the ends fall back to one-sided stencils of the same width, so the
    formal accuracy is stencil - order everywhere for smooth data.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < stencil:
        stencil = n
    D = np.zeros((n, n))
    half = stencil // 2
    for i in range(n):
        lo = min(max(i - half, 0), n - stencil)
        idx = np.arange(lo, lo + stencil)
        D[i, idx] = fornberg_weights(x[i], x[idx], order)[order]
    return D


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    """Composite trapezoid weights on arbitrary increasing nodes."""
    x = np.asarray(x, dtype=float)
    w = np.zeros_like(x)
    dx = np.diff(x)
    w[:-1] += 0.5 * dx
    w[1:] += 0.5 * dx
    return w


def simpson_weights(x: np.ndarray) -> np.ndarray:
    """Composite Simpson weights on a uniform grid (trapezoid fallback).

    Non-uniform grids, or grids with an even panel count, get the extra
    panel handled by trapezoid on one end.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 3:
        return trapezoid_weights(x)
    dx = np.diff(x)
    if not np.allclose(dx, dx[0], rtol=1e-10, atol=0.0):
        return trapezoid_weights(x)
    h = dx[0]
    w = np.zeros(n)
    n_panels = n - 1
    pairs = n_panels // 2
    for p in range(pairs):
        i = 2 * p
        w[i] += h / 3.0
        w[i + 1] += 4.0 * h / 3.0
        w[i + 2] += h / 3.0
    if n_panels % 2 == 1:
        w[-2] += 0.5 * h
        w[-1] += 0.5 * h
    return w


def legendre_vandermonde(zeta: np.ndarray, n_max: int) -> np.ndarray:
    """Matrix P[n, j] = P_n(zeta_j) for n = 0..n_max via the recurrence."""
    zeta = np.asarray(zeta, dtype=float)
    P = np.empty((n_max + 1, len(zeta)))
    P[0] = 1.0
    if n_max >= 1:
        P[1] = zeta
    for n in range(1, n_max):
        P[n + 1] = ((2 * n + 1) * zeta * P[n] - n * P[n - 1]) / (n + 1)
    return P
