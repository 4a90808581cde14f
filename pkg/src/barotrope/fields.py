"""Axisymmetric scalar fields on tensor grids, with text and binary IO.

An AxiField samples a scalar F on a tensor grid in the (r, zeta) chart or
the cylindrical (w, z) chart. In the (r, zeta) chart the zeta nodes are
a Gauss-Legendre set in (-1, 1), which gives spectral quadrature and
differentiation in the angular direction and keeps grids symmetric under
the equatorial reflection zeta -> -zeta.

Binary format ``AXIF``: a 16-byte header (magic ``AXIF``, uint32 version,
uint32 N1, uint32 N2, little endian) followed by uint32 chart id
(0 = rzeta, 1 = cylindrical), uint32 flags (bit 0: equatorially
symmetric), float64 support radius, then the node arrays and the value
matrix as float64 in C order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import RectBivariateSpline

from .errors import DomainError, GridMismatchError

_MAGIC = b"AXIF"
_VERSION = 1
_CHART_IDS = {"rzeta": 0, "cylindrical": 1}
_CHART_NAMES = {v: k for k, v in _CHART_IDS.items()}

SYMMETRY_TOL = 1e-12


def gauss_zeta_nodes(n: int):
    """Gauss-Legendre nodes and weights on (-1, 1) for the zeta direction."""
    return leggauss(n)


def _is_gauss_set(nodes: np.ndarray) -> bool:
    ref, _ = leggauss(len(nodes))
    return np.allclose(nodes, ref, rtol=0.0, atol=1e-12)


@dataclass(frozen=True)
class AxiField:
    """Scalar samples F[i, j] at (x1[i], x2[j]).

    x1 is the radial coordinate (r, or w in the cylindrical chart) and
    must be strictly increasing and non-negative; x2 is zeta or z.
    support_radius is the smallest R with F identically zero for
    r >= R (math.inf when unbounded).
    """

    chart: str
    x1: np.ndarray
    x2: np.ndarray
    values: np.ndarray
    support_radius: float = math.inf
    equatorially_symmetric: bool = False
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "x1", np.asarray(self.x1, dtype=float))
        object.__setattr__(self, "x2", np.asarray(self.x2, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self._skip_checks:
            return
        if self.chart not in _CHART_IDS:
            raise DomainError(f"unknown chart {self.chart!r}")
        if self.values.shape != (len(self.x1), len(self.x2)):
            raise GridMismatchError(
                f"values shape {self.values.shape} does not match grid "
                f"({len(self.x1)}, {len(self.x2)})"
            )
        if np.any(np.diff(self.x1) <= 0) or np.any(self.x1 < 0):
            raise DomainError("x1 nodes must be non-negative and strictly increasing")
        if np.any(np.diff(self.x2) <= 0):
            raise DomainError("x2 nodes must be strictly increasing")
        if self.chart == "rzeta" and (self.x2[0] <= -1.0 or self.x2[-1] >= 1.0):
            raise DomainError("zeta nodes must lie strictly inside (-1, 1)")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("field values must be finite")
        if self.equatorially_symmetric:
            err = self.asymmetry(parity=+1)
            tol = SYMMETRY_TOL * max(1.0, float(np.max(np.abs(self.values))))
            if err > tol:
                raise DomainError(
                    f"field flagged equatorially symmetric but asymmetry {err:.3e} "
                    f"exceeds {tol:.3e}"
                )

    # -- grid helpers --------------------------------------------------------

    @property
    def r_nodes(self) -> np.ndarray:
        return self.x1

    @property
    def zeta_nodes(self) -> np.ndarray:
        if self.chart != "rzeta":
            raise DomainError("zeta_nodes only exist in the rzeta chart")
        return self.x2

    @property
    def z_nodes(self) -> np.ndarray:
        if self.chart != "cylindrical":
            raise DomainError("z_nodes only exist in the cylindrical chart")
        return self.x2

    def zeta_weights(self) -> np.ndarray:
        """Gauss-Legendre weights matching the zeta node set."""
        if self.chart != "rzeta":
            raise DomainError("zeta weights only exist in the rzeta chart")
        nodes, weights = leggauss(len(self.x2))
        if not np.allclose(nodes, self.x2, rtol=0.0, atol=1e-12):
            raise DomainError("zeta nodes are not a Gauss-Legendre set")
        return weights

    def same_grid(self, other: "AxiField") -> bool:
        return (
            self.chart == other.chart
            and len(self.x1) == len(other.x1)
            and len(self.x2) == len(other.x2)
            and np.array_equal(self.x1, other.x1)
            and np.array_equal(self.x2, other.x2)
        )

    def with_values(self, values: np.ndarray, **overrides) -> "AxiField":
        kw = dict(equatorially_symmetric=False)
        kw.update(overrides)
        return replace(self, values=np.asarray(values, dtype=float), **kw)

    # -- symmetry ------------------------------------------------------------

    def _grid_mirrorable(self) -> bool:
        return bool(np.allclose(self.x2, -self.x2[::-1], rtol=0.0, atol=1e-12))

    def mirrored(self, parity: int = +1) -> "AxiField":
        """Field reflected through the equator; parity -1 flips the sign."""
        if not self._grid_mirrorable():
            raise DomainError("x2 grid is not symmetric under reflection")
        return self.with_values(parity * self.values[:, ::-1])

    def asymmetry(self, parity: int = +1) -> float:
        """Max deviation from the stated equatorial parity."""
        if not self._grid_mirrorable():
            raise DomainError("x2 grid is not symmetric under reflection")
        return float(np.max(np.abs(self.values - parity * self.values[:, ::-1])))

    # -- evaluation ----------------------------------------------------------

    def interpolator(self) -> RectBivariateSpline:
        kx = min(3, len(self.x1) - 1)
        ky = min(3, len(self.x2) - 1)
        return RectBivariateSpline(self.x1, self.x2, self.values, kx=kx, ky=ky)

    # -- construction --------------------------------------------------------

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
        r_nodes: np.ndarray,
        n_zeta: int,
        chart: str = "rzeta",
        support_radius: float = math.inf,
        equatorially_symmetric: bool = False,
        x2_nodes: Optional[np.ndarray] = None,
    ) -> "AxiField":
        """Sample fn(x1, x2) on a tensor grid (Gauss zeta nodes by default)."""
        r_nodes = np.asarray(r_nodes, dtype=float)
        if x2_nodes is None:
            if chart == "rzeta":
                x2_nodes, _ = leggauss(n_zeta)
            else:
                raise DomainError("cylindrical chart needs explicit x2_nodes")
        x2_nodes = np.asarray(x2_nodes, dtype=float)
        R, Z = np.meshgrid(r_nodes, x2_nodes, indexing="ij")
        vals = np.asarray(fn(R, Z), dtype=float)
        if vals.shape != R.shape:
            vals = np.broadcast_to(vals, R.shape).copy()
        return cls(
            chart=chart,
            x1=r_nodes,
            x2=x2_nodes,
            values=vals,
            support_radius=support_radius,
            equatorially_symmetric=equatorially_symmetric,
        )

    # -- IO --------------------------------------------------------------------

    def to_table(self, path) -> None:
        """Columnar text: one (x1, x2, value) row per grid point."""
        with open(path, "w") as f:
            f.write(f"# axifield chart={self.chart} n1={len(self.x1)} n2={len(self.x2)}\n")
            f.write(f"# support_radius={self.support_radius!r} "
                    f"equatorially_symmetric={int(self.equatorially_symmetric)}\n")
            for i, a in enumerate(self.x1):
                for j, b in enumerate(self.x2):
                    f.write(f"{a!r} {b!r} {self.values[i, j]!r}\n")

    @classmethod
    def from_table(cls, path) -> "AxiField":
        meta = {}
        rows = []
        with open(path) as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    for tok in line[1:].split():
                        if "=" in tok:
                            k, v = tok.split("=", 1)
                            meta[k] = v
                    continue
                rows.append([float(t) for t in line.split()])
        data = np.asarray(rows)
        if data.shape[1] != 3:
            raise DomainError("table rows must be (x1, x2, value)")
        x1 = np.unique(data[:, 0])
        x2 = np.unique(data[:, 1])
        if len(x1) * len(x2) != len(data):
            raise DomainError("table rows do not form a tensor grid")
        vals = data[:, 2].reshape(len(x1), len(x2))
        return cls(
            chart=meta.get("chart", "rzeta"),
            x1=x1,
            x2=x2,
            values=vals,
            support_radius=float(meta.get("support_radius", math.inf)),
            equatorially_symmetric=bool(int(meta.get("equatorially_symmetric", 0))),
        )

    def to_binary(self, path) -> None:
        import struct

        with open(path, "wb") as f:
            f.write(_MAGIC)
            f.write(struct.pack("<III", _VERSION, len(self.x1), len(self.x2)))
            f.write(
                struct.pack(
                    "<IId",
                    _CHART_IDS[self.chart],
                    1 if self.equatorially_symmetric else 0,
                    self.support_radius,
                )
            )
            f.write(self.x1.astype("<f8").tobytes())
            f.write(self.x2.astype("<f8").tobytes())
            f.write(np.ascontiguousarray(self.values, dtype="<f8").tobytes())

    @classmethod
    def from_binary(cls, path) -> "AxiField":
        import struct

        with open(path, "rb") as f:
            raw = f.read()
        if raw[:4] != _MAGIC:
            raise DomainError("not an AXIF file (bad magic)")
        version, n1, n2 = struct.unpack("<III", raw[4:16])
        if version != _VERSION:
            raise DomainError(f"unsupported AXIF version {version}")
        chart_id, flags, support = struct.unpack("<IId", raw[16:32])
        off = 32
        x1 = np.frombuffer(raw, dtype="<f8", count=n1, offset=off)
        off += 8 * n1
        x2 = np.frombuffer(raw, dtype="<f8", count=n2, offset=off)
        off += 8 * n2
        vals = np.frombuffer(raw, dtype="<f8", count=n1 * n2, offset=off)
        return cls(
            chart=_CHART_NAMES[chart_id],
            x1=x1.copy(),
            x2=x2.copy(),
            values=vals.reshape(n1, n2).copy(),
            support_radius=support,
            equatorially_symmetric=bool(flags & 1),
        )

    @classmethod
    def load(cls, path) -> "AxiField":
        """Dispatch on the AXIF magic, falling back to the text table."""
        with open(path, "rb") as f:
            magic = f.read(4)
        if magic == _MAGIC:
            return cls.from_binary(path)
        return cls.from_table(path)
