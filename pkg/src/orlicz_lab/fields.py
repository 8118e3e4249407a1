"""Sampled scalar and vector fields on uniform cell-centered grids.

A field lives on the box (0, extent)^dim discretized into n cells per axis;
samples sit at cell centers.  Values are either per-cell scalars (shape
``(ncells,)``) or per-cell vectors (shape ``(ncells, ncomp)``).  In two
dimensions the flat cell index is ``ix * n + iy`` with x the slow axis.
"""

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch


@dataclass(frozen=True)
class SampledField:
    dim: int
    n: int
    extent: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.extent <= 0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape[0] != self.ncells or vals.ndim > 2:
            raise ValueError(
                f"values shape {vals.shape} does not match {self.ncells} cells")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", vals)

    # -- grid geometry ------------------------------------------------------

    @property
    def ncells(self):
        return self.n ** self.dim

    @property
    def h(self):
        return self.extent / self.n

    @property
    def cell_measure(self):
        return self.h ** self.dim

    @property
    def box_measure(self):
        return self.extent ** self.dim

    @property
    def is_vector(self):
        return self.values.ndim == 2

    def axis_centers(self):
        return (np.arange(self.n) + 0.5) * self.h

    def centers(self):
        """Flat arrays of cell-center coordinates, one per axis."""
        c = self.axis_centers()
        if self.dim == 1:
            return (c,)
        X, Y = np.meshgrid(c, c, indexing="ij")
        return X.ravel(), Y.ravel()

    def boundary_mask(self):
        """Boolean mask of cells adjacent to the box boundary."""
        idx = np.arange(self.n)
        edge = (idx == 0) | (idx == self.n - 1)
        if self.dim == 1:
            return edge
        ex, ey = np.meshgrid(edge, edge, indexing="ij")
        return (ex | ey).ravel()

    def same_grid(self, other):
        if (self.dim, self.n) != (other.dim, other.n) or \
                abs(self.extent - other.extent) > 1e-12 * self.extent:
            raise GridMismatch(
                f"grids differ: ({self.dim}, {self.n}, {self.extent}) vs "
                f"({other.dim}, {other.n}, {other.extent})")

    # -- values -------------------------------------------------------------

    def magnitude(self):
        """Per-cell |f|: absolute value for scalars, Euclidean norm for vectors."""
        if self.is_vector:
            return np.sqrt(np.sum(self.values ** 2, axis=1))
        return np.abs(self.values)

    def with_values(self, values):
        return SampledField(self.dim, self.n, self.extent, np.asarray(values, dtype=float))

    def map(self, fn):
        return self.with_values(fn(self.values))

    def integral(self):
        """Midpoint-rule integral over the box (componentwise for vectors)."""
        total = np.sum(self.values, axis=0) * self.cell_measure
        return float(total) if np.ndim(total) == 0 else total

    def value_at(self, points):
        """Linear (bilinear in 2-D) interpolation of a scalar field at points.

        Points outside the outermost cell centers are clamped to the boundary
        value of the interpolant.
        """
        if self.is_vector:
            raise ValueError("value_at supports scalar fields only")
        arr = np.asarray(points, dtype=float)
        single = arr.ndim == 0 or (arr.ndim == 1 and arr.size == self.dim)
        pts = arr.reshape(-1, self.dim)
        c = self.axis_centers()
        if self.dim == 1:
            out = np.interp(pts[:, 0], c, self.values)
        else:
            from scipy.interpolate import RegularGridInterpolator
            grid_vals = self.values.reshape(self.n, self.n)
            interp = RegularGridInterpolator((c, c), grid_vals, bounds_error=False,
                                             fill_value=None)
            out = interp(np.clip(pts, c[0], c[-1]))
        return float(out[0]) if single else np.asarray(out)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_function(fn, dim, n, extent=1.0):
        """Sample fn(x) (1-D) or fn(x, y) (2-D) at the cell centers."""
        probe = SampledField(dim, n, float(extent), np.zeros(n ** dim))
        vals = np.asarray(fn(*probe.centers()), dtype=float)
        if vals.ndim == 0:
            vals = np.full(probe.ncells, float(vals))
        return probe.with_values(vals)

    @staticmethod
    def constant(c, dim, n, extent=1.0):
        return SampledField(dim, n, float(extent), np.full(n ** dim, float(c)))

    # -- CSV ----------------------------------------------------------------

    def to_csv(self, path=None):
        """Delimited text: grid header, column header, one row per cell."""
        coords = self.centers()
        vals = self.values if self.is_vector else self.values[:, None]
        coord_names = ["x", "y"][: self.dim]
        val_names = ["value", "value_y"][: vals.shape[1]]
        buf = io.StringIO()
        buf.write("dim,n,extent\n")
        buf.write(f"{self.dim},{self.n},{self.extent!r}\n")
        buf.write("index," + ",".join(coord_names + val_names) + "\n")
        for i in range(self.ncells):
            row = [str(i)] + [repr(float(c[i])) for c in coords] + \
                  [repr(float(v)) for v in vals[i]]
            buf.write(",".join(row) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @staticmethod
    def from_csv(source):
        """Parse the format written by :meth:`to_csv` (path or text)."""
        text = source
        if "\n" not in str(source):
            with open(source) as fh:
                text = fh.read()
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) < 3 or lines[0].replace(" ", "") != "dim,n,extent":
            raise ValueError("field CSV must start with a 'dim,n,extent' header")
        dim_s, n_s, extent_s = lines[1].split(",")
        dim, n, extent = int(dim_s), int(n_s), float(extent_s)
        columns = lines[2].split(",")
        nval = len(columns) - 1 - dim
        if nval < 1:
            raise ValueError(f"field CSV has no value column in {columns}")
        ncells = n ** dim
        data = np.loadtxt(io.StringIO("\n".join(lines[3:])), delimiter=",", ndmin=2)
        if data.shape[0] != ncells:
            raise ValueError(f"expected {ncells} rows, found {data.shape[0]}")
        order = np.argsort(data[:, 0])
        vals = data[order, 1 + dim:]
        if nval == 1:
            vals = vals[:, 0]
        return SampledField(dim, n, extent, vals)
