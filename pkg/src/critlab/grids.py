"""Rectangular complex-plane grids carrying scalar fields, with CSV export."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: int  # cells per axis

    def __post_init__(self):
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValueError("empty grid window")
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")

    @staticmethod
    def square(half_width: float, resolution: int, center: complex = 0j) -> "GridSpec":
        return GridSpec(center.real - half_width, center.real + half_width,
                        center.imag - half_width, center.imag + half_width,
                        resolution)

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / self.resolution

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / self.resolution

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    def centers(self) -> np.ndarray:
        """Midpoints of all cells as a complex (res, res) array (row = y)."""
        x = self.x_min + (np.arange(self.resolution) + 0.5) * self.hx
        y = self.y_min + (np.arange(self.resolution) + 0.5) * self.hy
        X, Y = np.meshgrid(x, y)
        return X + 1j * Y


@dataclass(frozen=True)
class GridField:
    spec: GridSpec
    values: np.ndarray            # (res, res) float, may hold +-inf on masked cells
    mask: np.ndarray              # True where the cell hit a pole/zero

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        m = np.asarray(self.mask, dtype=bool)
        if v.shape != (self.spec.resolution, self.spec.resolution) or m.shape != v.shape:
            raise ValueError("field shape inconsistent with grid spec")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "mask", m)

    def integral(self) -> float:
        """Midpoint quadrature over unmasked cells."""
        good = ~self.mask & np.isfinite(self.values)
        return float(self.values[good].sum() * self.spec.cell_area)

    def to_csv(self, path: str | Path) -> None:
        path = Path(path)
        np.savetxt(path, self.values, delimiter=",")
        header = {
            "x_range": [self.spec.x_min, self.spec.x_max],
            "y_range": [self.spec.y_min, self.spec.y_max],
            "resolution": self.spec.resolution,
            "masked_cells": int(self.mask.sum()),
        }
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(header, indent=1))


def field_on_grid(spec: GridSpec, fn, mask_nonfinite: bool = True) -> GridField:
    """Evaluate a vectorized scalar function on the grid's cell midpoints."""
    vals = np.asarray(fn(spec.centers()), dtype=float)
    mask = ~np.isfinite(vals) if mask_nonfinite else np.zeros_like(vals, bool)
    return GridField(spec, vals, mask)
