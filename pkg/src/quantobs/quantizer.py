"""Saturating interval quantizers and their axis-aligned products.

A scalar quantizer is defined by strictly increasing breakpoints
b_1 < ... < b_m and m+1 pairwise distinct levels: values below b_1 map to
level 1, values in [b_j, b_{j+1}) map to level j+1, and values at or above
b_m map to level m+1. The map is right-continuous and, because adjacent
levels differ, its discontinuity set is exactly the breakpoint set. A
product quantizer applies one scalar quantizer per output dimension, so
the discontinuity set of the product is the union of the axis-aligned
hyperplanes {y : y_i = b}.
"""

import bisect
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class IntervalQuantizer:
    """Right-continuous saturating quantizer on the real line."""

    breakpoints: tuple
    levels: tuple

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        lvls = tuple(float(v) for v in self.levels)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "levels", lvls)
        if len(bps) < 1:
            raise DimensionError("at least one breakpoint required")
        if len(lvls) != len(bps) + 1:
            raise DimensionError("need exactly one more level than breakpoints")
        if not all(np.isfinite(bps)) or not all(np.isfinite(lvls)):
            raise DomainError("breakpoints and levels must be finite")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if len(set(lvls)) != len(lvls):
            raise DomainError("levels must be pairwise distinct")

    @cached_property
    def _bp_array(self):
        return np.asarray(self.breakpoints, dtype=np.float64)

    @cached_property
    def _level_array(self):
        return np.asarray(self.levels, dtype=np.float64)

    def quantize(self, value):
        """Quantize a scalar. NaN is a domain error."""
        value = float(value)
        if np.isnan(value):
            raise DomainError("cannot quantize NaN")
        # bisect_right counts breakpoints <= value, which is the level index
        # for a right-continuous map.
        return self.levels[bisect.bisect_right(self.breakpoints, value)]

    def quantize_array(self, values):
        values = np.asarray(values, dtype=np.float64)
        if np.isnan(values).any():
            raise DomainError("cannot quantize NaN")
        idx = np.searchsorted(self._bp_array, values, side="right")
        return self._level_array[idx]

    def breakpoint_distance(self, value):
        """Distance from value to the nearest breakpoint."""
        return float(np.min(np.abs(self._bp_array - float(value))))

    def cell_index(self, value):
        """Index of the cell containing value (0 = leftmost, m = rightmost)."""
        return bisect.bisect_right(self.breakpoints, float(value))

    def cell_bounded(self, value):
        """Whether the cell containing value has finite endpoints."""
        idx = self.cell_index(value)
        return 1 <= idx <= len(self.breakpoints) - 1

    def right_slack(self, value):
        """Largest delta with the quantizer constant on [value, value + delta).

        Infinite when value lies in the saturating top cell.
        """
        value = float(value)
        if np.isnan(value):
            raise DomainError("cannot quantize NaN")
        idx = self.cell_index(value)
        if idx >= len(self.breakpoints):
            return float("inf")
        return self.breakpoints[idx] - value


@dataclass(frozen=True)
class ProductQuantizer:
    """Per-dimension product of scalar interval quantizers."""

    dims: tuple

    def __post_init__(self):
        dims = tuple(self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 1:
            raise DimensionError("at least one output dimension required")
        if not all(isinstance(d, IntervalQuantizer) for d in dims):
            raise DimensionError("dims must be IntervalQuantizer instances")

    @property
    def p(self):
        return len(self.dims)

    @cached_property
    def breakpoint_rows(self):
        return tuple(d._bp_array for d in self.dims)

    @cached_property
    def max_abs_breakpoint(self):
        return max(max(abs(b) for b in d.breakpoints) for d in self.dims)

    def quantize(self, y):
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        if y.shape[0] != self.p:
            raise DimensionError(f"expected {self.p}-vector, got {y.shape[0]}")
        return np.array([d.quantize(v) for d, v in zip(self.dims, y)])

    def quantize_array(self, values):
        """Quantize an (N, p) batch of raw outputs into label vectors."""
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != self.p:
            raise DimensionError(f"expected (N, {self.p}) array")
        out = np.empty_like(values)
        for i, d in enumerate(self.dims):
            out[:, i] = d.quantize_array(values[:, i])
        return out

    def breakpoint_distance(self, y):
        """Euclidean distance from y to the breakpoint hyperplane union.

        For axis-aligned hyperplanes this is exactly the smallest
        per-coordinate distance to any breakpoint.
        """
        y = np.asarray(y, dtype=np.float64).reshape(1, -1)
        if y.shape[1] != self.p:
            raise DimensionError(f"expected {self.p}-vector")
        return float(_kernels.hyperplane_distances(y, self.breakpoint_rows)[0])

    def breakpoint_distances(self, values):
        """Vectorized breakpoint_distance over an (N, p) batch."""
        return _kernels.hyperplane_distances(values, self.breakpoint_rows)

    def zero_cell_bounded(self):
        """Whether the cell containing the origin is bounded in every dimension."""
        return all(d.cell_bounded(0.0) for d in self.dims)


def unit_grid_quantizer(radius):
    """Saturating unit-step rounding quantizer with integer levels -radius..radius.

    The two outermost half-open cells merge with the saturation regions, so
    the minimal encoding has breakpoints at every half-integer in
    (-radius, radius) and the 2*radius + 1 integer levels.
    """
    radius = int(radius)
    if radius < 1:
        raise DomainError("radius must be a positive integer")
    breakpoints = tuple(i + 0.5 for i in range(-radius, radius))
    levels = tuple(float(i) for i in range(-radius, radius + 1))
    return IntervalQuantizer(breakpoints, levels)
