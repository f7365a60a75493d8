"""Sampled periodic functions on uniform grids, the value carrier for
everything downstream.

A SampledFunction is a step density: sample i is the value on the cell
[2*pi*i/G, 2*pi*(i+1)/G).  All quadrature is the left-endpoint rectangle
rule, which integrates trigonometric polynomials of degree < G exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import neumaier_prefix, neumaier_total
from .errors import ValidationError

TWO_PI = 2.0 * np.pi


@dataclass(eq=False)
class SampledFunction:
    """Uniform samples of a 2*pi-periodic real function."""

    grid_size: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.grid_size < 1:
            raise ValidationError("grid_size must be >= 1")
        if self.values.shape != (self.grid_size,):
            raise ValidationError(
                f"values shape {self.values.shape} does not match grid_size {self.grid_size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("values must be finite")

    @classmethod
    def from_values(cls, values) -> "SampledFunction":
        values = np.asarray(values, dtype=np.float64)
        return cls(grid_size=len(values), values=values)

    @property
    def x(self) -> np.ndarray:
        """Grid points 2*pi*i/G."""
        return TWO_PI * np.arange(self.grid_size) / self.grid_size

    def mean(self) -> float:
        return neumaier_total(self.values) / self.grid_size

    def integral(self) -> float:
        """Rectangle-rule integral over one period."""
        return (TWO_PI / self.grid_size) * neumaier_total(self.values)


@dataclass(eq=False)
class IntervalStats:
    """Prefix sums enabling O(1) interval means over a SampledFunction."""

    grid_size: int
    prefix: np.ndarray

    def interval_sum(self, i: int, j: int) -> float:
        """Sum of samples i..j-1 (0 <= i <= j <= G)."""
        return self.prefix[j] - self.prefix[i]

    def interval_mean(self, i: int, j: int) -> float:
        if j <= i:
            raise ValidationError("empty interval")
        return (self.prefix[j] - self.prefix[i]) / (j - i)


def prefix_sums(f: SampledFunction) -> IntervalStats:
    """Compensated prefix sums; prefix[0] = 0, prefix[j] = sum(values[:j])."""
    return IntervalStats(grid_size=f.grid_size, prefix=neumaier_prefix(f.values))


def default_grid_size(exponent: int) -> int:
    """Desk-scale grid convention G = 2 * 3**m, so triadic interval
    boundaries of scale k <= m land exactly on grid lines."""
    if exponent < 0:
        raise ValidationError("grid exponent must be >= 0")
    return 2 * 3**exponent


def triadic_scale_count(G: int) -> int:
    """Largest k with 3**k dividing G."""
    k = 0
    while G % 3 == 0:
        G //= 3
        k += 1
    return k
