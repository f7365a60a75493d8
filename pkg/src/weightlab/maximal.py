"""Discrete uncentered Hardy-Littlewood maximal operator on periodic sampled
functions: an exhaustive reference implementation and an exact fast one.

The interval family is all wrapped runs of 1..G consecutive cells, read as a
step density.  Both implementations rank the same family of floating-point
interval means (built from one shared compensated prefix array over two
concatenated periods), so on generic inputs their outputs agree exactly, not
just to rounding.  The one caveat: when several intervals tie in real
arithmetic (collinear prefix points, e.g. runs of equal samples), their
rounded means spread over a few ulps of the prefix-sum scale, and the hull
path keeps a single representative of the tie while the exhaustive scan
takes the highest rounding; the reported suprema then differ by that
rounding spread, each being a valid evaluation of the same real supremum.
Intervals longer than one period never compete: any such mean is a convex
combination of means of length <= G.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import doubled_prefix, maximal_fast_kernel, maximal_naive_kernel
from .errors import NumericFailure, ValidationError
from .sampling import SampledFunction

NAIVE_GRID_LIMIT = 2**16


@dataclass(eq=False)
class MaximalResult:
    """Mf together with, per point, the winning interval as (start, length);
    ties resolve to the shortest interval, then the leftmost cyclic start."""

    values: SampledFunction
    argbest: np.ndarray  # shape (G, 2): cyclic start cell, cell count

    def best_interval(self, i: int):
        return int(self.argbest[i, 0]), int(self.argbest[i, 1])


@dataclass(eq=False)
class WeightBundle:
    """A constructed weight omega^t with its provenance parameters."""

    omega: SampledFunction
    t: float
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValidationError(f"t must be in [0,1], got {self.t}")
        if np.any(self.omega.values < 0):
            raise ValidationError("weight samples must be nonnegative")

    @property
    def grid_size(self) -> int:
        return self.omega.grid_size


def _pack(values, arg_start, arg_len, G) -> MaximalResult:
    argbest = np.stack([arg_start, arg_len], axis=1)
    return MaximalResult(
        values=SampledFunction(grid_size=G, values=values), argbest=argbest
    )


def maximal_naive(f: SampledFunction) -> MaximalResult:
    """Exhaustive enumeration over every wrapped interval; the oracle."""
    if f.grid_size > NAIVE_GRID_LIMIT:
        raise ValidationError(
            f"naive maximal is quadratic; grid {f.grid_size} exceeds {NAIVE_GRID_LIMIT}"
        )
    values = np.abs(f.values)
    S = doubled_prefix(values)
    M, arg_start, arg_len = maximal_naive_kernel(values, S)
    return _pack(M, arg_start, arg_len, f.grid_size)


def maximal_fast(f: SampledFunction) -> MaximalResult:
    """Hull-tangent maximal function, identical output to maximal_naive."""
    values = np.abs(f.values)
    S = doubled_prefix(values)
    M, arg_start, arg_len = maximal_fast_kernel(values, S)
    return _pack(M, arg_start, arg_len, f.grid_size)


def maximal_values(values: np.ndarray) -> np.ndarray:
    """Fast maximal on a bare array; used by diagnostics probes."""
    values = np.abs(np.asarray(values, dtype=np.float64))
    S = doubled_prefix(values)
    M, _, _ = maximal_fast_kernel(values, S)
    return M


def power_weight(values: np.ndarray, t: float) -> np.ndarray:
    """values**t with the endpoints kept exact and finiteness enforced."""
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"t must be in [0,1], got {t}")
    if t == 0.0:
        powered = np.ones_like(values)
    elif t == 1.0:
        powered = values
    else:
        powered = values**t
    if not np.all(np.isfinite(powered)):
        raise NumericFailure(
            "non-finite sample in omega^t; the grid cannot represent this weight"
        )
    return powered


def build_omega(
    ftilde: SampledFunction, t: float, provenance: dict | None = None
) -> WeightBundle:
    """Maximal function of the density, raised pointwise to the power t."""
    if np.any(ftilde.values < 0):
        raise ValidationError("density must be nonnegative")
    powered = power_weight(maximal_fast(ftilde).values.values, t)
    prov = dict(provenance or {})
    prov.setdefault("G", ftilde.grid_size)
    prov["t"] = t
    return WeightBundle(
        omega=SampledFunction(grid_size=ftilde.grid_size, values=powered),
        t=t,
        provenance=prov,
    )
