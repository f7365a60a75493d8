"""Circle homeomorphisms h_t(e^{ix}) = e^{i g_t(x)} driven by powers of a
weight, their quasisymmetry (doubling) constants, and the split of log h_t'
into its real and imaginary boundary parts.

g_t is the cumulative rectangle integral of omega^t rescaled by 2*pi/total
mass so the map closes up into a genuine circle homeomorphism; the rescale
multiplies the density by a constant and therefore changes no doubling, BMO,
or Muckenhoupt diagnostic.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ._kernels import adjacent_ratio_scan, neumaier_prefix
from .errors import NonIncreasingError, ValidationError
from .maximal import WeightBundle
from .sampling import TWO_PI, SampledFunction, triadic_scale_count

_CLOSURE_GUARD = 1e-9


@dataclass(eq=False)
class WeldingMap:
    """Boundary correspondence x -> g(x) on [0, 2*pi], g(0)=0, g(2*pi)=2*pi."""

    t: float
    g_values: np.ndarray  # length G+1, strictly increasing
    total_mass: float  # integral of omega^t before rescaling
    grid_size: int

    def arc_image_length(self, i: int, j: int) -> float:
        """|h(I)| for the arc between grid lines i <= j."""
        return self.g_values[j] - self.g_values[i]


def build_welding(w: WeightBundle, t: float) -> WeldingMap:
    """Integrate omega^t and rescale so the welding closes up."""
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"t must be in [0,1], got {t}")
    omega = w.omega.values
    if np.any(omega <= 0.0):
        raise NonIncreasingError("omega must be positive for a welding map")
    density = np.ones_like(omega) if t == 0.0 else omega**t
    G = w.grid_size
    raw = neumaier_prefix(density) * (TWO_PI / G)
    total = raw[-1]
    if total <= 0.0:
        raise NonIncreasingError("cumulative integral is not increasing")
    g = raw * (TWO_PI / total)
    if np.any(np.diff(g) <= 0.0):
        raise NonIncreasingError("rescaled welding is not strictly increasing")
    if abs(g[-1] - TWO_PI) > _CLOSURE_GUARD:
        raise NonIncreasingError("welding failed to close up")
    g[-1] = TWO_PI
    return WeldingMap(t=t, g_values=g, total_mass=float(total), grid_size=G)


def quasisymmetry_constant(m: WeldingMap, max_scale: int) -> float:
    """Max over triadic scales k <= max_scale and adjacent arc pairs of
    |h(I)| / |h(I*)| with its reciprocal; >= 1."""
    G = m.grid_size
    if max_scale < 1 or max_scale > triadic_scale_count(G):
        raise ValidationError(f"max_scale {max_scale} incompatible with grid {G}")
    # image lengths are differences of g, so scan the increments like a density
    increments = np.diff(m.g_values)
    S = neumaier_prefix(increments)
    worst = 1.0
    for k in range(1, max_scale + 1):
        worst = max(worst, float(adjacent_ratio_scan(S, G, G // 3**k)))
    return worst


def log_derivative_parts(m: WeldingMap, w: WeightBundle):
    """(log g_t', g_t(x) - x) on the grid.

    log g_t' = t*log(omega) + log(2*pi/total_mass): the power-law part plus
    the constant the closure rescale introduces.  The imaginary part is the
    periodic displacement, zero at both endpoints by construction.
    """
    G = m.grid_size
    if w.grid_size != G:
        raise ValidationError("weight and welding grids differ")
    if np.any(w.omega.values <= 0.0):
        raise ValidationError("omega must be positive to take logs")
    real = m.t * np.log(w.omega.values) + np.log(TWO_PI / m.total_mass)
    x = TWO_PI * np.arange(G) / G
    imag = m.g_values[:G] - x
    return (
        SampledFunction(grid_size=G, values=real),
        SampledFunction(grid_size=G, values=imag),
    )


def save_welding_csv(m: WeldingMap, path):
    """Rows (x_i, g(x_i)); the header carries t and the pre-rescale mass."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# t={m.t!r}\n")
        fh.write(f"# total_mass={m.total_mass!r}\n")
        fh.write(f"# grid_size={m.grid_size}\n")
        writer = csv.writer(fh)
        writer.writerow(["x", "g"])
        for i in range(m.grid_size + 1):
            x = TWO_PI * i / m.grid_size
            writer.writerow([repr(float(x)), repr(float(m.g_values[i]))])


def load_welding_csv(path) -> WeldingMap:
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key.strip()] = val.strip()
            elif not line.startswith("x,"):
                _, g = line.split(",")
                rows.append(float(g))
    g = np.array(rows)
    return WeldingMap(
        t=float(meta["t"]),
        g_values=g,
        total_mass=float(meta["total_mass"]),
        grid_size=int(meta["grid_size"]),
    )
