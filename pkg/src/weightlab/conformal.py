"""Boundary harmonic analysis and the curve built from the weight: conjugate
function, Poisson extension, the Jensen/H^1 probes, the curve trace with
tangent omega*e^{ib}, chord-arc statistics, Bloch-norm probe, and arc-length
reparametrization.

Two evaluators are used on the disk, each structurally sound for its check:

* Convolution with the positive Poisson kernel, weights normalized on the
  grid, makes the discrete Jensen gap nonnegative for every r < 1.
* Fourier-side damping of the boundary coefficients by r^|k| gives the exact
  harmonic extension of the band-limited boundary data, making exp(u) a
  genuine |analytic| function whose circular means are nondecreasing in r.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ._kernels import chord_arc_scan as _chord_arc_kernel
from ._kernels import neumaier_prefix, neumaier_total
from .errors import NonMonotonicError, ValidationError
from .maximal import WeightBundle
from .riesz import lp_norm
from .sampling import TWO_PI, SampledFunction


@dataclass(eq=False)
class FourierSeries:
    """Discrete Fourier coefficients c_k of a sampled function, k indexed
    -G/2..G/2-1; real inputs satisfy c_{-k} = conj(c_k)."""

    grid_size: int
    coefficients: np.ndarray  # fft layout, length G, normalized by 1/G

    def coefficient(self, k: int) -> complex:
        G = self.grid_size
        if not -G // 2 <= k < G - G // 2:
            raise ValidationError(f"k={k} out of range for grid {G}")
        return complex(self.coefficients[k % G])


def fourier_series(f: SampledFunction) -> FourierSeries:
    return FourierSeries(
        grid_size=f.grid_size, coefficients=np.fft.fft(f.values) / f.grid_size
    )


def save_fourier_csv(series: FourierSeries, path):
    G = series.grid_size
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "re", "im"])
        for k in range(-(G // 2), G - G // 2):
            c = series.coefficients[k % G]
            writer.writerow([k, repr(float(c.real)), repr(float(c.imag))])


@dataclass(eq=False)
class CurveTrace:
    """Polyline approximation of the curve with cumulative arc length."""

    points: np.ndarray  # complex, length G+1
    cumulative_length: np.ndarray  # length G+1
    closed: bool
    closure_defect: float
    rotated_tangent: bool

    @property
    def total_length(self) -> float:
        return float(self.cumulative_length[-1])


def conjugate_function(f: SampledFunction) -> SampledFunction:
    """Boundary harmonic conjugate via the multiplier -i*sign(k); the k=0
    coefficient is dropped (v(0) = 0) and the Nyquist cosine maps to a sine
    that vanishes identically on the grid."""
    G = f.grid_size
    if G % 2 != 0:
        raise ValidationError("conjugate function needs an even grid")
    V = np.fft.rfft(f.values)
    V[0] = 0.0
    V[1:] *= -1j
    V[-1] = 0.0
    return SampledFunction(grid_size=G, values=np.fft.irfft(V, n=G))


def poisson_extension(f: SampledFunction, r: float, phi) -> float:
    """P_r * f at z = r e^{i phi} by the rectangle rule on the sample grid."""
    if not 0.0 <= r < 1.0:
        raise ValidationError(f"r must be in [0,1), got {r}")
    phi_arr = np.atleast_1d(np.asarray(phi, dtype=np.float64))
    theta = phi_arr[:, None] - f.x[None, :]
    kernel = (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(theta) + r * r)
    out = kernel @ f.values / f.grid_size
    return float(out[0]) if np.isscalar(phi) or np.ndim(phi) == 0 else out


def _harmonic_extension_fft(boundary: np.ndarray, r: float) -> np.ndarray:
    """Exact harmonic extension of the band-limited boundary data to radius
    r, evaluated on the full angular grid."""
    G = len(boundary)
    V = np.fft.rfft(boundary)
    ks = np.arange(len(V))
    return np.fft.irfft(V * r**ks, n=G)


@dataclass(eq=False)
class JensenH1Report:
    radii: tuple
    min_jensen_gap: dict  # radius -> min over angles of the normalized-kernel gap
    h1_means: dict  # radius -> integral of |Phi'(r e^{i phi})| d phi
    h1_bound: float  # ||omega||_1
    monotone: bool


def jensen_h1_probe(
    w: WeightBundle, radii=(0.5, 0.9, 0.99), probe_angles: int = 64
) -> JensenH1Report:
    """Jensen gap exp(P_r*log w) <= P_r*w at probe angles, and the radial
    H^1 means of exp(harmonic extension of log w)."""
    omega = w.omega.values
    if np.any(omega <= 0.0):
        raise ValidationError("omega must be positive")
    G = w.grid_size
    log_omega = np.log(omega)
    x = TWO_PI * np.arange(G) / G
    phis = TWO_PI * np.arange(probe_angles) / probe_angles
    gaps = {}
    means = {}
    for r in radii:
        if not 0.0 <= r < 1.0:
            raise ValidationError(f"radius {r} not in [0,1)")
        theta = phis[:, None] - x[None, :]
        kernel = (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(theta) + r * r)
        kernel /= kernel.sum(axis=1, keepdims=True)
        gap = kernel @ omega - np.exp(kernel @ log_omega)
        gaps[float(r)] = float(gap.min())
        u = _harmonic_extension_fft(log_omega, r)
        means[float(r)] = float((TWO_PI / G) * neumaier_total(np.exp(u)))
    ordered = [means[float(r)] for r in sorted(radii)]
    monotone = all(b >= a * (1.0 - 1e-12) for a, b in zip(ordered, ordered[1:]))
    return JensenH1Report(
        radii=tuple(float(r) for r in radii),
        min_jensen_gap=gaps,
        h1_means=means,
        h1_bound=lp_norm(w.omega, 1.0),
        monotone=monotone,
    )


def trace_curve(w: WeightBundle, rotate_tangent: bool = True) -> CurveTrace:
    """Cumulative integral of the tangent field omega*e^{ib} with
    b the conjugate function of log omega.

    rotate_tangent=True multiplies by i*e^{ix} (the base-point rotation that
    turns the constant weight into the unit circle); False integrates the
    raw tangent.  Closure is reported, never forced.
    """
    omega = w.omega.values
    if np.any(omega <= 0.0):
        raise ValidationError("omega must be positive to take log")
    G = w.grid_size
    b = conjugate_function(SampledFunction(G, np.log(omega))).values
    x = TWO_PI * np.arange(G) / G
    phase = b + x + 0.5 * np.pi if rotate_tangent else b
    tangent = omega * np.exp(1j * phase)
    dz = tangent * (TWO_PI / G)
    points = np.empty(G + 1, dtype=np.complex128)
    points.real = neumaier_prefix(dz.real)
    points.imag = neumaier_prefix(dz.imag)
    cumulative = neumaier_prefix(omega) * (TWO_PI / G)
    defect = float(abs(points[-1] - points[0]))
    return CurveTrace(
        points=points,
        cumulative_length=cumulative,
        closed=defect <= 1e-6 * max(cumulative[-1], 1.0),
        closure_defect=defect,
        rotated_tangent=rotate_tangent,
    )


def chord_arc_pairs(G: int, pair_budget: int):
    """Deterministic pair schedule: all coarse triadic-aligned pairs, all
    antipodal pairs, then a Kronecker low-discrepancy fill up to budget."""
    pi_list = []
    pj_list = []
    # triadic-aligned pairs at scales coarse enough to stay quadratic-cheap
    scale = 3
    while scale <= 729 and G % scale == 0:
        idx = np.arange(0, G, G // scale)
        ii, jj = np.meshgrid(idx, idx, indexing="ij")
        keep = ii < jj
        pi_list.append(ii[keep])
        pj_list.append(jj[keep])
        scale *= 3
    if G % 2 == 0:
        half = np.arange(G // 2)
        pi_list.append(half)
        pj_list.append(half + G // 2)
    used = sum(len(a) for a in pi_list)
    fill = max(pair_budget - used, 0)
    if fill > 0:
        k = np.arange(fill, dtype=np.float64)
        # 2D Kronecker sequence driven by the plastic constant
        rho = 1.3247179572447460
        a1 = (k / rho) % 1.0
        a2 = (k / rho**2) % 1.0
        ii = np.minimum((a1 * G).astype(np.int64), G - 1)
        jj = np.minimum((a2 * G).astype(np.int64), G - 1)
        keep = ii != jj
        pi_list.append(np.minimum(ii[keep], jj[keep]))
        pj_list.append(np.maximum(ii[keep], jj[keep]))
    return np.concatenate(pi_list), np.concatenate(pj_list)


def chord_arc_scan(c: CurveTrace, pair_budget: int = 200_000) -> float:
    """Max over the pair schedule of min(arc, total-arc)/chord."""
    G = len(c.points) - 1
    if G < 2:
        raise ValidationError("trace too short")
    pi_idx, pj_idx = chord_arc_pairs(G, pair_budget)
    return float(
        _chord_arc_kernel(
            np.ascontiguousarray(c.points.real[:G]),
            np.ascontiguousarray(c.points.imag[:G]),
            c.cumulative_length[:G],
            c.total_length,
            pi_idx,
            pj_idx,
        )
    )


def bloch_norm_from_coefficients(
    coeffs: np.ndarray, radii, n_angles: int = 1024
) -> float:
    """max over the (r, angle) grid of (1 - r^2)*|phi'(r e^{i theta})| for
    phi(z) = sum_k coeffs[k] z^k."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    K = len(coeffs)
    best = 0.0
    ks = np.arange(1, K)
    for r in radii:
        if not 0.0 <= r < 1.0:
            raise ValidationError(f"radius {r} not in [0,1)")
        d = ks * coeffs[1:] * r ** (ks - 1)
        pad = np.zeros(max(n_angles, len(d)), dtype=np.complex128)
        pad[: len(d)] = d
        vals = np.abs(np.fft.fft(pad))
        best = max(best, float((1.0 - r * r) * vals.max()))
    return best


def bloch_norm_probe(
    w: WeightBundle, radii=None, angles_per_radius: int = 1024
) -> float:
    """Bloch-norm probe of the analytic completion of log omega.

    phi(z) = c_0 + 2*sum_{k>0} c_k z^k from the Fourier coefficients of
    log omega; radii default to a grid capped at 1 - 3/G, beyond which the
    truncated series is unreliable.
    """
    omega = w.omega.values
    if np.any(omega <= 0.0):
        raise ValidationError("omega must be positive")
    G = w.grid_size
    if radii is None:
        rmax = 1.0 - 3.0 / G
        radii = np.concatenate([[0.0], np.geomspace(0.05, rmax, 23)])
    c = np.fft.rfft(np.log(omega)) / G
    coeffs = 2.0 * c
    coeffs[0] = c[0]
    return bloch_norm_from_coefficients(coeffs, radii, angles_per_radius)


def arclength_reparam(c: CurveTrace, b: SampledFunction) -> SampledFunction:
    """b composed with the inverse of the arc-length function, sampled on a
    uniform arc-length grid of the same size."""
    G = b.grid_size
    s = c.cumulative_length
    if len(s) != G + 1:
        raise ValidationError("trace and boundary grids differ")
    if np.any(np.diff(s) <= 0.0):
        raise NonMonotonicError("arc length stalls; omega vanishes on a cell")
    total = s[-1]
    s_grid = total * np.arange(G) / G
    t_nodes = TWO_PI * np.arange(G + 1) / G
    alpha = np.interp(s_grid, s, t_nodes)
    b_ext = np.concatenate([b.values, b.values[:1]])
    beta = np.interp(alpha, t_nodes, b_ext)
    return SampledFunction(grid_size=G, values=beta)


def save_curve_csv(c: CurveTrace, path):
    G = len(c.points) - 1
    with open(path, "w", newline="") as fh:
        fh.write(f"# closed={c.closed}\n")
        fh.write(f"# closure_defect={c.closure_defect!r}\n")
        fh.write(f"# rotated_tangent={c.rotated_tangent}\n")
        writer = csv.writer(fh)
        writer.writerow(["x", "re", "im", "s"])
        for i in range(G + 1):
            writer.writerow(
                [
                    repr(float(TWO_PI * i / G)),
                    repr(float(c.points[i].real)),
                    repr(float(c.points[i].imag)),
                    repr(float(c.cumulative_length[i])),
                ]
            )
