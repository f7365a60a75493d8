"""Weight-regularity diagnostics: doubling ratios, Muckenhoupt characteristics,
reverse-Hoelder probes, BMO norms, distribution functions, and the layer-cake
and L log L interplay checks.

Every sup-type quantity is a max over an explicit finite interval family and
is therefore a lower bound for the continuum supremum; reports record which
family produced each number.  Families:

* "all": every wrapped grid interval of 1..G-1 cells (quadratic scan).
* "triadic": aligned triadic intervals of length 2*pi/3^k for each k >= 1
  with 3^k | G (linear scan; the family the doubling estimates concern).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._kernels import (
    adjacent_ratio_scan,
    ap_scan_all,
    ap_scan_triadic,
    bmo_scan_all,
    bmo_scan_triadic,
    doubled_prefix,
    neumaier_prefix,
    neumaier_total,
    rh_scan_all,
    rh_scan_triadic,
)
from .errors import ValidationError
from .maximal import WeightBundle, maximal_values
from .riesz import lp_norm
from .sampling import TWO_PI, SampledFunction, triadic_scale_count

ALL_FAMILY_GRID_LIMIT = 2 * 3**9
BMO_ALL_GRID_LIMIT = 2 * 3**8

FAMILIES = ("all", "triadic")


@dataclass(eq=False)
class DistributionFunction:
    """m(t) = measure of {|f| > t} at the requested thresholds."""

    thresholds: np.ndarray
    masses: np.ndarray


@dataclass(eq=False)
class LlogLBoundReport:
    """Outcome of the L log L vs L^p comparison on the normalized circle."""

    status: str  # "ok" or "hypothesis_not_met"
    p: float
    lp_norm: float
    llogl_integral: float
    empirical_constant: float
    convention: str = "measure dx/2pi, density normalized to unit mass"


@dataclass(eq=False)
class DiagnosticsReport:
    """Flat bundle of every weight diagnostic, JSON-serializable."""

    doubling_by_scale: dict
    ap_char: dict
    a1_char: float
    bmo_lognorm: float
    rh_probe: dict
    norm_table: dict
    family: str
    provenance: dict = field(default_factory=dict)

    def to_flat_dict(self) -> dict:
        out = {
            "family": self.family,
            "a1_char": _json_scalar(self.a1_char),
            "bmo_lognorm": _json_scalar(self.bmo_lognorm),
        }
        for k, v in sorted(self.doubling_by_scale.items()):
            out[f"doubling.scale_{k}"] = _json_scalar(v)
        for p, v in sorted(self.ap_char.items()):
            out[f"ap.p_{p:g}"] = _json_scalar(v)
        for d, v in sorted(self.rh_probe.items()):
            out[f"rh.delta_{d:g}"] = _json_scalar(v)
        for p, v in sorted(self.norm_table.items()):
            out[f"norm.p_{p:g}"] = _json_scalar(v)
        for k, v in sorted(self.provenance.items()):
            out[f"provenance.{k}"] = _json_scalar(v)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_flat_dict(), sort_keys=True, indent=2)


def _json_scalar(v):
    """Infinity markers serialize as the string "inf" so reports stay
    strict JSON."""
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not np.isfinite(v):
        return "inf"
    if isinstance(v, tuple):
        return list(v)
    return v


def _check_family(family: str):
    if family not in FAMILIES:
        raise ValidationError(f"family must be one of {FAMILIES}, got {family!r}")


def doubling_constant(w: WeightBundle, max_scale: int) -> dict:
    """Per-scale max of the two-sided mass ratio over adjacent triadic
    intervals of length 2*pi/3^k, k = 1..max_scale."""
    G = w.grid_size
    if max_scale < 1:
        raise ValidationError("max_scale must be >= 1")
    if max_scale > triadic_scale_count(G):
        raise ValidationError(
            f"3^{max_scale} does not divide the grid size {G}"
        )
    S = neumaier_prefix(w.omega.values)
    out = {}
    for k in range(1, max_scale + 1):
        out[k] = float(adjacent_ratio_scan(S, G, G // 3**k))
    return out


def ap_characteristic(w: WeightBundle, p: float, family: str = "all") -> float:
    """sup over the family of (mean_I w) * (mean_I w^(-1/(p-1)))^(p-1).

    Returns +inf (reported, not raised) when the weight has a zero sample.
    """
    if p <= 1:
        raise ValidationError(f"p must be > 1, got {p}")
    _check_family(family)
    G = w.grid_size
    omega = w.omega.values
    if np.any(omega == 0.0):
        return np.inf
    dual = omega ** (-1.0 / (p - 1.0))
    if family == "all":
        if G > ALL_FAMILY_GRID_LIMIT:
            raise ValidationError(
                f"family 'all' is quadratic; grid {G} exceeds {ALL_FAMILY_GRID_LIMIT}"
            )
        return float(
            ap_scan_all(doubled_prefix(omega), doubled_prefix(dual), G, p - 1.0)
        )
    kmax = triadic_scale_count(G)
    return float(
        ap_scan_triadic(
            neumaier_prefix(omega), neumaier_prefix(dual), G, p - 1.0, kmax
        )
    )


def a1_characteristic(w: WeightBundle) -> float:
    """max over the grid of M(omega)/omega; +inf if omega has a zero sample."""
    omega = w.omega.values
    if np.any(omega == 0.0):
        return np.inf
    return float(np.max(maximal_values(omega) / omega))


def bmo_norm(f: SampledFunction, family: str = "all") -> float:
    """sup over the family of mean_I |f - mean_I f|."""
    _check_family(family)
    G = f.grid_size
    if family == "all":
        if G > BMO_ALL_GRID_LIMIT:
            raise ValidationError(
                f"family 'all' BMO scan is O(G^2 log G); grid {G} exceeds {BMO_ALL_GRID_LIMIT}"
            )
        dbl = np.concatenate((f.values, f.values))
        order = np.argsort(dbl, kind="stable")
        ranks = np.empty(2 * G, dtype=np.int64)
        ranks[order] = np.arange(2 * G)
        return float(
            bmo_scan_all(f.values, doubled_prefix(f.values), dbl[order], ranks, G)
        )
    kmax = triadic_scale_count(G)
    return float(bmo_scan_triadic(f.values, neumaier_prefix(f.values), G, kmax))


def reverse_holder_probe(
    w: WeightBundle, deltas, family: str = "all"
) -> dict:
    """Per-delta sup of (mean_I w^(1+d))^(1/(1+d)) / mean_I w."""
    _check_family(family)
    G = w.grid_size
    omega = w.omega.values
    out = {}
    for d in deltas:
        if d <= 0:
            raise ValidationError(f"deltas must be positive, got {d}")
        powered = omega ** (1.0 + d)
        if family == "all":
            if G > ALL_FAMILY_GRID_LIMIT:
                raise ValidationError(
                    f"family 'all' is quadratic; grid {G} exceeds {ALL_FAMILY_GRID_LIMIT}"
                )
            out[float(d)] = float(
                rh_scan_all(
                    doubled_prefix(omega), doubled_prefix(powered), G, 1.0 / (1.0 + d)
                )
            )
        else:
            kmax = triadic_scale_count(G)
            out[float(d)] = float(
                rh_scan_triadic(
                    neumaier_prefix(omega),
                    neumaier_prefix(powered),
                    G,
                    1.0 / (1.0 + d),
                    kmax,
                )
            )
    return out


def distribution_function(f: SampledFunction, thresholds) -> DistributionFunction:
    """m(t) = (2*pi/G) * #{i : |f_i| > t}; thresholds must be ascending."""
    thresholds = np.asarray(thresholds, dtype=np.float64)
    if np.any(np.diff(thresholds) < 0):
        raise ValidationError("thresholds must be sorted ascending")
    a = np.sort(np.abs(f.values))
    counts = f.grid_size - np.searchsorted(a, thresholds, side="right")
    return DistributionFunction(
        thresholds=thresholds, masses=(TWO_PI / f.grid_size) * counts
    )


def _psi_pair(psi: str, exponent: float):
    if psi == "t*log(e+t)":
        return (
            lambda t: t * np.log(np.e + t),
            lambda t: np.log(np.e + t) + t / (np.e + t),
        )
    if psi == "t^p":
        return (
            lambda t: t**exponent,
            lambda t: exponent * t ** (exponent - 1.0),
        )
    raise ValidationError(f"psi must be 't*log(e+t)' or 't^p', got {psi!r}")


def layer_cake_check(
    f: SampledFunction,
    psi: str = "t*log(e+t)",
    exponent: float = 2.0,
    threshold_count: int = 4096,
):
    """Both sides of the layer-cake identity
    integral psi(f) dx = integral psi'(t) m(t) dt.

    The left side is grid quadrature of psi(f); the right side is an
    independent trapezoid quadrature of psi'(t) m(t) over a threshold grid,
    so the two only agree to quadrature accuracy (about 1e-3 relative at
    the default resolutions).
    """
    if np.any(f.values < 0):
        raise ValidationError("layer-cake check needs f >= 0")
    psi_f, dpsi = _psi_pair(psi, exponent)
    lhs = (TWO_PI / f.grid_size) * neumaier_total(psi_f(f.values))
    top = float(np.max(f.values))
    if top == 0.0:
        return float(lhs), 0.0
    # mostly-linear thresholds with a geometric refinement near zero, where
    # psi' of the power branch can be steep
    lin = np.linspace(0.0, top, threshold_count)
    geo = top * np.geomspace(1e-12, 1.0, threshold_count // 4)
    ts = np.unique(np.concatenate([lin, geo]))
    sorted_abs = np.sort(np.abs(f.values))
    counts = f.grid_size - np.searchsorted(sorted_abs, ts, side="right")
    masses = (TWO_PI / f.grid_size) * counts
    rhs = float(np.trapezoid(dpsi(ts) * masses, ts))
    return float(lhs), rhs


def verify_llogl_lp_bound(f: SampledFunction, p: float) -> LlogLBoundReport:
    """Empirical constant in the bound
    integral f log(e+f) dnu <= C/(p-1)^2 * log ||f||_p,
    checked on the normalized circle (dnu = dx/2pi) after rescaling f to
    unit mass.  The hypothesis ||f||_p >= 2 gates the check: status
    'hypothesis_not_met' is a skip, not a failure.
    """
    if p <= 1:
        raise ValidationError(f"p must be > 1, got {p}")
    if np.any(f.values < 0):
        raise ValidationError("density must be nonnegative")
    mean = f.mean()
    if mean <= 0:
        raise ValidationError("density must have positive mass")
    g = f.values / mean  # unit mass under dx/2pi
    lp = float(np.mean(g**p) ** (1.0 / p))
    llogl = float(np.mean(g * np.log(np.e + g)))
    if lp < 2.0:
        return LlogLBoundReport(
            status="hypothesis_not_met",
            p=p,
            lp_norm=lp,
            llogl_integral=llogl,
            empirical_constant=np.nan,
        )
    const = llogl * (p - 1.0) ** 2 / np.log(lp)
    return LlogLBoundReport(
        status="ok",
        p=p,
        lp_norm=lp,
        llogl_integral=llogl,
        empirical_constant=float(const),
    )


def diagnose(
    w: WeightBundle,
    p_values=(1.25, 1.5, 2.0),
    delta_values=(0.25, 0.5),
    max_scale: int | None = None,
    family: str | None = None,
) -> DiagnosticsReport:
    """Run the full diagnostic battery on one weight."""
    G = w.grid_size
    if family is None:
        family = "all" if G <= ALL_FAMILY_GRID_LIMIT else "triadic"
    if max_scale is None:
        max_scale = triadic_scale_count(G)
    omega = w.omega
    log_omega = SampledFunction(G, np.log(omega.values)) if np.all(
        omega.values > 0
    ) else None
    norm_table = {1.0: lp_norm(omega, 1.0)}
    for p in p_values:
        norm_table[float(p)] = lp_norm(omega, float(p))
    return DiagnosticsReport(
        doubling_by_scale=doubling_constant(w, max_scale),
        ap_char={float(p): ap_characteristic(w, float(p), family) for p in p_values if p > 1},
        a1_char=a1_characteristic(w),
        bmo_lognorm=(
            bmo_norm(log_omega, "triadic") if log_omega is not None else np.inf
        ),
        rh_probe=reverse_holder_probe(w, delta_values, family),
        norm_table=norm_table,
        family=family,
        provenance=dict(w.provenance),
    )
