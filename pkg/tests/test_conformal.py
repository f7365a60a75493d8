import math

import numpy as np
import pytest

from weightlab import (
    FtildeSpec,
    SampledFunction,
    ValidationError,
    WeightBundle,
    arclength_reparam,
    bloch_norm_from_coefficients,
    bloch_norm_probe,
    build_ftilde,
    build_omega,
    chord_arc_scan,
    conjugate_function,
    fourier_series,
    jensen_h1_probe,
    lp_norm,
    poisson_extension,
    trace_curve,
)
from weightlab.conformal import save_curve_csv, save_fourier_csv
from weightlab.errors import NonMonotonicError
from weightlab.sampling import TWO_PI, default_grid_size


def bundle(values):
    return WeightBundle(SampledFunction.from_values(np.asarray(values, float)), 1.0)


def xgrid(G):
    return TWO_PI * np.arange(G) / G


# ------------------------------------------------------------- conjugate


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_conjugate_of_cos_is_sin(k):
    G = 486
    f = SampledFunction.from_values(np.cos(k * xgrid(G)))
    v = conjugate_function(f).values
    assert np.abs(v - np.sin(k * xgrid(G))).max() <= 1e-10


def test_conjugate_of_sin_is_minus_cos():
    G = 486
    f = SampledFunction.from_values(np.sin(3 * xgrid(G)))
    v = conjugate_function(f).values
    assert np.abs(v + np.cos(3 * xgrid(G))).max() <= 1e-10


def test_conjugate_of_constant_is_zero():
    f = SampledFunction.from_values(np.full(54, 4.2))
    assert np.abs(conjugate_function(f).values).max() <= 1e-12


def test_conjugate_involution_on_bandlimited():
    rng = np.random.default_rng(5)
    G = 162
    x = xgrid(G)
    f = np.zeros(G)
    for k in range(1, G // 4):
        f += rng.standard_normal() * np.cos(k * x) + rng.standard_normal() * np.sin(k * x)
    f += 3.0
    sf = SampledFunction.from_values(f)
    twice = conjugate_function(conjugate_function(sf)).values
    assert np.abs(twice + (f - f.mean())).max() <= 1e-10


def test_conjugate_parseval():
    rng = np.random.default_rng(6)
    G = 162
    x = xgrid(G)
    f = 2.0 + np.cos(x) + 0.5 * np.sin(7 * x) + 0.25 * np.cos(40 * x)
    sf = SampledFunction.from_values(f)
    v = conjugate_function(sf).values
    energy_f = np.mean((f - f.mean()) ** 2)
    assert np.mean(v**2) == pytest.approx(energy_f, rel=1e-12)


def test_conjugate_needs_even_grid():
    with pytest.raises(ValidationError):
        conjugate_function(SampledFunction.from_values(np.ones(27)))


# ------------------------------------------------------------- extension


def test_poisson_of_one_is_one():
    f = SampledFunction.from_values(np.ones(486))
    for r in (0.0, 0.5, 0.9):
        assert poisson_extension(f, r, 1.2345) == pytest.approx(1.0, abs=1e-10)


def test_poisson_of_cos_decays_linearly():
    G = 486
    f = SampledFunction.from_values(np.cos(xgrid(G)))
    for r in (0.3, 0.7):
        for phi in (0.0, 1.0, 2.5):
            assert poisson_extension(f, r, phi) == pytest.approx(
                r * math.cos(phi), abs=1e-10
            )


def test_poisson_center_is_mean():
    rng = np.random.default_rng(7)
    f = SampledFunction.from_values(rng.random(162))
    assert poisson_extension(f, 0.0, 0.7) == pytest.approx(float(f.values.mean()), rel=1e-12)


def test_jensen_h1_on_constant():
    probe = jensen_h1_probe(bundle(np.ones(486)))
    for gap in probe.min_jensen_gap.values():
        assert abs(gap) <= 1e-12
    for mean in probe.h1_means.values():
        assert mean == pytest.approx(TWO_PI, rel=1e-12)
    assert probe.monotone


def test_jensen_gap_nonnegative_on_constructed_weight():
    ft = build_ftilde(FtildeSpec(0.1, 2, (5, 6)), default_grid_size(7))
    w = build_omega(ft, 1.0)
    probe = jensen_h1_probe(w)
    assert all(g >= 0.0 for g in probe.min_jensen_gap.values())
    means = [probe.h1_means[r] for r in sorted(probe.h1_means)]
    assert all(b >= a for a, b in zip(means, means[1:]))
    assert means[-1] <= probe.h1_bound + 1e-8


# ------------------------------------------------------------------ curve


def test_unit_circle_golden():
    G = default_grid_size(7)
    trace = trace_curve(bundle(np.ones(G)))
    assert trace.closure_defect <= 1e-10
    assert trace.total_length == lp_norm(SampledFunction.from_values(np.ones(G)), 1.0)
    ratio = chord_arc_scan(trace)
    assert ratio == pytest.approx(math.pi / 2.0, abs=1e-6)


def test_straight_segment_scan_is_one():
    G = default_grid_size(6)
    trace = trace_curve(bundle(np.ones(G)), rotate_tangent=False)
    # raw tangent of a constant weight traces a straight segment
    assert trace.closure_defect > 1.0
    assert chord_arc_scan(trace) == pytest.approx(1.0, rel=1e-12)


def test_scan_invariant_under_rigid_motion():
    ft = build_ftilde(FtildeSpec(0.1, 1, (4,)), default_grid_size(6))
    trace = trace_curve(build_omega(ft, 1.0))
    base = chord_arc_scan(trace)
    rot = np.exp(1j * 0.83)
    trace.points = rot * trace.points + (2.0 - 1.0j)
    assert chord_arc_scan(trace) == pytest.approx(base, rel=1e-12)


def test_curve_length_matches_l1_exactly():
    ft = build_ftilde(FtildeSpec(0.1, 2, (4, 5)), default_grid_size(6))
    w = build_omega(ft, 1.0)
    trace = trace_curve(w)
    assert trace.total_length == lp_norm(w.omega, 1.0)


def test_closure_defect_small_at_small_eps():
    ft = build_ftilde(FtildeSpec(0.1, 2, (6, 7)), default_grid_size(8))
    trace = trace_curve(build_omega(ft, 1.0))
    assert trace.closure_defect < 0.05 * trace.total_length


# ------------------------------------------------------------------ bloch


def test_bloch_of_constant_weight_is_zero():
    assert bloch_norm_probe(bundle(np.ones(486))) <= 1e-12


def test_bloch_synthetic_identity_map():
    coeffs = np.array([0.0, 1.0], dtype=complex)  # phi(z) = z
    assert bloch_norm_from_coefficients(coeffs, [0.0, 0.3, 0.6]) == pytest.approx(1.0)


def test_bloch_decreases_with_eps():
    vals = []
    for eps in (0.2, 0.1, 0.05):
        ft = build_ftilde(FtildeSpec(eps, 2, (5, 6)), default_grid_size(7))
        vals.append(bloch_norm_probe(build_omega(ft, 1.0)))
    assert vals[0] > vals[1] > vals[2]


# ------------------------------------------------------------- arc length


def test_reparam_identity():
    G = 54
    b = SampledFunction.from_values(np.sin(xgrid(G)))
    trace = trace_curve(bundle(np.ones(G)))
    beta = arclength_reparam(trace, b)
    assert np.allclose(beta.values, b.values, atol=1e-12)


def test_reparam_linear_time_change():
    G = 54
    b = SampledFunction.from_values(np.cos(xgrid(G)))
    trace = trace_curve(bundle(2.0 * np.ones(G)))
    beta = arclength_reparam(trace, b)
    # total length 4*pi; uniform s-grid maps back to x = s/2
    s = trace.total_length * np.arange(G) / G
    assert np.allclose(beta.values, np.interp(s / 2.0, xgrid(G), b.values, period=TWO_PI), atol=1e-10)


def test_reparam_rejects_stalled_length():
    G = 18
    trace = trace_curve(bundle(np.ones(G)))
    trace.cumulative_length = np.concatenate([[0.0, 0.0], trace.cumulative_length[2:]])
    with pytest.raises(NonMonotonicError):
        arclength_reparam(trace, SampledFunction.from_values(np.zeros(G)))


def test_reparam_bmo_reported_not_judged():
    # exploratory metric: finite across refinements, no verdict on a limit
    from weightlab import bmo_norm

    for m in (6, 7):
        G = default_grid_size(m)
        ft = build_ftilde(FtildeSpec(0.1, 2, (4, 5)), G)
        w = build_omega(ft, 1.0)
        trace = trace_curve(w)
        b = conjugate_function(SampledFunction(G, np.log(w.omega.values)))
        beta = arclength_reparam(trace, b)
        assert np.isfinite(bmo_norm(beta, "triadic"))


# ------------------------------------------------------------------ misc


def test_fourier_series_symmetry_and_csv(tmp_path):
    rng = np.random.default_rng(8)
    f = SampledFunction.from_values(rng.random(54))
    series = fourier_series(f)
    for k in (1, 5, 20):
        assert series.coefficient(-k) == pytest.approx(
            np.conj(series.coefficient(k)), rel=1e-12
        )
    save_fourier_csv(series, tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "k,re,im"
    assert len(lines) == 55


def test_curve_csv(tmp_path):
    trace = trace_curve(bundle(np.ones(18)))
    save_curve_csv(trace, tmp_path / "c.csv")
    text = (tmp_path / "c.csv").read_text()
    assert "# closed=True" in text
    assert text.count("\n") == 3 + 1 + 19
