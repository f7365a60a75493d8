import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weightlab import (
    FtildeSpec,
    IndexNotFound,
    RieszSpec,
    ValidationError,
    build_ftilde,
    eval_riesz_product,
    llogl_norm,
    lp_norm,
    plan_indices,
    sample_riesz,
    select_index,
)
from weightlab.riesz import llogl_divisor, selection_grid
from weightlab.sampling import TWO_PI, SampledFunction, default_grid_size

EPS_BOUND = lambda eps: math.exp(math.pi * eps / (1.0 - eps))


def test_eval_trivial_single_factor():
    assert eval_riesz_product(RieszSpec(0.5, 0), 0.0) == pytest.approx(1.5)


@pytest.mark.parametrize("eps,n", [(0.3, 0), (0.5, 2), (0.9, 4)])
def test_eval_vanishes_at_half_pi(eps, n):
    # every factor has 3^j * pi/2 an odd multiple of pi/2
    assert eval_riesz_product(RieszSpec(eps, n), np.pi / 2) == pytest.approx(1.0, abs=1e-12)


def test_eval_matches_arbitrary_precision_product():
    # frozen from a 50-digit mpmath evaluation of the four factors
    got = eval_riesz_product(RieszSpec(0.9, 3), 1.0)
    assert got == pytest.approx(0.0214928675916006, rel=1e-13)


def test_sample_golden_four_points():
    P = sample_riesz(RieszSpec(0.5, 0), 4)
    assert np.allclose(P.values, [1.5, 1.0, 0.5, 1.0], atol=1e-15)


def test_sample_rejects_empty_grid():
    with pytest.raises(ValidationError):
        sample_riesz(RieszSpec(0.5, 0), 0)


@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("n", [0, 3, 6])
def test_unit_mass_when_grid_resolves_degree(eps, n):
    G = default_grid_size(n + 1)
    P = sample_riesz(RieszSpec(eps, n), G)
    assert P.integral() == pytest.approx(TWO_PI, rel=1e-12)


@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("n", [1, 4, 7])
def test_mean_square_identity(eps, n):
    # frequencies sum_{j in S} +-3^j are distinct, so the squared mass is
    # the product over levels of (1 + eps^2/2)
    G = default_grid_size(n + 1)
    P = sample_riesz(RieszSpec(eps, n), G)
    expected = TWO_PI * (1.0 + eps * eps / 2.0) ** (n + 1)
    assert TWO_PI * np.mean(P.values**2) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_fourier_coefficients_by_enumeration(n):
    # brute-force the coefficient multiset: every choice vector in
    # {-1,0,1}^(n+1) lands on its own frequency with weight
    # (eps/2)^(#nonzero), since signed sums of distinct powers of 3 are
    # unique
    eps = 0.7
    G = default_grid_size(n + 1)
    P = sample_riesz(RieszSpec(eps, n), G)
    spectrum = np.fft.rfft(P.values) / G
    expected = np.zeros(G // 2 + 1)
    for choice in np.ndindex(*(3,) * (n + 1)):
        signs = np.array(choice) - 1
        freq = int(np.sum(signs * 3 ** np.arange(n + 1)))
        if freq >= 0:
            expected[freq] += (eps / 2.0) ** int(np.count_nonzero(signs))
    assert np.allclose(np.abs(spectrum), expected, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    eps=st.floats(min_value=0.01, max_value=0.99),
    n=st.integers(min_value=0, max_value=8),
)
def test_product_nonnegative(eps, n):
    G = default_grid_size(min(n + 1, 6))
    P = sample_riesz(RieszSpec(eps, n), G)
    assert np.all(P.values >= 0.0)


@pytest.mark.parametrize("p", [1.25, 1.5, 2.0])
def test_lp_norm_nondecreasing_in_level(p):
    norms = [
        lp_norm(sample_riesz(RieszSpec(0.9, n), selection_grid(n)), p)
        for n in range(9)
    ]
    assert all(b >= a for a, b in zip(norms, norms[1:]))


def test_lp_norm_constants():
    ones = SampledFunction.from_values(np.ones(12))
    assert lp_norm(ones, 2.0) == pytest.approx(math.sqrt(TWO_PI), rel=1e-14)
    assert lp_norm(ones, 1.0) == pytest.approx(TWO_PI, rel=1e-14)


def test_lp_norm_parseval_example():
    P = sample_riesz(RieszSpec(0.5, 1), 54)
    assert lp_norm(P, 2.0) == pytest.approx(math.sqrt(TWO_PI) * 1.125, rel=1e-12)


def test_lp_norm_unit_mass():
    P = sample_riesz(RieszSpec(0.9, 5), default_grid_size(6))
    assert lp_norm(P, 1.0) == pytest.approx(TWO_PI, rel=1e-12)


def test_llogl_trivials():
    zeros = SampledFunction.from_values(np.zeros(8))
    ones = SampledFunction.from_values(np.ones(8))
    assert llogl_norm(zeros) == 0.0
    assert llogl_norm(ones) == pytest.approx(TWO_PI * math.log(math.e + 1.0), rel=1e-14)


def test_llogl_against_refined_quadrature():
    base = llogl_norm(sample_riesz(RieszSpec(0.9, 2), 2 * 3**4))
    fine = llogl_norm(sample_riesz(RieszSpec(0.9, 2), 8 * 2 * 3**4))
    assert base == pytest.approx(fine, rel=1e-8)


def test_select_index_golden():
    # independent oracle: least N with sqrt(2pi)*(1+eps^2/2)^((N+1)/2) >= 4
    eps = 0.9
    oracle = next(
        N
        for N in range(64)
        if math.sqrt(TWO_PI) * (1 + eps * eps / 2) ** ((N + 1) / 2) >= 4.0
    )
    assert oracle == 2
    assert select_index(eps, 1, 64) == 2


def test_select_index_not_found():
    with pytest.raises(IndexNotFound):
        select_index(0.5, 1, 2)


def test_select_index_monotone_in_level():
    # thresholds base^n with base=2 keep all three searches desk-sized
    found = [select_index(0.9, n, 12, threshold_base=2.0) for n in (1, 2, 3)]
    assert found == [0, 1, 10]
    assert all(b >= a for a, b in zip(found, found[1:]))


def test_plan_indices_fallback_and_strict():
    indices, met = plan_indices(0.9, 2, 7)
    assert indices == [2, 7]
    assert met == [True, False]
    indices, met = plan_indices(0.1, 3, 7)
    assert indices == [5, 6, 7]
    assert met == [False, False, False]
    with pytest.raises(IndexNotFound):
        plan_indices(0.1, 2, 7, strict=True)
    with pytest.raises(ValidationError):
        plan_indices(0.1, 9, 7)  # ladder would go below 1


def test_build_ftilde_single_term_ratio():
    for convention in ("plain", "normalized", "prenormalized"):
        spec = FtildeSpec(0.9, 1, (3,), llogl_convention=convention)
        G = default_grid_size(5)
        ft = build_ftilde(spec, G)
        P = sample_riesz(RieszSpec(0.9, 3), G)
        expected = (0.5 / llogl_divisor(P, convention)) * P.values
        assert np.array_equal(ft.values, expected)
        assert np.all(ft.values >= 0.0)


def test_build_ftilde_guards():
    with pytest.raises(ValidationError):
        build_ftilde(FtildeSpec(0.9, 2, ()), 486)  # unpopulated indices
    with pytest.raises(ValidationError):
        build_ftilde(FtildeSpec(0.9, 1, (0,)), 486)  # not strictly positive
    with pytest.raises(ValidationError):
        build_ftilde(FtildeSpec(0.9, 1, (5,)), 486)  # grid too coarse


@settings(max_examples=15, deadline=None)
@given(
    eps=st.floats(min_value=0.05, max_value=0.95),
    K=st.integers(min_value=1, max_value=3),
)
def test_llogl_bound_structural_plain_convention(eps, K):
    # dividing by the plain L log L norm makes the convexity bound collapse:
    # the plain L log L norm of the sum is at most 1 - 2^-K
    indices = tuple(range(2, 2 + K))
    spec = FtildeSpec(eps, K, indices, llogl_convention="plain")
    ft = build_ftilde(spec, default_grid_size(2 + K))
    assert llogl_norm(ft) <= (1.0 - 0.5**K) + 1e-9


def test_ftilde_shift_bound():
    # two-sided exp(+-pi*eps/(1-eps)) comparison under the shift 2pi/3^s,
    # at every triadic scale the grid supports
    eps = 0.9
    G = default_grid_size(8)
    ft = build_ftilde(FtildeSpec(eps, 2, (2, 7)), G)
    bound = EPS_BOUND(eps) * (1.0 + 1e-12)
    for s in range(1, 9):
        shifted = np.roll(ft.values, -(G // 3**s))
        ratio = shifted / ft.values
        assert np.max(ratio) <= bound
        assert np.min(ratio) >= 1.0 / bound
