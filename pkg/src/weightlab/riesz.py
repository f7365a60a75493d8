"""Riesz-product partial products, the norms driving the construction, index
selection, and assembly of the L log L density they feed into the maximal
operator.

The partial products P_n(t) = prod_{j=0..n} (1 + eps*cos(3^j t)) are
nonnegative trigonometric polynomials of degree (3^(n+1)-1)/2 with unit mean;
their L^p norms for p > 1 grow without bound while the mean stays 1, and the
density assembled here inherits a controlled L log L norm together with
unbounded higher-norm behaviour.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._kernels import neumaier_total
from .errors import IndexNotFound, ValidationError
from .sampling import TWO_PI, SampledFunction, default_grid_size

log = logging.getLogger(__name__)

LLOGL_CONVENTIONS = ("plain", "normalized", "prenormalized")


@dataclass(frozen=True)
class RieszSpec:
    """Parameters of one partial product: factor strength and top level."""

    epsilon: float
    level: int

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must be in (0,1), got {self.epsilon}")
        if self.level < 0:
            raise ValidationError(f"level must be >= 0, got {self.level}")

    @property
    def degree(self) -> int:
        return (3 ** (self.level + 1) - 1) // 2


@dataclass(frozen=True)
class FtildeSpec:
    """Truncated series defining the density: K terms with weights 2^-n,
    each a selected partial product divided by its L log L norm.

    llogl_convention fixes the measure normalization of that divisor:
    'plain' integrates against dx, 'normalized' against dx/2pi, and
    'prenormalized' rescales each product to unit L^1(dx) mass first (the
    hypothesis under which the L log L vs L^p bound is stated).  Selected
    N values may be grid-capped fallbacks; see plan_indices.
    """

    epsilon: float
    terms: int
    selected_indices: tuple = ()
    llogl_convention: str = "prenormalized"

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must be in (0,1), got {self.epsilon}")
        if self.terms < 1:
            raise ValidationError(f"terms must be >= 1, got {self.terms}")
        if self.llogl_convention not in LLOGL_CONVENTIONS:
            raise ValidationError(
                f"llogl_convention must be one of {LLOGL_CONVENTIONS}"
            )
        object.__setattr__(self, "selected_indices", tuple(self.selected_indices))

    @property
    def p_exponents(self) -> tuple:
        """p_n = 1 + 1/n for n = 1..K."""
        return tuple(1.0 + 1.0 / n for n in range(1, self.terms + 1))

    def validate_indices(self):
        if len(self.selected_indices) != self.terms:
            raise ValidationError(
                f"selected_indices has {len(self.selected_indices)} entries, need {self.terms}"
            )
        if any(N < 1 for N in self.selected_indices):
            raise ValidationError("selected indices must be strictly positive")


def eval_riesz_product(spec: RieszSpec, x) -> float:
    """Pointwise product prod_{j<=n} (1 + eps*cos(3^j x)); x taken mod 2*pi."""
    x = np.asarray(x, dtype=np.float64)
    out = np.ones_like(x)
    for j in range(spec.level + 1):
        out = out * (1.0 + spec.epsilon * np.cos(3**j * x))
    if out.ndim == 0:
        return float(out)
    return out


def sample_riesz(spec: RieszSpec, G: int) -> SampledFunction:
    """Sample the partial product on the uniform G-grid."""
    if G < 1:
        raise ValidationError("grid size must be >= 1")
    x = TWO_PI * np.arange(G) / G
    return SampledFunction(grid_size=G, values=eval_riesz_product(spec, x))


def lp_norm(f: SampledFunction, p: float) -> float:
    """Rectangle-rule L^p(dx) norm on [0, 2*pi)."""
    if p < 1:
        raise ValidationError(f"p must be >= 1, got {p}")
    powered = np.abs(f.values) ** p
    return ((TWO_PI / f.grid_size) * neumaier_total(powered)) ** (1.0 / p)


def llogl_norm(f: SampledFunction, measure: str = "dx") -> float:
    """Rectangle-rule integral of |f| log(e + |f|).

    measure='dx' integrates against Lebesgue measure on [0, 2*pi);
    measure='dx/2pi' against the normalized probability measure.
    """
    a = np.abs(f.values)
    total = neumaier_total(a * np.log(np.e + a))
    if measure == "dx":
        return (TWO_PI / f.grid_size) * total
    if measure == "dx/2pi":
        return total / f.grid_size
    raise ValidationError(f"unknown measure {measure!r}")


def llogl_divisor(P: SampledFunction, convention: str) -> float:
    """L log L normalizer used when assembling the density."""
    if convention == "plain":
        return llogl_norm(P)
    if convention == "normalized":
        return llogl_norm(P, measure="dx/2pi")
    if convention == "prenormalized":
        unit = SampledFunction(P.grid_size, P.values / lp_norm(P, 1.0))
        return llogl_norm(unit)
    raise ValidationError(f"unknown llogl convention {convention!r}")


def selection_grid(N: int) -> int:
    """Smallest grid of the 2*3^m family exceeding 3^(N+1), so the p=2 norm
    of P_N is quadrature-exact."""
    return default_grid_size(N + 1)


def select_index(
    epsilon: float,
    n: int,
    N_max: int,
    threshold_base: float = 4.0,
) -> int:
    """Least N <= N_max with ||P_N||_{1+1/n} >= threshold_base**n.

    Norms are computed at per-candidate grids G = 2*3^(N+1) under Lebesgue
    measure dx.  The norm sequence along the search path is checked to be
    nondecreasing; violations are logged, not raised.  Raises IndexNotFound
    when no index qualifies (raise N_max or epsilon).
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if N_max < 0:
        raise ValidationError(f"N_max must be >= 0, got {N_max}")
    p = 1.0 + 1.0 / n
    threshold = float(threshold_base) ** n
    prev = -np.inf
    for N in range(N_max + 1):
        norm = lp_norm(sample_riesz(RieszSpec(epsilon, N), selection_grid(N)), p)
        if norm < prev:
            log.warning(
                "norm monotonicity violation at N=%d: %.6g < %.6g (eps=%g, p=%g)",
                N, norm, prev, epsilon, p,
            )
        prev = norm
        if norm >= threshold:
            return N
    raise IndexNotFound(
        f"no N <= {N_max} with ||P_N||_{p:.4g} >= {threshold:.4g} "
        f"(eps={epsilon}); raise N_max or epsilon"
    )


def plan_indices(
    epsilon: float,
    terms: int,
    N_max: int,
    threshold_base: float = 4.0,
    strict: bool = False,
):
    """Selection policy for a desk-scale build bounded by N_max.

    Thresholds beyond the first level are normally unreachable on any
    affordable grid, so when select_index fails for level n the slot falls
    back to N_max - (terms - n): the deepest grid-compatible indices,
    staggered so each term still contributes a distinct top scale.  Returns
    (indices, threshold_met) and raises only under strict=True.
    """
    indices = []
    met = []
    for n in range(1, terms + 1):
        try:
            N = select_index(epsilon, n, N_max, threshold_base)
            found = True
        except IndexNotFound:
            if strict:
                raise
            N = N_max - (terms - n)
            found = False
        if indices and N < indices[-1]:
            N = indices[-1]
        if N < 1:
            raise ValidationError(
                f"grid too small: fallback index for level {n} is {N} < 1; "
                f"raise the grid exponent"
            )
        indices.append(N)
        met.append(found)
    return indices, met


def build_ftilde(spec: FtildeSpec, G: int) -> SampledFunction:
    """Assemble sum_{n=1..K} 2^-n * P_{N_n} / divisor(P_{N_n}) on the G-grid."""
    spec.validate_indices()
    N_top = max(spec.selected_indices)
    if G <= 3 ** (N_top + 1):
        raise ValidationError(
            f"grid {G} too coarse for index {N_top}; need G > 3^{N_top + 1} = {3 ** (N_top + 1)}"
        )
    out = np.zeros(G)
    for n, N in enumerate(spec.selected_indices, start=1):
        P = sample_riesz(RieszSpec(spec.epsilon, N), G)
        out += (0.5**n / llogl_divisor(P, spec.llogl_convention)) * P.values
    return SampledFunction(grid_size=G, values=out)
