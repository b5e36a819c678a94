"""Forward and backward iteration of lines, fold abscissas, and the
critical-value / stable-trace ladders.

Two line shapes are tracked.  A forward line y = s*(x - x0) + y0 carries
the slope s; one branch step sends s to -1/(b*s + sigma*a) and any point
through the branch.  A backward (near-vertical) line x = t*(y - y0) + x0
carries the vertical slope t; one inverse-branch step sends t to
-b/(t + sigma*a) and the x-axis trace c to (a - b - 1 - c)/(sigma*a + t).
The trace recursion is exact for every b >= 0, so the degenerate tent case
needs no separate code path, and it avoids the 1/b blow-up that mapping an
anchor point through explicit branch inverses would produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    MINUS,
    PLUS,
    DomainError,
    Params,
    Point,
    RegionError,
    apply_branch,
    fixed_points,
    multipliers,
)
from .symbolic import Itinerary

_EXCLUDED_TOL = 1e-13


class SlopeError(DomainError):
    """A line iteration hit the excluded (vertical-image) slope."""


@dataclass(frozen=True)
class FwdLine:
    """Non-vertical line through `anchor` with slope dy/dx = `slope`."""

    slope: float
    anchor: Point

    def y_at(self, x: float) -> float:
        return self.anchor[1] + self.slope * (x - self.anchor[0])


@dataclass(frozen=True)
class BwdLine:
    """Near-vertical line through `anchor` with vertical slope dx/dy."""

    vslope: float
    anchor: Point

    def x_at(self, y: float) -> float:
        return self.anchor[0] + self.vslope * (y - self.anchor[1])

    @property
    def trace(self) -> float:
        """x-axis intersection."""
        return self.x_at(0.0)


def slope_fwd(p: Params, sigma: int, slope: float) -> float:
    """Slope of the sigma-branch image of a line with the given slope."""
    denom = p.b * slope + sigma * p.a
    if abs(denom) < _EXCLUDED_TOL:
        raise SlopeError(f"slope {slope} maps to a vertical line under branch {sigma:+d}")
    return -1.0 / denom


def slope_bwd(p: Params, sigma: int, vslope: float) -> float:
    """Vertical slope of the sigma-branch preimage of a near-vertical line."""
    denom = vslope + sigma * p.a
    if abs(denom) < _EXCLUDED_TOL:
        raise SlopeError(f"vslope {vslope} is excluded under inverse branch {sigma:+d}")
    return -p.b / denom


def _push(p: Params, sigma: int, slope: float, k: float) -> tuple[float, float]:
    """One forward branch step on (slope, k) where (0, k) is on the line."""
    denom = p.b * slope + sigma * p.a
    if abs(denom) < _EXCLUDED_TOL:
        raise SlopeError(f"slope {slope} maps to a vertical line under branch {sigma:+d}")
    return -1.0 / denom, (p.a - p.b - 1.0 - p.b * k) / denom


def _pull(p: Params, sigma: int, vslope: float, c: float) -> tuple[float, float]:
    """One inverse branch step on (vslope, c) where (c, 0) is on the line."""
    denom = vslope + sigma * p.a
    if abs(denom) < _EXCLUDED_TOL:
        raise SlopeError(f"vslope {vslope} is excluded under inverse branch {sigma:+d}")
    return -p.b / denom, (p.a - p.b - 1.0 - c) / denom


def iterate_line_fwd(p: Params, word: Itinerary, line: FwdLine) -> FwdLine:
    """Push a line through the branches named by `word`, first symbol first."""
    slope, anchor = line.slope, line.anchor
    for sigma in word:
        slope_next = slope_fwd(p, sigma, slope)
        anchor = apply_branch(p, sigma, anchor)
        slope = slope_next
    return FwdLine(slope=slope, anchor=anchor)


def iterate_line_bwd(p: Params, word: Itinerary, line: BwdLine) -> BwdLine:
    """Pull a near-vertical line back through the forward word `word`.

    Inverse branches apply right-to-left of the word, so the result is the
    preimage of `line` under the word's branch composition.  The returned
    line is re-anchored at its x-axis trace (same line, stable arithmetic,
    and well defined in the noninvertible case b = 0).
    """
    vslope, c = line.vslope, line.trace
    for sigma in reversed(word):
        vslope, c = _pull(p, sigma, vslope, c)
    return BwdLine(vslope=vslope, anchor=(c, 0.0))


def turning_point(p: Params, line: FwdLine) -> float:
    """Fold abscissa of the full-map image of a line crossing x = 0.

    The image of (0, k) is ((a-b-1) - b*k, 0) under either branch, and the
    two branch images of the line meet there.
    """
    k = line.y_at(0.0)
    return (p.a - p.b - 1.0) - p.b * k


def stable_line(p: Params, sigma: int) -> BwdLine:
    """Carrier line of the local stable manifold of the sigma fixed point."""
    z_minus, z_plus = fixed_points(p)
    z = z_plus if sigma == PLUS else z_minus
    mu = multipliers(p).mu
    return BwdLine(vslope=-sigma * mu, anchor=z)


def unstable_line(p: Params, sigma: int) -> FwdLine:
    """Carrier line of the local unstable manifold of the sigma fixed point."""
    z_minus, z_plus = fixed_points(p)
    z = z_plus if sigma == PLUS else z_minus
    lam = multipliers(p).lam
    return FwdLine(slope=-sigma / lam, anchor=z)


def _require_mod(p: Params) -> None:
    if not p.in_mod:
        raise RegionError(f"({p.a}, {p.b}) is outside the partition region a > 3b+1")


def r_value(p: Params, m: int | float) -> float:
    """x-axis trace of the m-th stable pullback (m = inf gives the limit).

    The trace ladder starts at the local stable line of the right fixed
    point and pulls back through one minus branch per generation and a
    final plus branch.
    """
    _require_mod(p)
    if m == math.inf:
        mult = multipliers(p)
        return 1.0 - (mult.lam + 2.0) / (p.a * mult.lam + p.b) * p.b
    if m < 1:
        raise DomainError(f"need m >= 1, got {m}")
    word = (PLUS,) + (MINUS,) * (int(m) - 1)
    return iterate_line_bwd(p, word, stable_line(p, PLUS)).trace


def u_value(p: Params, m: int | float, side: str) -> float:
    """Fold abscissa of the m-th image ladder, left or right boundary.

    The m-th folded image of the horizontal boundary y = -1 (side "L") or
    y = +1 (side "R") of the invariant band; m = inf gives the x-axis
    crossing lam - 1 of the left fixed point's unstable line.
    """
    _require_mod(p)
    if side not in ("L", "R"):
        raise DomainError(f"side must be 'L' or 'R', got {side!r}")
    if m == math.inf:
        return multipliers(p).lam - 1.0
    if m < 2:
        raise DomainError(f"need m >= 2, got {m}")
    sigma0 = MINUS if side == "L" else PLUS
    word = (PLUS,) + (MINUS,) * (int(m) - 2)
    slope, k = 0.0, float(sigma0)
    for sigma in word:
        slope, k = _push(p, sigma, slope, k)
    return (p.a - p.b - 1.0) - p.b * k


def boundary_turning_points(p: Params) -> tuple[float, float]:
    """(u_left, u_right) = (a-2b-1, a-1): folds of the band boundaries."""
    return (p.a - 2.0 * p.b - 1.0, p.a - 1.0)


def u_gap(p: Params, m: int, side: str) -> float:
    """u_value(p, inf, side) - u_value(p, m, side), cancellation-free.

    The gap scales like (b/lam)^(m-1), which underflows the float
    resolution of the fold values themselves for small b; this form keeps
    full relative accuracy by propagating the slope gap e_j = 1/lam - s_j
    and crossing gap d_j = k_j - k_inf through positive-term recursions.
    """
    _require_mod(p)
    if side not in ("L", "R"):
        raise DomainError(f"side must be 'L' or 'R', got {side!r}")
    if m < 2:
        raise DomainError(f"need m >= 2, got {m}")
    lam = multipliers(p).lam
    sigma0 = -1.0 if side == "L" else 1.0
    s = -1.0 / p.a
    e = 1.0 / lam + 1.0 / p.a
    d = (p.a - p.b - 1.0 - p.b * sigma0) / p.a - (1.0 - lam) / lam
    for _ in range(m - 2):
        denom = p.a - p.b * s
        d = p.b * ((lam - 1.0) * e + lam * d) / (denom * lam)
        e = e * p.b / (denom * lam)
        s = -1.0 / (p.b * s - p.a)
    return p.b * d


def _return_word(m: int, n: int) -> Itinerary:
    return (PLUS,) + (MINUS,) * (m - 2) + (PLUS, PLUS) + (MINUS,) * (n - 2)


def p_value(p: Params, m: int | float, n: int) -> float:
    """Fold abscissa of the (m+n)-step image of the x-axis.

    The x-axis is pushed through (+, -^(m-2), +, +, -^(n-2)) and the final
    full-map application folds the image; the fold abscissa is returned.
    m = inf replaces the first m-dependent block by the unstable line of
    the left fixed point, the limit object of that block.
    """
    _require_mod(p)
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if m == math.inf:
        line = unstable_line(p, MINUS)
        slope, k = line.slope, line.y_at(0.0)
        word: Itinerary = (PLUS, PLUS) + (MINUS,) * (n - 2)
    else:
        if m < 2:
            raise DomainError(f"need m >= 2, got {m}")
        slope, k = 0.0, 0.0
        word = _return_word(int(m), n)
    for sigma in word:
        slope, k = _push(p, sigma, slope, k)
    return (p.a - p.b - 1.0) - p.b * k


def q_value(p: Params, m: int, n: int) -> float:
    """x-axis trace of the critical-locus pullback through the return word.

    The switching line x = 0 is pulled back through (+, -^(m-2), +, +,
    -^(n-2)); the resulting near-vertical line crosses the x-axis at the
    unique point whose forward word-orbit lands on the switching line.
    """
    _require_mod(p)
    if m < 2 or n < 2:
        raise DomainError(f"need m, n >= 2, got ({m}, {n})")
    vslope, c = 0.0, 0.0
    for sigma in reversed(_return_word(m, n)):
        vslope, c = _pull(p, sigma, vslope, c)
    return c


@dataclass(frozen=True)
class CriticalData:
    """Trace and fold ladders for one parameter pair.

    r[m] increases to r_inf; u_l[m] and u_r[m] converge to u_inf; the band
    boundary folds u_left <= everything <= u_right bracket the ladder.
    """

    u_left: float
    u_right: float
    u_inf: float
    r_inf: float
    r: dict[int, float]
    u_l: dict[int, float]
    u_r: dict[int, float]


def critical_data(p: Params, m_max: int) -> CriticalData:
    _require_mod(p)
    u_left, u_right = boundary_turning_points(p)
    return CriticalData(
        u_left=u_left,
        u_right=u_right,
        u_inf=multipliers(p).lam - 1.0,
        r_inf=r_value(p, math.inf),
        r={m: r_value(p, m) for m in range(1, m_max + 1)},
        u_l={m: u_value(p, m, "L") for m in range(2, m_max + 1)},
        u_r={m: u_value(p, m, "R") for m in range(2, m_max + 1)},
    )
