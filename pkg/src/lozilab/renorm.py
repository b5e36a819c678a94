"""The vertical-strip partition, regime classification, and the log scale.

Strips live on the band R x [-1, 1].  Their boundaries are near-vertical
stable segments obtained by pulling the local stable lines of the two
fixed points back through branch inverses; a strip is the closed region
between two of them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import MINUS, PLUS, DomainError, Params, RegionError, multipliers
from .geometry import (
    BwdLine,
    iterate_line_bwd,
    r_value,
    stable_line,
    u_value,
)

_TRACE_TIE_TOL = 1e-12


@dataclass(frozen=True)
class Strip:
    """Closed vertical strip between two near-vertical boundary segments."""

    left: BwdLine
    right: BwdLine
    label: str

    @property
    def left_trace(self) -> float:
        return self.left.trace

    @property
    def right_trace(self) -> float:
        return self.right.trace

    def contains(self, v: tuple[float, float], tol: float = 1e-9) -> bool:
        x, y = v
        if not -1.0 - tol <= y <= 1.0 + tol:
            return False
        return self.left.x_at(y) - tol <= x <= self.right.x_at(y) + tol


class Regime(enum.Enum):
    SMALL = "small"
    INTERMEDIATE = "intermediate"
    LARGE = "large"


def build_partition(p: Params, m_max: int = 16) -> list[Strip]:
    """Strips B, C_2 .. C_{m_max}, D with strictly increasing inner traces.

    B sits between the first two minus-pullbacks of the right fixed
    point's stable line; each C_m between consecutive plus-pullbacks; D
    spans from the left fixed point's stable line pullback family limit
    to its plus-pullback.
    """
    if not p.in_mod:
        raise RegionError(f"({p.a}, {p.b}) is outside the partition region a > 3b+1")
    if m_max < 2:
        raise DomainError(f"need m_max >= 2, got {m_max}")
    betas = [stable_line(p, PLUS)]
    for _ in range(2, m_max + 1):
        betas.append(iterate_line_bwd(p, (MINUS,), betas[-1]))
    gammas = [iterate_line_bwd(p, (PLUS,), beta) for beta in betas]
    beta_inf = stable_line(p, MINUS)
    gamma_inf = iterate_line_bwd(p, (PLUS,), beta_inf)

    strips = [Strip(left=betas[1], right=betas[0], label="B")]
    for m in range(2, m_max + 1):
        strips.append(Strip(left=gammas[m - 2], right=gammas[m - 1], label=f"C{m}"))
    strips.append(Strip(left=beta_inf, right=gamma_inf, label="D"))

    for strip in strips:
        if strip.left_trace > strip.right_trace + _TRACE_TIE_TOL:
            raise DomainError(f"strip {strip.label} has crossed boundaries")
    traces = [g.trace for g in gammas] + [gamma_inf.trace]
    if any(t0 >= t1 for t0, t1 in zip(traces, traces[1:])):
        raise DomainError("stable traces are not strictly increasing")
    return strips


def partition_rows(strips: list[Strip]) -> list[tuple[str, float, float]]:
    """Rows (label, left_trace, right_trace) for CSV export."""
    return [(s.label, s.left_trace, s.right_trace) for s in strips]


def exists_Cmn(p: Params, m: int, n: int) -> bool:
    """Whether the depth-two strip pair C_{m,n} splits off two components.

    Sufficient condition: the n-th stable trace does not exceed the m-th
    left fold.  Exact ties count as existing (strips are closed).
    """
    if m < 2 or n < 2:
        raise DomainError(f"need m, n >= 2, got ({m}, {n})")
    return r_value(p, n) <= u_value(p, m, "L") + _TRACE_TIE_TOL


def classify_regime(p: Params, m: int, n: int) -> Regime:
    """Position of the n-th folds relative to the strips around C_m.

    LARGE (r_m <= u_n^L) forces the period-(m+n) orbit pair to exist;
    SMALL (u_n^R < r_{m-1}) forbids it; INTERMEDIATE contains the border
    collision.
    """
    if not m > n >= 2:
        raise DomainError(f"need m > n >= 2, got ({m}, {n})")
    if u_value(p, n, "R") < r_value(p, m - 1):
        return Regime.SMALL
    if r_value(p, m) <= u_value(p, n, "L"):
        return Regime.LARGE
    return Regime.INTERMEDIATE


def log_coord(p: Params, x: float) -> float:
    """Log-scale coordinate -log_lam(r_inf - x); defined for x < r_inf."""
    r_inf = r_value(p, math.inf)
    if x >= r_inf:
        raise DomainError(f"x = {x} is not below the trace limit {r_inf}")
    return -math.log(r_inf - x) / math.log(multipliers(p).lam)
