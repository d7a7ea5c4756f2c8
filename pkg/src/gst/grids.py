"""Dyadic depth sequences adapted to a weight.

A depth sequence {n_k} is a w-grid when some power beta makes
w^beta(2^-n_k) <= w(2^-n_{k+1}) for all k.  The constructor scans, for each
level, for the smallest depth multiplying eta(t) = lambda log(1/w(t)) by at
least C; monotonicity and the halving inequality
(1/2) eta(t/2) <= eta(t) <= eta(t/2) pin the post-hoc ratio below 10C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .weights import Weight, effective_lambda

DEPTH_CAP = 10 ** 7


class GridConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class DyadicGrid:
    depths: tuple
    C_param: Optional[float] = None
    lam: float = 1.0

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.depths, self.depths[1:])):
            raise ValueError("grid depths must be strictly increasing")
        if self.C_param is not None and self.C_param <= 2:
            raise ValueError("construction parameter C must exceed 2")

    def __len__(self):
        return len(self.depths)


def neg_log_at_depth(w: Weight, n: int) -> float:
    """log(1/w(2^-n)), analytic in n for the built-in kinds (no underflow)."""
    u = n * math.log(2.0)
    if w.kind == "power":
        return w.params[0] * u
    if w.kind == "log_power":
        c, depth = w.params
        val = 1.0 + u
        for _ in range(depth - 1):
            val = 1.0 + math.log(val)
        return c * math.log(val)
    if w.kind == "exp_log":
        alpha, beta = w.params
        return alpha * (1.0 + u) ** beta
    t = 2.0 ** -n
    if t == 0.0:
        return math.inf
    return -float(w.log(t))


def build_grid(w: Weight, n0: int, C: float, k_max: int) -> DyadicGrid:
    """Recursive grid construction: each step multiplies eta by at least C."""
    if C <= 2:
        raise ValueError("C must exceed 2")
    if n0 < 1:
        raise ValueError("n0 must be a positive integer")
    lam = effective_lambda(w)
    if lam * neg_log_at_depth(w, n0) <= math.log(2.0) * (1.0 + 1e-12):
        raise ValueError(
            f"w^lambda(2^-{n0}) >= 1/2: choose a larger starting depth n0")

    def eta(n: int) -> float:
        return lam * neg_log_at_depth(w, n)

    depths = [n0]
    for _ in range(k_max):
        cur = depths[-1]
        # relative slack so exact ratio ties are not lost to rounding
        target = C * eta(cur) * (1.0 - 1e-12)
        lo, hi = cur, cur + 1
        while eta(hi) < target:
            lo = hi
            hi = min(2 * hi, DEPTH_CAP)
            if hi == DEPTH_CAP and eta(hi) < target:
                raise GridConstructionError(
                    f"depth cap {DEPTH_CAP} reached before eta ratio {C}")
        while hi - lo > 1:  # smallest n with eta(n) >= target
            mid = (lo + hi) // 2
            if eta(mid) >= target:
                hi = mid
            else:
                lo = mid
        ratio = eta(hi) / eta(cur)
        if ratio >= 10 * C:
            raise GridConstructionError(
                "eta ratio overshoots 10C: the halving inequality "
                "(1/2) eta(t/2) <= eta(t) fails for this weight")
        depths.append(hi)
    return DyadicGrid(tuple(depths), C_param=C, lam=lam)


def feasible_grid(w: Weight, n0: int, C: float, k_max: int) -> DyadicGrid:
    """build_grid with the level count backed off to fit the depth cap.

    Slow weights (iterated logs) may exhaust the 10^7 depth cap after a few
    levels; the deepest achievable grid still certifies the construction.
    """
    for k in range(k_max, 0, -1):
        try:
            return build_grid(w, n0, C, k)
        except GridConstructionError:
            continue
    raise GridConstructionError(
        f"no grid level fits below the depth cap for {w.label()}")


@dataclass(frozen=True)
class GridCheck:
    is_w_grid: bool
    beta: float
    superlacunary: bool


def verify_grid(g: DyadicGrid, w: Weight) -> GridCheck:
    """Smallest admissible beta plus the product-domination property.

    beta is max_k log w(2^-n_{k+1}) / log w(2^-n_k); the grid condition
    holds with that exponent.  The product property is checked in log
    space: sum_{j<=k} log(1/w(2^-n_j)) <= log(1/w(2^-n_{k+1})).
    """
    us = [neg_log_at_depth(w, n) for n in g.depths]
    if any(u <= 0 or not math.isfinite(u) for u in us):
        return GridCheck(False, math.nan, False)
    if len(us) == 1:
        return GridCheck(True, 1.0, True)
    ratios = [b / a for a, b in zip(us, us[1:])]
    beta = max(ratios)
    running = 0.0
    superlac = True
    for j in range(len(us) - 1):
        running += us[j]
        if running > us[j + 1] * (1.0 + 1e-12):
            superlac = False
            break
    return GridCheck(math.isfinite(beta), beta, superlac)


def geometric_sum_margin(g: DyadicGrid, w: Weight) -> float:
    """Worst slack in sum_{j<=k} eta_j <= eta_{k+1} / (C-1) over built grids."""
    if g.C_param is None:
        raise ValueError("grid lacks a construction parameter")
    us = [neg_log_at_depth(w, n) for n in g.depths]
    worst = -math.inf
    running = 0.0
    for j in range(len(us) - 1):
        running += us[j]
        worst = max(worst, running - us[j + 1] / (g.C_param - 1.0))
    return worst


def grid_to_json(g: DyadicGrid) -> dict:
    return {"depths": list(g.depths), "C": g.C_param, "lambda": g.lam}


def grid_from_json(obj: dict) -> DyadicGrid:
    return DyadicGrid(tuple(int(n) for n in obj["depths"]),
                      C_param=obj.get("C"), lam=obj.get("lambda", 1.0))
