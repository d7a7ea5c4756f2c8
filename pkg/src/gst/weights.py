"""Weights and majorants on [0,1] with grid-certified regularity checks.

A weight is a continuous nondecreasing function w on [0,1] with w(0) = 0.
A majorant is a weight such that w^lambda is a modulus of continuity
(nondecreasing, subadditive, vanishing at 0) for some lambda > 0.  All
checks in this module operate on dyadic sample grids with an absolute
comparison tolerance of ORDER_TOL; they certify behaviour at the sampled
resolution, nothing finer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize, special

ORDER_TOL = 1e-12
CONTINUITY_DEPTH = 20
CONTINUITY_TOL = 1e-2
DEFAULT_LAMBDAS = (4.0, 2.0, 1.0, 0.5, 0.25, 0.125)


class InvalidWeightError(ValueError):
    """Weight evaluation broke a structural requirement (negative, NaN, or 0)."""


class UncertifiedError(RuntimeError):
    """A tail or error bound could not be certified for this weight."""


def _nested_log(t: np.ndarray, depth: int) -> np.ndarray:
    # L_1(t) = log(e/t), L_{d+1}(t) = 1 + log L_d(t); L_d(1) = 1, L_d(0+) = inf.
    with np.errstate(divide="ignore"):
        val = 1.0 + np.log(1.0 / t)
    for _ in range(depth - 1):
        val = 1.0 + np.log(val)
    return val


@dataclass(frozen=True)
class Weight:
    """A weight with vectorized evaluation and an analytic log form.

    ``log_eval`` returns log w(t); keeping it analytic lets checks reason
    about weights whose values underflow float64 (fast-decay fixtures).
    """

    kind: str
    params: tuple = ()
    lambda_hint: Optional[float] = None
    name: str = ""
    _eval: Optional[Callable] = field(default=None, repr=False, compare=False)
    _log_eval: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if self.kind == "power":
                (alpha,) = self.params
                out = np.power(t_arr, alpha)
            elif self.kind == "log_power":
                c, depth = self.params
                out = np.power(_nested_log(t_arr, depth), -c)
            elif self.kind == "exp_log":
                alpha, beta = self.params
                out = np.exp(-alpha * np.power(1.0 + np.log(1.0 / t_arr), beta))
            elif self.kind == "table":
                ts, ws = self.params
                out = np.interp(t_arr, ts, ws)
            else:
                out = np.asarray(self._eval(t_arr), dtype=float)
        if self.kind in ("power", "log_power", "exp_log"):
            out = np.where(t_arr == 0.0, 0.0, out)  # the t -> 0 limit
        return float(out) if np.isscalar(t) or out.ndim == 0 else out

    def log(self, t):
        """log w(t), finite for t > 0 whenever mathematically finite."""
        t_arr = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if self.kind == "power":
                (alpha,) = self.params
                out = alpha * np.log(t_arr)
            elif self.kind == "log_power":
                c, depth = self.params
                out = -c * np.log(_nested_log(t_arr, depth))
            elif self.kind == "exp_log":
                alpha, beta = self.params
                out = -alpha * np.power(1.0 + np.log(1.0 / t_arr), beta)
            elif self._log_eval is not None:
                out = np.asarray(self._log_eval(t_arr), dtype=float)
            else:
                vals = self(t_arr)
                bad = (np.asarray(vals) == 0.0) & (t_arr > 0)
                if np.any(bad):
                    raise InvalidWeightError(
                        f"{self.label()} underflows to 0 at t>0 and has no log form"
                    )
                out = np.log(vals)
        return float(out) if np.isscalar(t) or out.ndim == 0 else out

    def pow(self, lam: float) -> "Weight":
        """The weight w^lam (exact on the analytic kinds)."""
        if self.kind == "power":
            return Weight("power", (self.params[0] * lam,),
                          name=f"{self.label()}^{lam:g}")
        if self.kind == "log_power":
            c, depth = self.params
            return Weight("log_power", (c * lam, depth),
                          name=f"{self.label()}^{lam:g}")
        if self.kind == "exp_log":
            a, b = self.params
            return Weight("exp_log", (a * lam, b), name=f"{self.label()}^{lam:g}")
        if self.kind == "table":
            ts, ws = self.params
            return Weight("table", (ts, tuple(v ** lam for v in ws)),
                          name=f"{self.label()}^{lam:g}")
        base = self
        return Weight(
            "custom", (lam,) + self.params, name=f"{self.label()}^{lam:g}",
            _eval=lambda t: np.power(base(t), lam),
            _log_eval=(lambda t: lam * np.asarray(base.log(t)))
            if base._log_eval is not None else None,
        )

    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind == "power":
            return f"t^{self.params[0]:g}"
        if self.kind == "log_power":
            c, depth = self.params
            return f"{'log' * depth}^-{c:g}"
        if self.kind == "exp_log":
            return f"exp(-{self.params[0]:g} log^{self.params[1]:g})"
        return self.kind


def power(alpha: float, lambda_hint: Optional[float] = None) -> Weight:
    if alpha <= 0:
        raise InvalidWeightError("power exponent must be positive")
    hint = lambda_hint if lambda_hint is not None else min(1.0, 1.0 / alpha)
    return Weight("power", (alpha,), lambda_hint=hint)


def log_power(c: float, depth: int = 1,
              lambda_hint: Optional[float] = None) -> Weight:
    if c <= 0 or depth < 1:
        raise InvalidWeightError("log_power needs c > 0 and depth >= 1")
    # log^-c is subadditive only once the exponent is brought down to ~1
    hint = lambda_hint if lambda_hint is not None else min(1.0, 1.0 / c)
    return Weight("log_power", (c, depth), lambda_hint=hint)


def exp_log(alpha: float, beta: float,
            lambda_hint: Optional[float] = None) -> Weight:
    if alpha <= 0 or beta <= 0:
        raise InvalidWeightError("exp_log needs alpha, beta > 0")
    if lambda_hint is None and beta <= 1:
        lambda_hint = 1.0
    return Weight("exp_log", (alpha, beta), lambda_hint=lambda_hint)


def table_weight(points, lambda_hint: Optional[float] = None) -> Weight:
    pts = sorted((float(t), float(v)) for t, v in points)
    ts = tuple(p[0] for p in pts)
    ws = tuple(p[1] for p in pts)
    if ts[0] != 0.0 or abs(ws[0]) > ORDER_TOL:
        raise InvalidWeightError("table must start at (0, 0)")
    if ts[-1] != 1.0:
        raise InvalidWeightError("table must reach t = 1")
    if any(b < a - ORDER_TOL for a, b in zip(ws, ws[1:])):
        raise InvalidWeightError("table values must be nondecreasing")
    return Weight("table", (ts, ws), lambda_hint=lambda_hint, name="table")


def custom_weight(name, eval_fn, log_eval=None, lambda_hint=None) -> Weight:
    return Weight("custom", (), lambda_hint=lambda_hint, name=name,
                  _eval=eval_fn, _log_eval=log_eval)


def from_spec(spec) -> Weight:
    """Build a weight from its JSON form, e.g. {"kind": "power", "alpha": 0.5}."""
    if isinstance(spec, Weight):
        return spec
    if isinstance(spec, str):
        kind, _, rest = spec.partition(":")
        args = [float(x) for x in rest.split(",") if x]
        if kind == "power":
            return power(args[0])
        if kind == "log":
            return log_power(args[0] if args else 1.0,
                             int(args[1]) if len(args) > 1 else 1)
        if kind == "exp_log":
            return exp_log(args[0], args[1])
        raise InvalidWeightError(f"unknown weight spec string {spec!r}")
    kind = spec["kind"]
    hint = spec.get("lambda_hint")
    if kind == "power":
        return power(spec["alpha"], hint)
    if kind == "log_power":
        return log_power(spec["c"], int(spec.get("depth", 1)),
                         hint if hint is not None else 1.0)
    if kind == "exp_log":
        return exp_log(spec["alpha"], spec["beta"], hint)
    if kind in ("table", "custom_table"):
        return table_weight(spec["points"], hint)
    raise InvalidWeightError(f"unknown weight kind {kind!r}")


def to_spec(w: Weight) -> dict:
    if w.kind == "power":
        return {"kind": "power", "alpha": w.params[0], "lambda_hint": w.lambda_hint}
    if w.kind == "log_power":
        return {"kind": "log_power", "c": w.params[0], "depth": w.params[1],
                "lambda_hint": w.lambda_hint}
    if w.kind == "exp_log":
        return {"kind": "exp_log", "alpha": w.params[0], "beta": w.params[1],
                "lambda_hint": w.lambda_hint}
    if w.kind == "table":
        ts, ws = w.params
        return {"kind": "table", "points": [[t, v] for t, v in zip(ts, ws)],
                "lambda_hint": w.lambda_hint}
    raise InvalidWeightError(f"weight kind {w.kind!r} has no JSON form")


# ---------------------------------------------------------------------------
# Regularity checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModulusCheck:
    ok: bool
    witness: Optional[tuple] = None
    reason: str = ""


def _validate_values(w: Weight, vals: np.ndarray) -> None:
    if np.any(~np.isfinite(vals)) or np.any(vals < 0):
        raise InvalidWeightError(f"{w.label()} returned a negative or non-finite value")


def check_modulus_of_continuity(w: Weight, grid_depth: int) -> ModulusCheck:
    """Certify monotonicity, continuity, w(0)=0 and subadditivity on a dyadic grid.

    Subadditivity is swept coarse-to-fine so the returned witness is the
    first violating pair at the coarsest failing resolution.
    """
    if grid_depth < 4:
        raise ValueError("grid_depth must be at least 4")
    fine = np.linspace(0.0, 1.0, 2 ** CONTINUITY_DEPTH + 1)
    fvals = np.asarray(w(fine))
    _validate_values(w, fvals)
    if abs(fvals[0]) > ORDER_TOL:
        return ModulusCheck(False, (0.0, 0.0), "w(0) != 0")
    jumps = np.diff(fvals)
    if np.any(jumps < -ORDER_TOL):
        i = int(np.argmax(jumps < -ORDER_TOL))
        return ModulusCheck(False, (fine[i], fine[i + 1]), "not nondecreasing")
    # The step off t = 0 is exempt: slowly-vanishing weights (iterated logs)
    # are continuous at 0 but no finite grid resolves that; w(0) = 0 plus
    # monotonicity certifies the endpoint.
    if np.any(jumps[1:] > CONTINUITY_TOL):
        i = 1 + int(np.argmax(jumps[1:] > CONTINUITY_TOL))
        return ModulusCheck(False, (fine[i], fine[i + 1]), "jump discontinuity")
    for depth in range(2, grid_depth + 1):
        n = 2 ** depth
        grid = np.arange(n + 1) / n
        vals = np.asarray(w(grid))
        # vals[i] + vals[j] >= vals[i+j] for 1 <= i <= j, i + j <= n
        i_idx = np.arange(1, n)
        sums = vals[i_idx][:, None] + vals[i_idx][None, :]
        tot = i_idx[:, None] + i_idx[None, :]
        valid = (tot <= n) & (i_idx[:, None] <= i_idx[None, :])
        viol = valid & (sums + ORDER_TOL < vals[np.minimum(tot, n)])
        if np.any(viol):
            ii, jj = np.argwhere(viol)[0]
            return ModulusCheck(False, (grid[ii + 1], grid[jj + 1]), "not subadditive")
    return ModulusCheck(True)


@dataclass(frozen=True)
class MajorantCheck:
    ok: bool
    lam: Optional[float] = None


def check_majorant(w: Weight, lambda_candidates=DEFAULT_LAMBDAS,
                   grid_depth: int = 10) -> MajorantCheck:
    """First lambda in the candidate list with w^lambda a modulus of continuity."""
    if not lambda_candidates:
        raise ValueError("need at least one lambda candidate")
    for lam in lambda_candidates:
        if check_modulus_of_continuity(w.pow(lam), grid_depth).ok:
            return MajorantCheck(True, lam)
    return MajorantCheck(False)


@lru_cache(maxsize=256)
def effective_lambda(w: Weight, grid_depth: int = 10) -> float:
    """Largest certified lambda with w^lambda a modulus of continuity.

    The declared lambda_hint is validated before use; candidates are tried
    largest first because a larger exponent tightens every bound downstream.
    """
    cands = list(DEFAULT_LAMBDAS)
    if w.lambda_hint is not None:
        cands = sorted(set(cands) | {float(w.lambda_hint)}, reverse=True)
    res = check_majorant(w, tuple(cands), grid_depth)
    if not res.ok:
        raise UncertifiedError(f"{w.label()} is not certified as a majorant")
    return res.lam


def almost_decreasing_violation(w: Weight, lam: float, depth: int = 12) -> float:
    """Worst violation of  w^lam(t)/t <= 2 w^lam(s)/s  over sampled 0<s<t<1."""
    t = np.arange(1, 2 ** depth + 1) / 2 ** depth
    with np.errstate(divide="ignore"):
        q = lam * np.asarray(w.log(t)) - np.log(t)  # log of w^lam(t)/t
    # violation at t is q[t] - min_{s<t} q[s] - log 2, positive where the
    # factor-2 almost-decrease fails on the grid
    best_prefix = np.minimum.accumulate(q)
    viol = q[1:] - (best_prefix[:-1] + math.log(2.0))
    return float(np.max(viol))


@dataclass(frozen=True)
class A1Check:
    ratio_low: float
    ratio_high: float
    ok: bool


def check_A1(w: Weight, depth: int) -> A1Check:
    """Comparability of log(1/w) at t and t^2 over the dyadic grid.

    Returns the extreme ratios log(1/w(t^2)) / log(1/w(t)); the acceptance
    band (0, 64) is a pragmatic stand-in for two-sided comparability with
    an unspecified constant.
    """
    js = np.arange(2, depth + 1)
    t = 2.0 ** -js
    u_t = -np.asarray(w.log(t))
    u_t2 = -np.asarray(w.log(t * t))
    if np.any(np.isnan(u_t)) or np.any(u_t[np.isfinite(u_t)] <= 0):
        raise InvalidWeightError("check_A1 needs 0 < w(t) < 1 on the sample grid")
    with np.errstate(invalid="ignore"):
        ratios = u_t2 / u_t
    # An infinite log(1/w) (value underflowing any float) shows up as an
    # inf or inf/inf ratio: comparability fails on the grid.
    if np.any(~np.isfinite(ratios)):
        finite = ratios[np.isfinite(ratios)]
        lo = float(np.min(finite)) if finite.size else math.nan
        return A1Check(lo, math.inf, False)
    lo, hi = float(np.min(ratios)), float(np.max(ratios))
    ok = 0.0 < lo and hi < 64.0
    return A1Check(lo, hi, ok)


@dataclass(frozen=True)
class A2Check:
    dini_integral: float
    ok: bool
    tail: float = 0.0


def _dini_tail(w: Weight, alpha: float, s: float) -> float:
    """Closed-form bound for int_0^s w^alpha(t) dt/t, by weight kind."""
    if w.kind == "power":
        e = alpha * w.params[0]
        return s ** e / e
    if w.kind == "log_power":
        c, depth = w.params
        if depth > 1:
            return math.inf  # iterated-log weights are never Dini
        e = alpha * c
        if e <= 1.0:
            return math.inf
        return (1.0 + math.log(1.0 / s)) ** (1.0 - e) / (e - 1.0)
    if w.kind == "exp_log":
        a, beta = w.params
        c = alpha * a
        x = 1.0 + math.log(1.0 / s)
        # int_x^inf exp(-c y^beta) dy via the upper incomplete gamma function
        return (special.gamma(1.0 / beta) *
                special.gammaincc(1.0 / beta, c * x ** beta) /
                (beta * c ** (1.0 / beta)))
    if w.lambda_hint is None:
        raise UncertifiedError(
            f"no tail certificate for {w.label()} (missing lambda_hint)")
    # Evidence-based geometric extrapolation from trailing dyadic blocks.
    blocks = []
    for j in range(4):
        a, b = s / 2 ** (j + 1), s / 2 ** j
        val, _ = integrate.quad(lambda t: w(t) ** alpha / t, a, b)
        blocks.append(val)
    if blocks[0] <= 0:
        return 0.0
    rho = (blocks[3] / blocks[0]) ** (1.0 / 3.0) if blocks[3] > 0 else 0.0
    if rho >= 0.95:
        return math.inf
    return blocks[0] * rho / (1.0 - rho) + sum(blocks[1:])


def check_A2(w: Weight, alpha: float, quad_depth: int) -> A2Check:
    """Dini-type integral of w^alpha with a certified (or evidenced) tail."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0,1]")
    # precondition at majorant level: some power of w^(1+alpha) is subadditive
    if not check_majorant(w.pow(1.0 + alpha), grid_depth=8).ok:
        raise InvalidWeightError("w^(1+alpha) is not a majorant")
    total = 0.0
    for j in range(quad_depth):
        a, b = 2.0 ** -(j + 1), 2.0 ** -j
        val, _ = integrate.quad(
            lambda u: math.exp(alpha * w.log(math.exp(u))),
            math.log(a), math.log(b), limit=100)
        total += val
    tail = _dini_tail(w, alpha, 2.0 ** -quad_depth)
    ok = math.isfinite(tail)
    return A2Check(total + (tail if ok else 0.0), ok, tail)


def _maximize_unit(fn) -> tuple:
    """Max of fn over (0,1): coarse bracket plus bounded local refinement."""
    grid = np.linspace(1e-9, 1.0 - 1e-9, 513)
    vals = np.array([fn(t) for t in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(lambda t: -fn(t), bounds=(lo, hi),
                                   method="bounded",
                                   options={"xatol": 1e-12})
    if -res.fun >= vals[i]:
        return float(res.x), float(-res.fun)
    return float(grid[i]), float(vals[i])


@dataclass(frozen=True)
class ConditionACheck:
    kappa: float
    C1: float
    ok: bool


def check_condition_a(w: Weight, n_max: int) -> ConditionACheck:
    """Moment-type decay: sup_t t^n w(1-t) <= C1 w(1/n)^kappa with C1 <= 10."""
    if n_max < 8:
        raise ValueError("n_max must be at least 8")
    w0 = w(0.0)
    if abs(w0) > ORDER_TOL:
        raise InvalidWeightError("w(0) must vanish")
    ns, sups = [], []
    n = 2
    while n <= n_max:
        _, sup = _maximize_unit(lambda t: t ** n * w(1.0 - t))
        ns.append(n)
        sups.append(sup)
        n *= 2
    c1_cap = 10.0
    kappas = []
    for n, sup in zip(ns, sups):
        wn = w(1.0 / n)
        if wn >= 1.0 - ORDER_TOL or sup <= 0:
            continue
        kappas.append(math.log(sup / c1_cap) / math.log(wn))
    if not kappas:
        return ConditionACheck(math.nan, math.nan, False)
    kappa = min(kappas)
    if kappa <= 0:
        return ConditionACheck(kappa, math.inf, False)
    c1 = max(sup / w(1.0 / n) ** kappa for n, sup in zip(ns, sups)
             if w(1.0 / n) < 1.0)
    return ConditionACheck(kappa, c1, c1 <= c1_cap + ORDER_TOL)


@dataclass(frozen=True)
class ConditionBCheck:
    C2: float
    ok: bool


def neg_log_integral(w: Weight, ell: float, lam: float) -> float:
    """int_0^ell log(1/w(t)) dt with a certified bracket at the endpoint."""
    eps = ell * 2.0 ** -48
    total = 0.0
    for j in range(48):
        a, b = ell * 2.0 ** -(j + 1), ell * 2.0 ** -j
        val, _ = integrate.quad(lambda t: -w.log(t), a, b, limit=80)
        total += val
    # |log w| <= (1/lam)(log(1/t) + c0) below eps, c0 from almost-decreasing at eps
    c0 = -lam * w.log(eps) - math.log(eps)
    total += (eps * (1.0 + math.log(1.0 / eps)) + eps * max(c0, 0.0)) / lam
    return total


def check_condition_b(w: Weight, depth: int) -> ConditionBCheck:
    """Averaged-entropy comparability: int_0^l log(1/w) <= C2 l log(1/w(l))."""
    lam = effective_lambda(w)
    worst = 0.0
    for j in range(2, depth + 1):
        ell = 2.0 ** -j
        denom = -w.log(ell) * ell
        if denom <= 0:
            continue  # w(l) = 1 boundary convention: excluded from the max
        worst = max(worst, neg_log_integral(w, ell, lam) / denom)
    return ConditionBCheck(worst, math.isfinite(worst) and worst > 0)
