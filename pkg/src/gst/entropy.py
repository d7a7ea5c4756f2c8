"""w-entropy of closed null sets, in sum and integral form, and the induced
splitting of a singular measure into its entropy-carried and entropy-free
parts.

Divergence is evidenced, not proven: either a generator-aware analytic
certificate (integral comparison) or monotone partial sums crossing a
configurable threshold.  Finiteness of a lazily generated gap family always
comes with a closed-form tail bound; when neither certificate applies the
result is tagged undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .circle import CircleMeasure, ClosedCircleSet, GapTail
from .weights import Weight, effective_lambda

FINITE = "finite"
DIVERGES = "diverges"
UNDECIDED = "undecided"

DIVERGENCE_THRESHOLD = 1e6
GENERATOR_TERM_BUDGET = 10 ** 6


@dataclass(frozen=True)
class TaggedValue:
    """Signed entropy value with a finiteness tag and bracketing bounds."""

    tag: str
    value: Optional[float]
    low: float
    high: float
    evidence: str = ""
    partial_sums: tuple = field(default=(), repr=False)

    @property
    def finite(self) -> bool:
        return self.tag == FINITE


def _decimate(arr: np.ndarray, keep: int = 64) -> tuple:
    if arr.size <= keep:
        return tuple(float(x) for x in arr)
    idx = np.unique(np.linspace(0, arr.size - 1, keep).astype(int))
    return tuple(float(x) for x in arr[idx])


def _lambda_log_bound(w: Weight, lam: float) -> float:
    """c0 with  -log w(t) <= (log(1/t) + c0) / lam  for t in (0,1]."""
    u1 = max(0.0, -float(w.log(1.0)))
    return math.log(2.0) + lam * u1


def _tail_sum_bounds(tail: GapTail, w: Weight):
    """Bracket (lo, hi) for sum over unmaterialized gaps of m*log w(m).

    Returns -inf bounds when a divergence certificate applies and None when
    nothing can be certified for this (tail, weight) pair.
    """
    if tail.kind == "geometric_levels":
        count0, base, length0, ratio, first = tail.params
        lam = effective_lambda(w)
        c0 = _lambda_log_bound(w, lam)
        q = base * ratio
        if q >= 1:
            return None
        # explicit levels until the remainder bound is negligible
        acc = 0.0
        n = first + 1
        block = 256
        while True:
            ns = np.arange(n, n + block, dtype=float)
            counts = count0 * base ** (ns - 1)
            lens = length0 * ratio ** ns
            terms = counts * lens * np.asarray(w.log(lens))
            if np.any(np.isneginf(terms)):
                return (-math.inf, -math.inf)
            acc += float(np.sum(terms))
            n += block
            # |log w(l_n)| <= (n log(1/ratio) - log(length0) + c0)/lam
            a = math.log(1.0 / ratio) / lam
            b = (c0 - math.log(length0)) / lam
            qn = q ** n
            rem = (count0 * length0 / base) * qn * (
                a * (n + q / (1 - q)) + b) / (1 - q)
            if rem < 1e-15 * (1.0 + abs(acc)):
                return (acc - rem, acc + rem)
            if n > first + 100_000:
                return (acc - rem, acc + rem)
    if tail.kind == "harmonic_log":
        amp, first = tail.params
        if w.kind in ("power", "exp_log"):
            # sum_k l_k log(1/w(l_k)) >~ sum_k c/(k log k) = inf
            return (-math.inf, -math.inf)
        if w.kind == "log_power" and w.params[1] == 1:
            c = w.params[0]
            ks = np.arange(first + 1, first + 1 + GENERATOR_TERM_BUDGET,
                           dtype=float)
            lens = amp / (ks * np.log(ks) ** 2)
            acc = float(np.sum(lens * np.asarray(w.log(lens))))
            m = ks[-1] + 1.0
            # remainder via  u(l_k) <= c (k0 + log log k),  integral in y = log x
            k0 = math.log(3.0) + max(0.0, math.log(1.0 / amp))
            y = math.log(m)
            rem = amp * c * (k0 + math.log(y) + 1.0) / y
            return (acc - rem, acc + rem)
        return None
    if tail.kind == "stagewise_log":
        amp, first = tail.params
        if w.kind in ("power", "exp_log") or (
                w.kind == "log_power" and w.params[1] == 1):
            # per-stage gaps have length ~ 2^-j: -log w(g_j) grows at least
            # like log j, so the stage series dominates sum 1/(j log j) = inf
            return (-math.inf, -math.inf)
        return None
    return None


def gap_entropy_sum(lengths, w: Weight) -> float:
    """Sum of m log w(m) over an explicit finite gap-length family."""
    lens = np.sort(np.asarray(lengths, dtype=float))[::-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = lens * np.asarray(w.log(lens))
    if np.any(np.isneginf(terms)):
        return -math.inf
    return float(np.sum(terms))


@dataclass(frozen=True)
class EntropySumResult:
    partial_sums: tuple
    result: TaggedValue


def entropy_sum(E: ClosedCircleSet, w: Weight,
                threshold: float = DIVERGENCE_THRESHOLD) -> EntropySumResult:
    """Sum of m(I) log w(m(I)) over complementary arcs, largest first."""
    lens = E.gap_lengths_decreasing()
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = lens * np.asarray(w.log(lens))
    if np.any(np.isneginf(terms)):
        tv = TaggedValue(DIVERGES, None, -math.inf, -math.inf,
                         "w vanishes on a gap length")
        return EntropySumResult((), tv)
    partial = np.cumsum(terms)
    explicit = float(partial[-1]) if partial.size else 0.0
    trace = _decimate(partial)
    if E.tail is None:
        tv = TaggedValue(FINITE, explicit, explicit, explicit,
                         "finite gap family", trace)
        return EntropySumResult(trace, tv)
    bounds = _tail_sum_bounds(E.tail, w)
    if bounds is None:
        # stream generator terms; divergence by threshold is the last resort
        counts, lens_t = E.tail.levels(GENERATOR_TERM_BUDGET)
        gen_terms = counts * lens_t * np.asarray(w.log(lens_t))
        gen_partial = explicit + np.cumsum(gen_terms)
        trace = _decimate(np.concatenate([partial, gen_partial]))
        if gen_partial[-1] < -threshold:
            tv = TaggedValue(DIVERGES, None, -math.inf, float(gen_partial[-1]),
                             f"partial sums beyond {threshold:g}", trace)
        else:
            tv = TaggedValue(UNDECIDED, None, -math.inf,
                             float(gen_partial[-1]),
                             "no tail certificate for this weight", trace)
        return EntropySumResult(trace, tv)
    lo, hi = bounds
    if lo == -math.inf:
        tv = TaggedValue(DIVERGES, None, -math.inf, -math.inf,
                         "generator tail certificate (integral comparison)",
                         trace)
        return EntropySumResult(trace, tv)
    tv = TaggedValue(FINITE, explicit + 0.5 * (lo + hi), explicit + lo,
                     explicit + hi, "generator tail bound", trace)
    return EntropySumResult(trace, tv)


def _gap_integral_values(w: Weight, lens: np.ndarray, lam: float):
    """Per-gap values of 2*int_0^{L/2} log w(t) dt with a shared error bound.

    Panels are dyadic toward 0 with fixed Gauss nodes; the leftover
    [0, L/2 * 2^-45] is bracketed through the almost-decreasing envelope
    w(t) >= (t w^lam(L)/(2L))^(1/lam).
    """
    nodes, wts = np.polynomial.legendre.leggauss(8)
    panels = 45
    half = lens / 2.0
    i = np.arange(panels, dtype=float)
    hi = half[:, None] * 2.0 ** -i[None, :]
    lo = hi / 2.0
    mid = (hi + lo) / 2.0
    rad = (hi - lo) / 2.0
    t = mid[:, :, None] + rad[:, :, None] * nodes[None, None, :]
    vals = np.asarray(w.log(t))
    panel_ints = np.sum(vals * wts[None, None, :], axis=2) * rad
    total = 2.0 * np.sum(panel_ints, axis=1)
    eps = half * 2.0 ** -panels
    c0 = _lambda_log_bound(w, lam)
    # bracket of 2*int_0^eps log w: within [2 eps(log w(eps) - (1+2log2+c0)/lam), 2 eps log w(eps)]
    weps = np.asarray(w.log(eps))
    low_piece = 2.0 * eps * (weps - (1.0 + 2.0 * math.log(2.0) + c0) / lam)
    high_piece = 2.0 * eps * weps
    total_mid = total + 0.5 * (low_piece + high_piece)
    err = 0.5 * float(np.sum(high_piece - low_piece))
    return total_mid, err


def entropy_integral(E: ClosedCircleSet, w: Weight,
                     quad_depth: int = 45) -> TaggedValue:
    """Circle integral of log w(dist(., E)) via per-gap change of variables.

    Each gap of length L contributes 2*int_0^{L/2} log w(t) dt: the distance
    to the set sweeps (0, L/2] twice per gap.
    """
    lens = np.array([g.length for g in E.gaps])
    lam = effective_lambda(w)
    vals, err = _gap_integral_values(w, lens, lam)
    if np.any(~np.isfinite(vals)):
        return TaggedValue(DIVERGES, None, -math.inf, -math.inf,
                           "log w not integrable on a gap")
    explicit = float(np.sum(vals))
    if E.tail is None:
        return TaggedValue(FINITE, explicit, explicit - err, explicit + err,
                           "finite gap family")
    sums = _tail_sum_bounds(E.tail, w)
    if sums is None:
        tail_sum = entropy_sum(E, w)
        tag = tail_sum.result.tag
        return TaggedValue(tag if tag != FINITE else UNDECIDED, None,
                           -math.inf, explicit,
                           "integral tail follows the sum-form evidence")
    lo, hi = sums
    if lo == -math.inf:
        return TaggedValue(DIVERGES, None, -math.inf, -math.inf,
                           "generator tail certificate (integral comparison)")
    slack = (1.0 + 2.0 * math.log(2.0) + _lambda_log_bound(w, lam)) / lam
    tail_lo = lo - slack * E.tail.gap_mass()
    tail_hi = hi
    mid = explicit + 0.5 * (tail_lo + tail_hi)
    return TaggedValue(FINITE, mid, explicit - err + tail_lo,
                       explicit + err + tail_hi, "generator tail bound")


# ---------------------------------------------------------------------------
# Measure classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    mu_P: CircleMeasure
    mu_C: CircleMeasure
    undecided: tuple
    certificates: tuple


def classify_measure(mu: CircleMeasure, w: Weight) -> Classification:
    """Split a measure into the part carried by finite-entropy sets and the rest.

    Atoms always land in the carried part (singletons have finite entropy
    for every majorant).  Each Cantor-type component is classified through
    the entropy certificate of its own carrier set; components whose
    certificate is inconclusive are excluded from both parts and reported.
    """
    certs = []
    p_parts, c_parts, undecided = [], [], []
    if mu.atom_list:
        certs.append({"component": "atoms", "tag": FINITE,
                      "evidence": "atoms lie on finite point sets"})
    for i, part in enumerate(mu.cantor_parts):
        res = entropy_sum(part.carrier, w).result
        certs.append({"component": f"cantor[{i}]({part.carrier.name})",
                      "tag": res.tag, "value": res.value,
                      "evidence": res.evidence})
        if res.tag == FINITE:
            p_parts.append(part)
        elif res.tag == DIVERGES:
            c_parts.append(part)
        else:
            undecided.append(part)
    mu_p = CircleMeasure(atoms=mu.atom_list, cantor_parts=p_parts,
                         multipliers=mu.multipliers, name=f"{mu.name}_P")
    mu_c = CircleMeasure(cantor_parts=c_parts, multipliers=mu.multipliers,
                         name=f"{mu.name}_C")
    return Classification(mu_p, mu_c, tuple(undecided), tuple(certs))
