"""Quadrature layer pairing growth spaces with their Cauchy duals: the
derivative-integral norm, the coefficient pairing and its Green-identity
counterpart, model-space kernels, and boundary smoothness estimators.

Boundary integrals of inner-type functions are taken at dilated radii
1 - 2^-k with Richardson extrapolation: the integrand is then smooth, the
trapezoid rule is spectrally accurate, and the dilation bias is linear in
1 - r, so two extrapolation levels leave errors far below the tolerances
used here.  Area integrals use the normalization dA = (Lebesgue area)/pi,
so the unit disc has measure 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .circle import CircleMeasure
from .inner_outer import (AnalyticValue, BlaschkeSeq, blaschke_deriv_many,
                          blaschke_many, singular_inner_deriv_many,
                          singular_inner_many, unit_point)
from .weights import Weight, check_A2, _dini_tail

FINITE = "finite"
DIVERGES = "diverges"


# ---------------------------------------------------------------------------
# Disc functions with certified derivatives
# ---------------------------------------------------------------------------

@dataclass
class DiscFunction:
    """An analytic function with vectorized evaluation and derivative."""

    f: Callable
    df: Callable
    tag: str = "callable"
    name: str = ""

    def __call__(self, z):
        return self.f(np.asarray(z, dtype=complex))

    def deriv(self, z):
        return self.df(np.asarray(z, dtype=complex))


def poly_function(coeffs) -> DiscFunction:
    c = np.asarray(coeffs, dtype=complex)
    dc = c[1:] * np.arange(1, c.size)
    return DiscFunction(
        lambda z: np.polynomial.polynomial.polyval(z, c),
        lambda z: np.polynomial.polynomial.polyval(z, dc) if dc.size
        else np.zeros_like(z),
        tag="polynomial", name=f"poly(deg {c.size - 1})")


def atomic_inner_function(mu: CircleMeasure) -> DiscFunction:
    return DiscFunction(
        lambda z: singular_inner_many(mu, z)[0],
        lambda z: singular_inner_deriv_many(mu, z),
        tag="atomic_inner", name=f"S[{mu.name}]")


def blaschke_function(B: BlaschkeSeq) -> DiscFunction:
    return DiscFunction(lambda z: blaschke_many(B, z),
                        lambda z: blaschke_deriv_many(B, z),
                        tag="rational", name="blaschke")


def product_function(a: DiscFunction, b: DiscFunction) -> DiscFunction:
    return DiscFunction(
        lambda z: a(z) * b(z),
        lambda z: a.deriv(z) * b(z) + a(z) * b.deriv(z),
        tag="product", name=f"{a.name}*{b.name}")


def derivative_consistency(f: DiscFunction, points, step: float = 1e-6
                           ) -> float:
    """Worst centered-difference mismatch of f' on interior points."""
    zs = np.asarray(points, dtype=complex)
    fd = (f(zs + step) - f(zs - step)) / (2.0 * step)
    return float(np.max(np.abs(fd - f.deriv(zs))))


# ---------------------------------------------------------------------------
# F_w norm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FwNorm:
    tag: str
    value: Optional[float]
    annuli: tuple
    tail_estimate: float = 0.0


def fw_norm(f: DiscFunction, w: Weight, quad_depth: int = 40,
            n_angles: int = 128) -> FwNorm:
    """|f(0)| + integral over the disc of |f'| dA / w(1-|z|).

    Annulus contributions toward |z| = 1 are monitored: if they stop
    decaying the norm is tagged divergent; otherwise the geometric trend
    extrapolates the remaining tail.
    """
    nodes, wts = np.polynomial.legendre.leggauss(10)
    th = (np.arange(n_angles) + 0.5) / n_angles
    ez = unit_point(th)
    contributions = []
    for j in range(quad_depth):
        lo, hi = 1.0 - 2.0 ** -j, 1.0 - 2.0 ** -(j + 1)
        mid, rad = 0.5 * (hi + lo), 0.5 * (hi - lo)
        rs = mid + rad * nodes
        total = 0.0
        for r, wt in zip(rs, wts):
            mean = float(np.mean(np.abs(f.deriv(r * ez))))
            total += wt * 2.0 * r * mean / float(w(1.0 - r))
        contributions.append(total * rad)
    head = abs(complex(f(np.array([0.0]))[0]))
    c = np.array(contributions)
    pos = c[c > 0]
    if pos.size >= 6:
        ratios = c[-4:] / np.maximum(c[-5:-1], 1e-300)
        rho = float(np.max(ratios))
        if rho >= 0.98 and c[-1] > 1e-13 * (1.0 + np.sum(c)):
            return FwNorm(DIVERGES, None, tuple(contributions))
        rho = min(rho, 0.97)
        tail = float(c[-1]) * rho / (1.0 - rho)
    else:
        tail = 0.0
    return FwNorm(FINITE, head + float(np.sum(c)) + tail,
                  tuple(contributions), tail)


# ---------------------------------------------------------------------------
# Pairings and the Green identity
# ---------------------------------------------------------------------------

def _poly_coeffs(p) -> np.ndarray:
    if isinstance(p, DiscFunction):
        raise TypeError("coefficient pairing needs raw coefficients")
    return np.asarray(p, dtype=complex)


def pairing_exact(g_coeffs, f_coeffs) -> complex:
    a = _poly_coeffs(g_coeffs)
    b = _poly_coeffs(f_coeffs)
    n = min(a.size, b.size)
    return complex(np.sum(a[:n] * np.conj(b[:n])))


def pairing_boundary_quadrature(g_coeffs, f_coeffs, base_scale: int = 12
                                ) -> complex:
    """Limit boundary pairing at r -> 1-, Richardson over three radii."""
    a = _poly_coeffs(g_coeffs)
    b = _poly_coeffs(f_coeffs)
    n_nodes = 4 * (max(a.size, b.size) + 2)
    th = (np.arange(n_nodes) + 0.5) / n_nodes
    ez = unit_point(th)
    vals = []
    for k in (base_scale, base_scale + 1, base_scale + 2):
        r = 1.0 - 2.0 ** -k
        gv = np.polynomial.polynomial.polyval(r * ez, a)
        fv = np.polynomial.polynomial.polyval(r * ez, b)
        vals.append(complex(np.mean(gv * np.conj(fv))))
    r1 = [2.0 * vals[i + 1] - vals[i] for i in range(2)]
    return (4.0 * r1[1] - r1[0]) / 3.0


def cauchy_pairing_poly(g_coeffs, f_coeffs, validate: bool = True) -> complex:
    """Coefficient pairing sum a_n conj(b_n), the r -> 1- boundary limit."""
    exact = pairing_exact(g_coeffs, f_coeffs)
    if validate:
        quad = pairing_boundary_quadrature(g_coeffs, f_coeffs)
        if abs(quad - exact) > 1e-8 * (1.0 + abs(exact)):
            raise ArithmeticError(
                f"boundary quadrature {quad} disagrees with coefficients "
                f"{exact}")
    return exact


cauchy_pairing = cauchy_pairing_poly


@dataclass(frozen=True)
class GreenCheck:
    lhs: complex
    rhs: complex
    oracle: complex
    ok: bool


def green_oracle(g_coeffs, f_coeffs, r: float) -> complex:
    a = _poly_coeffs(g_coeffs)
    b = _poly_coeffs(f_coeffs)
    n = min(a.size, b.size)
    ns = np.arange(n)
    return complex(np.sum(a[:n] * np.conj(b[:n]) * r ** (2.0 * ns)))


def green_identity_check(g_coeffs, f_coeffs, r: float,
                         w_unused: Optional[Weight] = None) -> GreenCheck:
    """Boundary pairing at radius r against its area-integral form.

    lhs = int g(r zeta) conj(f(r zeta)) dm(zeta); rhs = g(0) conj(f(0)) +
    r int_D g(rz) conj(f'(rz)) z^-1 dA(z).  In polar coordinates the z^-1
    kernel cancels the area element, so both quadratures are smooth; for
    polynomials the shared coefficient oracle is exact.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0,1)")
    a = _poly_coeffs(g_coeffs)
    b = _poly_coeffs(f_coeffs)
    deg = max(a.size, b.size)
    n_ang = 4 * (deg + 2)
    th = (np.arange(n_ang) + 0.5) / n_ang
    ez = unit_point(th)
    gv = np.polynomial.polynomial.polyval(r * ez, a)
    fv = np.polynomial.polynomial.polyval(r * ez, b)
    lhs = complex(np.mean(gv * np.conj(fv)))
    db = b[1:] * np.arange(1, b.size) if b.size > 1 else np.zeros(1)
    nodes, wts = np.polynomial.legendre.leggauss(max(10, deg + 2))
    s = 0.5 * (nodes + 1.0)
    rhs_int = 0.0 + 0.0j
    for si, wi in zip(s, wts):
        zs = si * ez
        gv = np.polynomial.polynomial.polyval(r * zs, a)
        dfv = np.polynomial.polynomial.polyval(r * zs, db)
        rhs_int += wi * 0.5 * complex(np.mean(gv * np.conj(dfv) *
                                              np.conj(ez) / np.abs(ez)))
    a0 = a[0] if a.size else 0.0
    b0 = b[0] if b.size else 0.0
    rhs = complex(a0 * np.conj(b0)) + 2.0 * r * rhs_int
    oracle = green_oracle(a, b, r)
    ok = abs(lhs - rhs) <= 1e-8 * (1.0 + abs(lhs))
    return GreenCheck(lhs, rhs, oracle, ok)


# ---------------------------------------------------------------------------
# Model-space kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelKernelSpec:
    """An inner function (Blaschke and/or atomic singular) with a base point."""

    blaschke: Optional[BlaschkeSeq] = None
    singular: Optional[CircleMeasure] = None
    lam: complex = 0.0 + 0.0j

    def theta_many(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape, dtype=complex)
        if self.blaschke is not None:
            out = out * blaschke_many(self.blaschke, z)
        if self.singular is not None:
            out = out * singular_inner_many(self.singular, z)[0]
        return out


def model_kernel(spec: ModelKernelSpec, z: complex,
                 lam: Optional[complex] = None,
                 eps: float = 1e-12) -> AnalyticValue:
    """kappa(z, lam) = (1 - conj(Theta(lam)) Theta(z)) / (1 - conj(lam) z).

    The base point defaults to the one carried by the spec.
    """
    lam = spec.lam if lam is None else lam
    if abs(z) >= 1.0 or abs(lam) >= 1.0:
        raise ValueError("kernel arguments must lie in the open disc")
    tz = complex(spec.theta_many(np.array([z]))[0])
    tl = complex(spec.theta_many(np.array([lam]))[0])
    val = (1.0 - np.conj(tl) * tz) / (1.0 - np.conj(lam) * z)
    return AnalyticValue(complex(val), 1e-13 * (1.0 + abs(val)))


def _kernel_many(spec: ModelKernelSpec, zs: np.ndarray, lam: complex
                 ) -> np.ndarray:
    tz = spec.theta_many(zs)
    tl = complex(spec.theta_many(np.array([lam]))[0])
    return (1.0 - np.conj(tl) * tz) / (1.0 - np.conj(lam) * zs)


def _dilated_boundary_mean(fn, boundary_n: int,
                           singular: bool = False) -> complex:
    """Extrapolated limit of mean_theta fn(r e^(2 pi i theta)) as r -> 1-.

    Rational integrands (finite Blaschke content) are analytic across the
    boundary: deep radii with plain Richardson are exact to rounding.
    Inner functions of atomic measures have Taylor tails ~ n^(-3/4), so
    their dilation bias is O(sqrt(1-r)): radii are then tied to the node
    count (aliasing stays below the bias) and the extrapolation solves in
    the basis {1, sqrt(h), h}.
    """
    th = (np.arange(boundary_n) + 0.5) / boundary_n
    ez = unit_point(th)
    if not singular:
        vals = [complex(np.mean(fn((1.0 - 2.0 ** -k) * ez)))
                for k in (30, 31, 32)]
        r1 = [2.0 * vals[i + 1] - vals[i] for i in range(2)]
        return (4.0 * r1[1] - r1[0]) / 3.0
    hs = [4.0 / boundary_n, 16.0 / boundary_n, 64.0 / boundary_n]
    vals = np.array([complex(np.mean(fn((1.0 - h) * ez))) for h in hs])
    M = np.array([[1.0, math.sqrt(h), h] for h in hs])
    sol = np.linalg.solve(M, vals)
    return complex(sol[0])


@dataclass(frozen=True)
class KernelCheck:
    lhs: complex
    rhs: complex
    ok: bool
    tolerance: float


def kernel_reproducing_check(spec: ModelKernelSpec, lam2: complex,
                             boundary_n: int, tol: float = 1e-6,
                             lam: Optional[complex] = None) -> KernelCheck:
    """Boundary pairing of two kernels against the reproducing value.

    The first kernel's base point is the spec's; the pairing with the
    kernel at lam2 must reproduce kappa(lam2, lam).
    """
    lam = spec.lam if lam is None else lam
    rhs = complex(_kernel_many(spec, np.array([lam2]), lam)[0])
    lhs = _dilated_boundary_mean(
        lambda zs: _kernel_many(spec, zs, lam) *
        np.conj(_kernel_many(spec, zs, lam2)), boundary_n,
        singular=spec.singular is not None)
    scale = 1.0 + abs(rhs)
    return KernelCheck(lhs, rhs, abs(lhs - rhs) <= tol * scale, tol * scale)


@dataclass(frozen=True)
class OrthogonalityCheck:
    pairing: complex
    ok: bool
    tolerance: float


def orthogonal_decomposition_check(theta_p: ModelKernelSpec,
                                   theta_c: ModelKernelSpec,
                                   boundary_n: int,
                                   tol: float = 1e-5) -> OrthogonalityCheck:
    """Kernels of the first factor against first-factor multiples of the
    second factor's kernels: the boundary pairing must vanish.

    Sample kernels sit at each factor's own base point.
    """
    def integrand(zs):
        f = _kernel_many(theta_p, zs, theta_p.lam)
        g = theta_p.theta_many(zs) * _kernel_many(theta_c, zs, theta_c.lam)
        return f * np.conj(g)

    singular = (theta_p.singular is not None or theta_c.singular is not None)
    val = _dilated_boundary_mean(integrand, boundary_n, singular=singular)
    return OrthogonalityCheck(val, abs(val) <= tol, tol)


# ---------------------------------------------------------------------------
# Boundary smoothness estimators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AwEstimate:
    value: float
    sup_part: float
    holder_part: float


def aw_norm_estimate(f, w: Weight, boundary_n: int = 512,
                     max_chord: float = 0.5) -> AwEstimate:
    """Lower-bound estimator of the sup norm plus the w-Hoelder quotient.

    ``f`` maps arrays of boundary points to values; pairs of nodes with
    chordal distance above ``max_chord`` are skipped (w lives on [0,1]).
    """
    th = (np.arange(boundary_n) + 0.5) / boundary_n
    zs = unit_point(th)
    vals = np.asarray(f(zs))
    sup = float(np.max(np.abs(vals)))
    diffs = np.abs(vals[:, None] - vals[None, :])
    chords = np.abs(zs[:, None] - zs[None, :])
    mask = (chords > 0) & (chords <= max_chord)
    with np.errstate(divide="ignore", invalid="ignore"):
        quots = np.where(mask, diffs / np.asarray(w(np.where(mask, chords, 1.0))),
                         0.0)
    holder = float(np.max(quots))
    return AwEstimate(sup + holder, sup, holder)


@dataclass(frozen=True)
class DerivativeGrowthCheck:
    C_fit: float
    per_level: tuple
    ok: bool


def derivative_growth_check(f: DiscFunction, w: Weight,
                            levels=(4, 6, 8), boundary_n: int = 512,
                            growth_tol: float = 1.2) -> DerivativeGrowthCheck:
    """|f'(z)| (1-|z|) / (w(1-|z|) ||f||-estimate), swept over radius levels.

    The fit constant should stabilize across levels for boundary-smooth f;
    a persistent geometric climb marks f outside the smoothness class.
    """
    aw = aw_norm_estimate(f, w, boundary_n).value
    # offset grid plus the axis directions: boundary singularities of the
    # standard fixtures sit at angle 0, which an offset grid never probes
    th = np.concatenate([(np.arange(64) + 0.5) / 64.0, [0.0, 0.25, 0.5, 0.75]])
    ez = unit_point(th)
    fits = []
    for J in levels:
        worst = 0.0
        for j in range(J + 1):
            d = 2.0 ** -j
            zs = (1.0 - d) * ez
            dv = np.abs(f.deriv(zs))
            worst = max(worst, float(np.max(dv)) * d / (float(w(d)) * aw))
        fits.append(worst)
    ok = fits[-1] <= growth_tol * fits[-2]
    return DerivativeGrowthCheck(fits[-1], tuple(fits), ok)


@dataclass(frozen=True)
class ContainmentCheck:
    ok: bool
    fw: FwNorm
    bound_integral: float
    ratio: float


def aw_in_fw_check(f: DiscFunction, w: Weight, alpha: float, p: float,
                   quad_depth: int = 40) -> ContainmentCheck:
    """Derivative-growth functions embed in the dual class of the p-th power.

    Requires 0 < p < 1 - alpha and the Dini-type condition at alpha; the
    reported ratio compares the computed norm with the governing integral
    int_0^1 w^(1-p)(t)/t dt.
    """
    if not 0 < p < 1.0 - alpha:
        raise ValueError("need 0 < p < 1 - alpha")
    a2 = check_A2(w, alpha, 30)
    if not a2.ok:
        raise ValueError("the Dini-type condition fails at this alpha")
    growth = derivative_growth_check(f, w)
    fw = fw_norm(f, w.pow(p), quad_depth)
    bound = 0.0
    for j in range(quad_depth):
        lo, hi = 2.0 ** -(j + 1), 2.0 ** -j
        val, _ = integrate.quad(
            lambda u: math.exp((1.0 - p) * w.log(math.exp(u))),
            math.log(lo), math.log(hi), limit=80)
        bound += val
    bound += _dini_tail(w, 1.0 - p, 2.0 ** -quad_depth)
    ok = growth.ok and fw.tag == FINITE
    ratio = (fw.value / bound) if (fw.value is not None and bound > 0) \
        else math.inf
    return ContainmentCheck(ok, fw, bound, ratio)


def cauchy_projection(coeffs: dict) -> dict:
    """Drop negative frequencies of a trigonometric polynomial (exact)."""
    return {int(k): v for k, v in coeffs.items() if int(k) >= 0}


def trig_poly_boundary(coeffs: dict):
    """Boundary evaluator of a trigonometric polynomial."""
    items = sorted(coeffs.items())

    def f(zs):
        zs = np.asarray(zs, dtype=complex)
        out = np.zeros(zs.shape, dtype=complex)
        for k, c in items:
            out = out + c * zs ** k if k >= 0 else out + c * np.conj(zs) ** (-k)
        return out

    return f
