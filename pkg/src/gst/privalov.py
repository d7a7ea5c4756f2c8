"""Star-shaped subdomains of the disc touching the boundary on a closed set.

The domain is { r zeta : 0 <= r < 1 - h(zeta) } where the cusp profile h
vanishes on the set and lifts quadratically over each gap:
h = (1/2) ((t-a)(b-t)/(b-a))^2 in normalized arc-length coordinates, so
h <= 1/32 everywhere and h is comparable to dist(., set)^2 with constants
in [1/8, 1/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import ClosedCircleSet
from .inner_outer import CarlesonOuter, carleson_many, \
    growth_norm_estimate, unit_point
from .weights import Weight

H_MAX = 1.0 / 32.0
PROFILE_DIST_LOW = 1.0 / 8.0
PROFILE_DIST_HIGH = 1.0 / 2.0


@dataclass(frozen=True)
class PrivalovDomain:
    E: ClosedCircleSet

    def profile(self, t: float) -> float:
        """Cusp height h over the boundary point at arc coordinate t."""
        g = self.E._gap_at(t % 1.0)
        if g is None:
            return 0.0
        rel = (t - g.start) % 1.0
        q = rel * (g.length - rel) / g.length
        return 0.5 * q * q

    def contains(self, z: complex) -> bool:
        if z == 0:
            return True
        t = (np.angle(z) / (2.0 * math.pi)) % 1.0
        # one-sided float guard: |unit_point(t)| itself rounds within an ulp
        # of 1, so points of the lid curve must not leak inside
        return abs(z) < 1.0 - self.profile(float(t)) - 1e-15

    def boundary_point(self, t: float) -> complex:
        return complex(unit_point(t % 1.0)) * (1.0 - self.profile(t))


def boundary_samples_with_profile(D: PrivalovDomain, count: int):
    """(points, cusp heights) along the inner boundary curve, gap by gap.

    Each gap receives samples proportional to its length plus a fixed
    geometric densification toward both endpoints (where the domain cusps);
    the gap midpoint (deepest point of the lid) is always included.  The
    cusp height 1 - |z| = h is returned exactly: near the endpoints it
    falls below the float resolution of 1 - |z|.
    """
    if count < 1:
        raise ValueError("count must be positive")
    gaps = D.E.gaps
    total = sum(g.length for g in gaps)
    zs, hs = [], []
    dens = 16  # geometric offsets per endpoint
    for g in gaps:
        n_uni = max(3, int(round(count * g.length / total)))
        s = np.unique(np.concatenate([
            (np.arange(1, n_uni) / n_uni),
            2.0 ** -np.arange(2, dens + 2),
            1.0 - 2.0 ** -np.arange(2, dens + 2),
        ]))
        q = g.length * s * (1.0 - s)  # rel (L - rel) / L without cancellation
        h = 0.5 * q * q
        t = (g.start + g.length * s) % 1.0
        zs.extend(unit_point(t) * (1.0 - h))
        hs.extend(h)
    return np.asarray(zs, dtype=complex), np.asarray(hs, dtype=float)


def boundary_samples(D: PrivalovDomain, count: int) -> np.ndarray:
    zs, _ = boundary_samples_with_profile(D, count)
    return zs


@dataclass(frozen=True)
class BoundaryEstimate:
    max_ratio: float
    ok: bool
    n_samples: int


def privalov_boundary_estimate(D: PrivalovDomain, G: CarlesonOuter,
                               count: int = 4096) -> BoundaryEstimate:
    """max over inner-boundary samples of |G(z)| / w(1-|z|)."""
    zs, hs = boundary_samples_with_profile(D, count)
    vals, errs = carleson_many(G, zs)
    w = G.weight
    ratios = (np.abs(vals) + errs) / np.asarray(w(hs))
    worst = float(np.max(ratios))
    return BoundaryEstimate(worst, worst <= 1.0 + 1e-9, zs.size)


@dataclass(frozen=True)
class EmbeddingCheck:
    max_ratio: float
    rhs_norm: float
    ok: bool


def embedding_check(D: PrivalovDomain, G: CarlesonOuter, coeffs,
                    w: Weight, count: int = 2048) -> EmbeddingCheck:
    """sup over the domain of |G(z) Q(z)| against the growth norm of Q.

    The right side is estimated on a strictly denser grid than the left
    samples so the comparison cannot fail through under-estimation of the
    norm alone.
    """
    coeffs = np.asarray(coeffs, dtype=complex)

    def q(zs):
        return np.polynomial.polynomial.polyval(zs, coeffs)

    rhs = growth_norm_estimate(q, w, J=16).sup_estimate
    if rhs == 0.0:
        return EmbeddingCheck(0.0, 0.0, True)
    zs = list(boundary_samples(D, count))
    for j in range(1, 9):  # interior radial grid, stays inside the domain
        r = 1.0 - max(2.0 ** -j, H_MAX)
        th = np.arange(64) / 64.0
        zs.extend(r * unit_point(th))
    zs = np.asarray(zs, dtype=complex)
    vals, errs = carleson_many(G, zs)
    lhs = np.max((np.abs(vals) + errs) * np.abs(q(zs)))
    ratio = float(lhs / rhs)
    return EmbeddingCheck(ratio, rhs, ratio <= 1.0 + 1e-9)
