"""Star-domain geometry and the inner-boundary growth estimate."""

import math

import numpy as np
import pytest

from gst import fixtures, weights
from gst.circle import point_set
from gst.inner_outer import auto_carleson_N, carleson_outer
from gst.privalov import (H_MAX, PrivalovDomain, boundary_samples,
                          boundary_samples_with_profile, embedding_check,
                          privalov_boundary_estimate)

W_T = weights.power(1.0)


class TestGeometry:
    def test_contains_origin(self):
        D = PrivalovDomain(point_set([0.0]))
        assert D.contains(0.0)

    def test_antipodal_profile(self):
        D = PrivalovDomain(point_set([0.0]))
        assert D.profile(0.5) == pytest.approx(1.0 / 32.0)
        z = 0.96875 * np.exp(1j * math.pi)
        assert not D.contains(complex(z))  # boundary excluded

    def test_rays_through_set_points(self):
        D = PrivalovDomain(point_set([0.0]))
        for r in (0.1, 0.9, 0.999999):
            assert D.contains(r + 0.0j)

    def test_profile_range(self):
        D = PrivalovDomain(fixtures.triadic_cantor_set(5))
        ts = np.linspace(0, 1, 20001)
        hs = np.array([D.profile(t) for t in ts])
        assert np.all(hs >= 0.0)
        assert np.all(hs <= H_MAX + 1e-15)

    def test_profile_comparable_to_distance_squared(self):
        E = fixtures.triadic_cantor_set(5)
        D = PrivalovDomain(E)
        rng = np.random.default_rng(21)
        ts = rng.uniform(0, 1, 10000)
        for t in ts:
            d = E.dist(t)
            if d == 0.0:
                continue
            ratio = D.profile(t) / d ** 2
            assert 1.0 / 8.0 - 1e-9 <= ratio <= 0.5 + 1e-9

    def test_boundary_approached_from_inside(self):
        D = PrivalovDomain(point_set([0.0]))
        z = D.boundary_point(0.37)
        assert not D.contains(z)
        assert D.contains(z * (1.0 - 1e-9))


class TestBoundarySamples:
    def test_outside_domain_inside_disc(self):
        D = PrivalovDomain(point_set([0.0]))
        zs, hs = boundary_samples_with_profile(D, 64)
        assert np.all(hs > 0.0)
        for z in zs:
            assert abs(z) < 1.0 + 1e-15
            assert not D.contains(complex(z))

    def test_profile_identity(self):
        D = PrivalovDomain(point_set([0.0]))
        zs, hs = boundary_samples_with_profile(D, 64)
        # 1 - |z| = h exactly, up to float representation of 1 - h
        assert np.max(np.abs((1.0 - np.abs(zs)) - hs)) <= 1e-15

    def test_antipodal_included(self):
        D = PrivalovDomain(point_set([0.0]))
        zs = boundary_samples(D, 4)
        assert np.min(np.abs(zs)) == pytest.approx(1.0 - 1.0 / 32.0)


class TestBoundaryEstimate:
    def test_auto_N_point_set(self):
        E = point_set([0.0])
        D = PrivalovDomain(E)
        G = auto_carleson_N(E, W_T,
                            lambda g: privalov_boundary_estimate(D, g,
                                                                 256).ok)
        res = privalov_boundary_estimate(D, G, 2048)
        assert res.ok and res.max_ratio <= 1.0 + 1e-9

    def test_tiny_N_fails(self):
        E = point_set([0.0])
        D = PrivalovDomain(E)
        G = carleson_outer(E, W_T, 1e-12)  # essentially G = 1
        res = privalov_boundary_estimate(D, G, 256)
        assert not res.ok

    def test_triadic_auto_N(self):
        E = fixtures.triadic_cantor_set(5)
        D = PrivalovDomain(E)
        G = auto_carleson_N(E, W_T,
                            lambda g: privalov_boundary_estimate(D, g,
                                                                 256).ok)
        res = privalov_boundary_estimate(D, G, 2048)
        assert res.ok


class TestEmbedding:
    def test_monomial(self):
        E = point_set([0.0])
        D = PrivalovDomain(E)
        G = auto_carleson_N(E, W_T,
                            lambda g: privalov_boundary_estimate(D, g,
                                                                 256).ok)
        res = embedding_check(D, G, [0] * 16 + [1], W_T, 512)
        assert res.ok

    def test_constant(self):
        E = point_set([0.0])
        D = PrivalovDomain(E)
        G = auto_carleson_N(E, W_T,
                            lambda g: privalov_boundary_estimate(D, g,
                                                                 256).ok)
        res = embedding_check(D, G, [1.0], W_T, 256)
        assert res.ok

    def test_zero_polynomial(self):
        E = point_set([0.0])
        D = PrivalovDomain(E)
        G = carleson_outer(E, W_T, 8.0)
        res = embedding_check(D, G, [0.0], W_T, 128)
        assert res.ok
