"""Benchmark placements: top-popularity, uniform and random binary."""

import itertools

import numpy as np
import pytest

from svcache.baselines import (icp_expected_ee, icp_policy, mpcp_policy,
                               ucp_policy)
from svcache.config import ContentConfig
from svcache.objective import ee_value
from svcache.popularity import build_profile


class TestMpcp:
    def test_caches_top_files_whole(self, content):
        pol = mpcp_policy(content)
        assert pol.q1 == (1.0,) * content.m_b + (0.0,) * (content.f_count
                                                          - content.m_b)
        assert pol.q2 == (1.0,) * content.m_e + (0.0,) * (content.f_count
                                                          - content.m_e)

    def test_full_catalog_fits(self):
        content = ContentConfig(f_count=4, m_cache=1e12)
        pol = mpcp_policy(content)
        assert pol.q1 == (1.0,) * 4 and pol.q2 == (1.0,) * 4

    def test_profile_size_cross_check(self, content):
        small = build_profile(ContentConfig(f_count=5))
        with pytest.raises(ValueError, match="size"):
            mpcp_policy(content, profile=small)

    def test_maximizes_hit_probability(self):
        """Among all binary placements of the same cardinality, caching
        the most popular files maximizes the cache-hit probability;
        verified by exhaustive enumeration on a small catalog."""
        content = ContentConfig(f_count=8, m_cache=3e8)
        assert content.m_b == 3
        profile = build_profile(content)
        p = np.array(profile.p)
        best = max(sum(p[list(combo)])
                   for combo in itertools.combinations(range(8), 3))
        mpcp_hit = float(np.dot(p, mpcp_policy(content).q1))
        assert mpcp_hit == pytest.approx(best, rel=1e-12)


class TestUcp:
    def test_uniform_fractions(self, content):
        pol = ucp_policy(content)
        f = content.f_count
        assert pol.q1 == pytest.approx((content.m_b / f,) * f)
        assert pol.q2 == pytest.approx((content.m_e / f,) * f)

    def test_exact_budget(self, content):
        pol = ucp_policy(content)
        assert sum(pol.q1) == pytest.approx(content.m_b, abs=1e-9)
        assert sum(pol.q2) == pytest.approx(content.m_e, abs=1e-9)
        pol.validate_budget(content, tol=1e-9)


class TestIcp:
    def test_exact_cardinality(self, content):
        for seed in range(20):
            pol = icp_policy(content, seed=seed)
            assert set(pol.q1) <= {0.0, 1.0} and set(pol.q2) <= {0.0, 1.0}
            assert sum(pol.q1) == content.m_b
            assert sum(pol.q2) == content.m_e
            pol.validate_budget(content, tol=1e-9)

    def test_uniform_inclusion_frequency(self, content):
        n = 10_000
        hits = np.zeros(content.f_count)
        for seed in range(n):
            hits += np.array(icp_policy(content, seed=seed).q1)
        p = content.m_b / content.f_count
        sigma = np.sqrt(p * (1.0 - p) / n)
        assert np.abs(hits / n - p).max() <= 3.5 * sigma

    def test_reproducible(self, content):
        assert icp_policy(content, seed=7) == icp_policy(content, seed=7)
        assert icp_policy(content, seed=7) != icp_policy(content, seed=8)


class TestIcpExpectedEe:
    def test_comparable_to_uniform_placement(self, ctx):
        """Averaging random binary placements lands near the uniform
        fractional placement; the EE ratio is nonlinear in the policy,
        so they differ by several percent rather than coinciding."""
        est = icp_expected_ee(ctx, n_realizations=200, seed=0)
        ucp_ee = ee_value(ucp_policy(ctx.content), ctx)
        assert abs(est.mean - ucp_ee) <= 0.15 * ucp_ee

    def test_estimate_fields(self, ctx):
        est = icp_expected_ee(ctx, n_realizations=50, seed=3)
        assert est.n_samples == 50 and est.seed == 3
        assert est.std_error > 0.0

    def test_deterministic(self, ctx):
        a = icp_expected_ee(ctx, n_realizations=30, seed=1)
        b = icp_expected_ee(ctx, n_realizations=30, seed=1)
        assert a.mean == b.mean and a.std_error == b.std_error

    def test_precondition(self, ctx):
        with pytest.raises(ValueError):
            icp_expected_ee(ctx, n_realizations=0)
