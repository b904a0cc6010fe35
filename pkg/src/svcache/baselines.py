"""Benchmark content-placement policies: MPCP, UCP and ICP."""

from __future__ import annotations

import numpy as np

from svcache.config import CachingPolicy, ContentConfig
from svcache.montecarlo import Estimate
from svcache.objective import ObjectiveContext, ee_value
from svcache.popularity import PopularityProfile


def mpcp_policy(content: ContentConfig,
                profile: PopularityProfile | None = None,
                mode: str = "fractional") -> CachingPolicy:
    """Most Popular Content Placement: cache the top-M_B/M_E files whole.

    Popularity is index order (files are sorted by request probability),
    so the profile argument only cross-checks the catalog size.
    """
    if profile is not None and profile.f_count != content.f_count:
        raise ValueError("profile / content catalog size mismatch")
    q1 = [1.0 if f < content.m_b else 0.0 for f in range(content.f_count)]
    q2 = [1.0 if f < content.m_e else 0.0 for f in range(content.f_count)]
    return CachingPolicy(mode=mode, q1=tuple(q1), q2=tuple(q2))


def ucp_policy(content: ContentConfig, mode: str = "fractional") -> CachingPolicy:
    """Uniform Content Placement: equal fractions M_B/F and M_E/F everywhere."""
    f_count = content.f_count
    return CachingPolicy(mode=mode,
                         q1=(content.m_b / f_count,) * f_count,
                         q2=(content.m_e / f_count,) * f_count)


def icp_policy(content: ContentConfig, seed: int = 0,
               mode: str = "fractional") -> CachingPolicy:
    """Independent Content Placement: one uniform-random binary placement."""
    rng = np.random.default_rng(seed)
    q1 = np.zeros(content.f_count)
    q1[rng.choice(content.f_count, size=content.m_b, replace=False)] = 1.0
    q2 = np.zeros(content.f_count)
    q2[rng.choice(content.f_count, size=content.m_e, replace=False)] = 1.0
    return CachingPolicy(mode=mode, q1=tuple(q1), q2=tuple(q2))


def icp_expected_ee(ctx: ObjectiveContext, n_realizations: int = 1000,
                    seed: int = 0, mode: str = "fractional") -> Estimate:
    """Average EE of ICP over independently re-drawn placements."""
    if n_realizations < 1:
        raise ValueError("n_realizations must be >= 1")
    seeds = np.random.SeedSequence(seed).generate_state(n_realizations)
    values = np.array([ee_value(icp_policy(ctx.content, int(s), mode), ctx)
                       for s in seeds])
    se = float(values.std(ddof=1) / np.sqrt(n_realizations)) \
        if n_realizations > 1 else 0.0
    return Estimate(mean=float(values.mean()), std_error=se,
                    n_samples=n_realizations, seed=seed)
