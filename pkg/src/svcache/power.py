"""Network power consumption for the two caching schemes.

Total power = transmission + caching + backhaul + fixed.  Scheme I
(fractional caching) drives transmission power through indicator
(l0-norm) terms, optionally smoothed; Scheme II (random caching)
through expected active-station counts and cluster-miss probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from svcache.config import CachingPolicy, ContentConfig, NetworkConfig, PowerCoefficients
from svcache.popularity import PopularityProfile

# Entries below this magnitude count as zero for the exact l0 norm.
_L0_TOL = 1e-12


@dataclass(frozen=True)
class PowerBreakdown:
    p_tr: float
    p_ca: float
    p_bh: float
    p_fix: float

    @property
    def p_total(self) -> float:
        return self.p_tr + self.p_ca + self.p_bh + self.p_fix


def _smooth_or_l0(x: np.ndarray, theta) -> np.ndarray:
    if theta is None:
        return (np.abs(x) > _L0_TOL).astype(float)
    return np.log(x / theta + 1.0) / np.log(1.0 / theta + 1.0)


def _check_policy(policy: CachingPolicy, profile: PopularityProfile,
                  expected_mode: str):
    if policy.mode != expected_mode:
        raise ValueError(f"policy mode {policy.mode!r}, expected {expected_mode!r}")
    if policy.f_count != profile.f_count:
        raise ValueError(f"policy length {policy.f_count} != catalog size "
                         f"{profile.f_count}")


def power_scheme1(policy: CachingPolicy, profile: PopularityProfile,
                  net: NetworkConfig, content: ContentConfig,
                  coeff: PowerCoefficients,
                  smoothing: float | None = None) -> PowerBreakdown:
    """Power consumption under fractional caching.

    With smoothing=None the transmission term uses the exact l0 norm of
    each caching fraction; otherwise each indicator is replaced by the
    logarithmic surrogate with parameter theta=smoothing.
    """
    _check_policy(policy, profile, "fractional")
    p = np.asarray(profile.p)
    g_hdv = np.asarray(profile.g_hdv)
    q1 = np.asarray(policy.q1)
    q2 = np.asarray(policy.q2)

    p_tr = float(np.sum(p * (
        net.p_s * coeff.zeta_s * (net.n1 * _smooth_or_l0(q1, smoothing)
                                  + g_hdv * net.n2 * _smooth_or_l0(q2, smoothing))
        + net.p_m * coeff.zeta_m * (_smooth_or_l0(1.0 - q1, smoothing)
                                    + g_hdv * _smooth_or_l0(1.0 - q2, smoothing)))))
    p_ca = float(coeff.c_ca * np.sum(q1 * content.l_b * net.n1
                                     + q2 * content.l_e * net.n2))
    p_bh = float(coeff.c_bh * np.sum(p * ((1.0 - q1) * content.l_b
                                          + g_hdv * (1.0 - q2) * content.l_e)))
    p_fix = (net.n1 + net.n2) * coeff.p_s_fix + coeff.p_m_fix
    return PowerBreakdown(p_tr, p_ca, p_bh, p_fix)


def power_scheme2(policy: CachingPolicy, profile: PopularityProfile,
                  net: NetworkConfig, content: ContentConfig,
                  coeff: PowerCoefficients,
                  strict_el_bl_size: bool = False) -> PowerBreakdown:
    """Power consumption under random caching.

    Enhancement-layer caching power uses the enhancement-layer size; set
    strict_el_bl_size=True to bill it at the base-layer size instead
    (size-independent variant).
    """
    _check_policy(policy, profile, "random")
    p = np.asarray(profile.p)
    g_hdv = np.asarray(profile.g_hdv)
    t1 = np.asarray(policy.q1)
    t2 = np.asarray(policy.q2)

    p_tr = float(np.sum(p * (
        net.p_s * coeff.zeta_s * (net.n1 * t1 + g_hdv * net.n2 * t2)
        + net.p_m * coeff.zeta_m * ((1.0 - t1) + g_hdv * (1.0 - t2)))))
    l_el_cache = content.l_b if strict_el_bl_size else content.l_e
    p_ca = float(coeff.c_ca * np.sum(t1 * content.l_b * net.n1
                                     + t2 * l_el_cache * net.n2))
    p_bh = float(coeff.c_bh * np.sum(p * (
        (1.0 - t1) ** net.n1 * content.l_b
        + g_hdv * (1.0 - t2) ** net.n2 * content.l_e)))
    p_fix = (net.n1 + net.n2) * coeff.p_s_fix + coeff.p_m_fix
    return PowerBreakdown(p_tr, p_ca, p_bh, p_fix)
