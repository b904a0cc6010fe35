"""Content request popularity and perceptual-quality preference models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from svcache.config import ContentConfig


def zipf(f_count: int, zipf_alpha: float) -> np.ndarray:
    """Zipf request probabilities p_f = f^-alpha / sum_n n^-alpha.

    Files are indexed 1..F in descending popularity.  The normalizer is
    summed from the smallest terms up (f = F down to 1) to limit
    floating-point error.
    """
    if f_count < 1:
        raise ValueError("f_count must be >= 1")
    if zipf_alpha < 0:
        raise ValueError("zipf_alpha must be >= 0")
    f = np.arange(1, f_count + 1, dtype=float)
    weights = f ** (-zipf_alpha)
    norm = weights[::-1].sum()
    return weights / norm


def quality_preference(f: int, f_count: int) -> tuple[float, float]:
    """(SDV, HDV) preference of file f: g_sdv = (f-1)/(F-1), g_hdv = 1 - g_sdv."""
    if f_count < 2:
        raise ValueError("f_count must be >= 2")
    if not 1 <= f <= f_count:
        raise ValueError(f"file index {f} outside 1..{f_count}")
    g_sdv = (f - 1) / (f_count - 1)
    return g_sdv, 1.0 - g_sdv


@dataclass(frozen=True)
class PopularityProfile:
    """Per-file request probabilities and quality preferences."""

    p: tuple
    g_sdv: tuple
    g_hdv: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))
        object.__setattr__(self, "g_sdv", tuple(float(x) for x in self.g_sdv))
        object.__setattr__(self, "g_hdv", tuple(float(x) for x in self.g_hdv))
        if abs(sum(self.p) - 1.0) > 1e-12:
            raise ValueError("request probabilities must sum to 1")
        if any(self.p[i] < self.p[i + 1] - 1e-15 for i in range(len(self.p) - 1)):
            raise ValueError("request probabilities must be non-increasing")
        for s, h in zip(self.g_sdv, self.g_hdv):
            if s + h != 1.0:
                raise ValueError("g_sdv + g_hdv must equal 1 exactly")

    @property
    def f_count(self) -> int:
        return len(self.p)


def build_profile(content: ContentConfig) -> PopularityProfile:
    """Assemble the request/preference profile for a content catalog."""
    p = zipf(content.f_count, content.zipf_alpha)
    prefs = [quality_preference(f, content.f_count)
             for f in range(1, content.f_count + 1)]
    g_sdv = [s for s, _ in prefs]
    g_hdv = [h for _, h in prefs]
    return PopularityProfile(p=tuple(p), g_sdv=tuple(g_sdv), g_hdv=tuple(g_hdv))
