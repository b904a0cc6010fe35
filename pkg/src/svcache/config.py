"""Scenario description: network, content and power constants.

All physical quantities are stored in SI units (watts, hertz, metres,
bits, linear SIR).  The scenario file may give powers in dBm and SIR
thresholds in dB; they are converted on load.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(x_w: float) -> float:
    return 10.0 * math.log10(x_w) + 30.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class NetworkConfig:
    """Physical-layer constants of the two-tier network.

    Densities are points per square metre, powers in watts, radii in
    metres, bandwidth in Hz, QoS thresholds in linear SIR.
    """

    lambda_m: float = 1.0 / (250.0 ** 2 * math.pi)  # MBS density
    lambda_s: float = 1.0 / (100.0 ** 2 * math.pi)  # SBS density
    p_m: float = dbm_to_watts(43.0)    # MBS transmit power
    p_s: float = dbm_to_watts(23.0)    # SBS transmit power
    alpha_m: float = 4.0               # MBS path-loss exponent
    alpha_s: float = 4.0               # SBS path-loss exponent
    a: float = 50.0                    # inner cluster radius
    b: float = 100.0                   # outer cluster radius
    n1: int = 4                        # SBS count in the inner cluster
    n2: int = 4                        # SBS count in the outer cluster
    w: float = 10e6                    # bandwidth
    gamma_bl: float = db_to_linear(10.0)  # BL QoS threshold
    gamma_el: float = db_to_linear(5.0)   # EL QoS threshold

    def __post_init__(self):
        _require(self.lambda_m > 0, "lambda_m", "must be > 0")
        _require(self.lambda_s > 0, "lambda_s", "must be > 0")
        _require(self.p_m > 0, "p_m", "must be > 0")
        _require(self.p_s > 0, "p_s", "must be > 0")
        _require(self.alpha_m > 2, "alpha_m", "must be > 2")
        _require(self.alpha_s > 2, "alpha_s", "must be > 2")
        _require(0 < self.a, "a", "must be > 0")
        _require(self.a < self.b, "a", "must satisfy a < b")
        _require(self.n1 >= 0, "n1", "must be >= 0")
        _require(self.n2 >= 0, "n2", "must be >= 0")
        _require(self.w > 0, "w", "must be > 0")
        _require(self.gamma_bl > 0, "gamma_bl", "must be > 0")
        _require(self.gamma_el > 0, "gamma_el", "must be > 0")


@dataclass(frozen=True)
class ContentConfig:
    """Video catalog and per-SBS cache capacity (sizes in bits)."""

    f_count: int = 20        # catalog size
    l_b: float = 1e8         # base-layer size
    l_e: float = 2e8         # enhancement-layer size
    m_cache: float = 5e8     # per-SBS cache size
    zipf_alpha: float = 1.0  # popularity skewness

    def __post_init__(self):
        _require(self.f_count >= 2, "f_count", "must be >= 2")
        _require(self.l_b >= 0, "l_b", "must be >= 0")
        _require(self.l_e >= 0, "l_e", "must be >= 0")
        _require(self.m_cache >= 0, "m_cache", "must be >= 0")
        _require(self.zipf_alpha >= 0, "zipf_alpha", "must be >= 0")

    @property
    def m_b(self) -> int:
        """Number of cacheable base layers, clamped to the catalog size."""
        if self.l_b == 0:
            return self.f_count
        return min(int(self.m_cache // self.l_b), self.f_count)

    @property
    def m_e(self) -> int:
        """Number of cacheable enhancement layers, clamped to the catalog size."""
        if self.l_e == 0:
            return self.f_count
        return min(int(self.m_cache // self.l_e), self.f_count)


@dataclass(frozen=True)
class PowerCoefficients:
    """Caching / backhaul / amplifier / fixed power constants."""

    c_ca: float = 6.25e-12   # caching coefficient, W/bit
    c_bh: float = 5e-7       # backhaul coefficient, W/bit
    zeta_s: float = 4.7      # SBS amplifier efficiency coefficient
    zeta_m: float = 4.7      # MBS amplifier efficiency coefficient
    p_s_fix: float = 6.8     # SBS fixed power, W
    p_m_fix: float = 130.0   # MBS fixed power, W

    def __post_init__(self):
        for key in ("c_ca", "c_bh", "zeta_s", "zeta_m", "p_s_fix", "p_m_fix"):
            _require(getattr(self, key) >= 0, key, "must be >= 0")
        if self.c_ca >= self.c_bh:
            warnings.warn(
                "c_ca >= c_bh: caching costs more power per bit than backhaul",
                stacklevel=2,
            )


@dataclass(frozen=True)
class CachingPolicy:
    """Per-file caching fractions (fractional) or probabilities (random).

    q1 covers base layers, q2 enhancement layers; both are length-F
    tuples with entries in [0, 1].
    """

    mode: str           # "fractional" (Scheme I) or "random" (Scheme II)
    q1: tuple
    q2: tuple

    def __post_init__(self):
        _require(self.mode in ("fractional", "random"), "mode",
                 "must be 'fractional' or 'random'")
        object.__setattr__(self, "q1", tuple(float(x) for x in self.q1))
        object.__setattr__(self, "q2", tuple(float(x) for x in self.q2))
        _require(len(self.q1) == len(self.q2), "q1", "length mismatch with q2")
        for name, vec in (("q1", self.q1), ("q2", self.q2)):
            for x in vec:
                _require(-1e-12 <= x <= 1 + 1e-12, name,
                         f"entry {x} outside [0, 1]")

    @property
    def f_count(self) -> int:
        return len(self.q1)

    def validate_budget(self, content: ContentConfig, tol: float = 1e-9) -> None:
        """Check the cache-size budget equalities sum(q1)=M_B, sum(q2)=M_E."""
        _require(len(self.q1) == content.f_count, "q1",
                 f"length {len(self.q1)} != catalog size {content.f_count}")
        if abs(sum(self.q1) - content.m_b) > tol:
            raise ValueError(f"q1: sum {sum(self.q1)} != BL budget {content.m_b}")
        if abs(sum(self.q2) - content.m_e) > tol:
            raise ValueError(f"q2: sum {sum(self.q2)} != EL budget {content.m_e}")


def _require(cond: bool, key: str, msg: str) -> None:
    if not cond:
        raise ValueError(f"{key}: {msg}")


# Scenario file schema: flat "key = value" lines, '#' comments.  Powers
# accept either a *_w or *_dbm suffix; SIR thresholds either linear
# (gamma_bl) or dB (gamma_bl_db).  Unlisted keys fall back to defaults.
_NETWORK_KEYS = {"lambda_m", "lambda_s", "alpha_m", "alpha_s", "a", "b",
                 "n1", "n2", "w"}
_CONTENT_KEYS = {"f_count", "l_b", "l_e", "m_cache", "zipf_alpha"}
_POWER_KEYS = {"c_ca", "c_bh", "zeta_s", "zeta_m", "p_s_fix", "p_m_fix"}
_ALT_KEYS = {"p_m_w", "p_m_dbm", "p_s_w", "p_s_dbm",
             "gamma_bl", "gamma_bl_db", "gamma_el", "gamma_el_db"}


def _parse_kv(path) -> dict:
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        try:
            raw[key] = float(value.strip())
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric value for {key!r}") from None
    return raw


def load_scenario(path) -> tuple[NetworkConfig, ContentConfig, PowerCoefficients]:
    """Load and validate a scenario file, filling gaps with defaults."""
    raw = _parse_kv(path)
    known = _NETWORK_KEYS | _CONTENT_KEYS | _POWER_KEYS | _ALT_KEYS
    for key in raw:
        if key not in known:
            raise ValueError(f"{key}: unknown scenario key")
    for base in ("p_m", "p_s", "gamma_bl", "gamma_el"):
        if f"{base}_dbm" in raw and f"{base}_w" in raw:
            raise ValueError(f"{base}: both _dbm and _w given")

    net_kwargs = {k: raw[k] for k in _NETWORK_KEYS if k in raw}
    for k in ("n1", "n2"):
        if k in net_kwargs:
            net_kwargs[k] = int(net_kwargs[k])
    if "p_m_w" in raw:
        net_kwargs["p_m"] = raw["p_m_w"]
    elif "p_m_dbm" in raw:
        net_kwargs["p_m"] = dbm_to_watts(raw["p_m_dbm"])
    if "p_s_w" in raw:
        net_kwargs["p_s"] = raw["p_s_w"]
    elif "p_s_dbm" in raw:
        net_kwargs["p_s"] = dbm_to_watts(raw["p_s_dbm"])
    if "gamma_bl_db" in raw:
        net_kwargs["gamma_bl"] = db_to_linear(raw["gamma_bl_db"])
    elif "gamma_bl" in raw:
        net_kwargs["gamma_bl"] = raw["gamma_bl"]
    if "gamma_el_db" in raw:
        net_kwargs["gamma_el"] = db_to_linear(raw["gamma_el_db"])
    elif "gamma_el" in raw:
        net_kwargs["gamma_el"] = raw["gamma_el"]

    content_kwargs = {k: raw[k] for k in _CONTENT_KEYS if k in raw}
    if "f_count" in content_kwargs:
        content_kwargs["f_count"] = int(content_kwargs["f_count"])
    power_kwargs = {k: raw[k] for k in _POWER_KEYS if k in raw}

    return (NetworkConfig(**net_kwargs),
            ContentConfig(**content_kwargs),
            PowerCoefficients(**power_kwargs))
