"""Closed-form successful-transmission probabilities and ergodic rates.

The interference tail function G_alpha(x) = int_x^inf dt / (1 + t^(alpha/2))
underpins every expression.  Probabilities conditioned on serving-station
positions are averaged by Monte-Carlo position integration with
inverse-CDF radius sampling; radial and SIR-tail integrals use adaptive
quadrature with logarithmic truncation of the infinite limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import hyp2f1

from svcache.config import NetworkConfig

# Position samples used for the cluster-averaged quantities.
DEFAULT_POSITION_SAMPLES = 200_000

# Relative tail threshold for truncating the SIR integral over t.
_TAIL_REL = 1e-8


class QuadratureError(RuntimeError):
    """Raised when an adaptive quadrature fails to reach its tolerance."""


def g_alpha_zero(alpha: float) -> float:
    """G_alpha(0) = (2*pi/alpha) / sin(2*pi/alpha), finite for alpha > 2."""
    if alpha <= 2:
        raise ValueError("alpha must be > 2 for the tail integral to converge")
    return (2.0 * math.pi / alpha) / math.sin(2.0 * math.pi / alpha)


def g_alpha(alpha: float, x: float) -> float:
    """Tail integral G_alpha(x), absolute error <= 1e-10."""
    if alpha <= 2:
        raise ValueError("alpha must be > 2 for the tail integral to converge")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return g_alpha_zero(alpha)
    beta = alpha / 2.0
    val, abserr = integrate.quad(lambda t: 1.0 / (1.0 + t ** beta), x, np.inf,
                                 epsabs=1e-12, epsrel=1e-12, limit=200)
    if abserr > 1e-10:
        raise QuadratureError(f"G_alpha quadrature error {abserr:.2e} > 1e-10")
    return val


def g_alpha_vec(alpha: float, x) -> np.ndarray:
    """Vectorized G_alpha via hypergeometric representations.

    For x <= 1 the head integral series x*2F1(1, 1/b; 1+1/b; -x^b) is
    subtracted from G_alpha(0); for x > 1 the tail representation
    x^(1-b)/(b-1) * 2F1(1, 1-1/b; 2-1/b; -x^-b) is used directly.  Both
    keep the hypergeometric argument in [-1, 0].
    """
    if alpha <= 2:
        raise ValueError("alpha must be > 2 for the tail integral to converge")
    beta = alpha / 2.0
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    g0 = g_alpha_zero(alpha)
    small = x <= 1.0
    xs = x[small]
    out[small] = g0 - xs * hyp2f1(1.0, 1.0 / beta, 1.0 + 1.0 / beta, -xs ** beta)
    xl = x[~small]
    out[~small] = (xl ** (1.0 - beta) / (beta - 1.0)
                   * hyp2f1(1.0, 1.0 - 1.0 / beta, 2.0 - 1.0 / beta, -xl ** -beta))
    return out


def g_alpha_head_vec(alpha: float, x) -> np.ndarray:
    """Vectorized head integral int_0^x dt / (1 + t^(alpha/2))."""
    return g_alpha_zero(alpha) - g_alpha_vec(alpha, x)


# ---------------------------------------------------------------------------
# Serving via the nearest MBS
# ---------------------------------------------------------------------------

def _mbs_cond_exponent(cfg: NetworkConfig, gamma, x2):
    """-ln P(SIR_M >= gamma | serving distance^2 = x2), vectorized in gamma."""
    gamma = np.asarray(gamma, dtype=float)
    g_m = g_alpha_vec(cfg.alpha_m, gamma ** (-2.0 / cfg.alpha_m))
    mbs_term = math.pi * cfg.lambda_m * x2 * gamma ** (2.0 / cfg.alpha_m) * g_m
    sbs_term = (math.pi * cfg.lambda_s * g_alpha_zero(cfg.alpha_s)
                * (gamma * cfg.p_s / cfg.p_m) ** (2.0 / cfg.alpha_s)
                * x2 ** (cfg.alpha_m / cfg.alpha_s))
    return mbs_term + sbs_term


def p_success_mbs(cfg: NetworkConfig, gamma: float) -> float:
    """P(SIR_M >= gamma): nearest-MBS success probability.

    Radial integral over the serving distance, nondimensionalized via
    z = pi*lambda_m*x^2 so the position density becomes exp(-z).
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    scale = math.pi * cfg.lambda_m
    # The exponent is c1*z + c2*z^kappa; rescaling by 1 + c1 keeps the
    # integrand O(1) wide even for huge gamma, where the mass would
    # otherwise concentrate in a spike the quadrature can miss.
    c1 = float(_mbs_cond_exponent(cfg, gamma, 1.0 / scale))
    kappa = cfg.alpha_m / cfg.alpha_s
    c2 = (math.pi * cfg.lambda_s * g_alpha_zero(cfg.alpha_s)
          * (gamma * cfg.p_s / cfg.p_m) ** (2.0 / cfg.alpha_s)
          * scale ** -kappa)
    c1 -= c2  # linear part only

    def integrand(u):
        z = u / (1.0 + c1)
        return math.exp(-u - c2 * z ** kappa) / (1.0 + c1)

    val, abserr = integrate.quad(integrand, 0.0, np.inf,
                                 epsabs=1e-14, epsrel=1e-10, limit=200)
    if abserr > 1e-6 * val + 1e-12:
        raise QuadratureError(f"radial quadrature error {abserr:.2e}")
    return min(max(val, 0.0), 1.0)


def p_success_mbs_closed(cfg: NetworkConfig, gamma: float) -> float:
    """Closed form of P(SIR_M >= gamma) for alpha_m = alpha_s = 4."""
    if cfg.alpha_m != 4.0 or cfg.alpha_s != 4.0:
        raise ValueError("closed form requires alpha_m = alpha_s = 4")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    arccot = math.pi / 2.0 - math.atan(gamma ** -0.5)
    penalty = (math.sqrt(gamma) / cfg.lambda_m
               * (math.pi / 2.0 * cfg.lambda_s * math.sqrt(cfg.p_s / cfg.p_m)
                  + cfg.lambda_m * arccot))
    return 1.0 / (1.0 + penalty)


# ---------------------------------------------------------------------------
# Serving via cooperative SBS clusters
# ---------------------------------------------------------------------------

def sample_disk_radii(cfg: NetworkConfig, n_serving: int, n_samples: int,
                      seed: int) -> np.ndarray:
    """Radii of serving SBSs uniform in the disk of radius a: r = a*sqrt(u)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    u = rng.random((n_samples, n_serving))
    return cfg.a * np.sqrt(u)


def sample_annulus_radii(cfg: NetworkConfig, n_serving: int, n_samples: int,
                         seed: int) -> np.ndarray:
    """Radii uniform in the annulus (a, b): r = sqrt(a^2 + (b^2 - a^2)*u)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    u = rng.random((n_samples, n_serving))
    return np.sqrt(cfg.a ** 2 + (cfg.b ** 2 - cfg.a ** 2) * u)


def _bl_cond_exponent(cfg: NetworkConfig, c: np.ndarray,
                      closed_form: bool = False) -> np.ndarray:
    """-ln P(SIR_S,BL >= .) given positions, as a function of c = gamma / sum r^-alpha.

    Interfering SBSs occupy radii beyond a; all MBSs interfere.
    """
    c = np.asarray(c, dtype=float)
    if closed_form:
        if cfg.alpha_m != 4.0 or cfg.alpha_s != 4.0:
            raise ValueError("closed form requires alpha_m = alpha_s = 4")
        u = (cfg.lambda_s * (math.pi / 2.0 - np.arctan(cfg.a ** 2 / np.sqrt(c)))
             + math.pi / 2.0 * cfg.lambda_m * math.sqrt(cfg.p_m / cfg.p_s))
        return math.pi * u * np.sqrt(c)
    sbs_term = (cfg.lambda_s * c ** (2.0 / cfg.alpha_s)
                * g_alpha_vec(cfg.alpha_s, cfg.a ** 2 * c ** (-2.0 / cfg.alpha_s)))
    mbs_term = (cfg.lambda_m * (c * cfg.p_m / cfg.p_s) ** (2.0 / cfg.alpha_m)
                * g_alpha_zero(cfg.alpha_m))
    return math.pi * (sbs_term + mbs_term)


def _el_cond_exponent(cfg: NetworkConfig, d: np.ndarray,
                      closed_form: bool = False) -> np.ndarray:
    """-ln P(SIR_S,EL >= .) given positions, d = gamma / sum r^-alpha.

    Interfering SBSs occupy the inner disk and radii beyond b; the
    annulus itself holds only serving or silent cluster members.
    """
    d = np.asarray(d, dtype=float)
    if closed_form:
        if cfg.alpha_m != 4.0 or cfg.alpha_s != 4.0:
            raise ValueError("closed form requires alpha_m = alpha_s = 4")
        v = (cfg.lambda_s * (np.arctan(cfg.a ** 2 / np.sqrt(d))
                             + (math.pi / 2.0 - np.arctan(cfg.b ** 2 / np.sqrt(d))))
             + math.pi / 2.0 * cfg.lambda_m * math.sqrt(cfg.p_m / cfg.p_s))
        return math.pi * v * np.sqrt(d)
    scale = d ** (-2.0 / cfg.alpha_s)
    sbs_term = (cfg.lambda_s * d ** (2.0 / cfg.alpha_s)
                * (g_alpha_head_vec(cfg.alpha_s, cfg.a ** 2 * scale)
                   + g_alpha_vec(cfg.alpha_s, cfg.b ** 2 * scale)))
    mbs_term = (cfg.lambda_m * (d * cfg.p_m / cfg.p_s) ** (2.0 / cfg.alpha_m)
                * g_alpha_zero(cfg.alpha_m))
    return math.pi * (sbs_term + mbs_term)


def _p_success_cluster(cfg, gamma, n_serving, sampler, exponent, n_samples,
                       seed, closed_form):
    if n_serving < 1:
        raise ValueError("n_serving must be >= 1")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    radii = sampler(cfg, n_serving, n_samples, seed)
    scale = (radii ** -cfg.alpha_s).sum(axis=1)
    vals = np.exp(-exponent(cfg, gamma / scale, closed_form=closed_form))
    return float(vals.mean())


def p_success_sbs_bl(cfg: NetworkConfig, gamma_bl: float, n1_serving: int,
                     n_samples: int = DEFAULT_POSITION_SAMPLES,
                     seed: int = 0) -> float:
    """P(SIR_S,BL >= gamma_bl) with n1_serving cooperative SBSs in the disk."""
    return _p_success_cluster(cfg, gamma_bl, n1_serving, sample_disk_radii,
                              _bl_cond_exponent, n_samples, seed, False)


def p_success_sbs_el(cfg: NetworkConfig, gamma_el: float, n2_serving: int,
                     n_samples: int = DEFAULT_POSITION_SAMPLES,
                     seed: int = 0) -> float:
    """P(SIR_S,EL >= gamma_el) with n2_serving cooperative SBSs in the annulus."""
    return _p_success_cluster(cfg, gamma_el, n2_serving, sample_annulus_radii,
                              _el_cond_exponent, n_samples, seed, False)


def p_success_sbs_bl_closed(cfg: NetworkConfig, gamma_bl: float, n1_serving: int,
                            n_samples: int = DEFAULT_POSITION_SAMPLES,
                            seed: int = 0) -> float:
    """Arccot-based special case (alpha = 4), sharing position samples."""
    return _p_success_cluster(cfg, gamma_bl, n1_serving, sample_disk_radii,
                              _bl_cond_exponent, n_samples, seed, True)


def p_success_sbs_el_closed(cfg: NetworkConfig, gamma_el: float, n2_serving: int,
                            n_samples: int = DEFAULT_POSITION_SAMPLES,
                            seed: int = 0) -> float:
    """Arccot/arctan-based special case (alpha = 4), sharing position samples."""
    return _p_success_cluster(cfg, gamma_el, n2_serving, sample_annulus_radii,
                              _el_cond_exponent, n_samples, seed, True)


# ---------------------------------------------------------------------------
# Ergodic service rates
# ---------------------------------------------------------------------------

def _log_tail_nodes(gamma: float, s_max: float, n_nodes: int):
    """Gauss-Legendre nodes/weights for int_gamma^(gamma*e^smax) f(t) dt
    under t = gamma*exp(s); returned weights absorb the Jacobian t."""
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    s = 0.5 * s_max * (nodes + 1.0)
    t = gamma * np.exp(s)
    return t, 0.5 * s_max * weights * t


def ergodic_rate_mbs(cfg: NetworkConfig, gamma: float) -> float:
    """Ergodic nearest-MBS service rate conditioned on SIR >= gamma.

    Conditioning is on the overall success event, so the SIR tail
    probability is averaged over the serving distance in the numerator
    and denominator separately:

        R = W log2(1+gamma) + (W/ln2) int_gamma^inf P(SIR>=t)
                                       / ((1+t) P(SIR>=gamma)) dt.

    The tail integral is log-substituted (t = gamma*e^s) and extended
    segment by segment until the last segment contributes < _TAIL_REL.
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if cfg.w == 0:
        return 0.0
    p_floor = p_success_mbs(cfg, gamma)

    total = 0.0
    s_lo, s_hi = 0.0, 4.0
    nodes, weights = np.polynomial.legendre.leggauss(40)
    for _ in range(40):
        s = s_lo + 0.5 * (s_hi - s_lo) * (nodes + 1.0)
        t = gamma * np.exp(s)
        vals = np.array([p_success_mbs(cfg, tk) for tk in t]) / (1.0 + t)
        seg = float(0.5 * (s_hi - s_lo) * (weights * vals * t).sum())
        total += seg
        if seg < _TAIL_REL * max(total, 1e-300):
            break
        s_lo, s_hi = s_hi, s_hi + (s_hi - s_lo)
    else:
        raise QuadratureError("SIR tail integral did not truncate")
    return (cfg.w * math.log2(1.0 + gamma)
            + cfg.w / math.log(2.0) * total / p_floor)


def _ergodic_rate_cluster(cfg, gamma, n_serving, sampler, exponent,
                          n_samples, seed):
    if n_serving < 1:
        raise ValueError("n_serving must be >= 1")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if cfg.w == 0:
        return 0.0
    closed = cfg.alpha_m == 4.0 and cfg.alpha_s == 4.0
    radii = sampler(cfg, n_serving, n_samples, seed)
    scale = (radii ** -cfg.alpha_s).sum(axis=1)
    # Conditioning is on the overall success event: the tail probability
    # is averaged over serving positions before the ratio is taken.
    p_floor = float(np.exp(-exponent(cfg, gamma / scale,
                                     closed_form=closed)).mean())

    total = 0.0
    s_lo, s_hi = 0.0, 4.0
    nodes, weights = np.polynomial.legendre.leggauss(40)
    for _ in range(40):
        s = s_lo + 0.5 * (s_hi - s_lo) * (nodes + 1.0)
        t = gamma * np.exp(s)
        seg = 0.0
        for tk, wk in zip(t, weights):
            p_t = float(np.exp(-exponent(cfg, tk / scale,
                                         closed_form=closed)).mean())
            seg += wk * p_t * tk / (1.0 + tk)
        seg *= 0.5 * (s_hi - s_lo)
        total += seg
        if seg < _TAIL_REL * max(total, 1e-300):
            break
        s_lo, s_hi = s_hi, s_hi + (s_hi - s_lo)
    else:
        raise QuadratureError("SIR tail integral did not truncate")
    return (cfg.w * math.log2(1.0 + gamma)
            + cfg.w / math.log(2.0) * total / p_floor)


def ergodic_rate_sbs_bl(cfg: NetworkConfig, gamma_bl: float, n1_serving: int,
                        n_samples: int = DEFAULT_POSITION_SAMPLES,
                        seed: int = 0) -> float:
    """Ergodic cooperative-SBS rate for base-layer delivery."""
    return _ergodic_rate_cluster(cfg, gamma_bl, n1_serving, sample_disk_radii,
                                 _bl_cond_exponent, n_samples, seed)


def ergodic_rate_sbs_el(cfg: NetworkConfig, gamma_el: float, n2_serving: int,
                        n_samples: int = DEFAULT_POSITION_SAMPLES,
                        seed: int = 0) -> float:
    """Ergodic cooperative-SBS rate for enhancement-layer delivery."""
    return _ergodic_rate_cluster(cfg, gamma_el, n2_serving, sample_annulus_radii,
                                 _el_cond_exponent, n_samples, seed)


# ---------------------------------------------------------------------------
# Rate table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RateTable:
    """Precomputed ergodic rates consumed by the sum-rate models."""

    r_m_bl: float                 # nearest-MBS rate at the BL threshold
    r_m_el: float                 # nearest-MBS rate at the EL threshold
    r_s_bl: dict = field(hash=False)   # n1 -> cooperative BL rate
    r_s_el: dict = field(hash=False)   # n2 -> cooperative EL rate
    provenance: str = "Analytic"
    seed: int = 0
    n_samples: int = DEFAULT_POSITION_SAMPLES


def build_rate_table(cfg: NetworkConfig,
                     n_samples: int = DEFAULT_POSITION_SAMPLES,
                     seed: int = 0) -> RateTable:
    """Evaluate all rates needed by the sum-rate expressions, memoized."""
    r_s_bl = {n: ergodic_rate_sbs_bl(cfg, cfg.gamma_bl, n, n_samples, seed)
              for n in range(1, cfg.n1 + 1)}
    r_s_el = {n: ergodic_rate_sbs_el(cfg, cfg.gamma_el, n, n_samples, seed)
              for n in range(1, cfg.n2 + 1)}
    return RateTable(
        r_m_bl=ergodic_rate_mbs(cfg, cfg.gamma_bl),
        r_m_el=ergodic_rate_mbs(cfg, cfg.gamma_el),
        r_s_bl=r_s_bl,
        r_s_el=r_s_el,
        provenance="Analytic",
        seed=seed,
        n_samples=n_samples,
    )
