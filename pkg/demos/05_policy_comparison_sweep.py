"""Energy efficiency of every placement across a cache-size sweep.

Reproduces the headline comparison: both optimized schemes against the
three benchmarks as the per-cell cache grows from nothing to the full
catalog.  With no cache all placements collapse to serve-from-macro and
tie exactly; from there the optimized schemes dominate.
"""

from dataclasses import replace

from svcache import analytic
from svcache.baselines import icp_expected_ee, mpcp_policy, ucp_policy
from svcache.config import ContentConfig, NetworkConfig, PowerCoefficients
from svcache.objective import ObjectiveContext, ee_value
from svcache.optimizer import SolverSettings, optimize_best
from svcache.popularity import build_profile

net = NetworkConfig()
coeff = PowerCoefficients()
settings = SolverSettings(max_iters=200, rel_tol=1e-6)

print("building the rate table (shared across the sweep)...")
rates = analytic.build_rate_table(net, seed=0)

CACHE_SIZES = (0.0, 2e8, 5e8, 1e9)

print(f"\n{'cache[bit]':>10} {'scheme1':>9} {'scheme2':>9} {'MPCP':>9} "
      f"{'UCP':>9} {'ICP':>9}   (EE, bit/J)")
for m_cache in CACHE_SIZES:
    content = replace(ContentConfig(), m_cache=m_cache)
    ctx = ObjectiveContext(rates=rates, profile=build_profile(content),
                           net=net, content=content, coeff=coeff)
    pol1, _ = optimize_best(ctx, "fractional", settings)
    pol2, _ = optimize_best(ctx, "random", settings)
    row = (ee_value(pol1, ctx, exact_l0=True),
           ee_value(pol2, ctx),
           ee_value(mpcp_policy(content), ctx, exact_l0=True),
           ee_value(ucp_policy(content), ctx, exact_l0=True),
           icp_expected_ee(ctx, n_realizations=100, seed=0).mean)
    print(f"{m_cache:>10.1e} " + " ".join(f"{v:>9.0f}" for v in row))

print("\nwith an empty cache every column ties; a bigger cache widens "
      "the lead of the optimized schemes over the uniform and random "
      "benchmarks.")
