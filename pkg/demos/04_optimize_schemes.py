"""Projected-gradient maximization of energy efficiency, both schemes.

Scheme 1 caches a fraction q of each layer at every small cell;
Scheme 2 caches each layer whole with probability t, independently per
cell.  Both feasible sets are capped simplices (entries in [0,1], fixed
budget), so the ascent alternates a gradient step with an exact
Euclidean projection.  The script starts each scheme from the uniform
placement and prints the convergence trace and the optimized policies.
"""

import numpy as np

from svcache import analytic
from svcache.baselines import ucp_policy
from svcache.config import ContentConfig, NetworkConfig, PowerCoefficients
from svcache.objective import ObjectiveContext, ee_value
from svcache.optimizer import SolverSettings, optimize
from svcache.popularity import build_profile

net = NetworkConfig()
content = ContentConfig()
profile = build_profile(content)

print("building the rate table...")
ctx = ObjectiveContext(rates=analytic.build_rate_table(net, seed=0),
                       profile=profile, net=net, content=content,
                       coeff=PowerCoefficients())
settings = SolverSettings(max_iters=500, rel_tol=1e-6)

for scheme, mode in ((1, "fractional"), (2, "random")):
    initial = ucp_policy(content, mode=mode)
    policy, trace = optimize(initial, ctx, settings)
    ees = trace.ee_values()
    print(f"\nscheme {scheme} ({mode} caching): {trace.termination} after "
          f"{len(ees)} iterations")
    print(f"  EE: start {ee_value(initial, ctx):.1f} -> "
          f"best {ees.max():.1f} bit/J")
    marks = [0, 4, 9, 49, len(ees) - 1]
    for i in sorted(set(m for m in marks if m < len(ees))):
        print(f"  iter {i + 1:>3}: EE = {ees[i]:.1f}")
    q1 = np.round(policy.q1, 3)
    q2 = np.round(policy.q2, 3)
    print(f"  base-layer placement:        {q1}")
    print(f"  enhancement-layer placement: {q2}")
    if mode == "fractional":
        print(f"  exact-l0 EE of the optimum: "
              f"{ee_value(policy, ctx, exact_l0=True):.1f} bit/J")
