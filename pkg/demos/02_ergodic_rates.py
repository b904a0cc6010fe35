"""Ergodic service rates conditioned on meeting the SIR threshold.

Every delivered layer is served at the conditional mean of
W*log2(1 + SIR) given SIR >= gamma, so each rate sits above the hard
floor W*log2(1 + gamma).  The script prints the full rate table used by
the energy-efficiency objective and cross-checks two entries against the
Monte-Carlo oracle.
"""

import math

from svcache import analytic, montecarlo
from svcache.config import NetworkConfig

DROPS = 20_000

net = NetworkConfig()
floor_bl = net.w * math.log2(1.0 + net.gamma_bl)
floor_el = net.w * math.log2(1.0 + net.gamma_el)

print("building the rate table (analytic, position-averaged)...")
table = analytic.build_rate_table(net, seed=0)

print(f"\nbandwidth W = {net.w / 1e6:.0f} MHz, "
      f"thresholds gamma_BL = {net.gamma_bl:.1f}, "
      f"gamma_EL = {net.gamma_el:.2f} (linear)")
print(f"rate floors: BL {floor_bl / 1e6:.2f} Mbit/s, "
      f"EL {floor_el / 1e6:.2f} Mbit/s\n")

print(f"{'link':<28} {'rate [Mbit/s]':>14} {'above floor':>12}")
print(f"{'MBS, BL threshold':<28} {table.r_m_bl / 1e6:>14.2f} "
      f"{table.r_m_bl / floor_bl:>11.3f}x")
print(f"{'MBS, EL threshold':<28} {table.r_m_el / 1e6:>14.2f} "
      f"{table.r_m_el / floor_el:>11.3f}x")
for n, r in sorted(table.r_s_bl.items()):
    print(f"{f'SBS cluster, BL, n = {n}':<28} {r / 1e6:>14.2f} "
          f"{r / floor_bl:>11.3f}x")
for n, r in sorted(table.r_s_el.items()):
    print(f"{f'SBS cluster, EL, n = {n}':<28} {r / 1e6:>14.2f} "
          f"{r / floor_el:>11.3f}x")

print(f"\nMonte-Carlo cross-check ({DROPS} drops):")
est = montecarlo.estimate_ergodic_rate(net, net.gamma_bl, "MBS", DROPS,
                                       seed=0)
rel = abs(table.r_m_bl - est.mean) / est.mean
print(f"  MBS/BL     analytic {table.r_m_bl / 1e6:8.2f}  "
      f"mc {est.mean / 1e6:8.2f}  rel diff {rel:.3%}")
est = montecarlo.estimate_ergodic_rate(net, net.gamma_bl, "SBS-BL", DROPS,
                                       seed=0, n_serving=net.n1)
rel = abs(table.r_s_bl[net.n1] - est.mean) / est.mean
print(f"  SBS/BL n={net.n1} analytic {table.r_s_bl[net.n1] / 1e6:8.2f}  "
      f"mc {est.mean / 1e6:8.2f}  rel diff {rel:.3%}")
