"""The polite bully: closed-form rate bounds for near-far lines.

A strong short-loop user shares the low band with a weak long-loop user who
has nowhere else to go.  The strong user's water-filling split, the
interference-minimizing alternative that preserves its own rate, and the
closed-form bracket on the weak user's rate under fixed-margin IWF are all
available without running a single tone-level simulation.
"""

import numpy as np

from specoord import (NearFarParams, bully_power_split, compare_regions,
                      interference_min_p1, rr_iwf_bounds, rr_iwf_exact_tau_r1,
                      symmetric_nearfar_rates)
from dataclasses import replace

base = NearFarParams(alpha=0.01, beta=0.5, gamma=0.0, power=1.0,
                     n1=0.01, n2=0.01)

print("Equal-band case, politeness tau = fraction of power the bully spends")
print(f"{'tau':>5} {'P1 (waterfill)':>15} {'P1 (interf-min)':>16} "
      f"{'C1 weak':>9} {'C2 strong':>10}")
for tau in (1.0, 0.8, 0.6, 0.4):
    p = replace(base, tau=tau)
    p1, p2 = bully_power_split(p)
    p1_min = interference_min_p1(p)
    c1, c2 = symmetric_nearfar_rates(p)
    print(f"{tau:5.1f} {p1:15.4f} {p1_min:16.4f} {c1:9.4f} {c2:10.4f}")
print("The interference-min column never exceeds the waterfill column:")
print("the strong user can keep its rate while dumping less on the weak.\n")

hs = NearFarParams(alpha=0.01, beta=0.5, power=1.0, n1=1e-4, n2=1e-4)
print("Bandwidth-limited bracket on the weak user's rate (equal 1 Hz bands)")
print(f"{'R2':>5} {'lower':>8} {'exact-tau est.':>15} {'upper':>8}  flags")
for r2 in np.linspace(4, 16, 7):
    pair = rr_iwf_bounds(float(r2), hs)
    est = rr_iwf_exact_tau_r1(float(r2), hs)
    tags = ",".join(k for k, v in pair.flags.items() if v is True)
    print(f"{r2:5.1f} {pair.lower:8.4f} {est:15.4f} {pair.upper:8.4f}  {tags}")

print("\nWhole-region comparison, weak-user rate at each strong-user rate:")
curves = compare_regions(hs, np.linspace(4, 14, 6))
for name, curve in curves.items():
    pts = " ".join("(" + ",".join(f"{v:.3f}" for v in row) + ")"
                   for row in curve.points)
    print(f"  {name:17s} {pts}")
