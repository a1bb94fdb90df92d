"""Where does competing stop paying off?

Two users share two equal bands with symmetric cross coupling h.  Each can
either water-fill over everything (compete) or retreat to its own band
(split).  The four payoffs T, R, P, N of the resulting 2x2 game reorder as
h grows, and the ordering decides whether distributed water-filling is
already optimal or a frequency split is worth coordinating.
"""

import numpy as np

from specoord import classify_game, h_lim1, h_lim2, payoff_quad, recommend_strategy

SNR = 10.0

print(f"Symmetric two-band game at snr = {SNR:g}")
print(f"  competition pays until h = {h_lim1(SNR):.4f} (R overtakes P)")
print(f"  P drops below N beyond   h = {h_lim2(SNR):.4f} (chicken territory)\n")

header = f"{'h':>5} {'T':>7} {'R':>7} {'P':>7} {'N':>7}  region  ordering        play"
print(header)
print("-" * len(header))
for h in np.arange(0.0, 1.0, 0.1):
    q = payoff_quad(float(h), SNR)
    g = classify_game(float(h), SNR)
    rec = recommend_strategy(float(h), SNR)
    print(f"{h:5.1f} {q.T:7.3f} {q.R:7.3f} {q.P:7.3f} {q.N:7.3f}"
          f"  {g.region.code:>4}    {g.ordering:<14} {rec}")

print("""
Reading the table: in region A (deadlock) everyone should just water-fill;
in B (prisoner's dilemma) and C (chicken) a frequency split earns both
users R instead of the Nash payoff P.  The `region-map` CLI subcommand
writes this classification over a full (h, snr) grid as CSV.""")
