"""Dynamic frequency-division at the tone level.

The near (strong) user picks the highest cutoff frequency that still lets it
reach its rate target using only tones above the cutoff, then spends the
least power that meets the target there.  Interference onto far users below
the cutoff is exactly zero, which is the whole point: the near user can
afford the high end of the spectrum, the far user cannot.

The protocol is one-shot: the near user measures the received noise floor
(background noise plus whatever the others currently transmit), allocates,
and the far user re-water-fills once in response.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import ChannelMatrixSet, NoiseProfile
from .game import PowerAllocation, capacity
from .oracle import RateRegionCurve
from .waterfilling import (EffectiveNoise, InfeasibleError, achievable_rate,
                           effective_noise, iterate_iwf, waterfill_fm,
                           waterfill_ra)


@dataclass(frozen=True)
class DfdmResult:
    """Outcome of a dynamic-FDM allocation for the near user."""

    cutoff_index: int
    cutoff_hz: float
    allocation: PowerAllocation
    achieved_rate: float
    target_rate: float
    feasible: bool = True


def _masked(eff: EffectiveNoise, cutoff: int) -> EffectiveNoise:
    usable = eff.usable.copy()
    usable[:cutoff] = False
    return EffectiveNoise(user=eff.user, values=eff.values, usable=usable)


def find_cutoff(channel: ChannelMatrixSet, noise: NoiseProfile, user: int,
                target_rate: float, budget: float,
                others: Sequence[PowerAllocation] = (),
                gap: float = 1.0) -> int:
    """Largest cutoff index k such that tones k..K-1 still carry the target.

    The achievable rate (rate-adaptive water-filling of the full budget on
    the remaining tones) is non-increasing in the cutoff, so a binary
    search applies.  Returns K for a zero target; raises InfeasibleError
    when even the full band cannot carry the target.
    """
    k = channel.num_tones
    if target_rate <= 0:
        return k
    eff = effective_noise(user, others, channel, noise, gap)

    def rate_above(cutoff: int) -> float:
        sub = _masked(eff, cutoff)
        if not np.any(sub.usable):
            return 0.0
        alloc, _ = waterfill_ra(sub, budget, channel.grid)
        return achievable_rate(alloc.power, sub, channel.grid)

    floor = target_rate * (1 - 1e-12)
    full = rate_above(0)
    if full < floor:
        raise InfeasibleError(
            f"target {target_rate} exceeds full-band rate {full}",
            max_achievable=full)
    lo, hi = 0, k  # rate_above(lo) >= target, rate_above(hi) < target
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rate_above(mid) >= floor:
            lo = mid
        else:
            hi = mid
    return lo


def dfdm_allocate(channel: ChannelMatrixSet, noise: NoiseProfile, user: int,
                  target_rate: float, budget: float,
                  others: Sequence[PowerAllocation] = (),
                  gap: float = 1.0) -> DfdmResult:
    """Cutoff search plus minimum-power allocation above the cutoff."""
    cutoff = find_cutoff(channel, noise, user, target_rate, budget, others, gap)
    eff = _masked(effective_noise(user, others, channel, noise, gap), cutoff)
    if target_rate <= 0:
        alloc = PowerAllocation(user, np.zeros(channel.num_tones), budget,
                                mode="at-most-power")
        achieved = 0.0
    else:
        alloc, _ = waterfill_fm(eff, budget, target_rate, channel.grid)
        achieved = achievable_rate(alloc.power, eff, channel.grid)
    return DfdmResult(cutoff_index=cutoff,
                      cutoff_hz=float(channel.grid.edges[cutoff]),
                      allocation=alloc, achieved_rate=achieved,
                      target_rate=target_rate)


def dfdm_vs_fmiwf_region(channel: ChannelMatrixSet, noise: NoiseProfile,
                         budgets: Sequence[float], rd_values,
                         near_user: int = 1, gap: float = 1.0,
                         max_iter: int = 500, tol: float = 1e-10
                         ) -> dict[str, RateRegionCurve]:
    """Far-user rate against the near user's target, for both protocols.

    Per target: under dynamic FDM the far user first water-fills against
    background noise, the near user measures and allocates, and the far
    user best-responds once.  Under fixed-margin IWF the near user holds
    the target while the far user plays rate-adaptively, iterated to a
    fixed point.  Points are (target, far rate).
    """
    if channel.num_users != 2:
        raise ValueError("the region sweep handles exactly 2 users")
    far_user = 1 - near_user
    grid = channel.grid

    far_eff0 = effective_noise(far_user, (), channel, noise, gap)
    far_initial, _ = waterfill_ra(far_eff0, budgets[far_user], grid)

    dfdm_pts, iwf_pts = [], []
    for rd in rd_values:
        res = dfdm_allocate(channel, noise, near_user, float(rd),
                            budgets[near_user], others=[far_initial], gap=gap)
        far_eff = effective_noise(far_user, [res.allocation], channel, noise, gap)
        far_best, _ = waterfill_ra(far_eff, budgets[far_user], grid)
        far_rate = capacity(far_user, [far_best, res.allocation], channel,
                            noise, gap)
        dfdm_pts.append((rd, far_rate))

        targets: list[float | None] = [None, None]
        targets[near_user] = float(rd)
        report = iterate_iwf(channel, noise, budgets, mode="fm",
                             targets=targets, max_iter=max_iter, tol=tol,
                             gap=gap)
        iwf_pts.append((rd, capacity(far_user, report.allocations, channel,
                                     noise, gap)))

    meta = {"near_user": near_user, "far_user": far_user}
    return {"dfdm": RateRegionCurve("dfdm", np.array(dfdm_pts), params=meta),
            "fm-iwf": RateRegionCurve("fm-iwf", np.array(iwf_pts), params=meta)}
