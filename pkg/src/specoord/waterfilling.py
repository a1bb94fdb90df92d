"""Water-filling power control and the iterative water-filling loop.

Single-user water-filling comes in two flavours: rate-adaptive (RA), which
spends a fixed budget to maximise rate, and fixed-margin (FM), which spends
the least power that reaches a target rate.  Both reduce the multi-user
problem to a single-user one through the effective noise, i.e. interference
plus noise referred to the user's own channel gain.

The iterative loop plays these best responses in sequence; its fixed points
are Nash equilibria of the underlying interference game.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from .channel import ChannelMatrixSet, FrequencyGrid, NoiseProfile
from .game import AT_MOST_POWER, FULL_POWER, PowerAllocation, power_matrix

GAUSS_SEIDEL = "gauss-seidel"
JACOBI = "jacobi"


class InfeasibleError(ValueError):
    """A rate target cannot be met; carries the best achievable rate."""

    def __init__(self, message: str, max_achievable: float | None = None):
        super().__init__(message)
        self.max_achievable = max_achievable


@dataclass(frozen=True)
class EffectiveNoise:
    """Interference-plus-noise divided by the user's own gain, per tone.

    Tones where the user's direct gain is zero are flagged unusable; their
    value is stored as +inf so that allocation code naturally avoids them.
    """

    user: int
    values: np.ndarray
    usable: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        usable = np.asarray(self.usable, dtype=bool)
        values.flags.writeable = False
        usable.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "usable", usable)
        if values.shape != usable.shape or values.ndim != 1:
            raise ValueError("values and usable must be matching 1-D arrays")
        if np.any(values[usable] <= 0) or not np.all(np.isfinite(values[usable])):
            raise ValueError("usable effective noise must be finite and > 0")


@dataclass(frozen=True)
class IwfReport:
    """Outcome of an iterative water-filling run."""

    allocations: tuple
    iterations: int
    converged: bool
    changes: np.ndarray          # max per-tone power change after each sweep
    mode: str
    schedule: str
    shortfall_users: tuple = ()  # users whose FM target was unreachable at the end


def effective_noise(user: int, allocations: Sequence[PowerAllocation],
                    channel: ChannelMatrixSet, noise: NoiseProfile,
                    gap: float = 1.0) -> EffectiveNoise:
    """gap * (interference + noise) / direct_gain for one user.

    The user's own allocation, if present in `allocations`, is ignored.
    """
    if gap < 1:
        raise ValueError("gap must be >= 1")
    p = power_matrix(allocations, channel.num_users, channel.num_tones)
    p[user] = 0.0
    interference = np.einsum("kj,jk->k", channel.gains[:, user, :], p)
    direct = channel.direct_gains(user)
    usable = direct > 0
    values = np.full(channel.num_tones, np.inf)
    values[usable] = gap * (interference[usable] + noise.values[user, usable]) / direct[usable]
    return EffectiveNoise(user=user, values=values, usable=usable)


def achievable_rate(power: np.ndarray, eff: EffectiveNoise,
                    grid: FrequencyGrid) -> float:
    """Rate of a power vector against an effective noise floor."""
    with np.errstate(invalid="ignore"):
        ratio = np.where(eff.usable, power / eff.values, 0.0)
    return float(np.sum(grid.widths * np.log1p(ratio)) / np.log(2.0))


def waterfill_ra(eff: EffectiveNoise, budget: float,
                 grid: FrequencyGrid) -> tuple[PowerAllocation, float]:
    """Rate-adaptive water-filling: maximise rate spending the whole budget.

    Returns the allocation and the water level mu.  On active tones the
    per-Hz sum of noise floor and power density equals mu; inactive tones
    have a floor at or above it.  Solved exactly by sorting the per-Hz
    floors and picking the active set in closed form.
    """
    if budget < 0 or not np.isfinite(budget):
        raise ValueError("budget must be finite and >= 0")
    k = eff.values.size
    w = grid.widths
    if w.size != k:
        raise ValueError("effective noise does not match grid")
    idx = np.nonzero(eff.usable)[0]
    if idx.size == 0:
        if budget > 0:
            raise InfeasibleError("no usable tones to allocate power on",
                                  max_achievable=0.0)
        return PowerAllocation(eff.user, np.zeros(k), budget, FULL_POWER), 0.0

    nu = eff.values[idx] / w[idx]
    if budget == 0:
        return (PowerAllocation(eff.user, np.zeros(k), budget, FULL_POWER),
                float(nu.min()))

    order = np.argsort(nu, kind="stable")
    nu_s = nu[order]
    n_s = eff.values[idx][order]
    w_s = w[idx][order]
    mu_candidates = (budget + np.cumsum(n_s)) / np.cumsum(w_s)
    # The feasible prefix is where the level clears the worst included floor.
    m = int(np.nonzero(mu_candidates > nu_s)[0][-1]) + 1
    active = order[:m]
    mu = (budget + n_s[:m].sum()) / w_s[:m].sum()
    power = np.zeros(k)
    power[idx[active]] = mu * w[idx[active]] - eff.values[idx[active]]
    # Remove the rounding residue by a uniform shift of the water level.
    deficit = budget - power.sum()
    power[idx[active]] += deficit * w[idx[active]] / w_s[:m].sum()
    mu += deficit / w_s[:m].sum()
    np.maximum(power, 0.0, out=power)
    return PowerAllocation(eff.user, power, budget, FULL_POWER), float(mu)


def waterfill_fm(eff: EffectiveNoise, budget: float, target_rate: float,
                 grid: FrequencyGrid) -> tuple[PowerAllocation, float]:
    """Fixed-margin water-filling: cheapest allocation reaching target_rate.

    For a fixed active set of the m cheapest per-Hz floors the level solving
    sum(w log2(mu/nu)) = target is mu = 2^((target + sum(w log2 nu)) / sum(w));
    the correct m is the smallest one whose level fits under the next floor.
    The result keeps the water-filling shape and is therefore the
    minimum-power allocation for the target.  Raises InfeasibleError
    (carrying the best achievable rate) when the target exceeds the
    rate-adaptive rate at the full budget.
    """
    if target_rate < 0:
        raise ValueError("target_rate must be >= 0")
    k = eff.values.size
    w = grid.widths
    idx = np.nonzero(eff.usable)[0]
    if target_rate == 0:
        level = float((eff.values[idx] / w[idx]).min()) if idx.size else 0.0
        return PowerAllocation(eff.user, np.zeros(k), budget, AT_MOST_POWER), level
    if idx.size == 0:
        raise InfeasibleError("no usable tones", max_achievable=0.0)

    full, mu_cap = waterfill_ra(eff, budget, grid)
    max_rate = achievable_rate(full.power, eff, grid)
    if target_rate > max_rate:
        raise InfeasibleError(
            f"target rate {target_rate} exceeds achievable {max_rate}",
            max_achievable=max_rate)

    if target_rate == max_rate:
        mu = mu_cap
    else:
        nu = eff.values[idx] / w[idx]
        order = np.argsort(nu, kind="stable")
        nu_s = nu[order]
        w_s = w[idx][order]
        # Overflowing prefix levels are harmless: an inf level never fits
        # under the next floor, so those prefixes are skipped.
        with np.errstate(over="ignore"):
            levels = 2.0 ** ((target_rate + np.cumsum(w_s * np.log2(nu_s)))
                             / np.cumsum(w_s))
        fits = np.ones(nu_s.size, dtype=bool)
        fits[:-1] = levels[:-1] <= nu_s[1:]
        m = int(np.argmax(fits)) + 1
        mu = float(levels[m - 1])
    power = np.zeros(k)
    power[idx] = np.maximum(0.0, mu * w[idx] - eff.values[idx])
    return PowerAllocation(eff.user, power, budget, AT_MOST_POWER), float(mu)


def iterate_iwf(channel: ChannelMatrixSet, noise: NoiseProfile,
                budgets: Sequence[float], mode: str = "ra",
                targets: Sequence[float | None] | None = None,
                max_iter: int = 500, tol: float = 1e-10,
                schedule: str = GAUSS_SEIDEL,
                initial: Sequence[PowerAllocation] | None = None,
                gap: float = 1.0) -> IwfReport:
    """Iterated best-response water-filling over all users.

    mode "ra": every user spends its full budget to maximise rate.
    mode "fm": users with a target rate spend the least power achieving it
    (capped by their budget; an unreachable target degrades to full-budget
    RA play for that sweep); users whose target is None play RA.

    Users update in index order by default (Gauss-Seidel); schedule JACOBI
    makes all users respond to the previous sweep's allocations instead.
    Convergence is declared when the largest per-tone power change in a
    sweep drops to tol * max(budgets).  Non-convergence is reported in the
    result, not raised.
    """
    n, k = channel.num_users, channel.num_tones
    budgets = [float(b) for b in budgets]
    if len(budgets) != n:
        raise ValueError("need one budget per user")
    if mode not in ("ra", "fm"):
        raise ValueError("mode must be 'ra' or 'fm'")
    if schedule not in (GAUSS_SEIDEL, JACOBI):
        raise ValueError(f"unknown schedule {schedule!r}")
    if mode == "fm":
        if targets is None:
            raise ValueError("fm mode needs per-user targets")
        targets = list(targets)
        if len(targets) != n:
            raise ValueError("need one target (or None) per user")
    else:
        targets = [None] * n

    if initial is None:
        allocs = [PowerAllocation(i, np.zeros(k), budgets[i], AT_MOST_POWER)
                  for i in range(n)]
    else:
        allocs = list(initial)
        if sorted(a.user for a in allocs) != list(range(n)):
            raise ValueError("initial allocations must cover every user once")
        allocs.sort(key=lambda a: a.user)

    changes = []
    converged = False
    iterations = 0
    shortfall: set[int] = set()
    for sweep in range(max_iter):
        snapshot = list(allocs)
        basis = snapshot if schedule == JACOBI else allocs
        delta = 0.0
        for i in range(n):
            eff = effective_noise(i, basis, channel, noise, gap)
            if targets[i] is None:
                new, _ = waterfill_ra(eff, budgets[i], channel.grid)
                shortfall.discard(i)
            else:
                try:
                    new, _ = waterfill_fm(eff, budgets[i], targets[i], channel.grid)
                    shortfall.discard(i)
                except InfeasibleError:
                    new, _ = waterfill_ra(eff, budgets[i], channel.grid)
                    shortfall.add(i)
            delta = max(delta, float(np.abs(new.power - snapshot[i].power).max()))
            allocs[i] = new
        changes.append(delta)
        iterations = sweep + 1
        if delta <= tol * max(max(budgets), 1e-300):
            converged = True
            break

    return IwfReport(allocations=tuple(allocs), iterations=iterations,
                     converged=converged, changes=np.array(changes),
                     mode=mode, schedule=schedule,
                     shortfall_users=tuple(sorted(shortfall)))
