"""Closed-form rate bounds for near-far interference channels.

A weak (far) user confined to the first band shares it with a strong (near)
user who also owns a second, private band.  Two coordination questions are
answered in closed form:

* how much does fixed-margin iterative water-filling by the strong user
  ("the bully") really cost the weak user, bracketed between explicit lower
  and upper bounds as a function of the strong user's rate target; and

* how do those brackets compare with dynamic frequency-division (the strong
  user retreats to the top of the spectrum), again as closed-form bounds.

Two parameterisations appear: a fully symmetric two-band setup with unit
band widths (power split formulas, interference-minimal politeness) and a
banded setup with PSD-level noise and arbitrary widths W1, W2 (rate-region
bounds).  Users are indexed as in the rest of the package: user 0 weak/far,
user 1 strong/near.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .oracle import RateRegionCurve


@dataclass(frozen=True)
class NearFarParams:
    """Channel couplings, powers, and noise for the two-band near-far model.

    alpha: weak user's direct gain in band 1 (its only band)
    beta:  coupling of the strong user into the weak user's receiver
    gamma: coupling of the weak user into the strong user's receiver
    power: per-user total power budget (both users share the same P)
    n1, n2: noise PSD at the weak / strong receiver (power per Hz)
    w1, w2: widths of band 1 / band 2
    tau:   politeness of the strong user, the fraction of its budget spent
    """

    alpha: float
    beta: float
    gamma: float = 0.0
    power: float = 1.0
    n1: float = 1.0
    n2: float = 1.0
    w1: float = 1.0
    w2: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        for name in ("beta", "gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("power", "n1", "n2", "w1", "w2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not 0 < self.tau <= 1:
            raise ValueError("tau must lie in (0, 1]")

    @property
    def rho(self) -> float:
        """Bandwidth fraction of band 1."""
        return self.w1 / (self.w1 + self.w2)

    def _require_symmetric(self, what: str) -> None:
        if self.w1 != self.w2:
            raise ValueError(f"{what} assumes equal band widths (w1 == w2)")

    @property
    def n2_band(self) -> float:
        """Strong receiver's in-band noise power in either (equal) band."""
        return self.n2 * self.w1

    @property
    def n1_band(self) -> float:
        return self.n1 * self.w1


@dataclass(frozen=True)
class RateBoundPair:
    """Lower/upper bracket on the weak user's rate for one method."""

    lower: float
    upper: float
    method: str
    flags: dict

    def __post_init__(self):
        if self.lower > self.upper + 1e-12 * max(1.0, abs(self.upper)):
            raise ValueError("lower bound exceeds upper bound")


# --- symmetric two-band forms (unit-style bands, equal widths) -------------


def bully_power_split(params: NearFarParams) -> tuple[float, float]:
    """Water-filling split (P1, P2) of the strong user's spent power tau*P.

    The strong user sees its own noise plus gamma*P of crosstalk in band 1
    (the weak user always spends everything there), so the water level puts
    P*(tau - gamma)/2 into band 1 and P*(tau + gamma)/2 into band 2.  For
    tau < gamma band 1 falls below the water level; the split clamps to
    (0, tau*P) with a warning.
    """
    params._require_symmetric("bully_power_split")
    p, tau, gamma = params.power, params.tau, params.gamma
    if tau < gamma:
        warnings.warn("tau < gamma: strong user leaves band 1 entirely",
                      RuntimeWarning, stacklevel=2)
        return 0.0, tau * p
    return p * (tau - gamma) / 2.0, p * (tau + gamma) / 2.0


def symmetric_nearfar_rates(params: NearFarParams) -> tuple[float, float]:
    """(C1, C2): both users' rates under the bully split.

    C1 = log2(1 + alpha P / (beta P1 + N1)) for the weak user and
    C2 = log2(1 + P1 / (N2 + gamma P)) + log2(1 + P2 / N2) for the strong
    user, with per-band noise N_i = PSD * width.
    """
    params._require_symmetric("symmetric_nearfar_rates")
    p1, p2 = bully_power_split(params)
    return (weak_user_rate_for_p1(params, p1),
            strong_user_rate_for_split(params, p1, p2))


def weak_user_rate_for_p1(params: NearFarParams, p1: float) -> float:
    return float(np.log2(1 + params.alpha * params.power /
                         (params.beta * p1 + params.n1_band)))


def strong_user_rate_for_split(params: NearFarParams, p1: float, p2: float) -> float:
    n2b = params.n2_band
    gp = params.gamma * params.power
    return float(np.log2(1 + p1 / (n2b + gp)) + np.log2(1 + p2 / n2b))


def strong_user_rate(params: NearFarParams, tau: float) -> float:
    """C2 as a function of the politeness tau (monotone increasing)."""
    p1, p2 = bully_power_split(replace(params, tau=tau))
    return strong_user_rate_for_split(params, p1, p2)


def tau_for_strong_rate(params: NearFarParams, r2: float) -> float:
    """Invert C2(tau) over tau in (gamma, 1]."""
    params._require_symmetric("tau_for_strong_rate")
    lo = max(params.gamma, 1e-12)
    lo_rate, hi_rate = strong_user_rate(params, lo), strong_user_rate(params, 1.0)
    if not lo_rate <= r2 <= hi_rate:
        raise ValueError(f"r2 must lie in [{lo_rate}, {hi_rate}] for these parameters")
    if r2 == hi_rate:
        return 1.0
    return float(brentq(lambda t: strong_user_rate(params, t) - r2, lo, 1.0,
                        xtol=1e-14, rtol=8.9e-16))


def interference_min_p1(params: NearFarParams) -> float:
    """Least band-1 power preserving the strong user's rate at politeness 1.

    Moving the strong user from the water-filling split at politeness tau to
    full power spent as unevenly as possible, the band-1 share solves a
    quadratic; its minimal root is

        P1~ = P1 - (P/2) (1 - tau) Delta,
        1 + Delta = sqrt((1 + 4 N2/P + 2 gamma + tau) / (1 - tau)),

    with N2 the in-band noise.  Delta >= 0 always, so P1~ <= P1: the polite
    strong user never needs more band-1 power than water-filling uses.  A
    negative root clamps to zero (rate preservation then becomes slack).
    For tau = 1 the split is already optimal and P1~ = P1.
    """
    params._require_symmetric("interference_min_p1")
    p, tau, gamma = params.power, params.tau, params.gamma
    if tau < gamma:
        raise ValueError("interference_min_p1 needs tau >= gamma")
    p1, _ = bully_power_split(params)
    if tau == 1.0:
        return p1
    n2b = params.n2_band
    delta = math.sqrt((1 + 4 * n2b / p + 2 * gamma + tau) / (1 - tau)) - 1.0
    return max(0.0, p1 - 0.5 * p * (1 - tau) * delta)


# --- banded forms: fixed-margin IWF bounds (arbitrary W1, W2) ---------------


def geometric_mean_snr(params: NearFarParams) -> float:
    """Bandwidth-weighted geometric mean of the strong user's band SNRs:
    (P/(N2 W1))^rho * (P/(N2 W2))^(1-rho) with rho = W1/(W1+W2)."""
    rho = params.rho
    return float((params.power / (params.n2 * params.w1)) ** rho *
                 (params.power / (params.n2 * params.w2)) ** (1 - rho))


def strong_tau_for_rate(params: NearFarParams, r2: float) -> float:
    """Exact politeness for a flat-PSD strong user to reach r2 (gamma = 0)."""
    wt = params.w1 + params.w2
    s = 2.0 ** (r2 / wt) - 1.0
    return s * params.n2 * wt / params.power


def rr_iwf_bounds(r2: float, params: NearFarParams) -> RateBoundPair:
    """Closed-form bracket on the weak user's rate under fixed-margin IWF.

    A strong user holding rate r2 with minimum power transmits a flat PSD,
    and its politeness tau is bracketed through the geometric-mean SNR:

        2^(r2/(W1+W2) - 1) / gsnr  <=  tau  <=  2^(r2/(W1+W2) + 1) / gsnr.

    More interference means less weak-user rate, so the tau upper bound
    (exponent +1) yields the rate lower bound and vice versa:

        lower = W1 log2(1 + alpha P / (beta P 2^(r2/(W1+W2)+1)/gsnr + W1 N1))
        upper = same with exponent r2/(W1+W2) - 1.

    flags: "bandwidth_limited" marks spectral efficiency >= 1 bit/s/Hz
    (r2 >= W1 + W2), required for the tau lower bound and hence for the
    rate upper bound to be meaningful; "feasible" marks tau <= 1.
    """
    if r2 < 0:
        raise ValueError("r2 must be >= 0")
    gsnr = geometric_mean_snr(params)
    wt = params.w1 + params.w2
    x = r2 / wt
    tau = strong_tau_for_rate(params, r2)
    flags = {"bandwidth_limited": bool(r2 >= wt),
             "feasible": bool(tau <= 1.0 + 1e-12),
             "tau": tau}

    def weak_rate(tau_bound: float) -> float:
        inter = params.beta * params.power * tau_bound
        return float(params.w1 * np.log2(
            1 + params.alpha * params.power / (inter + params.w1 * params.n1)))

    lower = weak_rate(2.0 ** (x + 1) / gsnr)
    upper = weak_rate(2.0 ** (x - 1) / gsnr)
    return RateBoundPair(lower=lower, upper=upper, method="fm-iwf", flags=flags)


def rr_iwf_exact_tau_r1(r2: float, params: NearFarParams) -> float:
    """Weak-user rate estimate using the unrelaxed politeness bound.

    Keeps the rho^rho (1-rho)^(1-rho) factor (instead of relaxing it to 1/2)
    and the flat-PSD band-1 share rho * tau * P of the interference, so at
    high SNR it tracks the simulated fixed-margin IWF rate closely.
    """
    rho = params.rho
    gsnr = geometric_mean_snr(params)
    factor = rho ** rho * (1 - rho) ** (1 - rho)
    tau_exact = 2.0 ** (r2 / (params.w1 + params.w2)) / (gsnr * factor)
    inter = params.beta * rho * tau_exact * params.power
    return float(params.w1 * np.log2(
        1 + params.alpha * params.power / (inter + params.w1 * params.n1)))


def fdm_threshold_rate(params: NearFarParams) -> float:
    """Strong-user rate below which static FDM leaves band 1 untouched:
    W2 log2(1 + P / (W2 N2))."""
    return float(params.w2 * np.log2(1 + params.power / (params.w2 * params.n2)))


def fdm_weak_user_rate(params: NearFarParams) -> float:
    """Weak user's interference-free rate W1 log2(1 + alpha P / (W1 N1))."""
    return float(params.w1 * np.log2(
        1 + params.alpha * params.power / (params.w1 * params.n1)))


# --- banded forms: dynamic FDM bounds ---------------------------------------


def _strong_rate_of_lambda(lam: float, params: NearFarParams) -> float:
    band = lam * params.w1 + params.w2
    return float(band * np.log2(1 + params.power / (band * params.n2)))


def dfdm_lambda_bounds(r2: float, params: NearFarParams
                       ) -> tuple[float, float, bool]:
    """Bracket on the band-1 fraction lambda the strong user must claim.

    Under dynamic FDM the strong user spreads full power flat over
    lambda*W1 + W2 of spectrum; lambda solves
    r2 = (lambda W1 + W2) log2(1 + P / ((lambda W1 + W2) N2)).  Bounding
    the in-band SNR by its extremes gives

        lambda_min = (r2 / log2(1 + P/(N2 W2)) - W2) / W1
        lambda_max = (r2 / log2(1 + P/(N2 (W1+W2))) - W2) / W1,

    both clamped to [0, 1].  The raw lambda_max exceeding 1 means r2 is not
    achievable at all; the third return value is that feasibility flag.
    """
    if r2 <= 0:
        raise ValueError("r2 must be > 0")
    snr2 = params.power / params.n2
    lam_min = (r2 / math.log2(1 + snr2 / params.w2) - params.w2) / params.w1
    lam_max_raw = (r2 / math.log2(1 + snr2 / (params.w1 + params.w2))
                   - params.w2) / params.w1
    feasible = lam_max_raw <= 1.0 + 1e-12
    clamp = lambda v: min(1.0, max(0.0, v))
    return clamp(lam_min), clamp(lam_max_raw), feasible


def solve_lambda(r2: float, params: NearFarParams) -> float:
    """Exact band-1 fraction for the strong user's dynamic-FDM target.

    Monotone in lambda, solved by a bracketed search on [0, 1] to 1e-12.
    Targets below the band-2-only rate clamp to 0; targets above the
    full-spectrum rate raise InfeasibleError-style ValueError carrying the
    maximum in the message.
    """
    if r2 <= 0:
        raise ValueError("r2 must be > 0")
    r_at_0 = _strong_rate_of_lambda(0.0, params)
    r_at_1 = _strong_rate_of_lambda(1.0, params)
    if r2 <= r_at_0:
        return 0.0
    if r2 > r_at_1:
        raise ValueError(f"r2 {r2} exceeds the full-spectrum rate {r_at_1}")
    if r2 == r_at_1:
        return 1.0
    return float(brentq(lambda lam: _strong_rate_of_lambda(lam, params) - r2,
                        0.0, 1.0, xtol=1e-12, rtol=8.9e-16))


def dfdm_r1(lam: float, params: NearFarParams) -> float:
    """Weak-user rate when the strong user claims a fraction lam of band 1.

    The weak user water-fills its power over the clean (1-lam) W1 and the
    interfered lam W1 parts of band 1:

        R1 = (1-lam) W1 log2(1 + alpha P (1 + lam W1/(lam W1 + W2)) / N1)
           + lam W1 log2(1 + alpha P (1 - (1-lam) W1/(lam W1 + W2))
                             / (N1 + beta P/(lam W1 + W2)))

    Monotone decreasing in lam for the regimes of interest (W1 <= W2 in
    particular); at lam = 0 it collapses to the interference-free form and
    at lam = 1 to full-band interference.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    w1, w2 = params.w1, params.w2
    ap = params.alpha * params.power
    band = lam * w1 + w2
    clean = (1 - lam) * w1 * np.log2(1 + ap * (1 + lam * w1 / band) / params.n1)
    hit = lam * w1 * np.log2(1 + ap * (1 - (1 - lam) * w1 / band)
                             / (params.n1 + params.beta * params.power / band))
    return float(clean + hit)


def dfdm_rate_bounds(r2: float, params: NearFarParams) -> RateBoundPair:
    """Weak-user rate bracket under dynamic FDM, via the lambda bracket.

    R1 decreases with lambda, so upper = dfdm_r1(lambda_min) and
    lower = dfdm_r1(lambda_max).
    """
    lam_min, lam_max, feasible = dfdm_lambda_bounds(r2, params)
    lower, upper = dfdm_r1(lam_max, params), dfdm_r1(lam_min, params)
    return RateBoundPair(lower=min(lower, upper), upper=max(lower, upper),
                         method="dfdm", flags={"feasible": feasible,
                                               "lambda_min": lam_min,
                                               "lambda_max": lam_max})


# --- comparison sweep --------------------------------------------------------


def compare_regions(params: NearFarParams, r2_values) -> dict[str, RateRegionCurve]:
    """Weak-user rate versus strong-user rate for three behaviours.

    For each strong-user rate r2: (i) fixed-margin IWF using the
    water-filling split at the politeness that reaches r2, (ii) the
    interference-minimal split preserving the same strong-user rate, and
    (iii) the dynamic-FDM closed-form bracket.  Requires equal band widths
    so that all three live on the same axes.
    """
    params._require_symmetric("compare_regions")
    r2_values = np.asarray(list(r2_values), dtype=float)
    iwf_pts, polite_pts, dfdm_pts = [], [], []
    for r2 in r2_values:
        tau = tau_for_strong_rate(params, r2)
        at_tau = replace(params, tau=tau)
        p1, _ = bully_power_split(at_tau)
        iwf_pts.append((r2, weak_user_rate_for_p1(params, p1)))
        p1_min = interference_min_p1(at_tau)
        polite_pts.append((r2, weak_user_rate_for_p1(params, p1_min)))
        bounds = dfdm_rate_bounds(r2, params)
        dfdm_pts.append((r2, bounds.lower, bounds.upper))
    snapshot = {"alpha": params.alpha, "beta": params.beta, "gamma": params.gamma,
                "power": params.power, "n1": params.n1, "n2": params.n2,
                "w1": params.w1, "w2": params.w2}
    return {
        "fm-iwf": RateRegionCurve("fm-iwf", np.array(iwf_pts), params=snapshot),
        "interference-min": RateRegionCurve("interference-min",
                                            np.array(polite_pts), params=snapshot),
        "dfdm-bounds": RateRegionCurve("dfdm-bounds", np.array(dfdm_pts),
                                       columns=("r2", "r1_lo", "r1_hi"),
                                       params=snapshot),
    }
