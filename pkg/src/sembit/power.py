"""Minimum transmit power to hit a (semantic rate, similarity, bit rate) triple.

The dual problem to the region boundaries: instead of spending a fixed
budget, find the cheapest allocation meeting all three targets at once.
No budget cap applies here; the answer may exceed any particular
scenario's max_power and it is the caller's business to compare.

Same structural trick as the boundary module: the hybrid solver folds the
orthogonal and overlay solutions into its candidate set, so its reported
minimum never exceeds either (they are hybrid corner cases).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, Scenario
from .errors import Infeasible, InfeasibleBandwidth
from .rates import LN2, Allocation, Scheme
from .search import refine_search
from .similarity import power_for_similarity_grid, required_power_for_similarity

_EPS_EDGE = 1e-9  # keep similarity candidates off the open asymptote


@dataclass(frozen=True)
class PowerTargets:
    """Targets a minimum-power allocation must meet simultaneously.

    Attributes:
        sigma_target: normalised semantic rate (suts/s per content unit).
        min_similarity: similarity floor for the semantic stream.
        bit_target: bit rate in bit/s.
    """

    sigma_target: float
    min_similarity: float
    bit_target: float

    def __post_init__(self):
        if self.sigma_target < 0 or self.bit_target < 0:
            raise ValueError("targets must be non-negative")
        if not 0.0 <= self.min_similarity < 1.0:
            raise ValueError("min_similarity must lie in [0, 1)")


@dataclass(frozen=True)
class PowerSolution:
    """Solved minimum power and the allocation that realises it."""

    total: float
    alloc: Allocation


def _check_feasible(scenario: Scenario, targets: PowerTargets, scheme: Scheme) -> None:
    """Structural feasibility: independent of the channel draw.

    The three causes, checked hardest-first:
      bandwidth-bound      the semantic rate needs more than the carrier
                           even at similarity 1;
      rate-asymptote       the full band cannot reach the similarity the
                           rate target implies (curve ceiling);
      similarity-asymptote the floor itself sits at or above the ceiling.
    A zero semantic-rate target drops the semantic stream for the split
    schemes, so their floor constraint is vacuous then; the overlay always
    carries the semantic stream and keeps its floor.
    """
    w = scenario.total_bandwidth
    params = scenario.logistic
    need_bw = targets.sigma_target * scenario.k
    if need_bw > w:
        raise Infeasible(
            f"semantic rate {targets.sigma_target:.6g} needs {need_bw:.6g} Hz "
            f"at similarity 1; carrier has {w:.6g} Hz",
            cause="bandwidth-bound",
        )
    if need_bw >= w * params.a_high:
        raise Infeasible(
            f"semantic rate {targets.sigma_target:.6g} needs similarity "
            f"{need_bw / w:.6g} on the full band; curve ceiling is {params.a_high}",
            cause="rate-asymptote",
        )
    floor_active = targets.sigma_target > 0 or scheme is Scheme.NOMA
    if floor_active and targets.min_similarity >= params.a_high:
        raise Infeasible(
            f"similarity floor {targets.min_similarity} is at or above the "
            f"curve ceiling {params.a_high}",
            cause="similarity-asymptote",
        )


def _bit_power_grid(w_bit: np.ndarray, rate: float, gain: float, noise_psd: float) -> np.ndarray:
    """Power for an orthogonal pipe to carry ``rate``; inf if no bandwidth."""
    w_bit = np.asarray(w_bit, dtype=float)
    if rate <= 0:
        return np.zeros_like(w_bit)
    out = np.full_like(w_bit, np.inf)
    live = w_bit > 0
    with np.errstate(over="ignore"):
        out[live] = w_bit[live] * noise_psd / gain * np.expm1(LN2 * rate / w_bit[live])
    return out


def _sem_band_interval(scenario: Scenario, targets: PowerTargets) -> tuple[float, float]:
    """Orthogonal semantic-band interval implied by the two semantic targets."""
    w = scenario.total_bandwidth
    w_low = targets.sigma_target * scenario.k
    if targets.min_similarity > 0:
        w_up = min(w_low / targets.min_similarity, w)
    else:
        w_up = w
    return w_low, w_up


def _eps_seeded_bands(scenario: Scenario, targets: PowerTargets, n: int = 64) -> np.ndarray:
    """Extra band candidates spaced evenly in required similarity.

    A uniform bandwidth grid can miss the narrow feasible sliver next to
    the curve ceiling when the floor sits close to it; gridding the
    similarity axis instead covers that sliver deterministically.
    """
    params = scenario.logistic
    span = params.a_high - params.a_low
    eps_lo = max(
        targets.min_similarity, targets.sigma_target * scenario.k / scenario.total_bandwidth
    )
    eps_hi = params.a_high - span * _EPS_EDGE
    if eps_lo >= eps_hi or targets.sigma_target <= 0:
        return np.empty(0)
    eps = np.linspace(max(eps_lo, span * _EPS_EDGE + params.a_low), eps_hi, n)
    return targets.sigma_target * scenario.k / eps


def _min_grid_search(objective, lo: float, hi: float, grid_n: int, extra: np.ndarray):
    return refine_search(
        objective, lo, hi, grid_n, maximize=False, tie_high=False, extra=tuple(extra)
    )


def solve_oma_min_power(
    scenario: Scenario,
    real: ChannelRealization,
    targets: PowerTargets,
    grid_n: int = 512,
) -> PowerSolution:
    """Cheapest orthogonal allocation meeting the target triple.

    Searches the semantic band width; each candidate pays exactly the
    semantic power for max(rate-implied similarity, floor) and exactly the
    bit power inverting the AWGN rate on the leftover band.  Ties break
    toward the smaller semantic band.

    Raises:
        Infeasible: structurally unreachable targets (see _check_feasible).
    """
    _check_feasible(scenario, targets, Scheme.OMA)
    w = scenario.total_bandwidth
    n0 = scenario.noise_psd
    params = scenario.logistic
    if targets.sigma_target == 0.0:
        p_bit = float(_bit_power_grid(np.array([w]), targets.bit_target, real.gain_b, n0)[0])
        return PowerSolution(p_bit, Allocation.orthogonal(0.0, w, 0.0, p_bit))

    w_low, w_up = _sem_band_interval(scenario, targets)

    def total(ws: np.ndarray) -> np.ndarray:
        eps_need = np.maximum(targets.sigma_target * scenario.k / ws, targets.min_similarity)
        p_sem = power_for_similarity_grid(params, eps_need, ws, real.gain_s, n0)
        p_bit = _bit_power_grid(w - ws, targets.bit_target, real.gain_b, n0)
        return p_sem + p_bit

    ws, best = _min_grid_search(total, w_low, w_up, grid_n, _eps_seeded_bands(scenario, targets))
    eps_need = max(targets.sigma_target * scenario.k / ws, targets.min_similarity)
    p_sem = required_power_for_similarity(params, eps_need, ws, real.gain_s, n0)
    p_bit = float(_bit_power_grid(np.array([w - ws]), targets.bit_target, real.gain_b, n0)[0])
    return PowerSolution(p_sem + p_bit, Allocation.orthogonal(ws, w - ws, p_sem, p_bit))


def oma_min_power(
    scenario: Scenario,
    real: ChannelRealization,
    targets: PowerTargets,
    grid_n: int = 512,
) -> float:
    return solve_oma_min_power(scenario, real, targets, grid_n).total


def solve_noma_min_power(
    scenario: Scenario,
    real: ChannelRealization,
    targets: PowerTargets,
) -> PowerSolution:
    """Cheapest full-band overlay meeting the target triple (closed form).

    The semantic power is pinned by the harder of the rate target and the
    floor; the bit power then inverts the superposed-pipe rate with that
    interference.  Exactly constant in the semantic-rate target while the
    floor is the binding constraint.

    Raises:
        Infeasible: structurally unreachable targets.
    """
    _check_feasible(scenario, targets, Scheme.NOMA)
    w = scenario.total_bandwidth
    n0 = scenario.noise_psd
    eps_need = max(targets.sigma_target * scenario.k / w, targets.min_similarity)
    p_s = required_power_for_similarity(scenario.logistic, eps_need, w, real.gain_s, n0)
    if targets.bit_target > 0:
        g_eff = real.gain_eff
        p_b = (p_s * g_eff + w * n0) / g_eff * math.expm1(LN2 * targets.bit_target / w)
    else:
        p_b = 0.0
    return PowerSolution(p_s + p_b, Allocation.overlay(w, p_s, p_b))


def noma_min_power(
    scenario: Scenario,
    real: ChannelRealization,
    targets: PowerTargets,
) -> float:
    return solve_noma_min_power(scenario, real, targets).total


def water_fill_min(
    h_m: float, h_b: float, w_m: float, w_b: float, rate_target: float
) -> tuple[float, float]:
    """Cheapest split of a rate target between two parallel bit pipes.

    ``h_m`` and ``h_b`` are channel gain over total in-band noise (plus
    interference) power, so pipe i carries rate_i = w_i * log2(1 + p_i * h_i).
    Inverse water-filling meets rate_m + rate_b = rate_target at minimum
    total power; when the unconstrained water level would push one pipe's
    power negative, that pipe shuts off and the other inverts the full
    target exactly.

    Raises:
        InfeasibleBandwidth: positive target with both pipes at zero width.
    """
    if rate_target <= 0:
        return 0.0, 0.0
    if (w_m <= 0 or h_m <= 0) and (w_b <= 0 or h_b <= 0):
        raise InfeasibleBandwidth("a positive bit target needs at least one live pipe")
    if w_m <= 0 or h_m <= 0:
        return 0.0, math.expm1(LN2 * rate_target / w_b) / h_b
    if w_b <= 0 or h_b <= 0:
        return math.expm1(LN2 * rate_target / w_m) / h_m, 0.0
    w = w_m + w_b
    log2_level = (
        rate_target / w
        - (w_m / w) * math.log2(w_m * h_m)
        - (w_b / w) * math.log2(w_b * h_b)
    )
    level = 2.0 ** log2_level
    p_bm = level * w_m - 1.0 / h_m
    p_bo = level * w_b - 1.0 / h_b
    if p_bm <= 0:
        return 0.0, math.expm1(LN2 * rate_target / w_b) / h_b
    if p_bo <= 0:
        return math.expm1(LN2 * rate_target / w_m) / h_m, 0.0
    return p_bm, p_bo


def _hybrid_bit_power_grid(
    w_m: np.ndarray,
    inv_hm: np.ndarray,
    w_total: float,
    gain_b: float,
    noise_psd: float,
    rate_target: float,
) -> np.ndarray:
    """Vectorised water_fill_min total over shared-band candidates.

    inv_hb = w_b * noise_psd / gain_b, so w_b * h_b = gain_b / noise_psd is
    constant and only the shared pipe's slope varies with the candidate.
    """
    w_m = np.asarray(w_m, dtype=float)
    inv_hm = np.asarray(inv_hm, dtype=float)
    if rate_target <= 0:
        return np.zeros_like(w_m)
    w_b = w_total - w_m
    inv_hb = w_b * noise_psd / gain_b
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        term_m = np.where(w_m > 0, (w_m / w_total) * np.log2(w_m / inv_hm), 0.0)
        term_b = np.where(w_b > 0, (w_b / w_total) * np.log2(gain_b / noise_psd), 0.0)
        level = 2.0 ** (rate_target / w_total - term_m - term_b)
        p_bm = level * w_m - inv_hm
        p_bo = level * w_b - inv_hb
        only_o = np.where(w_b > 0, inv_hb * np.expm1(LN2 * rate_target / np.where(w_b > 0, w_b, 1.0)), np.inf)
        only_m = np.where(w_m > 0, inv_hm * np.expm1(LN2 * rate_target / np.where(w_m > 0, w_m, 1.0)), np.inf)
    total = p_bm + p_bo
    total = np.where(p_bm <= 0, only_o, total)
    total = np.where(p_bo <= 0, only_m, total)
    return total


def solve_semi_min_power(
    scenario: Scenario,
    real: ChannelRealization,
    targets: PowerTargets,
    grid_n: int = 512,
) -> PowerSolution:
    """Cheapest hybrid allocation meeting the target triple.

    Searches the shared-band width over [sigma*k, W]; each candidate pays
    the pinned semantic power, then splits the bit target between the
    superposed and orthogonal pipes by inverse water-filling.  The
    orthogonal and overlay optima join the comparison at the end, so the
    hybrid result never exceeds either.  Ties break toward the narrower
    shared band.

    Raises:
        Infeasible: structurally unreachable targets.
    """
    _check_feasible(scenario, targets, Scheme.SEMI)
    w = scenario.total_bandwidth
    n0 = scenario.noise_psd
    params = scenario.logistic
    oma_sol = solve_oma_min_power(scenario, real, targets, grid_n)
    noma_sol = solve_noma_min_power(scenario, real, targets)

    best_total = math.inf
    best_alloc = None
    if targets.sigma_target > 0:
        w_lo = max(targets.sigma_target * scenario.k, w * 1e-9)

        def total(wm: np.ndarray) -> np.ndarray:
            eps_need = np.maximum(
                targets.sigma_target * scenario.k / wm, targets.min_similarity
            )
            p_s = power_for_similarity_grid(params, eps_need, wm, real.gain_s, n0)
            out = np.full_like(p_s, np.inf)
            ok = np.isfinite(p_s)
            if ok.any():
                inv_hm = (p_s[ok] * real.gain_eff + wm[ok] * n0) / real.gain_eff
                out[ok] = p_s[ok] + _hybrid_bit_power_grid(
                    wm[ok], inv_hm, w, real.gain_b, n0, targets.bit_target
                )
            return out

        extra = np.append(_eps_seeded_bands(scenario, targets), w)
        wm, best_total = _min_grid_search(total, w_lo, w, grid_n, extra)
        if math.isfinite(best_total):
            eps_need = max(targets.sigma_target * scenario.k / wm, targets.min_similarity)
            p_s = required_power_for_similarity(params, eps_need, wm, real.gain_s, n0)
            inv_hm = (p_s * real.gain_eff + wm * n0) / real.gain_eff
            p_bm, p_bo = water_fill_min(
                1.0 / inv_hm,
                real.gain_b / ((w - wm) * n0) if wm < w else 0.0,
                wm,
                w - wm,
                targets.bit_target,
            )
            best_alloc = Allocation.hybrid(wm, w - wm, p_s, p_bm, p_bo)

    if oma_sol.total < best_total or best_alloc is None:
        a = oma_sol.alloc
        best_total = oma_sol.total
        best_alloc = Allocation.hybrid(a.w_sem, a.w_bit, a.p_sem, 0.0, a.p_bit_orth)
    if noma_sol.total < best_total:
        a = noma_sol.alloc
        best_total = noma_sol.total
        best_alloc = Allocation.hybrid(a.w_shared, 0.0, a.p_sem, a.p_bit_shared, 0.0)
    return PowerSolution(best_total, best_alloc)


def semi_min_power(
    scenario: Scenario,
    real: ChannelRealization,
    targets: PowerTargets,
    grid_n: int = 512,
) -> float:
    return solve_semi_min_power(scenario, real, targets, grid_n).total
