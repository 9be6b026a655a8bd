"""Achievable-region boundaries for the three downlink schemes.

Every boundary is traced over the normalised semantic rate axis sigma
(suts/s per symbol-content unit): for each sigma target the searches
below find the largest bit rate the power budget supports.  The
orthogonal scheme optimises one bandwidth split, the overlay has a closed
form, and the hybrid optimises a shared-band width with the residual
power water-filled between its two bit pipes.

Candidate pools for the hybrid search are seeded with the orthogonal and
overlay solutions (both are hybrid corner cases), so the hybrid boundary
dominates the other two at finite grid resolution by construction, not
merely up to search luck.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import ChannelRealization, Scenario
from .errors import DomainMismatch, EmptyRegion, InfeasibleTarget, TargetUnreachable
from .rates import LN2, Allocation, RatePair, Scheme, shannon_rate, snr_db
from .search import REFINE_LEVELS, REFINE_ZOOM, refine_search
from .similarity import (
    eval_similarity,
    power_for_similarity_grid,
    required_power_for_similarity,
)

# Smallest shared-band fraction the hybrid search will consider; avoids a
# zero-bandwidth semantic band sneaking in through float underflow.  The
# exact-zero corner is handled by the orthogonal collapse branch instead.
_MIN_BAND_FRACTION = 1e-9


@dataclass(frozen=True)
class Extremes:
    """Axis intercepts of the orthogonal/hybrid region.

    sigma_max: largest feasible semantic rate (bit stream silenced).
    r_max: largest feasible bit rate (semantic stream silenced).
    power_limited: True when the similarity floor, not bandwidth, caps
        sigma_max (the budget cannot lift the full band to the floor).
    """

    sigma_max: float
    r_max: float
    power_limited: bool


@dataclass(frozen=True)
class BoundaryPoint:
    """One solved boundary point with its optimising allocation."""

    sigma: float
    bit_rate: float
    similarity: float
    alloc: Allocation | None


@dataclass(frozen=True)
class RegionBoundary:
    """A swept boundary: rate pairs ordered by increasing semantic rate."""

    scheme: Scheme
    points: tuple[RatePair, ...]
    grid_spec: dict
    power_limited: bool = False

    @property
    def sigma(self) -> np.ndarray:
        return np.array([p.sem_rate for p in self.points])

    @property
    def bit_rate(self) -> np.ndarray:
        return np.array([p.bit_rate for p in self.points])

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sigma", "bit_rate", "similarity"])
            for p in self.points:
                # float() strips any numpy scalar so repr stays plain digits.
                writer.writerow(
                    [repr(float(p.sem_rate)), repr(float(p.bit_rate)), repr(float(p.similarity))]
                )


@dataclass(frozen=True)
class Containment:
    """Verdict of a pointwise boundary-dominance check."""

    contained: bool
    witness_sigma: float | None
    max_violation: float
    checked: int


def oma_extremes(scenario: Scenario, real: ChannelRealization) -> Extremes:
    """Endpoints of the orthogonal region for one channel draw.

    The bit-rate intercept always gets the full band and budget.  The
    semantic intercept is bandwidth-limited when the budget can push the
    full band to the similarity floor, else power-limited: the band
    shrinks until the floor is met exactly and the spare spectrum idles.
    """
    w = scenario.total_bandwidth
    p = scenario.max_power
    n0 = scenario.noise_psd
    params = scenario.logistic
    r_max = shannon_rate(w, p, real.gain_b, n0)
    eps_full = eval_similarity(params, snr_db(p, real.gain_s, w, n0))
    if scenario.min_similarity <= eps_full:
        return Extremes(sigma_max=w * eps_full / scenario.k, r_max=r_max, power_limited=False)
    try:
        p_unit = required_power_for_similarity(
            params, scenario.min_similarity, 1.0, real.gain_s, n0
        )
    except TargetUnreachable:
        # Floor above the curve's ceiling: no semantic point exists at all.
        return Extremes(sigma_max=0.0, r_max=r_max, power_limited=True)
    w_reach = p / p_unit  # widest band the budget lifts to the floor
    return Extremes(
        sigma_max=w_reach * scenario.min_similarity / scenario.k,
        r_max=r_max,
        power_limited=True,
    )


def lemma1_bounds(scenario: Scenario, sigma_target: float) -> tuple[float, float]:
    """Bandwidth interval that a semantic-rate target pins down.

    Below w_low = sigma*k the required similarity exceeds 1; above
    w_up = sigma*k/min_similarity the required similarity drops under the
    floor, so the floor constraint is implied everywhere inside the
    interval and never needs separate checking.  A zero target carries no
    semantic stream and collapses the interval to {0}.

    Raises:
        InfeasibleTarget: w_low exceeds the carrier bandwidth.
    """
    if sigma_target < 0:
        raise ValueError("sigma_target must be non-negative")
    if sigma_target == 0.0:
        return 0.0, 0.0
    w = scenario.total_bandwidth
    w_low = sigma_target * scenario.k
    if w_low > w:
        raise InfeasibleTarget(
            f"semantic rate {sigma_target:.6g} needs at least {w_low:.6g} Hz "
            f"even at similarity 1; carrier has {w:.6g} Hz"
        )
    if scenario.min_similarity > 0.0:
        w_up = min(w_low / scenario.min_similarity, w)
    else:
        w_up = w
    return w_low, w_up


def _bit_rate_grid(w_bit: np.ndarray, power: np.ndarray, gain: float, n0: float) -> np.ndarray:
    """Vectorised AWGN rate; zero band or power contributes nothing."""
    w_bit = np.asarray(w_bit, dtype=float)
    power = np.asarray(power, dtype=float)
    live = (w_bit > 0) & (power > 0)
    w_safe = np.where(live, w_bit, 1.0)
    rate = w_safe * np.log1p(np.where(live, power, 0.0) * gain / (w_safe * n0)) / LN2
    return np.where(live, rate, 0.0)


def solve_oma_point(
    scenario: Scenario,
    real: ChannelRealization,
    sigma_target: float,
    grid_n: int = 512,
) -> BoundaryPoint:
    """Orthogonal boundary point: max bit rate at one semantic-rate target.

    Searches the semantic bandwidth over the interval from
    :func:`lemma1_bounds`; each candidate pays the exact power that meets
    the semantic target and hands the rest to the bit band.  Candidates
    whose power need exceeds the budget score zero.  Ties break toward the
    smaller semantic band.
    """
    w = scenario.total_bandwidth
    p_max = scenario.max_power
    n0 = scenario.noise_psd
    params = scenario.logistic
    if sigma_target == 0.0:
        rate = shannon_rate(w, p_max, real.gain_b, n0)
        alloc = Allocation.orthogonal(0.0, w, 0.0, p_max)
        return BoundaryPoint(0.0, rate, 0.0, alloc)
    w_low, w_up = lemma1_bounds(scenario, sigma_target)

    def score(ws: np.ndarray) -> np.ndarray:
        eps_req = sigma_target * scenario.k / ws
        p_req = power_for_similarity_grid(params, eps_req, ws, real.gain_s, n0)
        ok = p_req <= p_max
        return np.where(
            ok, _bit_rate_grid(w - ws, np.where(ok, p_max - p_req, 0.0), real.gain_b, n0), 0.0
        )

    ws, rate = refine_search(score, w_low, w_up, grid_n, maximize=True, tie_high=False)
    eps_req = sigma_target * scenario.k / ws
    p_req = float(
        power_for_similarity_grid(params, np.array(eps_req), np.array(ws), real.gain_s, n0)
    )
    if p_req > p_max:
        return BoundaryPoint(sigma_target, 0.0, 0.0, None)
    eps = eval_similarity(params, snr_db(p_req, real.gain_s, ws, n0))
    alloc = Allocation.orthogonal(ws, w - ws, p_req, p_max - p_req)
    return BoundaryPoint(sigma_target, rate, eps, alloc)


def oma_boundary_point(
    scenario: Scenario,
    real: ChannelRealization,
    sigma_target: float,
    grid_n: int = 512,
) -> float:
    """Bit rate on the orthogonal boundary at one semantic-rate target."""
    return solve_oma_point(scenario, real, sigma_target, grid_n).bit_rate


def noma_sigma_min(scenario: Scenario) -> float:
    """Smallest semantic rate any full-band overlay point can have.

    The overlay always carries the semantic stream across the whole band
    at at least the similarity floor (or the curve's own floor when the
    constraint is slack), so the semantic rate cannot drop below this.

    Raises:
        EmptyRegion: the similarity floor sits at or above the curve's
            ceiling, so no overlay point exists for any budget.
    """
    params = scenario.logistic
    if scenario.min_similarity >= params.a_high:
        raise EmptyRegion(
            f"similarity floor {scenario.min_similarity} is unreachable "
            f"(curve ceiling {params.a_high})"
        )
    eps = max(scenario.min_similarity, params.a_low)
    return scenario.total_bandwidth * eps / scenario.k


def noma_power_floor(scenario: Scenario, real: ChannelRealization) -> float:
    """Semantic power that meets the similarity floor over the full band."""
    return required_power_for_similarity(
        scenario.logistic,
        scenario.min_similarity,
        scenario.total_bandwidth,
        real.gain_s,
        scenario.noise_psd,
    )


def solve_noma_point(
    scenario: Scenario,
    real: ChannelRealization,
    sigma_target: float,
) -> BoundaryPoint:
    """Overlay operating point at one semantic-rate target (closed form).

    The semantic power is pinned by whichever is harder: the rate target
    over the full band or the similarity floor.  All remaining budget
    goes to the superposed bit stream.  Returns a zero-rate point with no
    allocation when the target cannot be met within budget.
    """
    w = scenario.total_bandwidth
    p_max = scenario.max_power
    n0 = scenario.noise_psd
    params = scenario.logistic
    eps_rate = sigma_target * scenario.k / w
    if eps_rate >= params.a_high or scenario.min_similarity >= params.a_high:
        return BoundaryPoint(sigma_target, 0.0, 0.0, None)
    eps_need = max(eps_rate, scenario.min_similarity)
    p_s = required_power_for_similarity(params, eps_need, w, real.gain_s, n0)
    if p_s > p_max:
        return BoundaryPoint(sigma_target, 0.0, 0.0, None)
    g_eff = real.gain_eff
    p_b = p_max - p_s
    rate = w * math.log1p(p_b * g_eff / (p_s * g_eff + w * n0)) / LN2 if p_b > 0 else 0.0
    eps = eval_similarity(params, snr_db(p_s, real.gain_s, w, n0))
    return BoundaryPoint(sigma_target, rate, eps, Allocation.overlay(w, p_s, p_b))


def noma_boundary(
    scenario: Scenario,
    real: ChannelRealization,
    n_points: int = 200,
) -> RegionBoundary:
    """Full overlay boundary: sweep the semantic power from floor to budget.

    Raises:
        EmptyRegion: the similarity floor cannot be met within the budget
            on this draw (power-limited), or is unreachable outright.
    """
    if n_points < 1:
        raise ValueError("n_points must be at least 1")
    w = scenario.total_bandwidth
    p_max = scenario.max_power
    n0 = scenario.noise_psd
    params = scenario.logistic
    if scenario.min_similarity >= params.a_high:
        raise EmptyRegion(
            f"similarity floor {scenario.min_similarity} is unreachable "
            f"(curve ceiling {params.a_high})"
        )
    p_floor = noma_power_floor(scenario, real)
    if p_floor > p_max:
        raise EmptyRegion(
            f"power-limited draw: similarity floor needs {p_floor:.6g} W of "
            f"{p_max:.6g} W before the bit stream gets anything"
        )
    p_s = np.linspace(p_floor, p_max, n_points)
    g_eff = real.gain_eff
    with np.errstate(divide="ignore"):
        gamma_db = 10.0 * np.log10(p_s * real.gain_s / (w * n0))
    eps = eval_similarity(params, gamma_db)
    p_b = p_max - p_s
    bit = w * np.log1p(p_b * g_eff / (p_s * g_eff + w * n0)) / LN2
    points = tuple(
        RatePair(sem_rate=float(w * e / scenario.k), bit_rate=float(r), similarity=float(e))
        for e, r in zip(eps, bit)
    )
    return RegionBoundary(
        scheme=Scheme.NOMA,
        points=points,
        grid_spec={"n_points": n_points},
        power_limited=False,
    )


def water_fill_max(
    h_m: float, h_b: float, w_m: float, w_b: float, budget: float
) -> tuple[float, float]:
    """Split ``budget`` W between two parallel bit pipes to maximise rate.

    ``h_m`` and ``h_b`` are channel gain over total in-band noise (plus
    interference) power, so pipe i carries rate_i = w_i * log2(1 + p_i * h_i).
    Standard water level with clamping at the box edges; the clamped pair
    still spends the whole budget.
    """
    if h_m <= 0 or h_b <= 0:
        raise ValueError("pipe slopes must be positive")
    if w_m < 0 or w_b < 0 or w_m + w_b <= 0:
        raise ValueError("pipe bandwidths must be non-negative and not both zero")
    if budget <= 0:
        return 0.0, 0.0
    level = (w_m + w_b) / (budget + 1.0 / h_m + 1.0 / h_b)
    p_bm = min(max(w_m / level - 1.0 / h_m, 0.0), budget)
    p_bo = min(max(w_b / level - 1.0 / h_b, 0.0), budget)
    return p_bm, p_bo


def _hybrid_rate_grid(
    scenario: Scenario,
    real: ChannelRealization,
    w_m: np.ndarray,
    p_s: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Water-filled hybrid bit rate for candidate (shared band, sem power).

    Returns (rate, p_bm, p_bo); infeasible candidates (semantic power
    already over budget) come back with rate 0.  Inverse slopes are used
    throughout so the w_m == W corner needs no special casing beyond a
    guarded 0/0.
    """
    w = scenario.total_bandwidth
    n0 = scenario.noise_psd
    g_eff = real.gain_eff
    budget = scenario.max_power - p_s
    ok = budget > 0
    budget = np.where(ok, budget, 0.0)
    inv_hm = (p_s * g_eff + w_m * n0) / g_eff
    inv_hb = (w - w_m) * n0 / real.gain_b
    level = w / (budget + inv_hm + inv_hb)
    p_bm = np.clip(w_m / level - inv_hm, 0.0, budget)
    p_bo = np.clip((w - w_m) / level - inv_hb, 0.0, budget)
    rate_m = w_m * np.log1p(p_bm / inv_hm) / LN2
    live_o = (p_bo > 0) & (inv_hb > 0)
    rate_o = np.where(live_o, (w - w_m) * np.log1p(p_bo / np.where(live_o, inv_hb, 1.0)) / LN2, 0.0)
    rate = np.where(ok, rate_m + rate_o, 0.0)
    return rate, np.where(ok, p_bm, 0.0), np.where(ok, p_bo, 0.0)


def solve_semi_point(
    scenario: Scenario,
    real: ChannelRealization,
    sigma_target: float,
    grid_n: int = 512,
) -> BoundaryPoint:
    """Hybrid boundary point: max bit rate at one semantic-rate target.

    One search coordinate: the shared-band width.  Each candidate pays the
    semantic power pinned by the harder of the rate target and the
    similarity floor, then water-fills the rest between the superposed and
    orthogonal bit pipes.  The orthogonal and overlay solutions join the
    candidate pool, so the result never falls below either.  Ties break
    toward the wider shared band.
    """
    w = scenario.total_bandwidth
    p_max = scenario.max_power
    n0 = scenario.noise_psd
    params = scenario.logistic
    if sigma_target == 0.0:
        rate = shannon_rate(w, p_max, real.gain_b, n0)
        return BoundaryPoint(0.0, rate, 0.0, Allocation.hybrid(0.0, w, 0.0, 0.0, p_max))
    w_low, _ = lemma1_bounds(scenario, sigma_target)
    w_low = max(w_low, w * _MIN_BAND_FRACTION)
    oma_pt = solve_oma_point(scenario, real, sigma_target, grid_n)
    noma_pt = solve_noma_point(scenario, real, sigma_target)
    extra = [w]
    if oma_pt.alloc is not None and oma_pt.alloc.w_sem >= w_low:
        extra.append(oma_pt.alloc.w_sem)

    def sem_power(wm: np.ndarray) -> np.ndarray:
        eps_need = np.maximum(sigma_target * scenario.k / wm, scenario.min_similarity)
        return power_for_similarity_grid(params, eps_need, wm, real.gain_s, n0)

    def score(wm: np.ndarray) -> np.ndarray:
        p_s = sem_power(wm)
        feasible = p_s <= p_max
        p_s_safe = np.where(feasible, p_s, 0.0)
        rate, _, _ = _hybrid_rate_grid(scenario, real, wm, p_s_safe)
        return np.where(feasible, rate, 0.0)

    wm, rate = refine_search(
        score, w_low, w, grid_n, maximize=True, tie_high=True, extra=extra
    )

    best = BoundaryPoint(sigma_target, 0.0, 0.0, None)
    p_s = float(sem_power(np.array(wm)))
    if p_s <= p_max and rate > 0.0:
        r, p_bm, p_bo = _hybrid_rate_grid(scenario, real, np.array(wm), np.array(p_s))
        eps = eval_similarity(params, snr_db(p_s, real.gain_s, wm, n0))
        alloc = Allocation.hybrid(wm, w - wm, p_s, float(p_bm), float(p_bo))
        best = BoundaryPoint(sigma_target, float(r), eps, alloc)
    # Corner seeds win outright if the interior search could not beat them;
    # comparing realised numbers keeps the dominance exact, not approximate.
    if oma_pt.alloc is not None and oma_pt.bit_rate > best.bit_rate:
        a = oma_pt.alloc
        best = BoundaryPoint(
            sigma_target,
            oma_pt.bit_rate,
            oma_pt.similarity,
            Allocation.hybrid(a.w_sem, a.w_bit, a.p_sem, 0.0, a.p_bit_orth),
        )
    if noma_pt.alloc is not None and noma_pt.bit_rate > best.bit_rate:
        a = noma_pt.alloc
        best = BoundaryPoint(
            sigma_target,
            noma_pt.bit_rate,
            noma_pt.similarity,
            Allocation.hybrid(a.w_shared, 0.0, a.p_sem, a.p_bit_shared, 0.0),
        )
    return best


def semi_boundary_point(
    scenario: Scenario,
    real: ChannelRealization,
    sigma_target: float,
    grid_n: int = 512,
) -> float:
    """Bit rate on the hybrid boundary at one semantic-rate target."""
    return solve_semi_point(scenario, real, sigma_target, grid_n).bit_rate


def sweep_boundary(
    scenario: Scenario,
    real: ChannelRealization,
    scheme: Scheme,
    n_points: int = 200,
    grid_n: int = 512,
    sigma_values: Sequence[float] | None = None,
) -> RegionBoundary:
    """Trace one scheme's boundary over a semantic-rate grid.

    For the orthogonal and hybrid schemes the grid spans [0, sigma_max]
    evenly (or ``sigma_values`` when given) and the swept rates are lifted
    to their running right-max: anything achievable at a higher semantic
    rate is achievable at a lower one, so the lift stays inside the
    region and irons out grid-resolution dents.  The overlay scheme has
    its own closed-form sweep.

    Raises:
        EmptyRegion: overlay sweep on a power-limited draw.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.NOMA:
        if sigma_values is not None:
            points = [solve_noma_point(scenario, real, float(s)) for s in sigma_values]
            pairs = tuple(
                RatePair(float(p.sigma), p.bit_rate, p.similarity)
                for p in points
            )
            return RegionBoundary(scheme, pairs, {"n_points": len(pairs)}, False)
        return noma_boundary(scenario, real, n_points)
    if n_points < 1:
        raise ValueError("n_points must be at least 1")
    ext = oma_extremes(scenario, real)
    if sigma_values is None:
        sigma_values = np.linspace(0.0, ext.sigma_max, n_points)
    solver = solve_oma_point if scheme is Scheme.OMA else solve_semi_point
    solved = [solver(scenario, real, float(s), grid_n) for s in sigma_values]
    rates = np.array([p.bit_rate for p in solved])
    # Lift to the right-tail max, carrying the achieving point's similarity.
    best_idx = len(solved) - 1
    lifted = []
    for i in range(len(solved) - 1, -1, -1):
        if rates[i] >= rates[best_idx]:
            best_idx = i
        src = solved[best_idx]
        lifted.append(RatePair(float(sigma_values[i]), src.bit_rate, src.similarity))
    lifted.reverse()
    return RegionBoundary(
        scheme=scheme,
        points=tuple(lifted),
        grid_spec={
            "n_points": int(n_points),
            "grid_n": int(grid_n),
            "refine_levels": REFINE_LEVELS,
            "refine_zoom": REFINE_ZOOM,
        },
        power_limited=ext.power_limited,
    )


def check_containment(
    inner: RegionBoundary, outer: RegionBoundary, tol: float = 1e-6
) -> Containment:
    """Is every inner boundary point dominated by the outer boundary?

    Each inner point (sigma, R) is covered when the outer boundary,
    linearly interpolated at sigma, reaches at least R * (1 - tol).  Inner
    semantic rates outside the outer sweep's range (beyond a 1e-9 relative
    slack) are uncovered: the outer region has no point there at all.

    Raises:
        DomainMismatch: the two sigma ranges do not overlap at all.
    """
    if not inner.points or not outer.points:
        raise DomainMismatch("cannot compare an empty boundary")
    s_in = inner.sigma
    r_in = inner.bit_rate
    s_out = outer.sigma
    r_out = outer.bit_rate
    order = np.argsort(s_out, kind="stable")
    s_out, r_out = s_out[order], r_out[order]
    slack = 1e-9 * max(s_out[-1], s_in.max(), 1e-300)
    if s_in.min() > s_out[-1] + slack or s_in.max() < s_out[0] - slack:
        raise DomainMismatch(
            f"no overlap: inner sigma in [{s_in.min():.6g}, {s_in.max():.6g}], "
            f"outer in [{s_out[0]:.6g}, {s_out[-1]:.6g}]"
        )
    witness = None
    worst = 0.0
    for s, r in zip(s_in, r_in):
        if s < s_out[0] - slack or s > s_out[-1] + slack:
            if witness is None:
                witness = float(s)
            worst = math.inf
            continue
        reach = float(np.interp(s, s_out, r_out))
        if reach < r * (1.0 - tol):
            if witness is None:
                witness = float(s)
            if r > 0:
                worst = max(worst, (r - reach) / r)
    return Containment(
        contained=witness is None,
        witness_sigma=witness,
        max_violation=worst,
        checked=len(s_in),
    )
