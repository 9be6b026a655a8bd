"""Achieved rates for a concrete resource allocation under each scheme.

Orthogonal (oma): the two streams get disjoint sub-bands.
Overlay (noma): both streams superpose on the full band; the bit user
decodes and cancels the semantic signal first, so its rate sees the
semantic power as interference through the weaker of the two link gains.
Hybrid (semi): a shared sub-band carries the overlay, the remainder is an
orthogonal bit-only band.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .channel import ChannelRealization, Scenario
from .similarity import eval_similarity

LN2 = math.log(2.0)
_SUM_RTOL = 1e-9


class Scheme(str, enum.Enum):
    OMA = "oma"
    NOMA = "noma"
    SEMI = "semi"


@dataclass(frozen=True)
class Allocation:
    """Bandwidth/power split for one transmission scheme.

    ``w_shared`` carries both streams (overlay); ``w_sem``/``w_bit`` are
    exclusive sub-bands.  ``p_bit_shared`` rides on the shared band,
    ``p_bit_orth`` on the bit-only band.  Unused fields stay zero; use the
    constructors below rather than filling fields by hand.
    """

    scheme: Scheme
    w_shared: float = 0.0
    w_sem: float = 0.0
    w_bit: float = 0.0
    p_sem: float = 0.0
    p_bit_shared: float = 0.0
    p_bit_orth: float = 0.0

    def __post_init__(self):
        for name in ("w_shared", "w_sem", "w_bit", "p_sem", "p_bit_shared", "p_bit_orth"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def orthogonal(cls, w_sem: float, w_bit: float, p_sem: float, p_bit: float) -> "Allocation":
        return cls(Scheme.OMA, w_sem=w_sem, w_bit=w_bit, p_sem=p_sem, p_bit_orth=p_bit)

    @classmethod
    def overlay(cls, w: float, p_sem: float, p_bit: float) -> "Allocation":
        return cls(Scheme.NOMA, w_shared=w, p_sem=p_sem, p_bit_shared=p_bit)

    @classmethod
    def hybrid(
        cls,
        w_shared: float,
        w_bit: float,
        p_sem: float,
        p_bit_shared: float,
        p_bit_orth: float,
    ) -> "Allocation":
        return cls(
            Scheme.SEMI,
            w_shared=w_shared,
            w_bit=w_bit,
            p_sem=p_sem,
            p_bit_shared=p_bit_shared,
            p_bit_orth=p_bit_orth,
        )

    @property
    def total_bandwidth(self) -> float:
        return self.w_shared + self.w_sem + self.w_bit

    @property
    def total_power(self) -> float:
        return self.p_sem + self.p_bit_shared + self.p_bit_orth

    def check_budget(self, scenario: Scenario) -> None:
        """Raise if the allocation does not fit the scenario's resources."""
        w = scenario.total_bandwidth
        if not math.isclose(self.total_bandwidth, w, rel_tol=_SUM_RTOL, abs_tol=w * _SUM_RTOL):
            raise ValueError(
                f"bandwidth parts sum to {self.total_bandwidth:.9g}, carrier has {w:.9g}"
            )
        if self.total_power > scenario.max_power * (1.0 + _SUM_RTOL):
            raise ValueError(
                f"power parts sum to {self.total_power:.9g}, budget is {scenario.max_power:.9g}"
            )


@dataclass(frozen=True)
class RatePair:
    """One achieved operating point.

    sem_rate is the normalised semantic rate (suts/s per transmitted
    symbol-content unit): bandwidth * similarity / k.  bit_rate is in
    bit/s.  similarity is the raw decoder score behind sem_rate.
    """

    sem_rate: float
    bit_rate: float
    similarity: float


def shannon_rate(bandwidth: float, power: float, gain: float, noise_psd: float) -> float:
    """AWGN capacity in bit/s; zero bandwidth or power carries nothing."""
    if bandwidth <= 0 or power <= 0:
        return 0.0
    return bandwidth * math.log1p(power * gain / (bandwidth * noise_psd)) / LN2


def snr_db(power: float, gain: float, bandwidth: float, noise_psd: float) -> float:
    """Receive SNR in dB over ``bandwidth``; zero power maps to -inf."""
    if power <= 0:
        return -math.inf
    return 10.0 * math.log10(power * gain / (bandwidth * noise_psd))


def _semantic_outputs(scenario, gain, bandwidth, power):
    """(similarity, normalised sem rate) on a band; no band means neither."""
    if bandwidth <= 0:
        return 0.0, 0.0
    eps = eval_similarity(
        scenario.logistic, snr_db(power, gain, bandwidth, scenario.noise_psd)
    )
    return eps, bandwidth * eps / scenario.k


def oma_rates(scenario: Scenario, real: ChannelRealization, alloc: Allocation) -> RatePair:
    """Rates for an orthogonal split.  Zero semantic bandwidth is the
    bit-only corner: semantic rate and reported similarity are both zero."""
    if alloc.scheme is not Scheme.OMA:
        raise ValueError(f"expected an orthogonal allocation, got {alloc.scheme}")
    alloc.check_budget(scenario)
    eps, sem = _semantic_outputs(scenario, real.gain_s, alloc.w_sem, alloc.p_sem)
    bit = shannon_rate(alloc.w_bit, alloc.p_bit_orth, real.gain_b, scenario.noise_psd)
    return RatePair(sem_rate=sem, bit_rate=bit, similarity=eps)


def noma_rates(
    scenario: Scenario, real: ChannelRealization, alloc: Allocation
) -> tuple[RatePair, dict]:
    """Rates for a full-band overlay.

    Successive decoding at the bit user: it first decodes the semantic
    signal (treating its own as noise), cancels it, then decodes its own
    stream clean.  Both decode steps must succeed at the weaker gain, so
    the bit rate uses gain_eff = min(gain_s, gain_b).  Returns the rate
    pair plus the two decode-stage rates for diagnostics.
    """
    if alloc.scheme is not Scheme.NOMA:
        raise ValueError(f"expected an overlay allocation, got {alloc.scheme}")
    alloc.check_budget(scenario)
    w = alloc.w_shared
    n0 = scenario.noise_psd
    g_eff = real.gain_eff
    eps, sem = _semantic_outputs(scenario, real.gain_s, w, alloc.p_sem)
    p_b = alloc.p_bit_shared
    if w <= 0 or p_b <= 0:
        bit = 0.0
        r_b_to_b = 0.0
    else:
        bit = w * math.log1p(p_b * g_eff / (alloc.p_sem * g_eff + w * n0)) / LN2
        r_b_to_b = w * math.log1p(p_b * real.gain_b / (w * n0)) / LN2
    decode = {"r_b_to_s": bit, "r_b_to_b": r_b_to_b}
    return RatePair(sem_rate=sem, bit_rate=bit, similarity=eps), decode


def semi_rates(scenario: Scenario, real: ChannelRealization, alloc: Allocation) -> RatePair:
    """Rates for the hybrid: overlay on w_shared plus a clean bit band."""
    if alloc.scheme is not Scheme.SEMI:
        raise ValueError(f"expected a hybrid allocation, got {alloc.scheme}")
    alloc.check_budget(scenario)
    n0 = scenario.noise_psd
    w_m = alloc.w_shared
    eps, sem = _semantic_outputs(scenario, real.gain_s, w_m, alloc.p_sem)
    if w_m > 0 and alloc.p_bit_shared > 0:
        bit_shared = (
            w_m
            * math.log1p(
                alloc.p_bit_shared * real.gain_eff / (alloc.p_sem * real.gain_eff + w_m * n0)
            )
            / LN2
        )
    else:
        bit_shared = 0.0
    bit_orth = shannon_rate(alloc.w_bit, alloc.p_bit_orth, real.gain_b, n0)
    return RatePair(sem_rate=sem, bit_rate=bit_shared + bit_orth, similarity=eps)


def rates_for(scenario: Scenario, real: ChannelRealization, alloc: Allocation) -> RatePair:
    """Scheme-dispatching convenience used by plug-back verification."""
    if alloc.scheme is Scheme.OMA:
        return oma_rates(scenario, real, alloc)
    if alloc.scheme is Scheme.NOMA:
        return noma_rates(scenario, real, alloc)[0]
    return semi_rates(scenario, real, alloc)
