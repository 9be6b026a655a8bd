import math

import pytest

from sembit import (
    Allocation,
    RatePair,
    Scheme,
    eval_similarity,
    noma_rates,
    oma_rates,
    rates_for,
    semi_rates,
    shannon_rate,
    snr_db,
)


class TestShannon:
    def test_hand_value(self):
        # SNR = 1 * 1e-9 / (1e6 * 1e-17) = 100
        rate = shannon_rate(1e6, 1.0, 1e-9, 1e-17)
        assert rate == pytest.approx(1e6 * math.log2(101.0), rel=1e-12)

    def test_degenerate_inputs_carry_nothing(self):
        assert shannon_rate(0.0, 1.0, 1e-9, 1e-17) == 0.0
        assert shannon_rate(1e6, 0.0, 1e-9, 1e-17) == 0.0

    def test_monotone_in_power_and_band(self):
        base = shannon_rate(1e6, 0.5, 1e-9, 1e-17)
        assert shannon_rate(1e6, 0.6, 1e-9, 1e-17) > base
        assert shannon_rate(1.2e6, 0.5, 1e-9, 1e-17) > base

    def test_snr_db(self):
        assert snr_db(1.0, 1e-9, 1e6, 1e-17) == pytest.approx(20.0, abs=1e-12)
        assert snr_db(0.0, 1e-9, 1e6, 1e-17) == -math.inf


class TestAllocation:
    def test_negative_fields_rejected(self):
        with pytest.raises(ValueError):
            Allocation.orthogonal(-1.0, 1e6, 0.1, 0.1)
        with pytest.raises(ValueError):
            Allocation.overlay(1e6, 0.1, -0.1)

    def test_constructors_route_fields(self):
        a = Allocation.orthogonal(3e5, 7e5, 0.2, 0.6)
        assert a.scheme is Scheme.OMA
        assert (a.w_shared, a.p_bit_shared) == (0.0, 0.0)
        assert a.total_bandwidth == 1e6
        assert a.total_power == pytest.approx(0.8)
        b = Allocation.overlay(1e6, 0.2, 0.6)
        assert b.scheme is Scheme.NOMA
        assert b.w_shared == 1e6
        c = Allocation.hybrid(4e5, 6e5, 0.2, 0.3, 0.4)
        assert c.scheme is Scheme.SEMI
        assert c.total_power == pytest.approx(0.9)

    def test_budget_check(self, scenario):
        Allocation.orthogonal(3e5, 7e5, 0.5, 0.5).check_budget(scenario)
        with pytest.raises(ValueError, match="bandwidth"):
            Allocation.orthogonal(3e5, 6e5, 0.5, 0.5).check_budget(scenario)
        with pytest.raises(ValueError, match="power"):
            Allocation.orthogonal(3e5, 7e5, 0.6, 0.6).check_budget(scenario)

    def test_budget_check_tolerates_rounding(self, scenario):
        w = scenario.total_bandwidth
        Allocation.orthogonal(w / 3, w - w / 3, 0.5, 0.5).check_budget(scenario)


class TestOma:
    def test_composition(self, scenario, realization):
        alloc = Allocation.orthogonal(4e5, 6e5, 0.3, 0.7)
        pair = oma_rates(scenario, realization, alloc)
        snr = snr_db(0.3, realization.gain_s, 4e5, scenario.noise_psd)
        eps = eval_similarity(scenario.logistic, snr)
        assert pair.similarity == pytest.approx(eps, rel=1e-12)
        assert pair.sem_rate == pytest.approx(4e5 * eps / scenario.k, rel=1e-12)
        assert pair.bit_rate == pytest.approx(
            shannon_rate(6e5, 0.7, realization.gain_b, scenario.noise_psd), rel=1e-12
        )

    def test_bit_only_corner(self, scenario, realization):
        alloc = Allocation.orthogonal(0.0, 1e6, 0.0, 1.0)
        pair = oma_rates(scenario, realization, alloc)
        assert pair.sem_rate == 0.0
        assert pair.similarity == 0.0
        assert pair.bit_rate > 0.0

    def test_scheme_mismatch(self, scenario, realization):
        with pytest.raises(ValueError, match="orthogonal"):
            oma_rates(scenario, realization, Allocation.overlay(1e6, 0.3, 0.7))


class TestNoma:
    def test_bit_rate_uses_weaker_gain_with_interference(self, scenario, realization):
        alloc = Allocation.overlay(1e6, 0.3, 0.7)
        pair, decode = noma_rates(scenario, realization, alloc)
        g_eff = min(realization.gain_s, realization.gain_b)
        expect = 1e6 * math.log2(
            1.0 + 0.7 * g_eff / (0.3 * g_eff + 1e6 * scenario.noise_psd)
        )
        assert pair.bit_rate == pytest.approx(expect, rel=1e-12)
        assert decode["r_b_to_s"] == pair.bit_rate
        # Clean own-signal decode at the bit user's own gain is never slower.
        assert decode["r_b_to_b"] >= pair.bit_rate

    def test_interference_hurts(self, scenario, realization):
        quiet, _ = noma_rates(scenario, realization, Allocation.overlay(1e6, 0.0, 0.7))
        loud, _ = noma_rates(scenario, realization, Allocation.overlay(1e6, 0.3, 0.7))
        assert loud.bit_rate < quiet.bit_rate

    def test_semantic_stream_sees_no_interference(self, scenario, realization):
        # The semantic receiver decodes last in the cancellation order.
        alone, _ = noma_rates(scenario, realization, Allocation.overlay(1e6, 0.3, 0.0))
        shared, _ = noma_rates(scenario, realization, Allocation.overlay(1e6, 0.3, 0.7))
        assert shared.sem_rate == alone.sem_rate
        assert shared.similarity == alone.similarity

    def test_zero_power_floor_still_reported(self, scenario, realization):
        # The overlay keeps the semantic stream on: at zero power the
        # similarity sits at the curve floor, not at zero.
        pair, _ = noma_rates(scenario, realization, Allocation.overlay(1e6, 0.0, 1.0))
        assert pair.similarity == scenario.logistic.a_low
        assert pair.sem_rate == pytest.approx(
            1e6 * scenario.logistic.a_low / scenario.k
        )


class TestSemi:
    def test_reduces_to_overlay_when_shared_band_is_all(self, scenario, realization):
        overlay = Allocation.overlay(1e6, 0.3, 0.7)
        hybrid = Allocation.hybrid(1e6, 0.0, 0.3, 0.7, 0.0)
        pair_o, _ = noma_rates(scenario, realization, overlay)
        pair_h = semi_rates(scenario, realization, hybrid)
        assert pair_h.sem_rate == pair_o.sem_rate
        assert pair_h.bit_rate == pair_o.bit_rate
        assert pair_h.similarity == pair_o.similarity

    def test_reduces_to_orthogonal_when_no_shared_bit_power(self, scenario, realization):
        orth = Allocation.orthogonal(4e5, 6e5, 0.3, 0.7)
        hybrid = Allocation.hybrid(4e5, 6e5, 0.3, 0.0, 0.7)
        pair_o = oma_rates(scenario, realization, orth)
        pair_h = semi_rates(scenario, realization, hybrid)
        assert pair_h.sem_rate == pair_o.sem_rate
        assert pair_h.bit_rate == pair_o.bit_rate

    def test_bit_rate_adds_both_bands(self, scenario, realization):
        hybrid = Allocation.hybrid(4e5, 6e5, 0.2, 0.3, 0.5)
        pair = semi_rates(scenario, realization, hybrid)
        g_eff = realization.gain_eff
        shared = 4e5 * math.log2(
            1.0 + 0.3 * g_eff / (0.2 * g_eff + 4e5 * scenario.noise_psd)
        )
        orth = shannon_rate(6e5, 0.5, realization.gain_b, scenario.noise_psd)
        assert pair.bit_rate == pytest.approx(shared + orth, rel=1e-12)

    def test_dispatcher_routes_by_scheme(self, scenario, realization):
        allocs = [
            Allocation.orthogonal(4e5, 6e5, 0.3, 0.7),
            Allocation.overlay(1e6, 0.3, 0.7),
            Allocation.hybrid(4e5, 6e5, 0.2, 0.3, 0.5),
        ]
        for alloc in allocs:
            pair = rates_for(scenario, realization, alloc)
            assert isinstance(pair, RatePair)
            assert pair.bit_rate > 0.0
