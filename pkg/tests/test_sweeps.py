"""Sweep drivers: shapes, fixed values, determinism, refinement stability."""

import math

import numpy as np
import pytest

from minleak.params import PmParams
from minleak.protocols import zero_leakage_heralding, zero_leakage_heralding_inverse
from minleak.security import key_rate_heralding, plob_bound
from minleak.sweeps import (
    SweepSpec,
    distance_to_transmissivity,
    run_fig2,
    run_fig4,
    run_fig5,
    run_fig6,
)


class TestDistanceConversion:
    def test_zero_distance(self):
        assert distance_to_transmissivity(0.0, 0.2) == 1.0

    def test_ten_db_total_loss(self):
        assert distance_to_transmissivity(50.0, 0.2) == pytest.approx(0.1)

    def test_fifteen_km(self):
        assert distance_to_transmissivity(15.0, 0.2) == pytest.approx(
            10 ** (-0.3), abs=1e-12
        )

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            distance_to_transmissivity(-1.0, 0.2)


class TestSweepSpec:
    def test_rejects_single_point_axis(self):
        with pytest.raises(ValueError):
            SweepSpec(figure_id="fig2", axes=(("v", 0.0, 1.0, 1),))


class TestFig2:
    def test_shape_and_ordering(self):
        result = run_fig2(points=9)
        assert len(result.rows) == 9
        assert result.columns == (
            "v_sqz", "sqz_db", "chi_symmetric", "chi_equal_noise", "chi_general", "status",
        )
        for row in result.rows:
            v_sqz, sqz_db, chi_sym, chi_eq, chi_gen, status = row
            assert status == "ok"
            assert sqz_db == pytest.approx(-10 * math.log10(v_sqz))
            assert 0.0 <= chi_sym <= chi_eq + 1e-9
            assert chi_eq <= chi_gen + 1e-9

    def test_bounds_nearly_coincide_without_squeezing(self):
        result = run_fig2(points=5)
        *_, last = result.rows
        spread_coherent = last[4] - last[2]
        first = result.rows[0]
        spread_squeezed = first[4] - first[2]
        assert last[0] == 1.0
        assert spread_coherent < 0.1 * spread_squeezed

    def test_deterministic(self):
        assert run_fig2(points=7).rows == run_fig2(points=7).rows


class TestFig4:
    def test_shape_and_grid(self):
        result = run_fig4(xi=0.0, grid=(4, 5))
        assert len(result.rows) == 20
        assert result.figure_id == "fig4a"
        assert all(row[-1] == "ok" for row in result.rows)
        assert all(row[2] >= 0.0 for row in result.rows)

    def test_noisy_variant_id(self):
        assert run_fig4(xi=0.001, grid=(2, 2)).figure_id == "fig4b"

    def test_zero_contour_on_both_branches(self):
        lo, hi = zero_leakage_heralding_inverse(0.3)
        for v_sqz in (lo, hi):
            pm = PmParams(v_sig=0.3, v_sqz=v_sqz)
            for t in np.linspace(0.05, 0.95, 7):
                assert key_rate_heralding(pm, float(t), 0.0, 1.0).chi_eb <= 1e-8

    def test_noisy_leakage_decreases_toward_strong_loss(self):
        result = run_fig4(xi=0.001, grid=(5, 3), v_sqz_range=(0.28, 0.283))
        by_v = {}
        for t, v_sqz, chi, status in result.rows:
            assert status == "ok"
            by_v.setdefault(round(v_sqz, 6), []).append((t, chi))
        for pairs in by_v.values():
            pairs.sort()
            chis = [c for _, c in pairs]
            assert all(a <= b + 1e-12 for a, b in zip(chis, chis[1:]))


class TestFig5:
    def test_shape(self):
        result = run_fig5(grid=(3, 4))
        assert len(result.rows) == 12
        assert result.columns == ("v_sig", "v_sqz", "chi", "status")

    def test_minimum_sits_on_the_zero_leakage_curve(self):
        for v_sqz in (0.1, 0.4, 0.9, 1.3):
            pm = PmParams(v_sig=zero_leakage_heralding(v_sqz), v_sqz=v_sqz)
            assert key_rate_heralding(pm, 0.5, 0.0, 1.0).chi_eb <= 1e-8

    def test_coherent_states_cannot_reach_zero(self):
        result = run_fig5(grid=(6, 3), v_sqz_range=(0.999, 1.001), v_sig_range=(0.05, 0.5))
        for _, _, chi, status in result.rows:
            assert status == "ok"
            assert chi > 1e-4

    def test_infinite_squeezing_modulation_limit(self):
        assert zero_leakage_heralding(1e-7) == pytest.approx(0.5, abs=1e-6)


class TestFig6:
    def test_shape_and_fixed_values(self):
        result = run_fig6(d_max_km=100.0, points=11)
        assert len(result.rows) == 11
        assert result.metadata["fixed"]["xi"] == 0.05
        assert result.metadata["fixed"]["beta"] == 0.95

    def test_zero_distance_has_no_capacity_value(self):
        result = run_fig6(d_max_km=50.0, points=3)
        first = result.rows[0]
        assert first[0] == 0.0
        assert first[-1] == "plob_undefined"
        assert first[-2] is None

    def test_rates_floored_and_below_capacity(self):
        result = run_fig6(d_max_km=160.0, points=9)
        for row in result.rows[1:]:
            d, t, k_inf, k_10, k_sh, _, k_ch, _, plob, status = row
            assert status == "ok"
            for rate in (k_inf, k_10, k_sh, k_ch):
                assert 0.0 <= rate <= plob + 1e-12
            assert plob == pytest.approx(plob_bound(t), abs=1e-12)

    def test_dyadic_refinement_keeps_old_rows(self):
        coarse = run_fig6(d_max_km=80.0, points=5)
        fine = run_fig6(d_max_km=80.0, points=9)
        assert fine.rows[0::2] == coarse.rows

    def test_sifting_scales_rates(self):
        plain = run_fig6(d_max_km=40.0, points=3)
        halved = run_fig6(d_max_km=40.0, points=3, sifting=0.5)
        for full, half in zip(plain.rows[1:], halved.rows[1:]):
            for i in (2, 3, 4, 6):
                assert half[i] == pytest.approx(0.5 * full[i], abs=1e-12)


class TestParallelism:
    def test_jobs_do_not_change_rows(self):
        serial = run_fig4(xi=0.001, grid=(3, 3))
        parallel = run_fig4(xi=0.001, grid=(3, 3), jobs=2)
        assert serial.rows == parallel.rows
