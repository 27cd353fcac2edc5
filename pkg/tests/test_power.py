from fractions import Fraction

import numpy as np
import pytest

from hetsched.power import StagePower, energy, stage_powers_from_doc, weighted_average_power


class TestWeightedAveragePower:
    def test_two_stage_value(self):
        # (100*2 + 10000*4) / 10100, evaluated exactly
        got = weighted_average_power([StagePower(100, 2.0), StagePower(10000, 4.0)])
        assert got == float(Fraction(40200, 10100))

    def test_equal_powers_collapse(self):
        assert weighted_average_power([StagePower(3, 1.7), StagePower(999, 1.7)]) == 1.7

    def test_single_stage(self):
        assert weighted_average_power([StagePower(42, 3.25)]) == 3.25

    def test_zero_weight_stage_is_ignored(self):
        assert weighted_average_power([StagePower(0, 100.0), StagePower(10, 2.0)]) == 2.0

    def test_no_weight_mass(self):
        with pytest.raises(ValueError, match="no weight mass"):
            weighted_average_power([StagePower(0, 1.0), StagePower(0, 2.0)])
        with pytest.raises(ValueError, match="no weight mass"):
            weighted_average_power([])

    def test_negative_power_rejected_at_construction(self):
        with pytest.raises(ValueError):
            StagePower(1, -0.5)
        with pytest.raises(ValueError):
            StagePower(-1, 0.5)

    def test_two_stage_closed_form_matches_exactly(self):
        # closed form (m*p1 + n*m*p2) / (m + n*m) with exact rationals
        rng = np.random.default_rng(21)
        for _ in range(200):
            m = int(rng.integers(1, 1000))
            n = int(rng.integers(1, 1000))
            p1 = Fraction(int(rng.integers(0, 10**6)), int(rng.integers(1, 10**3)))
            p2 = Fraction(int(rng.integers(0, 10**6)), int(rng.integers(1, 10**3)))
            closed = Fraction(m * p1 + n * m * p2, m + n * m)
            got = weighted_average_power([StagePower(m, p1), StagePower(n * m, p2)])
            assert got == float(closed)

    def test_convexity_and_scale_invariance(self):
        rng = np.random.default_rng(22)
        for _ in range(500):
            k = int(rng.integers(1, 7))
            stages = [
                StagePower(int(rng.integers(0, 10**6)), float(rng.uniform(0, 50))) for _ in range(k)
            ]
            if not any(s.iterations for s in stages):
                stages[0] = StagePower(1, stages[0].avg_power_w)
            p = weighted_average_power(stages)
            assert min(s.avg_power_w for s in stages) <= p <= max(s.avg_power_w for s in stages)
            factor = int(rng.integers(2, 100))
            scaled = [StagePower(s.iterations * factor, s.avg_power_w) for s in stages]
            assert weighted_average_power(scaled) == p

    def test_converges_to_second_stage_power_monotonically(self):
        # growing the second stage's weight pulls the average toward its power
        m, p1, p2 = 64, 1.0, 5.0
        gaps = [
            abs(p2 - weighted_average_power([StagePower(m, p1), StagePower(n * m, p2)]))
            for n in (1, 2, 8, 64, 512, 4096)
        ]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))


class TestEnergy:
    def test_product(self):
        report = energy(4.0, 6.99e-3)
        assert report.energy_j == pytest.approx(27.96e-3, rel=1e-12)
        assert report.avg_power_w == 4.0
        assert report.duration_s == 6.99e-3

    def test_reference_energy_sum_is_consistent(self):
        # 1.59 x (4133.8 + 13653.9) uJ lands within 2% of 4 W for 6.99 ms
        combined = 1.59 * (4133.8e-6 + 13653.9e-6)
        assert abs(combined - energy(4.0, 6.99e-3).energy_j) / energy(4.0, 6.99e-3).energy_j < 0.02

    def test_zero_edges(self):
        assert energy(0.0, 12.0).energy_j == 0.0
        assert energy(7.5, 0.0).energy_j == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            energy(-1.0, 1.0)
        with pytest.raises(ValueError):
            energy(1.0, -1.0)


class TestStagePowersFromDoc:
    def test_extracts_when_every_stage_has_power(self):
        doc = {
            "stages": [
                {"iterations": 64, "ii": 1, "latency": 10, "power_w": 2.0},
                {"iterations": 4096, "ii": 1, "latency": 20, "power_w": 4.0},
            ]
        }
        powers = stage_powers_from_doc(doc)
        assert [(s.iterations, s.avg_power_w) for s in powers] == [(64, 2.0), (4096, 4.0)]

    def test_none_when_any_stage_lacks_power(self):
        doc = {"stages": [{"iterations": 1, "power_w": 2.0}, {"iterations": 2}]}
        assert stage_powers_from_doc(doc) is None

    def test_bad_power_value(self):
        doc = {"stages": [{"iterations": 1, "power_w": -2.0}]}
        with pytest.raises(ValueError, match="power_w"):
            stage_powers_from_doc(doc)
