import math

import numpy as np
import pytest

from uaoi.distribution import TransmissionTimeDistribution as Dist
from uaoi.model import PenaltySpec, beta
from uaoi.simulator import Trajectory, empirical_vs_analytic, measure, simulate
from uaoi.solver import WaitingPolicy, solve

from oracles import age_curve_integral

ONE = Dist.point_mass(1.0)
TWO = Dist.from_atoms([(0.1, 0.7), (1.0, 0.3)])
THREE = Dist.from_atoms([(0.0, 0.3), (0.5, 0.4), (1.2, 0.3)])
E2 = math.e**2 - math.e - 1
REFERENCE_Y = [0.1, 0.1, 0.1, 1.0, 1.0, 0.1, 0.1, 0.1]


class TestSimulate:
    def test_zero_wait_chain(self):
        t = simulate(WaitingPolicy.zero_wait(), ONE, 5, seed=1)
        assert t.D.tolist() == [1.0, 2.0, 3.0, 4.0, 5.0]
        assert t.Z.tolist() == [0.0] * 5

    def test_equal_wait_unrolled(self):
        t = simulate(WaitingPolicy.equal_wait(0.5), ONE, 3, seed=1)
        assert t.S.tolist() == [0.0, 1.5, 3.0]
        assert t.D.tolist() == [1.0, 2.5, 4.0]

    def test_replay(self):
        pol = solve(THREE, 1.0).policy
        t1 = simulate(pol, THREE, 1000, seed=42)
        t2 = simulate(pol, THREE, 1000, seed=42)
        assert t1.to_csv() == t2.to_csv()
        t3 = simulate(pol, THREE, 1000, seed=43)
        assert t1.to_csv() != t3.to_csv()

    def test_reference_stream(self):
        # pinned PCG64 draws: seed 2024, 8 samples from TWO
        t = simulate(WaitingPolicy.zero_wait(), TWO, 8, seed=2024)
        assert t.Y.tolist() == REFERENCE_Y
        u = np.random.Generator(np.random.PCG64(2024)).random(8)
        assert t.Y.tolist() == [0.1 if x < 0.7 else 1.0 for x in u]

    def test_timing_identities(self):
        t = simulate(solve(THREE, 1.2).policy, THREE, 20000, seed=3)
        assert np.array_equal(t.D, t.S + t.Y)
        assert np.array_equal(t.S[1:], t.D[:-1] + t.Z[:-1])
        assert np.all(np.diff(t.S) >= 0) and np.all(np.diff(t.D) >= 0)

    def test_stationary_policy(self):
        pol = solve(TWO, 1.0).policy
        t = simulate(pol, TWO, 500, seed=9)
        assert np.array_equal(t.Z, pol.evaluate(t.Y))

    def test_empirical_frequencies(self):
        t = simulate(WaitingPolicy.zero_wait(), TWO, 200000, seed=5)
        assert np.mean(t.Y == 0.1) == pytest.approx(0.7, abs=0.005)

    def test_needs_two(self):
        with pytest.raises(ValueError):
            simulate(WaitingPolicy.zero_wait(), ONE, 1, seed=0)


class TestMeasure:
    def test_deterministic_renewal(self):
        t = simulate(WaitingPolicy.zero_wait(), ONE, 10000, seed=0)
        m = measure(t, 1.0)
        assert m.avg_uaoi == pytest.approx(E2, rel=1e-12)
        assert m.avg_aoi == pytest.approx(1.5, rel=1e-12)

    def test_single_pair(self):
        t = Trajectory.from_samples([1.0, 1.0], [0.0, 0.0])
        m = measure(t, 1.0)
        assert m.avg_uaoi == float(beta(1, 0, 1, PenaltySpec(1.0))) / 1.0
        assert m.total_time == 1.0

    def test_zero_span(self):
        t = Trajectory.from_samples([0.0, 0.0], [0.0, 0.0])
        with pytest.raises(ZeroDivisionError):
            measure(t, 1.0)

    def test_ratios(self):
        t = simulate(solve(TWO, 1.0).policy, TWO, 5000, seed=11)
        m = measure(t, 0.8, M=0.02)
        assert m.avg_uaoi == m.sum_beta / m.total_time
        assert m.avg_aoi == m.sum_Q / m.total_time

    def test_energy_accounting(self):
        t = simulate(solve(THREE, 1.0).policy, THREE, 10000, seed=12)
        m = measure(t, 1.0, M=0.02)
        assert m.harvested_energy == pytest.approx(0.02 * m.total_time, rel=1e-12)

    @pytest.mark.parametrize("a", [0.3, 1.0, 1.7])
    def test_full_curve_quadrature(self, a):
        t = simulate(solve(THREE, a).policy, THREE, 10, seed=21)
        assert measure(t, a).sum_beta == pytest.approx(age_curve_integral(t, a), rel=1e-9)

    def test_full_curve_linear_aoi(self):
        t = simulate(WaitingPolicy.equal_wait(0.3), TWO, 10, seed=4)
        # integrate the sawtooth age t - U(t) exactly piece by piece
        area = 0.0
        for k in range(t.n - 1):
            u = t.S[k]
            lo, hi = t.D[k], t.D[k + 1]
            area += 0.5 * ((hi - u) ** 2 - (lo - u) ** 2)
        assert measure(t, 1.0).sum_Q == pytest.approx(area, rel=1e-12)


class TestEmpiricalVsAnalytic:
    def test_deterministic(self):
        emp, ana, se = empirical_vs_analytic(WaitingPolicy.equal_wait(0.4), ONE, 1.0, 2000, seed=3)
        assert emp == pytest.approx(ana, rel=1e-12)
        assert se == pytest.approx(0.0, abs=1e-12)

    def test_within_three_sigma(self):
        emp, ana, se = empirical_vs_analytic(WaitingPolicy.zero_wait(), TWO, 1.0, 200000, seed=8)
        assert abs(emp - ana) <= 3 * se

    def test_stderr_rate(self):
        pol = WaitingPolicy.zero_wait()
        small = [empirical_vs_analytic(pol, TWO, 1.0, 30000, s)[2] for s in range(20)]
        large = [empirical_vs_analytic(pol, TWO, 1.0, 60000, s + 100)[2] for s in range(20)]
        ratio = np.mean(small) / np.mean(large)
        assert ratio == pytest.approx(math.sqrt(2), rel=0.2)


def test_csv_export(tmp_path):
    t = Trajectory.from_samples([1.0, 0.25], [0.5, 0.0])
    path = tmp_path / "traj.csv"
    text = t.to_csv(path)
    assert path.read_text() == text
    assert text == "i,S,D,Y,Z\n0,0,1,1,0.5\n1,1.5,1.75,0.25,0\n"
    assert "\r" not in text
