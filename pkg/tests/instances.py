"""Regression instances shared by the solver and acceptance tests."""

import math
from dataclasses import dataclass

import numpy as np

from uaoi.distribution import TransmissionTimeDistribution as Dist
from uaoi.distribution import mean
from uaoi.solver import solve


@dataclass(frozen=True)
class Instance:
    name: str
    d: Dist
    a: float
    omega: float
    cap_T: float


def _random_dist(rng, k):
    values = np.sort(rng.choice(np.arange(0, 1501), size=k, replace=False)) / 1000.0
    probs = rng.dirichlet(np.full(k, 2.0))
    probs = [round(float(p), 6) for p in probs[:-1]]
    probs.append(1.0 - math.fsum(probs))
    return Dist(tuple(float(v) for v in values), tuple(probs))


def random_instances(count=20, seed=20240611):
    """``count`` instances with 1-3 atoms in [0, 1.5] s, a in [0.5, 2].

    Half carry an energy floor above the unconstrained optimum's cycle
    length (active), half have omega = 0; every other one caps the wait.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        k = int(rng.integers(1, 4))
        d = _random_dist(rng, k)
        if mean(d) == 0 and k == 1:
            d = Dist.point_mass(0.2)
        a = float(rng.uniform(0.5, 2.0))
        cap_T = float(rng.uniform(0.2, 1.0)) if i % 2 else math.inf
        omega = 0.0
        if i % 4 >= 2:
            free = solve(d, a, 0.0, cap_T)
            cycle = mean(d) + sum(p * z for p, (_, z) in zip(d.probs, free.waits))
            omega = cycle + float(rng.uniform(0.2, 0.8))
            if math.isfinite(cap_T):
                omega = min(omega, mean(d) + 0.9 * cap_T)
        out.append(Instance(f"rand{i:02d}", d, a, omega, cap_T))
    return out


NAMED = [
    Instance("point1", Dist.point_mass(1.0), 1.0, 0.0, math.inf),
    Instance("point1_w3", Dist.point_mass(1.0), 1.0, 3.0, math.inf),
    Instance("two_point_07", Dist.from_atoms([(0.1, 0.7), (1.0, 0.3)]), 1.0, 0.0, math.inf),
    Instance("two_point_03", Dist.from_atoms([(0.1, 0.3), (1.0, 0.7)]), 1.0, 0.0, math.inf),
    Instance("three_capped", Dist.from_atoms([(0.0, 0.3), (0.5, 0.4), (1.2, 0.3)]), 1.5, 0.0, 0.4),
    Instance("three_active", Dist.from_atoms([(0.0, 0.3), (0.5, 0.4), (1.2, 0.3)]), 0.8, 1.6, math.inf),
]


def regression_instances():
    return NAMED + random_instances()
