"""Renewal-process Monte Carlo of the update timeline.

Update ``i`` is generated at ``S_i`` and delivered at ``D_i = S_i + Y_i``;
the next one is generated at ``S_{i+1} = D_i + Z_i`` with ``Z_i = policy(Y_i)``.
The first update is generated at ``S = 0``. Transmission times are drawn by
inverse-CDF sampling from uniforms produced by numpy's PCG64 generator, so a
given ``(policy, d, n, seed)`` always yields the same trajectory.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .model import PenaltySpec, beta, trapezoid_area
from .solver import evaluate_policy_uaoi

N_BATCHES = 30


@dataclass(frozen=True)
class Trajectory:
    S: np.ndarray
    D: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    seed: int | None = None

    @property
    def n(self):
        return len(self.Y)

    @property
    def cycles(self):
        return list(zip(self.S.tolist(), self.D.tolist(), self.Y.tolist(), self.Z.tolist()))

    @classmethod
    def from_samples(cls, Y, Z, seed=None):
        """Lay out the timeline for given transmission times and waits."""
        Y = np.asarray(Y, dtype=float)
        Z = np.asarray(Z, dtype=float)
        if Y.shape != Z.shape or Y.ndim != 1:
            raise ValueError("Y and Z must be 1-D arrays of equal length")
        steps = np.empty(2 * len(Y))
        steps[0::2] = Y
        steps[1::2] = Z
        # cumsum accumulates left to right, so D_i = S_i + Y_i and
        # S_{i+1} = D_i + Z_i hold bit-for-bit.
        acc = np.cumsum(steps)
        D = acc[0::2]
        S = np.concatenate(([0.0], acc[1::2][:-1]))
        return cls(S=S, D=D, Y=Y, Z=Z, seed=seed)

    def to_csv(self, path=None):
        """Write ``i,S,D,Y,Z`` rows with 12 significant digits."""
        buf = io.StringIO(newline="")
        buf.write("i,S,D,Y,Z\n")
        for i, row in enumerate(zip(self.S, self.D, self.Y, self.Z)):
            buf.write(f"{i}," + ",".join(f"{v:.12g}" for v in row) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


@dataclass(frozen=True)
class Metrics:
    avg_uaoi: float
    avg_aoi: float
    total_time: float
    harvested_energy: float
    sum_beta: float
    sum_Q: float


def sample_transmission_times(d, n, rng):
    u = rng.random(n)
    cdf = np.cumsum(d.p)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, u, side="right")
    return d.y[np.minimum(idx, len(d) - 1)]


def simulate(policy, d, n, seed):
    """Generate ``n`` delivered updates under ``policy``."""
    if n < 2:
        raise ValueError("need at least two updates")
    rng = np.random.Generator(np.random.PCG64(seed))
    Y = sample_transmission_times(d, n, rng)
    Z = np.asarray(policy.evaluate(Y), dtype=float)
    return Trajectory.from_samples(Y, Z, seed=seed)


def _pair_terms(t, a):
    y, z, y_next = t.Y[:-1], t.Z[:-1], t.Y[1:]
    return beta(y, z, y_next, PenaltySpec(a)), trapezoid_area(y, z, y_next), z + y_next


def measure(t, a, M=1.0):
    """Time-average AoI and U-AoI over ``[D_first, D_last]``.

    ``M`` is the saturated EH output power used for the energy tally.
    """
    if t.n < 2:
        raise ValueError("need at least two updates")
    b, q, span = _pair_terms(t, a)
    total = float(t.D[-1] - t.D[0])
    if total <= 0:
        raise ZeroDivisionError("trajectory spans zero time")
    sum_beta = math.fsum(b)
    sum_q = math.fsum(q)
    return Metrics(
        avg_uaoi=sum_beta / total,
        avg_aoi=sum_q / total,
        total_time=total,
        harvested_energy=math.fsum(M * span),
        sum_beta=sum_beta,
        sum_Q=sum_q,
    )


def batch_means(t, a, n_batches=N_BATCHES):
    """Ratio estimate per contiguous batch of delivery intervals."""
    b, _, span = _pair_terms(t, a)
    edges = np.linspace(0, len(b), n_batches + 1).astype(int)
    return np.array(
        [b[lo:hi].sum() / span[lo:hi].sum() for lo, hi in zip(edges[:-1], edges[1:])]
    )


def empirical_vs_analytic(policy, d, a, n, seed):
    """Return ``(empirical, analytic, stderr)`` for the long-run average U-AoI.

    The standard error comes from 30 batch means, since neighbouring
    delivery intervals share a transmission time.
    """
    t = simulate(policy, d, n, seed)
    empirical = measure(t, a).avg_uaoi
    analytic = evaluate_policy_uaoi(policy, d, a)
    bm = batch_means(t, a)
    stderr = float(np.std(bm, ddof=1) / math.sqrt(len(bm)))
    return empirical, analytic, stderr
