"""Discrete law of the i.i.d. transmission times and the expectations built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import MAX_EXPONENT, expm1_minus_x

PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class TransmissionTimeDistribution:
    """Finite distribution of the transmission time Y.

    ``values`` are strictly increasing, nonnegative seconds and ``probs`` are
    positive weights summing to one within 1e-12.
    """

    values: tuple
    probs: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        probs = tuple(float(p) for p in self.probs)
        if len(values) == 0:
            raise ValueError("distribution needs at least one atom")
        if len(values) != len(probs):
            raise ValueError("values and probs differ in length")
        if any(not math.isfinite(v) or v < 0 for v in values):
            raise ValueError("atom values must be finite and >= 0")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("atom values must be strictly increasing")
        if any(not p > 0 for p in probs):
            raise ValueError("atom probabilities must be > 0")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_atoms(cls, atoms):
        """Build from ``[(value, prob), ...]``; atoms are sorted by value."""
        atoms = sorted((float(v), float(p)) for v, p in atoms)
        return cls(tuple(v for v, _ in atoms), tuple(p for _, p in atoms))

    @classmethod
    def point_mass(cls, value):
        return cls((value,), (1.0,))

    @classmethod
    def two_point(cls, theta, kappa, kappa_high=None):
        """Y = kappa w.p. theta, else kappa_high, so Prob{Y <= kappa} = theta.

        ``kappa_high`` defaults to ``10 * kappa``.
        """
        if not 0 <= theta <= 1:
            raise ValueError(f"theta must lie in [0, 1], got {theta}")
        if kappa_high is None:
            kappa_high = 10.0 * kappa
        if not kappa_high > kappa:
            raise ValueError("kappa_high must exceed kappa")
        atoms = [(kappa, theta), (kappa_high, 1.0 - theta)]
        return cls.from_atoms([(v, p) for v, p in atoms if p > 0])

    @property
    def atoms(self):
        return list(zip(self.values, self.probs))

    @property
    def y(self):
        return np.array(self.values)

    @property
    def p(self):
        return np.array(self.probs)

    def __len__(self):
        return len(self.values)

    def __str__(self):
        inner = ", ".join(f"({v!r}, {p!r})" for v, p in self.atoms)
        return f"[{inner}]"


def mean(d):
    return math.fsum(p * y for y, p in d.atoms)


def exp_moment(d, a):
    """E[e^{aY}]."""
    if not a > 0:
        raise ValueError(f"a must be > 0, got {a}")
    if a * d.values[-1] > MAX_EXPONENT:
        raise OverflowError(f"a * max(Y) exceeds {MAX_EXPONENT}")
    return float(np.dot(d.p, np.exp(a * d.y)))


def expect_policy(d, f):
    """E[f(Y)] for any callable defined on the atom values."""
    return math.fsum(p * f(y) for y, p in d.atoms)


def expected_beta(d, waits, a):
    """E[beta(Y, Z(Y), Y')] with Y' an independent copy of Y.

    ``waits`` holds Z at each atom, aligned with ``d.values``. Independence
    factors the double sum into
    ``(E[e^{a(Y+Z)}] E[e^{aY'}] - E[e^{aY}]) / a - E[Z] - E[Y']``.
    With ``E[e^{aY'}] = 1 + a mu + r``, ``r = E[e^{aY'} - 1 - aY']``, each
    atom contributes a sum of nonnegative terms, so nothing cancels.
    """
    y = d.y
    p = d.p
    z = np.asarray(waits, dtype=float)
    if np.any(a * (y + z) + a * y[-1] > MAX_EXPONENT):
        raise OverflowError(f"a * (y + z + y') exceeds {MAX_EXPONENT}")
    mu = mean(d)
    r = float(np.dot(p, expm1_minus_x(a * y)))
    grow = np.exp(a * (y + z))
    per_atom = (
        np.exp(a * y) * expm1_minus_x(a * z) / a
        + z * np.expm1(a * y)
        + mu * np.expm1(a * (y + z))
        + grow * r / a
    )
    return float(np.dot(p, per_atom))


def expected_cycle(d, waits):
    """E[Y' + Z(Y)], identical to E[Y + Z(Y)] under i.i.d. transmission times."""
    return mean(d) + float(np.dot(d.p, np.asarray(waits, dtype=float)))
