"""Physical model and age-of-information cost formulas.

All quantities are SI: watts, seconds, joules, hertz. The urgency exponent
of the penalty and the steepness of the EH circuit are kept as separate
fields (``a_penalty`` and ``a_eh``) even though both are usually written
``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# e**x overflows a double just above 709.
MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class PenaltySpec:
    """Urgency penalty g(delta) = exp(a_penalty * delta) - 1."""

    a_penalty: float

    def __post_init__(self):
        if not self.a_penalty > 0:
            raise ValueError(f"a_penalty must be > 0, got {self.a_penalty}")


@dataclass(frozen=True)
class EhModel:
    """Sigmoid (non-linear) energy-harvesting circuit.

    Attributes:
        M: maximum output DC power in watts (saturation level).
        a_eh: circuit steepness, 1/watts.
        b: circuit sensitivity threshold, watts.
    """

    M: float = 0.02
    a_eh: float = 150.0
    b: float = 0.014

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError(f"M must be > 0, got {self.M}")
        if not self.a_eh > 0:
            raise ValueError(f"a_eh must be > 0, got {self.a_eh}")
        if not self.b >= 0:
            raise ValueError(f"b must be >= 0, got {self.b}")


@dataclass(frozen=True)
class ChannelModel:
    lambda_rayleigh: float = 3.0
    alpha: float = 2.0
    d1: float = 1.0
    d2: float = 2.0
    P_T: float = 1.0

    def __post_init__(self):
        if not self.lambda_rayleigh > 0:
            raise ValueError("lambda_rayleigh must be > 0")
        if not self.alpha >= 0:
            raise ValueError("alpha must be >= 0")
        if not (self.d1 > 0 and self.d2 > 0):
            raise ValueError("distances d1, d2 must be > 0")
        if not self.P_T >= 0:
            raise ValueError("P_T must be >= 0")


@dataclass(frozen=True)
class UpdateSpec:
    """Status-update packet and link parameters.

    Attributes:
        C: update size in bits.
        Tc: transmit block length in seconds.
        B: bandwidth in hertz.
        n0: noise power spectral density in W/Hz.
    """

    C: float = 8.0
    Tc: float = 1e-3
    B: float = 1e7
    n0: float = 1e-10

    def __post_init__(self):
        for name in ("C", "Tc", "B", "n0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class EnergyConstraintSpec:
    """EH outage probability and the energy floor on E[Y + Z] it implies."""

    rho: float
    omega: float

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")

    @classmethod
    def from_system(cls, ch, u, eh, rho):
        return cls(rho=rho, omega=compute_omega(ch, u, eh, rho))


def dbm_per_hz_to_w_per_hz(value_dbm):
    """Convert a noise PSD in dBm/Hz to W/Hz (-70 dBm/Hz -> 1e-10 W/Hz)."""
    return 10.0 ** (value_dbm / 10.0) * 1e-3


def _check_nonneg(**values):
    for name, v in values.items():
        if np.any(np.asarray(v) < 0):
            raise ValueError(f"{name} must be >= 0")


def penalty(delta, p):
    """U-AoI penalty g(delta) = e^{a delta} - 1 for age ``delta`` >= 0."""
    _check_nonneg(delta=delta)
    return np.expm1(p.a_penalty * np.asarray(delta, dtype=float))[()]


def expm1_minus_x(x):
    # e^x - 1 - x without cancellation near zero.
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, x, 0.0)
    series = xs * xs * (0.5 + xs * (1.0 / 6.0 + xs * (1.0 / 24.0 + xs / 120.0)))
    return np.where(small, series, np.expm1(x) - x)


def beta(y, z, y_next, p):
    """Integral of the penalty over one delivery interval.

    Equals ``int_y^{y+z+y_next} (e^{a tau} - 1) dtau``, i.e.
    ``(e^{a(y+z+y_next)} - e^{a y}) / a - z - y_next``. Evaluated as
    ``e^{a y} (expm1(a s) - a s) / a + s expm1(a y)`` with ``s = z + y_next``,
    a sum of two nonnegative terms, so it stays accurate as ``a -> 0``.

    Works elementwise on arrays.
    """
    _check_nonneg(y=y, z=z, y_next=y_next)
    a = p.a_penalty
    y = np.asarray(y, dtype=float)
    s = np.asarray(z, dtype=float) + np.asarray(y_next, dtype=float)
    if np.any(a * (y + s) > MAX_EXPONENT):
        raise OverflowError(f"a * (y + z + y_next) exceeds {MAX_EXPONENT}")
    out = np.exp(a * y) * expm1_minus_x(a * s) / a + s * np.expm1(a * y)
    return out[()]


def trapezoid_area(y, z, y_next):
    """Linear-AoI area between two deliveries: (z + 2y + y')(z + y') / 2."""
    _check_nonneg(y=y, z=z, y_next=y_next)
    y = np.asarray(y, dtype=float)
    s = np.asarray(z, dtype=float) + np.asarray(y_next, dtype=float)
    return (0.5 * (s + 2.0 * y) * s)[()]


def harvested_power(p_in, eh):
    """Output DC power of the sigmoid EH circuit for RF input ``p_in`` watts.

    Bounded in [0, M) and nondecreasing; zero at ``p_in = 0``.
    """
    _check_nonneg(p_in=p_in)
    p_in = np.asarray(p_in, dtype=float)
    k = eh.a_eh
    # M (e^{kb} - e^{-k(p-b)}) / (e^{kb} (1 + e^{-k(p-b)}))
    #   = M (1 - e^{-k p}) / (1 + e^{-k(p-b)})
    num = -np.expm1(-k * p_in)
    with np.errstate(over="ignore"):
        den = 1.0 + np.exp(-k * (p_in - eh.b))
    return (eh.M * num / den)[()]


def received_power(h1_sq, ch):
    """RF power arriving at the sensor: |h1|^2 P_T / d1^alpha."""
    _check_nonneg(h1_sq=h1_sq)
    return (np.asarray(h1_sq, dtype=float) * ch.P_T / ch.d1**ch.alpha)[()]


def _energy_numerator(u, ch):
    # (2^{C/(Tc B)} - 1) d2^alpha Tc B n0
    return math.expm1(u.C / (u.Tc * u.B) * math.log(2.0)) * ch.d2**ch.alpha * u.Tc * u.B * u.n0


def energy_per_update(h2_sq, u, ch):
    """Transmit energy needed to push C bits in one block over gain ``h2_sq``."""
    h2_sq = np.asarray(h2_sq, dtype=float)
    if np.any(h2_sq < 0):
        raise ValueError("h2_sq must be > 0")
    if np.any(h2_sq == 0):
        raise ZeroDivisionError("h2_sq = 0 requires infinite transmit energy")
    return (_energy_numerator(u, ch) / h2_sq)[()]


def compute_omega(ch, u, eh, rho):
    """Energy floor on E[Y + Z] in seconds.

    Under Rayleigh fading of the sensor-sink link and a saturated EH circuit,
    the outage requirement ``Prob{E <= mu} >= 1 - rho`` is met iff the mean
    cycle length is at least ``-lambda * E_num / (ln(1 - rho) * M)``.
    """
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return -ch.lambda_rayleigh * _energy_numerator(u, ch) / (math.log1p(-rho) * eh.M)
