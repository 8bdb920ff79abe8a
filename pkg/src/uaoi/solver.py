"""Optimal waiting policy: Dinkelbach iteration over the U-AoI ratio.

The outer loop updates the ratio estimate ``gamma`` until the subtractive
objective ``F(gamma) = E[beta] - gamma E[Y' + Z]`` vanishes. For each
``gamma`` the inner problem has a closed-form solution in terms of a single
Lagrange multiplier ``eta`` for the averaged energy constraint
``E[Y + Z] >= omega``; ``eta`` is found by bisection.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import distribution as dist
from .errors import (
    DegenerateDenominatorError,
    InfeasibleError,
    IterationLimitError,
    NonBracketingError,
)

log = logging.getLogger(__name__)

INF = math.inf

OPTIMAL = "optimal_parametric"
ZERO_WAIT = "zero_wait"
EQUAL_WAIT = "equal_wait"


@dataclass(frozen=True)
class WaitingPolicy:
    """Stationary deterministic rule y -> Z in [0, cap_T].

    Build with :meth:`zero_wait`, :meth:`equal_wait` or :meth:`optimal`
    rather than directly.
    """

    kind: str
    cap_T: float = INF
    z: float = 0.0
    gamma: float = 0.0
    eta: float = 0.0
    a: float = 1.0
    exp_moment_next: float = 1.0

    def __post_init__(self):
        if self.kind not in (OPTIMAL, ZERO_WAIT, EQUAL_WAIT):
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if not self.cap_T >= 0:
            raise ValueError("cap_T must be >= 0")
        if self.kind == EQUAL_WAIT and not 0 <= self.z <= self.cap_T:
            raise ValueError(f"equal wait {self.z} outside [0, {self.cap_T}]")
        if self.kind == OPTIMAL and self.eta < 0:
            raise ValueError("eta must be >= 0")

    @classmethod
    def zero_wait(cls, cap_T=INF):
        return cls(ZERO_WAIT, cap_T=cap_T)

    @classmethod
    def equal_wait(cls, z, cap_T=INF):
        return cls(EQUAL_WAIT, cap_T=cap_T, z=float(z))

    @classmethod
    def optimal(cls, gamma, eta, a, exp_moment_next, cap_T=INF):
        return cls(
            OPTIMAL,
            cap_T=cap_T,
            gamma=float(gamma),
            eta=float(eta),
            a=float(a),
            exp_moment_next=float(exp_moment_next),
        )

    def evaluate(self, y):
        """Wait after a transmission that took ``y`` seconds (scalar or array)."""
        y = np.asarray(y, dtype=float)
        if self.kind == ZERO_WAIT:
            return np.zeros_like(y)[()]
        if self.kind == EQUAL_WAIT:
            return np.full_like(y, self.z)[()]
        return closed_form_wait(y, self.gamma, self.eta, self.a, self.exp_moment_next, self.cap_T)

    __call__ = evaluate

    def waits_on(self, d):
        return np.asarray(self.evaluate(d.y), dtype=float)


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-8
    eta_lower: float = 0.0
    eta_upper: float = 1e6
    max_outer_iters: int = 100
    max_inner_iters: int = 200
    max_bracket_doublings: int = 10

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if not self.eta_lower < self.eta_upper:
            raise ValueError("eta_lower must be < eta_upper")
        if self.max_outer_iters < 1 or self.max_inner_iters < 1:
            raise ValueError("iteration caps must be positive")


@dataclass(frozen=True)
class SolverResult:
    policy: WaitingPolicy
    gamma_star: float
    eta_star: float
    outer_iters: int
    constraint_active: bool
    waits: tuple
    degenerate: bool = False
    gamma_history: tuple = field(default=(), repr=False)

    def as_dict(self):
        return {
            "gamma_star": self.gamma_star,
            "eta_star": self.eta_star,
            "outer_iters": self.outer_iters,
            "constraint_active": self.constraint_active,
            "degenerate": self.degenerate,
            "waits": [{"y": y, "z": z} for y, z in self.waits],
            "cap_T": None if math.isinf(self.policy.cap_T) else self.policy.cap_T,
            "gamma_history": list(self.gamma_history),
        }


def closed_form_wait(y, gamma, eta, a, exp_moment_Yp, cap_T=INF):
    """KKT wait ``[ln((gamma + eta + 1) / (E[e^{aY'}] e^{a y})) / a]`` clamped to [0, T].

    Nonincreasing in ``y``; nondecreasing in ``gamma`` and ``eta``.
    """
    if not a > 0:
        raise ValueError(f"a must be > 0, got {a}")
    if not exp_moment_Yp >= 1:
        raise ValueError(f"E[e^(aY')] must be >= 1, got {exp_moment_Yp}")
    arg = gamma + eta + 1.0
    if not arg > 0:
        raise ValueError(f"gamma + eta + 1 = {arg} gives a nonpositive log argument")
    y = np.asarray(y, dtype=float)
    raw = (math.log(arg) - math.log(exp_moment_Yp)) / a - y
    return np.clip(raw, 0.0, cap_T)[()]


def evaluate_F(gamma, policy, d, a):
    """Subtractive objective E[beta(Y, Z, Y')] - gamma E[Y' + Z] for a fixed policy."""
    waits = policy.waits_on(d)
    return dist.expected_beta(d, waits, a) - gamma * dist.expected_cycle(d, waits)


def evaluate_policy_uaoi(policy, d, a):
    """Long-run average U-AoI E[beta] / E[Y' + Z] of any stationary policy."""
    waits = policy.waits_on(d)
    den = dist.expected_cycle(d, waits)
    if den <= 0:
        raise DegenerateDenominatorError("E[Y' + Z] = 0 for this policy")
    return dist.expected_beta(d, waits, a) / den


def _check_feasible(d, omega, cap_T):
    mean_y = dist.mean(d)
    if mean_y + cap_T < omega:
        raise InfeasibleError(mean_y, cap_T, omega)
    return mean_y


def bisect_eta(gamma, d, a, omega, cfg=SolverConfig(), cap_T=INF):
    """Smallest multiplier whose closed-form policy meets E[Y + Z] >= omega.

    Returns ``(eta, policy)``. If the constraint already holds at
    ``eta = eta_lower`` that value is returned unchanged (slack constraint).
    """
    mean_y = _check_feasible(d, omega, cap_T)
    m = dist.exp_moment(d, a)

    def make(eta):
        return WaitingPolicy.optimal(gamma, eta, a, m, cap_T)

    def cycle(policy):
        return mean_y + float(np.dot(d.p, policy.waits_on(d)))

    lo, hi = cfg.eta_lower, cfg.eta_upper
    policy = make(lo)
    if cycle(policy) >= omega:
        return lo, policy

    for _ in range(cfg.max_bracket_doublings + 1):
        if cycle(make(hi)) >= omega:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NonBracketingError(
            f"no feasible multiplier up to eta = {hi / 2.0:.6g}; raise eta_upper"
        )

    c_lo = cycle(make(lo))
    for _ in range(cfg.max_inner_iters):
        if hi - lo < cfg.epsilon:
            break
        mid = 0.5 * (lo + hi)
        c_mid = cycle(make(mid))
        # E[Y + Z] must be nondecreasing in eta for bisection to be valid.
        assert c_mid >= c_lo, "cycle length decreased in eta"
        if c_mid < omega:
            lo, c_lo = mid, c_mid
        else:
            hi = mid
    else:
        raise IterationLimitError("eta bisection did not reach tolerance", best=(hi, make(hi)))
    return hi, make(hi)


def inner_value(gamma, d, a, omega=0.0, cap_T=INF, cfg=SolverConfig()):
    """min over feasible policies of F(gamma), via the closed-form inner solve."""
    _, policy = bisect_eta(gamma, d, a, omega, cfg, cap_T)
    return evaluate_F(gamma, policy, d, a)


def solve(d, a, omega=0.0, cap_T=INF, cfg=SolverConfig()):
    """Minimize the long-run average U-AoI over waiting policies.

    Starts from ``gamma = 0`` (where ``F(0) = E[beta] >= 0``) and applies
    ``gamma <- E[beta(Z_q)] / E[Y' + Z_q]`` until ``|F(gamma_q)| <= epsilon``.

    Raises:
        InfeasibleError: when ``E[Y] + cap_T < omega``.
        IterationLimitError: when ``max_outer_iters`` is exhausted.
    """
    _check_feasible(d, omega, cap_T)
    if omega > 0:
        # A floor the unconstrained optimum already meets cannot change it; returning
        # that solution keeps gamma_star bit-identical across the whole slack range.
        free = _dinkelbach(d, a, 0.0, cap_T, cfg)
        if not free.degenerate and dist.expected_cycle(d, free.policy.waits_on(d)) >= omega:
            return free
    return _dinkelbach(d, a, omega, cap_T, cfg)


def _dinkelbach(d, a, omega, cap_T, cfg):
    gamma = 0.0
    history = [gamma]
    best = None
    for q in range(1, cfg.max_outer_iters + 1):
        eta, policy = bisect_eta(gamma, d, a, omega, cfg, cap_T)
        waits = policy.waits_on(d)
        num = dist.expected_beta(d, waits, a)
        den = dist.expected_cycle(d, waits)
        if den <= 0:
            if q == 1 and omega <= 0:
                # Y = 0 a.s. with no energy floor: 0/0, take the limit value 0.
                log.warning("degenerate instance: E[Y] = 0 and omega = 0")
                return _result(policy, 0.0, eta, q, d, history, degenerate=True)
            raise DegenerateDenominatorError("E[Y' + Z] = 0 at the solved policy")
        F = num - gamma * den
        ratio = num / den
        best = _result(policy, ratio, eta, q, d, history)
        log.debug("outer %d: gamma=%.15g F=%.3e eta=%.6g", q, gamma, F, eta)
        if abs(F) <= cfg.epsilon or (q > 1 and ratio >= gamma):
            # Ratio of the returned policy; within rounding of gamma at the fixed point.
            return best
        gamma = ratio
        history.append(gamma)
    raise IterationLimitError(
        f"Dinkelbach loop did not converge in {cfg.max_outer_iters} iterations", best=best
    )


def _result(policy, gamma_star, eta, q, d, history, degenerate=False):
    waits = policy.waits_on(d)
    return SolverResult(
        policy=policy,
        gamma_star=float(gamma_star),
        eta_star=float(eta),
        outer_iters=q,
        constraint_active=eta > 0,
        waits=tuple(zip(d.values, (float(z) for z in waits))),
        degenerate=degenerate,
        gamma_history=tuple(history),
    )
