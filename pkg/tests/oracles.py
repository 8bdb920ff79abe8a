"""Independent reference computations used by the tests.

Nothing here calls the solver or the factored expectations: beta is
recomputed by quadrature, policies are scored by the explicit double sum
over (Y, Y') atom pairs, and the optimum is located by exhaustive grid search.
"""

import math

import numpy as np
from scipy import integrate

from uaoi.model import PenaltySpec, beta


def quad_beta(y, z, y_next, a):
    """int_y^{y+z+y_next} (e^{a tau} - 1) dtau by adaptive quadrature."""
    val, _ = integrate.quad(
        lambda t: math.expm1(a * t), y, y + z + y_next, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return val


def omega_arithmetic(lam, C, Tc, B, n0, d2, alpha, rho, M):
    """Energy floor written out step by step with plain floats."""
    rate = C / (Tc * B)
    need = (2.0**rate - 1.0) * d2**alpha * Tc * B * n0
    return -lam * need / (math.log(1.0 - rho) * M)


def double_sum_ratio(values, probs, waits, a):
    """sum_i sum_j p_i p_j beta(y_i, z_i, y_j) / (E[Y] + E[Z])."""
    p = PenaltySpec(a)
    num = 0.0
    for yi, pi, zi in zip(values, probs, waits):
        for yj, pj in zip(values, probs):
            num += pi * pj * float(beta(yi, zi, yj, p))
    den = sum(pi * (yi + zi) for yi, pi, zi in zip(values, probs, waits))
    return num / den


def _atom_numerator(yi, values, probs, grid, a):
    # sum_j p_j beta(y_i, z, y_j) for every z on the grid
    p = PenaltySpec(a)
    g = np.zeros_like(grid)
    for yj, pj in zip(values, probs):
        g += pj * beta(np.full_like(grid, yi), grid, np.full_like(grid, yj), p)
    return g


def _grid_eval(values, probs, grids, a, omega):
    k = len(values)
    mean_y = float(np.dot(probs, values))
    num = 0.0
    den = mean_y
    for i in range(k):
        shape = [1] * k
        shape[i] = -1
        g = _atom_numerator(values[i], values, probs, grids[i], a)
        num = num + probs[i] * g.reshape(shape)
        den = den + probs[i] * grids[i].reshape(shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where((den >= omega) & (den > 0), num / den, np.inf)
    return ratio


def brute_force(values, probs, a, omega=0.0, cap_T=math.inf, z_max=None, final_step=1e-5):
    """Exhaustive per-atom grid search for the minimum U-AoI ratio.

    A coarse grid over [0, z_max]^k is refined around the incumbent until the
    step reaches ``final_step``. The ratio is quasiconvex (convex over affine)
    on a convex feasible set, so local refinement keeps the global minimum.

    Returns ``(best_ratio, best_waits)``.
    """
    values = np.asarray(values, dtype=float)
    probs = np.asarray(probs, dtype=float)
    k = len(values)
    if z_max is None:
        z_max = max(3.0, 1.5 * omega)
    hi = min(cap_T, z_max)
    n0 = {1: 3001, 2: 401, 3: 121}[k]
    grids = [np.linspace(0.0, hi, n0) for _ in range(k)]
    step = hi / (n0 - 1)
    while True:
        ratio = _grid_eval(values, probs, grids, a, omega)
        idx = np.unravel_index(np.argmin(ratio), ratio.shape)
        best = [float(grids[i][idx[i]]) for i in range(k)]
        best_val = float(ratio[idx])
        if step <= final_step:
            break
        new_step = step / 10.0
        grids = []
        for z in best:
            lo = max(0.0, z - 2 * step)
            top = min(hi, z + 2 * step)
            count = int(round((top - lo) / new_step)) + 1
            grids.append(np.linspace(lo, top, count))
        step = new_step
    if z_max < cap_T:
        assert all(z < hi - 1e-9 for z in best), "grid search hit z_max; widen the box"
    return best_val, best


def age_curve_integral(t, a):
    """int_{D_first}^{D_last} g(t - U(t)) dt straight from the timeline.

    U(t) is the generation time of the freshest delivered update, found per
    piece by scanning deliveries; each piece is integrated by quadrature.
    """
    S, D = np.asarray(t.S), np.asarray(t.D)
    total = 0.0
    for k in range(len(D) - 1):
        lo, hi = D[k], D[k + 1]
        delivered = D <= lo
        u = S[delivered].max()
        val, _ = integrate.quad(
            lambda x: math.expm1(a * (x - u)), lo, hi, epsabs=0.0, epsrel=1e-13, limit=200
        )
        total += val
    return total
