"""Solve / simulate / sweep / compare workflows driven by an ExperimentConfig."""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import distribution as dist
from .simulator import empirical_vs_analytic, measure, simulate
from .solver import WaitingPolicy, evaluate_policy_uaoi, solve

SWEEP_COLUMNS = (
    "x",
    "uaoi_optimal",
    "uaoi_zero_wait",
    "uaoi_equal_wait",
    "eta_star",
    "constraint_active",
)
SIM_COLUMNS = ("uaoi_optimal_sim", "uaoi_optimal_stderr")


def fmt(v):
    """CSV cell: 12 significant digits, booleans as 0/1, None as empty."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.12g}"


def _feasible(d, z, omega, cap_T):
    return z <= cap_T and dist.mean(d) + z >= omega


def best_equal_wait(d, a, omega, cap_T, z_max=2.0, step=0.01):
    """Best constant wait over the grid {0, step, ..., z_max} plus the energy-floor wait.

    Returns ``(z, uaoi)`` or ``(None, None)`` when no candidate is feasible.
    """
    count = int(math.floor(z_max / step + 1e-9)) + 1
    grid = [i * step for i in range(count)]
    z_floor = omega - dist.mean(d)
    if z_floor > 0:
        grid.append(z_floor)
    best = (None, None)
    for z in grid:
        if not _feasible(d, z, omega, cap_T):
            continue
        value = evaluate_policy_uaoi(WaitingPolicy.equal_wait(z, cap_T), d, a)
        if best[1] is None or value < best[1]:
            best = (z, value)
    return best


def zero_wait_uaoi(d, a, omega):
    if dist.mean(d) < omega or dist.mean(d) == 0:
        return None
    return evaluate_policy_uaoi(WaitingPolicy.zero_wait(), d, a)


def policy_from_config(cfg, d=None, omega=None):
    """The waiting policy named by ``cfg.policy`` (solving if it is ``optimal``)."""
    d = cfg.distribution() if d is None else d
    if cfg.policy == "zero_wait":
        return WaitingPolicy.zero_wait(cfg.T), None
    if cfg.policy == "equal_wait":
        return WaitingPolicy.equal_wait(cfg.equal_wait_z, cfg.T), None
    omega = cfg.energy_floor() if omega is None else omega
    result = solve(d, cfg.a, omega, cfg.T)
    return result.policy, result


# -- solve -----------------------------------------------------------------


def run_solve(cfg):
    """Solve the configured instance; returns ``(SolverResult, report_text)``."""
    d = cfg.distribution()
    omega = cfg.energy_floor()
    result = solve(d, cfg.a, omega, cfg.T)
    lines = [
        f"distribution      {d}",
        f"a                 {cfg.a!r}",
        f"omega             {omega:.12g} s",
        f"T                 {cfg.T!r}",
        f"E[Y]              {dist.mean(d):.12g} s",
        f"gamma_star        {result.gamma_star:.12g}",
        f"eta_star          {result.eta_star:.12g}",
        f"constraint_active {result.constraint_active}",
        f"outer_iters       {result.outer_iters}",
        "waits:",
    ]
    lines += [f"  Z({y:.12g}) = {z:.12g}" for y, z in result.waits]
    if result.degenerate:
        lines.append("note: degenerate instance (E[Y] = 0, omega = 0); gamma_star = 0 by convention")
    if cfg.out:
        payload = result.as_dict()
        payload.update(omega=omega, a=cfg.a, distribution=[list(x) for x in d.atoms])
        with open(cfg.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result, "\n".join(lines) + "\n"


# -- simulate --------------------------------------------------------------


def run_simulate(cfg):
    """Simulate the configured policy; returns ``(Trajectory, Metrics, report_text)``."""
    d = cfg.distribution()
    policy, _ = policy_from_config(cfg, d)
    traj = simulate(policy, d, cfg.n_cycles, cfg.seed)
    metrics = measure(traj, cfg.a, M=cfg.M)
    empirical, analytic, stderr = empirical_vs_analytic(policy, d, cfg.a, cfg.n_cycles, cfg.seed)
    if cfg.out:
        traj.to_csv(cfg.out)
    report = (
        f"policy          {policy.kind}\n"
        f"cycles          {traj.n}\n"
        f"seed            {cfg.seed}\n"
        f"avg_uaoi        {metrics.avg_uaoi:.12g}\n"
        f"avg_aoi         {metrics.avg_aoi:.12g}\n"
        f"total_time      {metrics.total_time:.12g} s\n"
        f"harvested       {metrics.harvested_energy:.12g} J\n"
        f"analytic_uaoi   {analytic:.12g}\n"
        f"stderr          {stderr:.6g}\n"
    )
    return traj, metrics, report


# -- sweep -----------------------------------------------------------------


def sweep_points(cfg, points=None):
    if points is not None:
        if points < 1:
            raise ValueError("points must be >= 1")
        if points == 1:
            return [cfg.sweep_start]
        return [float(x) for x in np.linspace(cfg.sweep_start, cfg.sweep_stop, points)]
    count = int(math.floor((cfg.sweep_stop - cfg.sweep_start) / cfg.sweep_step + 1e-9)) + 1
    return [cfg.sweep_start + i * cfg.sweep_step for i in range(count)]


def _point_config(cfg, x):
    if cfg.sweep_axis == "M":
        return cfg.replace(M=x), None
    if cfg.sweep_axis == "rho":
        return cfg.replace(rho=x), None
    if cfg.sweep_axis == "theta":
        return cfg, x
    return cfg, None


def sweep_point(cfg, index, x):
    """Evaluate one sweep point; returns a dict keyed by CSV column."""
    row = {"x": x}
    try:
        pcfg, theta = _point_config(cfg, x)
        d = pcfg.distribution(theta)
        omega = pcfg.energy_floor()
        result = solve(d, pcfg.a, omega, pcfg.T)
        row["uaoi_optimal"] = result.gamma_star
        row["eta_star"] = result.eta_star
        row["constraint_active"] = result.constraint_active
        row["uaoi_zero_wait"] = zero_wait_uaoi(d, pcfg.a, omega)
        if cfg.sweep_axis == "waiting_time":
            ok = _feasible(d, x, omega, pcfg.T)
            row["uaoi_equal_wait"] = (
                evaluate_policy_uaoi(WaitingPolicy.equal_wait(x, pcfg.T), d, pcfg.a) if ok else None
            )
        else:
            row["uaoi_equal_wait"] = best_equal_wait(
                d, pcfg.a, omega, pcfg.T, pcfg.equal_wait_grid_max, pcfg.equal_wait_grid_step
            )[1]
        if cfg.sweep_simulate:
            emp, _, se = empirical_vs_analytic(result.policy, d, pcfg.a, pcfg.n_cycles, cfg.seed + index)
            row["uaoi_optimal_sim"] = emp
            row["uaoi_optimal_stderr"] = se
        for k, v in row.items():
            if isinstance(v, float) and not math.isfinite(v):
                raise FloatingPointError(f"non-finite {k}")
    except Exception as exc:  # noqa: BLE001  one bad point must not stop the sweep
        row = {"x": x, "error": f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")}
    return row


def _sweep_task(args):
    return sweep_point(*args)


def run_sweep(cfg, points=None, parallel=1):
    """Run the configured sweep; returns the CSV text (rows ordered by sweep index)."""
    xs = sweep_points(cfg, points)
    tasks = [(cfg, i, x) for i, x in enumerate(xs)]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(t) for t in tasks]
    columns = SWEEP_COLUMNS + (SIM_COLUMNS if cfg.sweep_simulate else ()) + ("error",)
    buf = io.StringIO(newline="")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(row.get(c, "") if c == "error" else fmt(row.get(c)) for c in columns) + "\n")
    return buf.getvalue()


def parse_sweep_csv(text):
    """Read sweep CSV back into a list of dicts (empty cells become None)."""
    lines = text.strip("\n").split("\n")
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        cells = line.split(",")
        row = {}
        for k, v in zip(header, cells):
            if k == "error":
                row[k] = v or None
            else:
                row[k] = float(v) if v else None
        out.append(row)
    return out


def gnuplot_files(csv_text, stem):
    """Turn sweep CSV into a whitespace data file and a plotting script."""
    rows = parse_sweep_csv(csv_text)
    cols = ("x", "uaoi_optimal", "uaoi_zero_wait", "uaoi_equal_wait")
    data = ["# " + " ".join(cols)]
    for row in rows:
        data.append(" ".join("NaN" if row.get(c) is None else fmt(row[c]) for c in cols))
    script = (
        "set datafile missing 'NaN'\n"
        "set xlabel 'x'\nset ylabel 'average U-AoI'\n"
        f"plot '{stem}.dat' using 1:2 with linespoints title 'optimal', \\\n"
        f"     '{stem}.dat' using 1:3 with linespoints title 'zero wait', \\\n"
        f"     '{stem}.dat' using 1:4 with linespoints title 'equal wait'\n"
    )
    return "\n".join(data) + "\n", script


# -- compare ---------------------------------------------------------------


@dataclass(frozen=True)
class CompareRow:
    name: str
    z: float | None
    analytic: float | None
    simulated: float | None
    stderr: float | None
    feasible: bool


def run_compare(cfg):
    """Analytic and simulated U-AoI of the optimal, zero-wait and best equal-wait policies.

    Returns ``(rows, dominance_ok, report_text)``. ``dominance_ok`` is False
    if a feasible baseline beats the optimal policy by more than 1e-9.
    """
    d = cfg.distribution()
    omega = cfg.energy_floor()
    result = solve(d, cfg.a, omega, cfg.T)
    z_best, _ = best_equal_wait(d, cfg.a, omega, cfg.T, cfg.equal_wait_grid_max, cfg.equal_wait_grid_step)
    candidates = [
        ("optimal", None, result.policy, True),
        ("zero_wait", 0.0, WaitingPolicy.zero_wait(cfg.T), _feasible(d, 0.0, omega, cfg.T)),
    ]
    if z_best is not None:
        candidates.append(("equal_wait", z_best, WaitingPolicy.equal_wait(z_best, cfg.T), True))
    rows = []
    for i, (name, z, policy, feasible) in enumerate(candidates):
        try:
            emp, ana, se = empirical_vs_analytic(policy, d, cfg.a, cfg.n_cycles, cfg.seed + i)
        except ZeroDivisionError:
            emp = ana = se = None
        rows.append(CompareRow(name, z, ana, emp, se, feasible))
    opt = rows[0].analytic
    dominance_ok = all(
        r.analytic is None or opt <= r.analytic + 1e-9 for r in rows[1:] if r.feasible
    )
    lines = [
        f"distribution {d}  a={cfg.a!r}  omega={omega:.6g}  T={cfg.T!r}",
        f"{'policy':<12}{'z':>10} {'analytic':>18} {'simulated':>18} {'stderr':>12}  feasible",
    ]
    for r in rows:
        se = "" if r.stderr is None else f"{r.stderr:.4g}"
        lines.append(
            f"{r.name:<12}{fmt(r.z) or '-':>10} {fmt(r.analytic):>18} {fmt(r.simulated):>18}"
            f" {se:>12}  {'yes' if r.feasible else 'no'}"
        )
    lines.append(f"optimal dominates feasible baselines: {'yes' if dominance_ok else 'NO'}")
    return rows, dominance_ok, "\n".join(lines) + "\n"
