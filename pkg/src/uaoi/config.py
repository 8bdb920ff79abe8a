"""Experiment configuration: a flat ``key = value`` text format.

Example::

    # channel / EH / packet
    d2 = 2.0
    n0_dbm_per_hz = -70
    M = 0.02
    rho = 0.01
    a = 1.0
    dist = two_point(theta=0.7, kappa=0.1, kappa_high=1.0)
    policy = optimal
    sweep_axis = M
    sweep_start = 1e-7
    sweep_stop = 2e-6
    sweep_step = 1e-7

Noise density may be given as ``n0`` (W/Hz) or ``n0_dbm_per_hz``; it is
always stored and written back in W/Hz.
"""

from __future__ import annotations

import ast
import dataclasses
import math
from dataclasses import dataclass, field

from .distribution import TransmissionTimeDistribution
from .model import ChannelModel, EhModel, UpdateSpec, compute_omega, dbm_per_hz_to_w_per_hz

SWEEP_AXES = ("waiting_time", "theta", "M", "rho")
POLICIES = ("optimal", "zero_wait", "equal_wait")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DistSpec:
    """Either explicit atoms or the two-point family (theta, kappa, kappa_high)."""

    atoms: tuple | None = None
    theta: float | None = 0.7
    kappa: float | None = 0.1
    kappa_high: float | None = None

    def build(self, theta=None):
        if self.atoms is not None:
            if theta is not None:
                raise ConfigError("theta sweep needs a two_point distribution")
            return TransmissionTimeDistribution.from_atoms(self.atoms)
        return TransmissionTimeDistribution.two_point(
            self.theta if theta is None else theta, self.kappa, self.kappa_high
        )

    def to_text(self):
        if self.atoms is not None:
            return "[" + ", ".join(f"({v!r}, {p!r})" for v, p in self.atoms) + "]"
        args = f"theta={self.theta!r}, kappa={self.kappa!r}"
        if self.kappa_high is not None:
            args += f", kappa_high={self.kappa_high!r}"
        return f"two_point({args})"

    @classmethod
    def parse(cls, text):
        try:
            node = ast.parse(text.strip(), mode="eval").body
        except SyntaxError as exc:
            raise ConfigError(f"bad distribution literal {text!r}") from exc
        if isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "two_point"):
                raise ConfigError(f"unknown distribution constructor in {text!r}")
            names = ("theta", "kappa", "kappa_high")
            kwargs = dict(zip(names, (ast.literal_eval(a) for a in node.args)))
            for kw in node.keywords:
                if kw.arg not in names:
                    raise ConfigError(f"unknown two_point argument {kw.arg!r}")
                kwargs[kw.arg] = ast.literal_eval(kw.value)
            if "theta" not in kwargs or "kappa" not in kwargs:
                raise ConfigError("two_point needs theta and kappa")
            return cls(
                atoms=None,
                theta=float(kwargs["theta"]),
                kappa=float(kwargs["kappa"]),
                kappa_high=None if kwargs.get("kappa_high") is None else float(kwargs["kappa_high"]),
            )
        try:
            atoms = ast.literal_eval(node)
            atoms = tuple((float(v), float(p)) for v, p in atoms)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad distribution literal {text!r}") from exc
        TransmissionTimeDistribution.from_atoms(atoms)
        return cls(atoms=atoms, theta=None, kappa=None, kappa_high=None)


@dataclass(frozen=True)
class ExperimentConfig:
    # channel
    lambda_rayleigh: float = 3.0
    alpha: float = 2.0
    d1: float = 1.0
    d2: float = 2.0
    P_T: float = 1.0
    # EH circuit
    M: float = 0.02
    a_eh: float = 150.0
    b: float = 0.014
    # update packet
    C: float = 8.0
    Tc: float = 1e-3
    B: float = 1e7
    n0: float = 1e-10
    rho: float = 0.01
    # U-AoI penalty exponent
    a: float = 1.0
    dist: DistSpec = field(default_factory=DistSpec)
    policy: str = "optimal"
    equal_wait_z: float = 0.0
    T: float = math.inf
    # None derives omega from the system parameters
    omega: float | None = None
    sweep_axis: str = "waiting_time"
    sweep_start: float = 0.0
    sweep_stop: float = 2.0
    sweep_step: float = 0.1
    sweep_simulate: bool = False
    equal_wait_grid_max: float = 2.0
    equal_wait_grid_step: float = 0.01
    n_cycles: int = 100000
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ConfigError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if self.sweep_axis not in SWEEP_AXES:
            raise ConfigError(f"sweep_axis must be one of {SWEEP_AXES}")
        if not self.sweep_step > 0:
            raise ConfigError("sweep_step must be > 0")
        if not self.sweep_stop >= self.sweep_start:
            raise ConfigError("sweep range must be nondecreasing")
        if self.n_cycles < 2:
            raise ConfigError("n_cycles must be >= 2")
        if not 0 < self.rho < 1:
            raise ConfigError("rho must lie in (0, 1)")

    # -- model objects ----------------------------------------------------

    def channel(self):
        return ChannelModel(self.lambda_rayleigh, self.alpha, self.d1, self.d2, self.P_T)

    def eh(self):
        return EhModel(self.M, self.a_eh, self.b)

    def update(self):
        return UpdateSpec(self.C, self.Tc, self.B, self.n0)

    def distribution(self, theta=None):
        return self.dist.build(theta)

    def energy_floor(self):
        if self.omega is not None:
            return self.omega
        return compute_omega(self.channel(), self.update(), self.eh(), self.rho)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    # -- text form --------------------------------------------------------

    def to_text(self):
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_format_value(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key, parsed = _parse_entry(key, value, lineno)
            values[key] = parsed
        return cls(**values)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())

    def with_overrides(self, pairs):
        """Apply ``key=value`` strings, as given by ``--set`` on the command line."""
        changes = {}
        for pair in pairs:
            if "=" not in pair:
                raise ConfigError(f"override {pair!r} is not key=value")
            key, value = (s.strip() for s in pair.split("=", 1))
            key, parsed = _parse_entry(key, value, 0)
            changes[key] = parsed
        return self.replace(**changes)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _parse_entry(key, value, lineno):
    where = f"line {lineno}: " if lineno else ""
    if key == "n0_dbm_per_hz":
        return "n0", dbm_per_hz_to_w_per_hz(_parse_float(value))
    kind = _FIELD_TYPES.get(key)
    if kind is None:
        raise ConfigError(f"{where}unknown key {key!r}")
    try:
        if key == "dist":
            return key, DistSpec.parse(value)
        if kind == "bool":
            if value.lower() not in ("true", "false", "1", "0"):
                raise ValueError(value)
            return key, value.lower() in ("true", "1")
        if kind == "int":
            return key, int(value)
        if kind == "str":
            return key, value
        if value.lower() == "none":
            if "None" not in kind:
                raise ValueError(value)
            return key, None
        if kind.startswith("str"):
            return key, value
        return key, _parse_float(value)
    except ValueError as exc:
        raise ConfigError(f"{where}bad value {value!r} for {key}") from exc


def _parse_float(value):
    v = value.strip().lower()
    if v in ("inf", "+inf", "infinity"):
        return math.inf
    return float(v)


def _format_value(v):
    if isinstance(v, DistSpec):
        return v.to_text()
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)
