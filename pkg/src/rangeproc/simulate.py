"""Seeded generators for the processes studied here, plus a bank of
deterministic test functions with known long-run slopes.

Every generator is a pure function of its :class:`ProcessSpec` and a replica
index; identical inputs give bit-identical outputs.
"""
from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import rng
from .inverse import MonotonePath
from .paths import (DomainError, IntegerSequence, Interpolation, SampledPath,
                    TimeGrid, connect_dots)

KINDS = ("standard_bm", "drifted_bm", "multidim_bm", "bessel_norm", "bessel_sde",
         "pnorm_bm", "nn_walk", "renewal", "deterministic")


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        arity = {"exponential": 1, "deterministic": 1, "uniform": 2}
        if self.family not in arity:
            raise DomainError(f"unknown inter-arrival family {self.family!r}")
        if len(self.params) != arity[self.family]:
            raise DomainError(f"{self.family} takes {arity[self.family]} parameter(s)")
        if self.family == "uniform":
            lo, hi = self.params
            if not (0 <= lo < hi):
                raise DomainError("uniform inter-arrivals need 0 <= lo < hi")
        elif not self.params[0] > 0:
            raise DomainError(f"{self.family} parameter must be positive")

    @classmethod
    def parse(cls, token: str) -> DistributionSpec:
        family, *rest = token.split(":")
        try:
            return cls(family, tuple(float(x) for x in rest))
        except ValueError:
            raise DomainError(f"bad distribution parameters in {token!r}") from None

    @property
    def token(self) -> str:
        return ":".join([self.family, *(repr(p) for p in self.params)])

    @property
    def mean(self) -> float:
        if self.family == "exponential":
            return 1.0 / self.params[0]
        if self.family == "deterministic":
            return self.params[0]
        return 0.5 * (self.params[0] + self.params[1])

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        if self.family == "exponential":
            return gen.exponential(1.0 / self.params[0], size)
        if self.family == "deterministic":
            return np.full(size, self.params[0])
        return gen.uniform(self.params[0], self.params[1], size)


@dataclass(frozen=True)
class ProcessSpec:
    """Declarative description of one process to simulate.

    Only the fields relevant to ``kind`` are read: ``eta`` for drifted_bm,
    ``dim`` for the multidimensional kinds, ``norm_p`` for pnorm_bm, ``prob``
    for nn_walk, ``inter_arrival`` for renewal, ``function``/``fparams`` for
    deterministic.
    """

    kind: str
    horizon: float
    step: float
    seed: int
    eta: float = 0.0
    dim: int = 1
    norm_p: float = 2.0
    prob: float = 0.5
    inter_arrival: DistributionSpec | None = None
    function: str | None = None
    fparams: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown process kind {self.kind!r}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise DomainError("horizon must be positive")
        if not (math.isfinite(self.step) and 0 < self.step < self.horizon):
            raise DomainError("step must satisfy 0 < step < horizon")
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2**64):
            raise DomainError("seed must be an unsigned 64-bit integer")
        if not math.isfinite(self.eta):
            raise DomainError("drift must be finite")
        if self.kind in ("multidim_bm", "bessel_norm", "bessel_sde", "pnorm_bm") and self.dim < 1:
            raise DomainError("dimension must be at least 1")
        if self.kind == "pnorm_bm" and not self.norm_p > 0:
            raise DomainError("p must be positive or infinity")
        if self.kind == "nn_walk" and not 0 <= self.prob <= 1:
            raise DomainError("walk probability must lie in [0, 1]")
        if self.kind == "renewal" and self.inter_arrival is None:
            raise DomainError("renewal process needs an inter-arrival law")
        if self.kind == "deterministic":
            function_bank(self.function, *self.fparams)
        object.__setattr__(self, "fparams", tuple(float(x) for x in self.fparams))

    # --- textual forms -----------------------------------------------------

    @classmethod
    def from_token(cls, token: str, horizon: float, step: float | None,
                   seed: int) -> ProcessSpec:
        """Build from a CLI process token such as ``drift:1.0`` or ``pnorm:3:inf``."""
        head, *rest = token.split(":")
        kw: dict = {}
        try:
            if head == "bm" and not rest:
                kind = "standard_bm"
            elif head == "drift" and len(rest) == 1:
                kind, kw["eta"] = "drifted_bm", float(rest[0])
            elif head in ("mbm", "bessel", "besselsde") and len(rest) == 1:
                kind = {"mbm": "multidim_bm", "bessel": "bessel_norm",
                        "besselsde": "bessel_sde"}[head]
                kw["dim"] = int(rest[0])
            elif head == "pnorm" and len(rest) == 2:
                kind, kw["dim"] = "pnorm_bm", int(rest[0])
                kw["norm_p"] = math.inf if rest[1] == "inf" else float(rest[1])
            elif head == "walk" and len(rest) == 1:
                kind, kw["prob"] = "nn_walk", float(rest[0])
            elif head == "renewal" and rest:
                kind = "renewal"
                kw["inter_arrival"] = DistributionSpec.parse(":".join(rest))
            elif head == "fn" and rest:
                kind, kw["function"] = "deterministic", rest[0]
                kw["fparams"] = tuple(float(x) for x in rest[1:])
            else:
                raise DomainError(f"unrecognised process token {token!r}")
        except ValueError:
            raise DomainError(f"bad parameters in process token {token!r}") from None
        if step is None:
            step = 1.0 if kind in ("nn_walk", "renewal") else 0.01
        return cls(kind=kind, horizon=float(horizon), step=float(step), seed=int(seed), **kw)

    @property
    def token(self) -> str:
        k = self.kind
        if k == "standard_bm":
            return "bm"
        if k == "drifted_bm":
            return f"drift:{self.eta!r}"
        if k in ("multidim_bm", "bessel_norm", "bessel_sde"):
            return {"multidim_bm": "mbm", "bessel_norm": "bessel",
                    "bessel_sde": "besselsde"}[k] + f":{self.dim}"
        if k == "pnorm_bm":
            p = "inf" if math.isinf(self.norm_p) else repr(self.norm_p)
            return f"pnorm:{self.dim}:{p}"
        if k == "nn_walk":
            return f"walk:{self.prob!r}"
        if k == "renewal":
            return f"renewal:{self.inter_arrival.token}"
        return ":".join(["fn", self.function, *(repr(x) for x in self.fparams)])

    def to_dict(self) -> dict:
        d = asdict(self)
        d["inter_arrival"] = self.inter_arrival.token if self.inter_arrival else None
        d["fparams"] = list(self.fparams)
        if math.isinf(d["norm_p"]):
            d["norm_p"] = "inf"
        d["seed"] = int(self.seed)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ProcessSpec:
        d = dict(d)
        if "process" in d:
            token = d.pop("process")
            spec = cls.from_token(token, d.pop("horizon"), d.pop("step", None), d.pop("seed"))
            if d:
                raise DomainError(f"unexpected spec keys {sorted(d)}")
            return spec
        if d.get("inter_arrival"):
            d["inter_arrival"] = DistributionSpec.parse(d["inter_arrival"])
        if d.get("norm_p") == "inf":
            d["norm_p"] = math.inf
        d["fparams"] = tuple(d.get("fparams") or ())
        try:
            return cls(**d)
        except TypeError as exc:
            raise DomainError(str(exc)) from None

    def to_config(self) -> str:
        """Flat ``key = value`` text; ``None`` fields are omitted."""
        lines = []
        for k, v in self.to_dict().items():
            if v is None or (k == "fparams" and not v):
                continue
            if k == "fparams":
                v = ",".join(repr(x) for x in v)
            lines.append(f"{k} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config(cls, text: str) -> ProcessSpec:
        raw: dict = {}
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line {n}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            raw[k] = v
        conv = {"horizon": float, "step": float, "seed": int, "eta": float,
                "dim": int, "prob": float}
        d: dict = {}
        try:
            for k, v in raw.items():
                if k in conv:
                    d[k] = conv[k](v)
                elif k == "norm_p":
                    d[k] = math.inf if v == "inf" else float(v)
                elif k == "fparams":
                    d[k] = tuple(float(x) for x in v.split(",") if x)
                else:
                    d[k] = v
        except ValueError as exc:
            raise DomainError(f"config value: {exc}") from None
        return cls.from_dict(d)

    @property
    def grid(self) -> TimeGrid:
        return _uniform_grid(self.horizon, self.step)


@functools.lru_cache(maxsize=8)
def _uniform_grid(horizon: float, step: float) -> TimeGrid:
    return TimeGrid.uniform(horizon, step)


# --- function bank ------------------------------------------------------------

@dataclass(frozen=True)
class BankEntry:
    id: str
    f: Callable[[np.ndarray], np.ndarray]
    psi: Callable[[np.ndarray], np.ndarray]
    limit: float | None  # None: f/psi has no limit
    description: str


def _t(t):
    return np.asarray(t, dtype=np.float64)


def function_bank(id: str, *params: float) -> BankEntry:
    """Deterministic ``(f, psi, limit of f/psi)`` triples.

    ``limit`` may be ``inf``; it is ``None`` for the oscillating entry, whose
    ratio has no limit and which is kept only for negative testing.
    """
    lin = _t
    if id == "drift_sine":
        (eta,) = params or (2.0,)
        return BankEntry(id, lambda t: eta * _t(t) + np.sqrt(_t(t)) * np.sin(_t(t)), lin,
                         eta, f"{eta}t + sqrt(t) sin t")
    if id == "sqrt_over_t":
        return BankEntry(id, lambda t: np.sqrt(_t(t)), lin, 0.0, "sqrt(t)")
    if id == "quadratic":
        return BankEntry(id, lambda t: _t(t) ** 2, lin, math.inf, "t^2")
    if id == "neg_drift_log":
        (a,) = params or (-3.0,)
        return BankEntry(id, lambda t: a * _t(t) + np.log1p(_t(t)), lin, a,
                         f"{a}t + log(1+t)")
    if id == "linear_sqrt":
        (a,) = params or (3.0,)
        return BankEntry(id, lambda t: a * _t(t) + np.sqrt(_t(t)), lin, a, f"{a}t + sqrt(t)")
    if id == "linear_sine":
        (a,) = params or (2.0,)
        return BankEntry(id, lambda t: a * _t(t) + np.sin(_t(t)), lin, a, f"{a}t + sin t")
    if id == "identity":
        return BankEntry(id, lambda t: _t(t).copy(), lin, 1.0, "t")
    if id == "oscillating":
        return BankEntry(id, lambda t: _t(t) * (2 + np.sin(np.log1p(_t(t)))), lin, None,
                         "t (2 + sin log(1+t))")
    raise DomainError(f"unknown bank function {id!r}")


BANK_IDS = ("drift_sine", "sqrt_over_t", "quadratic", "neg_drift_log", "linear_sqrt",
            "linear_sine", "identity", "oscillating")


def normalizer(name: str, grid: TimeGrid) -> SampledPath:
    """``psi`` on ``grid``: ``t``, ``sqrt`` or ``custom:<bank id>``."""
    t = grid.times
    if name == "t":
        vals = t.copy()
    elif name == "sqrt":
        vals = np.sqrt(t)
    elif name.startswith("custom:"):
        vals = function_bank(name.split(":", 1)[1]).f(t)
    else:
        raise DomainError(f"unknown normalizer {name!r}")
    return SampledPath(grid, vals)


# --- simulators ---------------------------------------------------------------

def _brownian(spec: ProcessSpec, replica: int, coord: int, grid: TimeGrid) -> np.ndarray:
    gen = rng.stream(spec.seed, rng.PATH, replica, coord)
    z = gen.standard_normal(len(grid) - 1)
    z *= math.sqrt(spec.step)
    out = np.empty(len(grid))
    out[0] = 0.0
    np.cumsum(z, out=out[1:])
    return out


def simulate_walk(spec: ProcessSpec, replica: int = 0) -> IntegerSequence:
    """Partial sums of +1 (probability ``prob``) / -1 steps; ``horizon`` steps."""
    if spec.kind != "nn_walk":
        raise DomainError("simulate_walk needs an nn_walk spec")
    n = int(round(spec.horizon / spec.step))
    u = rng.stream(spec.seed, rng.PATH, replica, 0).random(n)
    steps = np.where(u < spec.prob, 1, -1).astype(np.int64)
    x = np.concatenate(([0], np.cumsum(steps)))
    return IntegerSequence(x, nearest_neighbor=True)


def bessel_sde_path(spec: ProcessSpec, replica: int = 0) -> tuple[SampledPath, int]:
    """Euler-Maruyama for ``dX = dB + (n-1)/(2X) dt`` started at ``step``.

    Values are floored at ``step`` (the drift blows up at 0); the number of
    clamped steps is returned alongside the path.
    """
    grid = spec.grid
    h = spec.step
    dw = rng.stream(spec.seed, rng.PATH, replica, 0).standard_normal(len(grid) - 1)
    dw *= math.sqrt(h)
    c = 0.5 * (spec.dim - 1) * h
    floor = h
    x = floor
    out = [x]
    clamps = 0
    for d in dw.tolist():
        x = x + d + c / x
        if x < floor:
            x = floor
            clamps += 1
        out.append(x)
    return SampledPath(grid, np.array(out)), clamps


def simulate(spec: ProcessSpec, replica: int = 0):
    """Realize ``spec``; a list of paths for multidim_bm, otherwise one path."""
    kind = spec.kind
    if kind == "nn_walk":
        return connect_dots(simulate_walk(spec, replica))
    if kind == "renewal":
        return simulate_renewal(spec, replica).counting
    if kind == "bessel_sde":
        return bessel_sde_path(spec, replica)[0]
    grid = spec.grid
    if kind == "deterministic":
        return SampledPath(grid, function_bank(spec.function, *spec.fparams).f(grid.times))
    if kind == "standard_bm":
        return SampledPath(grid, _brownian(spec, replica, 0, grid))
    if kind == "drifted_bm":
        return SampledPath(grid, _brownian(spec, replica, 0, grid) + spec.eta * grid.times)
    if kind == "multidim_bm":
        return [SampledPath(grid, _brownian(spec, replica, i, grid)) for i in range(spec.dim)]
    # norm processes: accumulate coordinate by coordinate
    p = 2.0 if kind == "bessel_norm" else spec.norm_p
    acc = np.zeros(len(grid))
    for i in range(spec.dim):
        b = np.abs(_brownian(spec, replica, i, grid))
        if math.isinf(p):
            np.maximum(acc, b, out=acc)
        else:
            acc += b ** p
    if not math.isinf(p):
        acc = acc ** (1.0 / p)
    return SampledPath(grid, acc)


@dataclass(frozen=True, eq=False)
class RenewalRealization:
    arrivals: MonotonePath  # knots (n, T_n), T_0 = 0
    counting: SampledPath   # N_t, right-continuous step

    @property
    def n_arrivals(self) -> int:
        return len(self.arrivals.values) - 1


def simulate_renewal(spec: ProcessSpec, replica: int = 0) -> RenewalRealization:
    if spec.kind != "renewal":
        raise DomainError("simulate_renewal needs a renewal spec")
    law = spec.inter_arrival
    gen = rng.stream(spec.seed, rng.PATH, replica, 0)
    batch = int(spec.horizon / law.mean * 1.05) + 64
    chunks, total = [], 0.0
    while total <= spec.horizon:
        gaps = law.sample(gen, batch)
        chunks.append(gaps)
        total += float(gaps.sum())
    arrivals = np.cumsum(np.concatenate(chunks))
    arrivals = arrivals[arrivals <= spec.horizon]
    n = arrivals.size
    arr_path = SampledPath(TimeGrid(np.arange(n + 1, dtype=np.float64), 1.0 if n else None),
                           np.concatenate(([0.0], arrivals)))
    knots = np.unique(arrivals)
    if knots.size == 0 or knots[0] > 0:
        knots = np.concatenate(([0.0], knots))
    if knots[-1] < spec.horizon:
        knots = np.concatenate((knots, [spec.horizon]))
    counts = np.searchsorted(arrivals, knots, side="right").astype(np.float64)
    counting = SampledPath(TimeGrid(knots), counts, Interpolation.STEP)
    return RenewalRealization(MonotonePath(arr_path), counting)
