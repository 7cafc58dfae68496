"""Sampled real-valued functions of time.

A :class:`SampledPath` is a finite time grid with one value per knot plus an
interpolation rule. Every process, range, supremum and inverse in the package
is carried by one of these.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class Interpolation(str, Enum):
    LINEAR = "piecewise_linear"
    STEP = "step_right_continuous"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeGrid:
    times: np.ndarray
    uniform_step: float | None = None

    def __post_init__(self):
        t = np.array(self.times, dtype=np.float64)
        if t.ndim != 1 or t.size == 0:
            raise DomainError("time grid must be a non-empty 1-d sequence")
        if t[0] != 0.0:
            raise DomainError(f"time grid must start at 0, got {t[0]!r}")
        if not np.all(np.isfinite(t)):
            raise DomainError("time grid contains non-finite times")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            bad = int(np.argmin(np.diff(t) > 0)) + 1
            raise DomainError(f"time grid not strictly increasing at knot {bad}")
        if self.uniform_step is not None:
            h = float(self.uniform_step)
            if not h > 0:
                raise DomainError("uniform_step must be positive")
            expected = np.arange(t.size) * h
            if not np.all(np.abs(t - expected) <= np.spacing(np.maximum(expected, h))):
                raise DomainError("times do not match uniform_step")
            object.__setattr__(self, "uniform_step", h)
        object.__setattr__(self, "times", _frozen(t))

    @classmethod
    def uniform(cls, horizon: float, step: float) -> TimeGrid:
        """Grid ``0, step, 2*step, ...`` covering ``[0, horizon]``."""
        if not (step > 0 and horizon > 0):
            raise DomainError("horizon and step must be positive")
        n = int(np.ceil(horizon / step - 1e-9))
        return cls(np.arange(n + 1) * float(step), uniform_step=float(step))

    def __len__(self) -> int:
        return self.times.size

    @property
    def horizon(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True, eq=False)
class SampledPath:
    grid: TimeGrid
    values: np.ndarray
    interpolation: Interpolation = Interpolation.LINEAR

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.shape != self.grid.times.shape:
            raise DomainError(
                f"{v.size} values for a grid of {len(self.grid)} knots"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("path values must be finite")
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "interpolation", Interpolation(self.interpolation))

    @classmethod
    def from_arrays(cls, times, values, interpolation=Interpolation.LINEAR,
                    uniform_step=None) -> SampledPath:
        return cls(TimeGrid(times, uniform_step), values, interpolation)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def horizon(self) -> float:
        return self.grid.horizon

    def __len__(self) -> int:
        return self.values.size

    def with_values(self, values, interpolation=None) -> SampledPath:
        """Same grid, new values."""
        return SampledPath(self.grid, values, interpolation or self.interpolation)

    def restrict(self, horizon: float) -> SampledPath:
        """Prefix of the path with knots ``t <= horizon``."""
        k = int(np.searchsorted(self.times, horizon, side="right"))
        if k == 0:
            raise DomainError("restriction horizon precedes the first knot")
        step = self.grid.uniform_step
        return SampledPath(TimeGrid(self.times[:k], step), self.values[:k],
                           self.interpolation)

    def __call__(self, t):
        return evaluate(self, t)

    def equals(self, other: SampledPath) -> bool:
        return (self.interpolation == other.interpolation
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.values, other.values))


@dataclass(frozen=True, eq=False)
class IntegerSequence:
    values: np.ndarray
    nearest_neighbor: bool = False

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1:
            raise DomainError("integer sequence must be one-dimensional")
        if v.size and not np.issubdtype(v.dtype, np.integer):
            if not np.all(v == np.round(v)):
                raise DomainError("integer sequence contains non-integers")
        v = np.array(v, dtype=np.int64)
        if self.nearest_neighbor and v.size > 1:
            jumps = np.abs(np.diff(v))
            if np.any(jumps > 1):
                bad = int(np.argmax(jumps > 1))
                raise DomainError(
                    f"nearest-neighbor flag violated between n={bad} and n={bad + 1}"
                )
        object.__setattr__(self, "values", _frozen(v))

    def __len__(self) -> int:
        return self.values.size


def evaluate(path: SampledPath, t):
    """Value of ``path`` at time(s) ``t``.

    Linear interpolation is clipped to the segment's endpoint values so that
    the result is monotone along a segment even after rounding, and knots
    return their stored value exactly.
    """
    times, values = path.times, path.values
    tq = np.asarray(t, dtype=np.float64)
    if np.any(~(tq >= 0.0)) or np.any(tq > times[-1]):
        raise DomainError(f"evaluation time outside [0, {times[-1]!r}]")
    k = np.searchsorted(times, tq, side="right") - 1
    if path.interpolation is Interpolation.STEP or times.size == 1:
        out = values[k]
    else:
        k = np.minimum(k, times.size - 2)
        t0, t1 = times[k], times[k + 1]
        v0, v1 = values[k], values[k + 1]
        w = (tq - t0) / (t1 - t0)
        out = np.clip(v0 + w * (v1 - v0), np.minimum(v0, v1), np.maximum(v0, v1))
        out = np.where(tq == t1, v1, out)
    return float(out) if np.ndim(out) == 0 else out


def negate(path: SampledPath) -> SampledPath:
    return path.with_values(-path.values)


def connect_dots(x: IntegerSequence) -> SampledPath:
    """Piecewise-linear path through the points ``(n, x_n)``."""
    if len(x) == 0:
        raise DomainError("cannot connect the dots of an empty sequence")
    n = len(x)
    return SampledPath(TimeGrid(np.arange(n, dtype=np.float64), 1.0 if n > 1 else None),
                       x.values.astype(np.float64), Interpolation.LINEAR)


# --- CSV ------------------------------------------------------------------

def fmt(x: float) -> str:
    """17 significant digits; round-trips float64 exactly."""
    return format(float(x), ".17g")


def write_csv(rows: Iterable[Iterable[float]], header: Iterable[str],
              dest: str | Path | TextIO) -> None:
    own = isinstance(dest, (str, Path))
    fh = open(dest, "w", newline="") if own else dest
    try:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    finally:
        if own:
            fh.close()


def write_path_csv(path: SampledPath, dest) -> None:
    write_csv(zip(path.times, path.values), ("t", "value"), dest)


def path_to_csv_string(path: SampledPath) -> str:
    buf = io.StringIO()
    write_path_csv(path, buf)
    return buf.getvalue()


class CSVFormatError(DomainError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def read_path_csv(src: str | Path | TextIO,
                  interpolation=Interpolation.LINEAR) -> SampledPath:
    """Parse a ``t,value`` CSV. Errors carry the offending line number."""
    own = isinstance(src, (str, Path))
    fh = open(src, newline="") if own else src
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["t", "value"]:
            raise CSVFormatError(1, "expected header 't,value'")
        times, values = [], []
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) < 2:
                raise CSVFormatError(line, "expected two columns")
            try:
                t, v = float(row[0]), float(row[1])
            except ValueError:
                raise CSVFormatError(line, f"not a number: {row[:2]!r}") from None
            if not (np.isfinite(t) and np.isfinite(v)):
                raise CSVFormatError(line, "non-finite entry")
            if times and t <= times[-1]:
                raise CSVFormatError(line, "timestamps must be strictly increasing")
            if not times and t != 0.0:
                raise CSVFormatError(line, "first timestamp must be 0")
            times.append(t)
            values.append(v)
    finally:
        if own:
            fh.close()
    if not times:
        raise CSVFormatError(2, "no data rows")
    return SampledPath(TimeGrid(np.array(times)), np.array(values), interpolation)


def write_sequence_csv(x: IntegerSequence, dest) -> None:
    own = isinstance(dest, (str, Path))
    fh = open(dest, "w", newline="") if own else dest
    try:
        fh.write("n,value\n")
        for n, v in enumerate(x.values):
            fh.write(f"{n},{int(v)}\n")
    finally:
        if own:
            fh.close()
