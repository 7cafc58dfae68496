"""Running supremum, infimum and range of sampled paths; explored-site counts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .paths import (DomainError, IntegerSequence, SampledPath, write_csv)


@dataclass(frozen=True, eq=False)
class ExtremaTriple:
    """Running sup, running inf and range, aligned on the source grid."""

    source: SampledPath
    sup_path: SampledPath
    inf_path: SampledPath
    range_path: SampledPath

    @property
    def horizon(self) -> float:
        return self.source.horizon


@dataclass(frozen=True, eq=False)
class DiscreteRangeTrace:
    counts: np.ndarray

    def __len__(self) -> int:
        return self.counts.size


def running_extrema(path: SampledPath) -> ExtremaTriple:
    """Extrema from time 0, computed on the knots.

    Linear segments attain their extremes at endpoints and step paths hold
    the left value, so knot extrema are exact for both interpolation modes.
    """
    v = path.values
    hi = np.maximum.accumulate(v)
    lo = np.minimum.accumulate(v)
    rng = hi - lo
    return ExtremaTriple(path, path.with_values(hi), path.with_values(lo),
                         path.with_values(rng))


def sup_process(path: SampledPath) -> SampledPath:
    return path.with_values(np.maximum.accumulate(path.values))


def merge_minmax(left: tuple[float, float], right: tuple[float, float]) -> tuple[float, float]:
    """Associative merge of ``(min, max)`` summaries for chunked scans."""
    return min(left[0], right[0]), max(left[1], right[1])


def chunked_extrema(values: np.ndarray, chunk: int) -> tuple[np.ndarray, np.ndarray]:
    """Running (sup, inf) arrays by scanning chunks and carrying the merged summary."""
    v = np.asarray(values, dtype=np.float64)
    hi = np.empty_like(v)
    lo = np.empty_like(v)
    carry = (np.inf, -np.inf)
    for start in range(0, v.size, chunk):
        seg = v[start:start + chunk]
        h = np.maximum.accumulate(seg)
        l = np.minimum.accumulate(seg)
        hi[start:start + chunk] = np.maximum(h, carry[1])
        lo[start:start + chunk] = np.minimum(l, carry[0])
        carry = merge_minmax(carry, (l[-1], h[-1]))
    return hi, lo


def discrete_range(x: IntegerSequence) -> DiscreteRangeTrace:
    """Number of distinct values among ``x_0..x_n`` for each ``n``."""
    v = x.values
    if v.size == 0:
        raise DomainError("empty sequence has no range")
    if x.nearest_neighbor:
        # explored set is an interval
        counts = np.maximum.accumulate(v) - np.minimum.accumulate(v) + 1
    else:
        _, first = np.unique(v, return_index=True)
        fresh = np.zeros(v.size, dtype=np.int64)
        fresh[first] = 1
        counts = np.cumsum(fresh)
    counts = counts.astype(np.int64)
    counts.setflags(write=False)
    return DiscreteRangeTrace(counts)


def write_extrema_csv(triple: ExtremaTriple, dest) -> None:
    cols = (triple.source.times, triple.source.values, triple.sup_path.values,
            triple.inf_path.values, triple.range_path.values)
    write_csv(zip(*cols), ("t", "value", "sup", "inf", "range"), dest)
